//! Coefficient rings used by the generic Lie-algebra routines.

use num_traits::Zero;

use crate::poly::Poly;
use crate::rational::{to_f64, Rational};

/// Commutative ring with a rational scalar action.
pub trait Scalar: Clone + std::fmt::Debug {
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
}

impl Scalar for Rational {
    fn nil() -> Self {
        <Rational as Zero>::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Scalar for f64 {
    fn nil() -> Self {
        0.0
    }
    fn is_nil(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * to_f64(c)
    }
}

impl Scalar for Poly {
    fn nil() -> Self {
        Poly::zero()
    }
    fn is_nil(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn scale(&self, c: &Rational) -> Self {
        Poly::scale(self, c)
    }
}
