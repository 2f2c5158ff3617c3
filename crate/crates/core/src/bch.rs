//! Group law in exponential coordinates of the first kind and the
//! left-invariant frame it induces.
//!
//! The product is `log(exp X · exp Y)`, expanded as a noncommutative series
//! truncated at the nilpotency step and converted to right-nested brackets
//! (Dynkin–Specht–Wever). The truncation is exact for nilpotent algebras.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{AlgebraError, StratifiedLieAlgebra};
use crate::poly::Poly;
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Word over the alphabet {X = 0, Y = 1}.
type Word = Vec<u8>;

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k)))
}

fn series_mul(a: &BTreeMap<Word, Rational>, b: &BTreeMap<Word, Rational>, max_len: usize) -> BTreeMap<Word, Rational> {
    let mut out: BTreeMap<Word, Rational> = BTreeMap::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            if wa.len() + wb.len() > max_len {
                continue;
            }
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            *out.entry(w).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Lie-series terms of `log(e^X e^Y)` through word length `max_len`, each
/// already divided by its length so that `Σ c_w [w]` is the BCH element.
pub fn bch_words(max_len: usize) -> Vec<(Vec<u8>, Rational)> {
    // Z = e^X e^Y - 1
    let mut z: BTreeMap<Word, Rational> = BTreeMap::new();
    for a in 0..=max_len {
        for b in 0..=(max_len - a) {
            if a + b == 0 {
                continue;
            }
            let mut w = vec![0u8; a];
            w.extend(std::iter::repeat_n(1u8, b));
            z.insert(w, (factorial(a) * factorial(b)).recip());
        }
    }
    let mut log: BTreeMap<Word, Rational> = BTreeMap::new();
    let mut power = z.clone();
    for k in 1..=max_len {
        let sign = if k % 2 == 1 { Rational::one() } else { -Rational::one() };
        let c = sign / Rational::from_integer(BigInt::from(k));
        for (w, v) in &power {
            *log.entry(w.clone()).or_insert_with(Rational::zero) += v * &c;
        }
        power = series_mul(&power, &z, max_len);
    }
    log.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| {
            let len = Rational::from_integer(BigInt::from(w.len()));
            (w, c / len)
        })
        .collect()
}

fn right_nested<S: Scalar>(g: &StratifiedLieAlgebra, word: &[u8], x: &[S], y: &[S]) -> Vec<S> {
    let pick = |l: u8| if l == 0 { x } else { y };
    let mut acc: Vec<S> = pick(*word.last().expect("nonempty word")).to_vec();
    for &l in word[..word.len() - 1].iter().rev() {
        acc = g.bracket(pick(l), &acc);
        if acc.iter().all(Scalar::is_nil) {
            break;
        }
    }
    acc
}

fn bch_filtered<S: Scalar>(g: &StratifiedLieAlgebra, x: &[S], y: &[S], keep: impl Fn(&[u8]) -> bool) -> Vec<S> {
    let mut out = vec![S::nil(); g.dim()];
    for (word, c) in bch_words(g.step()) {
        if !keep(&word) {
            continue;
        }
        let term = right_nested(g, &word, x, y);
        for (o, t) in out.iter_mut().zip(&term) {
            if !t.is_nil() {
                *o = o.add(&t.scale(&c));
            }
        }
    }
    out
}

/// Group product `x·y` in exponential coordinates, over any coefficient ring.
pub fn bch_multiply<S: Scalar>(g: &StratifiedLieAlgebra, x: &[S], y: &[S]) -> Result<Vec<S>, AlgebraError> {
    g.check_len(x.len())?;
    g.check_len(y.len())?;
    Ok(bch_filtered(g, x, y, |_| true))
}

/// Group inverse; in exponential coordinates it is negation.
pub fn group_inverse(x: &[Rational]) -> Vec<Rational> {
    x.iter().map(|v| -v.clone()).collect()
}

/// Derivation `Σ_k a_k(x) ∂_k` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn new(coeffs: Vec<Poly>) -> Self {
        VectorField { coeffs }
    }

    /// Coefficient of `∂_k`.
    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let df = f.partial(k);
            if !df.is_zero() {
                out.add_assign(&a.mul(&df));
            }
        }
        out
    }

    /// Commutator of derivations, `[X, Y]_k = X(Y_k) - Y(X_k)`.
    pub fn commutator(&self, other: &VectorField) -> VectorField {
        VectorField {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(xk, yk)| self.apply(yk).sub(&other.apply(xk)))
                .collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &VectorField, c: &Rational) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_scaled(b, c);
        }
    }
}

/// Left-invariant fields `X_i = d/dt (p · exp(t e_i))|_{t=0}`. The first
/// `dim 𝔤_1` of them span the horizontal distribution.
pub fn left_invariant_fields(g: &StratifiedLieAlgebra) -> Vec<VectorField> {
    let n = g.dim();
    let x: Vec<Poly> = (0..n).map(Poly::var).collect();
    (0..n)
        .map(|i| {
            let mut y = vec![Poly::zero(); n];
            y[i] = Poly::var(n);
            let prod = bch_filtered(g, &x, &y, |w| w.iter().filter(|&&l| l == 1).count() == 1);
            VectorField::new(prod.iter().map(|p| p.coefficient_in(n, 1)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupFamily;
    use crate::rational::{int, rat};

    fn h3() -> StratifiedLieAlgebra {
        StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(1))
    }

    #[test]
    fn low_order_words() {
        let words = bch_words(2);
        let get = |w: &[u8]| words.iter().find(|(v, _)| v == w).map(|(_, c)| c.clone());
        assert_eq!(get(&[0]), Some(int(1)));
        assert_eq!(get(&[1]), Some(int(1)));
        // [X,Y]/2 arises from XY/2 - YX/2, each divided by the word length 2
        assert_eq!(get(&[0, 1]), Some(rat(1, 4)));
        assert_eq!(get(&[1, 0]), Some(rat(-1, 4)));
    }

    #[test]
    fn abelian_product_is_sum() {
        let g = StratifiedLieAlgebra::builtin(GroupFamily::Abelian(3));
        let x = vec![int(1), rat(1, 2), int(-3)];
        let y = vec![int(2), int(2), int(2)];
        assert_eq!(bch_multiply(&g, &x, &y).unwrap(), vec![int(3), rat(5, 2), int(-1)]);
    }

    #[test]
    fn heisenberg_product() {
        let p = bch_multiply(&h3(), &[int(1), int(0), int(0)], &[int(0), int(1), int(0)]).unwrap();
        assert_eq!(p, vec![int(1), int(1), rat(1, 2)]);
    }

    #[test]
    fn heisenberg_fields() {
        let f = left_invariant_fields(&h3());
        let half = |i: usize, s: i64| Poly::var(i).scale(&rat(s, 2));
        assert_eq!(f[0].coeffs(), &[Poly::one(), Poly::zero(), half(1, -1)]);
        assert_eq!(f[1].coeffs(), &[Poly::zero(), Poly::one(), half(0, 1)]);
        assert_eq!(f[2].coeffs(), &[Poly::zero(), Poly::zero(), Poly::one()]);
    }

    #[test]
    fn abelian_fields_are_partials() {
        let g = StratifiedLieAlgebra::builtin(GroupFamily::Abelian(3));
        for (i, f) in left_invariant_fields(&g).iter().enumerate() {
            for k in 0..3 {
                let expect = if i == k { Poly::one() } else { Poly::zero() };
                assert_eq!(f.coeff(k), &expect);
            }
        }
    }
}
