//! Exterior forms with polynomial coefficients in exponential coordinates.
//!
//! A term `x^α θ^J` carries two gradings: the form weight `w(θ^J)` and the
//! coefficient homogeneity `h(x^α) = Σ α_i layer(i)`. Pullback by the
//! dilation `δ_λ` multiplies it by `λ^{w+h}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::forms::{mask_degree, mask_indices, mask_weight, wedge_sign, FormError, InvariantForm, Mask};
use crate::poly::{Monomial, Poly};
use crate::rational::{format_rational, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Mask, Poly>,
}

impl PolyForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        PolyForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-zero form given by a polynomial.
    pub fn function(dim: usize, f: Poly) -> Self {
        Self::term(dim, 0, f)
    }

    pub fn term(dim: usize, mask: Mask, f: Poly) -> Self {
        let mut out = Self::zero(dim, mask_degree(mask));
        out.add_term(mask, &f);
        out
    }

    pub fn from_invariant(a: &InvariantForm) -> Self {
        let mut out = Self::zero(a.dim(), a.degree());
        for (m, c) in a.terms() {
            out.add_term(*m, &Poly::constant(c.clone()));
        }
        out
    }

    /// `f · a` for a polynomial `f` and an invariant form `a`.
    pub fn from_product(f: &Poly, a: &InvariantForm) -> Self {
        let mut out = Self::zero(a.dim(), a.degree());
        for (m, c) in a.terms() {
            out.add_term(*m, &f.scale(c));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mask, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Mask) -> Poly {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Mask, f: &Poly) {
        debug_assert_eq!(mask_degree(m), self.degree);
        if f.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        e.add_assign(f);
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled_term(&mut self, m: Mask, f: &Poly, c: &Rational) {
        if f.is_zero() || c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        e.add_scaled(f, c);
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &PolyForm) {
        debug_assert_eq!(self.degree, other.degree);
        for (m, f) in &other.terms {
            self.add_term(*m, f);
        }
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyForm {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, f) in &self.terms {
            out.add_term(*m, &f.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, p: &Poly) -> PolyForm {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, f) in &self.terms {
            out.add_term(*m, &f.mul(p));
        }
        out
    }

    pub fn wedge(&self, other: &PolyForm) -> Result<PolyForm, FormError> {
        if self.degree + other.degree > self.dim {
            return Err(FormError::DegreeOverflow {
                left: self.degree,
                right: other.degree,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (ma, fa) in &self.terms {
            for (mb, fb) in &other.terms {
                if let Some(s) = wedge_sign(*ma, *mb) {
                    let p = fa.mul(fb);
                    out.add_term(ma | mb, &if s > 0 { p } else { p.neg() });
                }
            }
        }
        Ok(out)
    }

    /// Keeps only the terms for which `keep(mask, monomial)` holds.
    pub fn filter(&self, keep: impl Fn(Mask, &Monomial) -> bool) -> PolyForm {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, f) in &self.terms {
            let mut g = f.clone();
            g.retain(|mono| keep(*m, mono));
            out.add_term(*m, &g);
        }
        out
    }

    /// Components of pure form weight.
    pub fn weight_components(&self, layers: &[u32]) -> BTreeMap<u32, PolyForm> {
        let mut out: BTreeMap<u32, PolyForm> = BTreeMap::new();
        for (m, f) in &self.terms {
            out.entry(mask_weight(layers, *m))
                .or_insert_with(|| Self::zero(self.dim, self.degree))
                .add_term(*m, f);
        }
        out
    }

    /// Form weight when all terms share it.
    pub fn pure_weight(&self, layers: &[u32]) -> Option<u32> {
        let ws: BTreeSet<u32> = self.terms.keys().map(|m| mask_weight(layers, *m)).collect();
        if ws.len() == 1 {
            ws.into_iter().next()
        } else {
            None
        }
    }

    /// All `(form weight, coefficient homogeneity)` pairs present.
    pub fn bidegrees(&self, layers: &[u32]) -> BTreeSet<(u32, u32)> {
        let mut out = BTreeSet::new();
        for (m, f) in &self.terms {
            let w = mask_weight(layers, *m);
            for (mono, _) in f.terms() {
                out.insert((w, mono.weighted_degree(layers)));
            }
        }
        out
    }

    /// Pullback `δ_λ^*`: each term is multiplied by `λ^{w+h}`.
    pub fn dilate(&self, layers: &[u32], lambda: &Rational) -> PolyForm {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, f) in &self.terms {
            let w = mask_weight(layers, *m) as i32;
            out.add_term(*m, &f.dilate(layers, lambda).scale(&crate::rational::pow(lambda, w)));
        }
        out
    }

    /// The constant-coefficient part, when the form has no `x`-dependence.
    pub fn as_invariant(&self) -> Option<InvariantForm> {
        let mut out = InvariantForm::zero(self.dim, self.degree);
        for (m, f) in &self.terms {
            out.add_term(*m, f.as_constant()?);
        }
        Some(out)
    }
}

impl fmt::Display for PolyForm {
    /// Canonical text in the form language, e.g. `x2*t[1] - 1/2*t[3]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<(Vec<usize>, &Monomial, &Rational)> = Vec::new();
        for (m, p) in &self.terms {
            for (mono, c) in p.terms() {
                pieces.push((mask_indices(*m), mono, c));
            }
        }
        if pieces.is_empty() {
            return write!(f, "0");
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        for (i, (idx, mono, c)) in pieces.iter().enumerate() {
            let neg = **c < Rational::zero();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() {
                factors.push(format_rational(&abs));
            }
            for (v, &e) in mono.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", v + 1)),
                    _ => factors.push(format!("x{}^{}", v + 1, e)),
                }
            }
            let wedge: Vec<String> = idx.iter().map(|j| format!("t[{}]", j + 1)).collect();
            if !wedge.is_empty() {
                factors.push(wedge.join("^"));
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyForm(deg {}: {})", self.degree, self)
    }
}

/// Monomials `x^α` with `Σ α_i layer(i) = h`, in increasing order.
pub fn monomials_of_homogeneity(layers: &[u32], h: u32) -> Vec<Monomial> {
    fn rec(layers: &[u32], i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == layers.len() {
            if left == 0 {
                out.push(Monomial::new(cur.clone()));
            }
            return;
        }
        let w = layers[i];
        let mut e = 0;
        while e * w <= left {
            cur.push(e as u16);
            rec(layers, i + 1, left - e * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(layers, 0, h, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn bigrading_and_dilation() {
        let layers = [1, 1, 2];
        let a = PolyForm::term(3, 0b001, Poly::var(2));
        assert_eq!(a.bidegrees(&layers), BTreeSet::from([(1, 2)]));
        assert_eq!(a.dilate(&layers, &int(2)), a.scale(&int(8)));
    }

    #[test]
    fn canonical_text() {
        let mut a = PolyForm::term(3, 0b001, Poly::var(1));
        a.add_term(0b100, &Poly::constant(rat(-1, 2)));
        assert_eq!(a.to_string(), "x2*t[1] - 1/2*t[3]");
        assert_eq!(PolyForm::function(3, Poly::one()).to_string(), "1");
    }

    #[test]
    fn homogeneous_monomials() {
        assert_eq!(monomials_of_homogeneity(&[1, 1, 2], 2).len(), 4);
        assert_eq!(monomials_of_homogeneity(&[1, 1, 2], 0), vec![Monomial::one()]);
    }
}
