//! Primitives of linear growth for left-invariant Rumin forms.
//!
//! A closed left-invariant `β` of weight `w` is sought as `d_cα` with `α` a
//! combination of `E₀^{h−1}` basis elements times horizontal coordinates,
//! so `α` is δ-homogeneous of degree `w` and grows linearly in the gauge.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::calculus::{CalculusError, RuminCalculus};
use crate::forms::{InvariantForm, Mask};
use crate::linalg::QMatrix;
use crate::poly::{Monomial, Poly};
use crate::polyform::{monomials_of_homogeneity, PolyForm};
use crate::rational::Rational;

pub fn linear_growth_primitive(calc: &RuminCalculus, beta: &InvariantForm) -> Result<PolyForm, CalculusError> {
    let h = beta.degree();
    if h == 0 || h > calc.dim() {
        return Err(CalculusError::InvalidDegree { degree: h });
    }
    let target = PolyForm::from_invariant(beta);
    if !calc.is_rumin(&target) {
        return Err(CalculusError::NotRumin { degree: h });
    }
    if !calc.dc(&target)?.is_zero() {
        return Err(CalculusError::NotClosed);
    }
    let mut sources = Vec::new();
    for form in calc.rumin_space(h - 1).basis() {
        for mono in monomials_of_homogeneity(calc.layers(), 1) {
            sources.push(PolyForm::from_product(&Poly::term(mono, Rational::from_integer(1.into())), form));
        }
    }
    let images = sources.iter().map(|s| calc.dc(s)).collect::<Result<Vec<_>, _>>()?;

    // coordinates of the image space, in sorted (mask, monomial) order
    let mut keys: BTreeMap<(Mask, Monomial), usize> = BTreeMap::new();
    for f in images.iter().chain(std::iter::once(&target)) {
        for (m, p) in f.terms() {
            for (mono, _) in p.terms() {
                let next = keys.len();
                keys.entry((*m, mono.clone())).or_insert(next);
            }
        }
    }
    let row_of: BTreeMap<(Mask, Monomial), usize> = keys.keys().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut a = QMatrix::zeros(row_of.len(), sources.len());
    for (c, f) in images.iter().enumerate() {
        for (m, p) in f.terms() {
            for (mono, v) in p.terms() {
                a[(row_of[&(*m, mono.clone())], c)] = v.clone();
            }
        }
    }
    let mut rhs = vec![Rational::zero(); row_of.len()];
    for (m, p) in target.terms() {
        for (mono, v) in p.terms() {
            rhs[row_of[&(*m, mono.clone())]] = v.clone();
        }
    }
    let x = a.solve(&rhs).ok_or(CalculusError::NoLinearGrowth { degree: h })?;
    let mut alpha = PolyForm::zero(calc.dim(), h - 1);
    for (s, c) in sources.iter().zip(&x) {
        if !c.is_zero() {
            alpha.add_assign(&s.scale(c));
        }
    }
    Ok(alpha)
}
