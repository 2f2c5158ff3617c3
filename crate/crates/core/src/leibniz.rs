//! Leibniz rule for `d_c` on Heisenberg groups.
//!
//! The wedge of Rumin forms is taken on the harmonic representatives and
//! projected back, `α·β = Π_E0(α∧β)`. The rule
//! `d_c(α·β) = d_cα·β + (−1)^h α·d_cβ` is guaranteed when `h ≥ m+1`,
//! `k ≥ m+1` or `h + k < m`; elsewhere the result depends on the chosen
//! representatives and may fail.

use crate::calculus::{CalculusError, RuminCalculus};
use crate::heisenberg::Contact;
use crate::polyform::PolyForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizReport {
    pub h: usize,
    pub k: usize,
    /// Whether the degrees fall in a regime where the rule is guaranteed.
    pub regime_guaranteed: bool,
    /// `d_c(α·β) − d_cα·β − (−1)^h α·d_cβ`.
    pub residual: PolyForm,
}

impl LeibnizReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn guaranteed_regime(m: usize, h: usize, k: usize) -> bool {
    h > m || k > m || h + k < m
}

pub fn leibniz_check(calc: &RuminCalculus, alpha: &PolyForm, beta: &PolyForm) -> Result<LeibnizReport, CalculusError> {
    let contact = Contact::new(calc.algebra())?;
    let (h, k) = (alpha.degree(), beta.degree());
    for f in [alpha, beta] {
        if !calc.is_rumin(f) {
            return Err(CalculusError::NotRumin { degree: f.degree() });
        }
    }
    let product = calc.pi_e0(&alpha.wedge(beta)?);
    let n = calc.dim();
    let residual = if h + k >= n {
        // d_c vanishes in top degree and every term has degree n + 1
        PolyForm::zero(n, h + k + 1)
    } else {
        let lhs = calc.dc(&product)?;
        let left = calc.pi_e0(&calc.dc(alpha)?.wedge(beta)?);
        let right = calc.pi_e0(&alpha.wedge(&calc.dc(beta)?)?);
        let right = if h % 2 == 0 { right } else { right.neg() };
        lhs.sub(&left).sub(&right)
    };
    Ok(LeibnizReport {
        h,
        k,
        regime_guaranteed: guaranteed_regime(contact.m, h, k),
        residual,
    })
}
