//! Contact-geometric description of the Rumin complex on Heisenberg groups.
//!
//! With contact form `τ = θ^{2m+1}`, the ideal `ℐ•` is generated by `τ` and
//! `dτ` and `𝒥• = {β : β∧τ = β∧dτ = 0}` is its annihilator. Rumin's complex
//! is `Ω•/ℐ•` up to degree `m` and `𝒥•` from degree `m+1`, joined by a
//! second-order operator in the middle.

use crate::algebra::StratifiedLieAlgebra;
use crate::calculus::{CalculusError, RuminCalculus};
use crate::forms::{masks_of_degree, Exterior, InvariantForm, Mask};
use crate::linalg::QMatrix;
use crate::polyform::PolyForm;
use crate::rational::{one, Rational};
use crate::rumin::RuminSpace;

/// Contact data of a Heisenberg algebra of dimension `2m+1`.
#[derive(Clone, Debug)]
pub struct Contact {
    pub m: usize,
    pub tau: InvariantForm,
    pub dtau: InvariantForm,
}

impl Contact {
    /// Recognizes layers `[2m, 1]` with a nondegenerate `dτ`.
    pub fn new(g: &StratifiedLieAlgebra) -> Result<Self, CalculusError> {
        let dims = g.layer_dims();
        if dims.len() != 2 || dims[1] != 1 || !dims[0].is_multiple_of(2) {
            return Err(CalculusError::NotHeisenberg);
        }
        let m = dims[0] / 2;
        let n = g.dim();
        let tau = InvariantForm::covector(n, n - 1);
        let dtau = crate::forms::d0(g, &tau);
        let mut power = InvariantForm::one(n);
        for _ in 0..m {
            power = power.wedge(&dtau)?;
        }
        if power.is_zero() {
            return Err(CalculusError::NotHeisenberg);
        }
        Ok(Contact { m, tau, dtau })
    }

    fn tau_mask(&self) -> Mask {
        1 << (self.tau.dim() - 1)
    }

    /// Spanning set of `ℐ^h`.
    fn ideal_span(&self, h: usize) -> Vec<InvariantForm> {
        let n = self.tau.dim();
        let mut out = Vec::new();
        if h >= 1 {
            for mask in masks_of_degree(n, h - 1) {
                out.push(self.tau.wedge(&InvariantForm::monomial(n, mask, one())).expect("degree fits"));
            }
        }
        if h >= 2 {
            for mask in masks_of_degree(n, h - 2) {
                out.push(self.dtau.wedge(&InvariantForm::monomial(n, mask, one())).expect("degree fits"));
            }
        }
        out
    }

    /// Basis of `𝒥^h`.
    fn annihilator_basis(&self, ext: &Exterior, h: usize) -> Vec<InvariantForm> {
        let n = ext.dim();
        let basis = ext.basis(h);
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (factor, deg) in [(&self.tau, 1), (&self.dtau, 2)] {
            if h + deg > n {
                continue;
            }
            let tgt = ext.basis(h + deg);
            let mut block = vec![vec![crate::rational::zero(); basis.len()]; tgt.len()];
            for (c, &mask) in basis.masks.iter().enumerate() {
                let img = InvariantForm::monomial(n, mask, one()).wedge(factor).expect("degree fits");
                for (tm, v) in img.terms() {
                    block[tgt.index(*tm)][c] = v.clone();
                }
            }
            rows.extend(block);
        }
        if rows.is_empty() {
            return basis.masks.iter().map(|&m| InvariantForm::monomial(n, m, one())).collect();
        }
        QMatrix::from_rows(rows)
            .nullspace()
            .iter()
            .map(|v| InvariantForm::from_vector(n, basis, v))
            .collect()
    }
}

fn span_rank(ext: &Exterior, forms: &[InvariantForm], h: usize) -> usize {
    if forms.is_empty() {
        return 0;
    }
    QMatrix::from_rows(forms.iter().map(|f| f.to_vector(ext.basis(h))).collect()).rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDims {
    pub degree: usize,
    pub exterior: usize,
    pub ideal: usize,
    pub annihilator: usize,
    pub quotient: usize,
    pub rumin: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergIdealReport {
    pub m: usize,
    pub degrees: Vec<IdealDims>,
}

impl HeisenbergIdealReport {
    /// `Ω^h/ℐ^h ≅ E₀^h` for `h ≤ m` and `𝒥^h = E₀^h` for `h ≥ m+1`, with the
    /// other space trivial.
    pub fn consistent(&self) -> bool {
        self.degrees.iter().all(|d| {
            if d.degree <= self.m {
                d.quotient == d.rumin && d.annihilator == 0
            } else {
                d.annihilator == d.rumin && d.quotient == 0
            }
        })
    }
}

pub fn heisenberg_ideal_dims(g: &StratifiedLieAlgebra) -> Result<HeisenbergIdealReport, CalculusError> {
    let contact = Contact::new(g)?;
    let ext = Exterior::new(g);
    let degrees = (0..=ext.dim())
        .map(|h| {
            let exterior = ext.basis(h).len();
            let ideal = span_rank(&ext, &contact.ideal_span(h), h);
            IdealDims {
                degree: h,
                exterior,
                ideal,
                annihilator: contact.annihilator_basis(&ext, h).len(),
                quotient: exterior - ideal,
                rumin: RuminSpace::new(&ext, h).dim(),
            }
        })
        .collect();
    Ok(HeisenbergIdealReport { m: contact.m, degrees })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorReport {
    pub pairs_checked: usize,
    /// `(deg α, deg β)` of pairs with `α∧β ≠ 0`.
    pub failures: Vec<(usize, usize)>,
}

impl AnnihilatorReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive check that `α∧β = 0` for `α ∈ 𝒥^a`, `β ∈ ℐ^b`, `a + b ≤ n`.
pub fn annihilator_check(g: &StratifiedLieAlgebra) -> Result<AnnihilatorReport, CalculusError> {
    let contact = Contact::new(g)?;
    let ext = Exterior::new(g);
    let n = ext.dim();
    let mut report = AnnihilatorReport {
        pairs_checked: 0,
        failures: Vec::new(),
    };
    for a in 0..=n {
        let jb = contact.annihilator_basis(&ext, a);
        for b in 0..=(n - a) {
            for beta in contact.ideal_span(b) {
                for alpha in &jb {
                    report.pairs_checked += 1;
                    if !alpha.wedge(&beta)?.is_zero() {
                        report.failures.push((a, b));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `d_c` built from the ideals: `dα mod ℐ` below the middle degree, plain
/// `d` above it, and `d(α + τ∧γ)` in the middle degree `m` where `γ` is
/// chosen so that the lift has no purely horizontal part.
pub fn ideal_dc(calc: &RuminCalculus, contact: &Contact, a: &PolyForm) -> Result<PolyForm, CalculusError> {
    let h = a.degree();
    if !calc.is_rumin(a) {
        return Err(CalculusError::NotRumin { degree: h });
    }
    let da = calc.de_rham_d(a);
    if h < contact.m {
        // E₀ is the orthogonal complement of ℐ in these degrees
        return Ok(calc.pi_e0(&da));
    }
    if h > contact.m {
        return Ok(da);
    }
    let n = calc.dim();
    let tau_bit = contact.tau_mask();
    let src: Vec<Mask> = masks_of_degree(n - 1, h - 1);
    let tgt: Vec<Mask> = masks_of_degree(n - 1, h + 1);
    let mut l = QMatrix::zeros(tgt.len(), src.len());
    for (c, &mask) in src.iter().enumerate() {
        let img = contact.dtau.wedge(&InvariantForm::monomial(n, mask, one()))?;
        for (tm, v) in img.terms() {
            let r = tgt.iter().position(|t| t == tm).expect("horizontal target");
            l[(r, c)] = v.clone();
        }
    }
    let l_inv = l.inverse().ok_or(CalculusError::NotHeisenberg)?;
    let mut gamma = PolyForm::zero(n, h - 1);
    for (tm, f) in da.terms() {
        if tm & tau_bit != 0 {
            continue;
        }
        let r = tgt.iter().position(|t| t == tm).expect("horizontal target");
        for (c, &mask) in src.iter().enumerate() {
            gamma.add_scaled_term(mask, f, &-l_inv[(c, r)].clone());
        }
    }
    let lift = a.add(&PolyForm::from_invariant(&contact.tau).wedge(&gamma)?);
    Ok(calc.de_rham_d(&lift))
}
