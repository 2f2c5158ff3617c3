//! Rumin's differential on polynomial forms.
//!
//! With `D = d − d0` (which strictly raises form weight) the homotopy
//! `Q = Σ_k (−d0⁻¹D)^k d0⁻¹` is a finite sum, and
//! `Π_E = 1 − Q d − d Q` is the projector onto Rumin's subcomplex. Its
//! first-order truncation is `1 − d d0⁻¹ − d0⁻¹ d`. The Rumin differential
//! is `d_c = Π_E0 ∘ d ∘ Π_E` on `E₀`.

use thiserror::Error;

use crate::algebra::StratifiedLieAlgebra;
use crate::bch::{left_invariant_fields, VectorField};
use crate::forms::{Exterior, FormError, InvariantForm};
use crate::poly::Poly;
use crate::polyform::PolyForm;
use crate::rational::Rational;
use crate::rumin::RuminSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("form of degree {degree} is not fixed by the E0 projector")]
    NotRumin { degree: usize },
    #[error("homotopy series did not terminate after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("homogeneity bound {bound} is below the required {required}")]
    BoundTooSmall { bound: u32, required: u32 },
    #[error("the algebra is not a Heisenberg algebra")]
    NotHeisenberg,
    #[error("the form is not d_c-closed")]
    NotClosed,
    #[error("no primitive with linear growth exists in degree {degree}")]
    NoLinearGrowth { degree: usize },
    #[error("degree {degree} is out of range")]
    InvalidDegree { degree: usize },
    #[error(transparent)]
    Form(#[from] FormError),
}

type SparseCols = Vec<Vec<(usize, Rational)>>;

/// Cached operators of one algebra. Construction does all the exact linear
/// algebra; every application afterwards is read-only.
#[derive(Clone, Debug)]
pub struct RuminCalculus {
    g: StratifiedLieAlgebra,
    ext: Exterior,
    fields: Vec<VectorField>,
    d0_cols: Vec<SparseCols>,
    pinv_cols: Vec<SparseCols>,
    harmonic_cols: Vec<SparseCols>,
    spaces: Vec<RuminSpace>,
    profile_gradient: Option<Vec<Poly>>,
}

impl RuminCalculus {
    pub fn new(g: &StratifiedLieAlgebra) -> Self {
        let ext = Exterior::new(g);
        let n = ext.dim();
        let d0_cols = (0..=n).map(|k| ext.d0_matrix(k).sparse_columns()).collect();
        let pinv_cols = (0..=n).map(|k| ext.d0_pinv(k).sparse_columns()).collect();
        let harmonic_cols = (0..=n).map(|k| ext.harmonic_projector(k).sparse_columns()).collect();
        let spaces = (0..=n).map(|k| RuminSpace::new(&ext, k)).collect();
        RuminCalculus {
            g: g.clone(),
            fields: left_invariant_fields(g),
            ext,
            d0_cols,
            pinv_cols,
            harmonic_cols,
            spaces,
            profile_gradient: None,
        }
    }

    /// Reinterprets every coefficient as `Σ_l p_l(x) Φ_l(x)` with
    /// `Φ_l = g^{(l)}(P)` for a fixed profile `g` and polynomial `P`; the
    /// exponent of the extra variable `x_{n+1}` stores `l`. The derivative
    /// then obeys `X(p Φ_l) = (X p) Φ_l + p (X P) Φ_{l+1}`.
    pub fn with_profile(mut self, p: &Poly) -> Self {
        self.profile_gradient = Some(self.fields.iter().map(|x| x.apply(p)).collect());
        self
    }

    pub fn algebra(&self) -> &StratifiedLieAlgebra {
        &self.g
    }

    pub fn exterior(&self) -> &Exterior {
        &self.ext
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn layers(&self) -> &[u32] {
        self.g.layers()
    }

    pub fn dim(&self) -> usize {
        self.ext.dim()
    }

    pub fn rumin_space(&self, k: usize) -> &RuminSpace {
        &self.spaces[k]
    }

    /// `X_i f`, including the profile chain rule when one is set.
    pub fn derivative(&self, i: usize, f: &Poly) -> Poly {
        let mut out = self.fields[i].apply(f);
        if let Some(grad) = &self.profile_gradient {
            let slot = self.dim();
            for (mono, c) in f.terms() {
                let bumped = mono.shifted(slot, 1).expect("raising an exponent");
                out.add_assign(&grad[i].mul_monomial(&bumped, c));
            }
        }
        out
    }

    fn apply_cols(&self, cols: &[SparseCols], a: &PolyForm, target: usize) -> PolyForm {
        let src = self.ext.basis(a.degree());
        let tgt = self.ext.basis(target);
        let mut out = PolyForm::zero(self.dim(), target);
        for (m, f) in a.terms() {
            for (i, c) in &cols[a.degree()][src.index(*m)] {
                out.add_scaled_term(tgt.masks[*i], f, c);
            }
        }
        out
    }

    /// Coefficient-wise `d0`.
    pub fn d0(&self, a: &PolyForm) -> PolyForm {
        if a.degree() >= self.dim() {
            return PolyForm::zero(self.dim(), a.degree() + 1);
        }
        self.apply_cols(&self.d0_cols, a, a.degree() + 1)
    }

    /// Coefficient-wise `d0⁻¹`; `None` in degree 0.
    pub fn d0_inverse(&self, a: &PolyForm) -> Option<PolyForm> {
        if a.degree() == 0 {
            return None;
        }
        Some(self.apply_cols(&self.pinv_cols, a, a.degree() - 1))
    }

    /// Exterior derivative in the left-invariant coframe.
    pub fn de_rham_d(&self, a: &PolyForm) -> PolyForm {
        let n = self.dim();
        let mut out = self.d0(a);
        if a.degree() >= n {
            return out;
        }
        for (m, f) in a.terms() {
            for i in 0..n {
                if let Some(s) = crate::forms::wedge_sign(1 << i, *m) {
                    let xf = self.derivative(i, f);
                    if xf.is_zero() {
                        continue;
                    }
                    out.add_term(m | (1 << i), &if s > 0 { xf } else { xf.neg() });
                }
            }
        }
        out
    }

    /// Orthogonal projection onto `E₀` applied coefficient-wise.
    pub fn pi_e0(&self, a: &PolyForm) -> PolyForm {
        if a.degree() > self.dim() {
            return a.clone();
        }
        self.apply_cols(&self.harmonic_cols, a, a.degree())
    }

    /// Homotopy `Q = Σ_k (−d0⁻¹D)^k d0⁻¹`; `None` in degree 0.
    pub fn homotopy(&self, a: &PolyForm) -> Result<Option<PolyForm>, CalculusError> {
        let Some(mut t) = self.d0_inverse(a) else {
            return Ok(None);
        };
        let mut acc = t.clone();
        let limit = self.g.homogeneous_dim() as usize + 1;
        let mut iterations = 0;
        while !t.is_zero() {
            iterations += 1;
            if iterations > limit {
                return Err(CalculusError::NoConvergence { iterations });
            }
            let higher = self.de_rham_d(&t).sub(&self.d0(&t));
            t = self.d0_inverse(&higher).expect("positive degree").neg();
            acc.add_assign(&t);
        }
        Ok(Some(acc))
    }

    /// Projector `Π_E = 1 − Q d − d Q` onto Rumin's subcomplex.
    pub fn pi_e(&self, a: &PolyForm) -> Result<PolyForm, CalculusError> {
        let mut out = a.clone();
        if a.degree() < self.dim() {
            if let Some(qd) = self.homotopy(&self.de_rham_d(a))? {
                out = out.sub(&qd);
            }
        }
        if let Some(q) = self.homotopy(a)? {
            out = out.sub(&self.de_rham_d(&q));
        }
        Ok(out)
    }

    pub fn is_rumin(&self, a: &PolyForm) -> bool {
        a.degree() <= self.dim() && self.pi_e0(a) == *a
    }

    /// Rumin differential `Π_E0 d Π_E` on forms fixed by `Π_E0`. In top
    /// degree the result is the zero form of degree `n + 1`.
    pub fn dc(&self, a: &PolyForm) -> Result<PolyForm, CalculusError> {
        if a.degree() > self.dim() {
            return Err(CalculusError::InvalidDegree { degree: a.degree() });
        }
        if !self.is_rumin(a) {
            return Err(CalculusError::NotRumin { degree: a.degree() });
        }
        if a.degree() == self.dim() {
            return Ok(PolyForm::zero(self.dim(), a.degree() + 1));
        }
        let lifted = self.pi_e(a)?;
        Ok(self.pi_e0(&self.de_rham_d(&lifted)))
    }

    /// Pullback by `δ_λ`.
    pub fn dilate(&self, a: &PolyForm, lambda: &Rational) -> PolyForm {
        a.dilate(self.layers(), lambda)
    }

    /// Products of `E₀ᵏ` basis elements with every monomial of coefficient
    /// homogeneity exactly `h`, tagged with (basis index, form weight).
    pub fn rumin_monomials(&self, k: usize, h: u32) -> Vec<(usize, u32, PolyForm)> {
        let monos = crate::polyform::monomials_of_homogeneity(self.layers(), h);
        let space = &self.spaces[k];
        let mut out = Vec::new();
        for (b, (form, w)) in space.basis().iter().zip(space.basis_weights()).enumerate() {
            for mono in &monos {
                let p = Poly::term(mono.clone(), Rational::from_integer(1.into()));
                out.push((b, *w, PolyForm::from_product(&p, form)));
            }
        }
        out
    }

    /// Invariant `E₀` check for constant-coefficient forms.
    pub fn invariant_is_rumin(&self, a: &InvariantForm) -> bool {
        self.is_rumin(&PolyForm::from_invariant(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupFamily;
    use crate::rational::rat;

    fn h3() -> RuminCalculus {
        RuminCalculus::new(&StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(1)))
    }

    #[test]
    fn exterior_derivative_of_coordinates() {
        let c = h3();
        let dx1 = c.de_rham_d(&PolyForm::function(3, Poly::var(0)));
        assert_eq!(dx1, PolyForm::term(3, 0b001, Poly::one()));
        let dx3 = c.de_rham_d(&PolyForm::function(3, Poly::var(2)));
        let mut expect = PolyForm::term(3, 0b001, Poly::var(1).scale(&rat(-1, 2)));
        expect.add_term(0b010, &Poly::var(0).scale(&rat(1, 2)));
        expect.add_term(0b100, &Poly::one());
        assert_eq!(dx3, expect);
        assert!(c.de_rham_d(&dx3).is_zero());
    }

    #[test]
    fn contact_direction_is_not_rumin() {
        let c = h3();
        let a = PolyForm::term(3, 0b100, Poly::var(0).add(&Poly::var(2)));
        assert!(c.pi_e0(&a).is_zero());
        assert_eq!(c.dc(&a), Err(CalculusError::NotRumin { degree: 1 }));
    }

    #[test]
    fn dc_of_coordinate_function() {
        let c = h3();
        let out = c.dc(&PolyForm::function(3, Poly::var(0))).unwrap();
        assert_eq!(out, PolyForm::term(3, 0b001, Poly::one()));
    }

    #[test]
    fn second_order_operator_in_middle_degree() {
        // x3 θ¹ has homogeneity 3 and lands on a constant multiple of τ∧θ¹
        let c = h3();
        let out = c.dc(&PolyForm::term(3, 0b001, Poly::var(2))).unwrap();
        assert_eq!(out, PolyForm::term(3, 0b101, Poly::constant(rat(-3, 2))));
        assert!(c.dc(&PolyForm::term(3, 0b001, Poly::var(1))).unwrap().is_zero());
    }
}
