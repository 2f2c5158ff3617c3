//! Left-invariant exterior forms.
//!
//! Covectors `θ^1..θ^n` are dual to the left-invariant frame and declared
//! orthonormal; `θ^1∧…∧θ^n` is the positive orientation. A monomial `θ^J`
//! is stored as a bitmask of `J` and has weight `Σ_{j∈J} layer(j)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::StratifiedLieAlgebra;
use crate::linalg::QMatrix;
use crate::rational::{format_rational, Rational};

pub type Mask = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("degree {left} + {right} exceeds the dimension {dim}")]
    DegreeOverflow { left: usize, right: usize, dim: usize },
    #[error("forms of degree {expected} and {got} cannot be combined")]
    DegreeMismatch { expected: usize, got: usize },
}

pub fn mask_degree(m: Mask) -> usize {
    m.count_ones() as usize
}

/// Indices of the set bits, increasing.
pub fn mask_indices(m: Mask) -> Vec<usize> {
    (0..32).filter(|i| m & (1 << i) != 0).collect()
}

pub fn mask_from_indices(idx: &[usize]) -> Mask {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

/// Sign of `θ^A ∧ θ^B` relative to `θ^{A∪B}`, or `None` when they overlap.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    for j in mask_indices(b) {
        inversions += (a >> (j + 1)).count_ones();
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

pub fn mask_weight(layers: &[u32], m: Mask) -> u32 {
    mask_indices(m).iter().map(|&i| layers[i]).sum()
}

/// All masks of the given degree, in lexicographic order of index tuples.
pub fn masks_of_degree(n: usize, k: usize) -> Vec<Mask> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Mask>) {
        if cur.len() == k {
            out.push(mask_from_indices(cur));
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Constant-coefficient exterior form.
#[derive(Clone, PartialEq, Eq)]
pub struct InvariantForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Mask, Rational>,
}

impl InvariantForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        InvariantForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant function 1.
    pub fn one(dim: usize) -> Self {
        Self::monomial(dim, 0, Rational::one())
    }

    pub fn monomial(dim: usize, mask: Mask, c: Rational) -> Self {
        let mut f = Self::zero(dim, mask_degree(mask));
        f.add_term(mask, c);
        f
    }

    /// `θ^{i}` for a zero-based index.
    pub fn covector(dim: usize, i: usize) -> Self {
        Self::monomial(dim, 1 << i, Rational::one())
    }

    /// `θ^1 ∧ … ∧ θ^n`.
    pub fn volume(dim: usize) -> Self {
        Self::monomial(dim, (1u32 << dim) - 1, Rational::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mask, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: Mask) -> Rational {
        self.coeffs.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Mask, c: Rational) {
        debug_assert_eq!(mask_degree(m), self.degree);
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn add(&self, other: &InvariantForm) -> Result<InvariantForm, FormError> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> InvariantForm {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, v) in &self.coeffs {
            out.add_term(*m, v * c);
        }
        out
    }

    fn check_degree(&self, other: &InvariantForm) -> Result<(), FormError> {
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn wedge(&self, other: &InvariantForm) -> Result<InvariantForm, FormError> {
        if self.degree + other.degree > self.dim {
            return Err(FormError::DegreeOverflow {
                left: self.degree,
                right: other.degree,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                if let Some(s) = wedge_sign(*ma, *mb) {
                    let v = ca * cb;
                    out.add_term(ma | mb, if s > 0 { v } else { -v });
                }
            }
        }
        Ok(out)
    }

    /// Euclidean inner product for the orthonormal monomial basis.
    pub fn inner(&self, other: &InvariantForm) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.coeffs {
            if let Some(d) = other.coeffs.get(m) {
                acc += c * d;
            }
        }
        acc
    }

    /// Splits into pure-weight components.
    pub fn weight_components(&self, layers: &[u32]) -> BTreeMap<u32, InvariantForm> {
        let mut out: BTreeMap<u32, InvariantForm> = BTreeMap::new();
        for (m, c) in &self.coeffs {
            out.entry(mask_weight(layers, *m))
                .or_insert_with(|| Self::zero(self.dim, self.degree))
                .add_term(*m, c.clone());
        }
        out
    }

    /// Weight when all monomials share it; `None` for zero or mixed forms.
    pub fn pure_weight(&self, layers: &[u32]) -> Option<u32> {
        let comps = self.weight_components(layers);
        if comps.len() == 1 {
            comps.keys().next().copied()
        } else {
            None
        }
    }

    /// Coefficient vector in the lexicographic basis of its degree.
    pub fn to_vector(&self, basis: &ExteriorBasis) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); basis.len()];
        for (m, c) in &self.coeffs {
            v[basis.index(*m)] = c.clone();
        }
        v
    }

    pub fn from_vector(dim: usize, basis: &ExteriorBasis, v: &[Rational]) -> InvariantForm {
        let mut f = Self::zero(dim, basis.degree);
        for (i, c) in v.iter().enumerate() {
            f.add_term(basis.masks[i], c.clone());
        }
        f
    }
}

impl fmt::Display for InvariantForm {
    /// Canonical sorted-monomial text, e.g. `1/2*t[1]^t[3] - t[2]^t[3]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(Vec<usize>, &Rational)> =
            self.coeffs.iter().map(|(m, c)| (mask_indices(*m), c)).collect();
        terms.sort();
        for (i, (idx, c)) in terms.iter().enumerate() {
            let neg = **c < Rational::zero();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let wedge: Vec<String> = idx.iter().map(|j| format!("t[{}]", j + 1)).collect();
            if wedge.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", wedge.join("^"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), wedge.join("^"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InvariantForm(deg {}: {})", self.degree, self)
    }
}

/// Lexicographic monomial basis of `Λ^k`.
#[derive(Clone, Debug)]
pub struct ExteriorBasis {
    pub degree: usize,
    pub masks: Vec<Mask>,
    index: HashMap<Mask, usize>,
}

impl ExteriorBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let masks = masks_of_degree(n, k);
        let index = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        ExteriorBasis {
            degree: k,
            masks,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn index(&self, m: Mask) -> usize {
        self.index[&m]
    }
}

/// `d0 θ^k = −Σ_{i<j} c^k_ij θ^i∧θ^j`.
pub fn d0_covector(g: &StratifiedLieAlgebra, k: usize) -> InvariantForm {
    let n = g.dim();
    let mut out = InvariantForm::zero(n, 2);
    for (i, j, kk, c) in g.entries() {
        if kk == k {
            out.add_term((1 << i) | (1 << j), -c);
        }
    }
    out
}

/// Chevalley–Eilenberg differential, extended as an antiderivation.
pub fn d0(g: &StratifiedLieAlgebra, a: &InvariantForm) -> InvariantForm {
    let n = g.dim();
    let covs: Vec<InvariantForm> = (0..n).map(|k| d0_covector(g, k)).collect();
    d0_with(&covs, a)
}

pub(crate) fn d0_with(d0_covs: &[InvariantForm], a: &InvariantForm) -> InvariantForm {
    let n = a.dim;
    let mut out = InvariantForm::zero(n, a.degree + 1);
    if a.degree >= n {
        return out;
    }
    for (m, c) in &a.coeffs {
        let idx = mask_indices(*m);
        for (r, &j) in idx.iter().enumerate() {
            let dj = &d0_covs[j];
            if dj.is_zero() {
                continue;
            }
            let before = mask_from_indices(&idx[..r]);
            let after = mask_from_indices(&idx[r + 1..]);
            let sign_r = if r % 2 == 0 { Rational::one() } else { -Rational::one() };
            for (dm, dc) in &dj.coeffs {
                // θ^{before} ∧ dθ^j ∧ θ^{after}; the two-form commutes past `before`
                let Some(s1) = wedge_sign(*dm, after) else { continue };
                let Some(s2) = wedge_sign(before, dm | after) else { continue };
                let v = c * dc * &sign_r * Rational::from_integer((s1 * s2).into());
                out.add_term(before | dm | after, v);
            }
        }
    }
    out
}

/// Hodge star for the orthonormal coframe: `b ∧ ★a = ⟨b, a⟩ vol`.
pub fn hodge_star(a: &InvariantForm) -> InvariantForm {
    let n = a.dim;
    let full: Mask = (1u32 << n) - 1;
    let mut out = InvariantForm::zero(n, n - a.degree);
    for (m, c) in &a.coeffs {
        let comp = full & !m;
        let s = wedge_sign(*m, comp).expect("complementary masks");
        out.add_term(comp, if s > 0 { c.clone() } else { -c.clone() });
    }
    out
}

/// Cached exterior-algebra operators of a fixed algebra: monomial bases,
/// `d0` matrices and their exact pseudoinverses.
#[derive(Clone, Debug)]
pub struct Exterior {
    n: usize,
    q: u32,
    layers: Vec<u32>,
    bases: Vec<ExteriorBasis>,
    d0_covs: Vec<InvariantForm>,
    /// `d0_mats[k]: Λ^k → Λ^{k+1}`
    d0_mats: Vec<QMatrix>,
    /// `pinv[k]: Λ^k → Λ^{k-1}`, the pseudoinverse of `d0_mats[k-1]`; empty at `k = 0`
    pinv: Vec<QMatrix>,
}

impl Exterior {
    pub fn new(g: &StratifiedLieAlgebra) -> Self {
        let n = g.dim();
        let bases: Vec<ExteriorBasis> = (0..=n).map(|k| ExteriorBasis::new(n, k)).collect();
        let d0_covs: Vec<InvariantForm> = (0..n).map(|k| d0_covector(g, k)).collect();
        let d0_mats: Vec<QMatrix> = (0..=n)
            .map(|k| {
                let rows = if k < n { bases[k + 1].len() } else { 0 };
                let mut m = QMatrix::zeros(rows, bases[k].len());
                if k < n {
                    for (col, &mask) in bases[k].masks.iter().enumerate() {
                        let img = d0_with(&d0_covs, &InvariantForm::monomial(n, mask, Rational::one()));
                        for (tm, c) in img.terms() {
                            m[(bases[k + 1].index(*tm), col)] = c.clone();
                        }
                    }
                }
                m
            })
            .collect();
        let pinv = (0..=n)
            .map(|k| {
                if k == 0 {
                    QMatrix::zeros(0, 1)
                } else {
                    d0_mats[k - 1].pseudoinverse()
                }
            })
            .collect();
        Exterior {
            n,
            q: g.homogeneous_dim(),
            layers: g.layers().to_vec(),
            bases,
            d0_covs,
            d0_mats,
            pinv,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn homogeneous_dim(&self) -> u32 {
        self.q
    }

    pub fn layers(&self) -> &[u32] {
        &self.layers
    }

    pub fn basis(&self, k: usize) -> &ExteriorBasis {
        &self.bases[k]
    }

    pub fn d0(&self, a: &InvariantForm) -> InvariantForm {
        d0_with(&self.d0_covs, a)
    }

    pub fn d0_covector(&self, k: usize) -> &InvariantForm {
        &self.d0_covs[k]
    }

    /// Matrix of `d0: Λ^k → Λ^{k+1}`.
    pub fn d0_matrix(&self, k: usize) -> &QMatrix {
        &self.d0_mats[k]
    }

    /// Pseudoinverse `d0⁻¹: Λ^k → Λ^{k-1}` for `1 ≤ k ≤ n`.
    pub fn d0_pinv(&self, k: usize) -> &QMatrix {
        &self.pinv[k]
    }

    /// `d0*: Λ^k → Λ^{k-1}`, the transpose of `d0: Λ^{k-1} → Λ^k`.
    pub fn adjoint_d0(&self, k: usize) -> QMatrix {
        self.d0_mats[k - 1].transpose()
    }

    pub fn apply(&self, m: &QMatrix, a: &InvariantForm, target_degree: usize) -> InvariantForm {
        let v = m.mul_vec(&a.to_vector(&self.bases[a.degree]));
        InvariantForm::from_vector(self.n, &self.bases[target_degree], &v)
    }

    pub fn apply_pinv(&self, a: &InvariantForm) -> InvariantForm {
        if a.degree == 0 {
            return InvariantForm::zero(self.n, 0);
        }
        self.apply(&self.pinv[a.degree], a, a.degree - 1)
    }

    /// Orthogonal projector onto `ker d0 ∩ ker d0*` on `Λ^k`:
    /// `1 − d0 d0⁻¹ − d0⁻¹ d0`.
    pub fn harmonic_projector(&self, k: usize) -> QMatrix {
        let dim = self.bases[k].len();
        let mut p = QMatrix::identity(dim);
        if k >= 1 {
            p = p.sub(&self.d0_mats[k - 1].mul(&self.pinv[k]));
        }
        if k < self.n {
            p = p.sub(&self.pinv[k + 1].mul(&self.d0_mats[k]));
        }
        p
    }

    pub fn weight(&self, m: Mask) -> u32 {
        mask_weight(&self.layers, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupFamily;
    use crate::rational::int;

    fn h3() -> StratifiedLieAlgebra {
        StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(1))
    }

    #[test]
    fn repeated_factor_vanishes() {
        let t1 = InvariantForm::covector(3, 0);
        let t2 = InvariantForm::covector(3, 1);
        assert!(t1.wedge(&t2).unwrap().wedge(&t1).unwrap().is_zero());
    }

    #[test]
    fn wedge_to_volume() {
        let t1 = InvariantForm::covector(3, 0);
        let t2 = InvariantForm::covector(3, 1);
        let tau = InvariantForm::covector(3, 2);
        assert_eq!(t1.wedge(&t2.wedge(&tau).unwrap()).unwrap(), InvariantForm::volume(3));
        assert_eq!(tau.wedge(&t1).unwrap().wedge(&t2).unwrap(), InvariantForm::volume(3));
        let err = InvariantForm::volume(3).wedge(&t1).unwrap_err();
        assert!(matches!(err, FormError::DegreeOverflow { .. }));
    }

    #[test]
    fn contact_differential() {
        let g = h3();
        let tau = InvariantForm::covector(3, 2);
        let expect = InvariantForm::monomial(3, 0b011, int(-1));
        assert_eq!(d0(&g, &tau), expect);
    }

    #[test]
    fn star_examples() {
        assert_eq!(hodge_star(&InvariantForm::one(3)), InvariantForm::volume(3));
        let t1 = InvariantForm::covector(3, 0);
        assert_eq!(hodge_star(&t1), InvariantForm::monomial(3, 0b110, int(1)));
    }

    #[test]
    fn heisenberg_pseudoinverse() {
        let ext = Exterior::new(&h3());
        let t12 = InvariantForm::monomial(3, 0b011, int(1));
        let tau = InvariantForm::covector(3, 2);
        assert_eq!(ext.apply_pinv(&t12), tau.scale(&int(-1)));
    }

    #[test]
    fn abelian_operators_vanish() {
        let g = StratifiedLieAlgebra::builtin(GroupFamily::Abelian(3));
        let ext = Exterior::new(&g);
        for k in 1..=3 {
            assert!(ext.d0_pinv(k).is_zero());
            assert!(ext.adjoint_d0(k).is_zero());
        }
    }

    #[test]
    fn canonical_text() {
        let mut f = InvariantForm::zero(3, 2);
        f.add_term(0b110, int(-1));
        f.add_term(0b011, crate::rational::rat(1, 2));
        assert_eq!(f.to_string(), "1/2*t[1]^t[2] - t[2]^t[3]");
    }
}
