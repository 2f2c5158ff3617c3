//! Weight decomposition `d_c = Σ_j d_{c,j}`, the sets `𝒥(k,w)` and the
//! critical exponents `q(G,k) = Q/(Q − j(k))`.
//!
//! `d_c` commutes with dilations, so on a term of form weight `w` and
//! coefficient homogeneity `h` the piece `d_{c,j}` lands in bidegree
//! `(w + j, h − j)`. Every jump is therefore seen once `h` reaches `j`, and
//! `j` is bounded by `max 𝒲(k+1) − min 𝒲(k)`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::calculus::{CalculusError, RuminCalculus};
use crate::polyform::PolyForm;
use crate::rational::Rational;

/// Smallest homogeneity bound that sees every candidate jump out of degree `k`.
pub fn candidate_bound(calc: &RuminCalculus, k: usize) -> u32 {
    let src = calc.rumin_space(k).weights();
    let tgt = calc.rumin_space(k + 1).weights();
    match (src.first(), tgt.last()) {
        (Some(lo), Some(hi)) if hi > lo => hi - lo,
        _ => 0,
    }
}

/// Action of each `d_{c,j}` on the products of `E₀ᵏ` basis elements with
/// coordinate monomials of homogeneity at most the bound.
#[derive(Clone, Debug)]
pub struct WeightGradedOperator {
    pub degree: usize,
    pub bound: u32,
    /// Inputs as (basis index, form weight, coefficient homogeneity, form).
    pub sources: Vec<(usize, u32, u32, PolyForm)>,
    /// `pieces[j][i] = d_{c,j}(sources[i])`, stored only when nonzero.
    pub pieces: BTreeMap<u32, BTreeMap<usize, PolyForm>>,
}

impl WeightGradedOperator {
    pub fn build(calc: &RuminCalculus, k: usize, bound: u32) -> Result<Self, CalculusError> {
        if k >= calc.dim() {
            return Err(CalculusError::InvalidDegree { degree: k });
        }
        let mut sources = Vec::new();
        for h in 0..=bound {
            for (b, w, form) in calc.rumin_monomials(k, h) {
                sources.push((b, w, h, form));
            }
        }
        let images: Vec<Result<PolyForm, CalculusError>> =
            sources.par_iter().map(|(_, _, _, a)| calc.dc(a)).collect();
        let mut pieces: BTreeMap<u32, BTreeMap<usize, PolyForm>> = BTreeMap::new();
        for (i, img) in images.into_iter().enumerate() {
            let w = sources[i].1;
            for (w_out, comp) in img?.weight_components(calc.layers()) {
                let j = w_out.checked_sub(w).expect("d_c never lowers weight");
                pieces.entry(j).or_default().insert(i, comp);
            }
        }
        Ok(WeightGradedOperator {
            degree: k,
            bound,
            sources,
            pieces,
        })
    }

    /// `d_{c,j}` applied to source `i`.
    pub fn apply(&self, j: u32, i: usize) -> Option<&PolyForm> {
        self.pieces.get(&j).and_then(|m| m.get(&i))
    }

    /// Sum of all pieces on source `i`.
    pub fn total(&self, i: usize, dim: usize) -> PolyForm {
        let mut out = PolyForm::zero(dim, self.degree + 1);
        for m in self.pieces.values() {
            if let Some(f) = m.get(&i) {
                out.add_assign(f);
            }
        }
        out
    }

    /// `𝒥(k,w)` for each source weight `w`.
    pub fn jsets(&self) -> BTreeMap<u32, BTreeSet<u32>> {
        let mut out: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
        for (_, w, _, _) in &self.sources {
            out.entry(*w).or_default();
        }
        for (j, m) in &self.pieces {
            for i in m.keys() {
                out.get_mut(&self.sources[*i].1).expect("source weight").insert(*j);
            }
        }
        out
    }
}

/// The `𝒥`-data of every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsetScan {
    pub bound: u32,
    pub homogeneous_dim: u32,
    pub dim: usize,
    /// `forward[k][w] = 𝒥(k,w)` for `k < n`.
    pub forward: Vec<BTreeMap<u32, BTreeSet<u32>>>,
    /// `adjoint[k][w] = 𝒥*(k,w)` for `1 ≤ k ≤ n`; index 0 is empty.
    pub adjoint: Vec<BTreeMap<u32, BTreeSet<u32>>>,
}

pub fn jset_scan(calc: &RuminCalculus, k: usize, bound: u32) -> Result<BTreeMap<u32, BTreeSet<u32>>, CalculusError> {
    let required = candidate_bound(calc, k).max(2);
    if bound < required {
        return Err(CalculusError::BoundTooSmall { bound, required });
    }
    Ok(WeightGradedOperator::build(calc, k, bound)?.jsets())
}

impl JsetScan {
    /// Scans every degree at the given bound.
    pub fn run(calc: &RuminCalculus, bound: u32) -> Result<Self, CalculusError> {
        let n = calc.dim();
        let forward = (0..n).map(|k| jset_scan(calc, k, bound)).collect::<Result<Vec<_>, _>>()?;
        // d_{c,j} maps weight w' − j of degree k − 1 to weight w' of degree k,
        // so its adjoint lowers weight w' by j
        let mut adjoint = vec![BTreeMap::new()];
        for k in 1..=n {
            let mut table: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
            for w in calc.rumin_space(k).weights() {
                let set = table.entry(w).or_default();
                for (wsrc, js) in &forward[k - 1] {
                    for j in js {
                        if wsrc + j == w {
                            set.insert(*j);
                        }
                    }
                }
            }
            adjoint.push(table);
        }
        Ok(JsetScan {
            bound,
            homogeneous_dim: calc.algebra().homogeneous_dim(),
            dim: n,
            forward,
            adjoint,
        })
    }

    /// Runs at the smallest bound that is complete for every degree.
    pub fn minimal(calc: &RuminCalculus) -> Result<Self, CalculusError> {
        let bound = (0..calc.dim()).map(|k| candidate_bound(calc, k)).max().unwrap_or(0).max(2);
        Self::run(calc, bound)
    }

    /// `𝒥(k) = ⋃_w 𝒥(k,w)`.
    pub fn jset(&self, k: usize) -> BTreeSet<u32> {
        self.forward[k].values().flatten().copied().collect()
    }

    /// `𝒥*(k) = ⋃_w 𝒥*(k,w)`.
    pub fn adjoint_jset(&self, k: usize) -> BTreeSet<u32> {
        self.adjoint[k].values().flatten().copied().collect()
    }

    /// `M = max_k max 𝒥(k)`.
    pub fn max_jump(&self) -> u32 {
        (0..self.dim).filter_map(|k| self.jset(k).last().copied()).max().unwrap_or(0)
    }

    pub fn max_below_q(&self) -> bool {
        self.max_jump() < self.homogeneous_dim
    }

    /// `𝒥*(k+1) = 𝒥(k)` for every `k < n`.
    pub fn adjoint_matches(&self) -> bool {
        (0..self.dim).all(|k| self.adjoint_jset(k + 1) == self.jset(k))
    }

    /// `𝒥*(n−k, Q−w) = 𝒥(k,w)` for every `k < n` and `w ∈ 𝒲(k)`.
    pub fn duality_holds(&self) -> bool {
        (0..self.dim).all(|k| {
            self.forward[k].iter().all(|(w, js)| {
                self.homogeneous_dim
                    .checked_sub(*w)
                    .and_then(|dw| self.adjoint[self.dim - k].get(&dw))
                    == Some(js)
            })
        })
    }

    /// `𝒥(k) = 𝒥(n−k−1)` for every `k < n`.
    pub fn symmetric(&self) -> bool {
        (0..self.dim).all(|k| self.jset(k) == self.jset(self.dim - k - 1))
    }
}

/// Integrability requirements on a form of degree `k`: each weight-`w`
/// component, `w ∈ 𝒲(k)`, must lie in `L^{Q/(Q−j)}` for every jump `j` of
/// `d_c` from degree `k−1` into weight `w`, i.e. every `j ∈ 𝒥*(k,w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilitySpec {
    pub degree: usize,
    pub requirements: Vec<(u32, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentRow {
    pub degree: usize,
    pub j: u32,
    pub q: Rational,
    pub spec: IntegrabilitySpec,
}

fn conjugate_exponent(q: u32, j: u32) -> Rational {
    Rational::new(q.into(), (q - j).into())
}

/// `j(k) = min 𝒥*(k) = min 𝒥(k−1)` and `q(G,k) = Q/(Q − j(k))` for `1 ≤ k ≤ n`.
pub fn q_exponent_from(scan: &JsetScan) -> Result<Vec<ExponentRow>, CalculusError> {
    let q = scan.homogeneous_dim;
    (1..=scan.dim)
        .map(|k| {
            let j = *scan.adjoint_jset(k).first().ok_or(CalculusError::InvalidDegree { degree: k })?;
            if j >= q {
                return Err(CalculusError::InvalidDegree { degree: k });
            }
            let requirements = scan.adjoint[k]
                .iter()
                .flat_map(|(w, js)| js.iter().map(move |jj| (*w, conjugate_exponent(q, *jj))))
                .collect();
            Ok(ExponentRow {
                degree: k,
                j,
                q: conjugate_exponent(q, j),
                spec: IntegrabilitySpec { degree: k, requirements },
            })
        })
        .collect()
}

pub fn q_exponent(calc: &RuminCalculus) -> Result<Vec<ExponentRow>, CalculusError> {
    q_exponent_from(&JsetScan::minimal(calc)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GroupFamily, StratifiedLieAlgebra};
    use crate::rational::rat;

    fn calc(f: GroupFamily) -> RuminCalculus {
        RuminCalculus::new(&StratifiedLieAlgebra::builtin(f))
    }

    #[test]
    fn heisenberg_three_jsets() {
        let scan = JsetScan::run(&calc(GroupFamily::Heisenberg(1)), 4).unwrap();
        let sets: Vec<Vec<u32>> = (0..3).map(|k| scan.jset(k).into_iter().collect()).collect();
        assert_eq!(sets, vec![vec![1], vec![2], vec![1]]);
        assert!(scan.adjoint_matches() && scan.duality_holds() && scan.symmetric());
        assert_eq!(scan.max_jump(), 2);
    }

    #[test]
    fn heisenberg_three_exponents() {
        let rows = q_exponent(&calc(GroupFamily::Heisenberg(1))).unwrap();
        let q: Vec<Rational> = rows.iter().map(|r| r.q.clone()).collect();
        assert_eq!(q, vec![rat(4, 3), rat(2, 1), rat(4, 3)]);
    }

    #[test]
    fn small_bound_is_rejected() {
        let c = calc(GroupFamily::Engel);
        assert_eq!(jset_scan(&c, 1, 2), Err(CalculusError::BoundTooSmall { bound: 2, required: 3 }));
    }
}
