//! Rumin spaces `E₀ᵏ = ker d0 ∩ ker d0*` and their weight sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::StratifiedLieAlgebra;
use crate::forms::{Exterior, InvariantForm};
use crate::linalg::gram_schmidt;

/// Orthogonal pure-weight basis of `E₀ᵏ`.
#[derive(Clone, Debug)]
pub struct RuminSpace {
    degree: usize,
    basis: Vec<InvariantForm>,
    basis_weights: Vec<u32>,
}

impl RuminSpace {
    pub fn new(ext: &Exterior, k: usize) -> Self {
        let n = ext.dim();
        let basis_k = ext.basis(k);
        // stack d0 and d0* so the common kernel is one null space
        let mut stacked = ext.d0_matrix(k).clone();
        if k >= 1 {
            stacked = stacked.vstack(&ext.adjoint_d0(k));
        }
        let all_rows: Vec<usize> = (0..stacked.rows()).collect();
        let mut by_weight: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, &m) in basis_k.masks.iter().enumerate() {
            by_weight.entry(ext.weight(m)).or_default().push(i);
        }
        let mut basis = Vec::new();
        let mut basis_weights = Vec::new();
        for (w, cols) in by_weight {
            // d0 and d0* preserve weight, so the kernel splits by weight block
            let block = stacked.select(&all_rows, &cols);
            let kernel: Vec<_> = block
                .nullspace()
                .into_iter()
                .map(|v| {
                    let mut full = vec![crate::rational::zero(); basis_k.len()];
                    for (c, x) in cols.iter().zip(v) {
                        full[*c] = x;
                    }
                    full
                })
                .collect();
            for v in gram_schmidt(&kernel) {
                basis.push(InvariantForm::from_vector(n, basis_k, &v));
                basis_weights.push(w);
            }
        }
        RuminSpace {
            degree: k,
            basis,
            basis_weights,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[InvariantForm] {
        &self.basis
    }

    /// Weight of each basis element, aligned with `basis()`.
    pub fn basis_weights(&self) -> &[u32] {
        &self.basis_weights
    }

    /// The weight set `𝒲(k)`.
    pub fn weights(&self) -> BTreeSet<u32> {
        self.basis_weights.iter().copied().collect()
    }
}

pub fn rumin_basis(g: &StratifiedLieAlgebra, k: usize) -> RuminSpace {
    RuminSpace::new(&Exterior::new(g), k)
}

/// `𝒲(k)` for every degree `0..=n`.
pub fn weights_table(g: &StratifiedLieAlgebra) -> Vec<BTreeSet<u32>> {
    let ext = Exterior::new(g);
    (0..=ext.dim()).map(|k| RuminSpace::new(&ext, k).weights()).collect()
}

/// Lie algebra cohomology dimensions by rank-nullity on the CE complex.
pub fn betti_numbers(ext: &Exterior) -> Vec<usize> {
    let n = ext.dim();
    let ranks: Vec<usize> = (0..=n).map(|k| ext.d0_matrix(k).rank()).collect();
    (0..=n)
        .map(|k| {
            let incoming = if k == 0 { 0 } else { ranks[k - 1] };
            ext.basis(k).len() - ranks[k] - incoming
        })
        .collect()
}
