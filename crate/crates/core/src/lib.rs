//! Exact calculus on Carnot groups: stratified algebras, left-invariant
//! forms, the Rumin complex with its weight data, and a Monte Carlo harness
//! for the analytic scaling statements.

pub mod algebra;
pub mod bch;
pub mod calculus;
pub mod forms;
pub mod heisenberg;
pub mod jsets;
pub mod leibniz;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod polyform;
pub mod primitive;
pub mod rational;
pub mod rumin;
pub mod scalar;

pub use algebra::{parse_group, AlgebraError, GroupFamily, StratifiedLieAlgebra};
pub use bch::{bch_multiply, left_invariant_fields, VectorField};
pub use forms::{hodge_star, Exterior, FormError, InvariantForm, Mask};
pub use linalg::QMatrix;
pub use poly::{Monomial, Poly};
pub use rational::Rational;
pub use calculus::{CalculusError, RuminCalculus};
pub use polyform::PolyForm;
pub use rumin::{rumin_basis, weights_table, RuminSpace};
pub use heisenberg::{annihilator_check, heisenberg_ideal_dims, HeisenbergIdealReport};
pub use jsets::{jset_scan, q_exponent, ExponentRow, IntegrabilitySpec, JsetScan, WeightGradedOperator};
pub use leibniz::{leibniz_check, LeibnizReport};
pub use primitive::linear_growth_primitive;
