//! Stratified (Carnot) Lie algebras given by rational structure constants.
//!
//! Basis vectors are indexed `0..n` internally and `1..=n` in documents and
//! error messages. Layers are listed in ascending order, so `layer(i)` is
//! monotone in `i`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::QMatrix;
use crate::rational::{format_rational, parse_rational, pow, Rational};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("Jacobi identity fails for basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("bracket [e{i}, e{j}] -> e{k} violates the grading: layer {li} + layer {lj} != layer {lk}")]
    GradingViolation {
        i: usize,
        j: usize,
        k: usize,
        li: u32,
        lj: u32,
        lk: u32,
    },
    #[error("brackets of layer 1 with layer {layer} do not span layer {}", .layer + 1)]
    GenerationViolation { layer: u32 },
    #[error("dilation factor must be positive")]
    NonpositiveLambda,
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown group reference `{0}` (expected abelian:N, heisenberg:M or engel)")]
    UnknownGroup(String),
}

/// Built-in families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFamily {
    Abelian(usize),
    Heisenberg(usize),
    Engel,
}

impl FromStr for GroupFamily {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::UnknownGroup(s.to_string());
        let (family, param) = match s.split_once(':') {
            Some((f, p)) => (f, Some(p.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (family, param) {
            ("abelian", Some(n)) if n >= 1 => Ok(GroupFamily::Abelian(n)),
            ("heisenberg", Some(m)) if m >= 1 => Ok(GroupFamily::Heisenberg(m)),
            ("heisenberg", None) => Ok(GroupFamily::Heisenberg(1)),
            ("engel", None) => Ok(GroupFamily::Engel),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::Abelian(n) => write!(f, "abelian:{n}"),
            GroupFamily::Heisenberg(m) => write!(f, "heisenberg:{m}"),
            GroupFamily::Engel => write!(f, "engel"),
        }
    }
}

/// A validated stratified nilpotent Lie algebra.
#[derive(Clone, PartialEq)]
pub struct StratifiedLieAlgebra {
    name: String,
    layer_dims: Vec<usize>,
    layer_of: Vec<u32>,
    /// `brackets[i][j]` lists `(k, c^k_ij)`, filled antisymmetrically.
    brackets: Vec<Vec<Vec<(usize, Rational)>>>,
}

impl fmt::Debug for StratifiedLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StratifiedLieAlgebra")
            .field("name", &self.name)
            .field("layer_dims", &self.layer_dims)
            .finish()
    }
}

impl StratifiedLieAlgebra {
    /// Builds and validates an algebra from `(i, j, k, c)` entries meaning
    /// `[e_i, e_j] = c e_k + ...` with zero-based indices.
    pub fn new(
        name: impl Into<String>,
        layer_dims: Vec<usize>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self, AlgebraError> {
        let g = Self::unchecked(name, layer_dims, entries)?;
        g.validate()?;
        Ok(g)
    }

    fn unchecked(
        name: impl Into<String>,
        layer_dims: Vec<usize>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self, AlgebraError> {
        let parse_err = |message: String| AlgebraError::Parse { line: 0, message };
        if layer_dims.is_empty() || layer_dims.contains(&0) {
            return Err(parse_err("layers must be a nonempty list of positive integers".into()));
        }
        let n: usize = layer_dims.iter().sum();
        let layer_of: Vec<u32> = layer_dims
            .iter()
            .enumerate()
            .flat_map(|(l, &d)| std::iter::repeat_n(l as u32 + 1, d))
            .collect();
        let mut brackets = vec![vec![Vec::<(usize, Rational)>::new(); n]; n];
        for (i, j, k, c) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= n || j >= n || k >= n {
                return Err(parse_err(format!(
                    "bracket index out of range in [{} {}] -> {}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            if i == j {
                return Err(parse_err(format!("bracket [{} {}] of a vector with itself", i + 1, j + 1)));
            }
            if c.is_zero() {
                continue;
            }
            for (a, b, s) in [(i, j, c.clone()), (j, i, -c.clone())] {
                let slot = &mut brackets[a][b];
                match slot.iter_mut().find(|(kk, _)| *kk == k) {
                    Some((_, v)) => *v += s,
                    None => slot.push((k, s)),
                }
                slot.retain(|(_, v)| !v.is_zero());
                slot.sort_by_key(|(kk, _)| *kk);
            }
        }
        Ok(StratifiedLieAlgebra {
            name: name.into(),
            layer_dims,
            layer_of,
            brackets,
        })
    }

    pub fn builtin(family: GroupFamily) -> Self {
        let one = Rational::one();
        let (name, dims, entries): (String, Vec<usize>, Vec<_>) = match family {
            GroupFamily::Abelian(n) => (format!("abelian({n})"), vec![n], vec![]),
            GroupFamily::Heisenberg(m) => (
                format!("heisenberg({m})"),
                vec![2 * m, 1],
                (0..m).map(|i| (i, m + i, 2 * m, one.clone())).collect(),
            ),
            GroupFamily::Engel => (
                "engel".to_string(),
                vec![2, 1, 1],
                vec![(0, 1, 2, one.clone()), (0, 2, 3, one.clone())],
            ),
        };
        Self::new(name, dims, &entries).expect("built-in algebras are valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.layer_of.len()
    }

    pub fn step(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    /// Layer (1-based) of the zero-based basis index `i`.
    pub fn layer(&self, i: usize) -> u32 {
        self.layer_of[i]
    }

    pub fn layers(&self) -> &[u32] {
        &self.layer_of
    }

    /// Dimension of the first layer.
    pub fn horizontal_dim(&self) -> usize {
        self.layer_dims[0]
    }

    /// Homogeneous dimension `Σ_i i·dim 𝔤_i`.
    pub fn homogeneous_dim(&self) -> u32 {
        self.layer_dims
            .iter()
            .enumerate()
            .map(|(l, &d)| (l as u32 + 1) * d as u32)
            .sum()
    }

    /// Nonzero structure constants of `[e_i, e_j]`.
    pub fn bracket_of(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.brackets[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.brackets[i][j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `(i, j, k, c)` with `i < j` for every nonzero `c^k_ij`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in &self.brackets[i][j] {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.entries().is_empty()
    }

    /// Lie bracket of coordinate vectors over any coefficient ring.
    pub fn bracket<S: Scalar>(&self, u: &[S], v: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::nil(); n];
        for i in 0..n {
            if u[i].is_nil() {
                continue;
            }
            for j in 0..n {
                if i == j || v[j].is_nil() || self.brackets[i][j].is_empty() {
                    continue;
                }
                let uv = u[i].mul(&v[j]);
                for (k, c) in &self.brackets[i][j] {
                    out[*k] = out[*k].add(&uv.scale(c));
                }
            }
        }
        out
    }

    fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for (i, j, k, _) in self.entries() {
            let (li, lj, lk) = (self.layer(i), self.layer(j), self.layer(k));
            if li + lj != lk {
                return Err(AlgebraError::GradingViolation {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    li,
                    lj,
                    lk,
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let (ei, ej, el) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(l));
                    let a = self.bracket(&ei, &self.bracket(&ej, &el));
                    let b = self.bracket(&ej, &self.bracket(&el, &ei));
                    let c = self.bracket(&el, &self.bracket(&ei, &ej));
                    if a.iter().zip(&b).zip(&c).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Err(AlgebraError::JacobiViolation(i + 1, j + 1, l + 1));
                    }
                }
            }
        }
        // [𝔤_1, 𝔤_t] must span 𝔤_{t+1}
        for t in 1..self.step() as u32 {
            let layer1: Vec<usize> = (0..n).filter(|&i| self.layer(i) == 1).collect();
            let layer_t: Vec<usize> = (0..n).filter(|&i| self.layer(i) == t).collect();
            let target: Vec<usize> = (0..n).filter(|&i| self.layer(i) == t + 1).collect();
            let mut rows = Vec::new();
            for &a in &layer1 {
                for &b in &layer_t {
                    if a == b {
                        continue;
                    }
                    let v = self.bracket(&self.basis_vector(a), &self.basis_vector(b));
                    rows.push(target.iter().map(|&k| v[k].clone()).collect::<Vec<_>>());
                }
            }
            let rank = if rows.is_empty() {
                0
            } else {
                QMatrix::from_rows(rows).rank()
            };
            if rank < target.len() {
                return Err(AlgebraError::GenerationViolation { layer: t });
            }
        }
        Ok(())
    }

    /// Dilation `δ_λ`: coordinate `i` is multiplied by `λ^{layer(i)}`.
    pub fn dilate(&self, lambda: &Rational, p: &[Rational]) -> Result<Vec<Rational>, AlgebraError> {
        if *lambda <= Rational::zero() {
            return Err(AlgebraError::NonpositiveLambda);
        }
        self.check_len(p.len())?;
        Ok(p.iter()
            .enumerate()
            .map(|(i, x)| x * pow(lambda, self.layer(i) as i32))
            .collect())
    }

    pub fn dilate_f64(&self, lambda: f64, p: &[f64]) -> Result<Vec<f64>, AlgebraError> {
        if lambda <= 0.0 {
            return Err(AlgebraError::NonpositiveLambda);
        }
        self.check_len(p.len())?;
        Ok(p.iter()
            .enumerate()
            .map(|(i, x)| x * lambda.powi(self.layer(i) as i32))
            .collect())
    }

    pub(crate) fn check_len(&self, got: usize) -> Result<(), AlgebraError> {
        if got != self.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    /// Serializes to the structure-constant document format.
    pub fn to_document(&self) -> String {
        let dims: Vec<String> = self.layer_dims.iter().map(ToString::to_string).collect();
        let mut s = format!("name: {}\nlayers: [{}]\n", self.name, dims.join(", "));
        for (i, j, k, c) in self.entries() {
            s.push_str(&format!("bracket {} {} -> {} : {}\n", i + 1, j + 1, k + 1, format_rational(&c)));
        }
        s
    }
}

/// Parses a structure-constant document:
///
/// ```text
/// name: heisenberg
/// layers: [2, 1]
/// bracket 1 2 -> 3 : 1
/// ```
///
/// `#` starts a comment. Omitted brackets are zero.
pub fn parse_group(text: &str) -> Result<StratifiedLieAlgebra, AlgebraError> {
    let mut name: Option<String> = None;
    let mut layers: Option<Vec<usize>> = None;
    let mut raw: Vec<(usize, usize, usize, usize, Rational)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let err = |message: String| AlgebraError::Parse { line: lineno, message };
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("name:") {
            if name.is_some() {
                return Err(err("duplicate name".into()));
            }
            name = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("layers:") {
            if layers.is_some() {
                return Err(err("duplicate layers".into()));
            }
            let rest = rest.trim();
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| err(format!("expected [d1, d2, ...], found `{rest}`")))?;
            let dims = inner
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    t.parse::<usize>()
                        .ok()
                        .filter(|&d| d > 0)
                        .ok_or_else(|| err(format!("layer dimension `{t}` is not a positive integer")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            layers = Some(dims);
        } else if let Some(rest) = line.strip_prefix("bracket") {
            let (lhs, coeff) = rest
                .split_once(':')
                .ok_or_else(|| err("expected `bracket i j -> k : c`".into()))?;
            let (ij, k) = lhs
                .split_once("->")
                .ok_or_else(|| err("expected `->` in bracket line".into()))?;
            let ij: Vec<&str> = ij.split_whitespace().collect();
            if ij.len() != 2 {
                return Err(err(format!("expected two indices before `->`, found {}", ij.len())));
            }
            let idx = |t: &str| {
                t.parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| err(format!("`{t}` is not a positive index")))
            };
            let (i, j, k) = (idx(ij[0])?, idx(ij[1])?, idx(k.trim())?);
            if i >= j {
                return Err(err(format!("bracket indices must satisfy i < j, found {i} {j}")));
            }
            let c = parse_rational(coeff)
                .ok_or_else(|| err(format!("`{}` is not a rational p/q", coeff.trim())))?;
            if raw.iter().any(|(_, a, b, cc, _)| (*a, *b, *cc) == (i, j, k)) {
                return Err(err(format!("duplicate bracket {i} {j} -> {k}")));
            }
            raw.push((lineno, i, j, k, c));
        } else {
            return Err(err(format!("unrecognized line `{line}`")));
        }
    }
    let layers = layers.ok_or(AlgebraError::Parse {
        line: 0,
        message: "missing `layers:` line".into(),
    })?;
    let n: usize = layers.iter().sum();
    for (lineno, i, j, k, _) in &raw {
        if *i > n || *j > n || *k > n {
            return Err(AlgebraError::Parse {
                line: *lineno,
                message: format!("index out of range 1..={n}"),
            });
        }
    }
    let entries: Vec<_> = raw.into_iter().map(|(_, i, j, k, c)| (i - 1, j - 1, k - 1, c)).collect();
    StratifiedLieAlgebra::new(name.unwrap_or_else(|| "unnamed".into()), layers, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    const H3: &str = "name: H3\nlayers: [2, 1]\nbracket 1 2 -> 3 : 1\n";

    #[test]
    fn abelian_document() {
        let g = parse_group("name: R3\nlayers: [3]\n").unwrap();
        assert_eq!(g.homogeneous_dim(), 3);
        assert!(g.is_abelian());
    }

    #[test]
    fn heisenberg_document() {
        let g = parse_group(H3).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.homogeneous_dim(), 4);
        assert_eq!(g.structure_constant(1, 0, 2), int(-1));
    }

    #[test]
    fn grading_violation_names_indices() {
        let doc = format!("{H3}bracket 1 3 -> 2 : 1\n");
        match parse_group(&doc) {
            Err(AlgebraError::GradingViolation { i: 1, j: 3, k: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jacobi_violation() {
        // J(e1,e2,e3) = [e1,e5] - [e2,e6] + [e3,e4]
        let base = [(0, 1, 3, int(1)), (1, 2, 4, int(1)), (0, 2, 5, int(1)), (0, 4, 6, int(1))];
        let broken = StratifiedLieAlgebra::new("broken", vec![3, 3, 1], &base);
        assert_eq!(broken.unwrap_err(), AlgebraError::JacobiViolation(1, 2, 3));
        let mut fixed = base.to_vec();
        fixed.push((1, 5, 6, int(1)));
        assert!(StratifiedLieAlgebra::new("fixed", vec![3, 3, 1], &fixed).is_ok());
    }

    #[test]
    fn duplicate_bracket_is_a_parse_error() {
        let doc = format!("{H3}bracket 1 2 -> 3 : 2\n");
        assert!(matches!(parse_group(&doc), Err(AlgebraError::Parse { line: 4, .. })));
        assert!(matches!(
            parse_group("layers: [2, 1]\nbracket 2 1 -> 3 : 1\n"),
            Err(AlgebraError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn generation_violation() {
        let r = StratifiedLieAlgebra::new("g", vec![2, 1, 1], &[(0, 1, 2, int(1))]);
        assert_eq!(r.unwrap_err(), AlgebraError::GenerationViolation { layer: 2 });
    }

    #[test]
    fn builtins() {
        assert_eq!(StratifiedLieAlgebra::builtin(GroupFamily::Abelian(4)).homogeneous_dim(), 4);
        assert_eq!(StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(1)).homogeneous_dim(), 4);
        assert_eq!(StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(3)).homogeneous_dim(), 8);
        assert_eq!(StratifiedLieAlgebra::builtin(GroupFamily::Engel).homogeneous_dim(), 7);
    }

    #[test]
    fn q_is_sum_of_layers_over_basis() {
        for fam in [GroupFamily::Abelian(3), GroupFamily::Heisenberg(2), GroupFamily::Engel] {
            let g = StratifiedLieAlgebra::builtin(fam);
            let s: u32 = g.layers().iter().sum();
            assert_eq!(s, g.homogeneous_dim());
        }
    }

    #[test]
    fn dilations() {
        let h = StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(1));
        assert_eq!(h.dilate(&int(2), &[int(1), int(1), int(1)]).unwrap(), vec![int(2), int(2), int(4)]);
        let e = StratifiedLieAlgebra::builtin(GroupFamily::Engel);
        assert_eq!(
            e.dilate(&int(2), &[int(1), int(0), int(1), int(1)]).unwrap(),
            vec![int(2), int(0), int(4), int(8)]
        );
        let a = StratifiedLieAlgebra::builtin(GroupFamily::Abelian(2));
        assert_eq!(a.dilate(&rat(1, 3), &[int(3), int(6)]).unwrap(), vec![int(1), int(2)]);
        assert_eq!(h.dilate(&int(0), &[int(1), int(1), int(1)]), Err(AlgebraError::NonpositiveLambda));
    }

    #[test]
    fn document_round_trip() {
        for fam in [GroupFamily::Abelian(2), GroupFamily::Heisenberg(2), GroupFamily::Engel] {
            let g = StratifiedLieAlgebra::builtin(fam);
            assert_eq!(parse_group(&g.to_document()).unwrap(), g);
        }
    }

    #[test]
    fn group_references() {
        assert_eq!("heisenberg:2".parse(), Ok(GroupFamily::Heisenberg(2)));
        assert_eq!("engel".parse(), Ok(GroupFamily::Engel));
        assert!("abelian".parse::<GroupFamily>().is_err());
        assert!("torus:3".parse::<GroupFamily>().is_err());
    }
}
