//! Logarithmic cut-offs `ξ = χ∘r` and their horizontal derivatives.
//!
//! On the shell `R < r < λR`, `ξ = (log(λR) − log r)/log λ` and
//! `log r = log F/(2N)`. Each horizontal derivative of `P/F^a` is again of
//! that shape: `W(P/F^a) = (F·WP − a·P·WF)/F^{a+1}`, so `∇^m ξ` is computed
//! exactly as polynomials over `F^m`.

use crate::bch::VectorField;
use crate::poly::{F64Poly, Poly};
use crate::rational::int;

use super::gauge::Gauge;
use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cutoff {
    radius: f64,
    ratio: f64,
}

impl Cutoff {
    pub fn new(radius: f64, ratio: f64) -> Result<Self, NumericError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(NumericError::InvalidParameter(format!("cut-off radius {radius} must be positive")));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(NumericError::InvalidParameter(format!("cut-off ratio {ratio} must exceed 1")));
        }
        Ok(Cutoff { radius, ratio })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// `χ(r)`: 1 inside `B(R)`, 0 outside `B(λR)`, logarithmic between.
    pub fn profile(&self, r: f64) -> f64 {
        if r <= self.radius {
            1.0
        } else if r >= self.radius * self.ratio {
            0.0
        } else {
            (self.radius * self.ratio / r).ln() / self.ratio.ln()
        }
    }

    pub fn eval(&self, gauge: &Gauge, x: &[f64]) -> f64 {
        self.profile(gauge.eval(x))
    }

    pub fn in_open_shell(&self, r: f64) -> bool {
        r > self.radius && r < self.radius * self.ratio
    }
}

/// All `m`-fold horizontal derivatives `W_{i_m}⋯W_{i_1} log F`, stored as
/// numerators over `F^m`.
#[derive(Clone, Debug)]
pub struct LogGaugeDerivatives {
    order: u32,
    power: u32,
    numerators: Vec<(Vec<usize>, F64Poly)>,
}

impl LogGaugeDerivatives {
    pub fn new(gauge: &Gauge, horizontal: &[VectorField], order: u32) -> Self {
        let f = gauge.polynomial();
        let wf: Vec<Poly> = horizontal.iter().map(|w| w.apply(f)).collect();
        let mut current: Vec<(Vec<usize>, Poly)> = vec![(Vec::new(), Poly::one())];
        for a in 0..order {
            let mut next = Vec::new();
            for (idx, p) in &current {
                for (i, w) in horizontal.iter().enumerate() {
                    let numerator = if a == 0 {
                        wf[i].clone()
                    } else {
                        f.mul(&w.apply(p)).sub(&p.mul(&wf[i]).scale(&int(a as i64)))
                    };
                    let mut key = idx.clone();
                    key.push(i);
                    next.push((key, numerator));
                }
            }
            current = next;
        }
        LogGaugeDerivatives {
            order,
            power: gauge.power(),
            numerators: current.into_iter().map(|(k, p)| (k, p.to_f64())).collect(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Euclidean norm of `∇^m log r` at `x`, given `F(x)`.
    pub fn norm_log_gauge(&self, x: &[f64], f_value: f64) -> f64 {
        let denom = f_value.powi(self.order as i32);
        let sq: f64 = self.numerators.iter().map(|(_, p)| (p.eval(x) / denom).powi(2)).sum();
        sq.sqrt() / (2.0 * self.power as f64)
    }

    /// `|∇^m ξ|(x)`; zero outside the open shell.
    pub fn norm_cutoff(&self, gauge: &Gauge, cutoff: &Cutoff, x: &[f64]) -> f64 {
        let r = gauge.eval(x);
        if !cutoff.in_open_shell(r) {
            return 0.0;
        }
        self.norm_log_gauge(x, gauge.eval_polynomial(x)) / cutoff.ratio().ln()
    }
}
