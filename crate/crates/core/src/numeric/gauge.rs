//! Smooth homogeneous gauge `r(x) = (Σ_s |x^{(s)}|^{2N/s})^{1/(2N)}` with
//! `N = lcm(1..s)`, so that `F = r^{2N}` is a polynomial.

use num_integer::Integer;
use rand::Rng;
use statrs::function::gamma::gamma;

use crate::algebra::StratifiedLieAlgebra;
use crate::poly::{F64Poly, Poly};

#[derive(Clone, Debug)]
pub struct Gauge {
    layers: Vec<u32>,
    layer_dims: Vec<usize>,
    power: u32,
    q: u32,
    f: Poly,
    f_fast: F64Poly,
}

impl Gauge {
    pub fn new(g: &StratifiedLieAlgebra) -> Self {
        let step = g.step() as u32;
        let power = (1..=step).fold(1u32, |a, s| a.lcm(&s));
        let mut f = Poly::zero();
        let mut start = 0;
        for (s, &d) in g.layer_dims().iter().enumerate() {
            let mut sq = Poly::zero();
            for i in start..start + d {
                sq.add_assign(&Poly::var(i).pow(2));
            }
            f.add_assign(&sq.pow(power / (s as u32 + 1)));
            start += d;
        }
        Gauge {
            layers: g.layers().to_vec(),
            layer_dims: g.layer_dims().to_vec(),
            power,
            q: g.homogeneous_dim(),
            f_fast: f.to_f64(),
            f,
        }
    }

    /// The exponent `N`.
    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn dim(&self) -> usize {
        self.layers.len()
    }

    pub fn homogeneous_dim(&self) -> u32 {
        self.q
    }

    pub fn layers(&self) -> &[u32] {
        &self.layers
    }

    /// The polynomial `F = r^{2N}`.
    pub fn polynomial(&self) -> &Poly {
        &self.f
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        let mut start = 0;
        for (s, &d) in self.layer_dims.iter().enumerate() {
            let sq: f64 = x[start..start + d].iter().map(|v| v * v).sum();
            acc += sq.powi((self.power / (s as u32 + 1)) as i32);
            start += d;
        }
        acc.powf(1.0 / (2.0 * self.power as f64))
    }

    pub fn eval_polynomial(&self, x: &[f64]) -> f64 {
        self.f_fast.eval(x)
    }

    pub fn dilate(&self, lambda: f64, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.layers).map(|(v, &l)| v * lambda.powi(l as i32)).collect()
    }

    /// Lebesgue measure of the unit gauge ball, in closed form: each layer
    /// block of dimension `d` contributes `(2π^{d/2}/Γ(d/2))·Γ(d/p)/p` with
    /// `p = 2N/s`, divided by `Γ(1 + Q/(2N))` overall.
    pub fn unit_ball_volume(&self) -> f64 {
        let two_n = 2.0 * self.power as f64;
        let mut acc = 1.0;
        for (s, &d) in self.layer_dims.iter().enumerate() {
            let d = d as f64;
            let p = two_n / (s as f64 + 1.0);
            let sphere = 2.0 * std::f64::consts::PI.powf(d / 2.0) / gamma(d / 2.0);
            acc *= sphere * gamma(d / p) / p;
        }
        acc / gamma(1.0 + self.q as f64 / two_n)
    }

    /// Point of the unit gauge sphere, distributed as the cone measure:
    /// a uniform point of the unit ball pushed radially by the dilations.
    pub fn sample_sphere<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.dim();
        let mut x = vec![0.0; n];
        loop {
            for v in x.iter_mut() {
                *v = rng.random_range(-1.0..1.0);
            }
            let r = self.eval(&x);
            if r <= 1.0 && r > 1e-12 {
                return self.dilate(1.0 / r, &x);
            }
        }
    }

    /// Uniform point of the unit gauge ball.
    pub fn sample_ball<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.dim();
        let mut x = vec![0.0; n];
        loop {
            for v in x.iter_mut() {
                *v = rng.random_range(-1.0..1.0);
            }
            if self.eval(&x) <= 1.0 {
                return x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupFamily;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_ball_volumes() {
        let a2 = Gauge::new(&StratifiedLieAlgebra::builtin(GroupFamily::Abelian(2)));
        assert!((a2.unit_ball_volume() - PI).abs() < 1e-12);
        let a3 = Gauge::new(&StratifiedLieAlgebra::builtin(GroupFamily::Abelian(3)));
        assert!((a3.unit_ball_volume() - 4.0 * PI / 3.0).abs() < 1e-12);
        let h3 = Gauge::new(&StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(1)));
        assert!((h3.unit_ball_volume() - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn pure_center_point() {
        let h3 = Gauge::new(&StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(1)));
        assert_eq!(h3.power(), 2);
        assert!((h3.eval(&[0.0, 0.0, 1.0]) - 1.0).abs() < 1e-15);
        assert!((h3.eval(&[0.0, 0.0, 4.0]) - 2.0).abs() < 1e-15);
        let x = [0.3, -0.7, 1.1];
        assert!((h3.eval(&x).powi(4) - h3.eval_polynomial(&x)).abs() < 1e-12);
    }
}
