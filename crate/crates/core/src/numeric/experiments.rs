//! The three numerical experiments and their report assembly.

use std::collections::BTreeMap;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::algebra::StratifiedLieAlgebra;
use crate::bch::left_invariant_fields;
use crate::calculus::RuminCalculus;
use crate::forms::{InvariantForm, Mask};
use crate::poly::{F64Poly, Poly};
use crate::polyform::PolyForm;

use super::cutoff::{Cutoff, LogGaugeDerivatives};
use super::gauge::Gauge;
use super::montecarlo::{ball_integral, block_rng, shell_integral, MIN_SAMPLES};
use super::report::{linear_fit, ExperimentConfig, ExperimentReport};
use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub samples: u64,
    pub seed: u64,
    /// Parallel split only; results are identical for every value.
    pub shards: usize,
}

/// Independent seed for the `i`-th point of a sweep.
fn point_seed(seed: u64, i: usize) -> u64 {
    block_rng(seed, u64::MAX - i as u64).next_u64()
}

fn list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// One-variable factor `g` multiplying a form's coefficients through `g(P)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    /// `g ≡ 1`.
    One,
    /// `g(s) = e^{−s}`.
    Gaussian,
    /// `g(s) = (1+s)^{−a}`.
    Power(f64),
}

impl Profile {
    /// `g^{(l)}(s)`.
    pub fn derivative(&self, l: u32, s: f64) -> f64 {
        match *self {
            Profile::One => {
                if l == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Gaussian => {
                let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * (-s).exp()
            }
            Profile::Power(a) => {
                let c: f64 = (0..l).map(|i| -a - i as f64).product();
                c * (1.0 + s).powf(-a - l as f64)
            }
        }
    }
}

/// Profile together with the polynomial it is composed with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Decay {
    /// `e^{−|x|²}` with the Euclidean norm of the coordinates; effectively
    /// compact support at the sampled radii.
    Gaussian,
    /// `(1 + r^{2N})^{−a}` with the gauge polynomial.
    GaugePower(f64),
}

impl Decay {
    fn parts(&self, gauge: &Gauge) -> (Profile, Poly) {
        match *self {
            Decay::Gaussian => {
                let mut p = Poly::zero();
                for i in 0..gauge.dim() {
                    p.add_assign(&Poly::var(i).pow(2));
                }
                (Profile::Gaussian, p)
            }
            Decay::GaugePower(a) => (Profile::Power(a), gauge.polynomial().clone()),
        }
    }
}

/// Floating-point evaluator for a form whose coefficients are
/// `Σ_l p_l(x) g^{(l)}(P(x))`, with `l` stored as the exponent of the extra
/// variable `x_{n+1}`.
#[derive(Clone, Debug)]
pub struct ProfiledForm {
    profile: Profile,
    argument: F64Poly,
    terms: Vec<(Mask, Vec<(u32, F64Poly)>)>,
}

impl ProfiledForm {
    pub fn new(a: &PolyForm, profile: Profile, argument: &Poly) -> Self {
        let slot = a.dim();
        let terms = a
            .terms()
            .map(|(m, f)| {
                let top = f.terms().map(|(mono, _)| mono.exp(slot)).max().unwrap_or(0);
                let parts = (0..=top)
                    .map(|l| (l as u32, f.coefficient_in(slot, l).to_f64()))
                    .filter(|(_, p)| !p.is_zero())
                    .collect();
                (*m, parts)
            })
            .collect();
        ProfiledForm {
            profile,
            argument: argument.to_f64(),
            terms,
        }
    }

    pub fn plain(a: &PolyForm) -> Self {
        Self::new(a, Profile::One, &Poly::zero())
    }

    pub fn coefficients(&self, x: &[f64]) -> Vec<(Mask, f64)> {
        let s = self.argument.eval(x);
        self.terms
            .iter()
            .map(|(m, parts)| {
                let v = parts.iter().map(|(l, p)| p.eval(x) * self.profile.derivative(*l, s)).sum();
                (*m, v)
            })
            .collect()
    }

    pub fn coefficient(&self, mask: Mask, x: &[f64]) -> f64 {
        self.coefficients(x).into_iter().find(|(m, _)| *m == mask).map_or(0.0, |(_, v)| v)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn pointwise_norm(&self, x: &[f64]) -> f64 {
        self.coefficients(x).iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }
}

fn config(g: &StratifiedLieAlgebra, operation: &str, mc: &SamplingConfig, parameters: BTreeMap<String, String>) -> ExperimentConfig {
    ExperimentConfig {
        group: g.name().to_string(),
        operation: operation.to_string(),
        samples: mc.samples,
        seed: mc.seed,
        parameters,
    }
}

/// `‖∇^m ξ‖_{L^{Q/m}}` for each ratio `λ`, fitted as a power of `log λ`.
/// The expected slope is `−1 + m/Q`.
pub fn cutoff_norm_experiment(
    g: &StratifiedLieAlgebra,
    m: u32,
    lambdas: &[f64],
    radius: f64,
    mc: &SamplingConfig,
) -> Result<ExperimentReport, NumericError> {
    let q = g.homogeneous_dim();
    if m == 0 || m >= q {
        return Err(NumericError::OrderTooHigh { m, q });
    }
    let gauge = Gauge::new(g);
    let fields = left_invariant_fields(g);
    let derivs = LogGaugeDerivatives::new(&gauge, &fields[..g.horizontal_dim()], m);
    let exponent = q as f64 / m as f64;
    let params = BTreeMap::from([
        ("m".to_string(), m.to_string()),
        ("lambdas".to_string(), list(lambdas)),
        ("radius".to_string(), radius.to_string()),
    ]);
    let mut report = ExperimentReport::new(config(g, "verify-cutoff", mc, params), "lambda");
    let mut integrals = Vec::new();
    for (i, &lambda) in lambdas.iter().enumerate() {
        let cutoff = Cutoff::new(radius, lambda)?;
        let est = shell_integral(
            &gauge,
            |x| derivs.norm_cutoff(&gauge, &cutoff, x).powf(exponent),
            radius,
            radius * lambda,
            mc.samples,
            point_seed(mc.seed, i),
            mc.shards,
        )?;
        let norm = est.mean.powf(1.0 / exponent);
        // delta method for the 1/exponent power
        let se = norm / exponent * est.stderr / est.mean;
        report.points.push(lambda);
        report.estimates.push(norm);
        report.stderr.push(se);
        integrals.push(est.mean);
    }
    let x: Vec<f64> = lambdas.iter().map(|l| l.ln().ln()).collect();
    let y: Vec<f64> = report.estimates.iter().map(|v| v.ln()).collect();
    report.fit = linear_fit(&x, &y);
    report.expected.insert("slope".into(), -1.0 + m as f64 / q as f64);
    report.series.insert("integral".into(), integrals);
    Ok(report)
}

/// Largest sampled value of `|∇ξ|·r·log λ` on the shell. The quantity is
/// homogeneous of degree 0, so it does not depend on `R` or `λ`.
pub fn cutoff_gradient_scale(
    g: &StratifiedLieAlgebra,
    radius: f64,
    ratio: f64,
    samples: u64,
    seed: u64,
) -> Result<f64, NumericError> {
    use rand::Rng;
    let gauge = Gauge::new(g);
    let cutoff = Cutoff::new(radius, ratio)?;
    let fields = left_invariant_fields(g);
    let derivs = LogGaugeDerivatives::new(&gauge, &fields[..g.horizontal_dim()], 1);
    let mut rng = block_rng(seed, 0);
    let (lo, hi) = (radius.ln(), (radius * ratio).ln());
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let omega = gauge.sample_sphere(&mut rng);
        let rho = rng.random_range(lo..hi).exp();
        let x = gauge.dilate(rho, &omega);
        best = best.max(derivs.norm_cutoff(&gauge, &cutoff, &x) * gauge.eval(&x) * ratio.ln());
    }
    Ok(best)
}

/// Smooth bump of the gauge supported in `1 < r < 4`.
pub fn shell_bump(r: f64) -> f64 {
    if r <= 1.0 || r >= 4.0 {
        0.0
    } else {
        (-1.0 / ((r - 1.0) * (4.0 - r))).exp()
    }
}

fn scaling_fit(
    gauge: &Gauge,
    omega: &PolyForm,
    weight: u32,
    radii: &[f64],
    mc: &SamplingConfig,
    seed_offset: usize,
) -> Result<(Vec<f64>, Vec<f64>, f64), NumericError> {
    let eval = ProfiledForm::plain(omega);
    let mut est = Vec::new();
    let mut se = Vec::new();
    for (i, &scale) in radii.iter().enumerate() {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(NumericError::InvalidParameter(format!("radius {scale} must be positive")));
        }
        // δ_R^*(bump·ω) has coefficients R^w (bump·a)∘δ_R and lives on 1/R < r < 4/R
        let rw = scale.powi(weight as i32);
        let e = shell_integral(
            gauge,
            |x| {
                let y = gauge.dilate(scale, x);
                shell_bump(gauge.eval(&y)) * rw * eval.pointwise_norm(&y)
            },
            1.0 / scale,
            4.0 / scale,
            mc.samples,
            point_seed(mc.seed, seed_offset + i),
            mc.shards,
        )?;
        est.push(e.mean);
        se.push(e.stderr);
    }
    let x: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let y: Vec<f64> = est.iter().map(|v| v.ln()).collect();
    let slope = linear_fit(&x, &y).map_or(f64::NAN, |f| f.slope);
    Ok((est, se, slope))
}

/// Fits `‖δ_R^*(bump·ω)‖_{L¹} ∝ R^e` for a form of pure weight `w`. The
/// change of variables gives `e = w − Q`; the report also lists `w − (Q−1)`.
/// With a second form, the difference of the two exponents is compared with
/// the difference of weights.
pub fn scaling_exponent_experiment(
    g: &StratifiedLieAlgebra,
    omega: &PolyForm,
    radii: &[f64],
    mc: &SamplingConfig,
    pair: Option<&PolyForm>,
) -> Result<ExperimentReport, NumericError> {
    let layers = g.layers();
    let w = omega.pure_weight(layers).ok_or(NumericError::MixedWeight)?;
    let gauge = Gauge::new(g);
    let q = g.homogeneous_dim() as f64;
    let mut params = BTreeMap::from([
        ("form".to_string(), omega.to_string()),
        ("radii".to_string(), list(radii)),
    ]);
    if let Some(p) = pair {
        params.insert("pair".into(), p.to_string());
    }
    let mut report = ExperimentReport::new(config(g, "verify-scaling", mc, params), "radius");
    let (est, se, _) = scaling_fit(&gauge, omega, w, radii, mc, 0)?;
    report.points = radii.to_vec();
    report.estimates = est;
    report.stderr = se;
    let x: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let y: Vec<f64> = report.estimates.iter().map(|v| v.ln()).collect();
    report.fit = linear_fit(&x, &y);
    report.expected.insert("weight".into(), w as f64);
    report.expected.insert("exponent_change_of_variables".into(), w as f64 - q);
    report.expected.insert("exponent_q_minus_one".into(), w as f64 - (q - 1.0));
    if let Some(p) = pair {
        let wp = p.pure_weight(layers).ok_or(NumericError::MixedWeight)?;
        let (pest, pse, pslope) = scaling_fit(&gauge, p, wp, radii, mc, radii.len())?;
        let slope = report.fit.as_ref().map_or(f64::NAN, |f| f.slope);
        report.series.insert("pair_estimates".into(), pest);
        report.series.insert("pair_stderr".into(), pse);
        report.expected.insert("pair_exponent".into(), pslope);
        report.expected.insert("exponent_difference".into(), slope - pslope);
        report.expected.insert("weight_difference".into(), w as f64 - wp as f64);
    }
    Ok(report)
}

/// `∫ ξ_R (d_cφ)∧β` over a ladder of radii, with `φ` damped by `decay`.
/// The cut-off ratio is `λ`. For functions `φ`, the Hölder bound
/// `‖φ‖_{Q/(Q−1)}‖∇ξ_R‖_Q‖β‖_∞` over the shell is reported alongside.
pub fn pairing_experiment(
    g: &StratifiedLieAlgebra,
    phi: &PolyForm,
    beta: &InvariantForm,
    decay: Decay,
    radii: &[f64],
    ratio: f64,
    mc: &SamplingConfig,
) -> Result<ExperimentReport, NumericError> {
    let n = g.dim();
    if phi.degree() + 1 + beta.degree() != n {
        return Err(NumericError::DegreeMismatch {
            expected: n,
            got: phi.degree() + 1 + beta.degree(),
        });
    }
    let gauge = Gauge::new(g);
    let (profile, argument) = decay.parts(&gauge);
    let calc = RuminCalculus::new(g).with_profile(&argument);
    if !calc.invariant_is_rumin(beta) {
        return Err(crate::calculus::CalculusError::NotRumin { degree: beta.degree() }.into());
    }
    let omega = calc.dc(phi)?;
    let top = omega.wedge(&PolyForm::from_invariant(beta))?;
    let vol: Mask = (1u32 << n) - 1;
    let top_eval = ProfiledForm::new(&top, profile, &argument);
    let phi_eval = ProfiledForm::new(phi, profile, &argument);
    let beta_sup = beta.terms().map(|(_, c)| crate::rational::to_f64(c).powi(2)).sum::<f64>().sqrt();
    let params = BTreeMap::from([
        ("phi".to_string(), phi.to_string()),
        ("beta".to_string(), beta.to_string()),
        ("decay".to_string(), format!("{decay:?}")),
        ("radii".to_string(), list(radii)),
        ("lambda".to_string(), ratio.to_string()),
    ]);
    let mut report = ExperimentReport::new(config(g, "verify-pairing", mc, params), "radius");
    let q = g.homogeneous_dim() as f64;
    let fields = left_invariant_fields(g);
    let grad = LogGaugeDerivatives::new(&gauge, &fields[..g.horizontal_dim()], 1);
    let mut bounds = Vec::new();
    for (i, &radius) in radii.iter().enumerate() {
        let cutoff = Cutoff::new(radius, ratio)?;
        let seed = point_seed(mc.seed, i);
        let est = ball_integral(
            &gauge,
            |x| cutoff.eval(&gauge, x) * top_eval.coefficient(vol, x),
            radius * ratio,
            mc.samples,
            seed,
            mc.shards,
        )?;
        report.points.push(radius);
        report.estimates.push(est.mean);
        report.stderr.push(est.stderr);
        if phi.degree() == 0 {
            let (r1, r2) = (radius, radius * ratio);
            let lp = q / (q - 1.0);
            let phi_norm = shell_integral(&gauge, |x| phi_eval.pointwise_norm(x).powf(lp), r1, r2, mc.samples, seed ^ 1, mc.shards)?;
            let grad_norm = shell_integral(&gauge, |x| grad.norm_cutoff(&gauge, &cutoff, x).powf(q), r1, r2, mc.samples, seed ^ 2, mc.shards)?;
            bounds.push(phi_norm.mean.powf(1.0 / lp) * grad_norm.mean.powf(1.0 / q) * beta_sup);
        }
    }
    if !bounds.is_empty() {
        report.series.insert("holder_bound".into(), bounds);
    }
    report.expected.insert("limit".into(), 0.0);
    Ok(report)
}

/// `∫ ξ_R e^{−|x|²} vol` over a ladder of radii; the limit is `π^{n/2}`.
pub fn top_degree_experiment(
    g: &StratifiedLieAlgebra,
    radii: &[f64],
    ratio: f64,
    mc: &SamplingConfig,
) -> Result<ExperimentReport, NumericError> {
    if mc.samples < MIN_SAMPLES {
        return Err(NumericError::TooFewSamples { samples: mc.samples, minimum: MIN_SAMPLES });
    }
    let gauge = Gauge::new(g);
    let params = BTreeMap::from([
        ("form".to_string(), "exp(-|x|^2) vol".to_string()),
        ("radii".to_string(), list(radii)),
        ("lambda".to_string(), ratio.to_string()),
    ]);
    let mut report = ExperimentReport::new(config(g, "verify-pairing", mc, params), "radius");
    for (i, &radius) in radii.iter().enumerate() {
        let cutoff = Cutoff::new(radius, ratio)?;
        let est = ball_integral(
            &gauge,
            |x| cutoff.eval(&gauge, x) * (-x.iter().map(|v| v * v).sum::<f64>()).exp(),
            radius * ratio,
            mc.samples,
            point_seed(mc.seed, i),
            mc.shards,
        )?;
        report.points.push(radius);
        report.estimates.push(est.mean);
        report.stderr.push(est.stderr);
    }
    report.expected.insert("limit".into(), std::f64::consts::PI.powf(g.dim() as f64 / 2.0));
    Ok(report)
}
