mod common;

use common::{builtins, group};
use rand::Rng;
use rumin_core::numeric::montecarlo::block_rng;
use rumin_core::numeric::{cutoff_gradient_scale, shell_integral, Cutoff, Estimate, Gauge, SamplingConfig};
use rumin_core::numeric::{cutoff_norm_experiment, NumericError};

fn within(a: &Estimate, b: &Estimate, sigmas: f64) -> bool {
    (a.mean - b.mean).abs() <= sigmas * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt()
}

#[test]
fn gauge_is_homogeneous() {
    let mut rng = block_rng(7, 0);
    for g in builtins() {
        let gauge = Gauge::new(&g);
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..g.dim()).map(|_| rng.random_range(-3.0..3.0)).collect();
            let (p, q) = (rng.random_range(1..40) as f64, rng.random_range(1..40) as f64);
            let l = p / q;
            let lhs = gauge.eval(&gauge.dilate(l, &x));
            let rhs = l * gauge.eval(&x);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs, "{}: {lhs} vs {rhs}", g.name());
        }
    }
}

#[test]
fn gauge_examples() {
    let h3 = Gauge::new(&group("heisenberg:1"));
    assert_eq!(h3.eval(&[0.0, 0.0, 1.0]), 1.0);
    assert_eq!(h3.eval(&[0.0, 0.0, 0.0]), 0.0);
    let r3 = Gauge::new(&group("abelian:3"));
    assert!((r3.eval(&[1.0, 2.0, 2.0]) - 3.0).abs() < 1e-15);
}

#[test]
fn cutoff_profile() {
    let c = Cutoff::new(2.0, 16.0).unwrap();
    assert_eq!(c.profile(1.0), 1.0);
    assert_eq!(c.profile(2.0), 1.0);
    assert!((c.profile(8.0) - 0.5).abs() < 1e-15);
    assert_eq!(c.profile(32.0), 0.0);
    assert_eq!(c.profile(100.0), 0.0);
    assert!(Cutoff::new(1.0, 1.0).is_err());
}

#[test]
fn cutoff_gradient_scale_is_invariant() {
    for spec in ["abelian:3", "heisenberg:1"] {
        let g = group(spec);
        let base = cutoff_gradient_scale(&g, 1.0, 4.0, 40_000, 3).unwrap();
        for (radius, ratio) in [(10.0, 4.0), (1.0, 64.0), (0.1, 1024.0)] {
            let s = cutoff_gradient_scale(&g, radius, ratio, 40_000, 3).unwrap();
            assert!((s / base - 1.0).abs() < 0.05, "{spec} R={radius} λ={ratio}: {s} vs {base}");
        }
    }
}

#[test]
fn annulus_area() {
    let gauge = Gauge::new(&group("abelian:2"));
    let est = shell_integral(&gauge, |_| 1.0, 1.0, 2.0, 100_000, 1, 4).unwrap();
    assert!((est.mean - 3.0 * std::f64::consts::PI).abs() < 3.0 * est.stderr);
}

/// `r^{−Q}(x₁/r)²` is δ-homogeneous of degree `−Q` and not constant on spheres.
fn homogeneous_integrand(gauge: &Gauge) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    let q = gauge.homogeneous_dim() as i32;
    move |x: &[f64]| {
        let r = gauge.eval(x);
        r.powi(-q) * (x[0] / r).powi(2)
    }
}

#[test]
fn logarithmic_growth_over_shells() {
    let gauge = Gauge::new(&group("heisenberg:1"));
    let f = homogeneous_integrand(&gauge);
    let per_log: Vec<Estimate> = [4.0f64, 16.0, 64.0]
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let e = shell_integral(&gauge, &f, 1.0, l, 200_000, 10 + i as u64, 4).unwrap();
            Estimate {
                mean: e.mean / l.ln(),
                stderr: e.stderr / l.ln(),
                samples: e.samples,
            }
        })
        .collect();
    assert!(within(&per_log[0], &per_log[1], 3.0));
    assert!(within(&per_log[1], &per_log[2], 3.0));
}

#[test]
fn scale_invariance_of_homogeneous_integrals() {
    let gauge = Gauge::new(&group("engel"));
    let f = homogeneous_integrand(&gauge);
    let at = |r: f64, seed| shell_integral(&gauge, &f, r, 2.0 * r, 200_000, seed, 4).unwrap();
    let base = at(1.0, 20);
    for (r, seed) in [(0.01, 21), (100.0, 22)] {
        assert!(within(&base, &at(r, seed), 3.0));
    }
}

#[test]
fn shells_are_validated() {
    let gauge = Gauge::new(&group("abelian:2"));
    assert!(matches!(
        shell_integral(&gauge, |_| 1.0, 2.0, 1.0, 10_000, 0, 1),
        Err(NumericError::DegenerateShell { .. })
    ));
    assert!(matches!(
        shell_integral(&gauge, |_| 1.0, 1.0, 2.0, 10, 0, 1),
        Err(NumericError::TooFewSamples { .. })
    ));
}

#[test]
fn experiments_are_reproducible() {
    let g = group("heisenberg:1");
    let mc = |shards| SamplingConfig {
        samples: 20_000,
        seed: 99,
        shards,
    };
    let a = cutoff_norm_experiment(&g, 1, &[16.0, 256.0], 1.0, &mc(1)).unwrap();
    let b = cutoff_norm_experiment(&g, 1, &[16.0, 256.0], 1.0, &mc(7)).unwrap();
    assert_eq!(a.estimates, b.estimates);
    assert_eq!(a.stderr, b.stderr);
    assert!(matches!(
        cutoff_norm_experiment(&g, 4, &[16.0], 1.0, &mc(1)),
        Err(NumericError::OrderTooHigh { m: 4, q: 4 })
    ));
}
