//! Structured experiment reports and log-log fits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub group: String,
    pub operation: String,
    pub samples: u64,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
}

/// Least-squares line with the 95% half-width of the slope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub ci: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    /// Name of the swept parameter, e.g. `lambda` or `radius`.
    pub abscissa: String,
    pub points: Vec<f64>,
    pub estimates: Vec<f64>,
    pub stderr: Vec<f64>,
    pub fit: Option<Fit>,
    pub expected: BTreeMap<String, f64>,
    pub series: BTreeMap<String, Vec<f64>>,
    pub seed: u64,
    pub samples: u64,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig, abscissa: &str) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            seed: config.seed,
            samples: config.samples,
            config,
            abscissa: abscissa.to_string(),
            points: Vec::new(),
            estimates: Vec::new(),
            stderr: Vec::new(),
            fit: None,
            expected: BTreeMap::new(),
            series: BTreeMap::new(),
        }
    }
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<Fit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ci = (n > 2).then(|| {
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        let se = (rss / (nf - 2.0) / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, nf - 2.0).expect("positive dof").inverse_cdf(0.975);
        t * se
    });
    Some(Fit { slope, intercept, ci })
}
