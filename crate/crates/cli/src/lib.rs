//! `rumin-calc`: tables, symbolic queries and experiments from the command line.
//!
//! Every run produces one document. With `--json` it is a single JSON object
//! with a `schema_version`, the resolved configuration and the result; without
//! it, the same content is rendered as aligned text tables.

pub mod formlang;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use rumin_core::numeric::{
    cutoff_norm_experiment, pairing_experiment, scaling_exponent_experiment, top_degree_experiment, Decay,
    NumericError, SamplingConfig,
};
use rumin_core::{parse_group, AlgebraError, CalculusError, GroupFamily, InvariantForm, PolyForm, StratifiedLieAlgebra};
use thiserror::Error;

pub use formlang::{parse_form, FormParseError, Parsed};
use output::Document;

/// Version of the structured output layout.
pub const SCHEMA_VERSION: u32 = 1;

const DEFAULT_SAMPLES: u64 = 100_000;
// shards only split work, so a fixed default keeps reports machine-independent
const DEFAULT_SHARDS: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "rumin-calc", version, about = "Rumin complex calculator for Carnot groups")]
pub struct Cli {
    /// Built-in group (`abelian:N`, `heisenberg:M`, `engel`) or path to a group document.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Emit a single JSON document instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for Monte Carlo experiments.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Parallel shards for Monte Carlo experiments; results do not depend on it.
    #[arg(long, global = true, default_value_t = DEFAULT_SHARDS)]
    shards: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Show and validate the group.
    Group,
    /// Exterior, Rumin and cohomology dimensions per degree.
    Betti,
    /// Weight sets of the Rumin spaces.
    Weights,
    /// Jump sets of the Rumin differential.
    Jsets {
        /// Homogeneity bound for the monomial scan.
        #[arg(long)]
        max_homogeneity: Option<u32>,
    },
    /// Critical exponents q(G,k).
    Exponents,
    /// Apply the Rumin differential to a form.
    Dc {
        #[arg(long)]
        form: String,
        /// Expected degree of the input form.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Check the Leibniz rule on a pair of Rumin forms (Heisenberg groups).
    Leibniz {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Find a primitive of linear growth for a left-invariant closed form.
    Primitive {
        #[arg(long)]
        form: String,
    },
    /// L^{Q/m} norms of derivatives of the logarithmic cut-off.
    VerifyCutoff {
        #[arg(long)]
        m: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Dilation scaling of shell L¹ norms.
    VerifyScaling {
        #[arg(long)]
        form: String,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        /// Second form whose exponent is compared with the first.
        #[arg(long)]
        pair: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Cut-off pairings of d_c φ against a left-invariant form.
    VerifyPairing {
        #[arg(long, required_unless_present = "top_degree")]
        phi: Option<String>,
        #[arg(long, required_unless_present = "top_degree")]
        beta: Option<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        /// Cut-off ratio λ.
        #[arg(long, default_value_t = 4.0)]
        lambda: f64,
        /// `gaussian` or `power:A` for the damping (1 + r^{2N})^{-A}.
        #[arg(long, default_value = "gaussian", value_parser = parse_decay)]
        decay: Decay,
        /// Integrate exp(-|x|^2) vol instead of a pairing.
        #[arg(long, conflicts_with_all = ["phi", "beta"])]
        top_degree: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run an experiment described by a TOML file.
    Experiment {
        #[arg(long)]
        config: String,
    },
}

#[derive(Debug, Args)]
struct Sampling {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
}

fn parse_decay(s: &str) -> Result<Decay, String> {
    if s == "gaussian" {
        return Ok(Decay::Gaussian);
    }
    s.strip_prefix("power:")
        .and_then(|a| a.parse::<f64>().ok())
        .filter(|a| *a > 0.0)
        .map(Decay::GaugePower)
        .ok_or_else(|| format!("expected `gaussian` or `power:A` with A > 0, found `{s}`"))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid --{flag}: {source}\n  {text}\n  {caret}\nexpected: {grammar}", caret = caret(.source.position), grammar = formlang::GRAMMAR)]
    Form {
        flag: &'static str,
        text: String,
        source: FormParseError,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

fn caret(pos: usize) -> String {
    format!("{}^", " ".repeat(pos))
}

impl CliError {
    /// 1 for domain errors, 2 for usage and parse errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Form { .. } => 2,
            CliError::Algebra(AlgebraError::Parse { .. } | AlgebraError::UnknownGroup(_)) => 2,
            CliError::Numeric(NumericError::InvalidParameter(_)) => 2,
            _ => 1,
        }
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// the document to `out`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(doc) => {
            for w in &doc.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let text = if cli.json { doc.to_json() } else { doc.to_text() };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Resolves `family[:param]` or a path to a group document.
pub fn load_group(reference: &str) -> Result<StratifiedLieAlgebra, CliError> {
    if let Ok(family) = reference.parse::<GroupFamily>() {
        return Ok(StratifiedLieAlgebra::builtin(family));
    }
    let path = Path::new(reference);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {reference}: {e}")))?;
        return Ok(parse_group(&text)?);
    }
    Err(AlgebraError::UnknownGroup(reference.to_string()).into())
}

fn form_arg(flag: &'static str, text: &str, dim: usize, warnings: &mut Vec<String>) -> Result<PolyForm, CliError> {
    let parsed = parse_form(text, dim).map_err(|source| CliError::Form {
        flag,
        text: text.to_string(),
        source,
    })?;
    warnings.extend(parsed.warnings.into_iter().map(|w| format!("--{flag}: {w}")));
    Ok(parsed.form)
}

fn invariant_arg(flag: &'static str, text: &str, dim: usize, warnings: &mut Vec<String>) -> Result<InvariantForm, CliError> {
    form_arg(flag, text, dim, warnings)?
        .as_invariant()
        .ok_or_else(|| CliError::Usage(format!("--{flag} must be a left-invariant form (constant coefficients)")))
}

fn sampling(cli: &Cli, s: &Sampling) -> SamplingConfig {
    SamplingConfig {
        samples: s.samples,
        seed: cli.seed,
        shards: cli.shards.max(1),
    }
}

fn execute(cli: &Cli) -> Result<Document, CliError> {
    if let Command::Experiment { config } = &cli.command {
        return experiment(cli, config);
    }
    let reference = cli
        .group
        .as_deref()
        .ok_or_else(|| CliError::Usage("missing --group <ref|path>".into()))?;
    let g = load_group(reference)?;
    let mut doc = Document::new(cli, reference, &g);
    let n = g.dim();
    match &cli.command {
        Command::Group => output::group(&mut doc, &g),
        Command::Betti => output::betti(&mut doc, &g),
        Command::Weights => output::weights(&mut doc, &g),
        Command::Jsets { max_homogeneity } => {
            if let Some(d) = max_homogeneity {
                doc.option("max_homogeneity", d);
            }
            output::jsets(&mut doc, &g, *max_homogeneity)?
        }
        Command::Exponents => output::exponents(&mut doc, &g)?,
        Command::Dc { form, degree } => {
            doc.option("form", form);
            let a = form_arg("form", form, n, &mut doc.warnings)?;
            if let Some(k) = degree {
                doc.option("degree", k);
                if *k != a.degree() && !a.is_zero() {
                    return Err(CliError::Usage(format!("--form has degree {}, but --degree {k} was given", a.degree())));
                }
            }
            let a = match degree {
                Some(k) if a.is_zero() => PolyForm::zero(n, *k),
                _ => a,
            };
            output::dc(&mut doc, &g, &a)?
        }
        Command::Leibniz { alpha, beta } => {
            doc.option("alpha", alpha);
            doc.option("beta", beta);
            let a = form_arg("alpha", alpha, n, &mut doc.warnings)?;
            let b = form_arg("beta", beta, n, &mut doc.warnings)?;
            output::leibniz(&mut doc, &g, &a, &b)?
        }
        Command::Primitive { form } => {
            doc.option("form", form);
            let b = invariant_arg("form", form, n, &mut doc.warnings)?;
            output::primitive(&mut doc, &g, &b)?
        }
        Command::VerifyCutoff {
            m,
            lambdas,
            radius,
            sampling: s,
        } => {
            let report = cutoff_norm_experiment(&g, *m, lambdas, *radius, &sampling(cli, s))?;
            output::experiment(&mut doc, report)
        }
        Command::VerifyScaling {
            form,
            radii,
            pair,
            sampling: s,
        } => {
            let a = form_arg("form", form, n, &mut doc.warnings)?;
            let p = pair.as_ref().map(|p| form_arg("pair", p, n, &mut doc.warnings)).transpose()?;
            let report = scaling_exponent_experiment(&g, &a, radii, &sampling(cli, s), p.as_ref())?;
            output::experiment(&mut doc, report)
        }
        Command::VerifyPairing {
            phi,
            beta,
            radii,
            lambda,
            decay,
            top_degree,
            sampling: s,
        } => {
            let mc = sampling(cli, s);
            let report = if *top_degree {
                top_degree_experiment(&g, radii, *lambda, &mc)?
            } else {
                let (phi, beta) = (phi.as_deref().unwrap_or_default(), beta.as_deref().unwrap_or_default());
                let f = form_arg("phi", phi, n, &mut doc.warnings)?;
                let b = invariant_arg("beta", beta, n, &mut doc.warnings)?;
                pairing_experiment(&g, &f, &b, *decay, radii, *lambda, &mc)?
            };
            output::experiment(&mut doc, report)
        }
        Command::Experiment { .. } => unreachable!("handled above"),
    }
    Ok(doc)
}

/// Experiment file: top-level `group`, `operation` (a `verify-*` verb) and
/// optional `seed`, `samples`, `shards`; the `[parameters]` table holds the
/// verb's flags, with arrays for comma-separated lists.
#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    group: String,
    operation: String,
    seed: Option<u64>,
    samples: Option<u64>,
    shards: Option<usize>,
    #[serde(default)]
    parameters: toml::Table,
}

fn toml_scalar(v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        toml::Value::Array(items) => Ok(items.iter().map(toml_scalar).collect::<Result<Vec<_>, _>>()?.join(",")),
        other => Err(CliError::Usage(format!("unsupported parameter value `{other}`"))),
    }
}

fn experiment(cli: &Cli, path: &str) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    let file: ExperimentFile = toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid experiment file {path}: {e}")))?;
    if !file.operation.starts_with("verify-") {
        return Err(CliError::Usage(format!(
            "operation must be verify-cutoff, verify-scaling or verify-pairing, found `{}`",
            file.operation
        )));
    }
    let mut argv: Vec<String> = vec!["rumin-calc".into(), "--group".into(), file.group.clone()];
    argv.extend(["--seed".into(), file.seed.unwrap_or(cli.seed).to_string()]);
    argv.extend(["--shards".into(), file.shards.unwrap_or(cli.shards).to_string()]);
    argv.push(file.operation.clone());
    if let Some(s) = file.samples {
        argv.extend(["--samples".into(), s.to_string()]);
    }
    for (key, value) in &file.parameters {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => argv.push(flag),
            toml::Value::Boolean(false) => {}
            v => argv.extend([flag, toml_scalar(v)?]),
        }
    }
    let inner = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(format!("experiment file {path}: {}", e.render())))?;
    let mut doc = execute(&inner)?;
    doc.config.insert("config_file".into(), path.into());
    Ok(doc)
}
