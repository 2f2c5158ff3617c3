//! Result documents and their text and JSON renderings.

use std::collections::BTreeSet;

use rumin_core::forms::Exterior;
use rumin_core::jsets::q_exponent_from;
use rumin_core::numeric::report::ExperimentReport;
use rumin_core::rational::format_rational;
use rumin_core::rumin::betti_numbers;
use rumin_core::{
    leibniz_check, linear_growth_primitive, weights_table, InvariantForm, JsetScan, PolyForm, RuminCalculus,
    RuminSpace, StratifiedLieAlgebra,
};
use serde_json::{json, Map, Value};

use crate::{Cli, CliError, Command, SCHEMA_VERSION};

pub(crate) struct Document {
    command: &'static str,
    pub(crate) config: Map<String, Value>,
    pub(crate) warnings: Vec<String>,
    result: Value,
    text: Vec<String>,
}

fn verb(c: &Command) -> &'static str {
    match c {
        Command::Group => "group",
        Command::Betti => "betti",
        Command::Weights => "weights",
        Command::Jsets { .. } => "jsets",
        Command::Exponents => "exponents",
        Command::Dc { .. } => "dc",
        Command::Leibniz { .. } => "leibniz",
        Command::Primitive { .. } => "primitive",
        Command::VerifyCutoff { .. } => "verify-cutoff",
        Command::VerifyScaling { .. } => "verify-scaling",
        Command::VerifyPairing { .. } => "verify-pairing",
        Command::Experiment { .. } => "experiment",
    }
}

fn set_text(s: &BTreeSet<u32>) -> String {
    let items: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// Left-aligned columns separated by two spaces.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

impl Document {
    pub(crate) fn new(cli: &Cli, reference: &str, g: &StratifiedLieAlgebra) -> Self {
        let mut config = Map::new();
        config.insert("group".into(), reference.into());
        config.insert("group_name".into(), g.name().into());
        config.insert("dimension".into(), g.dim().into());
        config.insert("layer_dims".into(), json!(g.layer_dims()));
        config.insert("homogeneous_dimension".into(), g.homogeneous_dim().into());
        config.insert("seed".into(), cli.seed.into());
        config.insert("shards".into(), cli.shards.into());
        Document {
            command: verb(&cli.command),
            config,
            warnings: Vec::new(),
            result: Value::Null,
            text: Vec::new(),
        }
    }

    pub(crate) fn option(&mut self, key: &str, value: impl ToString) {
        self.config.insert(key.into(), value.to_string().into());
    }

    pub(crate) fn to_json(&self) -> String {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "warnings": self.warnings,
            "result": self.result,
        });
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    }

    pub(crate) fn to_text(&self) -> String {
        let mut out = format!("# rumin-calc {}\n", self.command);
        for (k, v) in &self.config {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out += &format!("# {k} = {v}\n");
        }
        for block in &self.text {
            out.push('\n');
            out += block;
        }
        out
    }
}

pub(crate) fn group(doc: &mut Document, g: &StratifiedLieAlgebra) {
    let brackets: Vec<Value> = g
        .entries()
        .into_iter()
        .map(|(i, j, k, c)| json!({"i": i + 1, "j": j + 1, "k": k + 1, "c": format_rational(&c)}))
        .collect();
    let rows: Vec<Vec<String>> = g
        .entries()
        .into_iter()
        .map(|(i, j, k, c)| vec![format!("[e{}, e{}]", i + 1, j + 1), format!("e{}", k + 1), format_rational(&c)])
        .collect();
    doc.result = json!({
        "name": g.name(),
        "dimension": g.dim(),
        "step": g.step(),
        "layer_dims": g.layer_dims(),
        "homogeneous_dimension": g.homogeneous_dim(),
        "valid": g.validate().is_ok(),
        "brackets": brackets,
    });
    doc.text.push(format!(
        "{}: dimension {}, step {}, homogeneous dimension {}, valid\n",
        g.name(),
        g.dim(),
        g.step(),
        g.homogeneous_dim()
    ));
    doc.text.push(table(&["bracket", "basis", "coefficient"], &rows));
}

pub(crate) fn betti(doc: &mut Document, g: &StratifiedLieAlgebra) {
    let ext = Exterior::new(g);
    let betti = betti_numbers(&ext);
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (k, b) in betti.iter().enumerate() {
        let exterior = ext.basis(k).len();
        let rumin = RuminSpace::new(&ext, k).dim();
        values.push(json!({"k": k, "exterior": exterior, "rumin": rumin, "betti": b}));
        rows.push(vec![k.to_string(), exterior.to_string(), rumin.to_string(), b.to_string()]);
    }
    doc.result = json!({ "degrees": values });
    doc.text.push(table(&["k", "dim Λ^k", "dim E0^k", "betti"], &rows));
}

pub(crate) fn weights(doc: &mut Document, g: &StratifiedLieAlgebra) {
    let table_data = weights_table(g);
    let values: Vec<Value> = table_data
        .iter()
        .enumerate()
        .map(|(k, w)| json!({"k": k, "weights": w}))
        .collect();
    let rows: Vec<Vec<String>> = table_data.iter().enumerate().map(|(k, w)| vec![k.to_string(), set_text(w)]).collect();
    doc.result = json!({ "degrees": values });
    doc.text.push(table(&["k", "W(k)"], &rows));
}

pub(crate) fn jsets(doc: &mut Document, g: &StratifiedLieAlgebra, bound: Option<u32>) -> Result<(), CliError> {
    let calc = RuminCalculus::new(g);
    let scan = match bound {
        Some(d) => JsetScan::run(&calc, d)?,
        None => JsetScan::minimal(&calc)?,
    };
    let mut by_weight = Vec::new();
    let mut rows = Vec::new();
    for (k, table_k) in scan.forward.iter().enumerate() {
        for (w, js) in table_k {
            by_weight.push(json!({"k": k, "w": w, "j": js}));
            rows.push(vec![k.to_string(), w.to_string(), set_text(js)]);
        }
    }
    let mut summary = Vec::new();
    let mut srows = Vec::new();
    for k in 0..scan.dim {
        let (fw, adj) = (scan.jset(k), scan.adjoint_jset(k + 1));
        summary.push(json!({"k": k, "j": fw, "adjoint_next": adj}));
        srows.push(vec![k.to_string(), set_text(&fw), set_text(&adj)]);
    }
    doc.result = json!({
        "bound": scan.bound,
        "by_weight": by_weight,
        "by_degree": summary,
        "max_jump": scan.max_jump(),
        "max_jump_below_q": scan.max_below_q(),
        "adjoint_matches": scan.adjoint_matches(),
        "duality": scan.duality_holds(),
        "symmetric": scan.symmetric(),
    });
    doc.text.push(format!("homogeneity bound {}\n", scan.bound));
    doc.text.push(table(&["k", "w", "J(k,w)"], &rows));
    doc.text.push(table(&["k", "J(k)", "J*(k+1)"], &srows));
    doc.text.push(format!(
        "M = {} (M < Q: {}), adjoint matches: {}, duality: {}, symmetric: {}\n",
        scan.max_jump(),
        scan.max_below_q(),
        scan.adjoint_matches(),
        scan.duality_holds(),
        scan.symmetric()
    ));
    Ok(())
}

pub(crate) fn exponents(doc: &mut Document, g: &StratifiedLieAlgebra) -> Result<(), CliError> {
    let calc = RuminCalculus::new(g);
    let rows_data = q_exponent_from(&JsetScan::minimal(&calc)?)?;
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for r in &rows_data {
        let reqs: Vec<Value> = r
            .spec
            .requirements
            .iter()
            .map(|(w, q)| json!({"w": w, "q": format_rational(q)}))
            .collect();
        let req_text: Vec<String> =
            r.spec.requirements.iter().map(|(w, q)| format!("w={w}: L^{}", format_rational(q))).collect();
        values.push(json!({"k": r.degree, "j": r.j, "q": format_rational(&r.q), "requirements": reqs}));
        rows.push(vec![r.degree.to_string(), r.j.to_string(), format_rational(&r.q), req_text.join(", ")]);
    }
    doc.result = json!({ "exponents": values });
    doc.text.push(table(&["k", "j", "q", "requirements"], &rows));
    Ok(())
}

pub(crate) fn dc(doc: &mut Document, g: &StratifiedLieAlgebra, a: &PolyForm) -> Result<(), CliError> {
    let calc = RuminCalculus::new(g);
    let out = calc.dc(a)?;
    let components: Map<String, Value> = out
        .weight_components(g.layers())
        .iter()
        .map(|(w, f)| (w.to_string(), f.to_string().into()))
        .collect();
    doc.result = json!({
        "input": a.to_string(),
        "degree": a.degree(),
        "output": out.to_string(),
        "components_by_weight": components,
    });
    doc.text.push(format!("d_c({a}) = {out}\n"));
    Ok(())
}

pub(crate) fn leibniz(doc: &mut Document, g: &StratifiedLieAlgebra, a: &PolyForm, b: &PolyForm) -> Result<(), CliError> {
    let calc = RuminCalculus::new(g);
    let r = leibniz_check(&calc, a, b)?;
    doc.result = json!({
        "h": r.h,
        "k": r.k,
        "regime_guaranteed": r.regime_guaranteed,
        "holds": r.holds(),
        "residual": r.residual.to_string(),
    });
    doc.text.push(format!(
        "degrees ({}, {}), guaranteed regime: {}, holds: {}\nresidual: {}\n",
        r.h,
        r.k,
        r.regime_guaranteed,
        r.holds(),
        r.residual
    ));
    Ok(())
}

pub(crate) fn primitive(doc: &mut Document, g: &StratifiedLieAlgebra, b: &InvariantForm) -> Result<(), CliError> {
    let calc = RuminCalculus::new(g);
    let alpha = linear_growth_primitive(&calc, b)?;
    let check = calc.dc(&alpha)? == PolyForm::from_invariant(b);
    doc.result = json!({
        "form": b.to_string(),
        "primitive": alpha.to_string(),
        "verified": check,
    });
    doc.text.push(format!("d_c({alpha}) = {b}  (verified: {check})\n"));
    Ok(())
}

pub(crate) fn experiment(doc: &mut Document, report: ExperimentReport) {
    let mut headers = vec![report.abscissa.clone(), "estimate".into(), "stderr".into()];
    headers.extend(report.series.keys().cloned());
    let rows: Vec<Vec<String>> = (0..report.points.len())
        .map(|i| {
            let mut row = vec![
                format!("{}", report.points[i]),
                format!("{:.6e}", report.estimates[i]),
                format!("{:.3e}", report.stderr[i]),
            ];
            for s in report.series.values() {
                row.push(s.get(i).map_or(String::new(), |v| format!("{v:.6e}")));
            }
            row
        })
        .collect();
    let hdr: Vec<&str> = headers.iter().map(String::as_str).collect();
    doc.text.push(format!("samples {}, seed {}\n", report.samples, report.seed));
    doc.text.push(table(&hdr, &rows));
    let mut tail = String::new();
    if let Some(f) = &report.fit {
        let ci = f.ci.map_or(String::new(), |c| format!(" ± {c:.4}"));
        tail += &format!("fitted slope {:.5}{ci}, intercept {:.5}\n", f.slope, f.intercept);
    }
    for (k, v) in &report.expected {
        tail += &format!("{k}: {v:.6}\n");
    }
    doc.text.push(tail);
    for (k, v) in &report.config.parameters {
        doc.config.insert(k.clone(), v.clone().into());
    }
    doc.config.insert("samples".into(), report.samples.into());
    doc.result = serde_json::to_value(&report).expect("serializable");
}
