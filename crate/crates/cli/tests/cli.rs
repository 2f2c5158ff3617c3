use std::process::Command;

use rumin_cli::{parse_form, run};

fn calc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rumin-calc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, err) = calc(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn q_column(doc: &serde_json::Value) -> Vec<String> {
    doc["result"]["exponents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["q"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn heisenberg_exponent_table() {
    let doc = json(&["exponents", "--group", "heisenberg:1"]);
    assert_eq!(q_column(&doc), ["4/3", "2", "4/3"]);
    assert_eq!(doc["schema_version"], 1);
    let ks: Vec<u64> = doc["result"]["exponents"].as_array().unwrap().iter().map(|r| r["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, [1, 2, 3]);
}

#[test]
fn engel_exponent_table() {
    let doc = json(&["exponents", "--group", "engel"]);
    assert_eq!(q_column(&doc), ["7/6", "7/5", "7/5", "7/6"]);
    let (code, out, _) = calc(&["exponents", "--group", "engel"]);
    assert_eq!(code, 0);
    assert!(out.contains("7/5"));
}

#[test]
fn contact_primitive_is_a_domain_error() {
    let bin = env!("CARGO_BIN_EXE_rumin-calc");
    let out = Command::new(bin)
        .args(["primitive", "--group", "heisenberg:1", "--form", "t[3]^t[1]"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("linear growth"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = calc(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("frobnicate"));
    let (code, _, err) = calc(&["dc", "--group", "heisenberg:1", "--form", "t[1] + t[1]^t[2]"]);
    assert_eq!(code, 2);
    assert!(err.contains("position 7") && err.contains("form :="));
    let (code, _, _) = calc(&["betti", "--group", "nilpotent:3"]);
    assert_eq!(code, 2);
    let (code, _, _) = calc(&["betti"]);
    assert_eq!(code, 2);
}

#[test]
fn repeated_factor_warns_but_succeeds() {
    let (code, out, err) = calc(&["dc", "--group", "heisenberg:1", "--form", "t[1]^t[1]"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"));
    assert!(out.contains("= 0"));
}

#[test]
fn dc_reports_the_middle_degree_operator() {
    let doc = json(&["dc", "--group", "heisenberg:1", "--form", "x3*t[1]"]);
    assert_eq!(doc["result"]["output"], "-3/2*t[1]^t[3]");
    assert_eq!(doc["config"]["form"], "x3*t[1]");
    let (code, _, _) = calc(&["dc", "--group", "heisenberg:1", "--form", "t[3]"]);
    assert_eq!(code, 1);
}

#[test]
fn degree_flag_must_agree() {
    let (code, _, _) = calc(&["dc", "--group", "heisenberg:1", "--form", "t[1]", "--degree", "2"]);
    assert_eq!(code, 2);
    let doc = json(&["dc", "--group", "heisenberg:1", "--form", "0", "--degree", "2"]);
    assert_eq!(doc["result"]["degree"], 2);
}

#[test]
fn printer_round_trip() {
    for text in ["t[1]^t[2]", "x2*t[1] - 1/2*t[3]", "3*t[1]^t[3] + x1^2*x3*t[2]^t[3]", "5/7 - x1", "-t[1]^t[2]^t[3]", "0"] {
        let f = parse_form(text, 3).unwrap().form;
        assert_eq!(f.to_string(), text);
        assert_eq!(parse_form(&f.to_string(), 3).unwrap().form, f);
    }
}

#[test]
fn structured_output_is_deterministic() {
    let args = ["verify-cutoff", "--group", "heisenberg:1", "--m", "1", "--lambdas", "16,256", "--samples", "5000", "--seed", "11"];
    let (c1, a, _) = calc(&[&args[..], &["--json"]].concat());
    let (c2, b, _) = calc(&[&args[..], &["--json", "--shards", "3"]].concat());
    assert_eq!((c1, c2), (0, 0));
    let strip = |s: &str| s.replace("\"shards\": 3", "\"shards\": 8");
    assert_eq!(a, strip(&b));
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["result"]["seed"], 11);
    assert_eq!(doc["result"]["stderr"].as_array().unwrap().len(), 2);
}

#[test]
fn tables_for_every_builtin() {
    for g in ["abelian:3", "heisenberg:1", "heisenberg:2", "engel"] {
        for verb in ["group", "betti", "weights", "jsets", "exponents"] {
            let (code, out, err) = calc(&[verb, "--group", g]);
            assert_eq!(code, 0, "{verb} {g}: {err}");
            assert!(out.starts_with(&format!("# rumin-calc {verb}\n")));
        }
    }
}

#[test]
fn group_documents_load_from_files() {
    let dir = std::env::temp_dir().join(format!("rumin-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h3.txt");
    std::fs::write(&path, "name: h3\nlayers: [2, 1]\nbracket 1 2 -> 3 : 1\n").unwrap();
    let doc = json(&["exponents", "--group", path.to_str().unwrap()]);
    assert_eq!(q_column(&doc), ["4/3", "2", "4/3"]);
    std::fs::write(&path, "name: bad\nlayers: [2, 1]\nbracket 1 2 -> 3 : oops\n").unwrap();
    assert_eq!(calc(&["betti", "--group", path.to_str().unwrap()]).0, 2);
}

#[test]
fn experiment_file_matches_direct_invocation() {
    let dir = std::env::temp_dir().join(format!("rumin-cli-exp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scaling.toml");
    std::fs::write(
        &path,
        "group = \"heisenberg:1\"\noperation = \"verify-scaling\"\nseed = 5\nsamples = 4000\n\n[parameters]\nform = \"t[3]\"\nradii = [1, 2, 4]\n",
    )
    .unwrap();
    let file = json(&["experiment", "--config", path.to_str().unwrap()]);
    let direct = json(&["verify-scaling", "--group", "heisenberg:1", "--seed", "5", "--samples", "4000", "--form", "t[3]", "--radii", "1,2,4"]);
    assert_eq!(file["result"], direct["result"]);
    assert_eq!(file["result"]["expected"]["weight"], 2.0);
}
