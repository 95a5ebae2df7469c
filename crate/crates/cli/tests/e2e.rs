use std::process::Command;

use mirrorcalc::avhs::{ConnectionPresentation, GWData, WeightFiltration};
use mirrorcalc::io::{emit_json, parse_json, rat_matrix_from_json, JsonCodec};
use mirrorcalc::lattice::Lattice;
use mirrorcalc::matrix::QMatrix;
use mirrorcalc::series::OperatorSeries;
use mirrorcalc::{Int, Rat};
use mirrorcalc_cli::{run, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn go(args: &[&str]) -> Outcome {
    run(args.iter().copied())
}

fn machine(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "machine"]);
    let out = go(&a);
    (serde_json::from_str(&out.stdout).expect("machine output is JSON"), out.code)
}

#[test]
fn flat_fixture_exits_zero() {
    let toy = fixture("toy.json");
    let out = go(&["qcoh", "flat", "--in", &toy, "--degree", "4"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("flat: true"));
}

#[test]
fn non_associative_fixture_locates_first_commutator() {
    let f = fixture("nonassoc.json");
    let out = go(&["qcoh", "flat", "--in", &f, "--degree", "4"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("flat: false"));
    assert!(out.stdout.contains("first failure: commutator [N_1, N_2] at q^(1,1)"), "{}", out.stdout);

    let (rep, code) = machine(&["qcoh", "flat", "--in", &f, "--degree", "4"]);
    assert_eq!(code, 1);
    assert_eq!(rep["status"], "negative");
    assert_eq!(rep["results"]["first failure"]["part"], "commutator");
    assert_eq!(rep["results"]["first failure"]["monomial"], serde_json::json!([1, 1]));

    let out = go(&["qcoh", "assoc", "--in", &f, "--degree", "4"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("associative: false"));
}

#[test]
fn mukai_dimension_of_isotropic_class() {
    let out = go(&["mukai", "dim", "--in", &fixture("k3.json"), "--v", "0,mu,0"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("dimension: 2"));
}

#[test]
fn structure_sheaf_numbers() {
    let out = go(&["mukai", "chi", "--v", "1,0,1"]);
    assert!(out.stdout.contains("chi: 2"), "{}", out.stdout);
    let out = go(&["mukai", "dim", "--v", "1,0,1"]);
    assert!(out.stdout.contains("dimension: 0"));
}

#[test]
fn input_errors_exit_two() {
    let out = go(&["lattice", "pair", "--in", &fixture("asymmetric.json"), "--u", "1,0", "--v", "0,1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("gram symmetric"), "{}", out.stderr);

    let out = go(&["qcoh", "validate", "--in", &fixture("negative_eta.json")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("effective class"), "{}", out.stderr);

    let out = go(&["frobnicate"]);
    assert_eq!(out.code, 2);
    let out = go(&["qcoh", "flat", "--in", "/nonexistent/file.json"]);
    assert_eq!(out.code, 2);
    let out = go(&["mukai", "dim", "--v", "0,mu,0"]);
    assert_eq!(out.code, 2, "unknown names are input errors");
}

#[test]
fn syntax_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\n  \"rank\": 2,\n  \"gram\": [[0, 1] [1, 0]]\n}\n").unwrap();
    let out = go(&["lattice", "snf", "--in", p.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
}

#[test]
fn negative_verdicts_exit_one() {
    let cases: [&[&str]; 4] = [
        &["qcoh", "compare", "--in", &fixture("compare_different.json")],
        &["tori", "leray", "--in", &fixture("leray_bad.json")],
        &["mirrortest", "hodge-numbers", "--in", &fixture("quintic_self.json")],
        &["qcoh", "assoc", "--in", &fixture("nonassoc.json")],
    ];
    for args in cases {
        let out = go(args);
        assert_eq!(out.code, 1, "{args:?}: {}{}", out.stdout, out.stderr);
        assert!(out.stdout.contains("diagnostic:"));
    }
    let ok: [&[&str]; 4] = [
        &["qcoh", "compare", "--in", &fixture("compare_same.json")],
        &["tori", "leray", "--in", &fixture("leray.json")],
        &["mirrortest", "hodge-numbers", "--in", &fixture("quintic_mirror.json")],
        &["qcoh", "griffiths", "--in", &fixture("toy.json")],
    ];
    for args in ok {
        let out = go(args);
        assert_eq!(out.code, 0, "{args:?}: {}{}", out.stdout, out.stderr);
    }
}

fn toy_presentation() -> ConnectionPresentation {
    let text = std::fs::read_to_string(fixture("toy.json")).unwrap();
    let g = GWData::from_json(&parse_json(&text).unwrap()).unwrap();
    ConnectionPresentation::a_model(&g, 3).unwrap()
}

#[test]
fn griffiths_violations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = toy_presentation();

    // levels that do not nest
    let mut f = p.filtration().to_vec();
    f.swap(0, 1);
    let bad_nesting = p.clone().with_filtration(f).unwrap();

    // 1 ↦ H² at order q: F³ is carried outside F²
    let mut ops = p.operators().to_vec();
    let mut m = QMatrix::zeros(4, 4);
    m[(2, 0)] = Rat::from_integer(Int::from(1));
    ops[0].add_term(vec![1], m);
    let bad_operator = p.clone().with_operators(ops).unwrap();

    for (name, q) in [("nesting.json", bad_nesting), ("operator.json", bad_operator)] {
        let path = dir.path().join(name);
        std::fs::write(&path, emit_json(&q.to_json())).unwrap();
        let out = go(&["qcoh", "griffiths", "--in", path.to_str().unwrap(), "--degree", "3"]);
        assert_eq!(out.code, 1, "{name}: {}", out.stdout);
        assert!(out.stdout.contains("transversal: false"));
    }

    let path = dir.path().join("good.json");
    std::fs::write(&path, emit_json(&p.to_json())).unwrap();
    let out = go(&["qcoh", "griffiths", "--in", path.to_str().unwrap(), "--degree", "3"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}

#[test]
fn presentation_files_work_for_flatness() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = toy_presentation();
    let path = dir.path().join("p.json");
    std::fs::write(&path, emit_json(&p.to_json())).unwrap();
    assert_eq!(go(&["qcoh", "flat", "--in", path.to_str().unwrap()]).code, 0);

    // two constant operators that do not commute
    let (mut x, mut y) = (QMatrix::zeros(2, 2), QMatrix::zeros(2, 2));
    x[(1, 0)] = Rat::from_integer(Int::from(1));
    y[(0, 1)] = Rat::from_integer(Int::from(1));
    let ops = vec![OperatorSeries::constant(2, 2, x), OperatorSeries::constant(2, 2, y)];
    p = ConnectionPresentation::new(2, ops, vec![QMatrix::identity(2)], None).unwrap();
    std::fs::write(&path, emit_json(&p.to_json())).unwrap();
    let out = go(&["qcoh", "flat", "--in", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("commutator [N_1, N_2] at q^(0,0)"), "{}", out.stdout);
}

#[test]
fn reported_filtrations_revalidate() {
    let toy = fixture("toy.json");
    let (rep, code) = machine(&["qcoh", "weights", "--in", &toy]);
    assert_eq!(code, 0);
    let w = WeightFiltration::from_json(&rep["results"]["filtration"]).unwrap();
    let (res, _) = machine(&["qcoh", "residues", "--in", &toy]);
    let n = rat_matrix_from_json(&res["results"]["N_1(0)"], "", Some(4)).unwrap();
    w.verify(&n).unwrap();
    assert_eq!((w.lowest, w.highest()), (0, 6));
    for k in [0, 2, 4, 6] {
        assert_eq!(w.graded_dim(k), 1);
    }

    let (rep, code) = machine(&["lattice", "quotient", "--in", &fixture("u3.json")]);
    assert_eq!(code, 0);
    let q = Lattice::from_json(&rep["results"]["quotient"]).unwrap();
    assert!(q.is_even() && q.is_unimodular());
    assert!(rep["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

fn all_invocations() -> Vec<Vec<String>> {
    let f = fixture;
    let list: Vec<Vec<String>> = vec![
        vec!["lattice", "pair", "--in", &f("u.json"), "--u", "1,0", "--v", "0,1"].into_iter().map(String::from).collect(),
        ["lattice", "snf", "--in", &f("snf.json")].map(String::from).to_vec(),
        ["lattice", "complement", "--in", &f("u3.json")].map(String::from).to_vec(),
        ["lattice", "quotient", "--in", &f("u3.json")].map(String::from).to_vec(),
        ["lattice", "standardize", "--in", &f("u3.json")].map(String::from).to_vec(),
        ["mukai", "vec", "--in", &f("chern.json")].map(String::from).to_vec(),
        ["mukai", "chi", "--v", "1,0,1"].map(String::from).to_vec(),
        ["mukai", "dim", "--in", &f("k3.json"), "--v", "0,mu,0"].map(String::from).to_vec(),
        ["mukai", "mirror", "--in", &f("k3.json"), "--v", "0,mu,0"].map(String::from).to_vec(),
        ["mukai", "hodge", "--in", &f("period.json")].map(String::from).to_vec(),
        ["qcoh", "validate", "--in", &f("toy.json")].map(String::from).to_vec(),
        ["qcoh", "flat", "--in", &f("nonassoc.json")].map(String::from).to_vec(),
        ["qcoh", "assoc", "--in", &f("toy.json")].map(String::from).to_vec(),
        ["qcoh", "residues", "--in", &f("nonassoc.json")].map(String::from).to_vec(),
        ["qcoh", "weights", "--in", &f("nilpotent.json")].map(String::from).to_vec(),
        ["qcoh", "griffiths", "--in", &f("toy.json")].map(String::from).to_vec(),
        ["qcoh", "compare", "--in", &f("compare_same.json")].map(String::from).to_vec(),
        ["tori", "ann", "--in", &f("sub.json")].map(String::from).to_vec(),
        ["tori", "dual", "--in", &f("trisection.json")].map(String::from).to_vec(),
        ["tori", "leray", "--in", &f("leray.json")].map(String::from).to_vec(),
        ["mirrortest", "hodge-numbers", "--in", &f("quintic_mirror.json")].map(String::from).to_vec(),
    ];
    list
}

#[test]
fn every_command_is_byte_reproducible() {
    for args in all_invocations() {
        for format in ["text", "machine"] {
            let mut a = args.clone();
            a.extend(["--format".to_string(), format.to_string()]);
            let first = run(a.clone());
            let second = run(a.clone());
            assert_eq!(first, second, "{a:?}");
            assert_ne!(first.code, 2, "{a:?}: {}", first.stderr);
        }
    }
}

#[test]
fn machine_reports_have_sorted_keys_and_digests() {
    let (rep, _) = machine(&["tori", "ann", "--in", &fixture("sub.json")]);
    let inputs = rep["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 1);
    assert_eq!(inputs[0]["sha256"].as_str().unwrap().len(), 64);
    let keys: Vec<&String> = rep.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mirrorcalc");
    let toy = fixture("toy.json");
    let nonassoc = fixture("nonassoc.json");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["qcoh", "flat", "--in", &toy, "--degree", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("flat: true"));
    assert_eq!(status(&["qcoh", "flat", "--in", &nonassoc, "--degree", "4"]).status.code(), Some(1));
    assert_eq!(status(&["nope"]).status.code(), Some(2));
}
