use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

use kwavelet::measure::CylinderRecord;
use kwavelet::wavelets::BasisRecord;
use kwavelet::{fixtures, GraphDocument, KGraph};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kwavelet"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn error_of(out: &Output) -> (i32, Value) {
    let err: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    (out.status.code().unwrap(), err)
}

#[test]
fn validate_ledrappier() {
    let recs = records(&run(&["validate", "ledrappier.kg"]));
    let r = &recs[0];
    assert_eq!(r["status"], "ok");
    assert_eq!(r["vertices"], 4);
    assert_eq!(r["edges"], serde_json::json!([8, 8]));
    assert_eq!(r["squares"], 16);
    assert_eq!(r["cube_condition"], "n/a (k=2)");
}

#[test]
fn emitted_graph_reparses() {
    for name in ["lambda3.kg", "ledrappier.kg", "lambda1-sphere.kg", "bouquet-3.kg"] {
        let recs = records(&run(&["validate", name, "--emit"]));
        let doc: GraphDocument = serde_json::from_value(recs[1].clone()).unwrap();
        let g = KGraph::from_document(&doc).unwrap();
        assert_eq!(g.to_document(), doc);
    }
    let original = fixtures::ledrappier().to_document();
    let recs = records(&run(&["validate", "ledrappier.kg", "--emit"]));
    let doc: GraphDocument = serde_json::from_value(recs[1].clone()).unwrap();
    assert_eq!(doc, original);
}

#[test]
fn list_family_has_28() {
    let recs = records(&run(&[
        "wavelets",
        "--shape",
        "1,2",
        "--graph",
        "ledrappier.kg",
        "--list-family",
    ]));
    assert_eq!(recs[0]["wavelets"], 28);
    assert_eq!(recs.len(), 29);
    let first = &recs[1];
    assert_eq!(first["vertex"], "1");
    assert_eq!(first["m"], 1);
    let terms: Vec<CylinderRecord> = serde_json::from_value(first["terms"].clone()).unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!((terms[0].path.join(""), terms[0].coeff), ("acc".to_string(), 4.0));
    assert_eq!((terms[1].path.join(""), terms[1].coeff), ("ace".to_string(), -4.0));
}

#[test]
fn eigen_records_match_printed_values() {
    let recs = records(&run(&["spectral", "--graph", "ledrappier.kg", "--eig"]));
    assert_eq!(recs.len(), 4);
    let values: Vec<f64> = recs.iter().map(|r| r["eigenvalue"].as_f64().unwrap()).collect();
    for (got, want) in values.iter().zip([0.0, 5.17, 8.0, 10.83]) {
        assert!((got - want).abs() < 0.01);
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &[
            "wavelets",
            "--shape",
            "1,1",
            "--graph",
            "ledrappier.kg",
            "--basis",
            "--depth",
            "2",
        ],
        &["spectral", "--graph", "ledrappier.kg", "--reconstruct", "1,0,-1,0"],
        &["markov", "--weights", "0.2,0.3,0.5", "--depth", "2"],
        &["ck-check", "--graph", "lambda3.kg", "--level", "2,2", "--csv"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut bytes = Vec::new();
        for run_no in 0..2 {
            let path = dir.path().join(format!("{i}-{run_no}.out"));
            let mut full: Vec<&str> = args.to_vec();
            let p = path.to_str().unwrap().to_string();
            full.extend(["--out", &p]);
            let out = run(&full);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            bytes.push(fs::read(&path).unwrap());
        }
        assert!(!bytes[0].is_empty());
        assert_eq!(bytes[0], bytes[1]);
    }
}

#[test]
fn basis_records_reparse() {
    let recs = records(&run(&[
        "wavelets",
        "--shape",
        "1,2",
        "--graph",
        "ledrappier.kg",
        "--basis",
    ]));
    assert_eq!(recs[0]["size"], 32);
    for r in &recs[1..] {
        let b: BasisRecord = serde_json::from_value(r.clone()).unwrap();
        assert_eq!(serde_json::to_value(&b).unwrap(), *r);
    }
}

#[test]
fn analyze_then_synthesize() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    fs::write(
        &f,
        r#"[{"path":["a","c"],"coeff":1.5},{"path":["d","j"],"coeff":-2.0},{"path":[],"vertex":"3","coeff":0.5}]"#,
    )
    .unwrap();
    let coeffs = dir.path().join("coeffs.jsonl");
    let common = ["wavelets", "--graph", "ledrappier.kg", "--shape", "1,1", "--depth", "1"];
    let mut a: Vec<&str> = common.to_vec();
    let (fs_, cs) = (f.to_str().unwrap(), coeffs.to_str().unwrap());
    a.extend(["--analyze", fs_, "--out", cs]);
    assert!(run(&a).status.success());
    let mut s: Vec<&str> = common.to_vec();
    s.extend(["--synthesize", cs]);
    let recs = records(&run(&s));
    let back: Vec<CylinderRecord> = recs.into_iter().map(|r| serde_json::from_value(r).unwrap()).collect();
    let g = fixtures::ledrappier();
    let got = kwavelet::CylinderFn::from_records(&g, &back).unwrap();
    let want_text = fs::read_to_string(&f).unwrap();
    let want: Vec<CylinderRecord> = serde_json::from_str(&want_text).unwrap();
    let want = kwavelet::CylinderFn::from_records(&g, &want).unwrap();
    assert!(got.approx_eq(&g, &want, 1e-12).unwrap());
}

#[test]
fn traffic_and_laplacian() {
    let prefs = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/ledrappier-prefs.json");
    let recs = records(&run(&["traffic", "--graph", "ledrappier.kg", "--prefs", prefs]));
    assert_eq!(recs.len(), 4);
    assert_eq!(recs[1]["values"], serde_json::json!([4.0, -4.0, 0.0, 0.0]));
    let recs = records(&run(&["laplacian", "--graph", "ledrappier.kg"]));
    assert_eq!(
        recs[2]["rows"],
        serde_json::json!([[4, -2, -1, -1], [-2, 8, -3, -3], [-1, -3, 6, -2], [-1, -3, -2, 6]])
    );
}

#[test]
fn csv_tables() {
    let out = run(&["pf", "--graph", "ledrappier.kg", "--csv"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "vertex,x\n1,0.25\n2,0.25\n3,0.25\n4,0.25\n"
    );
    let out = run(&["measure", "--graph", "lambda3.kg", "--level", "1,1", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("path,measure"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn exit_code_classes() {
    let dir = tempfile::tempdir().unwrap();

    let (code, err) = error_of(&run(&["pf", "--graph", "ledrappier.kg", "--nonsense"]));
    assert_eq!((code, err["class"].as_str().unwrap()), (1, "usage"));

    let broken = dir.path().join("broken.kg");
    fs::write(&broken, "{ not json").unwrap();
    let (code, err) = error_of(&run(&["validate", broken.to_str().unwrap()]));
    assert_eq!((code, err["class"].as_str().unwrap()), (2, "parse"));

    let mut doc = fixtures::lambda3().to_document();
    doc.squares.pop();
    let missing = dir.path().join("missing.kg");
    fs::write(&missing, doc.to_json()).unwrap();
    let (code, err) = error_of(&run(&["validate", missing.to_str().unwrap()]));
    assert_eq!(code, 3);
    assert_eq!(err["class"], "validation");

    let (code, err) = error_of(&run(&[
        "spectral",
        "--graph",
        "ledrappier.kg",
        "--reconstruct",
        "1,0,-1,0",
        "--tgrid",
        "0.1,1,5",
    ]));
    assert_eq!((code, err["error"].as_str().unwrap()), (4, "grid-too-coarse"));

    let (code, err) = error_of(&run(&["measure", "--graph", "ledrappier.kg", "--path", "ab"]));
    assert_eq!(code, 3);
    assert_eq!(err["error"], "composition");
}
