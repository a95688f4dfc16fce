use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quatgeom"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quatgeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn frame_json(columns: &[[f64; 8]]) -> String {
    serde_json::json!({"k": columns.len(), "columns": columns}).to_string()
}

fn e(i: usize) -> [f64; 8] {
    let mut v = [0.0; 8];
    v[i] = 1.0;
    v
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn quaternionic_line_has_all_invariants_one() {
    let p = scratch("qline.json", &frame_json(&[e(0), e(1), e(2), e(3)]));
    let v = json(&run(&["classify", path_str(&p)]));
    let lam = v["lambda"].as_object().unwrap();
    assert_eq!(lam.len(), 6);
    for (pair, x) in lam {
        assert!(
            (x.as_f64().unwrap() - 1.0).abs() < 1e-9,
            "lambda_{pair} = {x}"
        );
    }
}

#[test]
fn totally_real_plane_has_zero_invariant() {
    let p = scratch("real.json", &frame_json(&[e(0), e(4)]));
    let v = json(&run(&["classify", path_str(&p)]));
    assert!(v["lambda"]["12"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["degenerate"], Value::Bool(false));
}

#[test]
fn five_planes_point_to_the_complement() {
    let p = scratch("k5.json", &frame_json(&[e(0), e(1), e(2), e(3), e(4)]));
    let o = run(&["classify", path_str(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("complement"), "{}", stderr(&o));
}

#[test]
fn malformed_json_reports_position() {
    let p = scratch("broken.json", "{\"k\": 2,\n\"columns\": [1, 2");
    let o = run(&["classify", path_str(&p)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn non_orthonormal_frame_reports_gram_defect() {
    let mut v = e(0);
    v[1] = 1.0;
    let p = scratch("skew.json", &frame_json(&[e(0), v]));
    let o = run(&["classify", path_str(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Gram defect"), "{}", stderr(&o));
}

#[test]
fn invalid_config_is_rejected() {
    let o = run(&["tables", "dims", "--h", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--h"));
    let o = run(&["tables", "dims", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reconstruct_then_classify_round_trips() {
    let from_angles = json(&run(&["angles", "0.3,1.1,2.0"]));
    let lam = serde_json::json!({"k": 3, "lambda": from_angles["lambda"]});
    let p = scratch("lam.json", &lam.to_string());
    let frame = json(&run(&["reconstruct", path_str(&p)]));
    let q = scratch("rebuilt.json", &frame.to_string());
    let want = json(&run(&[
        "classify",
        path_str(&scratch("orig.json", &from_angles["frame"].to_string())),
    ]));
    let got = json(&run(&["classify", path_str(&q)]));
    for pair in ["12", "13", "23"] {
        let d = got["lambda"][pair].as_f64().unwrap() - want["lambda"][pair].as_f64().unwrap();
        assert!(d.abs() < 1e-6, "lambda_{pair}: {got} vs {want}");
    }
}

#[test]
fn angles_give_cosines() {
    let v = json(&run(&["angles", "0,1.0"]));
    assert!((v["lambda"]["12"].as_f64().unwrap() - 1.0f64.cos()).abs() < 1e-12);
}

#[test]
fn moore_spectrum_of_a_diagonal_matrix() {
    let p = scratch(
        "m.json",
        r#"{"matrix": [[[2,0,0,0],[0,0,0,0]],[[0,0,0,0],[3,0,0,0]]]}"#,
    );
    let v = json(&run(&["moore", path_str(&p)]));
    assert!((v["det"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert_eq!(v["rank"], 2);
}

#[test]
fn dims_table() {
    let v = json(&run(&["tables", "dims"]));
    let dims: Vec<u64> = v["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 1, 2, 3, 5, 3, 2, 1, 1]);
    assert_eq!(v["total"], 19);
}

#[test]
fn multiplier_table() {
    let tsv = stdout(&run(&["tables", "multipliers", "--format", "tsv"]));
    assert!(tsv.contains("4\t(4,2,2,0)\t\u{2212}1/10780\t"), "{tsv}");
    assert!(
        tsv.contains("3\t(4,2,2,0)\t\u{2212}8/24255\u{3c0}\t"),
        "{tsv}"
    );
    assert!(tsv.contains("2\t(2,2,0,0)\t1/252\t"), "{tsv}");
    assert_eq!(tsv.lines().count(), 11);
}

#[test]
fn eigenvalue_table() {
    let v = json(&run(&["tables", "eigenvalues"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 10);
    let hit = rows
        .iter()
        .filter(|r| r["weight"] == "(4,2,2,0)")
        .collect::<Vec<_>>();
    assert_eq!(hit.len(), 2);
    assert!(hit
        .iter()
        .all(|r| r["eigenvalue"] == 60 && r["casimir"] == 60));
}

#[test]
fn laplacian_table_lists_every_identity() {
    let tsv = stdout(&run(&["tables", "laplacian", "--format", "tsv"]));
    assert_eq!(tsv.lines().count(), 10);
    assert!(tsv.lines().all(|l| l.starts_with("Delta(f_{")));
}

#[test]
fn crofton_eval_reports_the_run() {
    let p = scratch("ball.json", r#"{"type": "ball", "radius": 1.0}"#);
    let v = json(&run(&[
        "crofton-eval",
        path_str(&p),
        "--degree",
        "8",
        "--index",
        "0",
        "--samples",
        "1000",
    ]));
    assert_eq!(v["N"], 1000);
    assert_eq!(v["seed"], 0x5eed);
    assert_eq!(v["std_error"], 0.0);
    let vol = std::f64::consts::PI.powi(4) / 24.0;
    assert!((v["estimate"].as_f64().unwrap() - vol).abs() < 1e-12);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let p = scratch("cube.json", r#"{"type": "cube", "side": 1.0}"#);
    let args = [
        "crofton-eval",
        path_str(&p),
        "--degree",
        "3",
        "--index",
        "1",
        "--samples",
        "3000",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["verify", "orbit", "--seed", "11"]);
    let b = run(&["verify", "orbit", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_option() {
    let dir = std::env::temp_dir().join(format!("quatgeom-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("dims.tsv");
    let o = run(&[
        "tables",
        "dims",
        "--format",
        "tsv",
        "--output",
        path_str(&target),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(target).unwrap().starts_with("k\t"));
}

#[test]
fn verify_suites_pass() {
    for suite in ["orbit", "laplacian", "cosine", "crofton"] {
        let o = run(&["verify", suite, "--samples", "20000"]);
        let v = json(&o);
        assert_eq!(v["pass"], true, "{suite}: {}", stdout(&o));
        assert!(!v["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn tables_are_computed_not_stored() {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("src");
    let banned = [
        "1/252",
        "1/420",
        "1/1470",
        "70070",
        "24255",
        "10780",
        "3/35",
        "32/105",
        "8/945",
        "(4,2,2,0)",
        "1, 1, 2, 3, 5",
        "1 1 2 3 5",
    ];
    for entry in std::fs::read_dir(src).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let code: String = text.split("#[cfg(test)]").next().unwrap().to_string();
        for b in banned {
            assert!(!code.contains(b), "{} contains literal {b}", path.display());
        }
    }
}
