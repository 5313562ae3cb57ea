use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddunitary"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn demo_instance(dir: &Path, v: [i64; 3]) -> std::path::PathBuf {
    let file = dir.join(format!("inst-{}{}{}.json", v[0], v[1], v[2]));
    let inst = json!({
        "cfg": {
            "ring": {"descriptor": "mod", "k": 5, "involution": "negation"},
            "m": 1,
            "n": 2,
            "phi": [[1, 0], [0, 1]],
            "phi_inv": [[1, 0], [0, 1]]
        },
        "v": v,
    });
    std::fs::write(&file, inst.to_string()).unwrap();
    file
}

#[test]
fn demo_prints_matrices_and_exits_zero() {
    let o = bin(&["demo"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("L(v) = [[1,0,0,0],[0,1,4,3],[1,0,1,0],[2,0,0,1]]"));
    assert!(text.contains("P^t L(v) P = [[1,0,1,0],[0,1,2,0],[0,0,1,0],[4,3,0,1]]"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn gen_is_byte_identical_for_same_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for f in [&a, &b] {
        let o = bin(&[
            "gen", "--ring", "mod:5", "--involution", "negation", "--m", "1", "--n", "2", "--phi", "identity",
            "--seed", "7", "--out", path(f),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let o = bin(&["verify", "--in", path(&a), "--check", "factorization"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn force_d_solves_first_coordinate() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..20 {
        let f = dir.path().join(format!("s{seed}.json"));
        let s = seed.to_string();
        let o = bin(&[
            "gen", "--ring", "mod:5", "--involution", "negation", "--m", "1", "--n", "2", "--phi", "identity",
            "--seed", &s, "--force-D", "--out", path(&f),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
        if v["v"][1] == json!(1) && v["v"][2] == json!(2) {
            assert_eq!(v["v"][0], json!(0));
        }
        let o = bin(&["verify", "--in", path(&f), "--check", "conditions"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn identity_phi_rejected_for_identity_involution() {
    let o = bin(&["gen", "--ring", "mod:5", "--involution", "identity", "--m", "1", "--n", "2", "--phi", "identity"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("phi"));
}

#[test]
fn verify_demo_instance_passes() {
    let dir = tempfile::tempdir().unwrap();
    let f = demo_instance(dir.path(), [0, 1, 2]);
    let o = bin(&["verify", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_reports_failed_condition() {
    let dir = tempfile::tempdir().unwrap();
    let f = demo_instance(dir.path(), [0, 1, 1]);
    let o = bin(&["verify", "--in", path(&f), "--check", "conditions"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("condition_D=false"));
}

#[test]
fn corrupted_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\"cfg\": [1, 2").unwrap();
    for cmd in ["verify", "factor", "conjugate"] {
        let o = bin(&[cmd, "--in", path(&f)]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
    }
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn factor_and_conjugate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = demo_instance(dir.path(), [0, 1, 2]);
    let o = bin(&["factor", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let words: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(words["L"]["size"], json!(4));

    let o = bin(&["conjugate", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let conj: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(conj["L"]["kind"], json!("t_minus1"));
    assert_eq!(conj["L"]["u"], json!([4, 3, 0, 0]));

    let inst: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    let rev = dir.path().join("rev.json");
    let input = json!({"cfg": inst["cfg"], "transvection": conj["L_star"]});
    std::fs::write(&rev, input.to_string()).unwrap();
    let o = bin(&["conjugate", "--reverse", "--in", path(&rev)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let back: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(back["v"], json!([0, 1, 2]));
}
