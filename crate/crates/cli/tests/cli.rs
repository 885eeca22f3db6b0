use std::path::Path;
use std::process::{Command, Output};

use ifsx_core::geometry::{hausdorff, parse_csv};
use ifsx_core::CompactSet;

fn ifsx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifsx"))
        .args(args)
        .current_dir(dir)
        .env_remove("IFSX_THREADS")
        .output()
        .unwrap()
}

fn put(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

const CANTOR: &str = r#"{"maps": [{"type": "affine", "a": 0.3333333333333333, "b": 0},
                                  {"type": "affine", "a": 0.3333333333333333, "b": 0.6666666666666666}]}"#;

fn cantor_oracle(depth: u32) -> CompactSet {
    let len = 3f64.powi(-(depth as i32));
    let mut xs = Vec::new();
    for word in 0..(1u32 << depth) {
        let left: f64 = (0..depth)
            .filter(|b| word >> (depth - 1 - b) & 1 == 1)
            .map(|b| 2.0 * 3f64.powi(-(b as i32) - 1))
            .sum();
        xs.extend([left, left + len]);
    }
    CompactSet::from_scalars(&xs).unwrap()
}

#[test]
fn attractor_matches_cantor_oracle() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "c.json", CANTOR);
    let o = ifsx(t.path(), &["attractor", "--config", "c.json", "--out", "c.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let a = parse_csv(&read(t.path(), "c.csv")).unwrap();
    assert!(hausdorff(&a, &cantor_oracle(8)).unwrap() <= 2.0 * 1e-4);
    let summary = String::from_utf8(o.stderr).unwrap();
    assert!(summary.contains("converged=true"));
}

#[test]
fn single_map_gives_one_point() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "s.json", r#"{"maps": [{"type": "affine", "a": 0.5, "b": 0.25}]}"#);
    let o = ifsx(t.path(), &["attractor", "--config", "s.json"]);
    assert_eq!(o.status.code(), Some(0));
    let a = parse_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(a.len(), 1);
    assert!((a.xs()[0] - 0.5).abs() < 1e-9);
}

#[test]
fn flags_override_config() {
    let t = tempfile::tempdir().unwrap();
    put(
        t.path(),
        "h.json",
        r#"{"maps": [{"type": "affine", "a": 0.5, "b": 0}, {"type": "affine", "a": 0.5, "b": 0.5}],
            "resolution": 0.1}"#,
    );
    let coarse = ifsx(t.path(), &["attractor", "--config", "h.json"]);
    let fine = ifsx(t.path(), &["attractor", "--config", "h.json", "--resolution", "0.01"]);
    let n = |o: &Output| parse_csv(std::str::from_utf8(&o.stdout).unwrap()).unwrap().len();
    assert!(n(&fine) > 5 * n(&coarse));
}

#[test]
fn kind_flag_rejects_contraction_logistic() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "w.json", r#"{"maps": [{"type": "logistic"}, {"type": "constant", "c": [0.5]}]}"#);
    let o = ifsx(t.path(), &["attractor", "--config", "w.json", "--kind", "contraction"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ifsx(t.path(), &["attractor", "--config", "w.json", "--kind", "weak"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn hausdorff_of_two_points() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "a.csv", "0\n");
    put(t.path(), "b.csv", "# one point\n1\n");
    let o = ifsx(t.path(), &["hausdorff", "a.csv", "b.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("distance=1.0000000000000000e0\n"), "{text}");
    let o = ifsx(t.path(), &["hausdorff", "a.csv", "a.csv"]);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("distance=0.0"));
}

#[test]
fn approx_with_pwl_system_is_exact() {
    let t = tempfile::tempdir().unwrap();
    put(
        t.path(),
        "p.json",
        r#"{"maps": [{"type": "pwl", "nodes": [[0, 0.1], [0.5, 0.3], [1, 0.2]]},
                     {"type": "constant", "c": [0.9]}]}"#,
    );
    let o = ifsx(t.path(), &["approx", "--config", "p.json", "--k-schedule", "1,4,16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "k,lipschitz_max,hausdorff");
    assert_eq!(rows.len(), 4);
    for row in &rows[1..] {
        let d: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(d <= 2.0 * (1e-6 + 1e-4), "{row}");
    }
}

#[test]
fn approx_rejects_bad_schedule() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "w.json", r#"{"maps": [{"type": "logistic"}]}"#);
    let o = ifsx(t.path(), &["approx", "--config", "w.json", "--k-schedule", "4,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn witness_metadata() {
    let t = tempfile::tempdir().unwrap();
    let meta = |args: &[&str]| {
        let o = ifsx(t.path(), args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        String::from_utf8(o.stderr).unwrap()
    };
    assert!(meta(&["witness", "--kind", "ladder", "--n", "2", "--out", "l.json"]).contains("k=5"));
    assert!(meta(&["witness", "--kind", "intervals", "--depth", "4", "--out", "i.json"])
        .contains("k_seq=1,5,22,117"));
    assert!(meta(&["witness", "--kind", "prop-p", "--depth", "3", "--out", "p.json"])
        .contains("counts=2,5,22"));
    let export = ifsx_core::WitnessExport::from_json(&read(t.path(), "l.json")).unwrap();
    assert_eq!(export.system().unwrap().len(), 3);
}

#[test]
fn search_zero_trials_and_inversion() {
    let t = tempfile::tempdir().unwrap();
    assert_eq!(
        ifsx(t.path(), &["witness", "--kind", "ladder", "--n", "1", "--out", "l.json"]).status.code(),
        Some(0)
    );
    let o = ifsx(t.path(), &["search", "l.json", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["best_distance"].is_null());
    assert_eq!(v["violated"], false);
    assert!(v["inversion_distance"].as_f64().unwrap() <= 2.0 * (1e-6 + 1e-4));
}

#[test]
fn search_needs_a_ladder() {
    let t = tempfile::tempdir().unwrap();
    ifsx(t.path(), &["witness", "--kind", "prop-p", "--out", "p.json"]);
    let o = ifsx(t.path(), &["search", "p.json", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_is_independent_of_thread_count() {
    let t = tempfile::tempdir().unwrap();
    ifsx(t.path(), &["witness", "--kind", "ladder", "--n", "2", "--out", "l.json"]);
    let args = ["search", "l.json", "--trials", "40", "--seed", "9"];
    let one = Command::new(env!("CARGO_BIN_EXE_ifsx"))
        .args(args)
        .current_dir(t.path())
        .env("IFSX_THREADS", "1")
        .output()
        .unwrap();
    let auto = Command::new(env!("CARGO_BIN_EXE_ifsx"))
        .args(args)
        .current_dir(t.path())
        .env("IFSX_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, auto.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_ifsx"))
        .args(args)
        .current_dir(t.path())
        .env("IFSX_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn render_markers() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "one.csv", "0.25\n");
    put(t.path(), "plane.csv", "0.1,0.2\n0.3,0.4\n");
    let o = ifsx(t.path(), &["render", "one.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    // axis plus one tick
    assert_eq!(svg.matches("<line").count(), 2);
    let o = ifsx(t.path(), &["render", "plane.csv", "--size", "200"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().matches("<circle").count(), 2);
}

#[test]
fn malformed_inputs_exit_1() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "x.csv", "0.1,abc\n");
    assert_eq!(ifsx(t.path(), &["render", "x.csv"]).status.code(), Some(1));
    assert_eq!(ifsx(t.path(), &["render", "missing.csv"]).status.code(), Some(1));
    assert_eq!(ifsx(t.path(), &["attractor"]).status.code(), Some(1));
    assert_eq!(ifsx(t.path(), &["witness"]).status.code(), Some(1));
    assert_eq!(ifsx(t.path(), &["--help"]).status.code(), Some(0));
}
