use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn subangles(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subangles"))
        .args(args)
        .current_dir(dir)
        .env_remove("SUBANGLES_CACHE_DIR")
        .output()
        .expect("spawn subangles")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn lattice_s3_has_six_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["lattice", "--family", "symmetric", "--n", "3", "--out", "out"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json = fs::read_to_string(dir.path().join("out/census.json")).unwrap();
    assert!(json.contains("\"nodes\""));
    let dot = fs::read_to_string(dir.path().join("out/lattice.dot")).unwrap();
    assert_eq!(dot.matches("[label=").count(), 6);
    assert!(stdout(&o).contains("nodes: 6"));
}

#[test]
fn lattice_z30_is_the_divisor_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["lattice", "--family", "cyclic", "--n", "30", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=").count(), 8);
    // the divisor lattice of 30 is a cube: 12 covering edges
    assert_eq!(dot.matches(" -> ").count(), 12);
}

#[test]
fn lattice_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["lattice", "--family", "dihedral", "--n", "6", "--format", "json"];
    let a = subangles(dir.path(), &args);
    let b = subangles(dir.path(), &[&args[..], &["--sequential"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_table_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.json"), "{\"order\": 2,\n \"table\": [[0, 1],\n [1 0]]}").unwrap();
    let o = subangles(dir.path(), &["lattice", "--table", "t.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column 5"), "{}", stderr(&o));
}

#[test]
fn table_group_with_labels() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("v4.json"),
        r#"{"order": 4, "table": [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]], "labels": ["e","x","y","xy"]}"#,
    )
    .unwrap();
    let o = subangles(dir.path(), &["lattice", "--table", "v4.json", "--base", "x"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("nodes: 2"));
}

#[test]
fn caps_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["lattice", "--family", "cyclic", "--n", "30", "--max-nodes", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let o = subangles(dir.path(), &["lattice", "--family", "symmetric", "--n", "5", "--max-order", "100"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_input_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["lattice", "--family", "cyclic"][..],
        &["lattice", "--family", "cyclic", "--n", "4", "--perms", "(1 2)"],
        &["lattice", "--family", "nonsense", "--n", "4"],
        &["lattice", "--family", "cyclic", "--n", "4", "--base", "zz"],
        &["angles", "--family", "cyclic", "--n", "6", "--pairs", "o5:o2"],
        &["verify", "--suite", "nope"],
        &["frobnicate"],
    ] {
        let o = subangles(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn angles_z30_explicit_pair() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["angles", "--family", "cyclic", "--n", "30", "--pairs", "o2:o10", "--out", "."]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let alpha = csv_rows(&dir.path().join("alpha.csv"));
    let beta = csv_rows(&dir.path().join("beta.csv"));
    assert_eq!(alpha.len(), 1);
    assert_eq!(alpha[0][4], "1/3");
    assert_eq!(alpha[0][5], "0.333333333333");
    assert_eq!(beta[0][4], "1/7√7");
    assert_eq!(beta[0][5], "0.377964473009");
    assert!(alpha[0][7].contains("nested"));
}

#[test]
fn angles_s3_minimal_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["angles", "--family", "symmetric", "--n", "3", "--pairs", "minimal"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("alpha.csv"));
    assert_eq!(rows.len(), 16);
    for r in rows {
        let expect = if r[0] == r[1] { "1" } else { "0" };
        assert_eq!(r[4], expect, "{r:?}");
    }
}

#[test]
fn endpoint_pairs_are_na() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["angles", "--family", "cyclic", "--n", "6", "--pairs", "0:1,3:1"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("alpha.csv"));
    assert_eq!(rows[0][4], "NA:angle-undefined");
    assert_eq!(rows[0][5], "NA:angle-undefined");
    let beta = csv_rows(&dir.path().join("beta.csv"));
    assert_eq!(beta[1][4], "NA:angle-undefined");
}

#[test]
fn classify_json_parses() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["classify", "--family", "cyclic", "--n", "30", "--pairs", "o2:o10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("\"cos_alpha\": \"1/3\""), "{out}");
    assert!(out.contains("\"cos_beta\": \"1/7√7\""), "{out}");
}

#[test]
fn verify_landau_on_s4() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["verify", "--family", "symmetric", "--n", "4", "--suite", "landau"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("landau.dominates_join: 900 passed, 0 failed"));
}

#[test]
fn injected_fault_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(
        dir.path(),
        &["verify", "--family", "symmetric", "--n", "3", "--suite", "angles", "--inject-fault", "inflated-meet"],
    );
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("witness: symmetric(3)"), "{out}");
    assert!(out.contains("verdict: FAIL"));
}

#[test]
fn bounds_pass_on_elementary_abelian() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["bounds", "--family", "elementary_abelian", "--p", "2", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("atoms_le_dim: 7 <= 8"), "{}", stdout(&o));
}

#[test]
fn abstract_tight_fixture() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("fx.json"), r#"{"tau":"1/16","tau_p":"1/4","tau_q":"1/4","tr_pq":"1/7","minimal_pair":true}"#).unwrap();
    let o = subangles(dir.path(), &["abstract", "fx.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("cos_alpha: 3/7"));
    assert!(out.contains("cos_alpha < 1/2: true (tight)"));
}

#[test]
fn abstract_cocommuting_and_toml() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.toml"), "tau = \"1/12\"\ntau_p = \"1/2\"\ntau_q = \"1/3\"\ntr_pq = \"1/6\"\n").unwrap();
    let o = subangles(dir.path(), &["abstract", "t.toml"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("cocommuting: true"));
}

#[test]
fn abstract_rejects_low_trace() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), r#"{"tau":"1/4","tau_p":"1/2","tau_q":"1/2","tr_pq":"1/8"}"#).unwrap();
    let o = subangles(dir.path(), &["abstract", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tr_pq = 1/8 < tau = 1/4"), "{}", stderr(&o));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), "family = \"cyclic\"\nn = 6\nformat = \"json\"\n").unwrap();
    let o = subangles(dir.path(), &["lattice", "--config", "run.toml"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"group_order\": 6"));
    let o = subangles(dir.path(), &["lattice", "--config", "run.toml", "--n", "10"]);
    assert!(stdout(&o).contains("\"group_order\": 10"));
    fs::write(dir.path().join("bad.toml"), "colour = 3\n").unwrap();
    assert_eq!(subangles(dir.path(), &["lattice", "--config", "bad.toml"]).status.code(), Some(2));
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_subangles"))
            .args(["lattice", "--family", "dihedral", "--n", "4"])
            .env("SUBANGLES_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(!stdout(&first).contains("loaded from cache"));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    let second = run();
    assert!(stdout(&second).contains("loaded from cache"));
}

#[test]
fn perms_and_base_by_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let o = subangles(dir.path(), &["lattice", "--perms", "(1 2 3 4),(1 2)", "--base", "(1,2)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("base order: 2, index: 12"));
}
