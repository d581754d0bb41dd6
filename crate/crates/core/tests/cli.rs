use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarsesep"))
        .args(args)
        .output()
        .unwrap()
}

fn graph(name: &str) -> String {
    data(&format!("graphs/{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn classify_json(name: &str) -> (i32, serde_json::Value) {
    let o = run(&["classify", &graph(name), "--format", "json"]);
    (
        o.status.code().unwrap(),
        serde_json::from_str(&stdout(&o)).unwrap(),
    )
}

#[test]
fn classify_examples() {
    let (code, v) = classify_json("pentagon-Z2");
    assert_eq!(code, 0);
    assert_eq!(v["virtual_surface"], "yes");
    assert_eq!(v["coarsely_separable_subexp"], "yes");
    let (_, v) = classify_json("pentagon-one-Z3");
    assert_eq!(
        (v["virtual_surface"].as_str(), v["hyperbolic"].as_str()),
        (Some("no"), Some("yes"))
    );
    assert_eq!(v["one_ended"], "yes");
    let (_, v) = classify_json("square-Z2");
    assert_eq!(v["hyperbolic"], "no");
    assert_eq!(v["coarsely_separable_subexp"], "not_applicable");
}

#[test]
fn reports_match_schema() {
    let schema: serde_json::Value = serde_json::from_str(coarsesep::cli::report::SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for entry in std::fs::read_dir(data("graphs")).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["classify", path.to_str().unwrap(), "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", path.display());
    }
}

#[test]
fn undecided_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(
        &path,
        r#"{"vertices":[{"id":0,"group":{"abstract":{"order":"infinite"}}},{"id":1,"group":{"cyclic":2}}],"edges":[[0,1]]}"#,
    )
    .unwrap();
    let o = run(&["classify", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["hyperbolic"], "undecided");
}

#[test]
fn parse_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"vertices":[{"id":0,"group":{"cyclic":2}}],"edges":[[0,0]]}"#,
    )
    .unwrap();
    let o = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(
        run(&["classify", "/nonexistent.json"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

fn grow_rows(name: &str, n_max: &str) -> Vec<(usize, usize, usize)> {
    let o = run(&["grow", &graph(name), "--n-max", n_max]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,ball,sphere"));
    lines
        .map(|l| {
            let f: Vec<usize> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[1], f[2])
        })
        .collect()
}

#[test]
fn grow_examples() {
    let dihedral = grow_rows("dihedral", "10");
    assert!(dihedral[1..].iter().all(|r| r.2 == 2));
    let finite = grow_rows("k2-z2-z3", "6");
    assert!(finite.iter().skip(2).all(|r| r.1 == 6), "{finite:?}");
    let pentagon = grow_rows("pentagon-Z2", "10");
    assert!(pentagon.windows(2).all(|w| w[0].2 < w[1].2));
}

#[test]
fn seed_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.toml");
    std::fs::write(
        &path,
        format!(
            "command = \"cut-spheres\"\ngraph = {:?}\nn_max = 4\n",
            graph("dihedral")
        ),
    )
    .unwrap();
    let o = run(&["cut-spheres", "--manifest", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed required"));
    let o = run(&["persist", &graph("dihedral"), "--r-min", "3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed required"));
}

#[test]
fn manifest_command_must_match() {
    let m = data("manifests/grow-pentagon-Z2.toml");
    let o = run(&["persist", "--manifest", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn persist_dihedral_ratios() {
    let o = run(&[
        "persist",
        &graph("dihedral"),
        "--seed",
        "3",
        "--r-min",
        "5",
        "--t",
        "1",
        "--pairs",
        "20",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let ratio = header.iter().position(|&h| h == "ratio").unwrap();
    for line in text.lines().skip(1) {
        let r: f64 = line.split(',').nth(ratio).unwrap().parse().unwrap();
        assert!(r >= 1.0 / 3.0 - 1e-9, "{line}");
    }
}

#[test]
fn distort_diagonal_row() {
    let o = run(&[
        "distort",
        &graph("pentagon-Z2"),
        "--seed",
        "1",
        "--n-max",
        "5",
        "--pairs",
        "5",
        "--include-diagonal",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first = text.lines().nth(1).unwrap();
    assert!(first.ends_with(",0,0"), "{first}");
}

#[test]
fn sep_profile_on_finite_group_warns() {
    let o = run(&[
        "sep-profile",
        &graph("k2-z2-z3"),
        "--seed",
        "1",
        "--n-max",
        "6",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: finite group of order 6"));
    assert!(stdout(&o).lines().skip(1).all(|l| !l.starts_with("ball,3")));
}

#[test]
fn cut_spheres_single_point_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "cut-spheres",
        &graph("pentagon-Z2"),
        "--seed",
        "9",
        "--n-min",
        "4",
        "--n-max",
        "4",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("cut_spheres.csv")).unwrap();
    assert!(csv.contains("insufficient points"));
    let dat = std::fs::read_to_string(dir.path().join("cut_spheres.dat")).unwrap();
    assert!(dat.starts_with("# n size upper lower\n4 "));
}

#[test]
fn cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_coarsesep"))
        .args(["grow", &graph("pentagon-Z2"), "--n-max", "8"])
        .env(coarsesep::cli::manifest::CAP_ENV, "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("100"));
}
