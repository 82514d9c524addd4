use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use detrep::oracle::paired_distance;
use detrep::twopareig::RootSet;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_detrep");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("detrep-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("DETREP_SEED").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| {
        panic!("stderr is not JSON ({e}): {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_minunif_degree_four_has_size_seven() {
    let out = run(&["construct", "-n", "2", "-d", "4", "--method", "minunif"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["N"], 7);
}

#[test]
fn construct_turan_outside_its_domain_exits_two() {
    let out = run(&["construct", "-n", "3", "-d", "4", "--method", "cons2-turan"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "inapplicable");
    assert_eq!(err["exit_code"], 2);
    assert!(err["message"].as_str().unwrap().contains("cons2-turan"));
}

#[test]
fn unknown_method_is_a_usage_error() {
    let out = run(&["construct", "-n", "2", "-d", "3", "--method", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn turan_size_22_is_capped_symbolically_and_passes_randomly() {
    let dir = scratch_dir("turan");
    let rep = dir.join("turan_6_4.json");
    let out = run(&["construct", "-n", "6", "-d", "4", "--method", "cons2-turan", "--out", path_str(&rep)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["N"], 22);

    let out = run(&["verify", "--rep", path_str(&rep), "--mode", "symbolic"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["message"].as_str().unwrap().contains("cap exceeded, use random"));

    let out = run(&["verify", "--rep", path_str(&rep), "--mode", "random", "--trials", "20", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    assert!(report["failure_bound"].as_f64().unwrap() < 1e-50);
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn binary_quadric_fixture_verifies() {
    let out = run(&["verify", "--rep", path_str(&fixture("binary_quadric.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["mode"], "symbolic");
    assert_eq!(report["N"], 3);
}

#[test]
fn corrupted_fixture_fails_with_witness() {
    for mode in ["symbolic", "random"] {
        let out = run(&["verify", "--rep", path_str(&fixture("binary_quadric_corrupt.json")), "--mode", mode]);
        assert_eq!(out.status.code(), Some(1), "mode {mode}");
        let report = stdout_json(&out);
        assert_eq!(report["pass"], false);
        let w = &report["witness"];
        assert_eq!(w["x"].as_array().unwrap().len(), 2);
        assert_eq!(w["c"].as_array().unwrap().len(), 6);
        assert_ne!(w["det"], w["expected"]);
        assert_eq!(stderr_json(&out)["error"], "verification_failed");
    }
}

#[test]
fn missing_rep_file_exits_two() {
    let out = run(&["verify", "--rep", "/nonexistent/rep.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["exit_code"], 2);
}

#[test]
fn circle_line_has_two_accurate_roots() {
    let out = run(&[
        "solve",
        "--p",
        path_str(&fixture("circle.json")),
        "--q",
        path_str(&fixture("line.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let set = RootSet::from_json(&stdout_json(&out)).unwrap();
    assert_eq!(set.roots.len(), 2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for r in &set.roots {
        assert!(r.residual < 1e-10);
        assert!((r.x.re.abs() - h).abs() < 1e-12 && (r.x - r.y).norm() < 1e-12);
    }
}

#[test]
fn circle_line_csv_output() {
    let out = run(&[
        "solve",
        "--p",
        path_str(&fixture("circle.json")),
        "--q",
        path_str(&fixture("line.json")),
        "--out",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x_re,x_im,y_re,y_im,residual");
    assert_eq!(lines.len(), 3);
    for l in &lines[1..] {
        let fields: Vec<f64> = l.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 5);
        assert!(fields[4] < 1e-10);
    }
}

#[test]
fn degree_six_fixture_matches_stored_oracle() {
    let out = run(&[
        "solve",
        "--p",
        path_str(&fixture("random6_p.json")),
        "--q",
        path_str(&fixture("random6_q.json")),
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let got = RootSet::from_json(&stdout_json(&out)).unwrap();
    let text = fs::read_to_string(fixture("random6_oracle.json")).unwrap();
    let want = RootSet::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(got.roots.len(), 36);
    assert_eq!(want.roots.len(), 36);
    assert!(got.roots.iter().all(|r| r.residual < 1e-8));
    let dist = paired_distance(&got.roots, &want.roots).unwrap();
    assert!(dist < 1e-6, "paired distance {dist}");
}

#[test]
fn oracle_flag_uses_the_resultant_solver() {
    let out = run(&[
        "solve",
        "--p",
        path_str(&fixture("circle.json")),
        "--q",
        path_str(&fixture("line.json")),
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(RootSet::from_json(&stdout_json(&out)).unwrap().roots.len(), 2);
}

#[test]
fn zero_polynomial_exits_two() {
    let dir = scratch_dir("zero");
    let zero = dir.join("zero.json");
    fs::write(&zero, r#"{"n": 2, "terms": []}"#).unwrap();
    let out = run(&["solve", "--p", path_str(&zero), "--q", path_str(&fixture("line.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "zero_polynomial");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn solve_is_deterministic_and_honours_env_seed() {
    let (p, q) = (fixture("random6_p.json"), fixture("random6_q.json"));
    let args = [
        "solve",
        "--p",
        path_str(&p),
        "--q",
        path_str(&q),
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let env = Command::new(BIN).args(&args[..5]).env("DETREP_SEED", "7").output().unwrap();
    assert_eq!(env.stdout, a.stdout);

    let bad = Command::new(BIN).args(&args[..5]).env("DETREP_SEED", "seven").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn batch_solves_every_system() {
    let dir = scratch_dir("batch");
    let read = |name: &str| -> Value { serde_json::from_str(&fs::read_to_string(fixture(name)).unwrap()).unwrap() };
    let systems = [
        ("a_circle.json", read("circle.json"), read("line.json")),
        ("b_random6.json", read("random6_p.json"), read("random6_q.json")),
    ];
    for (name, p, q) in &systems {
        let sys = serde_json::json!({ "p": p, "q": q });
        fs::write(dir.join(name), sys.to_string()).unwrap();
    }
    let out = run(&["solve", "--batch", path_str(&dir)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let results = stdout_json(&out);
    let results = results.as_array().unwrap();
    assert_eq!(results.len(), 2);
    assert_eq!(results[0]["system"], "a_circle.json");
    assert_eq!(results[0]["result"]["roots"].as_array().unwrap().len(), 2);
    assert_eq!(results[1]["result"]["roots"].as_array().unwrap().len(), 36);
    let _ = fs::remove_dir_all(&dir);
}

fn sizes_csv(args: &[&str]) -> Vec<Vec<String>> {
    let mut full = vec!["sizes", "--format", "csv"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0));
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// Filled cells of the table of smallest known sizes, rows n = 2..8,
/// columns d = 2..9.
const SMALLEST_KNOWN: &[(usize, &[usize])] = &[
    (2, &[3, 5, 7, 9, 11, 13, 15, 17]),
    (3, &[4, 7, 10, 14, 18, 22, 27, 34]),
    (4, &[5, 9, 14, 19, 26, 34, 44]),
    (5, &[6, 11, 18, 26]),
    (6, &[7, 13, 22, 33]),
    (7, &[8, 15, 27, 39]),
    (8, &[9, 17, 32]),
];

#[test]
fn sizes_reproduce_smallest_known_table() {
    let rows = sizes_csv(&["--n-range", "2..8", "--d-range", "2..9"]);
    let best_col = rows[0].iter().position(|h| h == "best").unwrap();
    assert_eq!(rows.len(), 1 + 7 * 8);
    for &(n, cells) in SMALLEST_KNOWN {
        for (i, &want) in cells.iter().enumerate() {
            let d = i + 2;
            let row = rows
                .iter()
                .find(|r| r[0] == n.to_string() && r[1] == d.to_string())
                .unwrap();
            assert_eq!(row[best_col], want.to_string(), "n={n} d={d}");
        }
    }
}

#[test]
fn sizes_reproduce_bivariate_rows() {
    let rows = sizes_csv(&["--n-range", "2", "--d-range", "3..12", "--methods", "lin1,minunif"]);
    assert_eq!(rows[0], ["n", "d", "cons1-tree", "minunif", "best"]);
    let lin1: Vec<&str> = rows[1..].iter().map(|r| r[2].as_str()).collect();
    let minunif: Vec<&str> = rows[1..].iter().map(|r| r[3].as_str()).collect();
    assert_eq!(lin1, ["5", "8", "11", "15", "19", "24", "29", "35", "41", "48"]);
    assert_eq!(minunif, ["5", "7", "9", "11", "13", "15", "17", "19", "21", "23"]);
}

#[test]
fn empty_range_gives_empty_table() {
    let rows = sizes_csv(&["--n-range", "5..4", "--d-range", "2..3"]);
    assert_eq!(rows.len(), 1);
    let out = run(&["sizes", "--n-range", "3..2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn sizes_json_round_trips() {
    let out = run(&["sizes", "--n-range", "4", "--d-range", "4", "--format", "json", "--methods", "cons2-turan,cons2-table"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v[0]["sizes"]["cons2-turan"], 14);
    assert_eq!(v[0]["best"], 14);
}
