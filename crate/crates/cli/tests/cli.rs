//! End-to-end runs of the `radpsh` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use std::f64::consts::E;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn radpsh(args: &[&str], dir: &Path) -> Run {
    let Output { status, stdout, stderr } =
        Command::new(env!("CARGO_BIN_EXE_radpsh")).args(args).current_dir(dir).output().expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn scenario(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(dir: &Path, name: &str, text: &str) -> Run {
    scenario(dir, name, text);
    radpsh(&["run", name, "--out", "out"], dir)
}

fn sweep(dir: &Path, name: &str, text: &str) -> Run {
    scenario(dir, name, text);
    radpsh(&["sweep", name, "--out", "out"], dir)
}

fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().map(|l| l.split(',').map(String::from).collect::<Vec<_>>());
    let header = lines.next().unwrap();
    (header, lines.collect())
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name} in {header:?}"))
}

#[test]
fn classify_power_half() {
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), "c.txt", "command = classify\nprofile = power 0.5\nn = 2\np_list = 1,2,3\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("classify: "), "{}", r.stdout);
    let (h, rows) = table(&d.path().join("out/c.csv"));
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!([&row[column(&h, "E^1")], &row[column(&h, "E^2")], &row[column(&h, "E^3")]], ["true", "false", "false"]);
}

#[test]
fn bound_with_constant_dominator() {
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), "b.txt", "command = bound\neps = constant 1\nmu_total = 1\nn = 2\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = table(&d.path().join("out/b.csv"));
    assert_eq!(h, ["s", "bound"]);
    assert!(rows.len() > 10);
    for row in rows {
        let (s, b): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let want = (-2.0 * (s - E - 1.0) / E).exp();
        assert!((b - want).abs() <= 1e-12 * want, "s = {s}: {b} vs {want}");
    }
}

#[test]
fn missing_parameter_is_a_validation_error() {
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), "m.txt", "command = classify\nprofile = linear\nn = 2\n");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
}

#[test]
fn unknown_key_names_its_line() {
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), "u.txt", "# comment\ncommand = classify\nprofle = power 0.5\nn = 2\n");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3") && r.stderr.contains("profle"), "{}", r.stderr);
}

#[test]
fn invalid_dimension_and_grid_are_rejected() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(d.path(), "a.txt", "command = classify\nprofile = power 0.5\nn = 0\n").code, 2);
    assert_eq!(run(d.path(), "b.txt", "command = capacity\nprofile = power 0.5\nn = 2\ns_grid = 1,0.5\n").code, 2);
    assert_eq!(run(d.path(), "c.txt", "command = capacity\nprofile = grid nowhere.csv\nn = 2\n").code, 2);
    assert_eq!(run(d.path(), "e.txt", "command = classify\nn = 2\n").code, 2);
}

#[test]
fn sweep_over_alpha_recovers_the_threshold() {
    let d = tempfile::tempdir().unwrap();
    let text = "command = sweep\ntask = classify\nalpha = 0.1:0.9:0.1\nprofile = power $alpha\nn = 2\n";
    let r = sweep(d.path(), "alpha.txt", text);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = table(&d.path().join("out/alpha.csv"));
    assert_eq!(h[0], "alpha");
    assert_eq!(rows.len(), 9);
    let stars: Vec<f64> = rows.iter().map(|r| r[column(&h, "p_star")].parse().unwrap()).collect();
    for (row, p) in rows.iter().zip(&stars) {
        let a: f64 = row[0].parse().unwrap();
        let want = 2.0 * (1.0 - a) / a;
        assert!((p - want).abs() <= 0.05 * want, "alpha = {a}: {p} vs {want}");
    }
    assert!(stars.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_over_lambda_gives_the_uniform_bound() {
    let d = tempfile::tempdir().unwrap();
    let text = "command = sweep\ntask = bound\neps = exp_decay 0.5:3:0.5\nmu_total = 1\nn = 2\n";
    let r = sweep(d.path(), "lambda.txt", text);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = table(&d.path().join("out/lambda.csv"));
    assert_eq!(rows.len(), 6);
    for row in rows {
        let l: f64 = row[0].parse().unwrap();
        let u: f64 = row[column(&h, "uniform_bound")].parse().unwrap();
        let want = E / l + E + 1.0;
        assert!((u - want).abs() <= 1e-12 * want, "lambda = {l}: {u} vs {want}");
    }
}

#[test]
fn sweeps_need_exactly_one_nonempty_range() {
    let d = tempfile::tempdir().unwrap();
    let empty = "command = sweep\ntask = classify\nprofile = power 0.9:0.1:0.1\nn = 2\n";
    assert_eq!(sweep(d.path(), "e.txt", empty).code, 2);
    let two = "command = sweep\ntask = classify\nprofile = power 0.1:0.5:0.1\nn = 1:3:1\n";
    assert_eq!(sweep(d.path(), "t.txt", two).code, 2);
    let none = "command = classify\nprofile = power 0.5\nn = 2\n";
    assert_eq!(sweep(d.path(), "n.txt", none).code, 2);
    assert_eq!(run(d.path(), "r.txt", "command = classify\nprofile = power 0.1:0.5:0.1\nn = 2\n").code, 2);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let d = tempfile::tempdir().unwrap();
    let files = [
        ("s.txt", "command = sweep\ntask = classify\nalpha = 0.2:0.8:0.2\nprofile = power $alpha\nn = 2\n"),
        ("v.txt", "command = verify\nmeasure = exp_density\neps = constant 1\nn = 2\n"),
        ("c.txt", "command = capacity\nprofile = log1m 1\nn = 3\n"),
    ];
    for (name, text) in files {
        scenario(d.path(), name, text);
        for out in ["a", "b"] {
            assert_eq!(radpsh(&["run", name, "--out", out], d.path()).code, 0);
        }
    }
    for name in ["s.csv", "v.csv", "v.sj.csv", "c.csv"] {
        let a = fs::read(d.path().join("a").join(name)).unwrap();
        let b = fs::read(d.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn failed_verification_leaves_a_report() {
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), "v.txt", "command = verify\nmeasure = sphere_atom 0.5 10\neps = constant 1\nn = 2\n");
    assert_eq!(r.code, 4);
    let report = fs::read_to_string(d.path().join("out/v.report.txt")).unwrap();
    assert!(r.stderr.contains("out/v.report.txt"), "{}", r.stderr);
    assert!(report.contains("invariant: mu(B_r) <= F_eps(Cap(B_r))"), "{report}");
    assert!(report.contains("module: solver"), "{report}");

    scenario(d.path(), "s.txt", "command = solve\nmeasure = sphere_atom 0.5 0.7\nn = 2\nreport = solve-failure.txt\n");
    let r = radpsh(&["run", "s.txt", "--out", "out", "--tol", "1e-30"], d.path());
    assert_eq!(r.code, 4, "{}", r.stderr);
    let report = fs::read_to_string(d.path().join("out/solve-failure.txt")).unwrap();
    assert!(report.contains("module: solver") && report.contains("reproduces mu"), "{report}");
}

#[test]
fn solve_round_trips_and_verify_writes_the_iteration() {
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), "s.txt", "command = solve\nprofile = log1m 1\nn = 2\noutput = solved.csv\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = table(&d.path().join("out/solved.csv"));
    assert_eq!(h, ["r", "gamma", "mass", "mass_of_solution"]);
    for row in &rows {
        let r: f64 = row[0].parse().unwrap();
        let gamma: f64 = row[1].parse().unwrap();
        let want = -(1.0 - r.ln()).ln();
        assert!((gamma - want).abs() <= 1e-8 * (1.0 + want.abs()), "r = {r}: {gamma} vs {want}");
    }
    let r = run(d.path(), "v.txt", "command = verify\nmeasure = exp_density\neps = exp_decay 1\nn = 2\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, _) = table(&d.path().join("out/v.sj.csv"));
    assert_eq!(h, ["j", "s_j", "f_sj"]);
}

#[test]
fn grid_flag_and_grid_profiles() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("knots.csv"), "x,gamma\n-4,-2.6\n-2,-1.6\n-1,-0.9\n-0.5,-0.5\n0,0\n").unwrap();
    scenario(d.path(), "g.txt", "command = capacity\nprofile = grid knots.csv\nn = 2\n");
    let r = radpsh(&["run", "g.txt", "--out", "out", "--grid", "17"], d.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = table(&d.path().join("out/g.csv"));
    assert_eq!(h, ["s", "cap", "f"]);
    assert_eq!(rows.len(), 17);
    assert_eq!(radpsh(&["run", "g.txt", "--grid", "1"], d.path()).code, 2);
    assert_eq!(radpsh(&["run", "g.txt", "--tol", "-1"], d.path()).code, 2);
}

#[test]
fn energy_matches_its_closed_form() {
    // u = -log(1 - x), chi(t) = t, n = 1: the energy is int_1^inf log(y) / y^2 dy = 1.
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), "e.txt", "command = energy\nprofile = log1m 1\nweight = power 1\nn = 1\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = table(&d.path().join("out/e.csv"));
    let e: f64 = rows[0][column(&h, "energy")].parse().unwrap();
    assert_eq!(rows[0][column(&h, "energy_status")], "converged");
    assert!((e - 1.0).abs() <= 1e-8, "{e}");
}
