use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intertwine")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(row: &str, header: &str, name: &str) -> f64 {
    let i = header.split(',').position(|h| h == name).unwrap();
    row.split(',').nth(i).unwrap().parse().unwrap()
}

#[test]
fn verify_cowboy_passes() {
    let o = run(&["verify", "--check", "cowboy", "--s", "0.5", "--B", "1", "--mu", "1", "--header"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "check,param:s,param:B,param:mu,lhs,rhs,abs_err,rel_err,tol,pass,runtime_s");
    assert!(lines[1].starts_with("COWBOY,0.5,1,1,"));
    assert!((field(lines[1], lines[0], "rhs") - 0.4398199).abs() < 1e-7);
    assert!(lines[1].contains(",true,"));
}

#[test]
fn verify_prints_a_single_row_by_default() {
    let o = run(&["verify", "--check", "cowboy", "--s", "0.5", "--B", "1", "--mu", "1"]);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn unknown_check_lists_valid_ids() {
    let o = run(&["verify", "--check", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("cowboy") && err.contains("euclid_intertwine") && err.contains("jgauss"), "{err}");
}

#[test]
fn euclid_anchor_is_one() {
    let o = run(&[
        "verify",
        "--check",
        "euclid_intertwine",
        "--n",
        "2",
        "--s",
        "0.5",
        "--z",
        "0,0",
        "--y",
        "1",
        "--header",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(field(lines[1], lines[0], "rhs"), 1.0);
    assert!((field(lines[1], lines[0], "lhs") - 1.0).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_two() {
    // missing parameter
    assert_eq!(run(&["verify", "--check", "cowboy", "--s", "0.5", "--B", "1"]).status.code(), Some(2));
    // malformed value
    assert_eq!(run(&["verify", "--check", "cowboy", "--s", "half", "--B", "1", "--mu", "1"]).status.code(), Some(2));
    // out-of-range order
    assert_eq!(run(&["verify", "--check", "cowboy", "--s", "1.5", "--B", "1", "--mu", "1"]).status.code(), Some(2));
    // unknown flag
    assert_eq!(run(&["verify", "--check", "cowboy", "--bogus", "1"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    let o = run(&["verify", "--check", "cowboy", "--s", "0.3", "--B", "2", "--mu", "1", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",false,"));
}

#[test]
fn json_carries_the_quadrature_spec() {
    let o = run(&["verify", "--check", "h_deriv", "--s", "0.5", "--mu", "1", "--rho", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("{\"check_id\":\"H_DERIV\""), "{out}");
    assert!(out.contains("\"spec\":{\"abs_tol\"") && out.contains("\"pass\":true"));
}

#[test]
fn negative_coordinates_parse() {
    let o = run(&[
        "verify",
        "--check",
        "theorem_a",
        "--m",
        "2",
        "--k",
        "1",
        "--s",
        "0.5",
        "--z",
        "-0.3,0.2",
        "--sigma",
        "-0.1",
        "--y",
        "1",
        "--sign",
        "-1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn table_sweeps_and_products() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let p = path.to_str().unwrap();
    let o = run(&["table", "--check", "cowboy", "--sweep", "s=0.1:0.9:0.2", "--B", "1", "--mu", "1", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(text.ends_with('\n'));
    let s: Vec<f64> = lines[1..].iter().map(|l| field(l, lines[0], "param:s")).collect();
    assert_eq!(s, [0.1, 0.3, 0.5, 0.7, 0.9]);

    let o =
        run(&["table", "--check", "cowboy", "--sweep", "s=0.1:0.5:0.2", "--sweep", "mu=1:4:1", "--B", "1", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 13);
}

#[test]
fn table_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.csv");
    let p = p.to_str().unwrap();
    let base = ["table", "--check", "cowboy", "--B", "1", "--mu", "1"];
    let with = |extra: &[&str]| {
        let mut a = base.to_vec();
        a.extend_from_slice(extra);
        run(&a).status.code()
    };
    assert_eq!(with(&["--sweep", "s=0.9:0.1:0.2", "--out", p]), Some(2));
    assert_eq!(with(&["--sweep", "s=0.1:0.9", "--out", p]), Some(2));
    assert_eq!(with(&["--sweep", "s=0.1:0.9:0.2", "--out", "/nonexistent/dir/c.csv"]), Some(2));
    assert_eq!(with(&["--sweep", "t=1:2:1", "--out", p]), Some(2));
}

#[test]
fn eval_kernels() {
    let value = |args: &[&str]| -> f64 {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        stdout(&o).trim().parse().unwrap()
    };
    let ghc = value(&["eval", "--kernel", "ghc", "--m", "2", "--k", "1", "--z", "0,0", "--sigma", "0", "--t", "1"]);
    assert!((ghc - 0.0625).abs() < 1e-12);
    let ratio = value(&["eval", "--kernel", "gamma_ratio", "--m", "2", "--k", "1", "--s", "0.5"]);
    assert!((ratio - 0.547110).abs() < 1e-6);
    let c = value(&["eval", "--kernel", "const_c", "--m", "2", "--k", "1", "--s", "0.5"]);
    assert!((c - 0.1213970).abs() < 1e-7);
    let e = value(&["eval", "--kernel", "euclid_fundsol", "--s", "0.5", "--z", "0,0", "--y", "1"]);
    assert!((e - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-14);
    let o = run(&["eval", "--kernel", "ghc", "--m", "2", "--k", "1", "--z", "0,0", "--sigma", "0", "--t", "1"]);
    let digits: usize = stdout(&o).trim().chars().filter(char::is_ascii_digit).count();
    assert_eq!(digits, 17, "0.0625… carries 15 significant digits");
}

#[test]
fn eval_rejects_bad_input() {
    assert_eq!(run(&["eval", "--kernel", "nosuch"]).status.code(), Some(2));
    assert_eq!(
        run(&["eval", "--kernel", "ghc", "--m", "3", "--k", "1", "--z", "0,0,0", "--sigma", "0", "--t", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["eval", "--kernel", "ghc", "--m", "2", "--k", "1", "--z", "0,0", "--sigma", "0", "--t", "-1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# cowboy at the anchor\ncheck = cowboy\ns = 0.9\nB = 1\nmu = 1\nheader = true\n").unwrap();
    let o = run(&["verify", "--config", cfg.to_str().unwrap(), "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(field(lines[1], lines[0], "param:s"), 0.5);
    assert_eq!(run(&["verify", "--config", "/nonexistent.cfg"]).status.code(), Some(2));
}

#[test]
fn reruns_are_bit_identical() {
    let args = [
        "verify",
        "--check",
        "theorem_a",
        "--m",
        "2",
        "--k",
        "1",
        "--s",
        "0.3",
        "--z",
        "0.5,0",
        "--sigma",
        "0.2",
        "--y",
        "0.7",
    ];
    let strip = |o: Output| {
        let s = stdout(&o);
        s.rsplit_once(',').unwrap().0.to_string()
    };
    assert_eq!(strip(run(&args)), strip(run(&args)));
}

#[test]
fn list_names_every_check() {
    let o = run(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 14);
}
