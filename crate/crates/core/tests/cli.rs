use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cobar-verify")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn passing_verification_exits_zero() {
    let (code, out) = run(&["--format", "lines", "verify", "may-collapse"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("scenario may-collapse 5 pass "));
}

#[test]
fn failing_checks_exit_one() {
    let (code, out) = run(&["--format", "lines", "check-axioms", "hk", "--flag", "tt2-literal"]);
    assert_eq!(code, 1);
    assert!(out.lines().any(|l| l.starts_with("failure coassociativity tt2 ")));
    assert_eq!(run(&["arith", "generator", "--l", "5", "--q", "4"]).0, 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "no-such"]).0, 2);
    assert_eq!(run(&["basis", "hk"]).0, 2);
    assert_eq!(run(&["cobar-d", "a-star", "--expr", "zz"]).0, 2);
    assert_eq!(run(&["--format", "xml", "list"]).0, 2);
}

#[test]
fn chart_records() {
    let dir = std::env::temp_dir().join(format!("cobar-verify-chart-{}", std::process::id()));
    let (code, out) = run(&["--format", "lines", "hfpss", "hk", "--columns", "2", "--max-degree", "50", "--dump-chart", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let dumped = std::fs::read_to_string(&dir).unwrap();
    std::fs::remove_file(&dir).unwrap();
    let chart: Vec<&str> = out.lines().filter(|l| l.starts_with("c ")).collect();
    assert_eq!(dumped.lines().collect::<Vec<_>>(), chart);
    for l in &chart {
        let f: Vec<&str> = l.split(' ').collect();
        let dim: usize = f[3].parse().unwrap();
        assert!(f[1].parse::<i64>().is_ok() && f[2].parse::<i64>().is_ok());
        assert_eq!(f.len() - 4, dim, "{l}");
    }
    assert!(chart.contains(&"c 1 -2 1 t"));
}

#[test]
fn hopf_expressions_may_omit_the_unit_slot() {
    let (code, out) = run(&["--format", "lines", "cobar-d", "a-star", "--expr", "tau[1]"]);
    assert_eq!(code, 0);
    assert_eq!(out, "source 1 [tau[1]] 1\nterm -1 [tau[0]|xi[1]] 1\ncocycle false\n");
}
