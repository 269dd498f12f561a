use cobar_engine::scenarios::{list_scenarios, parse_scenario, run_parsed, run_scenario, RunOpts, ScenarioError, Verdict};

#[test]
fn reports_are_byte_identical_without_timing() {
    for name in ["prop31-b10", "may-collapse", "mfilt-inequality"] {
        let a = run_scenario(name, &RunOpts::default()).unwrap();
        let b = run_scenario(name, &RunOpts::default()).unwrap();
        assert_eq!(a.text(), b.text(), "{name}");
        assert_eq!(a.lines(), b.lines(), "{name}");
        assert!(a.wall.is_none());
    }
}

#[test]
fn timing_only_adds_a_wall_line() {
    let plain = run_scenario("may-collapse", &RunOpts::default()).unwrap();
    let timed = run_scenario("may-collapse", &RunOpts { timing: true, ..Default::default() }).unwrap();
    let mut lines = timed.lines();
    assert!(lines.pop().unwrap().starts_with("wall may-collapse "));
    assert_eq!(lines, plain.lines());
}

#[test]
fn every_shipped_scenario_has_a_quoted_anchor() {
    let all = list_scenarios();
    assert_eq!(all.len(), 11);
    for (name, cite) in &all {
        assert!(!cite.is_empty(), "{name}");
        assert!(!cite.contains('"'), "{name}");
    }
}

#[test]
fn unknown_scenario_is_an_error() {
    let e = run_scenario("no-such", &RunOpts::default()).unwrap_err();
    assert!(matches!(e, ScenarioError::Unknown(ref n) if n == "no-such"));
}

#[test]
fn malformed_scenarios_are_rejected_with_lines() {
    let e = parse_scenario("x.txt", "runner b10\n").unwrap_err();
    assert_eq!(e.to_string(), "x.txt:1: expected `scenario <name>` first");
    let e = parse_scenario("x.txt", "scenario s\ncite unquoted\nrunner b10\n").unwrap_err();
    assert_eq!(e.to_string(), "x.txt:2: cite must be quoted");
    let e = parse_scenario("x.txt", "scenario s\nrunner b10\n").unwrap_err();
    assert!(matches!(e, ScenarioError::Missing { ref key, .. } if key == "cite"));
}

#[test]
fn runner_errors_become_error_verdicts() {
    let sc = parse_scenario("x.txt", "scenario s\ncite \"c\"\nrunner nope\n").unwrap();
    assert_eq!(run_parsed(&sc, &RunOpts::default()).verdict, Verdict::Error);
    // a runner missing its parameters fails the same way
    let sc = parse_scenario("x.txt", "scenario s\ncite \"c\"\nrunner mfilt\n").unwrap();
    let r = run_parsed(&sc, &RunOpts::default());
    assert_eq!(r.verdict, Verdict::Error);
}

#[test]
fn b10_holds_at_p7() {
    let r = run_scenario("prop31-b10", &RunOpts { p: Some(7), ..Default::default() }).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.text());
    assert_eq!(r.p, 7);
}
