//! Acceptance suite: one line per criterion, then the evidence behind it.
//!
//! Criteria 3(b), 4 and 6 cannot be met as stated: the engine finds
//! concrete discrepancies in the displayed computations. Those criteria print
//! FAIL, and the run only breaks if their discrepancy signature changes or if
//! any other criterion fails. Runs without the libtest harness so the lines
//! always reach the output.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cobar_engine::arith_witness::{bernoulli_table, check_generator, image_of_j_report};
use cobar_engine::cobar::{Cobar, CobarConfig};
use cobar_engine::hopf_comod::{check_comodule_axioms, check_hopf_axioms, AlgComodule};
use cobar_engine::presets::{BuildOpts, Library};
use cobar_engine::scenarios::{run_scenario, RunOpts, VerificationReport, Verdict};
use num_bigint::BigInt;
use num_traits::Zero;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
    /// For a criterion that is expected to fail: whether the failure is the
    /// analysed one.
    known: Option<bool>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome { pass, summary: summary.into(), details: Vec::new(), known: None }
    }
}

fn scenario(name: &str) -> VerificationReport {
    run_scenario(name, &RunOpts::default()).expect("shipped scenario")
}

/// Labels of `label: d(…) DIFFERS` evidence lines.
fn differing(r: &VerificationReport) -> Vec<String> {
    r.evidence
        .iter()
        .filter(|e| e.contains(" DIFFERS "))
        .filter_map(|e| e.trim().split(':').next().map(str::to_string))
        .collect()
}

fn has(r: &VerificationReport, line: &str) -> bool {
    r.evidence.iter().any(|e| e.trim() == line)
}

fn axioms() -> Outcome {
    let lib = Library::builtin();
    let mut out = Outcome::new(true, "");
    let mut checks = 0;
    for name in ["a-star", "bp"] {
        let h = lib.hopf(name, &BuildOpts::p(5).cap(60)).unwrap();
        let r = check_hopf_axioms(&h.hopf).unwrap();
        checks += r.checked;
        out.pass &= r.passed();
        out.details.push(format!("{name} through 60: {} checks, {} failures", r.checked, r.failures.len()));
    }
    for (name, cols) in [("hk", 2), ("v1-hk", 2), ("v1-hk-display", 2), ("bpv1-thh", 4), ("lemma34", 0)] {
        let c = lib.comodule(name, &BuildOpts::p(5).columns(cols)).unwrap();
        let r = check_comodule_axioms(&c.comod).unwrap();
        checks += r.checked;
        out.pass &= r.passed();
        out.details.push(format!("{name}: {} checks, {} failures", r.checked, r.failures.len()));
    }
    out.summary = format!("{checks} coassociativity/counit/homogeneity checks over 7 presets");
    out
}

fn d_squared() -> Outcome {
    let lib = Library::builtin();
    let mut out = Outcome::new(true, "");
    let mut total = 0;
    let mut sweep = |label: String, cob: Cobar<'_, AlgComodule>, min: i64, max: i64, out: &mut Outcome| {
        let r = cob.d_squared_failures(2, min, max).unwrap();
        total += r.checked;
        out.pass &= r.failures.is_empty();
        out.details.push(format!("{label} through {max}: {} words, {} failures", r.checked, r.failures.len()));
        out.details.extend(r.failures.iter().take(3).map(|f| format!("  {f}")));
    };
    for name in ["a-star", "bp"] {
        let h = lib.hopf(name, &BuildOpts::p(5).cap(100)).unwrap();
        let c = AlgComodule::trivial(h.hopf.clone(), 100).unwrap();
        for normalized in [true, false] {
            let cob = Cobar::new(&c, CobarConfig { normalized, ..Default::default() }).unwrap();
            sweep(format!("{name} (normalized {normalized})"), cob, 0, 100, &mut out);
        }
    }
    // lemma34 only presents the comodule below 2p^2 - 2
    for (name, cols, max) in [("hk", 2, 100), ("v1-hk", 2, 100), ("v1-hk-display", 2, 100), ("bpv1-thh", 4, 100), ("lemma34", 0, 47)] {
        let c = lib.comodule(name, &BuildOpts::p(5).columns(cols).cap(max + 8)).unwrap();
        for normalized in [true, false] {
            let cob = Cobar::new(&c.comod, CobarConfig { normalized, ..Default::default() }).unwrap();
            sweep(format!("{name} (normalized {normalized})"), cob, c.comod.min_degree, max, &mut out);
        }
    }
    out.summary = format!("d∘d = 0 on {total} basis words of filtration ≤ 2");
    out
}

fn prop31() -> Outcome {
    let reports: Vec<_> = ["prop31-tau2", "prop31-xi1p", "prop31-displays", "prop31-b10"].map(scenario).into();
    let v = |i: usize| reports[i].verdict == Verdict::Pass;
    let (a, b, c) = (v(0) && v(1), v(2), v(3));
    let diff = differing(&reports[2]);
    let mut out = Outcome::new(
        a && b && c,
        format!(
            "(a) {} (b) {} ({} of 7 displays differ: {}) (c) {}",
            pf(a),
            pf(b),
            diff.len(),
            diff.join(" "),
            pf(c)
        ),
    );
    // D1 matches exactly and D3 termwise; the other five carry missing or misprinted terms
    out.known = Some(a && c && diff == ["D2", "D4", "D5", "D6", "D7"]);
    for r in &reports {
        out.details.push(format!("{} {}", r.name, r.verdict.as_str()));
    }
    out
}

fn step4() -> Outcome {
    let r = scenario("thm312-step4-table");
    let diff = differing(&r);
    let summary_line = r.evidence.iter().find(|e| e.starts_with("table ")).cloned().unwrap_or_default();
    let mut out = Outcome::new(r.verdict == Verdict::Pass, format!("{summary_line}; d_1 displays differing: {}", diff.join(" ")));
    let want_diff = ["D1 i=1", "D1 i=2", "D1 i=3", "D5", "D9", "D11 i=1", "D11 i=2", "D11 i=3", "D11 i=4", "D11 i=5"];
    out.known = Some(
        summary_line == "table false, strike-outs false, d_1 displays false, target true"
            && diff == want_diff
            && has(&r, "duplicate [1] t1p mu2 t: r10c3, r10c4")
            && has(&r, "duplicate [t1^5 t2] 1: r2c1, r5c1")
            && has(&r, "duplicate v1^5 [t2] 1: r3c2, r6c2")
            && has(&r, "r9c4 ([1] mu2 gsb[0] t): dies on the E_3 page but kept in the table"),
    );
    out.details = r.evidence.iter().filter(|e| !e.starts_with("    ")).cloned().collect();
    out
}

fn window(name: &str) -> Outcome {
    let r = scenario(name);
    let per_k: Vec<&str> = r.evidence.iter().filter(|e| e.starts_with("k=")).map(String::as_str).collect();
    let mut out = Outcome::new(r.verdict == Verdict::Pass, per_k.join("; "));
    out.details = r.evidence.clone();
    out
}

fn step5() -> Outcome {
    let r = scenario("thm312-step5-congruence");
    let cases: Vec<String> = r.evidence.iter().filter(|e| e.contains("witnesses")).map(|e| e.trim().to_string()).collect();
    let mut out = Outcome::new(r.verdict == Verdict::Pass, cases.join("; "));
    out.known = Some(
        cases
            == [
                "z3: unexpected witnesses at k in [20], expected but absent at k in []",
                "y1: unexpected witnesses at k in [4, 9, 14, 19], expected but absent at k in []",
                "y3: witnesses exactly where expected (none)",
            ],
    );
    out.details = r.evidence.clone();
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn arith() -> Outcome {
    let rep = image_of_j_report(5, 2, 50).unwrap();
    let table = bernoulli_table(201);
    let mut vsc = true;
    for n in 1..=100u64 {
        let want: u64 = (2..=2 * n + 1).filter(|&l| is_prime(l) && (2 * n) % (l - 1) == 0).product();
        vsc &= table[2 * n as usize].denom() == &BigInt::from(want);
        vsc &= table[2 * n as usize + 1].is_zero();
    }
    let gens = check_generator(2, 5) && !check_generator(4, 5);
    let rows = rep.rows.iter().filter(|r| r.agrees()).count();
    let mut out = Outcome::new(
        rep.all_agree() && vsc && gens,
        format!("{rows}/50 rows agree, von Staudt-Clausen through B_200 {}, generator checks {}", pf(vsc), pf(gens)),
    );
    out.details = rep.lines();
    out
}

fn properties() -> Outcome {
    let mut out = Outcome::new(true, "");
    let mut cases = 0;
    for (i, (name, f)) in common::PROPERTIES.iter().enumerate() {
        match f(common::seed_for(i)) {
            Ok(n) => {
                cases += n;
                out.details.push(format!("{name}: {n} cases, seed {:#x}", common::seed_for(i)));
            }
            Err(e) => {
                out.pass = false;
                out.details.push(format!("{name}: {e}"));
            }
        }
    }
    out.summary = format!("{} properties, {cases} cases, 0 failures", common::PROPERTIES.len());
    if !out.pass {
        out.summary = "property failures".into();
    }
    out
}

fn pf(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--verbose");
    let criteria: &[Criterion] = &[
        (1, "axiom suite", Some(Duration::from_secs(60)), axioms),
        (2, "cobar soundness", None, d_squared),
        (3, "cocycle and display replication", Some(Duration::from_secs(10)), prop31),
        (4, "degree-88 candidate table", None, step4),
        (5, "E^4 window", Some(Duration::from_secs(300)), || window("cor39-e4")),
        (6, "congruence audits", None, step5),
        (7, "May-filtration inequality", None, || window("mfilt-inequality")),
        (8, "arithmetic witness", Some(Duration::from_secs(10)), arith),
        (9, "property suite", None, properties),
    ];
    let mut unexpected = Vec::new();
    for (n, name, budget, f) in criteria {
        let t = Instant::now();
        let out = f();
        let wall = t.elapsed();
        let in_budget = budget.is_none_or(|b| wall <= b);
        let pass = out.pass && in_budget;
        let note = match out.known {
            Some(true) if !pass => " [known discrepancy, analysed]",
            Some(false) if !pass => " [discrepancy differs from the analysed one]",
            _ => "",
        };
        let budget_note = if in_budget { String::new() } else { format!(" over budget {:?}", budget.unwrap()) };
        println!(
            "criterion {n} {name}: {} ({}){note} [{:.2}s{budget_note}]",
            if pass { "PASS" } else { "FAIL" },
            out.summary,
            wall.as_secs_f64()
        );
        if verbose || (!pass && out.known != Some(true)) {
            for d in &out.details {
                println!("    {d}");
            }
        }
        // known failures stay failures; anything else must pass
        let ok = match out.known {
            Some(k) => !out.pass && k && in_budget,
            None => pass,
        };
        if !ok {
            unexpected.push(*n);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: results as analysed (criteria 3, 4 and 6 fail on documented discrepancies)");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected results for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
