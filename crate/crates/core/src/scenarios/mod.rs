//! Replayable verification scenarios.
//!
//! A scenario file is line oriented: `keyword rest-of-line`, `#` comments.
//! Every file starts with `scenario <name>`, names its `runner`, and carries a
//! quoted `cite` anchor. The remaining keywords belong to the runner; integer
//! fields are expressions in `p` (and loop variables where a runner binds them).

mod prop31;
mod thm312;
mod window;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cobar::CobarError;
use crate::expr::{eval_int_str, ExprError, IntEnv};
use crate::graded_algebra::AlgebraError;
use crate::hopf_comod::ComodError;
use crate::presets::PresetError;
use crate::ss_engine::SsError;

const BUILTIN: &[&str] = &[
    include_str!("../../data/scenarios/prop31-tau2.txt"),
    include_str!("../../data/scenarios/prop31-xi1p.txt"),
    include_str!("../../data/scenarios/prop31-b10.txt"),
    include_str!("../../data/scenarios/prop31-degree-gap.txt"),
    include_str!("../../data/scenarios/prop31-displays.txt"),
    include_str!("../../data/scenarios/cor39-e4.txt"),
    include_str!("../../data/scenarios/thm312-step3.txt"),
    include_str!("../../data/scenarios/thm312-step4-table.txt"),
    include_str!("../../data/scenarios/thm312-step5-congruence.txt"),
    include_str!("../../data/scenarios/may-collapse.txt"),
    include_str!("../../data/scenarios/mfilt-inequality.txt"),
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("scenario `{name}` lacks `{key}`")]
    Missing { name: String, key: String },
    #[error(transparent)]
    Preset(#[from] PresetError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Cobar(#[from] CobarError),
    #[error(transparent)]
    Ss(#[from] SsError),
    #[error(transparent)]
    Comod(#[from] ComodError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub key: String,
    pub rest: String,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub cite: String,
    pub runner: String,
    pub entries: Vec<Entry>,
}

pub fn parse_scenario(file: &str, src: &str) -> Result<Scenario, ScenarioError> {
    let perr = |line, msg: &str| ScenarioError::Parse { file: file.to_string(), line, msg: msg.to_string() };
    let mut entries = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        entries.push(Entry { key: key.to_string(), rest: rest.trim().to_string(), line: i + 1 });
    }
    let first = entries.first().ok_or_else(|| perr(1, "empty scenario"))?;
    if first.key != "scenario" || first.rest.is_empty() {
        return Err(perr(first.line, "expected `scenario <name>` first"));
    }
    let name = first.rest.clone();
    let one = |k: &str| -> Result<String, ScenarioError> {
        let mut it = entries.iter().filter(|e| e.key == k);
        let e = it.next().ok_or_else(|| ScenarioError::Missing { name: name.clone(), key: k.into() })?;
        if let Some(dup) = it.next() {
            return Err(perr(dup.line, &format!("`{k}` given twice")));
        }
        Ok(e.rest.clone())
    };
    let cite = one("cite")?;
    let cite = cite
        .strip_prefix('"')
        .and_then(|c| c.strip_suffix('"'))
        .ok_or_else(|| perr(entries.iter().find(|e| e.key == "cite").unwrap().line, "cite must be quoted"))?
        .to_string();
    let runner = one("runner")?;
    Ok(Scenario { name, cite, runner, entries })
}

fn builtin() -> Vec<Scenario> {
    BUILTIN
        .iter()
        .map(|src| parse_scenario("<builtin>", src).expect("shipped scenarios parse"))
        .collect()
}

/// Shipped scenario names with their citation anchors, in run order.
pub fn list_scenarios() -> Vec<(String, String)> {
    builtin().into_iter().map(|s| (s.name, s.cite)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub name: String,
    pub cite: String,
    pub p: u32,
    pub verdict: Verdict,
    pub evidence: Vec<String>,
    /// Only filled when timing was requested, so default reports stay byte-identical.
    pub wall: Option<Duration>,
}

impl VerificationReport {
    pub fn text(&self) -> String {
        let mut out = format!("{} [p={}]: {}\n  cites \"{}\"\n", self.name, self.p, self.verdict.as_str().to_uppercase(), self.cite);
        for e in &self.evidence {
            let _ = writeln!(out, "  {e}");
        }
        if let Some(w) = self.wall {
            let _ = writeln!(out, "  wall {:.3}s", w.as_secs_f64());
        }
        out
    }

    /// `scenario <name> <p> <verdict>` then one `evidence <name> <line>` per line.
    pub fn lines(&self) -> Vec<String> {
        let mut v = vec![format!("scenario {} {} {} \"{}\"", self.name, self.p, self.verdict.as_str(), self.cite)];
        v.extend(self.evidence.iter().map(|e| format!("evidence {} {e}", self.name)));
        if let Some(w) = self.wall {
            v.push(format!("wall {} {:.3}", self.name, w.as_secs_f64()));
        }
        v
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOpts {
    /// Overrides the scenario's prime (default 5).
    pub p: Option<u32>,
    /// Overrides the scenario's `max-degree` where it has one.
    pub max_degree: Option<i64>,
    pub timing: bool,
}

pub fn run_scenario(name: &str, opts: &RunOpts) -> Result<VerificationReport, ScenarioError> {
    let sc = builtin().into_iter().find(|s| s.name == name).ok_or_else(|| ScenarioError::Unknown(name.to_string()))?;
    Ok(run_parsed(&sc, opts))
}

/// Run a parsed scenario; runner failures become an `Error` verdict.
pub fn run_parsed(sc: &Scenario, opts: &RunOpts) -> VerificationReport {
    let start = Instant::now();
    let mut cx = Ctx { sc, p: opts.p.unwrap_or(5), max_override: opts.max_degree, evidence: Vec::new() };
    let res = match sc.runner.as_str() {
        "nonboundary" => prop31::nonboundary(&mut cx),
        "b10" => prop31::b10(&mut cx),
        "degree-gap" => prop31::degree_gap(&mut cx),
        "displays" => prop31::displays(&mut cx),
        "e4-window" => window::e4_window(&mut cx),
        "step3" => thm312::step3(&mut cx),
        "step4" => thm312::step4(&mut cx),
        "congruence" => thm312::congruence(&mut cx),
        "may-collapse" => window::may_collapse(&mut cx),
        "mfilt" => window::mfilt(&mut cx),
        other => Err(ScenarioError::Invalid(format!("unknown runner `{other}`"))),
    };
    let p = cx.p;
    let mut evidence = cx.evidence;
    let verdict = match res {
        Ok(true) => Verdict::Pass,
        Ok(false) => Verdict::Fail,
        Err(e) => {
            evidence.push(format!("error: {e}"));
            Verdict::Error
        }
    };
    VerificationReport {
        name: sc.name.clone(),
        cite: sc.cite.clone(),
        p,
        verdict,
        evidence,
        wall: opts.timing.then(|| start.elapsed()),
    }
}

/// Runner state: the scenario, the prime, and collected evidence.
pub(crate) struct Ctx<'a> {
    sc: &'a Scenario,
    p: u32,
    max_override: Option<i64>,
    evidence: Vec<String>,
}

impl Ctx<'_> {
    fn note(&mut self, s: impl Into<String>) {
        self.evidence.push(s.into());
    }

    fn all(&self, key: &str) -> Vec<&Entry> {
        self.sc.entries.iter().filter(|e| e.key == key).collect()
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.sc.entries.iter().find(|e| e.key == key).map(|e| e.rest.as_str())
    }

    fn req(&self, key: &str) -> Result<&str, ScenarioError> {
        self.get(key).ok_or_else(|| ScenarioError::Missing { name: self.sc.name.clone(), key: key.to_string() })
    }

    fn env(&self) -> IntEnv {
        let mut env = IntEnv::new();
        env.insert("p".into(), self.p as i128);
        env
    }

    fn int_in(&self, src: &str, extra: &IntEnv) -> Result<i64, ScenarioError> {
        let mut env = self.env();
        env.extend(extra.iter().map(|(k, v)| (k.clone(), *v)));
        Ok(eval_int_str(src, &env)? as i64)
    }

    fn int(&self, src: &str) -> Result<i64, ScenarioError> {
        self.int_in(src, &IntEnv::new())
    }

    fn req_int(&self, key: &str) -> Result<i64, ScenarioError> {
        self.int(self.req(key)?)
    }

    /// `max-degree`, unless overridden from the command line.
    fn max_degree(&self) -> Result<i64, ScenarioError> {
        match self.max_override {
            Some(m) => Ok(m),
            None => self.req_int("max-degree"),
        }
    }

    /// Whitespace-separated integer expressions.
    fn int_list(&self, key: &str) -> Result<Vec<i64>, ScenarioError> {
        self.req(key)?.split_whitespace().map(|s| self.int(s)).collect()
    }
}

/// `body for v=lo..hi` split off the end of a line; without the clause the
/// body is used once with no binding.
pub(crate) fn split_for(rest: &str) -> (&str, Option<(&str, &str, &str)>) {
    if let Some((body, clause)) = rest.rsplit_once(" for ") {
        if let Some((var, range)) = clause.trim().split_once('=') {
            if let Some((lo, hi)) = range.split_once("..") {
                return (body.trim(), Some((var.trim(), lo.trim(), hi.trim())));
            }
        }
    }
    (rest.trim(), None)
}

/// Expand a `for` clause into integer environments.
fn expand_for(cx: &Ctx, clause: Option<(&str, &str, &str)>, base: &IntEnv) -> Result<Vec<IntEnv>, ScenarioError> {
    let Some((var, lo, hi)) = clause else { return Ok(vec![base.clone()]) };
    let (lo, hi) = (cx.int_in(lo, base)?, cx.int_in(hi, base)?);
    Ok((lo..=hi)
        .map(|v| {
            let mut e = base.clone();
            e.insert(var.to_string(), v as i128);
            e
        })
        .collect())
}

fn fmt_env(env: &IntEnv) -> String {
    let sorted: BTreeMap<_, _> = env.iter().filter(|(k, _)| k.as_str() != "p").collect();
    sorted.iter().map(|(k, v)| format!(" {k}={v}")).collect()
}
