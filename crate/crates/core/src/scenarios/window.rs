//! Window comparisons of whole pages against additive descriptions, and the
//! May filtration bound.

use std::collections::BTreeMap;

use crate::expr::IntEnv;
use crate::presets::{BuildOpts, Library};
use crate::ss_engine::{compare_poincare, max_mfilt_below, Description, Factor, FactorKind, PageSpec, Summand};

use super::prop31::{comodule, hfpss_pages};
use super::{expand_for, split_for, Ctx, ScenarioError};

/// Build the description from `factor`, `summand` and `class` lines:
///
/// ```text
/// factor <group> <poly|ext|divided|trunc(h)> <col> <deg> <name>
/// summand <label> <group>…
/// class <label> <col> <deg> <name> [for j=a..b]
/// ```
fn description(cx: &Ctx, env: &IntEnv) -> Result<Description, ScenarioError> {
    let bad = |line: usize, what: &str| ScenarioError::Invalid(format!("line {line}: {what}"));
    let mut groups: BTreeMap<String, Vec<Factor>> = BTreeMap::new();
    for e in cx.all("factor") {
        let t: Vec<&str> = e.rest.split_whitespace().collect();
        let [group, kind, col, deg, name] = t.as_slice() else {
            return Err(bad(e.line, "expected `factor <group> <kind> <col> <deg> <name>`"));
        };
        let kind = match *kind {
            "poly" => FactorKind::Poly,
            "ext" => FactorKind::Ext,
            "divided" => FactorKind::Divided,
            k => {
                let h = k
                    .strip_prefix("trunc(")
                    .and_then(|h| h.strip_suffix(')'))
                    .ok_or_else(|| bad(e.line, "kind is poly, ext, divided or trunc(h)"))?;
                FactorKind::Trunc(cx.int_in(h, env)? as u32)
            }
        };
        let at = (cx.int_in(col, env)?, cx.int_in(deg, env)?);
        groups.entry(group.to_string()).or_default().push(Factor { name: name.to_string(), at, kind });
    }
    let mut order = Vec::new();
    let mut summands: BTreeMap<String, Summand> = BTreeMap::new();
    for e in cx.all("summand") {
        let mut t = e.rest.split_whitespace();
        let label = t.next().ok_or_else(|| bad(e.line, "summand needs a label"))?.to_string();
        let mut s = Summand::default();
        for g in t {
            s.factors.extend(groups.get(g).ok_or_else(|| bad(e.line, &format!("unknown group {g}")))?.iter().cloned());
        }
        order.push(label.clone());
        summands.insert(label, s);
    }
    for e in cx.all("class") {
        let (body, clause) = split_for(&e.rest);
        let t: Vec<&str> = body.split_whitespace().collect();
        let [label, col, deg, name] = t.as_slice() else {
            return Err(bad(e.line, "expected `class <summand> <col> <deg> <name>`"));
        };
        for env2 in expand_for(cx, clause, env)? {
            let at = (cx.int_in(col, &env2)?, cx.int_in(deg, &env2)?);
            let shown = format!("{name}{}", super::fmt_env(&env2));
            summands
                .get_mut(*label)
                .ok_or_else(|| bad(e.line, &format!("unknown summand {label}")))?
                .classes
                .push((shown, at));
        }
    }
    Ok(Description { summands: order.into_iter().map(|l| summands.remove(&l).unwrap()).collect() })
}

/// For each k: the last page of the k-column spectral sequence against the
/// description, degree by degree through the window.
pub(super) fn e4_window(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let preset = cx.req("preset")?.to_string();
    let ks = cx.int_list("ks")?;
    let cols_src = cx.req("columns")?.to_string();
    let max = cx.max_degree()?;
    let mut ok = true;
    for k in ks {
        let mut env = IntEnv::new();
        env.insert("k".into(), k as i128);
        let columns = cx.int_in(&cols_src, &env)? as u32;
        let c = comodule(cx, &preset, columns, max)?;
        let pages = hfpss_pages(&c, max)?;
        let page = pages.last().expect("hfpss has pages");
        let desc = description(cx, &env)?;
        let rep = compare_poincare(page, &desc, page.min, max);
        let total: u64 = page.dims().values().sum();
        cx.note(format!(
            "k={k}: E_{} in degrees {}..{}: {} classes over {} bidegrees, {} mismatch(es)",
            page.r,
            page.min,
            max,
            total,
            rep.compared,
            rep.mismatches.len()
        ));
        for ((col, deg), got, want) in &rep.mismatches {
            cx.note(format!("  k={k} ({col},{deg}): engine {got}, description {want}"));
        }
        ok &= rep.matches();
    }
    Ok(ok)
}

/// Run the differential algebra's rounds and compare the last page with the
/// described E^∞ through the window.
pub(super) fn may_collapse(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let preset = cx.req("preset")?.to_string();
    let max = cx.max_degree()?;
    let d = Library::builtin().algebra(&preset, &BuildOpts::p(cx.p).cap(max))?;
    let spec = PageSpec::from_rounds(&d.alg, &d.rounds, max);
    let pages = spec.run()?;
    let rounds: Vec<String> = d.rounds.iter().map(|(r, t)| format!("d^{r} on {} generator(s)", t.len())).collect();
    cx.note(format!("preset {preset}: cap {max}, {}", rounds.join(", ")));
    let fails = spec.d_squared_failures()?;
    if !fails.is_empty() {
        for (r, at, msg) in &fails {
            cx.note(format!("  d∘d ≠ 0 in round {r} at {at:?}: {msg}"));
        }
        return Ok(false);
    }
    let last = pages.last().expect("pages");
    let desc = description(cx, &IntEnv::new())?;
    let rep = compare_poincare(last, &desc, 0, max);
    let dims = last.total_dims();
    let shown: Vec<String> = dims.iter().filter(|(_, n)| **n > 0).map(|(d, n)| format!("{d}:{n}")).collect();
    cx.note(format!("E^∞ total dimensions (degree:dim): {}", shown.join(" ")));
    for ((col, deg), got, want) in &rep.mismatches {
        cx.note(format!("  ({col},{deg}): engine {got}, description {want}"));
    }
    cx.note(format!("{} bidegrees compared, {} mismatch(es)", rep.compared, rep.mismatches.len()));
    Ok(rep.matches())
}

/// For each k, the largest May filtration below the bound stays under the threshold.
pub(super) fn mfilt(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let preset = cx.req("preset")?.to_string();
    let cap = cx.req_int("cap")?;
    let ks = cx.int_list("ks")?;
    let (bound_src, thr_src) = (cx.req("bound")?.to_string(), cx.req("threshold")?.to_string());
    let alg = Library::builtin().bare_algebra(&preset, &BuildOpts::p(cx.p).cap(cap))?;
    let mut ok = true;
    for k in ks {
        let mut env = IntEnv::new();
        env.insert("k".into(), k as i128);
        let bound = cx.int_in(&bound_src, &env)?;
        let thr = cx.int_in(&thr_src, &env)? as u64;
        if bound > cap {
            return Err(ScenarioError::Invalid(format!("bound {bound} exceeds the cap {cap}")));
        }
        match max_mfilt_below(&alg, bound) {
            Some((w, m)) => {
                cx.note(format!("k={k}: degrees < {bound}: max mfilt {w} at {} (threshold {thr})", alg.fmt_monomial(&m)));
                ok &= w < thr;
            }
            None => cx.note(format!("k={k}: no monomials below {bound}")),
        }
    }
    Ok(ok)
}
