//! Two-column computations over H_*(V(1) ∧ THH): non-boundary checks, the
//! seven-candidate solve, the degree gap and the displayed d_1 expansions.

use std::collections::BTreeSet;

use crate::cobar::{compare, element_from_tensor, Cobar, CobarConfig, CobarElement, CobarWord, SignMode};
use crate::expr::IntEnv;
use crate::fp_linear::Fp;
use crate::graded_algebra::{GenId, Monomial};
use crate::hopf_comod::{check_comodule_axioms, Comodule};
use crate::presets::{BuildOpts, ComodulePreset, Library};
use crate::ss_engine::{ClassKey, HomologyComodule, PageSpec, SSPage};

use super::{Ctx, ScenarioError};

/// Build a comodule preset and check its axioms.
pub(super) fn comodule(cx: &mut Ctx, name: &str, columns: u32, cap: i64) -> Result<ComodulePreset, ScenarioError> {
    let c = Library::builtin().comodule(name, &BuildOpts::p(cx.p).columns(columns).cap(cap))?;
    let rep = check_comodule_axioms(&c.comod)?;
    if let Some(f) = rep.failures.first() {
        return Err(ScenarioError::Invalid(format!("{name} fails {} at {}: {}", f.axiom, f.monomial, f.detail)));
    }
    cx.note(format!("preset {name}: columns {columns}, cap {cap}, axioms ok ({} checks)", rep.checked));
    Ok(c)
}

/// The pages of the homotopy fixed point spectral sequence of a comodule preset.
pub(super) fn hfpss_pages(c: &ComodulePreset, max: i64) -> Result<Vec<SSPage>, ScenarioError> {
    Ok(PageSpec::hfpss(&c.comod, c.column, max)?.run()?)
}

/// A tensor expression over (hopf^s, comodule) as a cobar element.
pub(super) fn cobar_elem(
    c: &ComodulePreset,
    s: usize,
    src: &str,
    env: &IntEnv,
) -> Result<CobarElement<Monomial>, ScenarioError> {
    let ha = &c.hopf().alg;
    let mut slots = vec![ha; s];
    slots.push(c.alg());
    Ok(element_from_tensor(&c.eval_with(&slots, src, env)?, s + 1)?)
}

/// Replace each comodule monomial by its class on the page.
pub(super) fn to_homology(
    h: &HomologyComodule,
    f: Fp,
    x: &CobarElement<Monomial>,
    alg: &crate::graded_algebra::Algebra,
) -> Result<CobarElement<ClassKey>, ScenarioError> {
    let mut out = CobarElement::zero(x.s);
    for (w, &c) in &x.terms {
        let classes = h
            .class_of(&alg.monomial(w.m.clone(), 1))
            .ok_or_else(|| ScenarioError::Invalid(format!("{} is not a cycle of the page", alg.fmt_monomial(&w.m))))?;
        for (k, v) in classes {
            let word = CobarWord { scalar: w.scalar.clone(), bars: w.bars.clone(), m: k };
            out = out.add(f, &CobarElement::word(word).scale(f, f.mul(c, v)));
        }
    }
    Ok(out)
}

fn degree_of<C: Comodule>(cob: &Cobar<C>, x: &CobarElement<C::Key>) -> Option<i64> {
    x.terms.keys().next().map(|w| cob.word_degree(w))
}

/// Lead term, completed inside the comodule words listed under
/// `complete-in` when it is not already a cocycle, then pushed to the
/// two-column homology and tested against every coboundary.
pub(super) fn nonboundary(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let max = cx.max_degree()?;
    let columns = cx.req_int("columns")? as u32;
    let c_name = cx.req("preset")?.to_string();
    let c = comodule(cx, &c_name, columns, max)?;
    let f = c.alg().field();
    let lead_src = cx.req("lead")?.to_string();
    let lead = cobar_elem(&c, 1, &lead_src, &IntEnv::new())?;
    let chain = Cobar::new(&c.comod, CobarConfig::default())?;
    let deg = degree_of(&chain, &lead).ok_or_else(|| ScenarioError::Invalid("lead is zero".into()))?;
    cx.note(format!("lead {} in degree {deg}", chain.fmt(&lead)));
    let dl = chain.d(&lead)?;
    let mut x = lead.clone();
    if !dl.is_zero() {
        let allowed: BTreeSet<GenId> = match cx.get("complete-in") {
            Some(names) => names.split_whitespace().map(|n| c.alg().id(n)).collect::<Result<_, _>>()?,
            None => BTreeSet::new(),
        };
        let domain: Vec<_> = chain
            .basis(1, deg)?
            .into_iter()
            .filter(|w| !lead.terms.contains_key(w) && w.m.0.iter().all(|(g, _)| allowed.contains(g)))
            .map(CobarElement::word)
            .collect();
        match chain.coboundary_solve(&dl.scale(f, f.neg(1)), Some(&domain))? {
            Some(fix) => {
                cx.note(format!("completion over {} words: {}", domain.len(), chain.fmt(&fix)));
                x = x.add(f, &fix);
            }
            None => {
                cx.note(format!("no completion of the lead among {} words", domain.len()));
                return Ok(false);
            }
        }
    } else {
        cx.note("lead is a cocycle as written");
    }
    let pages = hfpss_pages(&c, max)?;
    let page = pages.last().expect("hfpss has pages");
    let h = HomologyComodule::new(&c.comod, c.column, page)?;
    let hx = to_homology(&h, f, &x, c.alg())?;
    let hc = Cobar::new(&h, CobarConfig::default())?;
    if hx.is_zero() {
        cx.note("class vanishes on the page");
        return Ok(false);
    }
    let cc = hc.cocycle_check(&hx)?;
    cx.note(format!("on the E_{} page: {} (cocycle: {})", page.r, hc.fmt(&hx), cc.is_cocycle));
    if !cc.is_cocycle {
        return Ok(false);
    }
    let n = hc.basis(0, deg)?.len();
    match hc.coboundary_solve_up_to_scalar(&hx, None)? {
        None => {
            cx.note(format!("no preimage for any nonzero multiple among {n} filtration-0 words"));
            Ok(true)
        }
        Some((l, pre)) => {
            cx.note(format!("d({}) = {l} x target", hc.fmt(&pre)));
            Ok(false)
        }
    }
}

/// The seven-candidate solve in the display model, then the full solve over
/// the page homology.
pub(super) fn b10(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let max = cx.max_degree()?;
    let columns = cx.req_int("columns")? as u32;
    let target_src = cx.req("target")?.to_string();
    let cand_srcs: Vec<String> = cx.all("candidate").iter().map(|e| e.rest.clone()).collect();
    let disp_name = cx.req("preset")?.to_string();
    let disp = comodule(cx, &disp_name, columns, max)?;
    let f = disp.alg().field();
    let un = Cobar::new(&disp.comod, CobarConfig { normalized: false, ..Default::default() })?;
    let target = cobar_elem(&disp, 2, &target_src, &IntEnv::new())?;
    cx.note(format!("target {}", un.fmt(&target)));
    let cands = cand_srcs.iter().map(|s| cobar_elem(&disp, 1, s, &IntEnv::new())).collect::<Result<Vec<_>, _>>()?;
    let lits: Vec<String> = cands.iter().map(|x| un.fmt(x)).collect();
    cx.note(format!("{} candidates: {}", cands.len(), lits.join(", ")));
    let seven = un.coboundary_solve_up_to_scalar(&target, Some(&cands))?;
    match &seven {
        None => cx.note("candidate solve: no combination hits any nonzero multiple of the target"),
        Some((l, x)) => cx.note(format!("candidate solve: d({}) = {l} x target", un.fmt(x))),
    }
    // The display model carries ξ̄_1 on the comodule side, where the target
    // does bound; the statement concerns the homology of the page.
    if let Some((l, x)) = un.coboundary_solve_up_to_scalar(&target, None)? {
        cx.note(format!("display model, full basis: d({}) = {l} x target (xb1 is not a class of the page)", un.fmt(&x)));
    }

    let hom_name = cx.req("homology-preset")?.to_string();
    let hom = comodule(cx, &hom_name, columns, max)?;
    let pages = hfpss_pages(&hom, max)?;
    let page = pages.last().expect("hfpss has pages");
    let h = HomologyComodule::new(&hom.comod, hom.column, page)?;
    let ht = to_homology(&h, f, &cobar_elem(&hom, 2, &target_src, &IntEnv::new())?, hom.alg())?;
    let hc = Cobar::new(&h, CobarConfig::default())?;
    let cc = hc.cocycle_check(&ht)?;
    let deg = degree_of(&hc, &ht).unwrap_or(0);
    let n = hc.basis(1, deg)?.len();
    cx.note(format!("on the E_{} page: {} (cocycle: {})", page.r, hc.fmt(&ht), cc.is_cocycle));
    let full = hc.coboundary_solve_up_to_scalar(&ht, None)?;
    match &full {
        None => cx.note(format!("page homology, full basis of {n} words: no preimage")),
        Some((l, x)) => cx.note(format!("page homology: d({}) = {l} x target", hc.fmt(x))),
    }
    Ok(seven.is_none() && full.is_none() && cc.is_cocycle && !ht.is_zero())
}

/// A single class in the given degree, equal to `rep` up to a unit, with
/// nonzero d_1.
pub(super) fn degree_gap(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let max = cx.max_degree()?;
    let columns = cx.req_int("columns")? as u32;
    let deg = cx.req_int("degree")?;
    let c_name = cx.req("preset")?.to_string();
    let c = comodule(cx, &c_name, columns, max)?;
    let pages = hfpss_pages(&c, max)?;
    let page = pages.last().expect("hfpss has pages");
    let h = HomologyComodule::new(&c.comod, c.column, page)?;
    let keys = h.basis(deg)?;
    let names: Vec<String> = keys.iter().map(|k| h.fmt_key(k)).collect();
    cx.note(format!("degree {deg}: {} class(es) {}", keys.len(), names.join(", ")));
    let rep = c.element(cx.req("rep")?)?;
    let coords = h
        .class_of(&rep)
        .ok_or_else(|| ScenarioError::Invalid(format!("{} is not a cycle", c.alg().fmt_element(&rep))))?;
    let spanned = keys.len() == 1 && coords.len() == 1 && coords[0].0 == keys[0] && coords[0].1 != 0;
    cx.note(format!("{} spans the degree: {spanned}", c.alg().fmt_element(&rep)));
    let hc = Cobar::new(&h, CobarConfig::default())?;
    let mut all_nonzero = !keys.is_empty();
    for k in &keys {
        let d = hc.d(&CobarElement::word(CobarWord { scalar: Monomial::one(), bars: vec![], m: *k }))?;
        cx.note(format!("d_1({}) = {}", h.fmt_key(k), if d.is_zero() { "0".into() } else { hc.fmt(&d) }));
        all_nonzero &= !d.is_zero();
    }
    Ok(spanned && all_nonzero)
}

/// Displayed d_1 expansions against the engine, in the unnormalized complex.
pub(super) fn displays(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let max = cx.max_degree()?;
    let columns = cx.req_int("columns")? as u32;
    let mode = match cx.get("sign").unwrap_or("exact") {
        "exact" => SignMode::Exact,
        "global" => SignMode::GlobalSign,
        "termwise" => SignMode::TermwiseSign,
        other => return Err(ScenarioError::Invalid(format!("unknown sign mode `{other}`"))),
    };
    let rows: Vec<(usize, String)> = cx.all("display").iter().map(|e| (e.line, e.rest.clone())).collect();
    let c_name = cx.req("preset")?.to_string();
    let c = comodule(cx, &c_name, columns, max)?;
    let cob = Cobar::new(&c.comod, CobarConfig { normalized: false, ..Default::default() })?;
    let mut ok = true;
    for (line, row) in rows {
        let (label, rest) = row.split_once(':').ok_or_else(|| ScenarioError::Invalid(format!("line {line}: expected `label : src => display`")))?;
        let (src, shown) = rest.split_once("=>").ok_or_else(|| ScenarioError::Invalid(format!("line {line}: missing `=>`")))?;
        let src = cobar_elem(&c, 1, src.trim(), &IntEnv::new())?;
        let shown = cobar_elem(&c, 2, shown.trim(), &IntEnv::new())?;
        let got = cob.d(&src)?;
        ok &= report_comparison(cx, &cob, label.trim(), &src, &got, &shown, mode);
    }
    Ok(ok)
}

/// One evidence line per comparison plus one per differing word.
pub(super) fn report_comparison<C: Comodule>(
    cx: &mut Ctx,
    cob: &Cobar<C>,
    label: &str,
    src: &CobarElement<C::Key>,
    got: &CobarElement<C::Key>,
    shown: &CobarElement<C::Key>,
    mode: SignMode,
) -> bool
where
    C::Key: Clone,
{
    let f = cob.field();
    let cmp = compare(f, got, shown, mode);
    let modes: Vec<&str> = [(SignMode::Exact, "exact"), (SignMode::GlobalSign, "global"), (SignMode::TermwiseSign, "termwise")]
        .into_iter()
        .filter(|(m, _)| compare(f, got, shown, *m).matches)
        .map(|(_, n)| n)
        .collect();
    let how = if modes.is_empty() { "no sign convention".to_string() } else { modes.join("/") };
    cx.note(format!(
        "{label}: d({}) {} (matches: {how})",
        cob.fmt(src),
        if cmp.matches { "agrees" } else { "DIFFERS" }
    ));
    if !cmp.matches {
        for (w, c) in &cmp.missing {
            cx.note(format!("  {label} engine only: {} {}", f.signed(*c), cob.fmt_word(w)));
        }
        for (w, c) in &cmp.extra {
            cx.note(format!("  {label} display only: {} {}", f.signed(*c), cob.fmt_word(w)));
        }
        if cmp.coefficient_mismatch > 0 {
            cx.note(format!("  {label}: {} shared word(s) with coefficients not equal up to sign", cmp.coefficient_mismatch));
        }
    }
    cmp.matches
}
