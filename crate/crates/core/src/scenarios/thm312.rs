//! The BP-based steps: b_{1,0}(tμ)^{k-1} against coboundaries, the degree
//! 4p²-2p-2 table, and the congruence audits on comodule primitives.

use std::collections::{BTreeMap, BTreeSet};

use crate::cobar::{Cobar, CobarConfig, CobarWord, SignMode};
use crate::expr::IntEnv;
use crate::graded_algebra::{GenId, Monomial};
use crate::presets::{BuildOpts, ComodulePreset, Library};
use crate::ss_engine::{congruence_audit, exact_degree_witness, AuditFactor, HomologyComodule, SSPage};

use super::prop31::{cobar_elem, comodule, hfpss_pages, report_comparison, to_homology};
use super::{expand_for, fmt_env, split_for, Ctx, ScenarioError};

fn killed(c: &ComodulePreset, names: Option<&str>) -> Result<Vec<GenId>, ScenarioError> {
    let Some(names) = names else { return Ok(vec![]) };
    Ok(names.split_whitespace().map(|n| c.hopf().alg.id(n)).collect::<Result<_, _>>()?)
}

/// For each k: the target, pushed to the k-column page homology, has no
/// preimage up to a unit.
pub(super) fn step3(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let preset = cx.req("preset")?.to_string();
    let ks = cx.int_list("ks")?;
    let (cols_src, deg_src, target_src) = (cx.req("columns")?.to_string(), cx.req("degree")?.to_string(), cx.req("target")?.to_string());
    let kill = cx.get("kill").map(str::to_string);
    let mut ok = true;
    for k in ks {
        let mut env = IntEnv::new();
        env.insert("k".into(), k as i128);
        let columns = cx.int_in(&cols_src, &env)? as u32;
        let deg = cx.int_in(&deg_src, &env)?;
        // bars of degree up to deg + 2(columns - 1) pair with negative t powers
        let cap = deg + 2 * (columns as i64 - 1);
        let c = comodule(cx, &preset, columns, cap)?;
        let f = c.alg().field();
        let target = cobar_elem(&c, 2, &target_src, &env)?;
        let pages = hfpss_pages(&c, cap)?;
        let page = pages.last().expect("hfpss has pages");
        let h = HomologyComodule::new(&c.comod, c.column, page)?;
        let ht = to_homology(&h, f, &target, c.alg())?;
        let hc = Cobar::new(&h, CobarConfig { kill: killed(&c, kill.as_deref())?, ..Default::default() })?;
        let ht = hc.reduce(&ht);
        let cc = hc.cocycle_check(&ht)?;
        let n = hc.basis(1, deg)?.len();
        let sol = hc.coboundary_solve_up_to_scalar(&ht, None)?;
        cx.note(format!(
            "k={k}: degree {deg}, target {} term(s), cocycle {}, {n} source words, {}",
            ht.terms.len(),
            cc.is_cocycle,
            match &sol {
                None => "no preimage".to_string(),
                Some((l, x)) => format!("d({}) = {l} x target", hc.fmt(x)),
            }
        ));
        ok &= !ht.is_zero() && cc.is_cocycle && sol.is_none();
    }
    Ok(ok)
}

struct TableEntry {
    label: String,
    struck: bool,
    word: CobarWord<Monomial>,
}

/// Whether a comodule monomial is a nonzero class of the page.
fn survives(page: &SSPage, c: &ComodulePreset, m: &Monomial) -> bool {
    match page.classes_of(c.alg(), c.column, &c.alg().monomial(m.clone(), 1)) {
        Some(parts) => parts.iter().any(|(_, v)| !v.is_empty()),
        None => false,
    }
}

/// The degree table: enumeration, derived strike-outs, displayed d_1 values,
/// and the target outside the span of coboundaries.
pub(super) fn step4(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let preset = cx.req("preset")?.to_string();
    let columns = cx.req_int("columns")? as u32;
    let deg = cx.req_int("degree")?;
    let cap = cx.max_degree()?;
    let entry_rows: Vec<(usize, String)> = cx.all("entry").iter().map(|e| (e.line, e.rest.clone())).collect();
    let d1_rows: Vec<(usize, String)> = cx.all("d1").iter().map(|e| (e.line, e.rest.clone())).collect();
    let target_src = cx.req("target")?.to_string();
    let kill_names = cx.get("kill").map(str::to_string);
    let c = comodule(cx, &preset, columns, cap)?;
    let f = c.alg().field();
    let kill = killed(&c, kill_names.as_deref())?;
    let un = Cobar::new(&c.comod, CobarConfig { normalized: false, ..Default::default() })?;
    let pages = hfpss_pages(&c, cap)?;
    let page = pages.last().expect("hfpss has pages");

    // table entries, families expanded
    let mut table: Vec<TableEntry> = Vec::new();
    for (line, row) in &entry_rows {
        let (head, body) = row.split_once(':').ok_or_else(|| ScenarioError::Invalid(format!("line {line}: expected `label [struck] : expr`")))?;
        let mut hw = head.split_whitespace();
        let label = hw.next().unwrap_or("?").to_string();
        let struck = hw.next() == Some("struck");
        let (body, clause) = split_for(body);
        for env in expand_for(cx, clause, &IntEnv::new())? {
            let x = cobar_elem(&c, 1, body, &env)?;
            if x.terms.len() != 1 {
                return Err(ScenarioError::Invalid(format!("line {line}: entry {label} is not a single word")));
            }
            let word = x.terms.keys().next().unwrap().clone();
            table.push(TableEntry { label: format!("{label}{}", fmt_env(&env)), struck, word });
        }
    }
    let enumerated: BTreeSet<CobarWord<Monomial>> = un.basis(1, deg)?.into_iter().collect();
    let mut seen: BTreeMap<&CobarWord<Monomial>, Vec<&str>> = BTreeMap::new();
    for t in &table {
        seen.entry(&t.word).or_default().push(&t.label);
    }
    let dups: Vec<_> = seen.iter().filter(|(_, v)| v.len() > 1).collect();
    let outside: Vec<_> = table.iter().filter(|t| !enumerated.contains(&t.word)).collect();
    let unlisted: Vec<_> = enumerated.iter().filter(|w| !seen.contains_key(w)).collect();
    cx.note(format!(
        "degree {deg}: {} words enumerated, {} table cells expand to {} words ({} distinct)",
        enumerated.len(),
        entry_rows.len(),
        table.len(),
        seen.len()
    ));
    for (w, labels) in &dups {
        cx.note(format!("  duplicate {}: {}", un.fmt_word(w), labels.join(", ")));
    }
    for t in &outside {
        cx.note(format!("  {} ({}) is not a word of degree {deg}", t.label, un.fmt_word(&t.word)));
    }
    for w in &unlisted {
        cx.note(format!("  not in the table: {} (survives: {})", un.fmt_word(w), survives(page, &c, &w.m)));
    }
    let table_ok = dups.is_empty() && outside.is_empty() && unlisted.is_empty();

    // strike-outs derived from the page
    let mut strikes_ok = true;
    let mut n_struck = 0;
    for t in &table {
        let s = !survives(page, &c, &t.word.m);
        n_struck += s as usize;
        if s != t.struck {
            strikes_ok = false;
            cx.note(format!(
                "  {} ({}): {} on the E_{} page but {} in the table",
                t.label,
                un.fmt_word(&t.word),
                if s { "dies" } else { "survives" },
                page.r,
                if t.struck { "struck" } else { "kept" }
            ));
        }
    }
    cx.note(format!("strike-outs: {n_struck} derived, {} in the table, agree: {strikes_ok}", table.iter().filter(|t| t.struck).count()));

    // displayed d_1 values
    let mut d1_ok = true;
    for (line, row) in &d1_rows {
        let (head, rest) = row.split_once(':').ok_or_else(|| ScenarioError::Invalid(format!("line {line}: expected `label [mod-kill] : src => display`")))?;
        let mut hw = head.split_whitespace();
        let label = hw.next().unwrap_or("?").to_string();
        let mod_kill = hw.next() == Some("mod-kill");
        let (rest, clause) = split_for(rest);
        let (src, shown) = rest.split_once("=>").ok_or_else(|| ScenarioError::Invalid(format!("line {line}: missing `=>`")))?;
        let cob = Cobar::new(&c.comod, CobarConfig { normalized: false, kill: if mod_kill { kill.clone() } else { vec![] }, ..Default::default() })?;
        for env in expand_for(cx, clause, &IntEnv::new())? {
            let s = cob.reduce(&cobar_elem(&c, 1, src.trim(), &env)?);
            let d = cob.reduce(&cobar_elem(&c, 2, shown.trim(), &env)?);
            let got = cob.d(&s)?;
            d1_ok &= report_comparison(cx, &cob, &format!("{label}{}", fmt_env(&env)), &s, &got, &d, SignMode::TermwiseSign);
        }
    }

    // the target against every coboundary of the page homology
    let h = HomologyComodule::new(&c.comod, c.column, page)?;
    let hc = Cobar::new(&h, CobarConfig { kill: kill.clone(), ..Default::default() })?;
    let target = hc.reduce(&to_homology(&h, f, &cobar_elem(&c, 2, &target_src, &IntEnv::new())?, c.alg())?);
    let cc = hc.cocycle_check(&target)?;
    let n = hc.basis(1, deg)?.len();
    let sol = hc.coboundary_solve_up_to_scalar(&target, None)?;
    cx.note(format!(
        "target {} (cocycle: {}); {n} source words: {}",
        hc.fmt(&target),
        cc.is_cocycle,
        match &sol {
            None => "no preimage".to_string(),
            Some((l, x)) => format!("d({}) = {l} x target", hc.fmt(x)),
        }
    ));
    let target_ok = !target.is_zero() && cc.is_cocycle && sol.is_none();
    cx.note(format!("table {table_ok}, strike-outs {strikes_ok}, d_1 displays {d1_ok}, target {target_ok}"));
    Ok(table_ok && strikes_ok && d1_ok && target_ok)
}

/// Factor tokens: generator names, `fam[a..b]` ranges, and `t^k` (at most once).
fn audit_factors(
    cx: &Ctx,
    alg: &crate::graded_algebra::Algebra,
    spec: &str,
    k: i64,
) -> Result<Vec<AuditFactor>, ScenarioError> {
    let mut out = Vec::new();
    for tok in spec.split_whitespace() {
        if tok == "t^k" {
            out.push(AuditFactor::new("t^k", -2 * k, Some(1)));
            continue;
        }
        if let Some((fam, range)) = tok.strip_suffix(']').and_then(|t| t.split_once('[')) {
            if let Some((lo, hi)) = range.split_once("..") {
                for j in cx.int(lo)?..=cx.int(hi)? {
                    let name = format!("{fam}[{j}]");
                    let g = alg.generator(alg.id(&name)?);
                    out.push(AuditFactor::new(&name, g.degree, g.max_exp()));
                }
                continue;
            }
        }
        let g = alg.generator(alg.id(tok)?);
        out.push(AuditFactor::new(tok, g.degree, g.max_exp()));
    }
    Ok(out)
}

/// Residue audits: for each case and k, is the target degree reachable mod
/// the modulus by products of the allowed primitives?
pub(super) fn congruence(cx: &mut Ctx) -> Result<bool, ScenarioError> {
    let preset = cx.req("preset")?.to_string();
    let cap = cx.req_int("cap")?;
    let modulus = cx.req_int("modulus")?;
    let range = cx.int_list("k-range")?;
    let (lo, hi) = match range.as_slice() {
        [a, b] => (*a, *b),
        _ => return Err(ScenarioError::Invalid("k-range needs two bounds".into())),
    };
    let skip = cx.req_int("skip-k-mod-p")?;
    let cases: Vec<(usize, String)> = cx.all("case").iter().map(|e| (e.line, e.rest.clone())).collect();
    let alg = Library::builtin().bare_algebra(&preset, &BuildOpts::p(cx.p).cap(cap))?;
    let p = cx.p as i64;
    let mut ok = true;
    for (line, row) in cases {
        let fields: Vec<&str> = row.split(';').map(str::trim).collect();
        let [name, target, factors, expect] = fields.as_slice() else {
            return Err(ScenarioError::Invalid(format!("line {line}: expected `name ; target ; factors ; expect`")));
        };
        let mut witnesses = Vec::new();
        let mut unexpected = Vec::new();
        let mut missing = Vec::new();
        for k in lo..=hi {
            if k.rem_euclid(p) == skip.rem_euclid(p) {
                continue;
            }
            let mut env = IntEnv::new();
            env.insert("k".into(), k as i128);
            let t = cx.int_in(target, &env)?;
            let facs = audit_factors(cx, &alg, factors, k)?;
            let rep = congruence_audit(&facs, modulus, &[t]);
            let expected = match *expect {
                "none" => false,
                e => {
                    let (m, x) = e
                        .strip_prefix("divides ")
                        .and_then(|r| r.split_once(' '))
                        .ok_or_else(|| ScenarioError::Invalid(format!("line {line}: expect is `none` or `divides <m> <expr>`")))?;
                    cx.int_in(x, &env)?.rem_euclid(cx.int_in(m, &env)?) == 0
                }
            };
            if let Some((r, mono)) = &rep.witness {
                let exact = exact_degree_witness(&facs, t);
                let show = |v: &[(String, u32)]| -> String {
                    if v.is_empty() {
                        "1".into()
                    } else {
                        v.iter().map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") }).collect::<Vec<_>>().join(" ")
                    }
                };
                witnesses.push(format!(
                    "k={k}: degree {t} ≡ {r}, reached by {}{}",
                    show(mono),
                    match &exact {
                        Some(v) => format!(", exactly by {}", show(v)),
                        None => ", no exact product".into(),
                    }
                ));
                if !expected {
                    unexpected.push(k);
                }
            } else if expected {
                missing.push(k);
            }
        }
        let facs = audit_factors(cx, &alg, factors, 0)?;
        let residues: Vec<String> = facs
            .iter()
            .filter(|f| f.name != "t^k")
            .map(|f| format!("{}≡{}", f.name, f.degree.rem_euclid(modulus)))
            .collect();
        cx.note(format!("case {name}: factor residues mod {modulus}: {}", residues.join(" ")));
        for w in &witnesses {
            cx.note(format!("  {name} {w}"));
        }
        if unexpected.is_empty() && missing.is_empty() {
            cx.note(format!("  {name}: witnesses exactly where expected ({expect})"));
        } else {
            cx.note(format!("  {name}: unexpected witnesses at k in {unexpected:?}, expected but absent at k in {missing:?}"));
            ok = false;
        }
    }
    Ok(ok)
}
