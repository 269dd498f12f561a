//! Randomized invariants shared by the property tests and the acceptance
//! suite. Every property runs a proptest `TestRunner` with a fixed seed, so a
//! run is reproducible byte for byte.

#![allow(dead_code)]

use std::sync::OnceLock;

use cobar_engine::graded_algebra::{Algebra, Element, GenKind, Generator, Monomial};
use cobar_engine::hopf_comod::{primitives_in_degree, reduced_coaction, Comodule, Tensor, TensorCtx};
use cobar_engine::fp_linear::Fp;
use cobar_engine::presets::{BuildOpts, ComodulePreset, HopfPreset, Library};
use cobar_engine::ss_engine::PageSpec;
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

pub const CASES: u32 = 64;

pub fn runner(seed: u64, cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() })
}

struct Fixture<T> {
    value: T,
    /// Every monomial through the fixture's degree bound.
    pool: Vec<Monomial>,
}

fn pool(a: &Algebra, max: i64) -> Vec<Monomial> {
    (0..=max).flat_map(|d| a.basis_in_degree(d).unwrap()).collect()
}

fn hk() -> &'static Fixture<ComodulePreset> {
    static F: OnceLock<Fixture<ComodulePreset>> = OnceLock::new();
    F.get_or_init(|| {
        let c = Library::builtin().comodule("hk", &BuildOpts::p(5).cap(100)).unwrap();
        let pool = pool(&c.comod.alg, 100);
        Fixture { value: c, pool }
    })
}

fn lemma34() -> &'static Fixture<ComodulePreset> {
    static F: OnceLock<Fixture<ComodulePreset>> = OnceLock::new();
    F.get_or_init(|| {
        let c = Library::builtin().comodule("lemma34", &BuildOpts::p(5)).unwrap();
        let pool = pool(&c.comod.alg, 47);
        Fixture { value: c, pool }
    })
}

fn a_star() -> &'static Fixture<HopfPreset> {
    static F: OnceLock<Fixture<HopfPreset>> = OnceLock::new();
    F.get_or_init(|| {
        let h = Library::builtin().hopf("a-star", &BuildOpts::p(5).cap(60)).unwrap();
        let pool: Vec<Monomial> = pool(&h.hopf.alg, 60);
        Fixture { value: h, pool }
    })
}

fn mono(a: &Algebra, m: &Monomial) -> Element {
    a.monomial(m.clone(), 1)
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// a·b = (−1)^{|a||b|} b·a on monomials of H_*THH and of the lemma34 preset.
pub fn graded_commutativity(seed: u64) -> Result<u32, String> {
    let mut r = runner(seed, CASES);
    r.run(&(any::<bool>(), any::<Index>(), any::<Index>()), |(which, i, j)| {
        let fx = if which { hk() } else { lemma34() };
        let a = &fx.value.comod.alg;
        let (x, y) = (i.get(&fx.pool), j.get(&fx.pool));
        let xy = a.multiply(&mono(a, x), &mono(a, y)).unwrap();
        let yx = a.multiply(&mono(a, y), &mono(a, x)).unwrap();
        let odd = a.degree(x).rem_euclid(2) == 1 && a.degree(y).rem_euclid(2) == 1;
        let want = if odd { a.neg(&yx) } else { yx };
        prop_assert_eq!(xy, want, "{} · {}", a.fmt_monomial(x), a.fmt_monomial(y));
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(CASES)
}

/// Signed products associate, and Δ and ψ are multiplicative under the
/// Koszul rule (a⊗b)(c⊗d) = (−1)^{|b||c|} ac⊗bd.
pub fn koszul_coherence(seed: u64) -> Result<u32, String> {
    let mut r = runner(seed, CASES);
    r.run(&(0u8..3, any::<Index>(), any::<Index>(), any::<Index>()), |(which, i, j, k)| {
        match which {
            0 => {
                let fx = lemma34();
                let a = &fx.value.comod.alg;
                let (x, y, z) = (mono(a, i.get(&fx.pool)), mono(a, j.get(&fx.pool)), mono(a, k.get(&fx.pool)));
                let l = a.multiply(&a.multiply(&x, &y).unwrap(), &z).unwrap();
                let rr = a.multiply(&x, &a.multiply(&y, &z).unwrap()).unwrap();
                prop_assert_eq!(l, rr);
            }
            1 => {
                let fx = a_star();
                let h = &fx.value.hopf;
                let (x, y) = (i.get(&fx.pool), j.get(&fx.pool));
                let slots = h.ctx2();
                let ctx = TensorCtx { scalar: &h.alg, slots: &slots };
                let prod = ctx.mul(&h.coproduct(x), &h.coproduct(y));
                let want = match h.alg.mul_monomials(x, y) {
                    None => Tensor::default(),
                    Some((m, neg)) => {
                        let d = h.coproduct(&m);
                        if neg {
                            ctx.scale(&d, h.field().p() - 1)
                        } else {
                            (*d).clone()
                        }
                    }
                };
                if prod != want {
                    return Err(fail(format!("Δ({}·{})", h.alg.fmt_monomial(x), h.alg.fmt_monomial(y))));
                }
            }
            _ => {
                let fx = lemma34();
                let c = &fx.value.comod;
                let (x, y) = (i.get(&fx.pool), j.get(&fx.pool));
                let slots = c.ctx_slots();
                let ctx = TensorCtx { scalar: &c.hopf.alg, slots: &slots };
                let prod = ctx.mul(&c.coaction(x), &c.coaction(y));
                let want = c.coaction_element(&c.alg.multiply(&mono(&c.alg, x), &mono(&c.alg, y)).unwrap());
                if prod != want {
                    return Err(fail(format!("ψ({}·{})", c.alg.fmt_monomial(x), c.alg.fmt_monomial(y))));
                }
            }
        }
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(CASES)
}

/// σ∘σ = 0, and σ is an odd derivation: σ(xy) = σ(x)y + (−1)^{|x|} xσ(y).
pub fn sigma_square_zero(seed: u64) -> Result<u32, String> {
    let mut r = runner(seed, CASES);
    r.run(&(any::<Index>(), any::<Index>()), |(i, j)| {
        let fx = hk();
        let a = &fx.value.comod.alg;
        let (x, y) = (mono(a, i.get(&fx.pool)), mono(a, j.get(&fx.pool)));
        let sx = a.sigma(&x).unwrap();
        prop_assert!(a.sigma(&sx).unwrap().is_zero(), "σσ({}) ≠ 0", a.fmt_element(&x));
        let lhs = a.sigma(&a.multiply(&x, &y).unwrap()).unwrap();
        let first = a.multiply(&sx, &y).unwrap();
        let second = a.multiply(&x, &a.sigma(&y).unwrap()).unwrap();
        let odd = a.degree(i.get(&fx.pool)).rem_euclid(2) == 1;
        let rhs = a.add(&first, &if odd { a.neg(&second) } else { second }).unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(CASES)
}

fn is_primitive<C: Comodule<Key = Monomial>>(c: &C, f: Fp, e: &Element) -> bool {
    let mut acc = std::collections::BTreeMap::new();
    for (m, coef) in e.terms() {
        for (t, v) in reduced_coaction(c, m).unwrap() {
            let cur = acc.entry(t).or_insert(0u32);
            *cur = f.add(*cur, f.mul(coef, v));
        }
    }
    acc.values().all(|&v| v == 0)
}

/// Products of primitives are primitive.
pub fn primitives_subalgebra(seed: u64) -> Result<u32, String> {
    let fx = lemma34();
    let c = &fx.value.comod;
    let a = &c.alg;
    let f = a.field();
    // primitive bases in degrees with something to multiply
    let prims: Vec<(i64, Vec<Element>)> = (1..=23)
        .map(|d| {
            let vs = primitives_in_degree(c, d).unwrap();
            (d, vs.into_iter().map(|v| a.from_terms(v)).collect::<Vec<_>>())
        })
        .filter(|(_, v)| !v.is_empty())
        .collect();
    let mut r = runner(seed, CASES);
    r.run(&(any::<Index>(), any::<Index>(), any::<Index>(), any::<Index>(), 1u32..5, 1u32..5), |(i, j, u, v, s, t)| {
        let (da, pa) = i.get(&prims);
        let (db, pb) = j.get(&prims);
        if da + db > 47 {
            return Ok(());
        }
        let x = a.add(&a.scale(u.get(pa), s), &a.scale(pa.last().unwrap(), t)).unwrap();
        let y = a.scale(v.get(pb), t);
        prop_assert!(is_primitive(c, f, &x));
        let xy = a.multiply(&x, &y).unwrap();
        prop_assert!(is_primitive(c, f, &xy), "{} · {} is not primitive", a.fmt_element(&x), a.fmt_element(&y));
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(CASES)
}

fn gen_strategy() -> impl Strategy<Value = Vec<(i64, u8)>> {
    prop::collection::vec((1i64..12, 0u8..3), 1..6)
}

/// The enumerated basis has the size the generating function predicts.
pub fn basis_vs_poincare(seed: u64) -> Result<u32, String> {
    let mut r = runner(seed, CASES);
    r.run(&(prop::sample::select(vec![3u32, 5, 7]), gen_strategy()), |(p, spec)| {
        let gens: Vec<Generator> = spec
            .iter()
            .enumerate()
            .map(|(i, &(d, k))| {
                let kind = match k {
                    0 => GenKind::Polynomial,
                    1 => GenKind::Exterior,
                    _ => GenKind::Truncated(p),
                };
                // odd primes: exterior generators odd, the others even
                let d = if (k == 1) == (d % 2 == 0) { d + 1 } else { d };
                Generator::new(&format!("g{i}"), d, kind)
            })
            .collect();
        let a = Algebra::new(Fp::new(p).unwrap(), gens).unwrap();
        let series = a.poincare_series(30).unwrap();
        for (d, &n) in series.iter().enumerate() {
            let got = a.basis_in_degree(d as i64).unwrap().len() as u64;
            prop_assert_eq!(got, n, "degree {}", d);
        }
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(CASES)
}

fn hfpss_dims(name: &str, columns: u32, max: i64) -> Vec<std::collections::BTreeMap<(i64, i64), u64>> {
    let cap = max + 2 * columns as i64;
    let c = Library::builtin().comodule(name, &BuildOpts::p(5).columns(columns).cap(cap)).unwrap();
    let pages = PageSpec::hfpss(&c.comod, c.column, max).unwrap().run().unwrap();
    pages.iter().map(|pg| pg.dims()).collect()
}

/// dim E_{r+1} ≤ dim E_r at every bidegree.
pub fn page_monotonicity(seed: u64) -> Result<u32, String> {
    let cases = 12;
    let mut r = runner(seed, cases);
    r.run(&(prop::sample::select(vec!["hk", "bpv1-thh"]), 1u32..5, 50i64..90), |(name, columns, max)| {
        let dims = hfpss_dims(name, columns, max);
        for w in dims.windows(2) {
            for (k, &n) in &w[1] {
                let before = w[0].get(k).copied().unwrap_or(0);
                prop_assert!(n <= before, "{} at {:?}: {} after {}", name, k, n, before);
            }
        }
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(cases)
}

/// The k- and (k+1)-column runs agree in columns 0..=k−2, where neither
/// truncation is visible to d².
pub fn truncation_consistency(seed: u64) -> Result<u32, String> {
    let cases = 12;
    let mut r = runner(seed, cases);
    r.run(&(prop::sample::select(vec!["hk", "bpv1-thh"]), 2u32..5, 50i64..90), |(name, k, max)| {
        let small = hfpss_dims(name, k, max);
        let big = hfpss_dims(name, k + 1, max);
        let (s, b) = (small.last().unwrap(), big.last().unwrap());
        let lo = -2 * (k as i64 - 1);
        let keep = |m: &std::collections::BTreeMap<(i64, i64), u64>| -> Vec<((i64, i64), u64)> {
            m.iter().filter(|((c, d), _)| *c <= k as i64 - 2 && *d >= lo).map(|(x, y)| (*x, *y)).collect()
        };
        prop_assert_eq!(keep(s), keep(b), "{} k={}", name, k);
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(cases)
}

pub type Property = (&'static str, fn(u64) -> Result<u32, String>);

pub const PROPERTIES: &[Property] = &[
    ("graded commutativity", graded_commutativity),
    ("Koszul sign coherence", koszul_coherence),
    ("σ² = 0 and Leibniz", sigma_square_zero),
    ("primitives form a subalgebra", primitives_subalgebra),
    ("basis vs Poincaré series", basis_vs_poincare),
    ("page-dimension monotonicity", page_monotonicity),
    ("truncation consistency k vs k+1", truncation_consistency),
];

/// Seeds are fixed per property.
pub fn seed_for(i: usize) -> u64 {
    0x5eed_0000 + i as u64
}
