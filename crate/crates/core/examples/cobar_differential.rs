//! The cobar differential, first over the ground field (the cobar complex of
//! the dual Steenrod algebra) and then with coefficients in a comodule, in
//! both the normalized and the unnormalized complex.

use cobar_engine::cobar::{element_from_tensor, Cobar, CobarConfig, CobarElement};
use cobar_engine::expr::{Evaluator, IntEnv, Names};
use cobar_engine::graded_algebra::Monomial;
use cobar_engine::hopf_comod::{AlgComodule, TensorCtx};
use cobar_engine::presets::{BuildOpts, Library};

type Err = Box<dyn std::error::Error>;

/// Read `src` as an element of filtration `s`: s bar slots, then the comodule slot.
fn element(c: &AlgComodule, names: &Names, s: usize, src: &str) -> Result<CobarElement<Monomial>, Err> {
    let ha = &c.hopf.alg;
    let mut slots = vec![ha; s];
    slots.push(&c.alg);
    let mut ints = IntEnv::new();
    ints.insert("p".into(), c.alg.p() as i128);
    let t = Evaluator::new(TensorCtx { scalar: ha, slots: &slots }, names, ints).eval_str(src)?;
    Ok(element_from_tensor(&t, s + 1)?)
}

fn show(cob: &Cobar<'_, AlgComodule>, x: &CobarElement<Monomial>) -> Result<(), Err> {
    let dx = cob.d(x)?;
    let rhs = if dx.is_zero() { "0".to_string() } else { cob.fmt(&dx) };
    println!("  d({}) = {rhs}", cob.fmt(x));
    Ok(())
}

fn main() -> Result<(), Err> {
    let lib = Library::builtin();
    let a = lib.hopf("a-star", &BuildOpts::p(5).cap(60))?;
    let ground = AlgComodule::trivial(a.hopf.clone(), 60)?;
    let cob = Cobar::new(&ground, CobarConfig::default())?;
    println!("cobar complex of the dual Steenrod algebra, p = 5");
    for (s, src) in [(1, "xi[1] | 1"), (1, "tau[1] | 1"), (1, "xi[2] | 1"), (2, "tau[0] | xi[1] | 1")] {
        show(&cob, &element(&ground, &a.names, s, src)?)?;
    }
    // b_{1,0} = Σ (1/p) binom(p,i) [ξ̄_1^i | ξ̄_1^{p−i}]
    let b10 = element(&ground, &a.names, 2, "sum(i=1..p-1){ binom(p,i)/p xi[1]^i | xi[1]^(p-i) | 1 }")?;
    println!("  b10 is a cocycle: {}", cob.cocycle_check(&b10)?.is_cocycle);

    let hk = lib.comodule("hk", &BuildOpts::p(5).columns(2))?;
    for normalized in [true, false] {
        let cob = Cobar::new(&hk.comod, CobarConfig { normalized, ..Default::default() })?;
        // the unit bar [1] only survives in the unnormalized complex
        println!("coefficients in hk, normalized {normalized}");
        for (s, src) in [(0, "xt1p"), (0, "xt2"), (1, "xi[1] | xt1p"), (1, "1 | xt1p")] {
            show(&cob, &element(&hk.comod, &hk.names, s, src)?)?;
        }
    }
    Ok(())
}
