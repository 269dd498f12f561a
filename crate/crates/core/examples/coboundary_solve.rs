//! Decide whether a cocycle bounds: solve d(x) = λ·target over the full
//! basis of the previous filtration, or over a hand-picked set of candidates.

use cobar_engine::cobar::{element_from_tensor, Cobar, CobarConfig, CobarElement};
use cobar_engine::expr::{Evaluator, IntEnv};
use cobar_engine::graded_algebra::Monomial;
use cobar_engine::hopf_comod::{AlgComodule, TensorCtx};
use cobar_engine::presets::{BuildOpts, Library};

type Err = Box<dyn std::error::Error>;

fn main() -> Result<(), Err> {
    let a = Library::builtin().hopf("a-star", &BuildOpts::p(5).cap(60))?;
    let ground = AlgComodule::trivial(a.hopf.clone(), 60)?;
    let cob = Cobar::new(&ground, CobarConfig::default())?;
    let read = |s: usize, src: &str| -> Result<CobarElement<Monomial>, Err> {
        let mut slots = vec![&ground.hopf.alg; s];
        slots.push(&ground.alg);
        let mut ints = IntEnv::new();
        ints.insert("p".into(), 5);
        let t = Evaluator::new(TensorCtx { scalar: &ground.hopf.alg, slots: &slots }, &a.names, ints).eval_str(src)?;
        Ok(element_from_tensor(&t, s + 1)?)
    };

    // [ξ̄_1|ξ̄_1^5] is d of −ξ̄_2 (see the cobar_differential example)
    let target = read(2, "xi[1] | xi[1]^5 | 1")?;
    match cob.coboundary_solve(&target, None)? {
        Some(x) => println!("{} = d({})", cob.fmt(&target), cob.fmt(&x)),
        None => println!("{} does not bound", cob.fmt(&target)),
    }

    // b_{1,0} is a cocycle that bounds nothing: it survives to Ext
    let b10 = read(2, "sum(i=1..p-1){ binom(p,i)/p xi[1]^i | xi[1]^(p-i) | 1 }")?;
    let n = cob.basis(1, 40)?.len();
    match cob.coboundary_solve_up_to_scalar(&b10, None)? {
        Some((l, x)) => println!("d({}) = {l} b10", cob.fmt(&x)),
        None => println!("b10: no nonzero multiple is a coboundary ({n} filtration-1 words in degree 40)"),
    }

    // restricting the search to candidates: here ξ̄_1^p alone
    let cands = [read(1, "xi[1]^p | 1")?];
    let hit = cob.coboundary_solve_up_to_scalar(&b10, Some(&cands))?;
    println!("b10 against [xi[1]^5]: {}", if hit.is_some() { "solved" } else { "no solution" });
    Ok(())
}
