//! Coassociativity, counit and homogeneity checks: the shipped Hopf algebras,
//! a comodule preset with and without its literal misprint, and a
//! presentation supplied as text.

use cobar_engine::hopf_comod::{check_comodule_axioms, check_hopf_axioms};
use cobar_engine::presets::{BuildOpts, Library};

const TOY: &str = "\
name toy
kind comodule a-star
cap 40
gen x 2*p-1 ext
gen y 2*p poly
psi x = 1 | x
psi y = 1 | y + tau[0] | x
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut lib = Library::builtin();
    for name in ["a-star", "bp"] {
        let h = lib.hopf(name, &BuildOpts::p(5).cap(40))?;
        let r = check_hopf_axioms(&h.hopf)?;
        println!("{name}: {} checks, {} failures", r.checked, r.failures.len());
    }

    for flag in [None, Some("tt2-literal")] {
        let mut opts = BuildOpts::p(5).columns(2);
        if let Some(f) = flag {
            opts = opts.flag(f);
        }
        let c = lib.comodule("hk", &opts)?;
        let r = check_comodule_axioms(&c.comod)?;
        println!("hk {}: {} checks, {} failures", flag.unwrap_or("(as corrected)"), r.checked, r.failures.len());
        if let Some(f) = r.failures.first() {
            println!("  first: {} at {}: {}", f.axiom, f.monomial, f.detail);
        }
    }

    // a homogeneous coaction passes; adding ξ̄_1 ⊗ 1 to ψ(y) breaks homogeneity
    let bad = TOY.replace("name toy", "name toy-bad").replace("tau[0] | x", "tau[0] | x + xi[1] | 1");
    for src in [TOY.to_string(), bad] {
        let name = lib.add_source("toy", &src)?;
        let c = lib.comodule(&name, &BuildOpts::p(5))?;
        let r = check_comodule_axioms(&c.comod)?;
        println!("{name}: {} checks, {} failures", r.checked, r.failures.len());
    }
    Ok(())
}
