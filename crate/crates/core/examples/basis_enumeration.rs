//! Monomial bases of the graded algebras and of the cobar complex, with a
//! cross-check of the monomial counts against the Poincaré series of the
//! dual Steenrod algebra, Π 1/(1−x^{|ξ̄_i|}) · Π (1+x^{|τ̄_i|}).

use cobar_engine::cobar::{Cobar, CobarConfig};
use cobar_engine::hopf_comod::AlgComodule;
use cobar_engine::presets::{BuildOpts, Library};

const CAP: i64 = 60;

fn poincare(p: i64) -> Vec<u64> {
    let mut series = vec![0u64; CAP as usize + 1];
    series[0] = 1;
    let mut pi = 1;
    while 2 * pi - 1 <= CAP {
        // τ̄_i, exterior
        let d = (2 * pi - 1) as usize;
        for n in (d..series.len()).rev() {
            series[n] += series[n - d];
        }
        // ξ̄_i for i ≥ 1, polynomial
        let d = (2 * pi - 2) as usize;
        if d > 0 {
            for n in d..series.len() {
                series[n] += series[n - d];
            }
        }
        pi *= p;
    }
    series
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lib = Library::builtin();
    let a = lib.hopf("a-star", &BuildOpts::p(5).cap(CAP))?;
    let alg = &a.hopf.alg;
    let want = poincare(5);
    let mut agree = true;
    for d in 0..=CAP {
        agree &= alg.basis_in_degree(d)?.len() as u64 == want[d as usize];
    }
    println!("a-star, p = 5: monomial counts through {CAP} match the Poincaré series: {agree}");
    let b = alg.basis_in_degree(17)?;
    println!("degree 17: {}", b.iter().map(|m| alg.fmt_monomial(m)).collect::<Vec<_>>().join(", "));

    // cobar words over the ground field, normalized and not
    let ground = AlgComodule::trivial(a.hopf.clone(), CAP)?;
    for normalized in [true, false] {
        let cob = Cobar::new(&ground, CobarConfig { normalized, ..Default::default() })?;
        let counts: Vec<usize> = (0..=3).map(|s| cob.basis(s, 16).map(|w| w.len())).collect::<Result<_, _>>()?;
        println!("degree 16 words by filtration 0..3 (normalized {normalized}): {counts:?}");
    }

    // with coefficients: the two-column comodule, including the column class t
    let hk = lib.comodule("hk", &BuildOpts::p(5).columns(2))?;
    let cob = Cobar::new(&hk.comod, CobarConfig::default())?;
    let words = cob.basis(1, 41)?;
    println!("hk, filtration 1, degree 41: {} words, e.g.", words.len());
    for w in words.iter().take(6) {
        println!("  {}", cob.fmt_word(w));
    }
    Ok(())
}
