//! Degree bookkeeping: which residues products of given classes can reach,
//! an exact-degree witness, and the largest May filtration below a degree.

use cobar_engine::presets::{BuildOpts, Library};
use cobar_engine::ss_engine::{congruence_audit, exact_degree_witness, max_mfilt_below, AuditFactor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 5i64;
    // classes of degree 2p^2−2p, 2p^2−1 and 2p^2; below, the column class t in degree −2 joins them
    let factors = [
        AuditFactor::new("gsb[0]", 2 * p * p - 2 * p, None),
        AuditFactor::new("sxt2", 2 * p * p - 1, Some(1)),
        AuditFactor::new("mu2", 2 * p * p, None),
    ];
    let modulus = 2 * p * p;
    let rep = congruence_audit(&factors, modulus, &[-1, 1]);
    println!("residues mod {modulus} reachable: {:?}", rep.reachable);
    match &rep.witness {
        Some((r, mono)) => println!("forbidden residue {r} is reached by {mono:?}"),
        None => println!("no forbidden residue is reachable"),
    }
    let with_t = [&factors[..], &[AuditFactor::new("t", -2, Some(3))]].concat();
    for degree in [4 * p * p - 2 * p + 2, 88] {
        println!("exact degree {degree}: {:?}", exact_degree_witness(&with_t, degree));
    }

    // no monomial below |γ_{p^k}(σb)| = p^k(2p^2−2p) reaches May filtration p^{k+1}
    let alg = Library::builtin().bare_algebra("bpv1-thh", &BuildOpts::p(p as u32).cap(2 * p.pow(4)))?;
    for k in 1..=2u32 {
        let bound = p.pow(k) * (2 * p * p - 2 * p);
        if let Some((w, m)) = max_mfilt_below(&alg, bound) {
            println!("below degree {bound}: max May filtration {w} (< {}), at {}", p.pow(k + 1), alg.fmt_monomial(&m));
        }
    }
    Ok(())
}
