//! Exact arithmetic behind the image-of-J comparison: for s = (ℓ−1)k the
//! ℓ-adic valuations of q^s − 1, of k (plus one) and of the denominator of
//! B_s/2s agree whenever q generates (Z/ℓ²)^×.
//!
//! cargo run --example image_of_j -- [l] [q] [kmax]

use cobar_engine::arith_witness::{check_generator, image_of_j_report, zeta_special, ZetaForm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let l = args.first().copied().unwrap_or(5);
    let q = args.get(1).copied().unwrap_or(2);
    let kmax = args.get(2).copied().unwrap_or(12) as u32;

    println!("{q} generates (Z/{l}^2)^x: {}", check_generator(q, l));
    let rep = image_of_j_report(l, q, kmax)?;
    print!("{}", rep.text());
    println!("all rows agree: {}", rep.all_agree());

    for s in [0u32, 1, 3, 5, 7] {
        println!("zeta(-{s}) = {}", zeta_special(s, ZetaForm::Standard));
    }
    Ok(())
}
