use cobar_engine::arith_witness::*;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

// von Staudt-Clausen: den(B_2n) is the product of primes l with (l-1) | 2n.
#[test]
fn von_staudt_clausen_oracle() {
    let table = bernoulli_table(200);
    for n in 1..=100u64 {
        let want: u64 = (2..=2 * n + 1).filter(|&l| is_prime(l) && (2 * n) % (l - 1) == 0).product();
        assert_eq!(table[2 * n as usize].denom(), &BigInt::from(want), "B_{}", 2 * n);
    }
    for n in 1..100 {
        assert!(table[2 * n + 1].is_zero());
    }
}

#[test]
fn image_of_j_examples() {
    let rep = image_of_j_report(5, 2, 50).unwrap();
    assert!(rep.all_agree(), "{}", rep.text());
    let row = |k: u32| rep.rows.iter().find(|r| r.k == k).unwrap().clone();
    assert_eq!((row(1).s, row(1).nu_k, row(1).nu_b), (4, 1, 1));
    assert_eq!((row(5).nu_k, row(5).nu_b), (2, 2));
    assert_eq!((row(25).nu_k, row(25).nu_b), (3, 3));
    let b4 = &bernoulli(4) / num_rational::BigRational::from_integer(8.into());
    assert_eq!(as_pair(&b4), Some((-1, 240)));
}

// lifting the exponent, independent of Bernoulli numbers
#[test]
fn lifting_the_exponent() {
    for l in [5u64, 7, 11] {
        let q = (2..l * l).find(|&q| check_generator(q, l)).unwrap();
        for k in 1..=30u32 {
            let o = quillen_order(q, (l as u32 - 1) * k).unwrap();
            assert_eq!(nu_int(l as i64, &o).unwrap(), nu_int(l as i64, &BigInt::from(k)).unwrap() + 1);
        }
    }
    assert!(!BigInt::one().is_zero());
}
