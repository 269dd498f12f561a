//! Exact arithmetic linking the orders of K_{2s-1}(F_q) localized at an odd
//! prime with denominators of Bernoulli numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("valuation needs a prime > 1, got {0}")]
    BadPrime(i64),
    #[error("K_{{2s-1}} needs s >= 1")]
    ZeroDegree,
    #[error("q = {q} does not generate the units mod {l}^2")]
    NotGenerator { q: u64, l: u64 },
    #[error("the image-of-J report needs an odd prime l >= 5, got {0}")]
    SmallPrime(u64),
}

/// B_0..=B_n via sum_{k<=m} C(m+1,k) B_k = 0.
pub fn bernoulli_table(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        // binomials C(m+1, k) built row by row
        let mut c = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(c.clone()) * bk;
            c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // c is now C(m+1, m)
        b.push(-acc / BigRational::from_integer(c));
    }
    b
}

pub fn bernoulli(s: usize) -> BigRational {
    bernoulli_table(s).pop().expect("table is nonempty")
}

pub fn nu_int(l: i64, x: &BigInt) -> Result<i64, ArithError> {
    if l < 2 {
        return Err(ArithError::BadPrime(l));
    }
    if x.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    let l = BigInt::from(l);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&l);
        if !r.is_zero() {
            return Ok(v);
        }
        x = q;
        v += 1;
    }
}

/// ν_ℓ of a rational: valuation of the numerator minus that of the denominator.
pub fn nu(l: i64, x: &BigRational) -> Result<i64, ArithError> {
    Ok(nu_int(l, x.numer())? - nu_int(l, x.denom())?)
}

/// |K_{2s-1}(F_q)| = q^s - 1.
pub fn quillen_order(q: u64, s: u32) -> Result<BigInt, ArithError> {
    if s == 0 {
        return Err(ArithError::ZeroDegree);
    }
    Ok(num_traits::pow(BigInt::from(q), s as usize) - 1)
}

/// Whether q generates (Z/ℓ²)^×, i.e. has multiplicative order ℓ(ℓ-1).
pub fn check_generator(q: u64, l: u64) -> bool {
    if l < 2 {
        return false;
    }
    let m = l * l;
    let q = q % m;
    if q.gcd(&l) != 1 {
        return false;
    }
    let mut x = q;
    let mut ord = 1;
    while x != 1 {
        x = x * q % m;
        ord += 1;
    }
    ord == l * (l - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRow {
    pub k: u32,
    pub s: u32,
    /// ν_ℓ(q^s - 1)
    pub nu_k: i64,
    /// ν_ℓ(k) + 1
    pub nu_pred: i64,
    /// ν_ℓ of the denominator of B_s / 2s
    pub nu_b: i64,
}

impl WitnessRow {
    pub fn agrees(&self) -> bool {
        self.nu_k == self.nu_pred && self.nu_k == self.nu_b
    }
}

#[derive(Debug, Clone)]
pub struct ImageOfJReport {
    pub l: u64,
    pub q: u64,
    pub rows: Vec<WitnessRow>,
}

impl ImageOfJReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(WitnessRow::agrees)
    }

    pub fn text(&self) -> String {
        let mut out = format!("l = {}, q = {}\n{:>4} {:>6} {:>6} {:>8} {:>6}  verdict\n", self.l, self.q, "k", "s", "nu_K", "nu(k)+1", "nu_B");
        for r in &self.rows {
            out += &format!(
                "{:>4} {:>6} {:>6} {:>8} {:>6}  {}\n",
                r.k,
                r.s,
                r.nu_k,
                r.nu_pred,
                r.nu_b,
                if r.agrees() { "ok" } else { "MISMATCH" }
            );
        }
        out
    }

    pub fn lines(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| format!("row {} {} {} {} {}", r.k, r.s, r.nu_k, r.nu_b, if r.agrees() { "pass" } else { "fail" }))
            .collect()
    }
}

/// Compare ν_ℓ(q^s-1), ν_ℓ(k)+1 and ν_ℓ(den(B_s/2s)) for s = (ℓ-1)k, k = 1..=k_max.
pub fn image_of_j_report(l: u64, q: u64, k_max: u32) -> Result<ImageOfJReport, ArithError> {
    if l < 5 || l.is_multiple_of(2) {
        return Err(ArithError::SmallPrime(l));
    }
    if !check_generator(q, l) {
        return Err(ArithError::NotGenerator { q, l });
    }
    let step = (l - 1) as usize;
    let bern = bernoulli_table(step * k_max as usize);
    let li = l as i64;
    let rows = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let s = (l as u32 - 1) * k;
            let nu_k = nu_int(li, &quillen_order(q, s)?)?;
            let nu_pred = nu_int(li, &BigInt::from(k))? + 1;
            let ratio = &bern[s as usize] / BigRational::from_integer(BigInt::from(2 * s));
            let nu_b = nu_int(li, ratio.denom())?;
            Ok(WitnessRow { k, s, nu_k, nu_pred, nu_b })
        })
        .collect::<Result<Vec<_>, ArithError>>()?;
    Ok(ImageOfJReport { l, q, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZetaForm {
    /// ζ(-n) = -B_{n+1}/(n+1), read with B_1 = +1/2 so that ζ(0) = -1/2
    #[default]
    Standard,
    /// ζ(-s) = (-1)^s B_s/(s+1), as displayed alongside the K-theory orders;
    /// kept for comparison only.
    Displayed,
}

pub fn zeta_special(s: u32, form: ZetaForm) -> BigRational {
    let s = s as usize;
    match form {
        ZetaForm::Standard => {
            let mut b = bernoulli(s + 1);
            if s == 0 {
                b = -b;
            }
            -b / BigRational::from_integer(BigInt::from(s + 1))
        }
        ZetaForm::Displayed => {
            let b = bernoulli(s) / BigRational::from_integer(BigInt::from(s + 1));
            if s % 2 == 1 {
                -b
            } else {
                b
            }
        }
    }
}

/// Convenience for small tests: a rational as (numerator, denominator).
pub fn as_pair(x: &BigRational) -> Option<(i64, i64)> {
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_bernoulli() {
        assert_eq!(bernoulli(0), r(1, 1));
        assert_eq!(bernoulli(1), r(-1, 2));
        assert_eq!(bernoulli(2), r(1, 6));
        assert_eq!(bernoulli(12), r(-691, 2730));
        assert!(bernoulli(13).is_zero());
    }

    #[test]
    fn valuations() {
        assert_eq!(nu_int(5, &25.into()), Ok(2));
        assert_eq!(nu(5, &r(1, 240)), Ok(-1));
        assert_eq!(nu_int(5, &0.into()), Err(ArithError::ZeroValuation));
    }

    #[test]
    fn quillen() {
        assert_eq!(quillen_order(2, 4).unwrap(), 15.into());
        assert_eq!(quillen_order(2, 0), Err(ArithError::ZeroDegree));
        let o = quillen_order(2, 20).unwrap();
        assert_eq!(o, 1048575.into());
        assert_eq!(nu_int(5, &o), Ok(2));
    }

    #[test]
    fn generators() {
        assert!(check_generator(2, 5));
        assert!(!check_generator(4, 5));
        assert!(!check_generator(1, 5));
        assert!(!check_generator(5, 5));
    }

    #[test]
    fn zeta() {
        assert_eq!(zeta_special(1, ZetaForm::Standard), r(-1, 12));
        assert_eq!(zeta_special(0, ZetaForm::Standard), r(-1, 2));
        assert!(zeta_special(2, ZetaForm::Standard).is_zero());
        // the displayed variant differs already at s = 1
        assert_eq!(zeta_special(1, ZetaForm::Displayed), r(1, 4));
    }

    #[test]
    fn report_precondition() {
        assert_eq!(image_of_j_report(5, 4, 3).unwrap_err(), ArithError::NotGenerator { q: 4, l: 5 });
        assert_eq!(image_of_j_report(3, 2, 3).unwrap_err(), ArithError::SmallPrime(3));
    }
}
