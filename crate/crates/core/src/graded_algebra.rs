//! Graded-commutative algebras over F_p: tensor products of polynomial,
//! exterior and truncated polynomial algebras, with divided-power algebras
//! expanded into truncated pieces γ_{p^k}.

use std::collections::hash_map::DefaultHasher;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::fp_linear::{Fp, LinearError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements come from different generator sets")]
    Mismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    Duplicate(String),
    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },
    #[error("unbounded enumeration: generator `{0}` has nonpositive degree and no exponent bound")]
    Unbounded(String),
    #[error("generator `{0}` has no declared sigma image")]
    MissingSigma(String),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

pub type GenId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GenKind {
    Polynomial,
    Exterior,
    /// x^h = 0
    Truncated(u32),
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub family: String,
    pub index: i64,
    pub degree: i64,
    pub kind: GenKind,
    pub may_weight: u64,
    /// Scalar coefficient such as v_i: lives in the ground ring of a Hopf algebroid.
    pub central: bool,
    /// Optional bound on the exponent, used only for enumeration.
    pub exp_cap: Option<u32>,
    /// `Some(k)` when this generator is γ_{p^k} of a divided-power family.
    pub divided: Option<u32>,
}

impl Generator {
    pub fn new(name: &str, degree: i64, kind: GenKind) -> Self {
        Generator {
            name: name.to_string(),
            family: name.to_string(),
            index: 0,
            degree,
            kind,
            may_weight: 0,
            central: false,
            exp_cap: None,
            divided: None,
        }
    }

    pub fn member(family: &str, index: i64, degree: i64, kind: GenKind) -> Self {
        let mut g = Self::new(&format!("{family}[{index}]"), degree, kind);
        g.family = family.to_string();
        g.index = index;
        g
    }

    pub fn weight(mut self, w: u64) -> Self {
        self.may_weight = w;
        self
    }

    pub fn central(mut self) -> Self {
        self.central = true;
        self
    }

    /// Largest exponent allowed, if bounded.
    pub fn max_exp(&self) -> Option<u32> {
        let k = match self.kind {
            GenKind::Exterior => Some(1),
            GenKind::Truncated(h) => Some(h - 1),
            GenKind::Polynomial => None,
        };
        match (k, self.exp_cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Sorted `(generator, exponent)` pairs, exponents positive.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<(GenId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }
    pub fn gen(id: GenId) -> Self {
        Monomial(vec![(id, 1)])
    }
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
    pub fn exponent(&self, id: GenId) -> u32 {
        self.0.iter().find(|e| e.0 == id).map_or(0, |e| e.1)
    }
}

#[derive(Debug, Clone)]
pub enum SigmaImage {
    Undeclared,
    Zero,
    Image(Element),
}

/// F_p-linear combination of monomials. Carries the fingerprint of the
/// algebra it belongs to so that mixing generator sets is caught.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<Monomial, u32>,
    algebra: u64,
}

impl Element {
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }
    pub fn fingerprint(&self) -> u64 {
        self.algebra
    }
    pub fn leading(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next().map(|(m, &c)| (m, c))
    }
}

#[derive(Debug, Clone)]
pub struct Algebra {
    field: Fp,
    gens: Vec<Generator>,
    sigma: Vec<SigmaImage>,
    by_name: HashMap<String, GenId>,
    fingerprint: u64,
}

impl Algebra {
    /// Generators are ordered by (family, index), families ranked by first
    /// appearance in `gens`.
    pub fn new(field: Fp, gens: Vec<Generator>) -> Result<Self, AlgebraError> {
        let mut rank: HashMap<String, usize> = HashMap::new();
        for g in &gens {
            let n = rank.len();
            rank.entry(g.family.clone()).or_insert(n);
        }
        let mut gens = gens;
        gens.sort_by_key(|g| (rank[&g.family], g.index));
        let mut by_name = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            validate(g, field)?;
            if by_name.insert(g.name.clone(), i).is_some() {
                return Err(AlgebraError::Duplicate(g.name.clone()));
            }
        }
        let mut h = DefaultHasher::new();
        field.p().hash(&mut h);
        for g in &gens {
            (&g.name, g.degree, &g.kind, g.central).hash(&mut h);
        }
        let n = gens.len();
        Ok(Algebra {
            field,
            gens,
            sigma: vec![SigmaImage::Undeclared; n],
            by_name,
            fingerprint: h.finish(),
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn p(&self) -> u32 {
        self.field.p()
    }
    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }
    pub fn generator(&self, id: GenId) -> &Generator {
        &self.gens[id]
    }
    pub fn find(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }
    pub fn id(&self, name: &str) -> Result<GenId, AlgebraError> {
        self.find(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn set_sigma(&mut self, id: GenId, image: SigmaImage) -> Result<(), AlgebraError> {
        if let SigmaImage::Image(e) = &image {
            self.check(e)?;
        }
        self.sigma[id] = image;
        Ok(())
    }

    pub fn sigma_of(&self, id: GenId) -> &SigmaImage {
        &self.sigma[id]
    }

    fn check(&self, e: &Element) -> Result<(), AlgebraError> {
        if e.algebra != self.fingerprint {
            return Err(AlgebraError::Mismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> Element {
        Element { terms: BTreeMap::new(), algebra: self.fingerprint }
    }

    pub fn one(&self) -> Element {
        self.monomial(Monomial::one(), 1)
    }

    pub fn monomial(&self, m: Monomial, c: u32) -> Element {
        let mut e = self.zero();
        let c = c % self.p();
        if c != 0 {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn generator_element(&self, name: &str) -> Result<Element, AlgebraError> {
        Ok(self.monomial(Monomial::gen(self.id(name)?), 1))
    }

    /// Build an element from raw terms, combining repeats.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, u32)>>(&self, terms: I) -> Element {
        let mut e = self.zero();
        for (m, c) in terms {
            self.add_term(&mut e, m, c);
        }
        e
    }

    pub fn add_term(&self, e: &mut Element, m: Monomial, c: u32) {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return;
        }
        match e.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = a.clone();
        for (m, &c) in &b.terms {
            self.add_term(&mut out, m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, a: &Element, c: u32) -> Element {
        let f = self.field;
        let c = c % f.p();
        let mut out = self.zero();
        if c == 0 {
            return out;
        }
        for (m, &v) in &a.terms {
            out.terms.insert(m.clone(), f.mul(v, c));
        }
        out
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.scale(a, self.p() - 1)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.add(a, &self.neg(b))
    }

    pub fn degree(&self, m: &Monomial) -> i64 {
        m.0.iter().map(|&(g, e)| self.gens[g].degree * e as i64).sum()
    }

    pub fn is_odd(&self, m: &Monomial) -> bool {
        self.degree(m).rem_euclid(2) == 1
    }

    /// Degree of a homogeneous element; `None` for zero or inhomogeneous.
    pub fn element_degree(&self, e: &Element) -> Option<i64> {
        let mut it = e.terms.keys().map(|m| self.degree(m));
        let d = it.next()?;
        if it.all(|x| x == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self, e: &Element) -> bool {
        e.is_zero() || self.element_degree(e).is_some()
    }

    /// Product of two monomials with its Koszul sign; `None` when it vanishes.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut out = Vec::with_capacity(a.0.len() + b.0.len());
        // parity of odd mass in `a` strictly above the current position
        let mut odd_above_a: Vec<bool> = vec![false; a.0.len() + 1];
        for i in (0..a.0.len()).rev() {
            let (g, e) = a.0[i];
            let odd = self.gens[g].degree.rem_euclid(2) == 1 && e % 2 == 1;
            odd_above_a[i] = odd_above_a[i + 1] ^ odd;
        }
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        while i < a.0.len() || j < b.0.len() {
            let take_b = j < b.0.len() && (i >= a.0.len() || b.0[j].0 <= a.0[i].0);
            if take_b {
                let (g, e) = b.0[j];
                let odd_b = self.gens[g].degree.rem_euclid(2) == 1 && e % 2 == 1;
                // factors of `a` strictly greater than g remain to the left of it
                let k = if i < a.0.len() && a.0[i].0 == g { i + 1 } else { i };
                if odd_b && odd_above_a[k] {
                    negative = !negative;
                }
                if i < a.0.len() && a.0[i].0 == g {
                    let total = a.0[i].1 + e;
                    if let Some(mx) = self.bound(g) {
                        if total > mx {
                            return None;
                        }
                    }
                    out.push((g, total));
                    i += 1;
                } else {
                    out.push((g, e));
                }
                j += 1;
            } else {
                out.push(a.0[i]);
                i += 1;
            }
        }
        Some((Monomial(out), negative))
    }

    /// Structural exponent bound (exterior/truncated), ignoring enumeration caps.
    fn bound(&self, g: GenId) -> Option<u32> {
        match self.gens[g].kind {
            GenKind::Exterior => Some(1),
            GenKind::Truncated(h) => Some(h - 1),
            GenKind::Polynomial => None,
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let f = self.field;
        let mut out = self.zero();
        for (ma, &ca) in &a.terms {
            for (mb, &cb) in &b.terms {
                if let Some((m, neg)) = self.mul_monomials(ma, mb) {
                    let c = f.mul(ca, cb);
                    self.add_term(&mut out, m, if neg { f.neg(c) } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, a: &Element, n: u32) -> Result<Element, AlgebraError> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// x^e for a single generator, zero if the exponent exceeds its bound.
    pub fn gen_power(&self, g: GenId, e: u32) -> Element {
        if e == 0 {
            return self.one();
        }
        if self.bound(g).is_some_and(|mx| e > mx) {
            return self.zero();
        }
        self.monomial(Monomial(vec![(g, e)]), 1)
    }

    /// Divided power γ_n of the family `family` (members `family[k]` = γ_{p^k}).
    pub fn gamma(&self, family: &str, n: u64) -> Result<Element, AlgebraError> {
        let p = self.p() as u64;
        let f = self.field;
        let mut m = Vec::new();
        let mut denom = 1u32;
        let (mut rest, mut k) = (n, 0i64);
        while rest > 0 {
            let d = (rest % p) as u32;
            if d > 0 {
                let g = self.id(&format!("{family}[{k}]"))?;
                m.push((g, d));
                for i in 1..=d {
                    denom = f.mul(denom, i);
                }
            }
            rest /= p;
            k += 1;
        }
        m.sort_unstable();
        Ok(self.monomial(Monomial(m), f.inv(denom)?))
    }

    /// All monomials of total degree `d` within exponent bounds, ascending.
    pub fn basis_in_degree(&self, d: i64) -> Result<Vec<Monomial>, AlgebraError> {
        let n = self.gens.len();
        let mut lo = vec![0i64; n + 1];
        let mut hi = vec![Some(0i64); n + 1];
        for i in (0..n).rev() {
            let g = &self.gens[i];
            let mx = g.max_exp();
            if g.degree <= 0 && mx.is_none() {
                return Err(AlgebraError::Unbounded(g.name.clone()));
            }
            let (l, h) = match mx {
                Some(e) => {
                    let x = g.degree * e as i64;
                    (x.min(0), Some(x.max(0)))
                }
                None => (0, None),
            };
            lo[i] = lo[i + 1] + l;
            hi[i] = match (hi[i + 1], h) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
        }
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.enumerate(0, d, &lo, &hi, &mut cur, &mut out);
        out.sort();
        Ok(out)
    }

    fn enumerate(
        &self,
        i: usize,
        rem: i64,
        lo: &[i64],
        hi: &[Option<i64>],
        cur: &mut Vec<(GenId, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if rem < lo[i] || hi[i].is_some_and(|h| rem > h) {
            return;
        }
        if i == self.gens.len() {
            if rem == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let g = &self.gens[i];
        let mut e = 0u32;
        loop {
            if g.max_exp().is_some_and(|mx| e > mx) {
                break;
            }
            let used = g.degree * e as i64;
            let r = rem - used;
            if g.degree > 0 && r < lo[i + 1] {
                break;
            }
            if e > 0 {
                cur.push((i, e));
            }
            self.enumerate(i + 1, r, lo, hi, cur, out);
            if e > 0 {
                cur.pop();
            }
            e += 1;
        }
    }

    /// Dimensions in degrees `0..=max` from the generating-function product,
    /// computed without the enumerator.
    pub fn poincare_series(&self, max: i64) -> Result<Vec<u64>, AlgebraError> {
        if max < 0 {
            return Ok(Vec::new());
        }
        let mut low = 0i64;
        for g in &self.gens {
            match g.max_exp() {
                None if g.degree <= 0 => return Err(AlgebraError::Unbounded(g.name.clone())),
                Some(e) if g.degree < 0 => low += g.degree * e as i64,
                _ => {}
            }
        }
        let width = (max - low + 1) as usize;
        let mut series = vec![0u64; width];
        series[(-low) as usize] = 1;
        // nonpositive generators first, so later factors only raise degree
        let mut order: Vec<&Generator> = self.gens.iter().collect();
        order.sort_by_key(|g| g.degree > 0);
        for g in order {
            let dg = g.degree;
            match g.max_exp() {
                None => {
                    let step = dg as usize;
                    for i in step..width {
                        series[i] += series[i - step];
                    }
                }
                Some(e) => {
                    let old = series.clone();
                    for (i, s) in series.iter_mut().enumerate() {
                        let mut acc = 0u64;
                        for k in 0..=e as i64 {
                            let j = i as i64 - k * dg;
                            if j >= 0 && (j as usize) < width {
                                acc += old[j as usize];
                            }
                        }
                        *s = acc;
                    }
                }
            }
        }
        Ok(series[(-low) as usize..].to_vec())
    }

    /// σ extended as an odd derivation: σ(x^e) = e·x^{e−1}σx, signed by the
    /// degree of the factors passed over.
    pub fn sigma(&self, e: &Element) -> Result<Element, AlgebraError> {
        self.check(e)?;
        let f = self.field;
        let mut out = self.zero();
        for (m, &c) in &e.terms {
            for (pos, &(g, ex)) in m.0.iter().enumerate() {
                let img = match &self.sigma[g] {
                    SigmaImage::Undeclared => return Err(AlgebraError::MissingSigma(self.gens[g].name.clone())),
                    SigmaImage::Zero => continue,
                    SigmaImage::Image(x) => x,
                };
                let coef = f.mul(c, ex % f.p());
                if coef == 0 {
                    continue;
                }
                let prefix = Monomial(m.0[..pos].to_vec());
                let lowered = if ex > 1 { Monomial(vec![(g, ex - 1)]) } else { Monomial::one() };
                let suffix = Monomial(m.0[pos + 1..].to_vec());
                let sign_neg = self.is_odd(&prefix);
                // prefix · x^{e-1} · σx · suffix
                let left = self.multiply(&self.monomial(prefix, 1), &self.monomial(lowered, 1))?;
                let term = self.multiply(&left, img)?;
                let term = self.multiply(&term, &self.monomial(suffix, 1))?;
                let coef = if sign_neg { f.neg(coef) } else { coef };
                out = self.add(&out, &self.scale(&term, coef))?;
            }
        }
        Ok(out)
    }

    pub fn may_filtration(&self, m: &Monomial) -> u64 {
        m.0.iter().map(|&(g, e)| self.gens[g].may_weight * e as u64).sum()
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.0.iter()
            .map(|&(g, e)| {
                let n = &self.gens[g].name;
                if e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn fmt_element(&self, e: &Element) -> String {
        fmt_terms(self.field, e.terms().map(|(m, c)| (self.fmt_monomial(m), c)))
    }
}

/// Render `Σ c·label` with signed coefficients.
pub fn fmt_terms<I: IntoIterator<Item = (String, u32)>>(f: Fp, terms: I) -> String {
    let mut s = String::new();
    for (label, c) in terms {
        let v = f.signed(c);
        let mag = v.unsigned_abs();
        let body = if mag == 1 { label } else if label == "1" { mag.to_string() } else { format!("{mag} {label}") };
        if s.is_empty() {
            if v < 0 {
                s.push('-');
            }
            s.push_str(&body);
        } else {
            s.push_str(if v < 0 { " - " } else { " + " });
            s.push_str(&body);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn validate(g: &Generator, f: Fp) -> Result<(), AlgebraError> {
    let bad = |reason: &str| AlgebraError::InvalidGenerator { name: g.name.clone(), reason: reason.to_string() };
    let odd = g.degree.rem_euclid(2) == 1;
    match g.kind {
        GenKind::Exterior if !odd => Err(bad("exterior generators need odd degree")),
        GenKind::Polynomial | GenKind::Truncated(_) if odd && f.p() != 2 => {
            Err(bad("polynomial generators need even degree"))
        }
        GenKind::Truncated(h) if h < 2 => Err(bad("truncation height must be at least 2")),
        _ => Ok(()),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(g, e)| format!("g{g}^{e}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    fn small() -> Algebra {
        let gens = vec![
            Generator::new("x", 1, GenKind::Exterior),
            Generator::new("y", 2, GenKind::Polynomial),
            Generator::new("z", 3, GenKind::Exterior),
        ];
        Algebra::new(f5(), gens).unwrap()
    }

    #[test]
    fn koszul_and_exterior() {
        let a = small();
        let x = a.generator_element("x").unwrap();
        let z = a.generator_element("z").unwrap();
        let xz = a.multiply(&x, &z).unwrap();
        let zx = a.multiply(&z, &x).unwrap();
        assert_eq!(xz, a.neg(&zx));
        assert!(a.multiply(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn divided_powers() {
        let mut gens = vec![];
        for k in 0..2 {
            gens.push(Generator::member("g", k, 2 * 5i64.pow(k as u32), GenKind::Truncated(5)));
        }
        let a = Algebra::new(f5(), gens).unwrap();
        // γ_1 γ_4 = C(5,1) γ_5 = 0 mod 5
        let prod = a.multiply(&a.gamma("g", 1).unwrap(), &a.gamma("g", 4).unwrap()).unwrap();
        assert!(prod.is_zero());
        // γ_2 γ_3 = C(5,2) γ_5 = 10 γ_5 = 0; γ_1 γ_2 = 3 γ_3
        let g12 = a.multiply(&a.gamma("g", 1).unwrap(), &a.gamma("g", 2).unwrap()).unwrap();
        assert_eq!(g12, a.scale(&a.gamma("g", 3).unwrap(), 3));
        // γ_5 γ_1 = C(6,1) γ_6
        let g51 = a.multiply(&a.gamma("g", 5).unwrap(), &a.gamma("g", 1).unwrap()).unwrap();
        assert_eq!(g51, a.scale(&a.gamma("g", 6).unwrap(), 6));
    }

    #[test]
    fn basis_and_series() {
        let a = Algebra::new(f5(), vec![Generator::new("y", 2, GenKind::Polynomial)]).unwrap();
        assert_eq!(a.poincare_series(6).unwrap(), vec![1, 0, 1, 0, 1, 0, 1]);
        let b = small();
        let s = b.poincare_series(8).unwrap();
        for d in 0..=8 {
            assert_eq!(b.basis_in_degree(d).unwrap().len() as u64, s[d as usize]);
        }
        assert_eq!(b.basis_in_degree(0).unwrap(), vec![Monomial::one()]);
    }

    #[test]
    fn negative_degree_needs_bound() {
        let a = Algebra::new(f5(), vec![Generator::new("t", -2, GenKind::Polynomial)]).unwrap();
        assert!(matches!(a.basis_in_degree(0), Err(AlgebraError::Unbounded(_))));
        let b = Algebra::new(
            f5(),
            vec![Generator::new("t", -2, GenKind::Truncated(3)), Generator::new("y", 2, GenKind::Polynomial)],
        )
        .unwrap();
        assert_eq!(b.basis_in_degree(0).unwrap().len(), 3);
        let s = b.poincare_series(4).unwrap();
        assert_eq!(s, vec![3, 0, 3, 0, 3]);
    }

    #[test]
    fn sigma_derivation() {
        let mut a = small();
        let (x, y, z) = (a.id("x").unwrap(), a.id("y").unwrap(), a.id("z").unwrap());
        a.set_sigma(x, SigmaImage::Image(a.generator_element("y").unwrap())).unwrap();
        a.set_sigma(y, SigmaImage::Zero).unwrap();
        a.set_sigma(z, SigmaImage::Zero).unwrap();
        assert!(a.sigma(&a.one()).unwrap().is_zero());
        // σ(x·x) = 0
        let xe = a.generator_element("x").unwrap();
        assert!(a.sigma(&a.multiply(&xe, &xe).unwrap()).unwrap().is_zero());
        // σ(z x) = -z y (sign from passing z)
        let zx = a.multiply(&a.generator_element("z").unwrap(), &xe).unwrap();
        let expect = a.neg(&a.multiply(&a.generator_element("z").unwrap(), &a.generator_element("y").unwrap()).unwrap());
        assert_eq!(a.sigma(&zx).unwrap(), expect);
    }

    #[test]
    fn mismatch_detected() {
        let a = small();
        let b = Algebra::new(f5(), vec![Generator::new("w", 2, GenKind::Polynomial)]).unwrap();
        assert_eq!(a.multiply(&a.one(), &b.one()), Err(AlgebraError::Mismatch));
    }
}
