//! Hopf algebroid presentations, comodules over them, and axiom checks.
//!
//! Central generators (the v_i) are coefficients: a word stores them in a
//! scalar prefix, so v⊗1 and 1⊗v are the same word.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::fp_linear::{rref, Fp, LinearError, Profile, SparseMatrix};
use crate::graded_algebra::{fmt_terms, Algebra, AlgebraError, Element, GenId, Monomial, SigmaImage};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComodError {
    #[error("generator `{0}` has no coproduct entry")]
    MissingCoproduct(String),
    #[error("generator `{0}` has no coaction entry")]
    MissingCoaction(String),
    #[error("degree {degree} exceeds the cap {cap} of `{name}`")]
    CapExceeded { name: String, degree: i64, cap: i64 },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

/// A tensor word `s · a_1 ⊗ … ⊗ a_n` with `s` a monomial in central generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub slots: Vec<Monomial>,
    pub scalar: Monomial,
}

/// F_p-combination of words of a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tensor {
    pub terms: BTreeMap<Word, u32>,
}

impl Tensor {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add_term(&mut self, f: Fp, w: Word, c: u32) {
        add_into(&mut self.terms, f, w, c);
    }
}

pub(crate) fn add_into<K: Ord>(map: &mut BTreeMap<K, u32>, f: Fp, k: K, c: u32) {
    let c = c % f.p();
    if c == 0 {
        return;
    }
    match map.entry(k) {
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

/// Slot algebras for a tensor of fixed arity; `scalar` holds the central
/// generators (the Hopf algebra itself).
#[derive(Clone, Copy)]
pub struct TensorCtx<'a> {
    pub scalar: &'a Algebra,
    pub slots: &'a [&'a Algebra],
}

impl<'a> TensorCtx<'a> {
    pub fn field(&self) -> Fp {
        self.scalar.field()
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        self.scalar.degree(&w.scalar) + w.slots.iter().zip(self.slots).map(|(m, a)| a.degree(m)).sum::<i64>()
    }

    /// Move central generators out of slots that belong to the scalar algebra.
    pub fn normalize(&self, mut w: Word) -> Word {
        for (i, a) in self.slots.iter().enumerate() {
            if a.fingerprint() != self.scalar.fingerprint() {
                continue;
            }
            let (s, rest) = split_central(a, &w.slots[i]);
            if !s.is_one() {
                w.scalar = mul_even(&w.scalar, &s);
                w.slots[i] = rest;
            }
        }
        w
    }

    /// Slotwise product with the Koszul sign Π_{i>j} (−1)^{|a_i||b_j|}.
    pub fn mul_words(&self, a: &Word, b: &Word) -> Option<(Word, bool)> {
        let mut neg = false;
        let mut odd_a_after = false;
        // walk right to left so odd_a_after covers slots i > j
        let n = self.arity();
        let mut slots = vec![Monomial::one(); n];
        for j in (0..n).rev() {
            if odd_a_after && self.slots[j].is_odd(&b.slots[j]) {
                neg = !neg;
            }
            let (m, s) = self.slots[j].mul_monomials(&a.slots[j], &b.slots[j])?;
            neg ^= s;
            slots[j] = m;
            odd_a_after ^= self.slots[j].is_odd(&a.slots[j]);
        }
        Some((Word { slots, scalar: mul_even(&a.scalar, &b.scalar) }, neg))
    }

    pub fn mul(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let f = self.field();
        let mut out = Tensor::default();
        for (wa, &ca) in &a.terms {
            for (wb, &cb) in &b.terms {
                if let Some((w, neg)) = self.mul_words(wa, wb) {
                    let c = f.mul(ca, cb);
                    out.add_term(f, w, if neg { f.neg(c) } else { c });
                }
            }
        }
        out
    }

    pub fn unit(&self) -> Tensor {
        let mut t = Tensor::default();
        t.add_term(self.field(), Word { slots: vec![Monomial::one(); self.arity()], scalar: Monomial::one() }, 1);
        t
    }

    pub fn add(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let mut out = a.clone();
        for (w, &c) in &b.terms {
            out.add_term(self.field(), w.clone(), c);
        }
        out
    }

    pub fn scale(&self, a: &Tensor, c: u32) -> Tensor {
        let f = self.field();
        let mut out = Tensor::default();
        for (w, &v) in &a.terms {
            out.add_term(f, w.clone(), f.mul(v, c));
        }
        out
    }

    pub fn fmt_word(&self, w: &Word) -> String {
        let body = w
            .slots
            .iter()
            .zip(self.slots)
            .map(|(m, a)| a.fmt_monomial(m))
            .collect::<Vec<_>>()
            .join(" | ");
        if w.scalar.is_one() {
            body
        } else {
            format!("{} * {}", self.scalar.fmt_monomial(&w.scalar), body)
        }
    }

    pub fn fmt(&self, t: &Tensor) -> String {
        fmt_terms(self.field(), t.terms.iter().map(|(w, &c)| (self.fmt_word(w), c)))
    }
}

/// Product of monomials in even (central) generators: plain exponent merge.
pub fn mul_even(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m: BTreeMap<GenId, u32> = a.0.iter().copied().collect();
    for &(g, e) in &b.0 {
        *m.entry(g).or_insert(0) += e;
    }
    Monomial(m.into_iter().collect())
}

/// Split a monomial into its central part and the rest.
pub fn split_central(a: &Algebra, m: &Monomial) -> (Monomial, Monomial) {
    let (s, r): (Vec<_>, Vec<_>) = m.0.iter().partition(|(g, _)| a.generator(*g).central);
    (Monomial(s), Monomial(r))
}

/// Presentation of a Hopf algebroid with central coefficients.
#[derive(Debug)]
pub struct Hopf {
    pub name: String,
    pub alg: Algebra,
    delta: Vec<Option<Tensor>>,
    counit: Vec<u32>,
    pub degree_cap: i64,
    cache: RwLock<HashMap<Monomial, Arc<Tensor>>>,
}

impl Hopf {
    pub fn new(
        name: &str,
        alg: Algebra,
        delta: Vec<(GenId, Tensor)>,
        counit: Vec<(GenId, u32)>,
        degree_cap: i64,
    ) -> Result<Self, ComodError> {
        let n = alg.gens().len();
        let mut table = vec![None; n];
        for (g, t) in delta {
            table[g] = Some(t);
        }
        for (g, gen) in alg.gens().iter().enumerate() {
            if !gen.central && table[g].is_none() {
                return Err(ComodError::MissingCoproduct(gen.name.clone()));
            }
        }
        let mut eps = vec![0u32; n];
        for (g, c) in counit {
            eps[g] = c % alg.p();
        }
        Ok(Hopf { name: name.to_string(), alg, delta: table, counit: eps, degree_cap, cache: RwLock::new(HashMap::new()) })
    }

    pub fn field(&self) -> Fp {
        self.alg.field()
    }

    pub fn ctx2(&self) -> [&Algebra; 2] {
        [&self.alg, &self.alg]
    }

    pub fn delta_of(&self, g: GenId) -> Option<&Tensor> {
        self.delta[g].as_ref()
    }

    /// Counit of a non-central monomial (central factors are coefficients).
    pub fn counit(&self, m: &Monomial) -> u32 {
        let f = self.field();
        let mut c = 1u32;
        for &(g, e) in &m.0 {
            if !self.alg.generator(g).central {
                c = f.mul(c, f.pow(self.counit[g], e as u64));
            }
        }
        c
    }

    /// Δ on a monomial, extended multiplicatively.
    pub fn coproduct(&self, m: &Monomial) -> Arc<Tensor> {
        if let Some(t) = self.cache.read().unwrap().get(m) {
            return t.clone();
        }
        let slots = self.ctx2();
        let ctx = TensorCtx { scalar: &self.alg, slots: &slots };
        let mut acc = ctx.unit();
        for &(g, e) in &m.0 {
            let gen_t = match &self.delta[g] {
                Some(t) => t.clone(),
                None => {
                    let mut t = Tensor::default();
                    t.add_term(self.field(), Word { slots: vec![Monomial::one(); 2], scalar: Monomial::gen(g) }, 1);
                    t
                }
            };
            for _ in 0..e {
                acc = ctx.mul(&acc, &gen_t);
            }
        }
        let acc = Arc::new(acc);
        self.cache.write().unwrap().insert(m.clone(), acc.clone());
        acc
    }

    /// Every monomial of the underlying algebra in degrees `0..=cap`.
    pub fn monomials_through(&self, cap: i64) -> Result<Vec<Monomial>, ComodError> {
        let mut out = Vec::new();
        for d in 0..=cap {
            out.extend(self.alg.basis_in_degree(d)?);
        }
        Ok(out)
    }

    /// Non-central monomials of degree `d` (the slot basis of the cobar complex).
    pub fn slot_basis(&self, d: i64) -> Result<Vec<Monomial>, ComodError> {
        Ok(self
            .alg
            .basis_in_degree(d)?
            .into_iter()
            .filter(|m| m.0.iter().all(|(g, _)| !self.alg.generator(*g).central))
            .collect())
    }

    /// Central monomials of degree `d`.
    pub fn scalar_basis(&self, d: i64) -> Result<Vec<Monomial>, ComodError> {
        Ok(self
            .alg
            .basis_in_degree(d)?
            .into_iter()
            .filter(|m| m.0.iter().all(|(g, _)| self.alg.generator(*g).central))
            .collect())
    }

    pub fn has_central(&self) -> bool {
        self.alg.gens().iter().any(|g| g.central)
    }
}

/// One failed axiom instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: &'static str,
    pub monomial: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Homogeneity, counit and coassociativity on every monomial through the cap.
pub fn check_hopf_axioms(h: &Hopf) -> Result<AxiomReport, ComodError> {
    let f = h.field();
    let slots2 = h.ctx2();
    let ctx2 = TensorCtx { scalar: &h.alg, slots: &slots2 };
    let slots3 = [&h.alg, &h.alg, &h.alg];
    let ctx3 = TensorCtx { scalar: &h.alg, slots: &slots3 };
    let mut rep = AxiomReport::default();
    for m in h.monomials_through(h.degree_cap)? {
        rep.checked += 1;
        let name = h.alg.fmt_monomial(&m);
        let d = h.alg.degree(&m);
        let delta = h.coproduct(&m);
        if let Some((w, _)) = delta.terms.iter().find(|(w, _)| ctx2.word_degree(w) != d) {
            rep.failures.push(AxiomFailure {
                axiom: "homogeneity",
                monomial: name.clone(),
                detail: format!("term {} has degree {}", ctx2.fmt_word(w), ctx2.word_degree(w)),
            });
        }
        // counit on either side: map back into the algebra with scalars reattached
        for side in 0..2 {
            let mut back = h.alg.zero();
            for (w, &c) in &delta.terms {
                let e = h.counit(&w.slots[side]);
                if e == 0 {
                    continue;
                }
                let keep = mul_even(&w.slots[1 - side], &w.scalar);
                let keep = Monomial(keep.0);
                h.alg.add_term(&mut back, canonical(&h.alg, &keep), f.mul(c, e));
            }
            if back != h.alg.monomial(m.clone(), 1) {
                rep.failures.push(AxiomFailure {
                    axiom: "counit",
                    monomial: name.clone(),
                    detail: format!("side {side} gives {}", h.alg.fmt_element(&back)),
                });
            }
        }
        let left = apply_slot(&ctx3, &delta, 0, |a| (*h.coproduct(a)).clone(), f);
        let right = apply_slot(&ctx3, &delta, 1, |a| (*h.coproduct(a)).clone(), f);
        if left != right {
            let diff = ctx3.add(&left, &ctx3.scale(&right, f.p() - 1));
            rep.failures.push(AxiomFailure {
                axiom: "coassociativity",
                monomial: name,
                detail: format!("(Δ⊗1)Δ − (1⊗Δ)Δ = {}", ctx3.fmt(&diff)),
            });
        }
    }
    Ok(rep)
}

/// Monomial with exponents re-sorted (after an even merge).
fn canonical(_a: &Algebra, m: &Monomial) -> Monomial {
    let mut v = m.0.clone();
    v.sort_unstable();
    Monomial(v)
}

/// Replace slot `i` of every word by the arity-2 expansion `f(slot)`.
fn apply_slot<F>(ctx_out: &TensorCtx, t: &Tensor, i: usize, f: F, field: Fp) -> Tensor
where
    F: Fn(&Monomial) -> Tensor,
{
    let mut out = Tensor::default();
    for (w, &c) in &t.terms {
        let exp = f(&w.slots[i]);
        for (w2, &c2) in &exp.terms {
            let mut slots = w.slots[..i].to_vec();
            slots.extend(w2.slots.iter().cloned());
            slots.extend(w.slots[i + 1..].iter().cloned());
            let nw = ctx_out.normalize(Word { slots, scalar: mul_even(&w.scalar, &w2.scalar) });
            out.add_term(field, nw, field.mul(c, c2));
        }
    }
    out
}

/// A comodule term: `c · s · a ⊗ m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoTerm<K> {
    pub a: Monomial,
    pub scalar: Monomial,
    pub m: K,
}

/// Linear view of a comodule over a [`Hopf`]: a graded basis with a coaction.
pub trait Comodule: Sync {
    type Key: Clone + Ord + Eq + Hash + Debug + Send + Sync;

    fn hopf(&self) -> &Hopf;
    fn name(&self) -> &str;
    fn degree_cap(&self) -> i64;
    fn key_degree(&self, k: &Self::Key) -> i64;
    /// Basis in degree `d`, ascending.
    fn basis(&self, d: i64) -> Result<Vec<Self::Key>, ComodError>;
    /// ψ(k), including the `1⊗k` term.
    fn coact(&self, k: &Self::Key) -> Result<BTreeMap<CoTerm<Self::Key>, u32>, ComodError>;
    fn fmt_key(&self, k: &Self::Key) -> String;
    /// Lowest degree in which the basis may be nonzero.
    fn min_degree(&self) -> i64 {
        0
    }
}

/// ψ̄(k) = ψ(k) − 1⊗k.
pub fn reduced_coaction<C: Comodule>(c: &C, k: &C::Key) -> Result<BTreeMap<CoTerm<C::Key>, u32>, ComodError> {
    let f = c.hopf().field();
    let mut t = c.coact(k)?;
    add_into(&mut t, f, CoTerm { a: Monomial::one(), scalar: Monomial::one(), m: k.clone() }, f.p() - 1);
    Ok(t)
}

/// Counit and coassociativity of the coaction on every basis element through the cap.
pub fn check_comodule_axioms<C: Comodule>(c: &C) -> Result<AxiomReport, ComodError> {
    let h = c.hopf();
    let f = h.field();
    let mut rep = AxiomReport::default();
    for d in c.min_degree()..=c.degree_cap() {
        for k in c.basis(d)? {
            rep.checked += 1;
            let name = c.fmt_key(&k);
            let psi = c.coact(&k)?;
            if let Some(t) = psi.keys().find(|t| h.alg.degree(&t.a) + h.alg.degree(&t.scalar) + c.key_degree(&t.m) != d) {
                rep.failures.push(AxiomFailure {
                    axiom: "homogeneity",
                    monomial: name.clone(),
                    detail: format!("term {} | {}", h.alg.fmt_monomial(&t.a), c.fmt_key(&t.m)),
                });
            }
            let mut back: BTreeMap<(Monomial, C::Key), u32> = BTreeMap::new();
            for (t, &v) in &psi {
                let e = h.counit(&t.a);
                if e != 0 {
                    add_into(&mut back, f, (t.scalar.clone(), t.m.clone()), f.mul(v, e));
                }
            }
            let mut expect = BTreeMap::new();
            expect.insert((Monomial::one(), k.clone()), 1u32);
            if back != expect {
                rep.failures.push(AxiomFailure { axiom: "counit", monomial: name.clone(), detail: String::new() });
            }
            // (Δ⊗1)ψ versus (1⊗ψ)ψ as (scalar, a1, a2, m) terms
            type T3<K> = BTreeMap<(Monomial, Monomial, Monomial, K), u32>;
            let mut left: T3<C::Key> = BTreeMap::new();
            let mut right: T3<C::Key> = BTreeMap::new();
            for (t, &v) in &psi {
                for (w, &c2) in &h.coproduct(&t.a).terms {
                    let s = mul_even(&t.scalar, &w.scalar);
                    add_into(&mut left, f, (s, w.slots[0].clone(), w.slots[1].clone(), t.m.clone()), f.mul(v, c2));
                }
                for (t2, &c2) in &c.coact(&t.m)? {
                    let s = mul_even(&t.scalar, &t2.scalar);
                    add_into(&mut right, f, (s, t.a.clone(), t2.a.clone(), t2.m.clone()), f.mul(v, c2));
                }
            }
            if left != right {
                let mut diff = left.clone();
                for (key, v) in right {
                    add_into(&mut diff, f, key, f.neg(v));
                }
                let shown: Vec<String> = diff
                    .iter()
                    .take(6)
                    .map(|((s, a1, a2, m), v)| {
                        let sc = if s.is_one() { String::new() } else { format!("{} * ", h.alg.fmt_monomial(s)) };
                        format!(
                            "{} {}{} | {} | {}",
                            f.signed(*v),
                            sc,
                            h.alg.fmt_monomial(a1),
                            h.alg.fmt_monomial(a2),
                            c.fmt_key(m)
                        )
                    })
                    .collect();
                rep.failures.push(AxiomFailure {
                    axiom: "coassociativity",
                    monomial: name,
                    detail: shown.join("; "),
                });
            }
        }
    }
    Ok(rep)
}

/// Kernel of ψ̄ on the degree-`d` basis, as coefficient vectors over that basis.
pub fn primitives_in_degree<C: Comodule>(c: &C, d: i64) -> Result<Vec<Vec<(C::Key, u32)>>, ComodError> {
    let f = c.hopf().field();
    let basis = c.basis(d)?;
    let mut rows: BTreeMap<CoTerm<C::Key>, usize> = BTreeMap::new();
    let mut cols: Vec<Vec<(CoTerm<C::Key>, u32)>> = Vec::new();
    for k in &basis {
        let r = reduced_coaction(c, k)?;
        for t in r.keys() {
            let n = rows.len();
            rows.entry(t.clone()).or_insert(n);
        }
        cols.push(r.into_iter().collect());
    }
    let mut m = SparseMatrix::zero(f, rows.len(), 0);
    for col in cols {
        let prof: Profile = col.into_iter().map(|(t, v)| (rows[&t], v)).collect();
        m.push_column(prof)?;
    }
    let r = rref(&m);
    Ok(r.kernel_basis
        .into_iter()
        .map(|k| k.into_iter().map(|(i, v)| (basis[i].clone(), v)).collect())
        .collect())
}

/// Comodule algebra presented by generators and a multiplicative coaction.
#[derive(Debug)]
pub struct AlgComodule {
    pub name: String,
    pub hopf: Arc<Hopf>,
    pub alg: Algebra,
    coaction: Vec<Tensor>,
    pub degree_cap: i64,
    pub min_degree: i64,
    cache: RwLock<HashMap<Monomial, Arc<Tensor>>>,
}

impl AlgComodule {
    /// Generators without a coaction entry that are σ-images get
    /// ψ(σx) = (1⊗σ)ψ(x).
    pub fn new(
        name: &str,
        hopf: Arc<Hopf>,
        alg: Algebra,
        coaction: Vec<(GenId, Tensor)>,
        degree_cap: i64,
    ) -> Result<Self, ComodError> {
        let n = alg.gens().len();
        let mut table: Vec<Option<Tensor>> = vec![None; n];
        for (g, t) in coaction {
            table[g] = Some(t);
        }
        let f = alg.field();
        loop {
            let mut progress = false;
            for x in 0..n {
                let Some(psi_x) = table[x].clone() else { continue };
                let SigmaImage::Image(img) = alg.sigma_of(x) else { continue };
                if img.len() != 1 {
                    continue;
                }
                let (ym, u) = img.leading().map(|(m, c)| (m.clone(), c)).unwrap();
                if ym.0.len() != 1 || ym.0[0].1 != 1 {
                    continue;
                }
                let y = ym.0[0].0;
                if table[y].is_some() {
                    continue;
                }
                let s = one_tensor_sigma(&hopf.alg, &alg, &psi_x)?;
                let inv = f.inv(u)?;
                let slots = [&hopf.alg, &alg];
                let ctx = TensorCtx { scalar: &hopf.alg, slots: &slots };
                table[y] = Some(ctx.scale(&s, inv));
                progress = true;
            }
            if !progress {
                break;
            }
        }
        let mut coaction = Vec::with_capacity(n);
        for (g, t) in table.into_iter().enumerate() {
            coaction.push(t.ok_or_else(|| ComodError::MissingCoaction(alg.generator(g).name.clone()))?);
        }
        let min_degree = alg
            .gens()
            .iter()
            .filter(|g| g.degree < 0)
            .map(|g| g.degree * g.max_exp().unwrap_or(0) as i64)
            .sum();
        Ok(AlgComodule {
            name: name.to_string(),
            hopf,
            alg,
            coaction,
            degree_cap,
            min_degree,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// The ground field as a comodule, so a bare Hopf algebroid has a cobar complex.
    pub fn trivial(hopf: Arc<Hopf>, degree_cap: i64) -> Result<Self, ComodError> {
        let alg = Algebra::new(hopf.field(), Vec::new())?;
        Self::new("trivial", hopf, alg, Vec::new(), degree_cap)
    }

    pub fn coaction_of(&self, g: GenId) -> &Tensor {
        &self.coaction[g]
    }

    pub fn ctx_slots(&self) -> [&Algebra; 2] {
        [&self.hopf.alg, &self.alg]
    }

    /// ψ on a monomial, extended multiplicatively with Koszul signs.
    pub fn coaction(&self, m: &Monomial) -> Arc<Tensor> {
        if let Some(t) = self.cache.read().unwrap().get(m) {
            return t.clone();
        }
        let slots = self.ctx_slots();
        let ctx = TensorCtx { scalar: &self.hopf.alg, slots: &slots };
        let mut acc = ctx.unit();
        for &(g, e) in &m.0 {
            for _ in 0..e {
                acc = ctx.mul(&acc, &self.coaction[g]);
            }
        }
        let acc = Arc::new(acc);
        self.cache.write().unwrap().insert(m.clone(), acc.clone());
        acc
    }

    pub fn coaction_element(&self, e: &Element) -> Tensor {
        let slots = self.ctx_slots();
        let ctx = TensorCtx { scalar: &self.hopf.alg, slots: &slots };
        let mut out = Tensor::default();
        for (m, c) in e.terms() {
            out = ctx.add(&out, &ctx.scale(&self.coaction(m), c));
        }
        out
    }
}

/// (1⊗σ)(a⊗m) = (−1)^{|a|} a⊗σm
pub fn one_tensor_sigma(hopf_alg: &Algebra, m_alg: &Algebra, t: &Tensor) -> Result<Tensor, ComodError> {
    let f = m_alg.field();
    let mut out = Tensor::default();
    for (w, &c) in &t.terms {
        let s = m_alg.sigma(&m_alg.monomial(w.slots[1].clone(), 1))?;
        let neg = hopf_alg.is_odd(&w.slots[0]);
        for (m2, c2) in s.terms() {
            let v = f.mul(c, c2);
            out.add_term(
                f,
                Word { slots: vec![w.slots[0].clone(), m2.clone()], scalar: w.scalar.clone() },
                if neg { f.neg(v) } else { v },
            );
        }
    }
    Ok(out)
}

impl Comodule for AlgComodule {
    type Key = Monomial;

    fn hopf(&self) -> &Hopf {
        &self.hopf
    }
    fn name(&self) -> &str {
        &self.name
    }
    fn degree_cap(&self) -> i64 {
        self.degree_cap
    }
    fn key_degree(&self, k: &Monomial) -> i64 {
        self.alg.degree(k)
    }
    fn basis(&self, d: i64) -> Result<Vec<Monomial>, ComodError> {
        Ok(self.alg.basis_in_degree(d)?)
    }
    fn coact(&self, k: &Monomial) -> Result<BTreeMap<CoTerm<Monomial>, u32>, ComodError> {
        let mut out = BTreeMap::new();
        let f = self.alg.field();
        for (w, &c) in &self.coaction(k).terms {
            add_into(
                &mut out,
                f,
                CoTerm { a: w.slots[0].clone(), scalar: w.scalar.clone(), m: w.slots[1].clone() },
                c,
            );
        }
        Ok(out)
    }
    fn fmt_key(&self, k: &Monomial) -> String {
        self.alg.fmt_monomial(k)
    }
    fn min_degree(&self) -> i64 {
        self.min_degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::{GenKind, Generator};

    /// P(x) with x primitive, |x| = 2.
    fn primitive_hopf() -> Hopf {
        let f = Fp::new(5).unwrap();
        let alg = Algebra::new(f, vec![Generator::new("x", 2, GenKind::Polynomial)]).unwrap();
        let x = alg.id("x").unwrap();
        let mut t = Tensor::default();
        t.add_term(f, Word { slots: vec![Monomial::gen(x), Monomial::one()], scalar: Monomial::one() }, 1);
        t.add_term(f, Word { slots: vec![Monomial::one(), Monomial::gen(x)], scalar: Monomial::one() }, 1);
        Hopf::new("prim", alg, vec![(x, t)], vec![], 20).unwrap()
    }

    #[test]
    fn trivial_hopf_passes() {
        let h = primitive_hopf();
        let r = check_hopf_axioms(&h).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.checked, 11);
        // Δ(x^2) = x^2⊗1 + 2 x⊗x + 1⊗x^2
        let x = h.alg.id("x").unwrap();
        let d = h.coproduct(&Monomial(vec![(x, 2)]));
        assert_eq!(d.terms.len(), 3);
    }

    #[test]
    fn missing_coproduct_rejected() {
        let f = Fp::new(5).unwrap();
        let alg = Algebra::new(f, vec![Generator::new("x", 2, GenKind::Polynomial)]).unwrap();
        assert!(matches!(Hopf::new("bad", alg, vec![], vec![], 10), Err(ComodError::MissingCoproduct(_))));
    }
}
