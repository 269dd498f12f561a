//! Spectral-sequence pages over a bigraded algebra.
//!
//! A page is stored per bidegree `(column, degree)`, where the column is the
//! exponent of the column class t (0 when there is none) and the degree is
//! the total degree with |t| = −2 included. A round d^r is an odd derivation
//! given on generators; it lowers the degree by one and moves `shift`
//! columns. For the homotopy fixed point spectral sequence d²(x) = tσx, so
//! d² moves one t-power. Pages are additive: each cell keeps the boundary
//! space and a list of chain-level representatives of its classes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::fp_linear::{Echelon, Fp, Insert, Profile};
use crate::graded_algebra::{Algebra, AlgebraError, Element, GenId, GenKind, Monomial, SigmaImage};
use crate::hopf_comod::{add_into, AlgComodule, CoTerm, ComodError, Comodule, Hopf};

/// `(column, total degree)`
pub type Bideg = (i64, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Comod(#[from] ComodError),
    #[error("d^{r}({gen}): {detail}")]
    Shape { r: i64, gen: String, detail: String },
    #[error("d^{r}({gen}) is incompatible with {gen}^{height} = 0")]
    Truncation { r: i64, gen: String, height: u32 },
    #[error("d^{r} sends a class in ({col}, {deg}) to a non-cycle of the earlier rounds")]
    NotCycle { r: i64, col: i64, deg: i64 },
    #[error("bidegree ({col}, {deg}) is outside the computed window")]
    Window { col: i64, deg: i64 },
}

/// One differential: generator images of d^r.
#[derive(Debug, Clone)]
pub struct Round {
    pub r: i64,
    /// Column change of d^r.
    pub shift: i64,
    pub table: Vec<(GenId, Element)>,
}

#[derive(Debug, Clone)]
pub struct PageSpec {
    pub alg: Algebra,
    pub column: Option<GenId>,
    pub rounds: Vec<Round>,
    pub min_degree: i64,
    pub max_degree: i64,
}

/// Odd derivation determined by `table` (indexed by generator), with the
/// same sign bookkeeping as σ: passing over an odd prefix costs a sign.
pub fn derive(alg: &Algebra, table: &[Option<Element>], e: &Element) -> Result<Element, AlgebraError> {
    let f = alg.field();
    let mut out = alg.zero();
    for (m, c) in e.terms() {
        for (pos, &(g, ex)) in m.0.iter().enumerate() {
            let Some(img) = table.get(g).and_then(|x| x.as_ref()) else { continue };
            let coef = f.mul(c, ex % f.p());
            if coef == 0 {
                continue;
            }
            let prefix = Monomial(m.0[..pos].to_vec());
            let lowered = if ex > 1 { Monomial(vec![(g, ex - 1)]) } else { Monomial::one() };
            let suffix = Monomial(m.0[pos + 1..].to_vec());
            let coef = if alg.is_odd(&prefix) { f.neg(coef) } else { coef };
            let left = alg.multiply(&alg.monomial(prefix, 1), &alg.monomial(lowered, 1))?;
            let term = alg.multiply(&alg.multiply(&left, img)?, &alg.monomial(suffix, 1))?;
            out = alg.add(&out, &alg.scale(&term, coef))?;
        }
    }
    Ok(out)
}

impl PageSpec {
    /// E² = P(t)/t^k ⊗ M with d²(x) = tσx, for a comodule preset built with
    /// `columns = k`. Without a column class the spectral sequence is E² = E^∞.
    pub fn hfpss(comod: &AlgComodule, column: Option<GenId>, max_degree: i64) -> Result<Self, SsError> {
        let alg = comod.alg.clone();
        let mut table = Vec::new();
        if let Some(t) = column {
            let te = alg.monomial(Monomial::gen(t), 1);
            for g in 0..alg.gens().len() {
                if let SigmaImage::Image(x) = alg.sigma_of(g) {
                    if !x.is_zero() {
                        table.push((g, alg.multiply(&te, x)?));
                    }
                }
            }
        }
        let rounds = if column.is_some() { vec![Round { r: 2, shift: 1, table }] } else { vec![] };
        Ok(PageSpec { alg, column, rounds, min_degree: comod.min_degree, max_degree })
    }

    /// A differential graded algebra whose rounds all stay in column 0.
    pub fn from_rounds(alg: &Algebra, rounds: &[(i64, Vec<(GenId, Element)>)], max_degree: i64) -> Self {
        let rounds = rounds.iter().map(|(r, t)| Round { r: *r, shift: 0, table: t.clone() }).collect();
        PageSpec { alg: alg.clone(), column: None, rounds, min_degree: 0, max_degree }
    }

    pub fn with_round(mut self, round: Round) -> Self {
        self.rounds.push(round);
        self.rounds.sort_by_key(|r| r.r);
        self
    }

    pub fn column_of(&self, m: &Monomial) -> i64 {
        self.column.map_or(0, |t| m.exponent(t) as i64)
    }

    fn table(&self, i: usize) -> Vec<Option<Element>> {
        let mut v = vec![None; self.alg.gens().len()];
        for (g, e) in &self.rounds[i].table {
            v[*g] = Some(e.clone());
        }
        v
    }

    /// d^r of the i-th round on an element.
    pub fn apply(&self, i: usize, e: &Element) -> Result<Element, SsError> {
        Ok(derive(&self.alg, &self.table(i), e)?)
    }

    /// Every generator image must be homogeneous of degree |g|−1, sit `shift`
    /// columns over g, and respect truncations x^h = 0 with p ∤ h.
    pub fn validate(&self) -> Result<(), SsError> {
        let a = &self.alg;
        for (i, round) in self.rounds.iter().enumerate() {
            let table = self.table(i);
            for (g, img) in &round.table {
                let gen = a.generator(*g);
                let col = self.column_of(&Monomial::gen(*g));
                for (m, _) in img.terms() {
                    if a.degree(m) != gen.degree - 1 || self.column_of(m) != col + round.shift {
                        return Err(SsError::Shape {
                            r: round.r,
                            gen: gen.name.clone(),
                            detail: format!(
                                "term {} has bidegree ({}, {}), expected ({}, {})",
                                a.fmt_monomial(m),
                                self.column_of(m),
                                a.degree(m),
                                col + round.shift,
                                gen.degree - 1
                            ),
                        });
                    }
                }
                if let GenKind::Truncated(h) = gen.kind {
                    if h % a.p() != 0 && !img.is_zero() {
                        let top = a.multiply(&a.gen_power(*g, h - 1), img)?;
                        if !top.is_zero() {
                            return Err(SsError::Truncation { r: round.r, gen: gen.name.clone(), height: h });
                        }
                    }
                }
                let dd = derive(a, &table, img)?;
                if !dd.is_zero() {
                    return Err(SsError::Shape {
                        r: round.r,
                        gen: gen.name.clone(),
                        detail: format!("d∘d = {} ≠ 0", a.fmt_element(&dd)),
                    });
                }
            }
        }
        Ok(())
    }

    fn chain_cells(&self, top: i64) -> Result<BTreeMap<Bideg, Arc<Vec<Monomial>>>, SsError> {
        let mut cells: BTreeMap<Bideg, Vec<Monomial>> = BTreeMap::new();
        for d in self.min_degree..=top {
            for m in self.alg.basis_in_degree(d)? {
                cells.entry((self.column_of(&m), d)).or_default().push(m);
            }
        }
        Ok(cells
            .into_iter()
            .map(|(k, mut v)| {
                v.sort();
                (k, Arc::new(v))
            })
            .collect())
    }

    /// The first page: every monomial is a class.
    pub fn first_page(&self) -> Result<SSPage, SsError> {
        let top = self.max_degree + self.rounds.len() as i64;
        let cells = self
            .chain_cells(top)?
            .into_iter()
            .map(|(k, basis)| {
                let reps = (0..basis.len()).map(|i| vec![(i, 1)]).collect();
                (k, Cell { basis, boundaries: vec![], reps })
            })
            .collect();
        let r = self.rounds.first().map_or(2, |r| r.r);
        Ok(SSPage { r, field: self.alg.field(), cells, min: self.min_degree, top, max: self.max_degree })
    }

    /// All pages, starting with the first and turning once per round.
    pub fn run(&self) -> Result<Vec<SSPage>, SsError> {
        self.validate()?;
        let mut pages = vec![self.first_page()?];
        for i in 0..self.rounds.len() {
            let next = self.turn(pages.last().unwrap(), i)?;
            pages.push(next);
        }
        Ok(pages)
    }

    /// d^r on one cell of `page`, as a matrix in class coordinates: for each
    /// source class, its chain-level image and its coordinates in the target.
    pub fn differential(&self, page: &SSPage, i: usize, at: Bideg) -> Result<Vec<(Profile, Profile)>, SsError> {
        let round = &self.rounds[i];
        let table = self.table(i);
        let Some(cell) = page.cells.get(&at) else { return Ok(vec![]) };
        let to = (at.0 + round.shift, at.1 - 1);
        cell.reps
            .iter()
            .map(|z| {
                let e = cell.element(&self.alg, z);
                let dz = derive(&self.alg, &table, &e)?;
                if dz.is_zero() {
                    return Ok((vec![], vec![]));
                }
                let target = page.cells.get(&to).ok_or(SsError::Window { col: to.0, deg: to.1 })?;
                let v = target.profile(&dz).ok_or(SsError::Window { col: to.0, deg: to.1 })?;
                let coords = target.coords(page.field, &v).ok_or(SsError::NotCycle { r: round.r, col: at.0, deg: at.1 })?;
                Ok((v, coords))
            })
            .collect()
    }

    /// Homology of `page` under the i-th round.
    pub fn turn(&self, page: &SSPage, i: usize) -> Result<SSPage, SsError> {
        let f = page.field;
        let round = &self.rounds[i];
        let keys: Vec<Bideg> = page.cells.keys().copied().collect();
        let per_cell: Vec<(Bideg, Vec<(Profile, Profile)>)> = keys
            .par_iter()
            .map(|&k| self.differential(page, i, k).map(|m| (k, m)))
            .collect::<Result<_, _>>()?;
        let mut kernels: BTreeMap<Bideg, Vec<Profile>> = BTreeMap::new();
        let mut images: BTreeMap<Bideg, Vec<Profile>> = BTreeMap::new();
        for (k, cols) in per_cell {
            let cell = &page.cells[&k];
            let to = (k.0 + round.shift, k.1 - 1);
            let ntarget = page.cells.get(&to).map_or(0, |c| c.reps.len());
            let mut ech = Echelon::new(f, ntarget);
            let mut ker = Vec::new();
            for (j, (chain, coords)) in cols.iter().enumerate() {
                match ech.insert(coords) {
                    (_, Insert::Pivot(_)) => images.entry(to).or_default().push(chain.clone()),
                    (_, Insert::Dependent(combo)) => {
                        // z_j − Σ combo·z
                        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
                        for &(x, a) in &cell.reps[j] {
                            add_into(&mut acc, f, x, a);
                        }
                        for (l, c) in combo {
                            for &(x, a) in &cell.reps[l] {
                                add_into(&mut acc, f, x, f.neg(f.mul(a, c)));
                            }
                        }
                        ker.push(acc.into_iter().collect());
                    }
                }
            }
            kernels.insert(k, ker);
        }
        let top = page.top - 1;
        let mut cells = BTreeMap::new();
        for (k, cell) in &page.cells {
            if k.1 > top {
                continue;
            }
            let n = cell.basis.len();
            let mut b = Echelon::new(f, n);
            for v in cell.boundaries.iter().chain(images.get(k).into_iter().flatten()) {
                b.insert(v);
            }
            let boundaries = b.basis();
            let nb = boundaries.len();
            for v in &kernels[k] {
                b.insert(v);
            }
            let reps = b.basis()[nb..].to_vec();
            cells.insert(*k, Cell { basis: cell.basis.clone(), boundaries, reps });
        }
        Ok(SSPage { r: round.r + 1, field: f, cells, min: page.min, top, max: page.max })
    }

    /// Chain-level d∘d on every monomial of every cell through the window;
    /// returns the offending (round, bidegree, monomial) triples.
    pub fn d_squared_failures(&self) -> Result<Vec<(i64, Bideg, String)>, SsError> {
        let mut bad = Vec::new();
        let cells = self.chain_cells(self.max_degree)?;
        for (i, round) in self.rounds.iter().enumerate() {
            let table = self.table(i);
            for (k, basis) in &cells {
                for m in basis.iter() {
                    let e = self.alg.monomial(m.clone(), 1);
                    let dd = derive(&self.alg, &table, &derive(&self.alg, &table, &e)?)?;
                    if !dd.is_zero() {
                        bad.push((round.r, *k, self.alg.fmt_monomial(m)));
                    }
                }
            }
        }
        Ok(bad)
    }
}

/// One bidegree of a page.
#[derive(Debug, Clone)]
pub struct Cell {
    /// Chain-level monomials, ascending.
    pub basis: Arc<Vec<Monomial>>,
    /// Reduced basis of the accumulated boundaries.
    pub boundaries: Vec<Profile>,
    /// Representatives of the classes, reduced against the boundaries.
    pub reps: Vec<Profile>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn element(&self, alg: &Algebra, v: &Profile) -> Element {
        alg.from_terms(v.iter().map(|&(i, c)| (self.basis[i].clone(), c)))
    }

    /// Coordinates of an element supported on this cell's monomials.
    pub fn profile(&self, e: &Element) -> Option<Profile> {
        let mut v = Vec::with_capacity(e.len());
        for (m, c) in e.terms() {
            v.push((self.basis.binary_search(m).ok()?, c));
        }
        v.sort_unstable();
        Some(v)
    }

    /// Class coordinates of a cycle, or `None` when `v` is not a cycle.
    pub fn coords(&self, f: Fp, v: &Profile) -> Option<Profile> {
        let mut ech = Echelon::new(f, self.basis.len());
        for x in self.boundaries.iter().chain(&self.reps) {
            ech.insert(x);
        }
        let nb = self.boundaries.len();
        let combo = ech.express(v)?;
        Some(combo.into_iter().filter(|&(j, _)| j >= nb).map(|(j, c)| (j - nb, c)).collect())
    }
}

/// E^r: the classes surviving to page `r`.
#[derive(Debug, Clone)]
pub struct SSPage {
    pub r: i64,
    pub field: Fp,
    pub cells: BTreeMap<Bideg, Cell>,
    pub min: i64,
    /// Highest degree still stored (kept above `max` for later rounds).
    pub top: i64,
    /// Highest degree that is reported.
    pub max: i64,
}

impl SSPage {
    pub fn dim(&self, at: Bideg) -> usize {
        self.cells.get(&at).map_or(0, Cell::dim)
    }

    /// Nonzero dimensions inside the reported window.
    pub fn dims(&self) -> BTreeMap<Bideg, u64> {
        self.cells
            .iter()
            .filter(|(k, c)| k.1 <= self.max && c.dim() > 0)
            .map(|(k, c)| (*k, c.dim() as u64))
            .collect()
    }

    /// Dimensions summed over columns.
    pub fn total_dims(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for ((_, d), n) in self.dims() {
            *out.entry(d).or_insert(0) += n;
        }
        out
    }

    pub fn reps(&self, alg: &Algebra, at: Bideg) -> Vec<Element> {
        self.cells.get(&at).map_or(vec![], |c| c.reps.iter().map(|v| c.element(alg, v)).collect())
    }

    /// Class coordinates of a homogeneous cycle (split by column).
    pub fn classes_of(&self, alg: &Algebra, column: Option<GenId>, e: &Element) -> Option<Vec<(Bideg, Profile)>> {
        let mut by: BTreeMap<Bideg, Vec<(Monomial, u32)>> = BTreeMap::new();
        for (m, c) in e.terms() {
            let col = column.map_or(0, |t| m.exponent(t) as i64);
            by.entry((col, alg.degree(m))).or_default().push((m.clone(), c));
        }
        let mut out = Vec::new();
        for (k, terms) in by {
            let cell = self.cells.get(&k)?;
            let v = cell.profile(&alg.from_terms(terms))?;
            out.push((k, cell.coords(self.field, &v)?));
        }
        Some(out)
    }

    /// Chart records `c <column> <degree> <dim> <reps…>`.
    pub fn chart_lines(&self, alg: &Algebra) -> Vec<String> {
        self.cells
            .iter()
            .filter(|(k, c)| k.1 <= self.max && c.dim() > 0)
            .map(|(k, c)| {
                let reps: Vec<String> = c.reps.iter().map(|v| compact(alg, &c.element(alg, v))).collect();
                format!("c {} {} {} {}", k.0, k.1, c.dim(), reps.join(" "))
            })
            .collect()
    }

    /// Pairs (source, target) of nonzero cells that a d^r in the doubled
    /// column convention c ↦ c + r could connect. Classes live in even doubled
    /// columns (twice the t-power), so odd r never finds a target.
    pub fn possible_targets(&self, r: i64) -> Vec<(Bideg, Bideg)> {
        let mut out = Vec::new();
        for (k, c) in &self.cells {
            if c.dim() == 0 || k.1 > self.max {
                continue;
            }
            let doubled = 2 * k.0 + r;
            if doubled % 2 != 0 {
                continue;
            }
            let to = (doubled / 2, k.1 - 1);
            if self.dim(to) > 0 {
                out.push((*k, to));
            }
        }
        out
    }
}

/// Whitespace-free rendering: factors joined by `.`, terms by `+`.
pub fn compact(alg: &Algebra, e: &Element) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let f = alg.field();
    let mut s = String::new();
    for (i, (m, c)) in e.terms().enumerate() {
        let sc = f.signed(c);
        let mono = alg.fmt_monomial(m).replace(' ', ".");
        if sc < 0 {
            s.push('-');
        } else if i > 0 {
            s.push('+');
        }
        if sc.abs() != 1 {
            s.push_str(&format!("{}*", sc.abs()));
        }
        s.push_str(&mono);
    }
    s
}

// ---------------------------------------------------------------------------
// The homology of a page as a comodule.

/// A class of a page: bidegree and index among the cell's representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub deg: i64,
    pub col: i64,
    pub idx: usize,
}

/// The classes of a page of an HFPSS over a comodule algebra, with the
/// coaction induced on representatives. Valid because d²(x) = tσx commutes
/// with ψ up to the Koszul sign, so cycles and boundaries are subcomodules.
pub struct HomologyComodule<'a> {
    base: &'a AlgComodule,
    page: &'a SSPage,
    column: Option<GenId>,
    name: String,
    coaction: BTreeMap<ClassKey, BTreeMap<CoTerm<ClassKey>, u32>>,
}

impl<'a> HomologyComodule<'a> {
    pub fn new(base: &'a AlgComodule, column: Option<GenId>, page: &'a SSPage) -> Result<Self, SsError> {
        let f = base.hopf.field();
        let alg = &base.alg;
        let keys: Vec<ClassKey> = page
            .cells
            .iter()
            .filter(|(k, _)| k.1 <= page.max)
            .flat_map(|(k, c)| (0..c.dim()).map(move |idx| ClassKey { deg: k.1, col: k.0, idx }))
            .collect();
        let coaction = keys
            .par_iter()
            .map(|key| {
                let cell = &page.cells[&(key.col, key.deg)];
                let mut groups: BTreeMap<(Monomial, Monomial), BTreeMap<Monomial, u32>> = BTreeMap::new();
                for &(i, c) in &cell.reps[key.idx] {
                    for (t, &v) in &base.coact(&cell.basis[i])? {
                        add_into(groups.entry((t.a.clone(), t.scalar.clone())).or_default(), f, t.m.clone(), f.mul(c, v));
                    }
                }
                let mut out = BTreeMap::new();
                for ((a, scalar), terms) in groups {
                    let e = alg.from_terms(terms);
                    if e.is_zero() {
                        continue;
                    }
                    let parts = page.classes_of(alg, column, &e).ok_or(SsError::NotCycle {
                        r: page.r,
                        col: key.col,
                        deg: key.deg,
                    })?;
                    for ((col, deg), coords) in parts {
                        for (idx, c) in coords {
                            add_into(&mut out, f, CoTerm { a: a.clone(), scalar: scalar.clone(), m: ClassKey { deg, col, idx } }, c);
                        }
                    }
                }
                Ok((*key, out))
            })
            .collect::<Result<_, SsError>>()?;
        Ok(HomologyComodule { base, page, column, name: format!("H({})", base.name), coaction })
    }

    pub fn page(&self) -> &SSPage {
        self.page
    }

    pub fn rep(&self, k: &ClassKey) -> Element {
        let cell = &self.page.cells[&(k.col, k.deg)];
        cell.element(&self.base.alg, &cell.reps[k.idx])
    }

    /// Class coordinates of a cycle of the base algebra.
    pub fn class_of(&self, e: &Element) -> Option<Vec<(ClassKey, u32)>> {
        let parts = self.page.classes_of(&self.base.alg, self.column, e)?;
        Some(
            parts
                .into_iter()
                .flat_map(|((col, deg), coords)| coords.into_iter().map(move |(idx, c)| (ClassKey { deg, col, idx }, c)))
                .collect(),
        )
    }
}

impl Comodule for HomologyComodule<'_> {
    type Key = ClassKey;

    fn hopf(&self) -> &Hopf {
        &self.base.hopf
    }
    fn name(&self) -> &str {
        &self.name
    }
    fn degree_cap(&self) -> i64 {
        self.page.max
    }
    fn key_degree(&self, k: &ClassKey) -> i64 {
        k.deg
    }
    fn basis(&self, d: i64) -> Result<Vec<ClassKey>, ComodError> {
        Ok(self.coaction.keys().filter(|k| k.deg == d).copied().collect())
    }
    fn coact(&self, k: &ClassKey) -> Result<BTreeMap<CoTerm<ClassKey>, u32>, ComodError> {
        self.coaction.get(k).cloned().ok_or_else(|| ComodError::Invalid(format!("no class {k:?}")))
    }
    fn fmt_key(&self, k: &ClassKey) -> String {
        let e = self.rep(k);
        if e.len() == 1 {
            self.base.alg.fmt_element(&e)
        } else {
            format!("({})", self.base.alg.fmt_element(&e))
        }
    }
    fn min_degree(&self) -> i64 {
        self.page.min
    }
}

// ---------------------------------------------------------------------------
// Comparisons.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Poly,
    Ext,
    /// x^h = 0
    Trunc(u32),
    /// Γ(x): one class γ_n(x) for every n ≥ 0
    Divided,
}

/// A factor of a described algebra, placed in a bidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub at: Bideg,
    pub kind: FactorKind,
}

/// F_p{classes} ⊗ ⊗factors; an empty class list means {1}.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summand {
    pub classes: Vec<(String, Bideg)>,
    pub factors: Vec<Factor>,
}

/// An additive description of a bigraded vector space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Description {
    pub summands: Vec<Summand>,
}

impl Description {
    /// Dimensions in degrees `[min, max]`.
    pub fn dims(&self, min: i64, max: i64) -> BTreeMap<Bideg, u64> {
        let mut out = BTreeMap::new();
        for s in &self.summands {
            let classes: Vec<Bideg> = if s.classes.is_empty() { vec![(0, 0)] } else { s.classes.iter().map(|c| c.1).collect() };
            let neg_total: i64 = s.factors.iter().map(neg_reach).sum();
            let low_classes = classes.iter().map(|c| c.1).min().unwrap_or(0);
            let mut acc: BTreeMap<Bideg, u64> = BTreeMap::new();
            acc.insert((0, 0), 1);
            let mut neg_left = neg_total;
            for fac in &s.factors {
                neg_left -= neg_reach(fac);
                let mut next: BTreeMap<Bideg, u64> = BTreeMap::new();
                for (&(c, d), &n) in &acc {
                    let mut e = 0u32;
                    loop {
                        if let Some(h) = bound(fac) {
                            if e >= h {
                                break;
                            }
                        }
                        let cd = (c + fac.at.0 * e as i64, d + fac.at.1 * e as i64);
                        // remaining factors can only lower the degree by neg_left
                        if fac.at.1 > 0 && cd.1 + neg_left + low_classes > max {
                            break;
                        }
                        *next.entry(cd).or_insert(0) += n;
                        e += 1;
                        if fac.at.1 <= 0 && bound(fac).is_none() {
                            break;
                        }
                    }
                }
                acc = next;
            }
            for cl in &classes {
                for (&(c, d), &n) in &acc {
                    let k = (c + cl.0, d + cl.1);
                    if k.1 >= min && k.1 <= max {
                        *out.entry(k).or_insert(0) += n;
                    }
                }
            }
        }
        out.retain(|_, n| *n > 0);
        out
    }
}

fn bound(f: &Factor) -> Option<u32> {
    match f.kind {
        FactorKind::Poly | FactorKind::Divided => None,
        FactorKind::Ext => Some(2),
        FactorKind::Trunc(h) => Some(h),
    }
}

fn neg_reach(f: &Factor) -> i64 {
    if f.at.1 >= 0 {
        return 0;
    }
    match bound(f) {
        Some(h) => f.at.1 * (h as i64 - 1),
        None => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareReport {
    pub window: (i64, i64),
    /// (bidegree, engine, expected)
    pub mismatches: Vec<(Bideg, u64, u64)>,
    pub compared: usize,
}

impl PoincareReport {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare two dimension tables on degrees `[min, max]`.
pub fn compare_dims(got: &BTreeMap<Bideg, u64>, want: &BTreeMap<Bideg, u64>, min: i64, max: i64) -> PoincareReport {
    let keys: BTreeSet<Bideg> = got.keys().chain(want.keys()).filter(|k| k.1 >= min && k.1 <= max).copied().collect();
    let mut mismatches = Vec::new();
    for k in &keys {
        let (g, w) = (got.get(k).copied().unwrap_or(0), want.get(k).copied().unwrap_or(0));
        if g != w {
            mismatches.push((*k, g, w));
        }
    }
    PoincareReport { window: (min, max), mismatches, compared: keys.len() }
}

/// Page dimensions against a description in degrees `[min, max]`.
pub fn compare_poincare(page: &SSPage, expected: &Description, min: i64, max: i64) -> PoincareReport {
    compare_dims(&page.dims(), &expected.dims(min, max), min, max)
}

// ---------------------------------------------------------------------------
// Degree audits.

/// A factor available to a congruence audit; `max_exp: None` is unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditFactor {
    pub name: String,
    pub degree: i64,
    pub max_exp: Option<u32>,
}

impl AuditFactor {
    pub fn new(name: &str, degree: i64, max_exp: Option<u32>) -> Self {
        AuditFactor { name: name.to_string(), degree, max_exp }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub modulus: i64,
    /// Residues reachable by admissible monomials, ascending.
    pub reachable: Vec<i64>,
    /// A forbidden residue that is reached, with the fewest-factor monomial reaching it.
    pub witness: Option<(i64, Vec<(String, u32)>)>,
}

/// Which residues mod `modulus` are degrees of products of `factors`?
/// Dynamic programming over residues; each state keeps the monomial with
/// the fewest factors (ties broken by the exponent vector).
pub fn congruence_audit(factors: &[AuditFactor], modulus: i64, forbidden: &[i64]) -> AuditReport {
    let m = modulus.max(1);
    let mut best: Vec<Option<Vec<u32>>> = vec![None; m as usize];
    best[0] = Some(vec![]);
    for (i, fac) in factors.iter().enumerate() {
        let cap = fac.max_exp.unwrap_or(m as u32).min(m as u32);
        let mut next: Vec<Option<Vec<u32>>> = vec![None; m as usize];
        for r in 0..m {
            let Some(ex) = &best[r as usize] else { continue };
            for e in 0..=cap {
                let r2 = (r + fac.degree.rem_euclid(m) * e as i64).rem_euclid(m) as usize;
                let mut cand = ex.clone();
                cand.resize(i, 0);
                cand.push(e);
                let better = match &next[r2] {
                    None => true,
                    Some(old) => {
                        let (a, b) = (cand.iter().sum::<u32>(), old.iter().sum::<u32>());
                        a < b || a == b && cand < *old
                    }
                };
                if better {
                    next[r2] = Some(cand);
                }
            }
        }
        best = next;
    }
    let reachable: Vec<i64> = (0..m).filter(|&r| best[r as usize].is_some()).collect();
    let mut witness = None;
    for &res in forbidden {
        let r = res.rem_euclid(m);
        if let Some(ex) = &best[r as usize] {
            let mono = factors.iter().zip(ex).filter(|(_, &e)| e > 0).map(|(f, &e)| (f.name.clone(), e)).collect();
            witness = Some((r, mono));
            break;
        }
    }
    AuditReport { modulus: m, reachable, witness }
}

/// A product of `factors` of exactly `degree`, if one exists (fewest factors).
/// Factors of negative degree must be bounded.
pub fn exact_degree_witness(factors: &[AuditFactor], degree: i64) -> Option<Vec<(String, u32)>> {
    let neg: i64 = factors.iter().filter(|f| f.degree < 0).map(|f| f.degree * f.max_exp.unwrap_or(0) as i64).sum();
    let hi = degree - neg;
    let lo = neg.min(0);
    if hi < lo {
        return None;
    }
    let span = (hi - lo + 1) as usize;
    let mut best: Vec<Option<Vec<u32>>> = vec![None; span];
    best[(-lo) as usize] = Some(vec![]);
    for (i, fac) in factors.iter().enumerate() {
        let mut next: Vec<Option<Vec<u32>>> = vec![None; span];
        for (idx, slot) in best.iter().enumerate() {
            let Some(ex) = slot else { continue };
            let d0 = idx as i64 + lo;
            let mut e = 0u32;
            loop {
                let d = d0 + fac.degree * e as i64;
                if d < lo || d > hi || fac.max_exp.is_some_and(|c| e > c) {
                    break;
                }
                let mut cand = ex.clone();
                cand.resize(i, 0);
                cand.push(e);
                let j = (d - lo) as usize;
                let better = match &next[j] {
                    None => true,
                    Some(old) => cand.iter().sum::<u32>() < old.iter().sum::<u32>(),
                };
                if better {
                    next[j] = Some(cand);
                }
                if fac.degree == 0 {
                    break;
                }
                e += 1;
            }
        }
        best = next;
    }
    let ex = best[(degree - lo) as usize].as_ref()?;
    Some(factors.iter().zip(ex).filter(|(_, &e)| e > 0).map(|(f, &e)| (f.name.clone(), e)).collect())
}

/// Largest May filtration of a monomial of degree < `bound`, with a monomial
/// attaining it. Exact knapsack over generators of positive degree.
pub fn max_mfilt_below(alg: &Algebra, bound: i64) -> Option<(u64, Monomial)> {
    if bound <= 0 {
        return None;
    }
    let n = bound as usize;
    // best[d] = (weight, monomial) over monomials of degree exactly d
    let mut best: Vec<Option<(u64, Monomial)>> = vec![None; n];
    best[0] = Some((0, Monomial::one()));
    for (g, gen) in alg.gens().iter().enumerate() {
        if gen.degree <= 0 {
            continue;
        }
        let cap = gen.max_exp().unwrap_or(u32::MAX);
        let mut next = best.clone();
        for d in 0..n {
            let Some((w, m)) = &best[d] else { continue };
            let mut e = 1u32;
            while e <= cap {
                let nd = d as i64 + gen.degree * e as i64;
                if nd >= bound {
                    break;
                }
                let nw = w + gen.may_weight * e as u64;
                let slot = &mut next[nd as usize];
                if slot.as_ref().is_none_or(|(ow, _)| nw > *ow) {
                    let mut mm = m.0.clone();
                    mm.push((g, e));
                    mm.sort();
                    *slot = Some((nw, Monomial(mm)));
                }
                e += 1;
            }
        }
        best = next;
    }
    best.into_iter().flatten().max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
}

/// Per-degree dimension of an unbigraded page, as a `HashMap` for lookups.
pub fn degree_dims(page: &SSPage) -> HashMap<i64, u64> {
    page.total_dims().into_iter().collect()
}
