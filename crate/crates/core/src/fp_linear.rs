//! Arithmetic in F_p and sparse column elimination.
//!
//! Every rank, kernel and membership decision in the crate goes through
//! [`Echelon`]. Pivoting is by first nonzero row in the caller's row order,
//! so results are reproducible run to run.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinearError {
    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: u32, found: u32 },
    #[error("{0} is not a prime modulus")]
    NotPrime(u32),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("inverse of zero in F_{0}")]
    ZeroInverse(u32),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_p. Values are plain `u32` residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, LinearError> {
        if !is_prime(p) {
            return Err(LinearError::NotPrime(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduce any signed integer into `[0, p)`.
    #[inline]
    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32, LinearError> {
        if a.is_multiple_of(self.p) {
            return Err(LinearError::ZeroInverse(self.p));
        }
        Ok(self.pow(a, (self.p - 2) as u64))
    }

    /// Signed representative in `(-p/2, p/2]`, used for display.
    pub fn signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn scalar(self, value: i64) -> FpScalar {
        FpScalar {
            value: self.from_i64(value),
            modulus: self.p,
        }
    }
}

/// A single residue tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    pub value: u32,
    pub modulus: u32,
}

impl FpScalar {
    pub fn new(value: i64, modulus: u32) -> Result<Self, LinearError> {
        Ok(Fp::new(modulus)?.scalar(value))
    }

    fn check(self, other: FpScalar) -> Result<Fp, LinearError> {
        if self.modulus != other.modulus {
            return Err(LinearError::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        Ok(Fp { p: self.modulus })
    }

    pub fn add(self, o: FpScalar) -> Result<FpScalar, LinearError> {
        let f = self.check(o)?;
        Ok(FpScalar { value: f.add(self.value, o.value), modulus: f.p })
    }

    pub fn mul(self, o: FpScalar) -> Result<FpScalar, LinearError> {
        let f = self.check(o)?;
        Ok(FpScalar { value: f.mul(self.value, o.value), modulus: f.p })
    }

    pub fn inv(self) -> Result<FpScalar, LinearError> {
        let f = Fp { p: self.modulus };
        Ok(FpScalar { value: f.inv(self.value)?, modulus: f.p })
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Sparse vector: `(index, nonzero value)` pairs sorted by index.
pub type Profile = Vec<(usize, u32)>;

/// Column-major sparse matrix over a single F_p.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    field: Fp,
    nrows: usize,
    cols: Vec<Profile>,
}

impl SparseMatrix {
    pub fn zero(field: Fp, nrows: usize, ncols: usize) -> Self {
        SparseMatrix { field, nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for (i, c) in m.cols.iter_mut().enumerate() {
            c.push((i, 1));
        }
        m
    }

    /// Build from tagged entries; every entry must carry the same modulus.
    /// Repeated positions are summed.
    pub fn from_entries<I>(modulus: u32, nrows: usize, ncols: usize, entries: I) -> Result<Self, LinearError>
    where
        I: IntoIterator<Item = (usize, usize, FpScalar)>,
    {
        let field = Fp::new(modulus)?;
        let mut dense: Vec<std::collections::BTreeMap<usize, u32>> = vec![Default::default(); ncols];
        for (r, c, v) in entries {
            if v.modulus != modulus {
                return Err(LinearError::ModulusMismatch { expected: modulus, found: v.modulus });
            }
            if r >= nrows {
                return Err(LinearError::IndexOutOfRange { index: r, dim: nrows });
            }
            if c >= ncols {
                return Err(LinearError::IndexOutOfRange { index: c, dim: ncols });
            }
            let e = dense[c].entry(r).or_insert(0);
            *e = field.add(*e, v.value);
        }
        let cols = dense
            .into_iter()
            .map(|m| m.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        Ok(SparseMatrix { field, nrows, cols })
    }

    /// Build from integer rows (row-major), reducing mod p.
    pub fn from_rows(field: Fp, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(field, nrows, ncols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                let v = field.from_i64(x);
                if v != 0 {
                    m.cols[c].push((r, v));
                }
            }
        }
        m
    }

    /// Append a column given as a sparse profile (indices must be < nrows).
    pub fn push_column(&mut self, mut col: Profile) -> Result<(), LinearError> {
        col.sort_unstable_by_key(|e| e.0);
        col.retain(|&(_, v)| v % self.field.p != 0);
        if let Some(&(r, _)) = col.iter().find(|&&(r, _)| r >= self.nrows) {
            return Err(LinearError::IndexOutOfRange { index: r, dim: self.nrows });
        }
        self.cols.push(col);
        Ok(())
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }
    pub fn column(&self, c: usize) -> &Profile {
        &self.cols[c]
    }

    /// Matrix-vector product for a profile over the column index set.
    pub fn apply(&self, x: &Profile) -> Result<Profile, LinearError> {
        let f = self.field;
        let mut acc = vec![0u32; self.nrows];
        for &(c, v) in x {
            if c >= self.cols.len() {
                return Err(LinearError::IndexOutOfRange { index: c, dim: self.cols.len() });
            }
            for &(r, a) in &self.cols[c] {
                acc[r] = f.add(acc[r], f.mul(a, v));
            }
        }
        Ok(dense_to_profile(&acc))
    }

    /// Same matrix with rows renumbered by `perm` (row r goes to perm[r]).
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|c| {
                let mut v: Profile = c.iter().map(|&(r, x)| (perm[r], x)).collect();
                v.sort_unstable_by_key(|e| e.0);
                v
            })
            .collect();
        SparseMatrix { field: self.field, nrows: self.nrows, cols }
    }
}

pub fn dense_to_profile(v: &[u32]) -> Profile {
    v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect()
}

/// Incremental column echelon form.
///
/// Each inserted vector is reduced against the stored pivots (pivot = first
/// nonzero row). Independent vectors become new pivots; dependent ones
/// report the combination of earlier insertions that produces them.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Fp,
    nrows: usize,
    /// pivot row -> slot in `rows`
    pivot_of_row: Vec<Option<usize>>,
    /// reduced vector (leading coefficient 1) and its combination of inserted ids
    rows: Vec<(Profile, Profile)>,
    inserted: usize,
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert {
    /// New pivot at this row.
    Pivot(usize),
    /// The vector equals this combination of earlier insertions (ids).
    Dependent(Profile),
}

impl Echelon {
    pub fn new(field: Fp, nrows: usize) -> Self {
        Echelon { field, nrows, pivot_of_row: vec![None; nrows], rows: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Pivot rows in insertion order.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(v, _)| v[0].0).collect()
    }

    /// Reduce `v` (dense, modified in place); returns the combination of
    /// inserted ids that was subtracted, as a dense accumulator over ids.
    fn reduce_dense(&self, v: &mut [u32], combo: &mut Vec<u32>) {
        let f = self.field;
        for r in 0..self.nrows {
            let c = v[r];
            if c == 0 {
                continue;
            }
            if let Some(slot) = self.pivot_of_row[r] {
                let (vec, comb) = &self.rows[slot];
                for &(i, a) in vec {
                    v[i] = f.sub(v[i], f.mul(c, a));
                }
                for &(j, a) in comb {
                    if combo.len() <= j {
                        combo.resize(j + 1, 0);
                    }
                    combo[j] = f.add(combo[j], f.mul(c, a));
                }
            }
        }
    }

    /// Insert a vector; returns its id (insertion index) and the outcome.
    pub fn insert(&mut self, v: &Profile) -> (usize, Insert) {
        let f = self.field;
        let id = self.inserted;
        self.inserted += 1;
        let mut dense = vec![0u32; self.nrows];
        for &(i, a) in v {
            dense[i] = f.add(dense[i], a % f.p);
        }
        let mut combo = Vec::new();
        self.reduce_dense(&mut dense, &mut combo);
        match dense.iter().position(|&x| x != 0) {
            None => (id, Insert::Dependent(dense_to_profile(&combo))),
            Some(r) => {
                // v - combo·(earlier) = residual, so residual/lead has combination (e_id - combo)/lead
                let inv = f.inv(dense[r]).expect("nonzero lead");
                let vec: Profile = dense_to_profile(&dense).into_iter().map(|(i, a)| (i, f.mul(a, inv))).collect();
                if combo.len() <= id {
                    combo.resize(id + 1, 0);
                }
                let mut comb: Vec<u32> = combo.iter().map(|&a| f.neg(a)).collect();
                comb[id] = f.add(comb[id], 1);
                let comb: Profile = dense_to_profile(&comb).into_iter().map(|(i, a)| (i, f.mul(a, inv))).collect();
                self.pivot_of_row[r] = Some(self.rows.len());
                self.rows.push((vec, comb));
                (id, Insert::Pivot(r))
            }
        }
    }

    /// Express `v` in terms of inserted ids, if it lies in their span.
    pub fn express(&self, v: &Profile) -> Option<Profile> {
        let f = self.field;
        let mut dense = vec![0u32; self.nrows];
        for &(i, a) in v {
            dense[i] = f.add(dense[i], a % f.p);
        }
        let mut combo = Vec::new();
        self.reduce_dense(&mut dense, &mut combo);
        if dense.iter().any(|&x| x != 0) {
            None
        } else {
            Some(dense_to_profile(&combo))
        }
    }

    /// Reduce `v` modulo the span; returns the residual.
    pub fn residual(&self, v: &Profile) -> Profile {
        let mut dense = vec![0u32; self.nrows];
        for &(i, a) in v {
            dense[i] = self.field.add(dense[i], a % self.field.p);
        }
        let mut combo = Vec::new();
        self.reduce_dense(&mut dense, &mut combo);
        dense_to_profile(&dense)
    }

    /// Reduced basis vectors (leading coefficient 1), in insertion order.
    pub fn basis(&self) -> Vec<Profile> {
        self.rows.iter().map(|(v, _)| v.clone()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct RrefResult {
    pub rank: usize,
    /// Original column indices that carry pivots.
    pub pivot_columns: Vec<usize>,
    /// Those columns themselves, a basis of the column span.
    pub image_basis: Vec<Profile>,
    /// Kernel profiles over the column index set.
    pub kernel_basis: Vec<Profile>,
}

pub fn rref(m: &SparseMatrix) -> RrefResult {
    let mut ech = Echelon::new(m.field, m.nrows);
    let mut pivot_columns = Vec::new();
    let mut kernel_basis = Vec::new();
    let f = m.field;
    for c in 0..m.ncols() {
        match ech.insert(&m.cols[c]).1 {
            Insert::Pivot(_) => pivot_columns.push(c),
            Insert::Dependent(combo) => {
                let mut k: Profile = combo.into_iter().map(|(j, a)| (j, f.neg(a))).collect();
                k.push((c, 1));
                k.sort_unstable_by_key(|e| e.0);
                kernel_basis.push(k);
            }
        }
    }
    RrefResult {
        rank: pivot_columns.len(),
        image_basis: pivot_columns.iter().map(|&c| m.cols[c].clone()).collect(),
        pivot_columns,
        kernel_basis,
    }
}

/// Find `x` with `m·x = target`, or `None` if the target is outside the span.
pub fn solve_membership(m: &SparseMatrix, target: &Profile) -> Result<Option<Profile>, LinearError> {
    if let Some(&(r, _)) = target.iter().find(|&&(r, _)| r >= m.nrows) {
        return Err(LinearError::IndexOutOfRange { index: r, dim: m.nrows });
    }
    let mut ech = Echelon::new(m.field, m.nrows);
    for c in &m.cols {
        ech.insert(c);
    }
    Ok(ech.express(target))
}

/// Decide whether `λ·target` is in the span for some nonzero λ.
///
/// Membership is linear, so any witness scales back to λ = 1; the loop over
/// λ is kept explicit so the decision mirrors the up-to-unit reading.
pub fn solve_membership_up_to_scalar(
    m: &SparseMatrix,
    target: &Profile,
) -> Result<Option<(FpScalar, Profile)>, LinearError> {
    let f = m.field;
    if let Some(&(r, _)) = target.iter().find(|&&(r, _)| r >= m.nrows) {
        return Err(LinearError::IndexOutOfRange { index: r, dim: m.nrows });
    }
    let mut ech = Echelon::new(f, m.nrows);
    for c in &m.cols {
        ech.insert(c);
    }
    for lambda in 1..f.p {
        let scaled: Profile = target.iter().map(|&(i, a)| (i, f.mul(a, lambda))).collect();
        if let Some(x) = ech.express(&scaled) {
            return Ok(Some((f.scalar(lambda as i64), x)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn field_basics() {
        let f = f5();
        assert_eq!(f.inv(2).unwrap(), 3);
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.signed(4), -1);
        assert!(Fp::new(9).is_err());
        assert!(f.inv(0).is_err());
    }

    #[test]
    fn zero_and_identity() {
        let z = SparseMatrix::zero(f5(), 3, 3);
        let r = rref(&z);
        assert_eq!((r.rank, r.kernel_basis.len()), (0, 3));
        let id = SparseMatrix::identity(f5(), 4);
        let r = rref(&id);
        assert_eq!((r.rank, r.kernel_basis.len()), (4, 0));
    }

    #[test]
    fn rank_one_kernel() {
        let m = SparseMatrix::from_rows(f5(), &[vec![1, 2], vec![2, 4]]);
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel_basis.len(), 1);
        let k = &r.kernel_basis[0];
        // normalized so the last entry is 1: (3, 1)
        assert_eq!(k, &vec![(0, 3), (1, 1)]);
        // independent oracle: 1·3+2·1 and 2·3+4·1 are both 0 mod 5
        assert_eq!((3 + 2) % 5, 0);
        assert_eq!((6 + 4) % 5, 0);
        assert!(m.apply(k).unwrap().is_empty());
    }

    #[test]
    fn membership() {
        let id = SparseMatrix::identity(f5(), 2);
        assert_eq!(solve_membership(&id, &vec![]).unwrap(), Some(vec![]));
        assert_eq!(solve_membership(&id, &vec![(0, 2), (1, 3)]).unwrap(), Some(vec![(0, 2), (1, 3)]));
        let m = SparseMatrix::from_rows(f5(), &[vec![1], vec![0]]);
        assert_eq!(solve_membership(&m, &vec![(1, 1)]).unwrap(), None);
        assert!(solve_membership(&m, &vec![(7, 1)]).is_err());
        let (lam, x) = solve_membership_up_to_scalar(&m, &vec![(0, 2)]).unwrap().unwrap();
        assert_eq!(lam.value, 1);
        assert_eq!(m.apply(&x).unwrap(), vec![(0, 2)]);
        assert!(solve_membership_up_to_scalar(&m, &vec![(1, 2)]).unwrap().is_none());
    }

    #[test]
    fn modulus_mismatch() {
        let e = SparseMatrix::from_entries(5, 1, 1, [(0, 0, FpScalar::new(1, 7).unwrap())]);
        assert!(matches!(e, Err(LinearError::ModulusMismatch { .. })));
        let a = FpScalar::new(1, 5).unwrap();
        assert!(a.add(FpScalar::new(1, 7).unwrap()).is_err());
    }
}
