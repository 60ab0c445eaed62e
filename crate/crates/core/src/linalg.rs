//! Exact linear algebra over the rationals.
//!
//! Two representations are provided. [`SparseMatrix`] stores columns as sorted
//! `(row, value)` lists and is what chain complexes use; its rank is computed
//! by fraction-free elimination on integer-scaled columns, first in `i128`
//! with overflow checks and, if any product overflows, again in `BigInt`.
//! [`DenseMatrix`] is a plain row-major rational matrix with reduced row
//! echelon form, used for the small kernel/solve problems that arise when
//! writing down explicit homology bases.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Sparse rational matrix stored by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(usize, Q)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Builds from `(row, col, value)` triples; duplicates are summed and
    /// zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, Q)>) -> Self {
        let mut acc: Vec<HashMap<usize, Q>> = vec![HashMap::new(); ncols];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) out of bounds {nrows}x{ncols}");
            let e = acc[c].entry(r).or_insert_with(Q::zero);
            *e += v;
        }
        let cols = acc
            .into_iter()
            .map(|m| {
                let mut v: Vec<(usize, Q)> = m.into_iter().filter(|(_, x)| !x.is_zero()).collect();
                v.sort_by_key(|(r, _)| *r);
                v
            })
            .collect();
        Self { nrows, ncols, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, c: usize) -> &[(usize, Q)] {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        match self.cols[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(i) => self.cols[c][i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.triplets().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in product");
        let mut cols = Vec::with_capacity(other.ncols);
        for oc in &other.cols {
            let mut acc: HashMap<usize, Q> = HashMap::new();
            for (k, b) in oc {
                for (i, a) in &self.cols[*k] {
                    *acc.entry(*i).or_insert_with(Q::zero) += a * b;
                }
            }
            let mut v: Vec<(usize, Q)> = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            v.sort_by_key(|(r, _)| *r);
            cols.push(v);
        }
        SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            cols,
        }
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![Q::zero(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            if x[c].is_zero() {
                continue;
            }
            for (r, v) in col {
                y[*r] += v * &x[c];
            }
        }
        y
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.block_rank(|_| true, |_| true)
    }

    /// Rank of the sub-matrix on rows and columns selected by the predicates.
    pub fn block_rank(&self, row_ok: impl Fn(usize) -> bool, col_ok: impl Fn(usize) -> bool) -> usize {
        let columns: Vec<Vec<(usize, BigInt)>> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(c, _)| col_ok(*c))
            .map(|(_, col)| integer_scaled(col.iter().filter(|(r, _)| row_ok(*r))))
            .filter(|v| !v.is_empty())
            .collect();
        integer_rank(&columns)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            d.set(r, c, v.clone());
        }
        d
    }
}

/// Scales a rational sparse vector by the lcm of its denominators.
fn integer_scaled<'a>(entries: impl Iterator<Item = &'a (usize, Q)>) -> Vec<(usize, BigInt)> {
    let entries: Vec<&(usize, Q)> = entries.filter(|(_, v)| !v.is_zero()).collect();
    let lcm = entries
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    entries
        .into_iter()
        .map(|(r, v)| (*r, v.numer() * (&lcm / v.denom())))
        .collect()
}

trait ExactInt: Clone + Sized {
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn neg(&self) -> Option<Self>;
}

impl ExactInt for i128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), o.unsigned_abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a as i128
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl ExactInt for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

/// Rank of a set of integer column vectors over Q.
fn integer_rank(columns: &[Vec<(usize, BigInt)>]) -> usize {
    let small: Option<Vec<Vec<(usize, i128)>>> = columns
        .iter()
        .map(|c| c.iter().map(|(r, v)| v.to_i128().map(|x| (*r, x))).collect())
        .collect();
    if let Some(small) = small {
        if let Some(r) = echelon_rank(small) {
            return r;
        }
    }
    echelon_rank(columns.to_vec()).expect("BigInt elimination cannot overflow")
}

/// Incremental echelon form keyed by leading index. Returns `None` if an
/// intermediate product overflows `T`.
fn echelon_rank<T: ExactInt>(vectors: Vec<Vec<(usize, T)>>) -> Option<usize> {
    let mut pivots: HashMap<usize, Vec<(usize, T)>> = HashMap::new();
    for mut v in vectors {
        loop {
            let Some((lead, lead_val)) = v.first().cloned() else {
                break;
            };
            match pivots.get(&lead) {
                Some(p) => {
                    v = combine(&p[0].1, &v, &lead_val, p)?;
                }
                None => {
                    normalize(&mut v);
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// `a * v - b * p`, dropping zeros and dividing out the content.
fn combine<T: ExactInt>(a: &T, v: &[(usize, T)], b: &T, p: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        let take_v = j >= p.len() || (i < v.len() && v[i].0 < p[j].0);
        let take_p = i >= v.len() || (j < p.len() && p[j].0 < v[i].0);
        let (idx, val) = if take_v {
            let r = (v[i].0, a.mul(&v[i].1)?);
            i += 1;
            r
        } else if take_p {
            let r = (p[j].0, b.mul(&p[j].1)?.neg()?);
            j += 1;
            r
        } else {
            let x = a.mul(&v[i].1)?.sub(&b.mul(&p[j].1)?)?;
            let r = (v[i].0, x);
            i += 1;
            j += 1;
            r
        };
        if !val.is_zero() {
            out.push((idx, val));
        }
    }
    normalize(&mut out);
    Some(out)
}

fn normalize<T: ExactInt>(v: &mut [(usize, T)]) {
    if v.is_empty() || v[0].1.is_unit() {
        return;
    }
    let mut g = v[0].1.gcd(&v[0].1);
    for (_, x) in v.iter().skip(1) {
        if g.is_unit() {
            return;
        }
        g = g.gcd(x);
    }
    if g.is_unit() || g.is_zero() {
        return;
    }
    for (_, x) in v.iter_mut() {
        *x = x.div_exact(&g);
    }
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul(&self, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = DenseMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = &out.data[idx] + a * b;
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = self.get(r, c) - &f * self.get(row, c);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b`, returning `None` when inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = DenseMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols).clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_rank_oracle(rows: &[Vec<i64>]) -> usize {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = DenseMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, q(*v));
            }
        }
        m.rank()
    }

    fn sparse(rows: &[Vec<i64>]) -> SparseMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        SparseMatrix::from_triplets(
            rows.len(),
            cols,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, q(*v)))),
        )
    }

    #[test]
    fn ranks_agree_on_small_matrices() {
        let cases = vec![
            vec![vec![1, 2], vec![2, 4]],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]],
            vec![vec![2, 3, 5], vec![7, 11, 13], vec![17, 19, 23]],
        ];
        for c in cases {
            assert_eq!(sparse(&c).rank(), dense_rank_oracle(&c));
        }
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = 1i64 << 62;
        let rows = vec![vec![big, big - 1, 3], vec![big - 1, big, 5], vec![7, 9, big]];
        assert_eq!(sparse(&rows).rank(), 3);
        let dep = vec![vec![big, big - 1, 1], vec![big, big - 1, 1], vec![1, 1, big]];
        assert_eq!(sparse(&dep).rank(), dense_rank_oracle(&dep));
    }

    #[test]
    fn block_rank_selects_submatrix() {
        let m = sparse(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(m.block_rank(|r| r == 0, |_| true), 1);
        assert_eq!(m.block_rank(|r| r == 0, |c| c == 1), 0);
    }

    #[test]
    fn nullspace_and_solve() {
        let mut m = DenseMatrix::zeros(1, 3);
        m.set(0, 0, q(1));
        m.set(0, 1, q(1));
        m.set(0, 2, q(1));
        let ker = m.nullspace();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let s: Q = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
        assert!(m.solve(&[q(3)]).is_some());
        let zero = DenseMatrix::zeros(1, 1);
        assert!(zero.solve(&[q(1)]).is_none());
    }

    proptest::proptest! {
        #[test]
        fn sparse_rank_matches_rref(entries in proptest::collection::vec(-3i64..=3, 20)) {
            let rows: Vec<Vec<i64>> = entries.chunks(5).map(|c| c.to_vec()).collect();
            proptest::prop_assert_eq!(sparse(&rows).rank(), dense_rank_oracle(&rows));
        }
    }
}
