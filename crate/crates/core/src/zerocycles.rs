//! Finite-set model of zero-cycle nerves: the composition-indexed cochain
//! complex with its rank filtration, the antisymmetric (Banerjee) complex, the
//! antisymmetrization map between them, and punctual homology checks.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homology::{induced_map, nerve_betti, nonzero};
use crate::linalg::{q, SparseMatrix, Q};
use crate::motivic::{LPoly, MotSeries};
use crate::poset::families::{symmetric, Multiset};
use crate::poset::Bound;

/// Above this many basis vectors in total the complexes are not built.
pub const MAX_TOTAL_DIM: usize = 200_000;

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Letters `a, b, c, ...` (then `z10, z11, ...`).
pub fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("z{i}") })
        .collect()
}

/// Compositions with positive parts and `parts` parts summing to at most `cutoff`,
/// in graded lexicographic order.
fn compositions_with_parts(parts: usize, cutoff: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for a in 1..=budget.saturating_sub(left - 1) {
            cur.push(a);
            go(left - 1, budget - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(parts, cutoff, &mut Vec::new(), &mut out);
    out.sort_by_key(|a| (a.iter().sum::<usize>(), a.clone()));
    out
}

/// Multisets of each exact size with index lookup.
struct MultisetTable {
    by_size: Vec<Vec<Multiset>>,
    index: Vec<HashMap<Multiset, usize>>,
}

impl MultisetTable {
    fn new(alphabet: usize, max: usize) -> Self {
        let mut by_size = vec![vec![Multiset(Vec::new())]];
        for s in 1..=max {
            by_size.push(Multiset::all_up_to(alphabet, s).into_iter().filter(|m| m.len() == s).collect());
        }
        let index = by_size.iter().map(|v| v.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()).collect();
        MultisetTable { by_size, index }
    }

    fn count(&self, size: usize) -> usize {
        self.by_size[size].len()
    }
}

/// One summand: a composition and the offset of its points in the degree's basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub composition: Vec<usize>,
    pub offset: usize,
    pub dim: usize,
}

impl Summand {
    pub fn weight(&self) -> usize {
        self.composition.iter().sum()
    }
}

/// Cochain complex: degree `p` is the sum over compositions with `p + 1`
/// positive parts of functions on tuples of multisets of those sizes.
/// `d[p]` maps degree `p` to `p + 1`.
#[derive(Debug, Clone)]
pub struct CompositionComplex {
    alphabet: usize,
    cutoff: usize,
    summands: Vec<Vec<Summand>>,
    d: Vec<SparseMatrix>,
}

/// Decodes a point of `S^a(Z)` into its multisets (row-major order).
fn decode(table: &MultisetTable, a: &[usize], mut idx: usize) -> Vec<Multiset> {
    let mut out = vec![Multiset(Vec::new()); a.len()];
    for i in (0..a.len()).rev() {
        let n = table.count(a[i]);
        out[i] = table.by_size[a[i]][idx % n].clone();
        idx /= n;
    }
    out
}

fn encode(table: &MultisetTable, a: &[usize], point: &[Multiset]) -> usize {
    a.iter().zip(point).fold(0, |acc, (&s, m)| acc * table.count(s) + table.index[s][m])
}

fn merge(x: &Multiset, y: &Multiset) -> Multiset {
    let mut v = x.0.clone();
    v.extend(&y.0);
    Multiset::new(v)
}

/// Total basis size of `skeletal_e1(alphabet, cutoff)`, without building it.
pub fn skeletal_total_dim(alphabet: usize, cutoff: usize) -> u128 {
    let h = |a: usize| crate::cohom::binomial((alphabet + a - 1) as u64, a as u64) as u128;
    (1..=cutoff)
        .flat_map(|parts| compositions_with_parts(parts, cutoff))
        .map(|a| a.iter().map(|&s| h(s)).product::<u128>())
        .sum()
}

pub fn skeletal_e1(alphabet: usize, cutoff: usize) -> Result<CompositionComplex> {
    if alphabet == 0 || cutoff == 0 {
        return Err(Error::InvalidParams("alphabet and cutoff must be positive".into()));
    }
    let table = MultisetTable::new(alphabet, cutoff);
    let mut summands = Vec::new();
    let mut total = 0usize;
    for parts in 1..=cutoff {
        let mut offset = 0;
        let mut deg = Vec::new();
        for a in compositions_with_parts(parts, cutoff) {
            let dim = a.iter().map(|&s| table.count(s)).product::<usize>();
            deg.push(Summand { composition: a, offset, dim });
            offset += dim;
        }
        total += offset;
        if total > MAX_TOTAL_DIM {
            return Err(Error::CostGuard(format!("composition complex exceeds {MAX_TOTAL_DIM} basis vectors")));
        }
        summands.push(deg);
    }
    let lookup: Vec<HashMap<&[usize], &Summand>> =
        summands.iter().map(|deg| deg.iter().map(|s| (s.composition.as_slice(), s)).collect()).collect();

    let mut d = Vec::new();
    for p in 0..summands.len().saturating_sub(1) {
        let rows: usize = summands[p + 1].iter().map(|s| s.dim).sum();
        let cols: usize = summands[p].iter().map(|s| s.dim).sum();
        let mut trips = Vec::new();
        for tgt in &summands[p + 1] {
            let b = &tgt.composition;
            for y in 0..tgt.dim {
                let point = decode(&table, b, y);
                // faces 0..=p merge neighbours, face p + 1 forgets the last coordinate
                for i in 0..=p + 1 {
                    let (a, x) = if i <= p {
                        let mut a = b.clone();
                        a[i] += a.remove(i + 1);
                        let mut x = point.clone();
                        let tail = x.remove(i + 1);
                        x[i] = merge(&x[i], &tail);
                        (a, x)
                    } else {
                        (b[..=p].to_vec(), point[..=p].to_vec())
                    };
                    let src = lookup[p][a.as_slice()];
                    trips.push((tgt.offset + y, src.offset + encode(&table, &a, &x), q(sign(i))));
                }
            }
        }
        d.push(SparseMatrix::from_triplets(rows, cols, trips));
    }
    Ok(CompositionComplex { alphabet, cutoff, summands, d })
}

impl CompositionComplex {
    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Highest degree with a nonzero term (`cutoff - 1`).
    pub fn top_degree(&self) -> usize {
        self.summands.len() - 1
    }

    pub fn summands(&self, p: usize) -> &[Summand] {
        &self.summands[p]
    }

    pub fn dim(&self, p: usize) -> usize {
        self.summands.get(p).map_or(0, |s| s.iter().map(|x| x.dim).sum())
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top_degree()).map(|p| self.dim(p)).collect()
    }

    pub fn differential(&self, p: usize) -> Option<&SparseMatrix> {
        self.d.get(p)
    }

    pub fn d_squared_zero(&self) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Filtration level of each basis vector of degree `p`: `sum(a) - 1`, so
    /// that `Fil^s` is spanned by levels `>= s`.
    pub fn levels(&self, p: usize) -> Vec<usize> {
        self.summands[p].iter().flat_map(|s| std::iter::repeat_n(s.weight() - 1, s.dim)).collect()
    }

    pub fn is_filtered(&self) -> bool {
        (0..self.d.len()).all(|p| {
            let (src, tgt) = (self.levels(p), self.levels(p + 1));
            self.d[p].triplets().all(|(r, c, _)| tgt[r] >= src[c])
        })
    }

    /// Alternating sum of term dimensions restricted to each weight `sum(a)`.
    pub fn euler_by_weight(&self) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for (p, deg) in self.summands.iter().enumerate() {
            for s in deg {
                *out.entry(s.weight()).or_insert(0) += sign(p) * s.dim as i64;
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler_by_weight().values().sum()
    }

    /// Compares `-chi_w` with the coefficients of the inverse of
    /// `sum_k #(multisets of size k) t^k` for `1 <= w <= cutoff`.
    pub fn euler_matches_series_inverse(&self) -> Result<bool> {
        let n = self.cutoff;
        let counts = MotSeries::new(
            (0..=n)
                .map(|k| LPoly::constant(BigInt::from(crate::cohom::binomial((self.alphabet + k) as u64 - 1, k as u64))))
                .collect(),
        );
        let inv = counts.invert()?;
        let chi = self.euler_by_weight();
        Ok((1..=n).all(|w| inv.coeff(w) == &LPoly::constant(-chi.get(&w).copied().unwrap_or(0))))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "alphabet": self.alphabet,
            "cutoff": self.cutoff,
            "dims": self.dims(),
            "summands": self.summands.iter().enumerate().map(|(p, deg)| json!({
                "degree": p,
                "compositions": deg.iter().map(|s| json!({"a": s.composition, "dim": s.dim})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "d_squared_zero": self.d_squared_zero(),
            "euler_by_weight": self.euler_by_weight().iter().map(|(w, c)| (w.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// Antisymmetric functions on `Z^{p+1}`, basis indexed by increasing tuples
/// (the value at that sorted tuple). `d[p]` maps degree `p` to `p + 1`.
#[derive(Debug, Clone)]
pub struct BanerjeeComplexFinite {
    alphabet: usize,
    top: usize,
    bases: Vec<Vec<Vec<usize>>>,
    d: Vec<SparseMatrix>,
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    Multiset::all_up_to(n, size).into_iter().filter(|m| m.len() == size && m.is_set()).map(|m| m.0).collect()
}

/// Banerjee complex in degrees `0..=top`.
pub fn banerjee_finite(alphabet: usize, top: usize) -> Result<BanerjeeComplexFinite> {
    if alphabet == 0 {
        return Err(Error::InvalidParams("alphabet must be nonempty".into()));
    }
    let bases: Vec<Vec<Vec<usize>>> = (0..=top).map(|p| subsets(alphabet, p + 1)).collect();
    let mut d = Vec::new();
    for p in 0..top {
        let index: HashMap<&[usize], usize> = bases[p].iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let mut trips = Vec::new();
        for (r, big) in bases[p + 1].iter().enumerate() {
            for i in 0..big.len() {
                let mut small = big.clone();
                small.remove(i);
                trips.push((r, index[small.as_slice()], q(sign(i))));
            }
        }
        d.push(SparseMatrix::from_triplets(bases[p + 1].len(), bases[p].len(), trips));
    }
    Ok(BanerjeeComplexFinite { alphabet, top, bases, d })
}

impl BanerjeeComplexFinite {
    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn top_degree(&self) -> usize {
        self.top
    }

    pub fn dim(&self, p: usize) -> usize {
        self.bases.get(p).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn differential(&self, p: usize) -> Option<&SparseMatrix> {
        self.d.get(p)
    }

    pub fn d_squared_zero(&self) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }
}

/// Parity of the permutation sorting `v` (entries distinct).
fn inversion_sign(v: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    sign(inv)
}

/// Per-weight comparison of graded pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceReport {
    /// Filtration level `s`; the piece consists of compositions of `s + 1`.
    pub level: usize,
    pub source_dims: Vec<usize>,
    pub source_ranks: Vec<usize>,
    pub source_cohomology: Vec<usize>,
    pub target_dim: usize,
    pub quasi_iso: bool,
}

#[derive(Debug, Clone)]
pub struct AsymReport {
    /// `maps[p]`: degree `p` of the composition complex to degree `p` of the
    /// Banerjee complex.
    pub maps: Vec<SparseMatrix>,
    pub chain_map: bool,
    pub filtered: bool,
    pub pieces: Vec<PieceReport>,
    pub total_quasi_iso: bool,
}

impl AsymReport {
    pub fn filtered_quasi_iso(&self) -> bool {
        self.chain_map && self.filtered && self.pieces.iter().all(|p| p.quasi_iso) && self.total_quasi_iso
    }

    pub fn to_json(&self) -> Value {
        json!({
            "chain_map": self.chain_map,
            "filtered": self.filtered,
            "total_quasi_iso": self.total_quasi_iso,
            "filtered_quasi_iso": self.filtered_quasi_iso(),
            "pieces": self.pieces.iter().map(|p| json!({
                "level": p.level,
                "source_dims": p.source_dims,
                "source_ranks": p.source_ranks,
                "source_cohomology": p.source_cohomology,
                "target_dim": p.target_dim,
                "quasi_iso": p.quasi_iso,
            })).collect::<Vec<_>>(),
        })
    }
}

fn restrict(m: &SparseMatrix, rows: &[usize], cols: &[usize]) -> SparseMatrix {
    let r: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let c: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let trips: Vec<(usize, usize, Q)> = m
        .triplets()
        .filter_map(|(i, j, v)| Some((*r.get(&i)?, *c.get(&j)?, v.clone())))
        .collect();
    SparseMatrix::from_triplets(rows.len(), cols.len(), trips)
}

/// A cochain complex on degrees `0..dims.len()`; `d[p]` maps `p` to `p + 1`.
struct Cochains<'a> {
    dims: Vec<usize>,
    d: Vec<&'a SparseMatrix>,
}

fn block(top_left: &SparseMatrix, top_right: Option<&SparseMatrix>, bottom_left: &SparseMatrix, bottom_right: Option<&SparseMatrix>, rows: (usize, usize), cols: (usize, usize)) -> SparseMatrix {
    let mut trips: Vec<(usize, usize, Q)> = Vec::new();
    trips.extend(top_left.triplets().map(|(r, c, v)| (r, c, v.clone())));
    if let Some(m) = top_right {
        trips.extend(m.triplets().map(|(r, c, v)| (r, cols.0 + c, v.clone())));
    }
    trips.extend(bottom_left.triplets().map(|(r, c, v)| (rows.0 + r, c, v.clone())));
    if let Some(m) = bottom_right {
        trips.extend(m.triplets().map(|(r, c, v)| (rows.0 + r, cols.0 + c, v.clone())));
    }
    SparseMatrix::from_triplets(rows.0 + rows.1, cols.0 + cols.1, trips)
}

/// `f` is a quasi-isomorphism iff its mapping cone
/// `Cone^n = A^{n+1} + B^n`, `d(a, b) = (-d a, f a + d b)`, is acyclic.
fn cone_acyclic(a: &Cochains, b: &Cochains, f: &[SparseMatrix]) -> bool {
    let top = a.dims.len().max(b.dims.len());
    let adim = |n: usize| a.dims.get(n).copied().unwrap_or(0);
    let bdim = |n: usize| b.dims.get(n).copied().unwrap_or(0);
    // cone degree n stored at slot n + 1, for n in -1..top
    let cone_dim = |slot: usize| adim(slot) + if slot >= 1 { bdim(slot - 1) } else { 0 };
    let mut ranks = Vec::new();
    for slot in 0..=top {
        // map from cone slot to slot + 1: A^{slot} + B^{slot-1} -> A^{slot+1} + B^{slot}
        let neg_da = match a.d.get(slot) {
            Some(m) => SparseMatrix::from_triplets(m.nrows(), m.ncols(), m.triplets().map(|(r, c, v)| (r, c, -v.clone()))),
            None => SparseMatrix::zeros(adim(slot + 1), adim(slot)),
        };
        let fa = f.get(slot).cloned().unwrap_or_else(|| SparseMatrix::zeros(bdim(slot), adim(slot)));
        let db = if slot >= 1 { b.d.get(slot - 1).map(|m| (*m).clone()) } else { None };
        let db = db.unwrap_or_else(|| SparseMatrix::zeros(bdim(slot), if slot >= 1 { bdim(slot - 1) } else { 0 }));
        let zero_tr = SparseMatrix::zeros(adim(slot + 1), if slot >= 1 { bdim(slot - 1) } else { 0 });
        let m = block(&neg_da, Some(&zero_tr), &fa, Some(&db), (adim(slot + 1), bdim(slot)), (adim(slot), if slot >= 1 { bdim(slot - 1) } else { 0 }));
        ranks.push(m.rank());
    }
    (0..=top).all(|slot| cone_dim(slot) == ranks[slot] + if slot >= 1 { ranks[slot - 1] } else { 0 })
}

/// Antisymmetrization on the all-ones summands, zero elsewhere, with the
/// chain-map, filtration and per-piece quasi-isomorphism checks.
pub fn asym(e: &CompositionComplex, b: &BanerjeeComplexFinite) -> Result<AsymReport> {
    if e.alphabet != b.alphabet || e.top_degree() != b.top_degree() {
        return Err(Error::CutoffMismatch(format!(
            "composition complex on {} letters up to degree {}, Banerjee complex on {} letters up to degree {}",
            e.alphabet,
            e.top_degree(),
            b.alphabet,
            b.top_degree()
        )));
    }
    let table = MultisetTable::new(e.alphabet, 1);
    let top = e.top_degree();
    let mut maps = Vec::new();
    for p in 0..=top {
        let index: HashMap<&[usize], usize> = b.bases[p].iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let ones = vec![1; p + 1];
        let mut trips = Vec::new();
        if let Some(s) = e.summands[p].iter().find(|s| s.composition == ones) {
            for y in 0..s.dim {
                let tuple: Vec<usize> = decode(&table, &ones, y).into_iter().map(|m| m.0[0]).collect();
                let mut sorted = tuple.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    continue;
                }
                trips.push((index[sorted.as_slice()], s.offset + y, q(inversion_sign(&tuple))));
            }
        }
        maps.push(SparseMatrix::from_triplets(b.dim(p), e.dim(p), trips));
    }

    let chain_map = (0..top).all(|p| maps[p + 1].mul(&e.d[p]) == b.d[p].mul(&maps[p]));
    let filtered = (0..=top).all(|p| {
        let lv = e.levels(p);
        maps[p].triplets().all(|(_, c, _)| p >= lv[c])
    });

    let mut pieces = Vec::new();
    for level in 0..e.cutoff {
        let w = level + 1;
        let idx: Vec<Vec<usize>> = (0..=top)
            .map(|p| {
                e.summands[p]
                    .iter()
                    .filter(|s| s.weight() == w)
                    .flat_map(|s| s.offset..s.offset + s.dim)
                    .collect()
            })
            .collect();
        let d: Vec<SparseMatrix> = (0..top).map(|p| restrict(&e.d[p], &idx[p + 1], &idx[p])).collect();
        let source_dims: Vec<usize> = idx.iter().map(Vec::len).collect();
        let source_ranks: Vec<usize> = d.iter().map(SparseMatrix::rank).collect();
        let source_cohomology: Vec<usize> = (0..=top)
            .map(|p| source_dims[p] - source_ranks.get(p).copied().unwrap_or(0) - if p > 0 { source_ranks[p - 1] } else { 0 })
            .collect();
        // the target piece is B^level in degree level, zero differential
        let target_dims: Vec<usize> = (0..=top).map(|p| if p == level { b.dim(p) } else { 0 }).collect();
        let zeros: Vec<SparseMatrix> = (0..top).map(|p| SparseMatrix::zeros(target_dims[p + 1], target_dims[p])).collect();
        let f: Vec<SparseMatrix> = (0..=top)
            .map(|p| {
                let rows: Vec<usize> = if p == level { (0..b.dim(p)).collect() } else { Vec::new() };
                restrict(&maps[p], &rows, &idx[p])
            })
            .collect();
        let quasi_iso = cone_acyclic(
            &Cochains { dims: source_dims.clone(), d: d.iter().collect() },
            &Cochains { dims: target_dims, d: zeros.iter().collect() },
            &f,
        );
        pieces.push(PieceReport { level, source_dims, source_ranks, source_cohomology, target_dim: b.dim(level), quasi_iso });
    }

    let total_quasi_iso = cone_acyclic(
        &Cochains { dims: e.dims(), d: e.d.iter().collect() },
        &Cochains { dims: b.dims(), d: b.d.iter().collect() },
        &maps,
    );
    Ok(AsymReport { maps, chain_map, filtered, pieces, total_quasi_iso })
}

/// Convenience: both complexes and the comparison for one alphabet and cutoff.
pub fn skeletal_compare(alphabet: usize, cutoff: usize) -> Result<(CompositionComplex, AsymReport)> {
    let e = skeletal_e1(alphabet, cutoff)?;
    let b = banerjee_finite(alphabet, e.top_degree())?;
    let r = asym(&e, &b)?;
    Ok((e, r))
}

/// Permutations of `0..n` as lookup tables, composed as functions.
type Perm = Vec<usize>;

fn compose(f: &[usize], g: &[usize]) -> Perm {
    g.iter().map(|&x| f[x]).collect()
}

/// Cycle `(c_0 c_1 ... c_m)`: `c_0 -> c_1 -> ... -> c_m -> c_0`.
fn cycle(n: usize, c: &[usize]) -> Perm {
    let mut out: Perm = (0..n).collect();
    for k in 0..c.len() {
        out[c[k]] = c[(k + 1) % c.len()];
    }
    out
}

fn permutations(n: usize) -> Vec<Perm> {
    fn go(cur: &mut Perm, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `sigma` acting on tuples by moving the entry in position `k` to `sigma(k)`.
fn act(sigma: &[usize], z: &[usize]) -> Vec<usize> {
    let mut out = vec![0; z.len()];
    for (k, &x) in z.iter().enumerate() {
        out[sigma[k]] = x;
    }
    out
}

fn forget(i: usize, z: &[usize]) -> Vec<usize> {
    let mut v = z.to_vec();
    v.remove(i);
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub p: usize,
    pub cases: usize,
    pub failures: Vec<(Perm, usize)>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every `sigma` on `{0..p}` and every `i`, with `j = sigma(i)`:
/// `tau = (p p-1 ... j) sigma (i i+1 ... p)` fixes `p`, and forgetting
/// coordinate `j` after `sigma` equals `tau` after forgetting coordinate `i`.
pub fn lemma_check(p: usize) -> LemmaReport {
    let n = p + 1;
    let z: Vec<usize> = (0..n).collect();
    let mut cases = 0;
    let mut failures = Vec::new();
    for sigma in permutations(n) {
        for i in 0..n {
            cases += 1;
            let j = sigma[i];
            let down: Vec<usize> = (j..=p).rev().collect();
            let up: Vec<usize> = (i..=p).collect();
            let tau = compose(&cycle(n, &down), &compose(&sigma, &cycle(n, &up)));
            let ok = tau[p] == p && forget(j, &act(&sigma, &z)) == act(&tau[..p], &forget(i, &z));
            if !ok {
                failures.push((sigma.clone(), i));
            }
        }
    }
    LemmaReport { p, cases, failures }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PunctualReport {
    pub multiset: String,
    pub is_set: bool,
    pub interval_size: usize,
    pub reduced_betti: BTreeMap<i64, usize>,
    /// Action of each adjacent transposition of the letters of a set, on the
    /// one-dimensional reduced homology.
    pub transpositions: Vec<((String, String), Q)>,
    pub passes: bool,
}

impl PunctualReport {
    pub fn to_json(&self) -> Value {
        json!({
            "multiset": self.multiset,
            "is_set": self.is_set,
            "interval_size": self.interval_size,
            "reduced_betti": self.reduced_betti.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "transpositions": self.transpositions.iter().map(|((a, b), v)| json!({"swap": [a, b], "acts_by": crate::motivic::rational_json(v)})).collect::<Vec<_>>(),
            "passes": self.passes,
        })
    }
}

/// Sub-multisets of `t` other than the empty one and `t` itself.
fn proper_submultisets(t: &Multiset, alphabet: usize) -> Vec<Multiset> {
    Multiset::all_up_to(alphabet, t.len().saturating_sub(1)).into_iter().filter(|m| m.is_sub(t)).collect()
}

/// Reduced homology of the open interval below `t` in the multiset poset.
pub fn punctual_graded_check(t: &Multiset, alphabet: usize) -> Result<PunctualReport> {
    if t.is_empty() {
        return Err(Error::InvalidParams("multiset must be nonempty".into()));
    }
    if t.0.iter().any(|&x| x >= alphabet) {
        return Err(Error::InvalidParams("multiset uses letters outside the alphabet".into()));
    }
    let names = letters(alphabet);
    let ambient = symmetric(&names, t.len(), false)?;
    let label = t.label(&names);
    let interval = ambient.interval(&Bound::NegInf, &Bound::elem(label.clone()), true, true)?;
    let subs = proper_submultisets(t, alphabet);
    let betti = nonzero(&nerve_betti(&interval, true));
    let k = t.len() as i64;
    let is_set = t.is_set();

    let mut transpositions = Vec::new();
    let mut passes = interval.len() == subs.len();
    if is_set {
        passes &= betti == BTreeMap::from([(k - 2, 1)]);
        for w in t.0.windows(2) {
            let (x, y) = (w[0], w[1]);
            let swap = |m: &Multiset| Multiset::new(m.0.iter().map(|&c| if c == x { y } else if c == y { x } else { c }).collect());
            let f: Vec<usize> = (0..interval.len())
                .map(|i| {
                    let m = subs.iter().find(|m| m.label(&names) == interval.id(i)).expect("interval elements are sub-multisets");
                    interval.index_of(&swap(m).label(&names))
                })
                .collect::<Result<_>>()?;
            let h = induced_map(&interval, &interval, &f, true)?;
            let action = h.homology.get(&(k - 2)).filter(|m| m.rows() == 1 && m.cols() == 1).map(|m| m.get(0, 0).clone());
            let action = action.unwrap_or_else(Q::zero);
            passes &= h.commutes && action == -Q::one();
            transpositions.push(((names[x].clone(), names[y].clone()), action));
        }
    } else {
        passes &= betti.is_empty();
    }
    Ok(PunctualReport { multiset: label, is_set, interval_size: interval.len(), reduced_betti: betti, transpositions, passes })
}
