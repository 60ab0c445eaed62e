//! Finite posets, optionally fibered over a finite base set and optionally
//! ranked, together with intervals, centers, retractions and nerves.

pub mod families;
mod io;

pub use families::{Family, Multiset};
pub use io::PosetJson;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// Largest poset we are willing to materialize as a dense relation matrix.
pub const MAX_ELEMENTS: usize = 512;

/// Ids beginning with this character are reserved for sentinels.
pub const RESERVED_PREFIX: char = '#';
pub const NEG_INF: &str = "#-inf";
pub const POS_INF: &str = "#+inf";

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn new(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(64)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn or_assign(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

/// A finite partial order on opaque string ids.
///
/// The relation is stored as a dense bit matrix: `up[a]` holds every `b`
/// with `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<BitRow>,
    base: Option<Vec<String>>,
    rank: Option<Vec<i64>>,
}

/// Endpoint of an interval: an element or one of the formal sentinels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    PosInf,
    Elem(String),
}

impl Bound {
    pub fn elem(id: impl Into<String>) -> Self {
        Bound::Elem(id.into())
    }
}

/// Nondegenerate simplices of the nerve: `simplices[k]` lists the strict
/// chains `a_0 < ... < a_k` as element indices, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveComplex {
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl NerveComplex {
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }
}

/// Result of a fiberwise center search.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiberCenters {
    pub centers: BTreeMap<String, String>,
    pub missing: Vec<String>,
}

impl FiberCenters {
    pub fn all_present(&self) -> bool {
        self.missing.is_empty()
    }
}

impl FinitePoset {
    /// Builds a poset from generating pairs `a <= b`; the reflexive
    /// transitive closure is taken and antisymmetry checked.
    pub fn from_relations<S: AsRef<str>>(
        ids: &[S],
        pairs: &[(S, S)],
        base: Option<Vec<String>>,
        rank: Option<Vec<i64>>,
    ) -> Result<Self> {
        let ids: Vec<String> = ids.iter().map(|s| s.as_ref().to_string()).collect();
        let index = build_index(&ids)?;
        let n = ids.len();
        let mut up: Vec<BitRow> = (0..n).map(|_| BitRow::new(n)).collect();
        for (i, row) in up.iter_mut().enumerate() {
            row.set(i);
        }
        for (a, b) in pairs {
            let ia = lookup(&index, a.as_ref())?;
            let ib = lookup(&index, b.as_ref())?;
            up[ia].set(ib);
        }
        transitive_closure(&mut up);
        Self::assemble(ids, index, up, base, rank)
    }

    /// Builds a poset from an order predicate on indices. The predicate must
    /// already be a partial order; this is verified.
    pub fn from_order_fn(
        ids: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
        base: Option<Vec<String>>,
        rank: Option<Vec<i64>>,
    ) -> Result<Self> {
        let index = build_index(&ids)?;
        let n = ids.len();
        let mut up: Vec<BitRow> = (0..n).map(|_| BitRow::new(n)).collect();
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..n {
                if a == b || leq(a, b) {
                    row.set(b);
                }
            }
        }
        let mut closed = up.clone();
        transitive_closure(&mut closed);
        if closed != up {
            return Err(Error::InvalidPoset("relation is not transitive".into()));
        }
        Self::assemble(ids, index, up, base, rank)
    }

    fn assemble(
        ids: Vec<String>,
        index: HashMap<String, usize>,
        up: Vec<BitRow>,
        base: Option<Vec<String>>,
        rank: Option<Vec<i64>>,
    ) -> Result<Self> {
        let n = ids.len();
        if n > MAX_ELEMENTS {
            return Err(Error::InvalidPoset(format!("{n} elements exceeds the limit of {MAX_ELEMENTS}")));
        }
        let p = FinitePoset { ids, index, up, base, rank };
        for a in 0..n {
            for b in (a + 1)..n {
                if p.leq(a, b) && p.leq(b, a) {
                    return Err(Error::InvalidPoset(format!(
                        "cycle between `{}` and `{}`",
                        p.ids[a], p.ids[b]
                    )));
                }
            }
        }
        if let Some(base) = &p.base {
            if base.len() != n {
                return Err(Error::InvalidPoset("base map has wrong length".into()));
            }
            for (a, b) in p.strict_pairs() {
                if base[a] != base[b] {
                    return Err(Error::InvalidPoset(format!(
                        "`{}` <= `{}` but they lie over different base points",
                        p.ids[a], p.ids[b]
                    )));
                }
            }
        }
        if let Some(rank) = &p.rank {
            if rank.len() != n {
                return Err(Error::InvalidPoset("rank map has wrong length".into()));
            }
            for (a, b) in p.strict_pairs() {
                if rank[a] >= rank[b] {
                    return Err(Error::InvalidPoset(format!(
                        "rank is not strictly increasing on `{}` < `{}`",
                        p.ids[a], p.ids[b]
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn empty() -> Self {
        FinitePoset {
            ids: Vec::new(),
            index: HashMap::new(),
            up: Vec::new(),
            base: None,
            rank: None,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        lookup(&self.index, id)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].get(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn rank(&self, a: usize) -> Option<i64> {
        self.rank.as_ref().map(|r| r[a])
    }

    pub fn ranks(&self) -> Option<&[i64]> {
        self.rank.as_deref()
    }

    pub fn is_ranked(&self) -> bool {
        self.rank.is_some()
    }

    pub fn base_point(&self, a: usize) -> Option<&str> {
        self.base.as_ref().map(|b| b[a].as_str())
    }

    pub fn base(&self) -> Option<&[String]> {
        self.base.as_deref()
    }

    /// Replaces the rank function, re-validating strictness.
    pub fn with_rank(self, rank: Option<Vec<i64>>) -> Result<Self> {
        let FinitePoset { ids, index, up, base, .. } = self;
        Self::assemble(ids, index, up, base, rank)
    }

    pub fn with_base(self, base: Option<Vec<String>>) -> Result<Self> {
        let FinitePoset { ids, index, up, rank, .. } = self;
        Self::assemble(ids, index, up, base, rank)
    }

    /// All pairs `a <= b` including the diagonal, sorted.
    pub fn leq_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| self.leq(a, b)).map(move |b| (a, b)))
            .collect()
    }

    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        self.leq_pairs().into_iter().filter(|(a, b)| a != b).collect()
    }

    /// Pairs `a < b` with nothing strictly between.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.len()).any(|x| self.lt(a, x) && self.lt(x, b)))
            .collect()
    }

    pub fn below(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&a| self.lt(a, b))
    }

    pub fn above(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&b| self.lt(a, b))
    }

    /// Element indices in an order compatible with `<`.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.below(x).count(), x));
        order
    }

    /// Induced sub-poset on the given indices (kept in the given order).
    pub fn induced(&self, keep: &[usize]) -> FinitePoset {
        let ids: Vec<String> = keep.iter().map(|&i| self.ids[i].clone()).collect();
        let index = build_index(&ids).expect("sub-poset ids are distinct");
        let m = keep.len();
        let mut up: Vec<BitRow> = (0..m).map(|_| BitRow::new(m)).collect();
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.leq(a, b) {
                    up[i].set(j);
                }
            }
        }
        FinitePoset {
            ids,
            index,
            up,
            base: self.base.as_ref().map(|b| keep.iter().map(|&i| b[i].clone()).collect()),
            rank: self.rank.as_ref().map(|r| keep.iter().map(|&i| r[i]).collect()),
        }
    }

    /// The fiber over one base point (the whole poset when unfibered).
    pub fn fiber(&self, base_point: &str) -> FinitePoset {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&a| self.base_point(a).is_none_or(|b| b == base_point))
            .collect();
        self.induced(&keep)
    }

    /// Distinct base points in first-occurrence order; a single empty string
    /// for unfibered posets.
    pub fn base_points(&self) -> Vec<String> {
        match &self.base {
            None => vec![String::new()],
            Some(b) => {
                let mut seen = Vec::new();
                for x in b {
                    if !seen.contains(x) {
                        seen.push(x.clone());
                    }
                }
                seen
            }
        }
    }

    /// Elements weakly/strictly between `low` and `high`. A closed bound at a
    /// sentinel materializes the sentinel as a fresh element (one per fiber
    /// when the poset is fibered).
    pub fn interval(&self, low: &Bound, high: &Bound, open_low: bool, open_high: bool) -> Result<FinitePoset> {
        let lo = match low {
            Bound::NegInf => None,
            Bound::Elem(id) => Some(self.index_of(id)?),
            Bound::PosInf => return Err(Error::InvalidParams("lower bound cannot be +inf".into())),
        };
        let hi = match high {
            Bound::PosInf => None,
            Bound::Elem(id) => Some(self.index_of(id)?),
            Bound::NegInf => return Err(Error::InvalidParams("upper bound cannot be -inf".into())),
        };
        let keep: Vec<usize> = (0..self.len())
            .filter(|&x| match lo {
                None => true,
                Some(a) => if open_low { self.lt(a, x) } else { self.leq(a, x) },
            })
            .filter(|&x| match hi {
                None => true,
                Some(b) => if open_high { self.lt(x, b) } else { self.leq(x, b) },
            })
            .filter(|&x| {
                // with a fibered poset and an element endpoint, stay in its fiber
                let fib = lo.or(hi).and_then(|e| self.base_point(e));
                fib.is_none_or(|f| self.base_point(x) == Some(f))
            })
            .collect();
        let mut sub = self.induced(&keep);
        if lo.is_none() && !open_low {
            sub = sub.adjoin_minimum()?;
        }
        if hi.is_none() && !open_high {
            sub = sub.adjoin_maximum()?;
        }
        Ok(sub)
    }

    /// Adjoins a fresh `-inf` below everything (one per fiber when fibered).
    /// Its rank is one less than the minimum rank (or 0 for an empty poset).
    pub fn adjoin_minimum(&self) -> Result<FinitePoset> {
        self.adjoin_sentinel(true)
    }

    pub fn adjoin_maximum(&self) -> Result<FinitePoset> {
        self.adjoin_sentinel(false)
    }

    fn adjoin_sentinel(&self, bottom: bool) -> Result<FinitePoset> {
        let name = if bottom { NEG_INF } else { POS_INF };
        let fibers = self.base_points();
        let mut ids = self.ids.clone();
        let mut base = self.base.clone();
        let mut new_idx = Vec::new();
        for f in &fibers {
            let id = if self.base.is_some() { format!("{name}/{f}") } else { name.to_string() };
            if self.index.contains_key(&id) {
                return Err(Error::InvalidPoset(format!("sentinel `{id}` already present")));
            }
            new_idx.push((ids.len(), f.clone()));
            ids.push(id);
            if let Some(b) = base.as_mut() {
                b.push(f.clone());
            }
        }
        let rank = self.rank.as_ref().map(|r| {
            let mut r = r.clone();
            let v = if bottom {
                r.iter().min().map_or(0, |m| m - 1)
            } else {
                r.iter().max().map_or(0, |m| m + 1)
            };
            r.extend(std::iter::repeat_n(v, fibers.len()));
            r
        });
        let n0 = self.len();
        let base_ref = base.clone();
        let lookup_fiber = move |i: usize| -> Option<String> { base_ref.as_ref().map(|b| b[i].clone()) };
        Self::from_order_fn(
            ids,
            |a, b| {
                if a < n0 && b < n0 {
                    return self.leq(a, b);
                }
                let same_fiber = lookup_fiber(a) == lookup_fiber(b);
                match (a >= n0, b >= n0) {
                    (true, true) => a == b,
                    (true, false) => bottom && same_fiber,
                    (false, true) => !bottom && same_fiber,
                    (false, false) => unreachable!(),
                }
            },
            base,
            rank,
        )
    }

    /// An element comparable to every element, lexicographically least by id.
    pub fn find_center(&self) -> Option<usize> {
        self.least_by_id((0..self.len()).filter(|&c| (0..self.len()).all(|x| self.comparable(c, x))))
    }

    pub fn find_maximum(&self) -> Option<usize> {
        self.least_by_id((0..self.len()).filter(|&c| (0..self.len()).all(|x| self.leq(x, c))))
    }

    pub fn find_minimum(&self) -> Option<usize> {
        self.least_by_id((0..self.len()).filter(|&c| (0..self.len()).all(|x| self.leq(c, x))))
    }

    fn least_by_id(&self, it: impl Iterator<Item = usize>) -> Option<usize> {
        it.min_by(|&a, &b| self.ids[a].cmp(&self.ids[b]))
    }

    /// One center per fiber, or the list of fibers lacking one.
    pub fn fiber_centers(&self) -> FiberCenters {
        let mut out = FiberCenters::default();
        for f in self.base_points() {
            let fiber = self.fiber(&f);
            match fiber.find_center() {
                Some(c) => {
                    out.centers.insert(f, fiber.id(c).to_string());
                }
                None => out.missing.push(f),
            }
        }
        out
    }

    /// Indices in `self` of the elements of `sub`, checking that `sub` is an
    /// induced sub-poset.
    pub fn embed(&self, sub: &FinitePoset) -> Result<Vec<usize>> {
        let idx: Vec<usize> = sub.ids.iter().map(|s| self.index_of(s)).collect::<Result<_>>()?;
        for i in 0..sub.len() {
            for j in 0..sub.len() {
                if sub.leq(i, j) != self.leq(idx[i], idx[j]) {
                    return Err(Error::InvalidParams(format!(
                        "`{}` is not an induced sub-poset (order differs on `{}`, `{}`)",
                        "sub", sub.ids[i], sub.ids[j]
                    )));
                }
            }
        }
        Ok(idx)
    }

    /// A falling retraction onto `sub`: `r(t)` is the maximum of
    /// `{s in sub : s <= t}`. Returns `None` when some lower set has no
    /// maximum. The map is given on indices of `self`.
    pub fn falling_retraction(&self, sub: &FinitePoset) -> Result<Option<Vec<usize>>> {
        self.retraction(sub, true)
    }

    /// Dual of [`falling_retraction`](Self::falling_retraction): `r(t)` is
    /// the minimum of `{s in sub : s >= t}`.
    pub fn rising_retraction(&self, sub: &FinitePoset) -> Result<Option<Vec<usize>>> {
        self.retraction(sub, false)
    }

    fn retraction(&self, sub: &FinitePoset, falling: bool) -> Result<Option<Vec<usize>>> {
        let emb = self.embed(sub)?;
        let mut map = Vec::with_capacity(self.len());
        for t in 0..self.len() {
            let candidates: Vec<usize> = emb
                .iter()
                .copied()
                .filter(|&s| if falling { self.leq(s, t) } else { self.leq(t, s) })
                .collect();
            let extreme = candidates.iter().copied().find(|&c| {
                candidates
                    .iter()
                    .all(|&s| if falling { self.leq(s, c) } else { self.leq(c, s) })
            });
            match extreme {
                Some(c) => map.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(map))
    }

    /// Checks that `f` (indices into `target`) is order-preserving.
    pub fn check_monotone(&self, target: &FinitePoset, f: &[usize]) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::NotOrderPreserving("map has wrong length".into()));
        }
        for (a, b) in self.strict_pairs() {
            if !target.leq(f[a], f[b]) {
                return Err(Error::NotOrderPreserving(format!(
                    "`{}` <= `{}` but images `{}`, `{}` are not ordered",
                    self.ids[a], self.ids[b], target.ids[f[a]], target.ids[f[b]]
                )));
            }
        }
        Ok(())
    }

    /// Strict chains up to `max_dim` (or all of them).
    pub fn nerve(&self, max_dim: Option<usize>) -> NerveComplex {
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        let succ: Vec<Vec<usize>> = (0..self.len()).map(|a| self.above(a).collect()).collect();
        let mut stack: Vec<usize> = Vec::new();
        fn dfs(
            succ: &[Vec<usize>],
            stack: &mut Vec<usize>,
            out: &mut Vec<Vec<Vec<usize>>>,
            max_dim: Option<usize>,
        ) {
            let k = stack.len() - 1;
            if out.len() <= k {
                out.push(Vec::new());
            }
            out[k].push(stack.clone());
            if max_dim.is_some_and(|m| k >= m) {
                return;
            }
            let last = *stack.last().expect("nonempty chain");
            for &nx in &succ[last] {
                stack.push(nx);
                dfs(succ, stack, out, max_dim);
                stack.pop();
            }
        }
        for a in 0..self.len() {
            stack.push(a);
            dfs(&succ, &mut stack, &mut simplices, max_dim);
            stack.pop();
        }
        for dim in simplices.iter_mut() {
            dim.sort();
        }
        NerveComplex { simplices }
    }

    /// Number of strict chains with `k+1` elements, for every `k`.
    pub fn chain_counts(&self) -> Vec<u128> {
        let order = self.linear_extension();
        // ending[x][k] = chains of k+1 elements with top x
        let mut ending: Vec<Vec<u128>> = vec![Vec::new(); self.len()];
        for &x in &order {
            let mut row = vec![1u128];
            for y in self.below(x) {
                for (k, c) in ending[y].iter().enumerate() {
                    if row.len() <= k + 1 {
                        row.push(0);
                    }
                    row[k + 1] += c;
                }
            }
            ending[x] = row;
        }
        let mut total: Vec<u128> = Vec::new();
        for row in &ending {
            for (k, c) in row.iter().enumerate() {
                if total.len() <= k {
                    total.push(0);
                }
                total[k] += c;
            }
        }
        total
    }

    /// `(chi, chi_reduced)` of the nerve, by chain counting.
    pub fn euler_characteristics(&self) -> (i64, i64) {
        let chi: i64 = self
            .chain_counts()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum();
        (chi, chi - 1)
    }

    /// Order-isomorphic copy with ids prefixed, used for joins of posets
    /// with overlapping ids.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Result<FinitePoset> {
        let ids: Vec<String> = self.ids.iter().map(|s| f(s)).collect();
        let index = build_index(&ids)?;
        Ok(FinitePoset {
            ids,
            index,
            up: self.up.clone(),
            base: self.base.clone(),
            rank: self.rank.clone(),
        })
    }
}

fn build_index(ids: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::InvalidPoset(format!("duplicate id `{id}`")));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, usize>, id: &str) -> Result<usize> {
    index.get(id).copied().ok_or_else(|| Error::UnknownElement(id.to_string()))
}

/// Warshall's algorithm on bit rows.
fn transitive_closure(up: &mut [BitRow]) {
    let n = up.len();
    for k in 0..n {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row.get(k) {
                row.or_assign(&row_k);
            }
        }
    }
}

#[cfg(test)]
mod tests;
