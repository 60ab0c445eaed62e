//! Spectral sequence of a finitely filtered complex, computed from ranks of
//! blocks of the differential.
//!
//! A homological complex `C` with increasing filtration `F_i` (each basis
//! element carries an index; `F_i` is spanned by indices `<= i`) is
//! dualized to the cochain complex with decreasing filtration `F^p` of
//! cochains supported on indices `>= p`. Pages use cohomological indexing:
//! `d_r : E_r^{p,q} -> E_r^{p+r,q-r+1}` and `n = p + q` is the total degree,
//! which agrees with the homological degree of `C`.
//!
//! Write `rho_n(a, b)` for the rank of the block of `d_{n+1} : C_{n+1} -> C_n`
//! with rows of index `>= a` and columns of index `< b`, and `f_p` for the
//! number of degree-`n` basis elements of index `>= p`. Then
//! `dim Z_s^p = f_p - rho_n(p, p+s)` and
//! `dim d(Z_s^a) = rho_{n-1}(a, inf) - rho_{n-1}(a, a+s)`, from which every
//! page dimension and every rank of `d_r` follows by the usual
//! `E_r = Z_r / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use super::{chain_complex, nonzero, ChainComplex};
use crate::error::{Error, Result};
use crate::poset::{Bound, FinitePoset};

const INF: i64 = i64::MAX;

/// A chain complex with a filtration index on every basis element.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pub complex: ChainComplex,
    /// Per degree, the index of each basis element.
    pub filtration: BTreeMap<i64, Vec<i64>>,
}

impl FilteredComplex {
    pub fn new(complex: ChainComplex, filtration: BTreeMap<i64, Vec<i64>>) -> Result<Self> {
        for k in complex.degrees() {
            let len = filtration.get(&k).map_or(0, Vec::len);
            if len != complex.dim(k) {
                return Err(Error::InvalidParams(format!(
                    "filtration has {len} indices in degree {k}, complex has {}",
                    complex.dim(k)
                )));
            }
        }
        for k in complex.degrees() {
            if let Some(d) = complex.boundary(k) {
                for (r, c, _) in d.triplets() {
                    let (fr, fc) = (filtration[&(k - 1)][r], filtration[&k][c]);
                    if fr > fc {
                        return Err(Error::NotFiltered(format!(
                            "degree {k} basis element {c} (index {fc}) has boundary term of index {fr}"
                        )));
                    }
                }
            }
        }
        Ok(FilteredComplex { complex, filtration })
    }

    /// Smallest and largest filtration index in use.
    pub fn bounds(&self) -> Option<(i64, i64)> {
        let all = self.filtration.values().flatten();
        Some((*all.clone().min()?, *all.max()?))
    }

    /// Number of basis elements in `F_i`, over all degrees.
    pub fn size_of(&self, i: i64) -> usize {
        self.filtration.values().flatten().filter(|&&x| x <= i).count()
    }
}

/// One page: nonzero `E_r^{p,q}` and nonzero ranks of `d_r` out of `(p,q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub entries: BTreeMap<(i64, i64), usize>,
    pub differential_ranks: BTreeMap<(i64, i64), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSequence {
    pub pages: Vec<Page>,
    pub limit: BTreeMap<(i64, i64), usize>,
    /// Betti numbers of the total complex, computed directly.
    pub betti: BTreeMap<i64, usize>,
    /// `E_{r+1} = E_r - rank(d_r out) - rank(d_r in)` held on every page.
    pub bookkeeping_ok: bool,
    pub euler_invariant: bool,
    /// The limit's total dimension in each degree matches `betti`.
    pub converges: bool,
}

impl SpectralSequence {
    pub fn is_consistent(&self) -> bool {
        self.bookkeeping_ok && self.euler_invariant && self.converges
    }

    pub fn to_json(&self) -> Value {
        let table = |m: &BTreeMap<(i64, i64), usize>| -> Value {
            m.iter().map(|((p, q), v)| (format!("{p},{q}"), json!(v))).collect::<serde_json::Map<_, _>>().into()
        };
        json!({
            "pages": self.pages.iter().map(|pg| json!({
                "r": pg.r,
                "entries": table(&pg.entries),
                "differential_ranks": table(&pg.differential_ranks),
            })).collect::<Vec<_>>(),
            "limit": table(&self.limit),
            "betti": self.betti.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "converges": self.converges,
            "bookkeeping_ok": self.bookkeeping_ok,
            "euler_invariant": self.euler_invariant,
        })
    }
}

struct BlockRanks<'a> {
    fc: &'a FilteredComplex,
    lo: i64,
    hi: i64,
    memo: RefCell<HashMap<(i64, i64, i64), usize>>,
}

impl BlockRanks<'_> {
    /// `rho_n(a, b)`; bounds outside the index range are clamped.
    fn rho(&self, n: i64, a: i64, b: i64) -> usize {
        let a = a.clamp(self.lo, self.hi + 1);
        let b = if b == INF { self.hi + 1 } else { b.clamp(self.lo, self.hi + 1) };
        if a > self.hi || b <= self.lo {
            return 0;
        }
        if let Some(&v) = self.memo.borrow().get(&(n, a, b)) {
            return v;
        }
        let v = match self.fc.complex.boundary(n + 1) {
            None => 0,
            Some(d) => {
                let rows = &self.fc.filtration[&n];
                let cols = &self.fc.filtration[&(n + 1)];
                d.block_rank(|r| rows[r] >= a, |c| cols[c] < b)
            }
        };
        self.memo.borrow_mut().insert((n, a, b), v);
        v
    }

    fn f(&self, n: i64, p: i64) -> i64 {
        self.fc.filtration.get(&n).map_or(0, |v| v.iter().filter(|&&x| x >= p).count() as i64)
    }

    fn z(&self, n: i64, p: i64, s: i64) -> i64 {
        self.f(n, p) - self.rho(n, p, p.saturating_add(s)) as i64
    }

    fn beta(&self, n: i64, a: i64, s: i64) -> i64 {
        self.rho(n - 1, a, INF) as i64 - self.rho(n - 1, a, a.saturating_add(s)) as i64
    }

    fn e(&self, r: i64, p: i64, n: i64) -> i64 {
        let a = p - r + 1;
        self.f(n, p) - self.f(n, p + 1) - self.rho(n, p, p + r) as i64 + self.rho(n, p + 1, p + r) as i64
            + self.rho(n - 1, a, p) as i64
            - self.rho(n - 1, a, p + 1) as i64
    }

    fn d_rank(&self, r: i64, p: i64, n: i64) -> i64 {
        let a = p - r + 1;
        self.e(r, p, n) - self.z(n, p, r + 1) + self.z(n, p + 1, r) + self.beta(n, a, r - 1) - self.beta(n, a, r)
    }
}

/// All pages of the spectral sequence of `fc` until they stabilize.
pub fn spectral_sequence(fc: &FilteredComplex) -> SpectralSequence {
    let betti = fc.complex.betti();
    let Some((lo, hi)) = fc.bounds() else {
        return SpectralSequence {
            pages: Vec::new(),
            limit: BTreeMap::new(),
            converges: betti.values().all(|&b| b == 0),
            betti,
            bookkeeping_ok: true,
            euler_invariant: true,
        };
    };
    let br = BlockRanks { fc, lo, hi, memo: RefCell::new(HashMap::new()) };
    let degrees: Vec<i64> = fc.complex.degrees().collect();
    let width = hi - lo;
    let table = |r: i64| -> BTreeMap<(i64, i64), usize> {
        let mut t = BTreeMap::new();
        for &n in &degrees {
            for p in lo..=hi {
                let v = br.e(r, p, n);
                assert!(v >= 0, "negative page dimension at r={r}, p={p}, n={n}");
                if v > 0 {
                    t.insert((p, n - p), v as usize);
                }
            }
        }
        t
    };
    let euler = |t: &BTreeMap<(i64, i64), usize>| -> i64 {
        t.iter().map(|(&(p, q), &v)| if (p + q).rem_euclid(2) == 0 { v as i64 } else { -(v as i64) }).sum()
    };

    let mut pages = Vec::new();
    let mut bookkeeping_ok = true;
    let last = width + 1;
    let mut current = table(1);
    for r in 1..=last {
        let mut ranks = BTreeMap::new();
        for &n in &degrees {
            for p in lo..=hi {
                let v = br.d_rank(r, p, n);
                if v < 0 {
                    bookkeeping_ok = false;
                }
                if v > 0 {
                    ranks.insert((p, n - p), v as usize);
                }
            }
        }
        let next = table(r + 1);
        for &n in &degrees {
            for p in lo..=hi {
                let here = current.get(&(p, n - p)).copied().unwrap_or(0);
                let out = ranks.get(&(p, n - p)).copied().unwrap_or(0);
                let inc = ranks.get(&(p - r, n - 1 - (p - r))).copied().unwrap_or(0);
                let expect = here as i64 - out as i64 - inc as i64;
                if expect != next.get(&(p, n - p)).copied().unwrap_or(0) as i64 {
                    bookkeeping_ok = false;
                }
            }
        }
        pages.push(Page { r: r as usize, entries: current, differential_ranks: ranks });
        current = next;
    }
    let limit = current;
    let euler_invariant = pages.iter().all(|pg| euler(&pg.entries) == euler(&limit));
    let converges = degrees.iter().all(|&n| {
        let total: usize = limit.iter().filter(|(&(p, q), _)| p + q == n).map(|(_, &v)| v).sum();
        total == betti.get(&n).copied().unwrap_or(0)
    });
    SpectralSequence { pages, limit, betti, bookkeeping_ok, euler_invariant, converges }
}

/// The nerve of a ranked poset filtered by the largest rank in each chain.
pub fn rank_filtration(p: &FinitePoset) -> Result<FilteredComplex> {
    let rank = p.ranks().ok_or(Error::Unranked)?;
    let nerve = p.nerve(None);
    let complex = chain_complex(&nerve, false);
    let filtration = nerve
        .simplices
        .iter()
        .enumerate()
        .map(|(k, dim)| (k as i64, dim.iter().map(|s| rank[*s.last().expect("nonempty chain")]).collect()))
        .collect();
    FilteredComplex::new(complex, filtration)
}

/// One line of the comparison in [`rank_e1_report`], in the chart described
/// there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Row {
    pub p: i64,
    pub q: i64,
    /// `dim E_1` from the spectral-sequence engine.
    pub engine: usize,
    /// Sum of reduced Betti numbers of open lower intervals.
    pub direct: usize,
}

#[derive(Debug, Clone)]
pub struct RankE1Report {
    pub rows: Vec<E1Row>,
    pub e1_matches: bool,
    pub converges: bool,
    pub sequence: SpectralSequence,
}

impl RankE1Report {
    pub fn passes(&self) -> bool {
        self.e1_matches && self.converges
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e1": self.rows.iter().map(|r| json!({"p": r.p, "q": r.q, "engine": r.engine, "direct": r.direct})).collect::<Vec<_>>(),
            "e1_matches": self.e1_matches,
            "converges": self.converges,
            "passes": self.passes(),
            "sequence": self.sequence.to_json(),
        })
    }
}

/// Compares `E_1` of the rank filtration with the reduced homology of open
/// lower intervals.
///
/// Chains whose top element is `x` span, modulo lower filtration, a copy of
/// the augmented chain complex of the nerve of `(-inf, x)` shifted up by
/// one. So the engine's `E_1` at column `rk x`, total degree `n`, is the sum
/// of `H~_{n-1}` of those intervals. Rows are reported in the chart
/// `p = rk - 1`, `q = n - p`, so that `E_1^{p,q}` collects `H~^{p+q-1}` of
/// the intervals below elements of rank `p + 1`; the empty interval has
/// `H~^{-1}` of dimension one.
pub fn rank_e1_report(p: &FinitePoset) -> Result<RankE1Report> {
    let fc = rank_filtration(p)?;
    let sequence = spectral_sequence(&fc);
    let rank = p.ranks().ok_or(Error::Unranked)?;

    let mut direct: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for x in 0..p.len() {
        let below = p.interval(&Bound::NegInf, &Bound::elem(p.id(x)), true, true)?;
        for (deg, b) in nonzero(&super::nerve_betti(&below, true)) {
            *direct.entry((rank[x], deg + 1)).or_default() += b;
        }
    }
    let mut engine: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    if let Some(first) = sequence.pages.first() {
        for (&(c, qe), &v) in &first.entries {
            engine.insert((c, c + qe), v);
        }
    }
    let mut keys: Vec<(i64, i64)> = direct.keys().chain(engine.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<E1Row> = keys
        .into_iter()
        .map(|(c, n)| E1Row {
            p: c - 1,
            q: n - c + 1,
            engine: engine.get(&(c, n)).copied().unwrap_or(0),
            direct: direct.get(&(c, n)).copied().unwrap_or(0),
        })
        .collect();
    let e1_matches = rows.iter().all(|r| r.engine == r.direct);
    let converges = sequence.is_consistent();
    Ok(RankE1Report { rows, e1_matches, converges, sequence })
}
