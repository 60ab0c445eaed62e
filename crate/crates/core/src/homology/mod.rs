//! Rational chain complexes of nerves, (reduced) homology and induced maps.

mod spectral;

pub use spectral::{
    rank_e1_report, rank_filtration, spectral_sequence, E1Row, FilteredComplex, Page, RankE1Report,
    SpectralSequence,
};

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::linalg::{q, DenseMatrix, SparseMatrix, Q};
use crate::poset::{FinitePoset, NerveComplex};

/// A bounded chain complex `C_lo <- ... <- C_hi` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    lowest: i64,
    dims: Vec<usize>,
    /// `d[i]` maps degree `lowest + i` to `lowest + i - 1`; `d[0]` has no rows.
    d: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// `boundaries[i]` is the differential out of degree `lowest + i + 1`.
    pub fn new(lowest: i64, dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Self {
        assert_eq!(boundaries.len() + 1, dims.len().max(1), "one boundary per adjacent pair");
        let mut d = Vec::with_capacity(dims.len());
        if let Some(&d0) = dims.first() {
            d.push(SparseMatrix::zeros(0, d0));
        }
        for (i, m) in boundaries.into_iter().enumerate() {
            assert_eq!((m.nrows(), m.ncols()), (dims[i], dims[i + 1]), "boundary shape");
            d.push(m);
        }
        ChainComplex { lowest, dims, d }
    }

    pub fn zero() -> Self {
        ChainComplex { lowest: 0, dims: Vec::new(), d: Vec::new() }
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn highest(&self) -> i64 {
        self.lowest + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.lowest..=self.highest()
    }

    fn slot(&self, k: i64) -> Option<usize> {
        let i = k - self.lowest;
        (i >= 0 && (i as usize) < self.dims.len()).then_some(i as usize)
    }

    pub fn dim(&self, k: i64) -> usize {
        self.slot(k).map_or(0, |i| self.dims[i])
    }

    /// Differential out of degree `k`, if both ends are nonzero slots.
    pub fn boundary(&self, k: i64) -> Option<&SparseMatrix> {
        self.slot(k).map(|i| &self.d[i]).filter(|m| m.nrows() > 0 && m.ncols() > 0)
    }

    fn boundary_rank(&self, k: i64) -> usize {
        self.boundary(k).map_or(0, SparseMatrix::rank)
    }

    pub fn is_complex(&self) -> bool {
        self.degrees().all(|k| match (self.boundary(k), self.boundary(k + 1)) {
            (Some(a), Some(b)) => a.mul(b).is_zero(),
            _ => true,
        })
    }

    /// Betti numbers in every degree of the complex (zeros included).
    pub fn betti(&self) -> BTreeMap<i64, usize> {
        let ranks: Vec<usize> = self.degrees().map(|k| self.boundary_rank(k)).collect();
        self.degrees()
            .enumerate()
            .map(|(i, k)| {
                let out = ranks[i];
                let inc = ranks.get(i + 1).copied().unwrap_or(0);
                (k, self.dims[i] - out - inc)
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|k| sign(k) * self.dim(k) as i64).sum()
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Lookup from a strict chain to its index in its dimension.
pub struct SimplexIndex<'a> {
    maps: Vec<HashMap<&'a [usize], usize>>,
}

impl<'a> SimplexIndex<'a> {
    pub fn new(n: &'a NerveComplex) -> Self {
        let maps = n
            .simplices
            .iter()
            .map(|dim| dim.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect();
        SimplexIndex { maps }
    }

    pub fn get(&self, s: &[usize]) -> Option<usize> {
        self.maps.get(s.len().checked_sub(1)?)?.get(s).copied()
    }
}

/// Normalized chain complex of a nerve; with `reduced` the empty simplex is
/// adjoined in degree -1.
pub fn chain_complex(n: &NerveComplex, reduced: bool) -> ChainComplex {
    let index = SimplexIndex::new(n);
    let mut dims: Vec<usize> = n.counts();
    let mut boundaries = Vec::new();
    for k in 1..dims.len() {
        let trips = n.simplices[k].iter().enumerate().flat_map(|(c, s)| {
            let index = &index;
            (0..s.len()).map(move |i| {
                let mut face = s.clone();
                face.remove(i);
                let r = index.get(&face).expect("faces of chains are chains");
                (r, c, q(sign(i as i64)))
            })
        });
        boundaries.push(SparseMatrix::from_triplets(dims[k - 1], dims[k], trips));
    }
    if !reduced {
        return if dims.is_empty() { ChainComplex::zero() } else { ChainComplex::new(0, dims, boundaries) };
    }
    let mut all = Vec::with_capacity(boundaries.len() + 1);
    if let Some(&d0) = dims.first() {
        all.push(SparseMatrix::from_triplets(1, d0, (0..d0).map(|c| (0, c, Q::one()))));
    }
    all.extend(boundaries);
    dims.insert(0, 1);
    ChainComplex::new(-1, dims, all)
}

/// Betti numbers of the nerve of `p`.
pub fn nerve_betti(p: &FinitePoset, reduced: bool) -> BTreeMap<i64, usize> {
    chain_complex(&p.nerve(None), reduced).betti()
}

/// Nonzero entries only, for comparisons that should ignore trailing zeros.
pub fn nonzero(b: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    b.iter().filter(|(_, &v)| v > 0).map(|(&k, &v)| (k, v)).collect()
}

/// Explicit homology of one degree: cycle representatives and a basis of
/// boundaries, enough to read off coordinates of any cycle.
struct HomologyBasis {
    boundaries: Vec<Vec<Q>>,
    reps: Vec<Vec<Q>>,
}

impl HomologyBasis {
    fn new(c: &ChainComplex, k: i64) -> Self {
        let n = c.dim(k);
        let cycles = match c.boundary(k) {
            Some(d) => d.to_dense().nullspace(),
            None => (0..n).map(|i| unit(n, i)).collect(),
        };
        let boundaries = match c.boundary(k + 1) {
            Some(d) => {
                let dense = d.to_dense();
                let pivots = pivot_columns(dense.clone());
                pivots.into_iter().map(|j| dense.column(j)).collect()
            }
            None => Vec::new(),
        };
        let mut cols = boundaries.clone();
        cols.extend(cycles.iter().cloned());
        let pivots = pivot_columns(DenseMatrix::from_columns(n, &cols));
        let reps = pivots
            .into_iter()
            .filter(|&j| j >= boundaries.len())
            .map(|j| cols[j].clone())
            .collect();
        HomologyBasis { boundaries, reps }
    }

    /// Coordinates of a cycle in the chosen homology basis.
    fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let mut cols = self.boundaries.clone();
        cols.extend(self.reps.iter().cloned());
        let x = DenseMatrix::from_columns(v.len(), &cols).solve(v)?;
        Some(x[self.boundaries.len()..].to_vec())
    }
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn pivot_columns(mut m: DenseMatrix) -> Vec<usize> {
    m.rref()
}

/// Chain map and homology action of an order-preserving map of posets.
#[derive(Debug, Clone)]
pub struct InducedMap {
    /// Per degree, a `dim C_k(target) x dim C_k(source)` matrix.
    pub chain_maps: BTreeMap<i64, SparseMatrix>,
    /// Per degree, the matrix on homology in the chosen bases.
    pub homology: BTreeMap<i64, DenseMatrix>,
    pub commutes: bool,
}

/// Map on normalized chains induced by `f` (given on indices), sending chains
/// with a degenerate image to zero.
pub fn induced_map(src: &FinitePoset, tgt: &FinitePoset, f: &[usize], reduced: bool) -> Result<InducedMap> {
    src.check_monotone(tgt, f)?;
    let ns = src.nerve(None);
    let nt = tgt.nerve(None);
    let cs = chain_complex(&ns, reduced);
    let ct = chain_complex(&nt, reduced);
    let tindex = SimplexIndex::new(&nt);

    let mut chain_maps = BTreeMap::new();
    for k in cs.degrees() {
        let m = if k < 0 {
            SparseMatrix::from_triplets(ct.dim(k), cs.dim(k), [(0, 0, Q::one())])
        } else {
            let trips: Vec<(usize, usize, Q)> = ns.simplices[k as usize]
                .iter()
                .enumerate()
                .filter_map(|(c, s)| {
                    let image: Vec<usize> = s.iter().map(|&x| f[x]).collect();
                    if image.windows(2).any(|w| w[0] == w[1]) {
                        return None;
                    }
                    Some((tindex.get(&image).expect("image of a chain is a chain"), c, Q::one()))
                })
                .collect();
            SparseMatrix::from_triplets(ct.dim(k), cs.dim(k), trips)
        };
        chain_maps.insert(k, m);
    }

    let commutes = cs.degrees().all(|k| {
        let (Some(fk), Some(fk1)) = (chain_maps.get(&k), chain_maps.get(&(k - 1))) else {
            return true;
        };
        match (cs.boundary(k), ct.boundary(k)) {
            (Some(ds), Some(dt)) => dt.mul(fk) == fk1.mul(ds),
            (Some(ds), None) => fk1.mul(ds).is_zero(),
            (None, Some(dt)) => dt.mul(fk).is_zero(),
            (None, None) => true,
        }
    });

    let mut homology = BTreeMap::new();
    for k in cs.degrees() {
        let hs = HomologyBasis::new(&cs, k);
        let ht = HomologyBasis::new(&ct, k);
        let mut m = DenseMatrix::zeros(ht.reps.len(), hs.reps.len());
        for (j, z) in hs.reps.iter().enumerate() {
            let image = chain_maps[&k].apply(z);
            let coords = if ht.reps.is_empty() && image.is_empty() {
                Vec::new()
            } else {
                ht.coordinates(&image).expect("image of a cycle is a cycle")
            };
            for (i, v) in coords.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        homology.insert(k, m);
    }
    Ok(InducedMap { chain_maps, homology, commutes })
}

#[cfg(test)]
mod tests;
