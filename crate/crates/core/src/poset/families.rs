use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FinitePoset;
use crate::error::{Error, Result};

/// A finite multiset of letters, stored as a sorted vector of letter indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset(pub Vec<usize>);

impl Multiset {
    pub fn new(mut letters: Vec<usize>) -> Self {
        letters.sort_unstable();
        Multiset(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiset inclusion.
    pub fn is_sub(&self, other: &Multiset) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() {
            if j == other.0.len() {
                return false;
            }
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Less => return false,
            }
        }
        true
    }

    pub fn is_set(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    pub fn support(&self) -> Multiset {
        let mut v = self.0.clone();
        v.dedup();
        Multiset(v)
    }

    pub fn multiplicities(&self, alphabet: usize) -> Vec<usize> {
        let mut m = vec![0; alphabet];
        for &x in &self.0 {
            m[x] += 1;
        }
        m
    }

    pub fn label(&self, letters: &[String]) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&i| letters[i].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// All nonempty multisets of size at most `k` on `alphabet` letters,
    /// ordered by size then lexicographically.
    pub fn all_up_to(alphabet: usize, k: usize) -> Vec<Multiset> {
        let mut out = Vec::new();
        for size in 1..=k {
            let mut cur = Vec::with_capacity(size);
            push_multisets(alphabet, size, 0, &mut cur, &mut out);
        }
        out
    }

    /// Nonempty subsets of size at most `k`, in the same order.
    pub fn sets_up_to(alphabet: usize, k: usize) -> Vec<Multiset> {
        Self::all_up_to(alphabet, k.min(alphabet)).into_iter().filter(Multiset::is_set).collect()
    }
}

fn push_multisets(alphabet: usize, left: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Multiset>) {
    if left == 0 {
        out.push(Multiset(cur.clone()));
        return;
    }
    for x in start..alphabet {
        cur.push(x);
        push_multisets(alphabet, left - 1, x, cur, out);
        cur.pop();
    }
}

/// Named poset families.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `0 < 1 < ... < n-1`, ranked by position.
    Chain { n: usize },
    /// `m` pairwise incomparable elements, all of rank 0.
    Antichain { m: usize },
    /// All subsets of `{1..n}` (including the empty set), ranked by size.
    Boolean { n: usize },
    /// Divisors of `n` under divisibility, ranked by number of prime factors.
    Divisors { n: u64 },
    /// Nonempty subsets of the letters of size `<= k` (all when `k` is `None`).
    Configuration { letters: Vec<String>, k: Option<usize> },
    /// Nonempty multisets of size `<= k`, optionally with an adjoined minimum.
    Symmetric { letters: Vec<String>, k: usize, bottom: bool },
    /// Transitive closure of a random DAG on `n` vertices, each edge `i -> j`
    /// (`i < j`) kept with probability `p`; ranked by height.
    Random { n: usize, p: f64, seed: u64 },
    /// The fibered poset of pairs `(x, J)` where `J` is a nonempty set of
    /// cover members containing `x`, over the base point `x`.
    Cover { sets: Vec<Vec<String>> },
}

impl Family {
    pub fn build(&self) -> Result<FinitePoset> {
        match self {
            Family::Chain { n } => chain(*n),
            Family::Antichain { m } => antichain(*m),
            Family::Boolean { n } => boolean(*n),
            Family::Divisors { n } => divisors(*n),
            Family::Configuration { letters, k } => configuration(letters, *k),
            Family::Symmetric { letters, k, bottom } => symmetric(letters, *k, *bottom),
            Family::Random { n, p, seed } => random(*n, *p, *seed),
            Family::Cover { sets } => cover(sets),
        }
    }
}

pub fn chain(n: usize) -> Result<FinitePoset> {
    let ids = (0..n).map(|i| i.to_string()).collect();
    FinitePoset::from_order_fn(ids, |a, b| a <= b, None, Some((0..n as i64).collect()))
}

pub fn antichain(m: usize) -> Result<FinitePoset> {
    let ids = (0..m).map(|i| i.to_string()).collect();
    FinitePoset::from_order_fn(ids, |a, b| a == b, None, Some(vec![0; m]))
}

pub fn boolean(n: usize) -> Result<FinitePoset> {
    if n > 9 {
        return Err(Error::InvalidParams(format!("boolean lattice on {n} atoms is too large")));
    }
    let masks: Vec<u32> = (0..1u32 << n).collect();
    let ids = masks
        .iter()
        .map(|&m| {
            let parts: Vec<String> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let rank = masks.iter().map(|m| m.count_ones() as i64).collect();
    FinitePoset::from_order_fn(ids, |a, b| masks[a] & !masks[b] == 0, None, Some(rank))
}

pub fn divisors(n: u64) -> Result<FinitePoset> {
    if n == 0 || n > 1_000_000_000 {
        return Err(Error::InvalidParams(format!("divisor poset needs 1 <= n <= 10^9, got {n}")));
    }
    let divs: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut all: Vec<u64> = divs.iter().copied().chain(divs.iter().map(|d| n / d)).collect();
    all.sort_unstable();
    all.dedup();
    let rank = all.iter().map(|&d| big_omega(d) as i64).collect();
    let ids = all.iter().map(u64::to_string).collect();
    FinitePoset::from_order_fn(ids, |a, b| all[b].is_multiple_of(all[a]), None, Some(rank))
}

fn big_omega(mut d: u64) -> u32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= d {
        while d.is_multiple_of(p) {
            d /= p;
            count += 1;
        }
        p += 1;
    }
    count + u32::from(d > 1)
}

fn check_letters(letters: &[String]) -> Result<()> {
    for (i, l) in letters.iter().enumerate() {
        if l.is_empty() || l.contains([',', '{', '}']) || l.starts_with(super::RESERVED_PREFIX) {
            return Err(Error::InvalidParams(format!("bad letter `{l}`")));
        }
        if letters[..i].contains(l) {
            return Err(Error::InvalidParams(format!("repeated letter `{l}`")));
        }
    }
    Ok(())
}

fn multiset_poset(letters: &[String], elems: Vec<Multiset>, bottom: bool) -> Result<FinitePoset> {
    let mut ids: Vec<String> = elems.iter().map(|m| m.label(letters)).collect();
    let mut rank: Vec<i64> = elems.iter().map(|m| m.len() as i64).collect();
    let n = elems.len();
    if bottom {
        ids.push(super::NEG_INF.to_string());
        rank.push(0);
    }
    FinitePoset::from_order_fn(
        ids,
        |a, b| match (a < n, b < n) {
            (true, true) => elems[a].is_sub(&elems[b]),
            (false, _) => true,
            (true, false) => false,
        },
        None,
        Some(rank),
    )
}

pub fn configuration(letters: &[String], k: Option<usize>) -> Result<FinitePoset> {
    check_letters(letters)?;
    let k = k.unwrap_or(letters.len());
    if letters.len() > 9 {
        return Err(Error::InvalidParams("configuration poset limited to 9 letters".into()));
    }
    multiset_poset(letters, Multiset::sets_up_to(letters.len(), k), false)
}

pub fn symmetric(letters: &[String], k: usize, bottom: bool) -> Result<FinitePoset> {
    check_letters(letters)?;
    let elems = Multiset::all_up_to(letters.len(), k);
    if elems.len() >= super::MAX_ELEMENTS {
        return Err(Error::InvalidParams(format!(
            "S^<={k} on {} letters has {} elements",
            letters.len(),
            elems.len()
        )));
    }
    multiset_poset(letters, elems, bottom)
}

pub fn random(n: usize, p: f64, seed: u64) -> Result<FinitePoset> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("edge probability {p} not in [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<String> = (0..n).map(|i| format!("r{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                pairs.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let q = FinitePoset::from_relations(&ids, &pairs, None, None)?;
    let heights = heights(&q);
    q.with_rank(Some(heights))
}

/// Length of the longest strict chain ending at each element.
pub fn heights(p: &FinitePoset) -> Vec<i64> {
    let mut h = vec![0i64; p.len()];
    for x in p.linear_extension() {
        h[x] = p.below(x).map(|y| h[y] + 1).max().unwrap_or(0);
    }
    h
}

pub fn cover(sets: &[Vec<String>]) -> Result<FinitePoset> {
    if sets.len() > 8 {
        return Err(Error::InvalidParams("cover limited to 8 members".into()));
    }
    let mut points: Vec<String> = sets.iter().flatten().cloned().collect();
    points.sort();
    points.dedup();
    let mut ids = Vec::new();
    let mut base = Vec::new();
    let mut masks = Vec::new();
    for x in &points {
        let members: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].contains(x)).collect();
        for mask in 1u32..(1 << members.len()) {
            let j: Vec<usize> = (0..members.len()).filter(|b| mask >> b & 1 == 1).map(|b| members[b]).collect();
            let label: Vec<String> = j.iter().map(|i| i.to_string()).collect();
            ids.push(format!("{x}|{{{}}}", label.join(",")));
            base.push(x.clone());
            masks.push(j.iter().fold(0u32, |m, &i| m | 1 << i));
        }
    }
    let rank = masks.iter().map(|m| m.count_ones() as i64).collect();
    let base_ref = base.clone();
    FinitePoset::from_order_fn(
        ids,
        |a, b| base_ref[a] == base_ref[b] && masks[a] & !masks[b] == 0,
        Some(base),
        Some(rank),
    )
}

/// Disjoint union of posets, each placed over its own base point.
pub fn fibered_union(parts: &[(String, FinitePoset)]) -> Result<FinitePoset> {
    let mut ids = Vec::new();
    let mut base = Vec::new();
    let mut origin = Vec::new();
    for (f, (x, p)) in parts.iter().enumerate() {
        for i in 0..p.len() {
            ids.push(format!("{x}/{}", p.id(i)));
            base.push(x.clone());
            origin.push((f, i));
        }
    }
    let rank = if parts.iter().all(|(_, p)| p.is_ranked()) {
        Some(origin.iter().map(|&(f, i)| parts[f].1.rank(i).unwrap_or(0)).collect())
    } else {
        None
    };
    FinitePoset::from_order_fn(
        ids,
        |a, b| {
            let (fa, ia) = origin[a];
            let (fb, ib) = origin[b];
            fa == fb && parts[fa].1.leq(ia, ib)
        },
        Some(base),
        rank,
    )
}

/// Poset of strict chains of `p` ordered by inclusion, ranked by length - 1.
pub fn barycentric(p: &FinitePoset) -> Result<FinitePoset> {
    let chains: Vec<Vec<usize>> = p.nerve(None).simplices.into_iter().flatten().collect();
    if chains.len() > super::MAX_ELEMENTS {
        return Err(Error::InvalidParams(format!("subdivision would have {} elements", chains.len())));
    }
    let ids = chains
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().map(|&i| p.id(i)).collect();
            format!("[{}]", parts.join("<"))
        })
        .collect();
    let rank = chains.iter().map(|c| c.len() as i64 - 1).collect();
    let base = p.base().map(|b| chains.iter().map(|c| b[c[0]].clone()).collect());
    FinitePoset::from_order_fn(
        ids,
        |a, b| chains[a].iter().all(|x| chains[b].contains(x)),
        base,
        Some(rank),
    )
}

/// `A ⋆ B`: the disjoint union with every element of `a` below every element
/// of `b`.
pub fn join(a: &FinitePoset, b: &FinitePoset) -> Result<FinitePoset> {
    if a.base().is_some() || b.base().is_some() {
        return Err(Error::InvalidParams("join of fibered posets is not supported".into()));
    }
    let na = a.len();
    let ids: Vec<String> = a.ids().iter().chain(b.ids()).cloned().collect();
    let rank = match (a.ranks(), b.ranks()) {
        (Some(ra), Some(rb)) => {
            let shift = match (ra.iter().max(), rb.iter().min()) {
                (Some(hi), Some(lo)) => hi - lo + 1,
                _ => 0,
            };
            Some(ra.iter().copied().chain(rb.iter().map(|r| r + shift)).collect())
        }
        _ => None,
    };
    FinitePoset::from_order_fn(
        ids,
        |x, y| match (x < na, y < na) {
            (true, true) => a.leq(x, y),
            (false, false) => b.leq(x - na, y - na),
            (true, false) => true,
            (false, true) => false,
        },
        None,
        rank,
    )
}

/// Adjoins a minimum.
pub fn cone(p: &FinitePoset) -> Result<FinitePoset> {
    p.adjoin_minimum()
}

/// Adjoins a maximum.
pub fn cocone(p: &FinitePoset) -> Result<FinitePoset> {
    p.adjoin_maximum()
}
