use std::collections::BTreeMap;

use num_traits::One;
use proptest::prelude::*;

use super::*;
use crate::linalg::{q, DenseMatrix};
use crate::poset::families::*;
use crate::poset::Bound;

fn letters(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

fn map(entries: &[(i64, usize)]) -> BTreeMap<i64, usize> {
    entries.iter().copied().collect()
}

/// The circle as barycentric boundary of a triangle: proper nonempty
/// subsets of a 3-set.
fn hexagon() -> FinitePoset {
    configuration(&letters("abc"), Some(2)).unwrap()
}

/// Betti numbers of a simplicial complex given by facets, via an independent
/// dense elimination on the oriented boundary matrices.
fn simplicial_betti_oracle(facets: &[Vec<usize>]) -> Vec<usize> {
    let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
    for f in facets {
        for mask in 1u32..(1 << f.len()) {
            let s: Vec<usize> = (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            let k = s.len() - 1;
            if faces.len() <= k {
                faces.resize(k + 1, Vec::new());
            }
            if !faces[k].contains(&s) {
                faces[k].push(s);
            }
        }
    }
    let ranks: Vec<usize> = (0..faces.len())
        .map(|k| {
            if k == 0 {
                return 0;
            }
            let mut m = DenseMatrix::zeros(faces[k - 1].len(), faces[k].len());
            for (c, s) in faces[k].iter().enumerate() {
                for i in 0..s.len() {
                    let mut t = s.clone();
                    t.remove(i);
                    let r = faces[k - 1].iter().position(|x| *x == t).unwrap();
                    m.set(r, c, q(if i % 2 == 0 { 1 } else { -1 }));
                }
            }
            m.rank()
        })
        .collect();
    (0..faces.len())
        .map(|k| faces[k].len() - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0))
        .collect()
}

#[test]
fn interval_complex() {
    let c = chain_complex(&chain(2).unwrap().nerve(None), false);
    assert_eq!(c.dim(0), 2);
    assert_eq!(c.dim(1), 1);
    let d = c.boundary(1).unwrap();
    assert_eq!((d.get(0, 0), d.get(1, 0)), (q(-1), q(1)));
    assert!(c.is_complex());
}

#[test]
fn empty_complex() {
    let e = FinitePoset::empty();
    assert_eq!(nerve_betti(&e, false), BTreeMap::new());
    assert_eq!(nerve_betti(&e, true), map(&[(-1, 1)]));
}

#[test]
fn circle_betti() {
    let h = hexagon();
    assert_eq!(nerve_betti(&h, false), map(&[(0, 1), (1, 1)]));
    assert_eq!(nonzero(&nerve_betti(&h, true)), map(&[(1, 1)]));
    assert_eq!(simplicial_betti_oracle(&[vec![0, 1], vec![1, 2], vec![0, 2]]), vec![1, 1]);
}

#[test]
fn centered_posets_are_acyclic() {
    for p in [chain(4).unwrap(), boolean(3).unwrap(), cocone(&antichain(3).unwrap()).unwrap()] {
        assert!(nonzero(&nerve_betti(&p, true)).is_empty());
    }
}

#[test]
fn disjoint_chains() {
    let p = FinitePoset::from_relations(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")], None, None).unwrap();
    assert_eq!(nonzero(&nerve_betti(&p, false)), map(&[(0, 2)]));
}

#[test]
fn nerve_matches_simplicial_oracle() {
    // the nerve of a poset is the simplicial complex of its maximal chains
    for p in [hexagon(), divisors(60).unwrap(), symmetric(&letters("xy"), 3, false).unwrap()] {
        let facets: Vec<Vec<usize>> = {
            let n = p.nerve(None);
            let all: Vec<Vec<usize>> = n.simplices.iter().flatten().cloned().collect();
            all.iter()
                .filter(|s| !all.iter().any(|t| t.len() > s.len() && s.iter().all(|x| t.contains(x))))
                .cloned()
                .collect()
        };
        let oracle = simplicial_betti_oracle(&facets);
        let ours: Vec<usize> = nerve_betti(&p, false).values().copied().collect();
        assert_eq!(ours, oracle);
    }
}

#[test]
fn identity_induces_identity() {
    let h = hexagon();
    let id: Vec<usize> = (0..h.len()).collect();
    let m = induced_map(&h, &h, &id, false).unwrap();
    assert!(m.commutes);
    assert_eq!(m.homology[&1], DenseMatrix::identity(1));
    assert_eq!(m.homology[&0], DenseMatrix::identity(1));
}

#[test]
fn support_retraction_then_inclusion() {
    let s = symmetric(&letters("xy"), 2, false).unwrap();
    let c = configuration(&letters("xy"), Some(2)).unwrap();
    let r = s.falling_retraction(&c).unwrap().unwrap();
    let emb = s.embed(&c).unwrap();
    // r restricted to c, as a self-map of c
    let on_c: Vec<usize> = emb.iter().map(|&e| c.index_of(s.id(r[e])).unwrap()).collect();
    let m = induced_map(&c, &c, &on_c, true).unwrap();
    for (_, h) in m.homology {
        assert_eq!(h, DenseMatrix::identity(h.rows()));
    }
    // and the retraction itself is a map S -> C inducing an isomorphism
    let to_c: Vec<usize> = r.iter().map(|&t| c.index_of(s.id(t)).unwrap()).collect();
    let m = induced_map(&s, &c, &to_c, false).unwrap();
    assert!(m.commutes);
    assert_eq!(m.homology[&0].rank(), 1);
}

#[test]
fn transposition_acts_by_minus_one() {
    let c = configuration(&letters("012"), None).unwrap();
    let below = c.interval(&Bound::NegInf, &Bound::elem("{0,1,2}"), true, true).unwrap();
    let swap = |id: &str| id.replace('0', "t").replace('1', "0").replace('t', "1");
    let f: Vec<usize> = (0..below.len())
        .map(|i| {
            let mut parts: Vec<String> = below.id(i).trim_matches(['{', '}']).split(',').map(swap).collect();
            parts.sort();
            below.index_of(&format!("{{{}}}", parts.join(","))).unwrap()
        })
        .collect();
    let m = induced_map(&below, &below, &f, true).unwrap();
    assert!(m.commutes);
    assert_eq!(m.homology[&1].get(0, 0), &(-q(1)));
}

#[test]
fn non_monotone_map_is_rejected() {
    let c = chain(2).unwrap();
    assert!(induced_map(&c, &c, &[1, 0], false).is_err());
}

#[test]
fn rank_filtration_sizes() {
    let fc = rank_filtration(&chain(3).unwrap()).unwrap();
    assert_eq!((fc.size_of(0), fc.size_of(1), fc.size_of(2)), (1, 3, 7));
    let fc = rank_filtration(&symmetric(&letters("xy"), 2, false).unwrap()).unwrap();
    assert_eq!(fc.size_of(1), 2);
    assert_eq!(fc.size_of(2), 5 + 4);
    let p = configuration(&letters("012"), Some(3)).unwrap();
    let fc = rank_filtration(&p).unwrap();
    assert_eq!(fc.size_of(3), p.nerve(None).counts().iter().sum::<usize>());
    let unranked = FinitePoset::from_relations(&["a"], &[], None, None).unwrap();
    assert!(matches!(rank_filtration(&unranked), Err(crate::Error::Unranked)));
}

#[test]
fn trivial_filtration_gives_homology() {
    let nerve = hexagon().nerve(None);
    let complex = chain_complex(&nerve, false);
    let filt = complex.degrees().map(|k| (k, vec![0; complex.dim(k)])).collect();
    let ss = spectral_sequence(&FilteredComplex::new(complex, filt).unwrap());
    assert_eq!(ss.pages.len(), 1);
    assert_eq!(ss.pages[0].entries, [((0, 0), 1), ((0, 1), 1)].into_iter().collect());
    assert!(ss.pages[0].differential_ranks.is_empty());
    assert!(ss.is_consistent());
}

#[test]
fn two_step_circle() {
    // vertices in F_0, edges in F_1
    let nerve = hexagon().nerve(None);
    let complex = chain_complex(&nerve, false);
    let filt = complex.degrees().map(|k| (k, vec![k; complex.dim(k)])).collect();
    let ss = spectral_sequence(&FilteredComplex::new(complex, filt).unwrap());
    // E_1: 6 vertices at (0,0), 6 edges at (1,0); d_1 has rank 5
    assert_eq!(ss.pages[0].entries, [((0, 0), 6), ((1, 0), 6)].into_iter().collect());
    assert_eq!(ss.pages[0].differential_ranks, [((0, 0), 5)].into_iter().collect());
    assert_eq!(ss.limit, [((0, 0), 1), ((1, 0), 1)].into_iter().collect());
    assert!(ss.is_consistent());
}

#[test]
fn non_filtration_is_rejected() {
    let nerve = chain(2).unwrap().nerve(None);
    let complex = chain_complex(&nerve, false);
    let filt = [(0, vec![0, 5]), (1, vec![1])].into_iter().collect();
    assert!(matches!(FilteredComplex::new(complex, filt), Err(crate::Error::NotFiltered(_))));
}

#[test]
fn contractible_rank_sequence() {
    let p = symmetric(&letters("xyz"), 3, true).unwrap();
    let ss = spectral_sequence(&rank_filtration(&p).unwrap());
    assert!(ss.is_consistent());
    assert_eq!(ss.limit.values().sum::<usize>(), 1);
    assert_eq!(nonzero(&ss.betti), map(&[(0, 1)]));
}

#[test]
fn e1_report_configuration() {
    let p = configuration(&letters("012"), None).unwrap();
    let rep = rank_e1_report(&p).unwrap();
    assert!(rep.passes(), "{:?}", rep.rows);
    // rank k elements contribute in column k - 1 at q = 0 (total degree k - 1 + 0)
    let cols: Vec<(i64, i64, usize)> = rep.rows.iter().map(|r| (r.p, r.q, r.direct)).collect();
    assert_eq!(cols, vec![(0, 0, 3), (1, 0, 3), (2, 0, 1)]);
}

#[test]
fn e1_report_chain_and_antichain() {
    let c = cone(&chain(4).unwrap()).unwrap();
    let rep = rank_e1_report(&c).unwrap();
    assert!(rep.passes());
    assert_eq!(rep.rows.iter().map(|r| r.engine).sum::<usize>(), 1);

    let a = cone(&antichain(3).unwrap()).unwrap();
    let rep = rank_e1_report(&a).unwrap();
    assert!(rep.passes());
    assert_eq!(rep.rows.iter().map(|r| (r.p, r.q, r.engine)).collect::<Vec<_>>(), vec![(-2, 2, 1)]);
    assert_eq!(nonzero(&rep.sequence.betti), map(&[(0, 1)]));

    let bare = antichain(3).unwrap();
    let rep = rank_e1_report(&bare).unwrap();
    assert!(rep.passes());
    assert_eq!(rep.rows.iter().map(|r| (r.p, r.q, r.engine)).collect::<Vec<_>>(), vec![(-1, 1, 3)]);
}

#[test]
fn e1_report_symmetric_with_bottom() {
    let p = symmetric(&letters("xy"), 3, true).unwrap();
    let rep = rank_e1_report(&p).unwrap();
    assert!(rep.passes(), "{:?}", rep.rows);
}

fn arb_poset() -> impl Strategy<Value = FinitePoset> {
    (1usize..=9, 0.0f64..0.7, any::<u64>()).prop_map(|(n, p, seed)| random(n, p, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_is_zero(p in arb_poset()) {
        prop_assert!(chain_complex(&p.nerve(None), true).is_complex());
    }

    #[test]
    fn euler_characteristic_agrees(p in arb_poset()) {
        let c = chain_complex(&p.nerve(None), false);
        let b: i64 = c.betti().iter().map(|(k, v)| if k % 2 == 0 { *v as i64 } else { -(*v as i64) }).sum();
        prop_assert_eq!(b, p.euler_characteristics().0);
        prop_assert_eq!(c.euler_characteristic(), b);
    }

    #[test]
    fn subdivision_preserves_betti(p in (1usize..=6, 0.0f64..0.7, any::<u64>()).prop_map(|(n, p, s)| random(n, p, s).unwrap())) {
        let sd = barycentric(&p).unwrap();
        prop_assert_eq!(nonzero(&nerve_betti(&p, false)), nonzero(&nerve_betti(&sd, false)));
    }

    #[test]
    fn retraction_preserves_betti(p in arb_poset(), mask in any::<u16>()) {
        let keep: Vec<usize> = (0..p.len()).filter(|i| mask >> i & 1 == 1).collect();
        let sub = p.induced(&keep);
        if p.falling_retraction(&sub).unwrap().is_some() {
            prop_assert_eq!(nonzero(&nerve_betti(&p, true)), nonzero(&nerve_betti(&sub, true)));
        }
    }

    #[test]
    fn random_rank_sequences_are_consistent(p in arb_poset()) {
        let rep = rank_e1_report(&p).unwrap();
        prop_assert!(rep.passes(), "{:?}", rep.rows);
    }

    #[test]
    fn random_filtrations_are_consistent(p in arb_poset(), seed in any::<u64>()) {
        // filter by a random monotone relabeling of the height
        let h = heights(&p);
        let bump = (seed % 3) as i64;
        let nerve = p.nerve(None);
        let complex = chain_complex(&nerve, true);
        let mut filt: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        filt.insert(-1, vec![0]);
        for (k, dim) in nerve.simplices.iter().enumerate() {
            filt.insert(k as i64, dim.iter().map(|s| bump * h[*s.last().unwrap()] + s.len() as i64 % 2).collect());
        }
        if let Ok(fc) = FilteredComplex::new(complex, filt) {
            prop_assert!(spectral_sequence(&fc).is_consistent());
        }
    }
}

#[test]
fn unit_is_one() {
    assert!(q(1).is_one());
}
