use proptest::prelude::*;

use super::families::*;
use super::*;

fn letters(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

fn ids_of(p: &FinitePoset) -> Vec<&str> {
    p.ids().iter().map(String::as_str).collect()
}

/// Order axioms by brute force over all triples.
fn assert_order_axioms(p: &FinitePoset) {
    let n = p.len();
    for a in 0..n {
        assert!(p.leq(a, a));
        for b in 0..n {
            if a != b {
                assert!(!(p.leq(a, b) && p.leq(b, a)));
            }
            for c in 0..n {
                if p.leq(a, b) && p.leq(b, c) {
                    assert!(p.leq(a, c));
                }
            }
        }
    }
    if let Some(r) = p.ranks() {
        for (a, b) in p.strict_pairs() {
            assert!(r[a] < r[b]);
        }
    }
}

#[test]
fn closure_from_covers() {
    let p = FinitePoset::from_relations(&["a", "b", "c"], &[("a", "b"), ("b", "c")], None, None).unwrap();
    assert!(p.leq(0, 2));
    assert_eq!(p.covering_pairs(), vec![(0, 1), (1, 2)]);
}

#[test]
fn rejects_cycles_and_bad_ranks_and_fibers() {
    let cyc = FinitePoset::from_relations(&["a", "b"], &[("a", "b"), ("b", "a")], None, None);
    assert!(matches!(cyc, Err(Error::InvalidPoset(_))));
    let rank = FinitePoset::from_relations(&["a", "b"], &[("a", "b")], None, Some(vec![1, 1]));
    assert!(matches!(rank, Err(Error::InvalidPoset(_))));
    let fib = FinitePoset::from_relations(&["a", "b"], &[("a", "b")], Some(vec!["x".into(), "y".into()]), None);
    assert!(matches!(fib, Err(Error::InvalidPoset(_))));
    let unknown = FinitePoset::from_relations(&["a"], &[("a", "z")], None, None);
    assert_eq!(unknown, Err(Error::UnknownElement("z".into())));
}

#[test]
fn intervals() {
    let c = chain(3).unwrap();
    let open = c.interval(&Bound::elem("0"), &Bound::elem("2"), true, true).unwrap();
    assert_eq!(ids_of(&open), vec!["1"]);

    let b = boolean(3).unwrap();
    let top = b.index_of("{1,2,3}").unwrap();
    let without_empty: Vec<usize> = (1..b.len()).collect();
    let b = b.induced(&without_empty);
    assert_eq!(b.id(top - 1), "{1,2,3}");
    let proper = b.interval(&Bound::NegInf, &Bound::elem("{1,2,3}"), true, true).unwrap();
    assert_eq!(proper.len(), 6);
    assert_eq!(proper.euler_characteristics(), (0, -1));
    // 6 vertices and 6 edges: a hexagon
    assert_eq!(proper.chain_counts(), vec![6, 6]);

    let a = antichain(2).unwrap();
    let e = a.interval(&Bound::elem("0"), &Bound::elem("1"), false, false).unwrap();
    assert!(e.is_empty());

    assert!(c.interval(&Bound::elem("9"), &Bound::PosInf, true, true).is_err());
}

#[test]
fn closed_sentinel_is_materialized() {
    let a = antichain(2).unwrap();
    let i = a.interval(&Bound::NegInf, &Bound::PosInf, false, true).unwrap();
    assert_eq!(i.len(), 3);
    let bot = i.find_minimum().unwrap();
    assert_eq!(i.id(bot), NEG_INF);
    assert_eq!(i.rank(bot), Some(-1));
}

#[test]
fn centers() {
    let c = chain(3).unwrap();
    assert_eq!(c.find_center().map(|i| c.id(i)), Some("0"));
    assert_eq!(c.find_maximum().map(|i| c.id(i)), Some("2"));
    assert_eq!(c.find_minimum().map(|i| c.id(i)), Some("0"));
    assert_eq!(antichain(2).unwrap().find_center(), None);
    let s = symmetric(&letters("xy"), 2, false).unwrap();
    assert_eq!(s.find_center(), None);
    assert_eq!(s.find_maximum(), None);
}

#[test]
fn fiber_centers_report_missing() {
    let parts = vec![
        ("u".to_string(), chain(2).unwrap()),
        ("v".to_string(), antichain(2).unwrap()),
    ];
    let p = fibered_union(&parts).unwrap();
    let fc = p.fiber_centers();
    assert_eq!(fc.centers.get("u").map(String::as_str), Some("u/0"));
    assert_eq!(fc.missing, vec!["v".to_string()]);
}

#[test]
fn retractions() {
    let s = symmetric(&letters("xy"), 3, false).unwrap();
    let c = configuration(&letters("xy"), Some(3)).unwrap();
    let r = s.falling_retraction(&c).unwrap().expect("support map");
    for t in 0..s.len() {
        let parsed: Vec<&str> = s.id(t).trim_matches(|ch| ch == '{' || ch == '}').split(',').collect();
        let mut support = parsed.clone();
        support.dedup();
        assert_eq!(s.id(r[t]), format!("{{{}}}", support.join(",")));
    }

    let ch = chain(3).unwrap();
    let zero = ch.induced(&[0]);
    assert_eq!(ch.falling_retraction(&zero).unwrap(), Some(vec![0, 0, 0]));

    let a = antichain(2).unwrap();
    assert_eq!(a.falling_retraction(&a.induced(&[0])).unwrap(), None);
    let top = ch.induced(&[2]);
    assert_eq!(ch.rising_retraction(&top).unwrap(), Some(vec![2, 2, 2]));
}

#[test]
fn nerve_of_chain_is_simplex() {
    let c = chain(5).unwrap();
    let n = c.nerve(None);
    assert_eq!(n.counts(), vec![5, 10, 10, 5, 1]);
    assert_eq!(c.nerve(Some(1)).counts(), vec![5, 10]);
    for (k, dim) in n.simplices.iter().enumerate() {
        for s in dim {
            assert_eq!(s.len(), k + 1);
            assert!(s.windows(2).all(|w| c.lt(w[0], w[1])));
        }
        assert!(dim.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn nerve_of_configuration_is_barycentric_simplex() {
    // barycentric subdivision of the 2-simplex: 7 vertices, 12 edges, 6 triangles
    let p = configuration(&letters("012"), None).unwrap();
    assert_eq!(p.nerve(None).counts(), vec![7, 12, 6]);
    assert_eq!(p.euler_characteristics(), (1, 0));
}

#[test]
fn antichain_nerve_is_discrete() {
    assert_eq!(antichain(4).unwrap().nerve(None).counts(), vec![4]);
}

#[test]
fn euler_characteristic_basics() {
    assert_eq!(chain(3).unwrap().euler_characteristics(), (1, 0));
    assert_eq!(FinitePoset::empty().euler_characteristics(), (0, -1));
}

#[test]
fn json_roundtrip() {
    let text = r#"{"elements":["a","b","c"],"leq":[["a","b"],["b","c"]],"rank":{"a":0,"b":1,"c":2},"base":{"a":"x","b":"x","c":"x"}}"#;
    let p = FinitePoset::from_json_str(text).unwrap();
    assert!(p.leq(0, 2));
    let back = FinitePoset::from_json_str(&p.to_json_value().to_string()).unwrap();
    assert_eq!(p, back);
    assert!(FinitePoset::from_json_str(r##"{"elements":["#a"]}"##).is_err());
    assert!(FinitePoset::from_json_str(r#"{"elements":["a"],"rank":{"b":0}}"#).is_err());
    let s = symmetric(&letters("xy"), 2, true).unwrap();
    assert_eq!(FinitePoset::from_json_str(&s.to_json_value().to_string()).unwrap(), s);
}

#[test]
fn constructed_families_satisfy_axioms() {
    let mut all = vec![
        chain(6).unwrap(),
        antichain(4).unwrap(),
        boolean(4).unwrap(),
        divisors(360).unwrap(),
        configuration(&letters("abcd"), Some(3)).unwrap(),
        symmetric(&letters("xyz"), 3, true).unwrap(),
        cover(&[letters("ab"), letters("bc")]).unwrap(),
    ];
    all.push(barycentric(&configuration(&letters("abc"), None).unwrap()).unwrap());
    all.push(cone(&all[1]).unwrap());
    for p in &all {
        assert!(p.len() <= 64);
        assert_order_axioms(p);
    }
}

fn arb_poset() -> impl Strategy<Value = FinitePoset> {
    (1usize..=10, 0.0f64..0.7, any::<u64>()).prop_map(|(n, p, seed)| random(n, p, seed).unwrap())
}

proptest! {
    #[test]
    fn random_posets_are_ranked_orders(p in arb_poset()) {
        assert_order_axioms(&p);
    }

    #[test]
    fn center_forces_chi_one(p in arb_poset()) {
        if p.find_center().is_some() {
            prop_assert_eq!(p.euler_characteristics().0, 1);
        }
        let coned = cocone(&p).unwrap();
        prop_assert_eq!(coned.euler_characteristics(), (1, 0));
    }

    #[test]
    fn retraction_preserves_chi(p in arb_poset(), mask in any::<u16>()) {
        let keep: Vec<usize> = (0..p.len()).filter(|i| mask >> i & 1 == 1).collect();
        let sub = p.induced(&keep);
        if let Some(r) = p.falling_retraction(&sub).unwrap() {
            prop_assert_eq!(p.euler_characteristics(), sub.euler_characteristics());
            p.check_monotone(&p, &r).unwrap();
            for t in 0..p.len() {
                prop_assert!(p.leq(r[t], t));
            }
            for &s in &keep {
                prop_assert_eq!(r[s], s);
            }
        }
    }

    #[test]
    fn chain_counts_match_nerve(p in arb_poset()) {
        let counts: Vec<u128> = p.nerve(None).counts().into_iter().map(|c| c as u128).collect();
        prop_assert_eq!(p.chain_counts(), counts);
    }

    #[test]
    fn subdivision_preserves_chi(p in (1usize..=7, 0.0f64..0.7, any::<u64>()).prop_map(|(n, p, s)| random(n, p, s).unwrap())) {
        let sd = barycentric(&p).unwrap();
        prop_assert_eq!(sd.euler_characteristics(), p.euler_characteristics());
    }
}
