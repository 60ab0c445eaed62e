//! Incidence algebra of a finite poset over a commutative coefficient ring.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// Coefficients: a commutative ring with exact equality.
pub trait Coeff:
    Clone + Debug + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone + Debug + PartialEq + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// A function on the pairs `a <= b` of a poset.
#[derive(Debug, Clone)]
pub struct Incidence<'p, C> {
    poset: &'p FinitePoset,
    values: BTreeMap<(usize, usize), C>,
}

impl<C: PartialEq> PartialEq for Incidence<'_, C> {
    fn eq(&self, other: &Self) -> bool {
        same_poset(self.poset, other.poset) && self.values == other.values
    }
}

fn same_poset(a: &FinitePoset, b: &FinitePoset) -> bool {
    std::ptr::eq(a, b) || a == b
}

impl<'p, C: Coeff> Incidence<'p, C> {
    pub fn from_fn(poset: &'p FinitePoset, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let values = poset.leq_pairs().into_iter().map(|(a, b)| ((a, b), f(a, b))).collect();
        Incidence { poset, values }
    }

    pub fn zeta(poset: &'p FinitePoset) -> Self {
        Self::from_fn(poset, |_, _| C::one())
    }

    pub fn delta(poset: &'p FinitePoset) -> Self {
        Self::from_fn(poset, |a, b| if a == b { C::one() } else { C::zero() })
    }

    pub fn poset(&self) -> &'p FinitePoset {
        self.poset
    }

    /// Value on `a <= b`; `None` when the pair is not comparable.
    pub fn get(&self, a: usize, b: usize) -> Option<&C> {
        self.values.get(&(a, b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(usize, usize), &C)> {
        self.values.iter()
    }

    /// `(f * g)(a, b) = sum over a <= x <= b of f(a, x) g(x, b)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if !same_poset(self.poset, other.poset) {
            return Err(Error::MismatchedPosets);
        }
        let p = self.poset;
        let values = self
            .values
            .keys()
            .map(|&(a, b)| {
                let mut acc = C::zero();
                for x in (0..p.len()).filter(|&x| p.leq(a, x) && p.leq(x, b)) {
                    acc = acc + self.values[&(a, x)].clone() * other.values[&(x, b)].clone();
                }
                ((a, b), acc)
            })
            .collect();
        Ok(Incidence { poset: p, values })
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_poset(self.poset, other.poset) {
            return Err(Error::MismatchedPosets);
        }
        let values = self
            .values
            .iter()
            .map(|(k, v)| (*k, v.clone() + other.values[k].clone()))
            .collect();
        Ok(Incidence { poset: self.poset, values })
    }
}

/// Pairs `a <= b` ordered by the size of the closed interval `[a, b]`.
fn pairs_by_interval_size(p: &FinitePoset) -> Vec<(usize, usize)> {
    let mut pairs: Vec<((usize, usize), usize)> = p
        .leq_pairs()
        .into_iter()
        .map(|(a, b)| ((a, b), (0..p.len()).filter(|&x| p.leq(a, x) && p.leq(x, b)).count()))
        .collect();
    pairs.sort_by_key(|&(pair, size)| (size, pair));
    pairs.into_iter().map(|(pair, _)| pair).collect()
}

/// Möbius function from `mu(a, a) = 1`, `mu(a, b) = -sum_{a <= x < b} mu(a, x)`.
pub fn mobius_by_inversion<C: Coeff>(p: &FinitePoset) -> Incidence<'_, C> {
    let mut values: BTreeMap<(usize, usize), C> = BTreeMap::new();
    for (a, b) in pairs_by_interval_size(p) {
        let v = if a == b {
            C::one()
        } else {
            let mut acc = C::zero();
            for x in (0..p.len()).filter(|&x| p.leq(a, x) && p.lt(x, b)) {
                acc = acc + values[&(a, x)].clone();
            }
            -acc
        };
        values.insert((a, b), v);
    }
    Incidence { poset: p, values }
}

/// Möbius function as the reduced Euler characteristic of the nerve of each
/// open interval, counted by chains.
pub fn mobius_topological(p: &FinitePoset) -> Incidence<'_, BigInt> {
    Incidence::from_fn(p, |a, b| {
        if a == b {
            return BigInt::one();
        }
        let inside: Vec<usize> = (0..p.len()).filter(|&x| p.lt(a, x) && p.lt(x, b)).collect();
        BigInt::from(p.induced(&inside).euler_characteristics().1)
    })
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::poset::families::*;

    fn letters(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    fn mu_at(p: &FinitePoset, a: &str, b: &str) -> BigInt {
        let m = mobius_by_inversion::<BigInt>(p);
        m.get(p.index_of(a).unwrap(), p.index_of(b).unwrap()).unwrap().clone()
    }

    /// Classical number-theoretic Möbius function.
    fn mu_nt(mut n: u64) -> i64 {
        let mut sign = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                sign = -sign;
            }
            d += 1;
        }
        if n > 1 {
            -sign
        } else {
            sign
        }
    }

    fn random_incidence<'p>(p: &'p FinitePoset, rng: &mut ChaCha8Rng) -> Incidence<'p, BigInt> {
        Incidence::from_fn(p, |_, _| BigInt::from(rng.gen_range(-5..=5)))
    }

    #[test]
    fn boolean_mobius_is_signed() {
        let b = boolean(3).unwrap();
        let m = mobius_by_inversion::<BigInt>(&b);
        for (&(x, y), v) in m.pairs() {
            let k = b.rank(y).unwrap() - b.rank(x).unwrap();
            assert_eq!(*v, BigInt::from(if k % 2 == 0 { 1 } else { -1 }));
        }
        assert_eq!(mu_at(&b, "{1}", "{1,2,3}"), BigInt::from(1));
    }

    #[test]
    fn divisor_mobius_is_classical() {
        for n in [12u64, 30, 60, 360] {
            let p = divisors(n).unwrap();
            let m = mobius_by_inversion::<BigInt>(&p);
            for (&(a, b), v) in m.pairs() {
                let (da, db): (u64, u64) = (p.id(a).parse().unwrap(), p.id(b).parse().unwrap());
                assert_eq!(*v, BigInt::from(mu_nt(db / da)), "mu({da},{db})");
            }
        }
        assert_eq!(mu_at(&divisors(12).unwrap(), "1", "12"), BigInt::zero());
        assert_eq!(mu_at(&divisors(30).unwrap(), "1", "30"), BigInt::from(-1));
    }

    #[test]
    fn chain_mobius_vanishes_beyond_covers() {
        let c = chain(5).unwrap();
        let m = mobius_by_inversion::<BigInt>(&c);
        for (&(a, b), v) in m.pairs() {
            let expect = match b - a {
                0 => 1,
                1 => -1,
                _ => 0,
            };
            assert_eq!(*v, BigInt::from(expect));
        }
    }

    #[test]
    fn topological_examples() {
        let b = boolean(3).unwrap();
        let m = mobius_topological(&b);
        let (lo, hi) = (b.index_of("{}").unwrap(), b.index_of("{1,2,3}").unwrap());
        assert_eq!(m.get(lo, hi), Some(&BigInt::from(-1)));
        let c = chain(2).unwrap();
        let m = mobius_topological(&c);
        assert_eq!(m.get(0, 1), Some(&BigInt::from(-1)));
        assert_eq!(m.get(0, 0), Some(&BigInt::one()));
        assert_eq!(m.get(1, 0), None);
    }

    #[test]
    fn identity_and_zeta_squares() {
        let b = boolean(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_incidence(&b, &mut rng);
        assert_eq!(Incidence::delta(&b).convolve(&f).unwrap(), f);
        assert_eq!(f.convolve(&Incidence::delta(&b)).unwrap(), f);

        let n = 6;
        let c = chain(n + 1).unwrap();
        let z = Incidence::<BigInt>::zeta(&c);
        let zz = z.convolve(&z).unwrap();
        assert_eq!(zz.get(0, n), Some(&BigInt::from(n + 1)));
    }

    #[test]
    fn mobius_inverts_zeta_on_divisors_of_60() {
        let p = divisors(60).unwrap();
        let mu = mobius_by_inversion::<BigInt>(&p);
        let z = Incidence::zeta(&p);
        assert_eq!(mu.convolve(&z).unwrap(), Incidence::delta(&p));
        assert_eq!(z.convolve(&mu).unwrap(), Incidence::delta(&p));
    }

    #[test]
    fn rational_coefficients() {
        let p = symmetric(&letters("xy"), 3, false).unwrap();
        let mu = mobius_by_inversion::<BigRational>(&p);
        let z = Incidence::<BigRational>::zeta(&p);
        assert_eq!(mu.convolve(&z).unwrap(), Incidence::delta(&p));
    }

    #[test]
    fn mismatched_posets() {
        let a = chain(2).unwrap();
        let b = chain(3).unwrap();
        let f = Incidence::<BigInt>::zeta(&a);
        let g = Incidence::<BigInt>::zeta(&b);
        assert_eq!(f.convolve(&g), Err(Error::MismatchedPosets));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn two_mobius_routes_agree(n in 1usize..=10, prob in 0.0f64..0.8, seed in any::<u64>()) {
            let p = random(n, prob, seed).unwrap();
            prop_assert_eq!(mobius_by_inversion::<BigInt>(&p), mobius_topological(&p));
        }

        #[test]
        fn convolution_is_associative(n in 1usize..=8, prob in 0.0f64..0.8, seed in any::<u64>()) {
            let p = random(n, prob, seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (f, g, h) = (random_incidence(&p, &mut rng), random_incidence(&p, &mut rng), random_incidence(&p, &mut rng));
            let left = f.convolve(&g).unwrap().convolve(&h).unwrap();
            let right = f.convolve(&g.convolve(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
