//! Inputs shared by the criterion benches.

use inclex_core::cohom::GradedWeightedSpace;
use inclex_core::poset::families;
use inclex_core::FinitePoset;

pub fn boolean(n: usize) -> FinitePoset {
    families::boolean(n).expect("boolean lattice")
}

pub fn divisors(n: u64) -> FinitePoset {
    families::divisors(n).expect("divisor lattice")
}

/// Cohomology of a genus-g curve, weights equal to degrees.
pub fn curve(g: u64) -> GradedWeightedSpace {
    GradedWeightedSpace::pure([(0, 1), (1, 2 * g), (2, 1)])
}
