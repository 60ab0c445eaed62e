//! Exact computations around inclusion-exclusion for posets, incidence
//! algebras, motivic zeta series and configuration-space cohomology.

pub mod cohom;
pub mod error;
pub mod ffield;
pub mod homology;
pub mod incidence;
pub mod linalg;
pub mod motivic;
pub mod poset;
pub mod suites;
pub mod zerocycles;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poset::{Bound, FinitePoset, NerveComplex};
