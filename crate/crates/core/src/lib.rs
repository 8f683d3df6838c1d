//! Exact Koszul homology of monomial ideals.
//!
//! The crate computes multigraded Koszul homology `H_i(x; S/I)` over the
//! rationals or a prime field, graded Betti tables, regularity and corners,
//! and builds and checks explicit cycle representatives for p-Borel ideals.

pub mod borel_chain;
pub mod cycles;
pub mod error;
pub mod expr;
pub mod field;
pub mod ideal;
pub mod koszul;
pub mod linalg;
pub mod monomial;
pub mod padic;
pub mod pborel;
pub mod random;
pub mod reproduce;
pub mod suites;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use ideal::MonomialIdeal;
pub use koszul::{IndexSubset, KoszulChain, KoszulComplex};
pub use monomial::Monomial;
