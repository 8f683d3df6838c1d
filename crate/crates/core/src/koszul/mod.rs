//! The multigraded Koszul complex `K(x; S/I)` and its homology.

pub mod betti;
pub mod chain;
pub mod complex;
pub mod subset;

pub use betti::{
    all_multidegrees_below_lcm, betti_table, betti_table_brute_force, candidate_multidegrees,
    ek_betti_stable, BettiTable, BettiTableJson,
};
pub use chain::{koszul_element_compare, ChainJson, KoszulChain, KoszulTerm, Multidegree, TermJson};
pub use complex::{strand_basis, KoszulComplex, StrandHomology, StrandHomologyJson};
pub use subset::IndexSubset;
