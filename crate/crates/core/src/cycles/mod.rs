//! Explicit cycle representatives: monomial-cycle tests, the constructive
//! reductions for 2-cycles, top-degree cycles and 3-cycles, minimal-length
//! searches, layered monomial bases and their lifting through colon ideals.

pub mod ah;
pub mod certificate;
pub mod exact_seq;
pub mod h2;
pub mod h3;
pub mod lifting;
pub mod monomial;
pub mod normalize;
pub mod search;
pub mod top;

pub use certificate::{CycleCertificate, CycleCertificateJson};
pub use h2::{decompose_h2_monomial, H2Decomposition};
pub use h3::{h3_leading_step, reduce_h3_principal_pborel, H3Case, H3Reduction, H3Step};
pub use monomial::{has_neighbour, is_monomial_cycle, is_sum_of_monomial_cycles, neighbours};
pub use normalize::{common_top_index, is_normalized, normalize_cycle};
pub use top::{reduce_top_degree, reduce_top_degree_split};
pub use search::{
    min_class_length, search_min_length_basis, search_strand, ClassSearch, SearchOutcome, StrandSearch,
    StrandSearchJson,
};
pub use ah::{
    ah_basis, basis_chains, c_basis, maximal_layers, total_betti, verify_basis, AHBasisElement, AHBasisElementJson,
    BasisFailure, BasisReport,
};
pub use lifting::{
    colon_decomposition_check, lift_monomial_basis, ColonReport, LiftResult, LiftResultJson, LiftStage, PdivCheck,
};
pub use exact_seq::{
    cone_ideal, connecting_map_check, extension_betti_check, BettiMismatch, ConnectingDims, ExtensionReport,
};
