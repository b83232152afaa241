//! Isotropic subspaces from étale extensions, the transfer, and descent of
//! isotropic vectors along odd-degree extensions.

mod descent;
mod ext;
mod subspace;
mod verify;

pub use descent::{
    descent_step, search_descent_datum, springer_descend, value_polynomial, verify_trace,
    DescentDatum, DescentStep, DescentTrace, TraceStep, DEFAULT_BUDGET,
};
pub use ext::{transfer_space, unit_transfer_form, EtaleExtension};
pub use subspace::{
    construct_isotropic_subspace, hyperbolic_frame, vectors_from_frame, HyperbolicFrame,
    IsotropicSubspace,
};
pub use verify::{
    descend_with_enlargement, enlarge_extension, enlarge_residue_fields, verify_artin_springer,
    ArtinSpringerReport, DescentSummary, TowerOutcome, Verdict, VerifyMode, MAX_TOWER_DEPTH,
};
