//! Revision, contraction, merging and abduction over a model universe.

mod corpus;
mod operators;
mod postulates;
mod transforms;

pub use corpus::generate_corpus;
pub use operators::{
    abduce, contract, merge, revise_dilation, revise_tau, Abduction, AbductionVariant, Chain,
    Contraction, Merge, Reasoner, Revision, RevisionOp, Step, SYNTACTIC_STEP_CAP,
};
pub use postulates::{
    check_postulates, faithful_assignment, minimality_suite, sample_domain, Equivalence, FaReport,
    MinimalityReport, PostulateReport, PostulateResult, Suite, SuiteConfig, Witness,
};
pub use transforms::{kappa, rho, rho_kappa, tau, zeta, FixpointMode, Transform};
