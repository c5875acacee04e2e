use thiserror::Error;

/// Errors raised by constructors and operators across the crate.
///
/// Law violations are never errors: they are reported through the
/// various `*Report` values so that callers get a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("unknown element `{elem}` at object `{object}`")]
    UnknownElement { object: String, elem: String },
    #[error("duplicate id `{0}`")]
    Duplicate(String),
    #[error("carrier or action missing for `{0}`")]
    CarrierMissing(String),
    #[error("presheaves live over different index categories")]
    BackendMismatch,
    #[error("subobjects have different parents")]
    ParentMismatch,
    #[error("selection is not restriction-closed: `{elem}` at `{object}` restricts along `{morphism}` outside the selection")]
    NotRestrictionClosed {
        object: String,
        elem: String,
        morphism: String,
    },
    #[error("enumeration needs 2^{needed_log2} candidates, cap is {cap}")]
    SizeCapExceeded { needed_log2: usize, cap: u64 },
    #[error("structuring element is not reflexive at `{elem}` (stage `{object}`)")]
    NotReflexive { object: String, elem: String },
    #[error("not a structuring neighborhood: {0}")]
    InvalidNeighborhood(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown propositional variable `{0}`")]
    UnknownVariable(String),
    #[error("model universe must be nonempty and share one variable set: {0}")]
    InvalidUniverse(String),
    #[error("revision unreachable: {0}")]
    RevisionUnreachable(String),
    #[error("merge unreachable: {0}")]
    MergeUnreachable(String),
    #[error("abduction undefined: {0}")]
    AbductionUndefined(String),
    #[error("invalid bundle: {0}")]
    Bundle(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
