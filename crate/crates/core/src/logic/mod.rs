//! The modal language: formulas, their semantics in models, model
//! universes, and a checker for the sequent calculus.

mod derivation;
mod formula;
mod semantics;
mod soundness;

pub use derivation::{
    check_derivation, CheckFlags, Derivation, DerivationJson, DerivationReport, Rule, Sequent,
};
pub use formula::{format_formula, format_sequent, parse_formula, parse_sequent, Formula, Kind};
pub use semantics::{
    consistent, eval, mod_set, satisfies, sequent_valid, ModSet, Model, ModelUniverse,
};
pub use soundness::{
    check_soundness, RuleSoundness, SoundnessConfig, SoundnessReport, SoundnessWitness,
};
