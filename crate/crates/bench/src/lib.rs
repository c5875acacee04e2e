//! Fixtures shared by the criterion benches.

use morpho_core::logic::{Formula, ModelUniverse};
use morpho_core::reasoning::{generate_corpus, sample_domain};
use morpho_core::universes::{mixed_universe, standard_valuation_universe, two_model_universe};

pub const SEED: u64 = 1;

/// The named universes every operator bench runs over.
pub fn universes() -> Vec<(&'static str, ModelUniverse)> {
    vec![
        ("two_models", two_model_universe()),
        ("valuations256", standard_valuation_universe()),
        ("mixed16", mixed_universe(SEED, 16, &["p", "q"], 4)),
    ]
}

/// `n` seeded formulas of depth at most 2 over `p`, `q`.
pub fn formulas(n: usize) -> Vec<Formula> {
    let corpus = generate_corpus(&["p", "q"], 2, usize::MAX);
    sample_domain(&corpus, n, SEED)
}
