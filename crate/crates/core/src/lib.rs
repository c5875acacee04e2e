//! Morphology, modal logic and belief change over finite presheaves.

#![allow(clippy::needless_range_loop)]

pub mod bundle;
pub mod error;
pub mod fincat;
pub mod logic;
pub mod morphology;
pub mod rcc8;
pub mod reasoning;
pub mod sublattice;
pub mod universes;

pub use error::{Error, Result};
