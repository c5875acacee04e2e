//! `morpho`: batch front end for morpho-core.
//!
//! Exit status is 0 on success, 1 when a verdict fails, 2 on input errors.

mod commands;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use morpho_core::reasoning::{AbductionVariant, Equivalence, FixpointMode, RevisionOp};

#[derive(Debug, Parser)]
#[command(
    name = "morpho",
    version,
    about = "Morphological modal logic over finite presheaves"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a bundle and report its space and neighborhood.
    Validate { bundle: PathBuf },
    /// Evaluate a formula in each model of a bundle.
    Eval {
        bundle: PathBuf,
        formula: String,
        /// Restrict to one model by name.
        #[arg(long)]
        model: Option<String>,
    },
    /// Check `phi |- psi` in each model of a bundle.
    Sequent {
        bundle: PathBuf,
        sequent: String,
        #[arg(long)]
        model: Option<String>,
    },
    /// Check a derivation tree against the sequent calculus.
    ProveCheck {
        derivation: PathBuf,
        /// Admit Axiom-S4 leaves.
        #[arg(long)]
        s4: bool,
        /// Admit Axiom-Classical leaves.
        #[arg(long)]
        classical: bool,
    },
    /// Revise `phi` by `psi` over a universe.
    Revise {
        universe: PathBuf,
        phi: String,
        psi: String,
        #[command(flatten)]
        op: OpArgs,
    },
    /// Contract `phi` by `psi` through the Harper identity.
    Contract {
        universe: PathBuf,
        phi: String,
        psi: String,
        #[command(flatten)]
        op: OpArgs,
    },
    /// Merge formulas by a common number of τ (or ◇) steps.
    Merge {
        universe: PathBuf,
        #[arg(required = true)]
        phis: Vec<String>,
        #[command(flatten)]
        op: OpArgs,
    },
    /// Compute the explanatory cut of `theory` for `phi`.
    Abduce {
        universe: PathBuf,
        theory: String,
        phi: String,
        #[arg(long, default_value = "lcr")]
        variant: AbductionVariant,
        #[arg(long, default_value = "semantic")]
        fixpoint: FixpointMode,
        /// Formulas to test as explanations; repeatable.
        #[arg(long = "candidate")]
        candidates: Vec<String>,
    },
    /// Classify two regions of one model by RCC-8.
    Rcc8 {
        bundle: PathBuf,
        phi: String,
        psi: String,
        #[arg(long)]
        model: Option<String>,
    },
    /// Run a property or postulate suite.
    Suite {
        universe: PathBuf,
        #[command(flatten)]
        args: suites::SuiteArgs,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct OpArgs {
    #[arg(long, default_value = "tau")]
    op: RevisionOp,
    #[arg(long, default_value = "semantic")]
    fixpoint: FixpointMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EquivalenceArg {
    Mods,
    Values,
}

impl From<EquivalenceArg> for Equivalence {
    fn from(e: EquivalenceArg) -> Self {
        match e {
            EquivalenceArg::Mods => Equivalence::Mods,
            EquivalenceArg::Values => Equivalence::Values,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json values serialize")
                );
            } else {
                print!("{}", out.text);
            }
            if out.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
