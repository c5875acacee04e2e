use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::transforms::{tau, zeta, FixpointMode};
use crate::error::{Error, Result};
use crate::logic::{Formula, ModSet, ModelUniverse};

/// Default bound on `τ`/`ζ` iterations in syntactic mode.
pub const SYNTACTIC_STEP_CAP: usize = 32;

/// The revision operator underlying revision, contraction and the suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RevisionOp {
    /// `◇ⁿφ ∧ ψ`.
    Dilation,
    /// `τⁿ(φ) ∧ ψ`.
    Tau,
}

impl std::str::FromStr for RevisionOp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dilation" => Ok(RevisionOp::Dilation),
            "tau" => Ok(RevisionOp::Tau),
            _ => Err(format!("unknown revision operator `{s}` (dilation|tau)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AbductionVariant {
    /// Cut `ζⁿ(⋀T) ∧ φ`.
    Lcr,
    /// Cut `ζⁿ(⋀T ∧ φ)`.
    Lnr,
}

impl std::str::FromStr for AbductionVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lcr" => Ok(AbductionVariant::Lcr),
            "lnr" => Ok(AbductionVariant::Lnr),
            _ => Err(format!("unknown abduction variant `{s}` (lcr|lnr)")),
        }
    }
}

/// One iterate of a chain, with its packed values and models.
#[derive(Debug, Clone)]
pub struct Step {
    pub formula: Formula,
    pub values: Arc<FixedBitSet>,
    pub mods: ModSet,
}

/// `φ, f(φ), f²(φ), …` until a fixpoint or the step cap.
#[derive(Debug, Clone)]
pub struct Chain {
    pub steps: Vec<Step>,
    /// The last step repeats forever.
    pub closed: bool,
}

impl Chain {
    /// The `k`-th iterate, if known.
    pub fn get(&self, k: usize) -> Option<&Step> {
        match self.steps.get(k) {
            Some(s) => Some(s),
            None if self.closed => self.steps.last(),
            None => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ChainKind {
    Dia,
    Tau,
    Zeta,
}

/// The result of `φ ∘ ψ`.
#[derive(Debug, Clone)]
pub struct Revision {
    pub formula: Formula,
    pub n: usize,
    pub mods: ModSet,
}

#[derive(Debug, Clone)]
pub struct Contraction {
    pub formula: Formula,
    /// `None` when `¬ψ` has no model and the revision disjunct is `⊥`.
    pub revision: Option<Revision>,
    pub mods: ModSet,
}

#[derive(Debug, Clone)]
pub struct Merge {
    pub formula: Formula,
    pub n: usize,
    pub mods: ModSet,
}

/// The cut `Mod(ζⁿ(⋀T) ∧ φ)` (or `Mod(ζⁿ(⋀T ∧ φ))`) of an abduction problem.
#[derive(Debug, Clone)]
pub struct Abduction {
    pub variant: AbductionVariant,
    pub theory: Formula,
    pub n: usize,
    pub cut_formula: Formula,
    pub cut: ModSet,
    pub theory_mods: ModSet,
}

impl Abduction {
    /// `Mod(T ∪ {ψ}) ≠ ∅` and `Mod(T ∪ {ψ}) ⊆` the cut.
    pub fn explains(&self, universe: &ModelUniverse, psi: &Formula) -> Result<bool> {
        let mut m = universe.mod_set(psi)?;
        m.intersect_with(&self.theory_mods);
        Ok(self.explains_mods(&m))
    }

    /// [`Abduction::explains`] given `Mod(T ∪ {ψ})`.
    pub fn explains_mods(&self, theory_and_psi: &ModSet) -> bool {
        !theory_and_psi.is_clear() && theory_and_psi.is_subset(&self.cut)
    }
}

/// Chain cache over one universe. All operators go through a `Reasoner`.
pub struct Reasoner<'u> {
    universe: &'u ModelUniverse,
    mode: FixpointMode,
    step_cap: usize,
    chains: Mutex<HashMap<(ChainKind, Formula), Arc<Chain>>>,
}

impl<'u> Reasoner<'u> {
    pub fn new(universe: &'u ModelUniverse, mode: FixpointMode) -> Self {
        Reasoner {
            universe,
            mode,
            step_cap: SYNTACTIC_STEP_CAP,
            chains: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_step_cap(mut self, cap: usize) -> Self {
        self.step_cap = cap;
        self
    }

    pub fn universe(&self) -> &'u ModelUniverse {
        self.universe
    }

    pub fn mode(&self) -> FixpointMode {
        self.mode
    }

    fn step(&self, formula: Formula) -> Result<Step> {
        let values = self.universe.values(&formula)?;
        let mods = self.universe.mods_of(&values);
        Ok(Step {
            formula,
            values,
            mods,
        })
    }

    fn chain(&self, kind: ChainKind, start: &Formula) -> Result<Arc<Chain>> {
        let key = (kind, start.clone());
        if let Some(c) = self.chains.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let u = self.universe;
        let mut steps = vec![self.step(start.clone())?];
        let mut closed = false;
        // Semantic chains are monotone in a finite lattice, so a strictly
        // moving chain is never longer than the packed width.
        let cap = if self.mode == FixpointMode::Semantic || kind == ChainKind::Dia {
            self.step_cap.max(u.packed_len() + 2)
        } else {
            self.step_cap
        };
        while steps.len() <= cap {
            let last = steps.last().unwrap();
            let next = match kind {
                ChainKind::Dia => Formula::dia(last.formula.clone()),
                ChainKind::Tau => tau(u, &last.formula, self.mode)?,
                ChainKind::Zeta => zeta(u, &last.formula, self.mode)?,
            };
            let step = self.step(next)?;
            let fixed = match kind {
                ChainKind::Dia => step.values == last.values,
                ChainKind::Tau | ChainKind::Zeta => step.formula == last.formula,
            };
            if fixed {
                closed = true;
                break;
            }
            steps.push(step);
        }
        let chain = Arc::new(Chain { steps, closed });
        self.chains.lock().unwrap().insert(key, chain.clone());
        Ok(chain)
    }

    /// `◇ᵏφ` for `k = 0, 1, …` until the values stabilise.
    pub fn dilation_chain(&self, phi: &Formula) -> Result<Arc<Chain>> {
        self.chain(ChainKind::Dia, phi)
    }

    /// `τᵏ(φ)` until `⊤` (or the step cap in syntactic mode).
    pub fn tau_chain(&self, phi: &Formula) -> Result<Arc<Chain>> {
        self.chain(ChainKind::Tau, phi)
    }

    /// `ζᵏ(φ)` until `⊥` (or the step cap in syntactic mode).
    pub fn zeta_chain(&self, phi: &Formula) -> Result<Arc<Chain>> {
        self.chain(ChainKind::Zeta, phi)
    }

    pub fn revision_chain(&self, op: RevisionOp, phi: &Formula) -> Result<Arc<Chain>> {
        match op {
            RevisionOp::Dilation => self.dilation_chain(phi),
            RevisionOp::Tau => self.tau_chain(phi),
        }
    }

    /// The least `n` with `Mod(chain[n]) ∩ target ≠ ∅`.
    fn first_meeting(chain: &Chain, target: &ModSet) -> Option<usize> {
        chain.steps.iter().position(|s| !s.mods.is_disjoint(target))
    }

    /// `Mod(φ ∘ ψ)` and `n` from `Mod(ψ)`, or `None` if no iterate meets it.
    pub fn revise_mods(
        &self,
        op: RevisionOp,
        phi: &Formula,
        psi_mods: &ModSet,
    ) -> Result<Option<(usize, ModSet)>> {
        let chain = self.revision_chain(op, phi)?;
        Ok(Self::first_meeting(&chain, psi_mods).map(|n| {
            let mut m = chain.steps[n].mods.clone();
            m.intersect_with(psi_mods);
            (n, m)
        }))
    }

    /// `χⁿ ∧ ψ` with the least `n` making it consistent.
    pub fn revise(&self, op: RevisionOp, phi: &Formula, psi: &Formula) -> Result<Revision> {
        let psi_mods = self.universe.mod_set(psi)?;
        if psi_mods.is_clear() {
            return Err(Error::RevisionUnreachable(format!("`{psi}` has no model")));
        }
        let chain = self.revision_chain(op, phi)?;
        match Self::first_meeting(&chain, &psi_mods) {
            Some(n) => {
                let formula = Formula::and(chain.steps[n].formula.clone(), psi.clone());
                let mods = self.universe.mod_set(&formula)?;
                Ok(Revision { formula, n, mods })
            }
            None if chain.closed => Err(Error::RevisionUnreachable(format!(
                "the iterates of `{phi}` stabilise after {} steps without meeting `{psi}`",
                chain.steps.len() - 1
            ))),
            None => Err(Error::RevisionUnreachable(format!(
                "no iterate of `{phi}` within {} steps meets `{psi}`",
                self.step_cap
            ))),
        }
    }

    /// `(φ ∘ ¬ψ) ∨ φ`. When `¬ψ` has no model the revision disjunct is `⊥`.
    pub fn contract(&self, op: RevisionOp, phi: &Formula, psi: &Formula) -> Result<Contraction> {
        let neg = Formula::not(psi.clone());
        let revision = if self.universe.consistent(&neg)? {
            Some(self.revise(op, phi, &neg)?)
        } else {
            None
        };
        let left = revision
            .as_ref()
            .map_or_else(Formula::bot, |r| r.formula.clone());
        let formula = Formula::or(left, phi.clone());
        let mods = self.universe.mod_set(&formula)?;
        Ok(Contraction {
            formula,
            revision,
            mods,
        })
    }

    /// `⋀ τⁿ(φᵢ)` with the least `n` making it consistent.
    pub fn merge(&self, phis: &[Formula]) -> Result<Merge> {
        self.merge_with(RevisionOp::Tau, phis)
    }

    /// Merging along the chains of `op`: `⋀ ◇ⁿ(φᵢ)` for [`RevisionOp::Dilation`].
    pub fn merge_with(&self, op: RevisionOp, phis: &[Formula]) -> Result<Merge> {
        if phis.is_empty() {
            return Err(Error::MergeUnreachable("nothing to merge".into()));
        }
        let chains = phis
            .iter()
            .map(|f| self.revision_chain(op, f))
            .collect::<Result<Vec<_>>>()?;
        let longest = chains.iter().map(|c| c.steps.len()).max().unwrap();
        for n in 0..longest {
            let mut acc: Option<ModSet> = None;
            let mut known = true;
            for c in &chains {
                match c.get(n) {
                    Some(s) => match &mut acc {
                        None => acc = Some(s.mods.clone()),
                        Some(a) => a.intersect_with(&s.mods),
                    },
                    None => known = false,
                }
            }
            if !known {
                break;
            }
            if !acc.unwrap().is_clear() {
                let formula =
                    Formula::conj(chains.iter().map(|c| c.get(n).unwrap().formula.clone()));
                let mods = self.universe.mod_set(&formula)?;
                return Ok(Merge { formula, n, mods });
            }
        }
        Err(Error::MergeUnreachable(format!(
            "no common iterate is consistent within {} steps",
            longest - 1
        )))
    }

    /// The abduction cut of `φ` against the theory `T`.
    pub fn abduce(
        &self,
        theory: &[Formula],
        phi: &Formula,
        variant: AbductionVariant,
    ) -> Result<Abduction> {
        let t = Formula::conj(theory.iter().cloned());
        let theory_mods = self.universe.mod_set(&t)?;
        let phi_mods = self.universe.mod_set(phi)?;
        let mut tp = theory_mods.clone();
        tp.intersect_with(&phi_mods);
        if tp.is_clear() {
            return Err(Error::AbductionUndefined(format!(
                "`{phi}` has no model of the theory"
            )));
        }
        let (chain, target) = match variant {
            AbductionVariant::Lcr => (self.zeta_chain(&t)?, phi_mods),
            AbductionVariant::Lnr => {
                let start = Formula::and(t.clone(), phi.clone());
                let mut all = FixedBitSet::with_capacity(self.universe.len());
                all.insert_range(..);
                (self.zeta_chain(&start)?, all)
            }
        };
        let meets: Vec<bool> = chain
            .steps
            .iter()
            .map(|s| !s.mods.is_disjoint(&target))
            .collect();
        if !chain.closed && *meets.last().unwrap() {
            return Err(Error::AbductionUndefined(format!(
                "the iterates are still consistent after {} steps",
                self.step_cap
            )));
        }
        // Models of ζᵏ shrink with k, so the consistent iterates form a prefix.
        let n = meets.iter().rposition(|&m| m).expect("step 0 meets");
        let step = &chain.steps[n];
        let (cut_formula, cut) = match variant {
            AbductionVariant::Lcr => {
                let f = Formula::and(step.formula.clone(), phi.clone());
                let m = self.universe.mod_set(&f)?;
                (f, m)
            }
            AbductionVariant::Lnr => (step.formula.clone(), step.mods.clone()),
        };
        Ok(Abduction {
            variant,
            theory: t,
            n,
            cut_formula,
            cut,
            theory_mods,
        })
    }
}

/// `◇ⁿφ ∧ ψ` with minimal `n`.
pub fn revise_dilation(universe: &ModelUniverse, phi: &Formula, psi: &Formula) -> Result<Revision> {
    Reasoner::new(universe, FixpointMode::Semantic).revise(RevisionOp::Dilation, phi, psi)
}

/// `τⁿ(φ) ∧ ψ` with minimal `n`.
pub fn revise_tau(
    universe: &ModelUniverse,
    phi: &Formula,
    psi: &Formula,
    mode: FixpointMode,
) -> Result<Revision> {
    Reasoner::new(universe, mode).revise(RevisionOp::Tau, phi, psi)
}

pub fn contract(
    universe: &ModelUniverse,
    phi: &Formula,
    psi: &Formula,
    op: RevisionOp,
    mode: FixpointMode,
) -> Result<Contraction> {
    Reasoner::new(universe, mode).contract(op, phi, psi)
}

pub fn merge(universe: &ModelUniverse, phis: &[Formula], mode: FixpointMode) -> Result<Merge> {
    Reasoner::new(universe, mode).merge(phis)
}

pub fn abduce(
    universe: &ModelUniverse,
    theory: &[Formula],
    phi: &Formula,
    variant: AbductionVariant,
    mode: FixpointMode,
) -> Result<Abduction> {
    Reasoner::new(universe, mode).abduce(theory, phi, variant)
}
