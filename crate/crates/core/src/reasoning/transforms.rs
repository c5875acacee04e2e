use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::logic::{Formula, Kind, ModelUniverse};

/// Which of the two structural maps to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Rho,
    Kappa,
}

/// How `τ` and `ζ` decide that a formula is a fixpoint of `ρ` / `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixpointMode {
    /// AST equality.
    Syntactic,
    /// Equal values in every model of the universe.
    #[default]
    Semantic,
}

impl std::str::FromStr for FixpointMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "syntactic" => Ok(FixpointMode::Syntactic),
            "semantic" => Ok(FixpointMode::Semantic),
            _ => Err(format!("unknown fixpoint mode `{s}` (syntactic|semantic)")),
        }
    }
}

#[derive(Default)]
struct Memo {
    rho: HashMap<Formula, Formula>,
    kappa: HashMap<Formula, Formula>,
}

impl Memo {
    fn rho(&mut self, f: &Formula) -> Formula {
        if let Some(r) = self.rho.get(f) {
            return r.clone();
        }
        let r = match f.kind() {
            Kind::Top | Kind::Bot | Kind::Var(_) => f.clone(),
            Kind::Imp(a, b) => Formula::or(
                Formula::imp(self.kappa(a), b.clone()),
                Formula::imp(a.clone(), self.rho(b)),
            ),
            Kind::And(a, b) => Formula::or(
                Formula::and(self.rho(a), b.clone()),
                Formula::and(a.clone(), self.rho(b)),
            ),
            Kind::Or(a, b) => Formula::or(
                Formula::or(self.rho(a), b.clone()),
                Formula::or(a.clone(), self.rho(b)),
            ),
            Kind::Not(a) => Formula::not(self.kappa(a)),
            Kind::Box(a) => Formula::dia(a.clone()),
            Kind::Dia(a) => Formula::dia(self.rho(a)),
        };
        self.rho.insert(f.clone(), r.clone());
        r
    }

    fn kappa(&mut self, f: &Formula) -> Formula {
        if let Some(r) = self.kappa.get(f) {
            return r.clone();
        }
        let r = match f.kind() {
            Kind::Top | Kind::Bot | Kind::Var(_) => f.clone(),
            Kind::Imp(a, b) => Formula::or(
                Formula::imp(a.clone(), self.kappa(b)),
                Formula::imp(self.rho(a), b.clone()),
            ),
            Kind::And(a, b) => Formula::or(
                Formula::and(self.kappa(a), b.clone()),
                Formula::and(a.clone(), self.kappa(b)),
            ),
            Kind::Or(a, b) => Formula::or(
                Formula::or(self.kappa(a), b.clone()),
                Formula::or(a.clone(), self.kappa(b)),
            ),
            Kind::Not(a) => Formula::not(self.rho(a)),
            Kind::Box(a) => Formula::boxed(self.kappa(a)),
            Kind::Dia(a) => Formula::boxed(a.clone()),
        };
        self.kappa.insert(f.clone(), r.clone());
        r
    }
}

/// `ρ(φ)`. Shared subtrees of the input stay shared in the output.
pub fn rho(f: &Formula) -> Formula {
    Memo::default().rho(f)
}

/// `κ(φ)`.
pub fn kappa(f: &Formula) -> Formula {
    Memo::default().kappa(f)
}

pub fn rho_kappa(which: Transform, f: &Formula) -> Formula {
    match which {
        Transform::Rho => rho(f),
        Transform::Kappa => kappa(f),
    }
}

fn is_fixpoint(
    universe: &ModelUniverse,
    f: &Formula,
    g: &Formula,
    mode: FixpointMode,
) -> Result<bool> {
    match mode {
        FixpointMode::Syntactic => Ok(f == g),
        FixpointMode::Semantic => universe.same_values(f, g),
    }
}

/// `τ(φ)`: `⊤` if `φ` is a `ρ`-fixpoint, else `ρ(φ)`.
pub fn tau(universe: &ModelUniverse, f: &Formula, mode: FixpointMode) -> Result<Formula> {
    let r = rho(f);
    Ok(if is_fixpoint(universe, f, &r, mode)? {
        Formula::top()
    } else {
        r
    })
}

/// `ζ(φ)`: `⊥` if `φ` is a `κ`-fixpoint, else `κ(φ)`.
pub fn zeta(universe: &ModelUniverse, f: &Formula, mode: FixpointMode) -> Result<Formula> {
    let k = kappa(f);
    Ok(if is_fixpoint(universe, f, &k, mode)? {
        Formula::bot()
    } else {
        k
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn clause_examples() {
        assert_eq!(rho(&p("[]p")), p("<>p"));
        assert_eq!(kappa(&p("<>p")), p("[]p"));
        assert_eq!(rho(&p("p")), p("p"));
        assert_eq!(kappa(&p("p")), p("p"));
        assert_eq!(rho(&p("p & q")), p("p & q | p & q"));
        assert_eq!(rho(&p("~p")), p("~p"));
        assert_eq!(rho(&p("T")), p("T"));
        assert_eq!(kappa(&p("F")), p("F"));
    }

    #[test]
    fn implication_and_negation_clauses() {
        assert_eq!(rho(&p("[]p -> q")), p("([]p -> q) | ([]p -> q)"));
        assert_eq!(rho(&p("q -> []p")), p("(q -> []p) | (q -> <>p)"));
        assert_eq!(kappa(&p("<>p -> q")), p("(<>p -> q) | (<>p -> q)"));
        assert_eq!(kappa(&p("q -> <>p")), p("(q -> []p) | (q -> <>p)"));
        assert_eq!(rho(&p("~<>p")), p("~[]p"));
        assert_eq!(kappa(&p("~[]p")), p("~<>p"));
        assert_eq!(kappa(&p("[]<>p")), p("[][]p"));
        assert_eq!(rho(&p("<>[]p")), p("<><>p"));
    }

    #[test]
    fn syntactic_tau_and_zeta() {
        let u = crate::universes::two_model_universe();
        let s = FixpointMode::Syntactic;
        assert_eq!(tau(&u, &p("p"), s).unwrap(), p("T"));
        assert_eq!(tau(&u, &p("[]p"), s).unwrap(), p("<>p"));
        assert_eq!(tau(&u, &p("<>p"), s).unwrap(), p("T"));
        assert_eq!(zeta(&u, &p("<>p"), s).unwrap(), p("[]p"));
        assert_eq!(tau(&u, &p("p & q"), s).unwrap(), p("p & q | p & q"));
        assert_eq!(
            tau(&u, &p("p & q"), FixpointMode::Semantic).unwrap(),
            p("T")
        );
    }
}
