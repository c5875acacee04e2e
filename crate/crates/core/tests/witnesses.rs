//! Known postulate failures, replayed through the operators directly.

use morpho_core::logic::{parse_formula, Formula, ModelUniverse};
use morpho_core::reasoning::{AbductionVariant, FixpointMode, Reasoner, RevisionOp};
use morpho_core::universes::{standard_valuation_universe, two_model_universe};
use morpho_core::Error;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

#[test]
fn dilation_revision_of_bot_is_undefined() {
    for u in [two_model_universe(), standard_valuation_universe()] {
        let r = Reasoner::new(&u, FixpointMode::Semantic);
        assert!(matches!(
            r.revise(RevisionOp::Dilation, &f("F"), &f("T")),
            Err(Error::RevisionUnreachable(_))
        ));
        assert!(r.revise(RevisionOp::Tau, &f("F"), &f("T")).is_ok());
    }
}

#[test]
fn tau_contraction_c2_and_c3() {
    let u = two_model_universe();
    let r = Reasoner::new(&u, FixpointMode::Semantic);

    // C2: φ ⊬ ψ, yet φ −̇ ψ is not below φ.
    let (phi, psi) = (f("q"), f("~p"));
    assert!(!u.entails(&phi, &psi).unwrap());
    let c = r.contract(RevisionOp::Tau, &phi, &psi).unwrap();
    assert!(!c.mods.is_subset(&u.mod_set(&phi).unwrap()));

    // C3: φ −̇ ψ ⊢ ψ without ⊢ ψ.
    let (phi, psi) = (f("F"), f("p"));
    let c = r.contract(RevisionOp::Tau, &phi, &psi).unwrap();
    assert!(c.mods.is_subset(&u.mod_set(&psi).unwrap()));
    assert_ne!(u.names(&u.mod_set(&psi).unwrap()).len(), u.len());
}

fn ror_fails(u: &ModelUniverse, alpha: &str, gamma: &str, delta: &str) {
    let r = Reasoner::new(u, FixpointMode::Semantic);
    let (gamma, delta) = (f(gamma), f(delta));
    for variant in [AbductionVariant::Lcr, AbductionVariant::Lnr] {
        let a = r.abduce(&[f("T")], &f(alpha), variant).unwrap();
        assert!(a.explains(u, &gamma).unwrap());
        assert!(a.explains(u, &delta).unwrap());
        assert!(!a
            .explains(u, &Formula::or(gamma.clone(), delta.clone()))
            .unwrap());
    }
}

#[test]
fn ror_two_models() {
    ror_fails(&two_model_universe(), "p", "p", "(q | F) -> (p -> F)");
}

#[test]
fn ror_valuation_universe() {
    ror_fails(&standard_valuation_universe(), "[]q | (F | p)", "p", "q");
}
