use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use morpho_core::bundle::{load_bundle, load_derivation, selection_ids, Loaded};
use morpho_core::logic::{
    check_derivation, parse_formula, parse_sequent, CheckFlags, Formula, ModSet, Model,
    ModelUniverse,
};
use morpho_core::rcc8::classify;
use morpho_core::reasoning::Reasoner;
use morpho_core::sublattice::Subpresheaf;
use morpho_core::Error;
use serde_json::{json, Value};

use crate::{suites, Command};

/// A command's report: text for people, JSON for machines, and the verdict.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub verdict: bool,
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Validate { bundle } => validate(&load(bundle)?),
        Command::Eval {
            bundle,
            formula,
            model,
        } => eval(&load(bundle)?, &formula_arg(formula)?, model.as_deref()),
        Command::Sequent {
            bundle,
            sequent,
            model,
        } => {
            let (l, r) =
                parse_sequent(sequent).with_context(|| format!("in sequent `{sequent}`"))?;
            sequent_cmd(&load(bundle)?, &l, &r, model.as_deref())
        }
        Command::ProveCheck {
            derivation,
            s4,
            classical,
        } => prove_check(
            derivation,
            CheckFlags {
                allow_s4: *s4,
                allow_classical: *classical,
            },
        ),
        Command::Revise {
            universe,
            phi,
            psi,
            op,
        } => {
            let u = universe_of(universe)?;
            let r = Reasoner::new(&u, op.fixpoint);
            let (phi, psi) = (formula_arg(phi)?, formula_arg(psi)?);
            let head = json!({"op": op.op, "fixpoint": op.fixpoint, "phi": phi.to_string(), "psi": psi.to_string()});
            match r.revise(op.op, &phi, &psi) {
                Ok(rev) => Ok(defined(
                    head,
                    format!("{phi} ∘ {psi}"),
                    &rev.formula,
                    Some(rev.n),
                    names(&u, &rev.mods),
                )),
                Err(e @ Error::RevisionUnreachable(_)) => Ok(undefined(head, &e)),
                Err(e) => Err(e.into()),
            }
        }
        Command::Contract {
            universe,
            phi,
            psi,
            op,
        } => {
            let u = universe_of(universe)?;
            let r = Reasoner::new(&u, op.fixpoint);
            let (phi, psi) = (formula_arg(phi)?, formula_arg(psi)?);
            let head = json!({"op": op.op, "fixpoint": op.fixpoint, "phi": phi.to_string(), "psi": psi.to_string()});
            match r.contract(op.op, &phi, &psi) {
                Ok(c) => Ok(defined(
                    head,
                    format!("{phi} −̇ {psi}"),
                    &c.formula,
                    c.revision.map(|r| r.n),
                    names(&u, &c.mods),
                )),
                Err(e @ Error::RevisionUnreachable(_)) => Ok(undefined(head, &e)),
                Err(e) => Err(e.into()),
            }
        }
        Command::Merge { universe, phis, op } => {
            let u = universe_of(universe)?;
            let phis = phis
                .iter()
                .map(|p| formula_arg(p))
                .collect::<Result<Vec<_>>>()?;
            let shown: Vec<String> = phis.iter().map(|p| p.to_string()).collect();
            let head = json!({"op": op.op, "fixpoint": op.fixpoint, "phis": shown});
            match Reasoner::new(&u, op.fixpoint).merge_with(op.op, &phis) {
                Ok(m) => Ok(defined(
                    head,
                    format!("Δ({})", shown.join(", ")),
                    &m.formula,
                    Some(m.n),
                    names(&u, &m.mods),
                )),
                Err(e @ Error::MergeUnreachable(_)) => Ok(undefined(head, &e)),
                Err(e) => Err(e.into()),
            }
        }
        Command::Abduce {
            universe,
            theory,
            phi,
            variant,
            fixpoint,
            candidates,
        } => {
            let u = universe_of(universe)?;
            let (theory, phi) = (formula_arg(theory)?, formula_arg(phi)?);
            let candidates = candidates
                .iter()
                .map(|c| formula_arg(c))
                .collect::<Result<Vec<_>>>()?;
            abduce(&u, &theory, &phi, *variant, *fixpoint, &candidates)
        }
        Command::Rcc8 {
            bundle,
            phi,
            psi,
            model,
        } => {
            let loaded = load(bundle)?;
            let m = pick(&loaded, model.as_deref())?.remove(0);
            let (phi, psi) = (formula_arg(phi)?, formula_arg(psi)?);
            let report = classify(m, &phi, &psi)?;
            let flags: Vec<String> = report.flagged().iter().map(|r| r.to_string()).collect();
            let mut text = format!(
                "model {}\nrelation: {}\nflags: C={} {}\n",
                m.name(),
                report.relation.map_or("none".into(), |r| r.to_string()),
                report.c,
                flags.join(" ")
            );
            for (f, v) in &report.witnesses {
                let _ = writeln!(text, "  ⟦{f}⟧ = {v}");
            }
            let mut json = serde_json::to_value(&report)?;
            json["model"] = json!(m.name());
            Ok(Outcome {
                text,
                json,
                verdict: true,
            })
        }
        Command::Suite { universe, args } => suites::run(&load(universe)?, args),
    }
}

fn load(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read `{}`", path.display()))?;
    load_bundle(&text).with_context(|| format!("in `{}`", path.display()))
}

fn universe_of(path: &Path) -> Result<ModelUniverse> {
    load(path)?
        .universe()
        .with_context(|| format!("in `{}`", path.display()))
}

fn formula_arg(src: &str) -> Result<Formula> {
    parse_formula(src).with_context(|| format!("in formula `{src}`"))
}

fn pick<'a>(loaded: &'a Loaded, name: Option<&str>) -> Result<Vec<&'a Model>> {
    match name {
        None => Ok(loaded.models.iter().collect()),
        Some(n) => match loaded.models.iter().find(|m| m.name() == n) {
            Some(m) => Ok(vec![m]),
            None => bail!("no model named `{n}`"),
        },
    }
}

/// Element ids, sorted: a list on the Set backend, an object map otherwise.
pub fn value_json(sub: &Subpresheaf) -> Value {
    let ids = selection_ids(sub);
    if sub.parent().category().is_set_backend() {
        json!(ids.into_values().next().unwrap_or_default())
    } else {
        json!(ids)
    }
}

fn names(u: &ModelUniverse, mods: &ModSet) -> Vec<String> {
    let mut n = u.names(mods);
    n.sort();
    n
}

fn validate(l: &Loaded) -> Result<Outcome> {
    let cat = l.space.category();
    let stages: Vec<(String, usize)> = (0..cat.num_objects())
        .map(|c| (cat.objects()[c].clone(), l.space.stage_len(c)))
        .collect();
    let first = l.model();
    let structuring = l.neighborhood.is_structuring_neighborhood();
    let topological = first.is_topological();
    let vars = first.vars();
    let kind = match l.neighborhood {
        morpho_core::morphology::StructuringNeighborhood::Derived(_) => "element",
        morpho_core::morphology::StructuringNeighborhood::Explicit(_) => "explicit",
    };
    let mut text = String::new();
    let _ = writeln!(
        text,
        "backend: {}",
        if cat.is_set_backend() {
            "set"
        } else {
            "presheaf"
        }
    );
    for (o, n) in &stages {
        let _ = writeln!(text, "stage {o}: {n} elements");
    }
    let _ = writeln!(
        text,
        "neighborhood: {kind}, structuring {}, topological {topological}",
        structuring.pass
    );
    let _ = writeln!(text, "variables: {}", vars.join(", "));
    let _ = writeln!(text, "models: {}", l.models.len());
    let stage_json: serde_json::Map<String, Value> =
        stages.iter().map(|(o, n)| (o.clone(), json!(n))).collect();
    Ok(Outcome {
        text,
        json: json!({
            "backend": if cat.is_set_backend() { "set" } else { "presheaf" },
            "stages": stage_json,
            "neighborhood": kind,
            "structuring": structuring.pass,
            "topological": topological,
            "boolean": first.is_boolean(),
            "variables": vars,
            "models": l.models.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "valid": true,
        }),
        verdict: true,
    })
}

fn eval(l: &Loaded, f: &Formula, model: Option<&str>) -> Result<Outcome> {
    let models = pick(l, model)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for m in &models {
        let v = m.eval(f)?;
        all &= v.is_top();
        if models.len() == 1 {
            let _ = writeln!(text, "{v}\nvalid: {}", v.is_top());
        } else {
            let _ = writeln!(text, "{}: {v}  valid: {}", m.name(), v.is_top());
        }
        rows.push(json!({"model": m.name(), "value": value_json(&v), "valid": v.is_top()}));
    }
    Ok(Outcome {
        text,
        json: json!({"formula": f.to_string(), "models": rows, "valid": all}),
        verdict: true,
    })
}

fn sequent_cmd(l: &Loaded, lhs: &Formula, rhs: &Formula, model: Option<&str>) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut failing = Vec::new();
    for m in pick(l, model)? {
        let ok = m.sequent_valid(lhs, rhs)?;
        if !ok {
            failing.push(m.name().to_string());
        }
        rows.push(json!({"model": m.name(), "lhs": value_json(&m.eval(lhs)?), "rhs": value_json(&m.eval(rhs)?), "valid": ok}));
    }
    let valid = failing.is_empty();
    let mut text = format!("{lhs} |- {rhs}\nvalid: {valid}\n");
    if !valid {
        let _ = writeln!(text, "fails in: {}", failing.join(", "));
    }
    Ok(Outcome {
        text,
        json: json!({"sequent": format!("{lhs} |- {rhs}"), "models": rows, "valid": valid}),
        verdict: valid,
    })
}

fn prove_check(path: &Path, flags: CheckFlags) -> Result<Outcome> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read `{}`", path.display()))?;
    let d = load_derivation(&text).with_context(|| format!("in `{}`", path.display()))?;
    let r = check_derivation(&d, flags);
    let text = if r.accepted {
        "accepted\n".to_string()
    } else {
        format!(
            "rejected at node {:?}: {} on `{}`\nexpected: {}\n",
            r.path,
            r.rule.map_or("?", |r| r.name()),
            r.sequent.as_deref().unwrap_or(""),
            r.expected
        )
    };
    Ok(Outcome {
        text,
        json: json!({
            "accepted": r.accepted,
            "path": r.path,
            "rule": r.rule.map(|r| r.name()),
            "sequent": r.sequent,
            "expected": r.expected,
        }),
        verdict: r.accepted,
    })
}

fn defined(
    mut head: Value,
    label: String,
    f: &Formula,
    n: Option<usize>,
    mods: Vec<String>,
) -> Outcome {
    let mut text = format!("{label} = {f}\n");
    if let Some(n) = n {
        let _ = writeln!(text, "n = {n}");
    }
    let _ = writeln!(text, "Mod = {{{}}}", mods.join(", "));
    head["defined"] = json!(true);
    head["formula"] = json!(f.to_string());
    head["n"] = json!(n);
    head["mods"] = json!(mods);
    Outcome {
        text,
        json: head,
        verdict: true,
    }
}

fn undefined(mut head: Value, e: &Error) -> Outcome {
    head["defined"] = json!(false);
    head["reason"] = json!(e.to_string());
    Outcome {
        text: format!("undefined: {e}\n"),
        json: head,
        verdict: false,
    }
}

fn abduce(
    u: &ModelUniverse,
    theory: &Formula,
    phi: &Formula,
    variant: morpho_core::reasoning::AbductionVariant,
    fixpoint: morpho_core::reasoning::FixpointMode,
    candidates: &[Formula],
) -> Result<Outcome> {
    let head = json!({"variant": variant, "fixpoint": fixpoint, "theory": theory.to_string(), "phi": phi.to_string()});
    let a = match Reasoner::new(u, fixpoint).abduce(std::slice::from_ref(theory), phi, variant) {
        Ok(a) => a,
        Err(e @ Error::AbductionUndefined(_)) => return Ok(undefined(head, &e)),
        Err(e) => return Err(e.into()),
    };
    let mut text = format!(
        "n = {}\ncut: {}\nMod(cut) = {{{}}}\nMod(theory) = {{{}}}\n",
        a.n,
        a.cut_formula,
        names(u, &a.cut).join(", "),
        names(u, &a.theory_mods).join(", ")
    );
    let mut rows = Vec::new();
    for c in candidates {
        let ok = a.explains(u, c)?;
        let _ = writeln!(
            text,
            "{c}: {}",
            if ok { "explains" } else { "does not explain" }
        );
        rows.push(json!({"candidate": c.to_string(), "explains": ok}));
    }
    let mut json = head;
    json["defined"] = json!(true);
    json["n"] = json!(a.n);
    json["cut_formula"] = json!(a.cut_formula.to_string());
    json["cut"] = json!(names(u, &a.cut));
    json["theory_mods"] = json!(names(u, &a.theory_mods));
    json["candidates"] = json!(rows);
    Ok(Outcome {
        text,
        json,
        verdict: true,
    })
}
