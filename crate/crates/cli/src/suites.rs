use std::fmt::Write as _;

use anyhow::{Context, Result};
use clap::ValueEnum;
use morpho_core::bundle::Loaded;
use morpho_core::logic::{check_soundness, SoundnessConfig};
use morpho_core::morphology::{
    check_element_laws, check_neighborhood_laws, MorphoReport, StructuringNeighborhood,
};
use morpho_core::reasoning::{
    check_postulates, generate_corpus, minimality_suite, sample_domain, AbductionVariant,
    FixpointMode, RevisionOp, Suite, SuiteConfig,
};
use morpho_core::sublattice::{enumerate_subobjects, DEFAULT_CAP};
use serde_json::{json, Value};

use crate::commands::{value_json, Outcome};
use crate::EquivalenceArg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    Morphology,
    Logic,
    Agm,
    Contraction,
    Abduction,
    Minimality,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SuiteArgs {
    #[arg(long, value_enum, default_value = "agm")]
    suite: SuiteKind,
    /// Corpus depth.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest corpus.
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
    /// Largest number of enumerated subobjects.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    subobject_cap: u64,
    /// Restrict revision-based suites to one operator.
    #[arg(long)]
    op: Option<RevisionOp>,
    /// Restrict the abduction suite to one variant.
    #[arg(long)]
    variant: Option<AbductionVariant>,
    #[arg(long, default_value = "semantic")]
    fixpoint: FixpointMode,
    /// What `≡` means in equivalence postulates.
    #[arg(long, value_enum, default_value = "mods")]
    equivalence: EquivalenceArg,
    /// Formulas in the pair-quantifier domain (default 1500; abduction 300; logic 300).
    #[arg(long)]
    pairs: Option<usize>,
    /// Formulas in the triple-quantifier domain (default 120; abduction 60; logic 40).
    #[arg(long)]
    triples: Option<usize>,
    /// Theories sampled by the abduction suite.
    #[arg(long, default_value_t = 8)]
    theories: usize,
    /// Formulas φ sampled by the minimality suite.
    #[arg(long, default_value_t = 100)]
    phis: usize,
}

pub fn run(l: &Loaded, a: &SuiteArgs) -> Result<Outcome> {
    match a.suite {
        SuiteKind::Morphology => morphology(l, a),
        kind => {
            let u = l.universe()?;
            let corpus = generate_corpus(u.vars(), a.depth, a.cap);
            let ops =
                a.op.map_or(vec![RevisionOp::Dilation, RevisionOp::Tau], |o| vec![o]);
            match kind {
                SuiteKind::Logic => {
                    let d = SoundnessConfig::default();
                    let cfg = SoundnessConfig {
                        seed: a.seed,
                        pair_domain: a.pairs.unwrap_or(d.pair_domain),
                        triple_domain: a.triples.unwrap_or(d.triple_domain),
                    };
                    let r = check_soundness(&u, &corpus, cfg)?;
                    let mut text = format!(
                        "soundness on {} ({} models, {} topological, {} Set), corpus {}, domains {}/{}, seed {}\n",
                        r.universe, r.models, r.topological, r.boolean, r.corpus, r.pair_domain, r.triple_domain, r.seed
                    );
                    for rule in &r.rules {
                        let _ = write!(
                            text,
                            "{:<22} {:>9} {:>10} {}",
                            rule.rule.name(),
                            rule.instances,
                            rule.checks,
                            if rule.counterexample.is_none() {
                                "✓"
                            } else {
                                "✗"
                            }
                        );
                        if let Some(w) = &rule.counterexample {
                            let _ = write!(
                                text,
                                "   in {}: {} / {}",
                                w.model,
                                w.premises.join(", "),
                                w.conclusion
                            );
                        }
                        text.push('\n');
                    }
                    Ok(Outcome {
                        text,
                        verdict: r.pass(),
                        json: serde_json::to_value(&r)?,
                    })
                }
                SuiteKind::Minimality => {
                    let phis = sample_domain(&corpus, a.phis, a.seed);
                    let mut reports = Vec::new();
                    let mut text = String::new();
                    for op in ops {
                        let r = minimality_suite(&u, &corpus, &phis, op, a.fixpoint)?;
                        let _ = writeln!(
                            text,
                            "minimality/{}: {} φ over corpus {}, {} partial, {} failing",
                            json!(op).as_str().unwrap_or_default(),
                            r.phis,
                            r.corpus,
                            r.partial,
                            r.failures.len()
                        );
                        for f in &r.failures {
                            let _ = writeln!(
                                text,
                                "  φ = {}: FA1 {} FA2 {} minimality {} {}",
                                f.phi,
                                f.fa1,
                                f.fa2,
                                f.minimality,
                                f.counterexample.as_deref().unwrap_or("")
                            );
                        }
                        reports.push(r);
                    }
                    Ok(Outcome {
                        text,
                        verdict: reports.iter().all(|r| r.pass()),
                        json: json!({ "reports": reports }),
                    })
                }
                _ => {
                    let suites: Vec<Suite> = match kind {
                        SuiteKind::Agm => ops.into_iter().map(Suite::Agm).collect(),
                        SuiteKind::Contraction => ops.into_iter().map(Suite::Contraction).collect(),
                        _ => a
                            .variant
                            .map_or(vec![AbductionVariant::Lcr, AbductionVariant::Lnr], |v| {
                                vec![v]
                            })
                            .into_iter()
                            .map(Suite::Abduction)
                            .collect(),
                    };
                    // Abduction quantifies over pairs cubically; it gets smaller domains.
                    let d = match kind {
                        SuiteKind::Abduction => SuiteConfig {
                            pair_domain: 300,
                            triple_domain: 60,
                            ..SuiteConfig::default()
                        },
                        _ => SuiteConfig::default(),
                    };
                    let cfg = SuiteConfig {
                        mode: a.fixpoint,
                        equivalence: a.equivalence.into(),
                        seed: a.seed,
                        pair_domain: a.pairs.unwrap_or(d.pair_domain),
                        triple_domain: a.triples.unwrap_or(d.triple_domain),
                        theories: a.theories,
                    };
                    let reports = suites
                        .into_iter()
                        .map(|s| {
                            check_postulates(&u, &corpus, s, &cfg)
                                .with_context(|| format!("suite {s}"))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let text = reports
                        .iter()
                        .map(|r| r.table())
                        .collect::<Vec<_>>()
                        .join("\n");
                    Ok(Outcome {
                        text,
                        verdict: reports.iter().all(|r| r.claims_hold()),
                        json: json!({ "reports": reports }),
                    })
                }
            }
        }
    }
}

fn row(r: &MorphoReport) -> Value {
    json!({
        "law": r.property,
        "pass": r.pass,
        "detail": r.detail,
        "witnesses": r.witnesses.iter().map(value_json).collect::<Vec<_>>(),
    })
}

fn morphology(l: &Loaded, a: &SuiteArgs) -> Result<Outcome> {
    let subs = enumerate_subobjects(&l.space, a.subobject_cap)?;
    let n = &l.neighborhood;
    let topological = n.is_topological_neighborhood();
    let mut laws = vec![n.is_structuring_neighborhood()];
    laws.extend(check_neighborhood_laws(n, &subs, topological.pass));
    let mut notes = Vec::new();
    if let StructuringNeighborhood::Derived(b) = n {
        laws.extend(check_element_laws(b, &subs));
        match n.materialize(a.subobject_cap) {
            Ok(table) => {
                let table = StructuringNeighborhood::Explicit(table);
                let e = subs
                    .iter()
                    .find(|y| table.erosion(y).ok() != b.erosion(y).ok());
                let d = subs
                    .iter()
                    .find(|y| table.dilation(y).ok() != b.dilation_transposed(y).ok());
                laws.push(agreement("ε[N_b] = ε[b]", e));
                laws.push(agreement("δ[N_b] = δ[b̆]", d));
            }
            Err(e) => notes.push(format!("N_b not materialized: {e}")),
        }
    }
    let pass = laws.iter().all(|r| r.pass);
    let mut text = format!(
        "{} subobjects, topological: {}\n",
        subs.len(),
        topological.pass
    );
    for r in &laws {
        let _ = write!(
            text,
            "{:<34} {}",
            r.property,
            if r.pass { "✓" } else { "✗" }
        );
        if !r.pass {
            let w: Vec<String> = r.witnesses.iter().map(|w| w.to_string()).collect();
            let _ = write!(text, "   {} {}", r.detail, w.join(" "));
        }
        text.push('\n');
    }
    for note in &notes {
        let _ = writeln!(text, "note: {note}");
    }
    Ok(Outcome {
        text,
        verdict: pass,
        json: json!({
            "subobjects": subs.len(),
            "topological": row(&topological),
            "laws": laws.iter().map(row).collect::<Vec<_>>(),
            "notes": notes,
        }),
    })
}

fn agreement(law: &str, witness: Option<&morpho_core::sublattice::Subpresheaf>) -> MorphoReport {
    MorphoReport {
        property: law.to_string(),
        pass: witness.is_none(),
        detail: if witness.is_some() {
            "differs at Y".into()
        } else {
            String::new()
        },
        witnesses: witness.into_iter().cloned().collect(),
    }
}
