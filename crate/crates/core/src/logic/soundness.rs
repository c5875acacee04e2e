//! Soundness harness: every axiom and rule instance over a corpus, checked in
//! every model of a universe.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{Formula, ModSet, ModelUniverse, Rule};
use crate::error::Result;
use crate::reasoning::sample_domain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SoundnessConfig {
    pub seed: u64,
    /// Size of the domain for two-metavariable schemas.
    pub pair_domain: usize,
    /// Size of the domain for three-metavariable schemas.
    pub triple_domain: usize,
}

impl Default for SoundnessConfig {
    fn default() -> Self {
        SoundnessConfig {
            seed: 0,
            pair_domain: 300,
            triple_domain: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessWitness {
    pub model: String,
    pub premises: Vec<String>,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleSoundness {
    pub rule: Rule,
    pub instances: u64,
    /// Instance–model pairs actually checked.
    pub checks: u64,
    pub counterexample: Option<SoundnessWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub universe: String,
    pub models: usize,
    pub topological: usize,
    pub boolean: usize,
    pub corpus: usize,
    pub pair_domain: usize,
    pub triple_domain: usize,
    pub seed: u64,
    pub rules: Vec<RuleSoundness>,
}

impl SoundnessReport {
    pub fn pass(&self) -> bool {
        self.rules.iter().all(|r| r.counterexample.is_none())
    }
}

type Seq = (Formula, Formula);

struct Harness<'u> {
    u: &'u ModelUniverse,
    all: ModSet,
    topological: ModSet,
    boolean: ModSet,
}

impl Harness<'_> {
    /// Models of `scope` in which `l ⊢ r` holds.
    fn valid_in(&self, (l, r): &Seq, scope: &ModSet) -> Result<ModSet> {
        let mut diff: FixedBitSet = (*self.u.values(l)?).clone();
        diff.difference_with(&*self.u.values(r)?);
        let mut out = scope.clone();
        for i in scope.ones() {
            if diff.count_ones(self.u.model_range(i)) > 0 {
                out.set(i, false);
            }
        }
        Ok(out)
    }

    fn witness(&self, i: usize, premises: &[Seq], conclusion: &Seq) -> SoundnessWitness {
        let show = |(l, r): &Seq| super::format_sequent(l, r);
        SoundnessWitness {
            model: self.u.models()[i].name().to_string(),
            premises: premises.iter().map(show).collect(),
            conclusion: show(conclusion),
        }
    }

    /// Checks premises-valid ⇒ conclusion-valid in every model of the rule's scope.
    fn check(&self, out: &mut RuleSoundness, premises: &[Seq], conclusion: Seq) -> Result<()> {
        out.instances += 1;
        let scope = match out.rule {
            Rule::AxiomS4 => &self.topological,
            Rule::AxiomClassical => &self.boolean,
            _ => &self.all,
        };
        let mut live = scope.clone();
        for p in premises {
            live = self.valid_in(p, &live)?;
        }
        out.checks += live.count_ones(..) as u64;
        let ok = self.valid_in(&conclusion, &live)?;
        if out.counterexample.is_none() {
            if let Some(i) = live.ones().find(|&i| !ok.contains(i)) {
                out.counterexample = Some(self.witness(i, premises, &conclusion));
            }
        }
        Ok(())
    }
}

/// Checks every rule of the calculus. One-metavariable schemas range over the
/// whole corpus; two- and three-metavariable schemas over seeded sub-domains.
/// Axiom-S4 is checked only in topological models, Axiom-Classical only on
/// the Set backend.
pub fn check_soundness(
    u: &ModelUniverse,
    corpus: &[Formula],
    cfg: SoundnessConfig,
) -> Result<SoundnessReport> {
    let mut all = FixedBitSet::with_capacity(u.len());
    all.insert_range(..);
    let pick = |f: fn(&super::Model) -> bool| {
        let mut s = FixedBitSet::with_capacity(u.len());
        for (i, m) in u.models().iter().enumerate() {
            s.set(i, f(m));
        }
        s
    };
    let h = Harness {
        u,
        topological: pick(|m| m.is_topological()),
        boolean: pick(|m| m.is_boolean()),
        all,
    };
    let pairs = sample_domain(corpus, cfg.pair_domain, cfg.seed);
    let triples = sample_domain(corpus, cfg.triple_domain, cfg.seed.wrapping_add(1));
    let (t, b) = (Formula::top(), Formula::bot());
    let (not, and, or, imp, bx, dia) = (
        Formula::not,
        Formula::and,
        Formula::or,
        Formula::imp,
        Formula::boxed,
        Formula::dia,
    );

    let mut rules = Vec::new();
    for rule in Rule::ALL {
        let mut r = RuleSoundness {
            rule,
            instances: 0,
            checks: 0,
            counterexample: None,
        };
        match rule {
            Rule::AxiomPreservation => {
                for s in [
                    (bx(t.clone()), t.clone()),
                    (t.clone(), bx(t.clone())),
                    (dia(b.clone()), b.clone()),
                    (b.clone(), dia(b.clone())),
                ] {
                    h.check(&mut r, &[], s)?;
                }
            }
            Rule::Identity
            | Rule::AxiomDuality
            | Rule::AxiomT
            | Rule::AxiomS4
            | Rule::AxiomClassical
            | Rule::Inconsistency
            | Rule::Tautology
            | Rule::ConjIdem
            | Rule::Neg => {
                for a in corpus {
                    let a = a.clone();
                    let instances: Vec<Seq> = match rule {
                        Rule::Identity => vec![(a.clone(), a)],
                        Rule::AxiomDuality => vec![(bx(not(a.clone())), not(dia(a)))],
                        Rule::AxiomT => vec![(bx(a.clone()), a.clone()), (a.clone(), dia(a))],
                        Rule::AxiomS4 => vec![
                            (bx(a.clone()), bx(bx(a.clone()))),
                            (dia(dia(a.clone())), dia(a)),
                        ],
                        Rule::AxiomClassical => vec![(not(not(a.clone())), a)],
                        Rule::Inconsistency => vec![(b.clone(), a)],
                        Rule::Tautology => vec![(a, t.clone())],
                        Rule::ConjIdem => vec![
                            (and(a.clone(), a.clone()), a.clone()),
                            (a.clone(), and(a.clone(), a)),
                        ],
                        _ => vec![
                            (not(a.clone()), imp(a.clone(), b.clone())),
                            (imp(a.clone(), b.clone()), not(a)),
                        ],
                    };
                    for s in instances {
                        h.check(&mut r, &[], s)?;
                    }
                }
            }
            Rule::AxiomDistributivity
            | Rule::AxiomK
            | Rule::ConjElim
            | Rule::ConjComm
            | Rule::DisjIntro
            | Rule::DisjComm
            | Rule::ModBox
            | Rule::ModDia => {
                for x in &pairs {
                    for y in &pairs {
                        let (x, y) = (x.clone(), y.clone());
                        match rule {
                            Rule::ModBox => {
                                h.check(&mut r, &[(x.clone(), y.clone())], (bx(x), bx(y)))?
                            }
                            Rule::ModDia => {
                                h.check(&mut r, &[(x.clone(), y.clone())], (dia(x), dia(y)))?
                            }
                            _ => {
                                let instances: Vec<Seq> = match rule {
                                    Rule::AxiomDistributivity => vec![
                                        (
                                            bx(and(x.clone(), y.clone())),
                                            and(bx(x.clone()), bx(y.clone())),
                                        ),
                                        (
                                            and(bx(x.clone()), bx(y.clone())),
                                            bx(and(x.clone(), y.clone())),
                                        ),
                                        (or(dia(x.clone()), dia(y.clone())), dia(or(x, y))),
                                    ],
                                    Rule::AxiomK => {
                                        vec![(bx(imp(x.clone(), y.clone())), imp(bx(x), bx(y)))]
                                    }
                                    Rule::ConjElim => vec![
                                        (and(x.clone(), y.clone()), x.clone()),
                                        (and(x, y.clone()), y),
                                    ],
                                    Rule::ConjComm => vec![(and(x.clone(), y.clone()), and(y, x))],
                                    Rule::DisjIntro => vec![
                                        (x.clone(), or(x.clone(), y.clone())),
                                        (y.clone(), or(x, y)),
                                    ],
                                    _ => vec![(or(x.clone(), y.clone()), or(y, x))],
                                };
                                for s in instances {
                                    h.check(&mut r, &[], s)?;
                                }
                            }
                        }
                    }
                }
            }
            Rule::Cut | Rule::ConjIntro | Rule::DisjElim | Rule::Imp | Rule::Distr => {
                for x in &triples {
                    for y in &triples {
                        for z in &triples {
                            let (x, y, z) = (x.clone(), y.clone(), z.clone());
                            match rule {
                                Rule::Cut => h.check(
                                    &mut r,
                                    &[(x.clone(), y.clone()), (y, z.clone())],
                                    (x, z),
                                )?,
                                Rule::ConjIntro => h.check(
                                    &mut r,
                                    &[(x.clone(), y.clone()), (x.clone(), z.clone())],
                                    (x, and(y, z)),
                                )?,
                                Rule::DisjElim => {
                                    let joined = (or(x.clone(), y.clone()), z.clone());
                                    h.check(
                                        &mut r,
                                        &[(x.clone(), z.clone()), (y.clone(), z.clone())],
                                        joined.clone(),
                                    )?;
                                    h.check(&mut r, std::slice::from_ref(&joined), (x, z.clone()))?;
                                    h.check(&mut r, &[joined], (y, z))?;
                                }
                                Rule::Imp => {
                                    let (up, down) =
                                        ((and(x.clone(), y.clone()), z.clone()), (x, imp(y, z)));
                                    h.check(&mut r, std::slice::from_ref(&up), down.clone())?;
                                    h.check(&mut r, &[down], up)?;
                                }
                                _ => {
                                    let l = and(x.clone(), or(y.clone(), z.clone()));
                                    let rhs = or(and(x.clone(), y), and(x, z));
                                    h.check(&mut r, &[], (l.clone(), rhs.clone()))?;
                                    h.check(&mut r, &[], (rhs, l))?;
                                }
                            }
                        }
                    }
                }
            }
        }
        rules.push(r);
    }
    Ok(SoundnessReport {
        universe: u.fingerprint(),
        models: u.len(),
        topological: h.topological.count_ones(..),
        boolean: h.boolean.count_ones(..),
        corpus: corpus.len(),
        pair_domain: pairs.len(),
        triple_domain: triples.len(),
        seed: cfg.seed,
        rules,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reasoning::generate_corpus;
    use crate::universes::{mixed_universe, two_model_universe};

    #[test]
    fn sound_on_small_corpus() {
        let u = mixed_universe(11, 6, &["p", "q"], 4);
        let corpus = generate_corpus(&["p", "q"], 1, 10_000);
        let r = check_soundness(&u, &corpus, SoundnessConfig::default()).unwrap();
        assert!(
            r.pass(),
            "{:?}",
            r.rules.iter().find(|r| r.counterexample.is_some())
        );
        assert!(r.rules.iter().all(|r| r.instances > 0));
    }

    #[test]
    fn classical_is_not_sound_off_the_set_backend() {
        let u = mixed_universe(5, 12, &["p", "q"], 4);
        let corpus = generate_corpus(&["p", "q"], 1, 10_000);
        let mut h_all = FixedBitSet::with_capacity(u.len());
        h_all.insert_range(..);
        let h = Harness {
            u: &u,
            all: h_all.clone(),
            topological: h_all.clone(),
            boolean: h_all,
        };
        let mut r = RuleSoundness {
            rule: Rule::AxiomClassical,
            instances: 0,
            checks: 0,
            counterexample: None,
        };
        for a in &corpus {
            h.check(
                &mut r,
                &[],
                (Formula::not(Formula::not(a.clone())), a.clone()),
            )
            .unwrap();
        }
        assert!(u.models().iter().any(|m| !m.is_boolean()));
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn two_model_universe_is_sound() {
        let u = two_model_universe();
        let corpus = generate_corpus(&["p", "q"], 1, 10_000);
        assert!(check_soundness(&u, &corpus, SoundnessConfig::default())
            .unwrap()
            .pass());
    }
}
