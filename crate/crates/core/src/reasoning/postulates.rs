use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::operators::{AbductionVariant, Reasoner, RevisionOp};
use super::transforms::FixpointMode;
use crate::error::Result;
use crate::logic::{Formula, ModSet, ModelUniverse};
use crate::universes::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "suite", content = "variant", rename_all = "lowercase")]
pub enum Suite {
    Agm(RevisionOp),
    Contraction(RevisionOp),
    Abduction(AbductionVariant),
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Suite::Agm(op) => write!(f, "agm/{}", op_name(*op)),
            Suite::Contraction(op) => write!(f, "contraction/{}", op_name(*op)),
            Suite::Abduction(AbductionVariant::Lcr) => write!(f, "abduction/lcr"),
            Suite::Abduction(AbductionVariant::Lnr) => write!(f, "abduction/lnr"),
        }
    }
}

fn op_name(op: RevisionOp) -> &'static str {
    match op {
        RevisionOp::Dilation => "dilation",
        RevisionOp::Tau => "tau",
    }
}

/// What `φ ≡ ψ` means in the equivalence-based postulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    /// `Mod(φ) = Mod(ψ)` (relative to the theory for abduction).
    #[default]
    Mods,
    /// `⟦φ⟧ = ⟦ψ⟧` in every model.
    Values,
}

/// Sizes of the sampled quantifier domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub mode: FixpointMode,
    pub equivalence: Equivalence,
    pub seed: u64,
    /// Formulas for pair-quantified postulates.
    pub pair_domain: usize,
    /// Formulas for triple-quantified postulates.
    pub triple_domain: usize,
    /// Single-formula theories for abduction.
    pub theories: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            mode: FixpointMode::Semantic,
            equivalence: Equivalence::Mods,
            seed: 0,
            pair_domain: 1500,
            triple_domain: 120,
            theories: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub role: String,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostulateResult {
    pub postulate: String,
    /// Whether the operator is asserted to satisfy this postulate.
    pub claimed: bool,
    pub pass: bool,
    /// Tuples whose antecedent held.
    pub checked: u64,
    pub counterexample: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostulateReport {
    pub suite: String,
    pub universe: String,
    pub models: usize,
    pub fixpoint: FixpointMode,
    pub equivalence: Equivalence,
    pub corpus: usize,
    pub max_depth: usize,
    pub pair_domain: usize,
    pub triple_domain: usize,
    pub theory_domain: usize,
    pub seed: u64,
    /// Tuples skipped because the operator was undefined on them.
    pub undefined: u64,
    pub bounds: Vec<String>,
    pub results: Vec<PostulateResult>,
}

impl PostulateReport {
    pub fn result(&self, postulate: &str) -> Option<&PostulateResult> {
        self.results.iter().find(|r| r.postulate == postulate)
    }

    /// Every claimed postulate passes.
    pub fn claims_hold(&self) -> bool {
        self.results.iter().all(|r| r.pass || !r.claimed)
    }

    /// A fixed-width pass matrix, one row per postulate.
    pub fn table(&self) -> String {
        let mut s = format!(
            "{} on {} ({} models), corpus {} (depth ≤ {}), domains {}/{}",
            self.suite,
            self.universe,
            self.models,
            self.corpus,
            self.max_depth,
            self.pair_domain,
            self.triple_domain
        );
        if self.theory_domain > 0 {
            s += &format!(", theories {}", self.theory_domain);
        }
        s += &format!(", seed {}\n", self.seed);
        s += &format!(
            "{:<14} {:>7} {:>6} {:>10}\n",
            "postulate", "claimed", "holds", "checked"
        );
        for r in &self.results {
            s += &format!(
                "{:<14} {:>7} {:>6} {:>10}",
                r.postulate,
                if r.claimed { "✓" } else { "-" },
                if r.pass { "✓" } else { "✗" },
                r.checked
            );
            if !r.counterexample.is_empty() {
                let w: Vec<String> = r
                    .counterexample
                    .iter()
                    .map(|w| format!("{} = {}", w.role, w.formula))
                    .collect();
                s += &format!("   {}", w.join(", "));
            }
            s.push('\n');
        }
        for b in &self.bounds {
            s += &format!("note: {b}\n");
        }
        s
    }
}

/// A deterministic sub-domain of at most `limit` corpus formulas.
///
/// All of depth ≤ 1 is kept when it fits in half the budget (depth 0
/// otherwise); the rest is a seeded uniform sample. Corpus order is kept.
pub fn sample_domain(corpus: &[Formula], limit: usize, seed: u64) -> Vec<Formula> {
    if corpus.len() <= limit {
        return corpus.to_vec();
    }
    let shallow = corpus.iter().take_while(|f| f.depth() <= 1).count();
    let keep = if shallow <= limit / 2 {
        shallow
    } else {
        corpus
            .iter()
            .take_while(|f| f.depth() == 0)
            .count()
            .min(limit)
    };
    let mut r = rng(seed);
    let mut idx: Vec<usize> = sample(&mut r, corpus.len() - keep, limit - keep)
        .into_iter()
        .map(|i| i + keep)
        .collect();
    idx.sort_unstable();
    corpus[..keep]
        .iter()
        .cloned()
        .chain(idx.into_iter().map(|i| corpus[i].clone()))
        .collect()
}

struct Check {
    name: &'static str,
    claimed: bool,
    checked: u64,
    witness: Option<Vec<Witness>>,
}

impl Check {
    fn new(name: &'static str, claimed: bool) -> Self {
        Check {
            name,
            claimed,
            checked: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<(&'static str, Formula)>) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(
                witness()
                    .into_iter()
                    .map(|(role, f)| Witness {
                        role: role.to_string(),
                        formula: f.to_string(),
                    })
                    .collect(),
            );
        }
    }

    fn finish(self) -> PostulateResult {
        PostulateResult {
            postulate: self.name.to_string(),
            claimed: self.claimed,
            pass: self.witness.is_none(),
            checked: self.checked,
            counterexample: self.witness.unwrap_or_default(),
        }
    }
}

/// Per-formula data shared by the suites.
struct Atlas<'a> {
    formulas: &'a [Formula],
    mods: Vec<ModSet>,
    values: Vec<Arc<FixedBitSet>>,
    rep: Vec<usize>,
}

impl<'a> Atlas<'a> {
    fn new(u: &ModelUniverse, formulas: &'a [Formula], eq: Equivalence) -> Result<Self> {
        let values = formulas
            .iter()
            .map(|f| u.values(f))
            .collect::<Result<Vec<_>>>()?;
        let mods: Vec<ModSet> = values.iter().map(|v| u.mods_of(v)).collect();
        let mut first: HashMap<FixedBitSet, usize> = HashMap::new();
        let rep = (0..formulas.len())
            .map(|i| {
                let key = match eq {
                    Equivalence::Mods => mods[i].clone(),
                    Equivalence::Values => (*values[i]).clone(),
                };
                *first.entry(key).or_insert(i)
            })
            .collect();
        Ok(Atlas {
            formulas,
            mods,
            values,
            rep,
        })
    }
}

/// Chain iterates of a formula, as plain data.
struct Iterates {
    mods: Vec<ModSet>,
    values: Vec<Arc<FixedBitSet>>,
}

impl Iterates {
    fn of(r: &Reasoner, op: RevisionOp, f: &Formula) -> Result<Self> {
        let c = r.revision_chain(op, f)?;
        Ok(Iterates {
            mods: c.steps.iter().map(|s| s.mods.clone()).collect(),
            values: c.steps.iter().map(|s| s.values.clone()).collect(),
        })
    }

    fn first_meeting(&self, target: &ModSet) -> Option<usize> {
        self.mods.iter().position(|m| !m.is_disjoint(target))
    }

    /// `Mod(φ ∘ ψ)` given `Mod(ψ)`; `None` when no iterate meets it.
    fn revise(&self, target: &ModSet) -> Option<ModSet> {
        self.first_meeting(target).map(|n| {
            let mut m = self.mods[n].clone();
            m.intersect_with(target);
            m
        })
    }
}

fn empty(u: &ModelUniverse) -> ModSet {
    FixedBitSet::with_capacity(u.len())
}

fn inter(a: &ModSet, b: &ModSet) -> ModSet {
    let mut m = a.clone();
    m.intersect_with(b);
    m
}

fn max_depth(fs: &[Formula]) -> usize {
    fs.iter().map(|f| f.depth()).max().unwrap_or(0)
}

/// Brute-forces a postulate family over sampled corpus tuples.
pub fn check_postulates(
    universe: &ModelUniverse,
    corpus: &[Formula],
    suite: Suite,
    config: &SuiteConfig,
) -> Result<PostulateReport> {
    let pairs = sample_domain(corpus, config.pair_domain, config.seed);
    let triples = sample_domain(corpus, config.triple_domain, config.seed.wrapping_add(1));
    let reasoner = Reasoner::new(universe, config.mode);
    let mut bounds = vec![
        format!(
            "pair quantifiers range over {} of {} corpus formulas",
            pairs.len(),
            corpus.len()
        ),
        format!(
            "triple quantifiers range over {} of {} corpus formulas",
            triples.len(),
            corpus.len()
        ),
    ];
    let mut theory_domain = 0;
    let (results, undefined) = match suite {
        Suite::Agm(op) => agm(&reasoner, op, &pairs, &triples, config.equivalence)?,
        Suite::Contraction(op) => contraction(&reasoner, op, &pairs, &triples, config.equivalence)?,
        Suite::Abduction(variant) => {
            let theories = theory_domain_of(universe, corpus, config)?;
            theory_domain = theories.len();
            bounds.push(format!(
                "theories are the single formulas {}",
                theories
                    .iter()
                    .map(|t| format!("`{t}`"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            bounds.push("E-C-Cut quantifies δ over the triple domain only".to_string());
            abduction(&reasoner, variant, &theories, &pairs, &triples)?
        }
    };
    Ok(PostulateReport {
        suite: suite.to_string(),
        universe: universe.fingerprint(),
        models: universe.len(),
        fixpoint: config.mode,
        equivalence: config.equivalence,
        corpus: corpus.len(),
        max_depth: max_depth(corpus),
        pair_domain: pairs.len(),
        triple_domain: triples.len(),
        theory_domain,
        seed: config.seed,
        undefined,
        bounds,
        results,
    })
}

fn agm(
    r: &Reasoner,
    op: RevisionOp,
    pairs: &[Formula],
    triples: &[Formula],
    eq: Equivalence,
) -> Result<(Vec<PostulateResult>, u64)> {
    let u = r.universe();
    let dilation = op == RevisionOp::Dilation;
    let d = Atlas::new(u, pairs, eq)?;
    let t = Atlas::new(u, triples, eq)?;
    let it_d = pairs
        .iter()
        .map(|f| Iterates::of(r, op, f))
        .collect::<Result<Vec<_>>>()?;
    let it_t = triples
        .iter()
        .map(|f| Iterates::of(r, op, f))
        .collect::<Result<Vec<_>>>()?;
    let none = empty(u);
    let mut g1 = Check::new("G1", true);
    let mut g2 = Check::new("G2", true);
    let mut g3 = Check::new("G3", true);
    let mut g4 = Check::new("G4", dilation);
    let mut g4p = Check::new("G4'", !dilation);
    let mut g5 = Check::new("G5", true);
    let mut undefined = 0;
    let f = d.formulas;
    for i in 0..f.len() {
        for j in 0..f.len() {
            let psi = &d.mods[j];
            let res = it_d[i].revise(psi);
            if res.is_none() && !psi.is_clear() {
                undefined += 1;
            }
            let res = res.unwrap_or_else(|| none.clone());
            if !psi.is_clear() {
                g1.record(!res.is_clear(), || {
                    vec![("φ", f[i].clone()), ("ψ", f[j].clone())]
                });
            }
            g2.record(res.is_subset(psi), || {
                vec![("φ", f[i].clone()), ("ψ", f[j].clone())]
            });
            let both = inter(&d.mods[i], psi);
            if !both.is_clear() {
                let n0 = it_d[i].first_meeting(psi) == Some(0);
                g3.record(n0 && res == both, || {
                    vec![("φ", f[i].clone()), ("ψ", f[j].clone())]
                });
            }
            let (ri, rj) = (d.rep[i], d.rep[j]);
            if (ri, rj) != (i, j) {
                let other = it_d[ri].revise(&d.mods[rj]).unwrap_or_else(|| none.clone());
                g4.record(other == res, || {
                    vec![
                        ("φ", f[i].clone()),
                        ("ψ", f[j].clone()),
                        ("φ'", f[ri].clone()),
                        ("ψ'", f[rj].clone()),
                    ]
                });
            }
            if rj != j {
                let other = it_d[i].revise(&d.mods[rj]).unwrap_or_else(|| none.clone());
                g4p.record(other == res, || {
                    vec![
                        ("φ", f[i].clone()),
                        ("ψ", f[j].clone()),
                        ("ψ'", f[rj].clone()),
                    ]
                });
            }
        }
    }
    let f = t.formulas;
    for i in 0..f.len() {
        for j in 0..f.len() {
            let first = it_t[i].revise(&t.mods[j]).unwrap_or_else(|| none.clone());
            for k in 0..f.len() {
                let lhs = inter(&first, &t.mods[k]);
                if lhs.is_clear() {
                    continue;
                }
                let rhs = it_t[i]
                    .revise(&inter(&t.mods[j], &t.mods[k]))
                    .unwrap_or_else(|| none.clone());
                g5.record(lhs == rhs, || {
                    vec![
                        ("φ", f[i].clone()),
                        ("ψ", f[j].clone()),
                        ("χ", f[k].clone()),
                    ]
                });
            }
        }
    }
    Ok((
        vec![
            g1.finish(),
            g2.finish(),
            g3.finish(),
            g4.finish(),
            g4p.finish(),
            g5.finish(),
        ],
        undefined,
    ))
}

/// Packed values and models of `(φ ∘ ¬ψ) ∨ φ`, or `None` when undefined.
fn contraction_of(
    u: &ModelUniverse,
    it: &Iterates,
    phi: &FixedBitSet,
    neg_values: &FixedBitSet,
    neg_mods: &ModSet,
) -> Option<(FixedBitSet, ModSet)> {
    let mut v = if neg_mods.is_clear() {
        FixedBitSet::with_capacity(phi.len())
    } else {
        let n = it.first_meeting(neg_mods)?;
        let mut v = (*it.values[n]).clone();
        v.intersect_with(neg_values);
        v
    };
    v.union_with(phi);
    let m = u.mods_of(&v);
    Some((v, m))
}

fn contraction(
    r: &Reasoner,
    op: RevisionOp,
    pairs: &[Formula],
    triples: &[Formula],
    eq: Equivalence,
) -> Result<(Vec<PostulateResult>, u64)> {
    let u = r.universe();
    let all = {
        let mut m = empty(u);
        m.insert_range(..);
        m
    };
    let mut c = [
        Check::new("C1", true),
        Check::new("C2", true),
        Check::new("C3", true),
        Check::new("C4", true),
        Check::new("C5", true),
        Check::new("C6", true),
        Check::new("C7", true),
    ];
    let mut undefined = 0;

    let d = Atlas::new(u, pairs, eq)?;
    let it = pairs
        .iter()
        .map(|f| Iterates::of(r, op, f))
        .collect::<Result<Vec<_>>>()?;
    let negs: Vec<(Arc<FixedBitSet>, ModSet)> = pairs
        .iter()
        .map(|f| {
            let v = u.values(&Formula::not(f.clone()))?;
            let m = u.mods_of(&v);
            Ok((v, m))
        })
        .collect::<Result<_>>()?;
    let f = d.formulas;
    for i in 0..f.len() {
        for j in 0..f.len() {
            let Some((_, cm)) = contraction_of(u, &it[i], &d.values[i], &negs[j].0, &negs[j].1)
            else {
                undefined += 1;
                continue;
            };
            let w = || vec![("φ", f[i].clone()), ("ψ", f[j].clone())];
            let (phi, psi) = (&d.mods[i], &d.mods[j]);
            c[0].record(phi.is_subset(&cm), w);
            if !phi.is_subset(psi) {
                c[1].record(cm.is_subset(phi), w);
            }
            if cm.is_subset(psi) {
                c[2].record(*psi == all, w);
            }
            if phi.is_subset(psi) {
                c[3].record(inter(&cm, psi).is_subset(phi), w);
            }
            let rj = d.rep[j];
            if rj != j {
                if let Some((_, other)) =
                    contraction_of(u, &it[i], &d.values[i], &negs[rj].0, &negs[rj].1)
                {
                    c[4].record(other == cm, || {
                        vec![
                            ("φ", f[i].clone()),
                            ("ψ1", f[j].clone()),
                            ("ψ2", f[rj].clone()),
                        ]
                    });
                }
            }
        }
    }

    let t = Atlas::new(u, triples, eq)?;
    let it = triples
        .iter()
        .map(|f| Iterates::of(r, op, f))
        .collect::<Result<Vec<_>>>()?;
    let f = t.formulas;
    let neg = |a: &Formula| -> Result<(Arc<FixedBitSet>, ModSet)> {
        let v = u.values(&Formula::not(a.clone()))?;
        let m = u.mods_of(&v);
        Ok((v, m))
    };
    let single: Vec<_> = f.iter().map(neg).collect::<Result<_>>()?;
    for j in 0..f.len() {
        for k in 0..f.len() {
            let conj = neg(&Formula::and(f[j].clone(), f[k].clone()))?;
            for i in 0..f.len() {
                let w = || {
                    vec![
                        ("φ", f[i].clone()),
                        ("ψ", f[j].clone()),
                        ("β", f[k].clone()),
                    ]
                };
                let both = contraction_of(u, &it[i], &t.values[i], &conj.0, &conj.1);
                let left = contraction_of(u, &it[i], &t.values[i], &single[j].0, &single[j].1);
                let right = contraction_of(u, &it[i], &t.values[i], &single[k].0, &single[k].1);
                let (Some((_, bm)), Some((lv, lm)), Some((rv, _))) = (both, left, right) else {
                    undefined += 1;
                    continue;
                };
                let mut or = lv;
                or.union_with(&rv);
                c[5].record(bm.is_subset(&u.mods_of(&or)), w);
                if !bm.is_subset(&t.mods[j]) {
                    c[6].record(lm.is_subset(&bm), w);
                }
            }
        }
    }
    Ok((c.into_iter().map(Check::finish).collect(), undefined))
}

fn theory_domain_of(
    u: &ModelUniverse,
    corpus: &[Formula],
    config: &SuiteConfig,
) -> Result<Vec<Formula>> {
    let mut consistent = Vec::new();
    for f in corpus {
        if u.consistent(f)? {
            consistent.push(f.clone());
        }
    }
    Ok(sample_domain(
        &consistent,
        config.theories,
        config.seed.wrapping_add(2),
    ))
}

/// Cut of one observation under one theory, or `None` when `T ∧ α` has no model.
fn cut_of(
    r: &Reasoner,
    variant: AbductionVariant,
    theory: &Formula,
    alpha: &Formula,
) -> Result<Option<(ModSet, Formula)>> {
    match r.abduce(std::slice::from_ref(theory), alpha, variant) {
        Ok(a) => Ok(Some((a.cut, a.cut_formula))),
        Err(crate::error::Error::AbductionUndefined(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn abduction(
    r: &Reasoner,
    variant: AbductionVariant,
    theories: &[Formula],
    pairs: &[Formula],
    triples: &[Formula],
) -> Result<(Vec<PostulateResult>, u64)> {
    let u = r.universe();
    let lcr = variant == AbductionVariant::Lcr;
    let mut c = [
        Check::new("LLE", true),
        Check::new("RLE", true),
        Check::new("E-CM", lcr),
        Check::new("E-C-Cut", lcr),
        Check::new("RS", true),
        Check::new("ROR", true),
        Check::new("E-Reflexivity", true),
        Check::new("E-Con", true),
    ];
    let explains = |cut: &Option<(ModSet, Formula)>, tg: &ModSet| match cut {
        Some((cut, _)) => !tg.is_clear() && tg.is_subset(cut),
        None => false,
    };
    for theory in theories {
        let tm = u.mod_set(theory)?;
        // Pair-quantified: LLE, RLE, RS, ROR, E-Reflexivity, E-Con over `pairs`.
        let d = Atlas::new(u, pairs, Equivalence::Mods)?;
        let f = d.formulas;
        let tg: Vec<ModSet> = d.mods.iter().map(|m| inter(m, &tm)).collect();
        let cuts = f
            .iter()
            .map(|a| cut_of(r, variant, theory, a))
            .collect::<Result<Vec<_>>>()?;
        let e: Vec<Vec<bool>> = cuts
            .iter()
            .map(|cut| tg.iter().map(|g| explains(cut, g)).collect())
            .collect();
        let mut by_class: HashMap<&ModSet, usize> = HashMap::new();
        let rep: Vec<usize> = tg
            .iter()
            .enumerate()
            .map(|(i, m)| *by_class.entry(m).or_insert(i))
            .collect();
        for a in 0..f.len() {
            let ra = rep[a];
            if ra != a {
                for g in 0..f.len() {
                    if e[ra][g] {
                        c[0].record(e[a][g], || {
                            vec![
                                ("T", theory.clone()),
                                ("α", f[ra].clone()),
                                ("α'", f[a].clone()),
                                ("γ", f[g].clone()),
                            ]
                        });
                    }
                }
            }
            for g in 0..f.len() {
                let rg = rep[g];
                if rg != g && e[a][rg] {
                    c[1].record(e[a][g], || {
                        vec![
                            ("T", theory.clone()),
                            ("α", f[a].clone()),
                            ("γ", f[rg].clone()),
                            ("γ'", f[g].clone()),
                        ]
                    });
                }
            }
            for g in (0..f.len()).filter(|&g| e[a][g]) {
                for g2 in 0..f.len() {
                    if !tg[g2].is_clear() && tg[g2].is_subset(&d.mods[g]) {
                        c[4].record(e[a][g2], || {
                            vec![
                                ("T", theory.clone()),
                                ("α", f[a].clone()),
                                ("γ", f[g].clone()),
                                ("γ'", f[g2].clone()),
                            ]
                        });
                    }
                }
                for h in (g..f.len()).filter(|&h| e[a][h]) {
                    let mut v = (*d.values[g]).clone();
                    v.union_with(&d.values[h]);
                    let or = inter(&u.mods_of(&v), &tm);
                    c[5].record(explains(&cuts[a], &or), || {
                        vec![
                            ("T", theory.clone()),
                            ("α", f[a].clone()),
                            ("γ", f[g].clone()),
                            ("δ", f[h].clone()),
                        ]
                    });
                }
                c[6].record(explains(&cuts[g], &tg[g]), || {
                    vec![
                        ("T", theory.clone()),
                        ("α", f[a].clone()),
                        ("γ", f[g].clone()),
                    ]
                });
            }
            let consistent = !tg[a].is_clear();
            let canonical = cuts[a].as_ref().map(|(cut, _)| inter(cut, &tm));
            let found =
                e[a].iter().any(|&x| x) || canonical.is_some_and(|m| explains(&cuts[a], &m));
            c[7].record(consistent == found, || {
                vec![("T", theory.clone()), ("α", f[a].clone())]
            });
        }

        // Triple-quantified: E-CM and E-C-Cut over `triples`.
        let t = Atlas::new(u, triples, Equivalence::Mods)?;
        let f = t.formulas;
        let tg: Vec<ModSet> = t.mods.iter().map(|m| inter(m, &tm)).collect();
        let cuts = f
            .iter()
            .map(|a| cut_of(r, variant, theory, a))
            .collect::<Result<Vec<_>>>()?;
        let e: Vec<Vec<bool>> = cuts
            .iter()
            .map(|cut| tg.iter().map(|g| explains(cut, g)).collect())
            .collect();
        for a in 0..f.len() {
            for b in 0..f.len() {
                let ab = cut_of(
                    r,
                    variant,
                    theory,
                    &Formula::and(f[a].clone(), f[b].clone()),
                )?;
                // ∀δ (δ explains α ⇒ δ ⊢ β), over the domain.
                let cut_premise = (0..f.len()).all(|dl| !e[a][dl] || tg[dl].is_subset(&t.mods[b]));
                for g in 0..f.len() {
                    let w = || {
                        vec![
                            ("T", theory.clone()),
                            ("α", f[a].clone()),
                            ("β", f[b].clone()),
                            ("γ", f[g].clone()),
                        ]
                    };
                    if e[a][g] && tg[g].is_subset(&t.mods[b]) {
                        c[2].record(explains(&ab, &tg[g]), w);
                    }
                    if cut_premise && explains(&ab, &tg[g]) {
                        c[3].record(e[a][g], w);
                    }
                }
            }
        }
    }
    Ok((c.into_iter().map(Check::finish).collect(), 0))
}

/// `≼_φ` and the faithful-assignment verdicts for one `φ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaReport {
    pub phi: String,
    pub op: RevisionOp,
    /// The operator is defined on `(φ, ψ)` for every consistent corpus `ψ`.
    pub total: bool,
    pub fa1: bool,
    pub fa2: bool,
    pub minimality: bool,
    pub psi_checked: usize,
    /// Pairs `(M, M')` with `M ≼_φ M'`, by model name.
    pub relation: Vec<(String, String)>,
    pub counterexample: Option<String>,
}

impl FaReport {
    pub fn pass(&self) -> bool {
        self.total && self.fa1 && self.fa2 && self.minimality
    }
}

/// Builds `≼_φ = ⋃_ψ ≼^φ_ψ` over the corpus and checks FA1, FA2 and
/// `Mod(φ ∘ ψ) = Min(Mod(ψ), ≼_φ)` for every corpus `ψ`.
pub fn faithful_assignment(
    universe: &ModelUniverse,
    corpus: &[Formula],
    op: RevisionOp,
    phi: &Formula,
    mode: FixpointMode,
) -> Result<FaReport> {
    faithful_with(&Reasoner::new(universe, mode), corpus, op, phi)
}

fn faithful_with(
    r: &Reasoner,
    corpus: &[Formula],
    op: RevisionOp,
    phi: &Formula,
) -> Result<FaReport> {
    let u = r.universe();
    let n = u.len();
    let it = Iterates::of(r, op, phi)?;
    let phi_mods = u.mod_set(phi)?;
    let mut leq = vec![FixedBitSet::with_capacity(n); n];
    let mut revisions: Vec<(ModSet, ModSet)> = Vec::with_capacity(corpus.len());
    let mut total = true;
    let mut counterexample = None;
    for psi in corpus {
        let pm = u.mod_set(psi)?;
        let res = if pm.is_clear() {
            Some(empty(u))
        } else {
            it.revise(&pm)
        };
        let Some(res) = res else {
            total = false;
            counterexample.get_or_insert_with(|| format!("undefined on ψ = {psi}"));
            continue;
        };
        for m in res.ones() {
            for m2 in pm.ones().filter(|&k| !res.contains(k)) {
                leq[m].insert(m2);
            }
        }
        revisions.push((pm, res));
    }
    let strict = |a: usize, b: usize| leq[a].contains(b) && !leq[b].contains(a);
    let name = |i: usize| u.models()[i].name().to_string();
    let mut fa1 = true;
    let mut fa2 = true;
    for a in 0..n {
        for b in 0..n {
            match (phi_mods.contains(a), phi_mods.contains(b)) {
                (true, true) if strict(a, b) => {
                    fa1 = false;
                    counterexample.get_or_insert_with(|| format!("FA1: {} ≺ {}", name(a), name(b)));
                }
                (true, false) if !strict(a, b) => {
                    fa2 = false;
                    counterexample
                        .get_or_insert_with(|| format!("FA2: not {} ≺ {}", name(a), name(b)));
                }
                _ => {}
            }
        }
    }
    let mut minimality = true;
    for (k, (pm, res)) in revisions.iter().enumerate() {
        let mut min = empty(u);
        for a in pm.ones() {
            if !pm.ones().any(|b| strict(b, a)) {
                min.insert(a);
            }
        }
        if min != *res {
            minimality = false;
            counterexample.get_or_insert_with(|| format!("minimality fails at corpus entry {k}"));
        }
    }
    let relation = (0..n)
        .flat_map(|a| leq[a].ones().map(move |b| (a, b)))
        .map(|(a, b)| (name(a), name(b)))
        .collect();
    Ok(FaReport {
        phi: phi.to_string(),
        op,
        total,
        fa1,
        fa2,
        minimality,
        psi_checked: revisions.len(),
        relation,
        counterexample,
    })
}

/// [`faithful_assignment`] for every `φ` of a domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub op: RevisionOp,
    pub universe: String,
    pub corpus: usize,
    pub phis: usize,
    /// `φ` on which the operator is not total (precondition fails).
    pub partial: usize,
    pub failures: Vec<FaReport>,
}

impl MinimalityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn minimality_suite(
    universe: &ModelUniverse,
    corpus: &[Formula],
    phis: &[Formula],
    op: RevisionOp,
    mode: FixpointMode,
) -> Result<MinimalityReport> {
    let r = Reasoner::new(universe, mode);
    let mut partial = 0;
    let mut failures = Vec::new();
    for phi in phis {
        let rep = faithful_with(&r, corpus, op, phi)?;
        if !rep.total {
            partial += 1;
        } else if !rep.pass() {
            failures.push(rep);
        }
    }
    Ok(MinimalityReport {
        op,
        universe: universe.fingerprint(),
        corpus: corpus.len(),
        phis: phis.len(),
        partial,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::reasoning::generate_corpus;
    use crate::universes::two_model_universe;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_ordered() {
        let c = generate_corpus(&["p", "q"], 2, usize::MAX);
        let a = sample_domain(&c, 200, 5);
        assert_eq!(a, sample_domain(&c, 200, 5));
        assert_eq!(a.len(), 200);
        assert_eq!(&a[..64], &c[..64]);
        let pos: Vec<usize> = a
            .iter()
            .map(|x| c.iter().position(|y| y == x).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_domain(&c[..10], 200, 5), c[..10].to_vec());
    }

    #[test]
    fn tau_agm_claims_on_two_models() {
        let u = two_model_universe();
        let c = generate_corpus(&["p", "q"], 1, usize::MAX);
        let rep =
            check_postulates(&u, &c, Suite::Agm(RevisionOp::Tau), &SuiteConfig::default()).unwrap();
        assert!(rep.claims_hold(), "{}", rep.table());
    }

    #[test]
    fn dilation_g1_fails_on_bottom() {
        let u = two_model_universe();
        let c = generate_corpus(&["p", "q"], 0, usize::MAX);
        let rep = check_postulates(
            &u,
            &c,
            Suite::Agm(RevisionOp::Dilation),
            &SuiteConfig::default(),
        )
        .unwrap();
        let g1 = rep.result("G1").unwrap();
        assert!(!g1.pass);
        assert_eq!(g1.counterexample[0].formula, "F");
    }

    #[test]
    fn tau_contraction_on_two_models() {
        let u = two_model_universe();
        let c = generate_corpus(&["p", "q"], 1, usize::MAX);
        let rep = check_postulates(
            &u,
            &c,
            Suite::Contraction(RevisionOp::Tau),
            &SuiteConfig::default(),
        )
        .unwrap();
        assert_eq!(rep.results.len(), 7);
        assert_eq!(rep.undefined, 0);
    }

    #[test]
    fn faithful_assignment_for_tau_on_two_models() {
        let u = two_model_universe();
        let c = generate_corpus(&["p", "q"], 1, usize::MAX);
        let rep =
            faithful_assignment(&u, &c, RevisionOp::Tau, &f("p"), FixpointMode::Semantic).unwrap();
        assert!(rep.total);
        assert!(rep.pass(), "{rep:?}");
        assert!(rep.relation.contains(&("M1".to_string(), "M2".to_string())));
    }
}
