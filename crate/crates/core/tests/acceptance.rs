//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. All checks are exact; runtime bounds are printed.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use morpho_core::fincat::{FiniteCategory, Presheaf};
use morpho_core::logic::{
    check_soundness, format_formula, parse_formula, Formula, Model, ModelUniverse, SoundnessConfig,
};
use morpho_core::morphology::{
    check_adjunction, check_reflexivity_biconditional, neighborhood_from_element,
    open_closed_mismatch, StructuringElement, StructuringNeighborhood,
};
use morpho_core::rcc8::{classify, line_fixtures, line_model};
use morpho_core::reasoning::{
    check_postulates, generate_corpus, minimality_suite, sample_domain, AbductionVariant,
    Equivalence, FixpointMode, PostulateReport, RevisionOp, Suite, SuiteConfig,
};
use morpho_core::sublattice::{
    check_heyting_laws, enumerate_subobjects, power_object, Subpresheaf, DEFAULT_CAP,
};
use morpho_core::universes::{
    mixed_universe, random_element, random_presheaf, random_subobject, rng,
    standard_valuation_universe, two_model_universe, ElementShape,
};
use rand::Rng;

const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn subs(space: &Arc<Presheaf>) -> Vec<Subpresheaf> {
    enumerate_subobjects(space, DEFAULT_CAP).expect("capped instance")
}

fn leq(a: &Subpresheaf, b: &Subpresheaf) -> bool {
    a.bits().is_subset(b.bits())
}

/// Random spaces with at most `max` elements per stage, alternating Set and graph.
fn spaces(seed: u64, n: usize, max: usize) -> Vec<Arc<Presheaf>> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let (mut set, mut graph) = (0, 0);
    while set + graph < n {
        let x = random_presheaf(&mut r, max);
        let is_set = x.category().is_set_backend();
        if (is_set && set < n / 2) || (!is_set && graph < n - n / 2) {
            if is_set {
                set += 1;
            } else {
                graph += 1;
            }
            out.push(Arc::new(x));
        }
    }
    out
}

fn elements(seed: u64, n: usize, max: usize, shape: ElementShape) -> Vec<StructuringElement> {
    let mut r = rng(seed ^ 0x5eed);
    spaces(seed, n, max)
        .iter()
        .map(|x| random_element(&mut r, x, shape))
        .collect()
}

fn c1_adjunction() -> Verdict {
    let t = Instant::now();
    let bs = elements(SEED, 60, 6, ElementShape::Any);
    let mut pairs = 0u64;
    for b in &bs {
        let all = subs(b.space());
        let d: Vec<_> = all.iter().map(|y| b.dilation(y).unwrap()).collect();
        let e: Vec<_> = all.iter().map(|z| b.erosion(z).unwrap()).collect();
        for (i, y) in all.iter().enumerate() {
            for (j, z) in all.iter().enumerate() {
                pairs += 1;
                if leq(&d[i], z) != leq(y, &e[j]) {
                    return verdict(false, format!("Y = {y}, Z = {z}"));
                }
            }
        }
    }
    let dt = t.elapsed();
    verdict(
        dt < Duration::from_secs(60),
        format!(
            "{} elements (≤ 6 per stage), {pairs} (Y, Z) pairs, {:.1?} (< 60 s)",
            bs.len(),
            dt
        ),
    )
}

fn c2_reflexivity() -> Verdict {
    let mut counts = (0, 0);
    for shape in [ElementShape::Any, ElementShape::Reflexive] {
        for b in elements(SEED + 2, 40, 5, shape) {
            let all = subs(b.space());
            let r = check_reflexivity_biconditional(&b, &all);
            if !r.pass {
                return verdict(false, r.detail);
            }
            if b.is_reflexive() {
                counts.0 += 1;
            } else {
                // The witness must actually violate (anti-)extensivity.
                let y = &r.witnesses[0];
                if leq(&b.erosion(y).unwrap(), y) && leq(y, &b.dilation(y).unwrap()) {
                    return verdict(false, format!("bogus witness {y}"));
                }
                counts.1 += 1;
            }
        }
    }
    verdict(
        counts.0 > 0 && counts.1 > 0,
        format!(
            "{} reflexive b hold on every Y, {} non-reflexive b each refuted by a Y",
            counts.0, counts.1
        ),
    )
}

fn c3_duality() -> Verdict {
    let mut strict = 0;
    let mut set_equalities = 0;
    for b in elements(SEED + 3, 60, 5, ElementShape::Any) {
        let bt = b.transpose();
        let boolean = b.space().category().is_set_backend();
        for y in subs(b.space()) {
            if b.erosion(&y.neg()).unwrap() != bt.dilation(&y).unwrap().neg() {
                return verdict(false, format!("ε[b](¬Y) ≠ ¬δ[b̆](Y) at {y}"));
            }
            let (l, r) = (bt.dilation(&y.neg()).unwrap(), b.erosion(&y).unwrap().neg());
            if !leq(&l, &r) {
                return verdict(false, format!("δ[b̆](¬Y) ⋠ ¬ε[b](Y) at {y}"));
            }
            match (boolean, l == r) {
                (true, true) => set_equalities += 1,
                (true, false) => {
                    return verdict(false, format!("strict on the Set backend at {y}"))
                }
                (false, false) => strict += 1,
                (false, true) => {}
            }
        }
    }
    verdict(
        strict > 0,
        format!("equality on {set_equalities} Set instances, {strict} strict presheaf witnesses"),
    )
}

fn c4_opening_closing() -> Verdict {
    let mut n = 0;
    for b in elements(SEED + 4, 50, 5, ElementShape::Any) {
        let e = |y: &Subpresheaf| b.erosion(y).unwrap();
        let d = |y: &Subpresheaf| b.dilation(y).unwrap();
        for y in subs(b.space()) {
            let (open, close) = (d(&e(&y)), e(&d(&y)));
            let ok = e(&d(&e(&y))) == e(&y)
                && d(&e(&d(&y))) == d(&y)
                && d(&e(&open)) == open
                && e(&d(&close)) == close;
            if !ok {
                return verdict(false, format!("fails at {y}"));
            }
            n += 1;
        }
    }
    verdict(
        true,
        format!("εδε = ε, δεδ = δ and both idempotences on {n} (b, Y)"),
    )
}

fn c5_neighborhood_of_element() -> Verdict {
    let bs = elements(SEED + 5, 60, 4, ElementShape::Reflexive);
    for b in &bs {
        let n = neighborhood_from_element(b).unwrap();
        let table = StructuringNeighborhood::Explicit(n.materialize(DEFAULT_CAP).unwrap());
        let bt = b.transpose();
        for y in subs(b.space()) {
            if table.erosion(&y).unwrap() != b.erosion(&y).unwrap() {
                return verdict(false, format!("ε[N_b] ≠ ε[b] at {y}"));
            }
            if table.dilation(&y).unwrap() != bt.dilation(&y).unwrap() {
                return verdict(false, format!("δ[N_b] ≠ δ[b̆] at {y}"));
            }
        }
    }
    verdict(
        true,
        format!(
            "{} reflexive b, N_b materialized as an explicit table",
            bs.len()
        ),
    )
}

fn non_transitive_fixture() -> StructuringNeighborhood {
    let x = Arc::new(Presheaf::range_set(3));
    let b = StructuringElement::from_fn(&x, |_, i| match i {
        0 => vec![0, 1],
        1 => vec![1, 2],
        _ => vec![2],
    })
    .unwrap();
    neighborhood_from_element(&b).unwrap()
}

fn c6_topological() -> Verdict {
    let bs = elements(SEED + 6, 24, 4, ElementShape::Preorder);
    for b in &bs {
        let n = StructuringNeighborhood::Explicit(
            neighborhood_from_element(b)
                .unwrap()
                .materialize(DEFAULT_CAP)
                .unwrap(),
        );
        if !n.is_topological_neighborhood().pass {
            return verdict(false, "preorder-derived N is not topological");
        }
        let all = subs(b.space());
        let top = Subpresheaf::top(b.space());
        let e = |y: &Subpresheaf| n.erosion(y).unwrap();
        let d = |y: &Subpresheaf| n.dilation(y).unwrap();
        if e(&top) != top {
            return verdict(false, "ε[N](⊤) ≠ ⊤");
        }
        for y in &all {
            if !leq(&e(y), y) || e(&e(y)) != e(y) || d(&d(y)) != d(y) {
                return verdict(false, format!("interior law or δδ = δ fails at {y}"));
            }
            for z in &all {
                if e(&y.meet(z).unwrap()) != e(y).meet(&e(z)).unwrap() {
                    return verdict(false, format!("ε[N] does not preserve meets at {y}, {z}"));
                }
            }
        }
    }
    let n = non_transitive_fixture();
    let witness = subs(n.space()).into_iter().find(|y| {
        let d = n.dilation(y).unwrap();
        n.dilation(&d).unwrap() != d
    });
    match witness {
        Some(y) => verdict(
            true,
            format!(
                "{} preorder N pass all laws; non-transitive N_b: δδ ≠ δ at Y = {y}",
                bs.len()
            ),
        ),
        None => verdict(false, "non-transitive fixture shows no idempotence failure"),
    }
}

fn c7_open_closed() -> Verdict {
    let mut counts = (0, 0);
    let mut ns: Vec<StructuringNeighborhood> = Vec::new();
    for shape in [ElementShape::Reflexive, ElementShape::Preorder] {
        for b in elements(SEED + 7, 30, 4, shape) {
            ns.push(neighborhood_from_element(&b).unwrap());
        }
    }
    ns.push(non_transitive_fixture());
    for n in &ns {
        let all = subs(n.space());
        let d = |y: &Subpresheaf| n.dilation(y).unwrap();
        let e = |y: &Subpresheaf| n.erosion(y).unwrap();
        let adj = check_adjunction(&all, d, e).pass;
        let coincide = open_closed_mismatch(&all, d, e).is_none();
        if adj != coincide {
            return verdict(
                false,
                format!("adjunction {adj} but fixed points coincide {coincide}"),
            );
        }
        if adj {
            counts.0 += 1;
        } else {
            counts.1 += 1;
        }
    }
    verdict(
        counts.0 > 0 && counts.1 > 0,
        format!(
            "{} N with adjunction and equal fixed points, {} N with neither",
            counts.0, counts.1
        ),
    )
}

fn graph_counter_model() -> Model {
    let x = Arc::new(Presheaf::graph(&["u", "v"], &[("e", "u", "v")]).unwrap());
    let p = Subpresheaf::from_named(&x, &[("V", vec!["u", "v"])]).unwrap();
    let n = neighborhood_from_element(&StructuringElement::diagonal(&x)).unwrap();
    Model::new("edge", n, BTreeMap::from([("p".to_string(), p)])).unwrap()
}

fn c8_soundness(corpus: &[Formula]) -> Verdict {
    let u = mixed_universe(SEED, 20, &["p", "q"], 5);
    let cfg = SoundnessConfig {
        seed: SEED,
        pair_domain: 300,
        triple_domain: 50,
    };
    let r = check_soundness(&u, corpus, cfg).unwrap();
    let not_not = Formula::not(Formula::not(Formula::var("p")));
    let refuted = !graph_counter_model()
        .sequent_valid(&not_not, &Formula::var("p"))
        .unwrap();
    let failures: Vec<String> = r
        .rules
        .iter()
        .filter_map(|x| {
            x.counterexample
                .as_ref()
                .map(|w| format!("{} in {}: {}", x.rule.name(), w.model, w.conclusion))
        })
        .collect();
    let instances: u64 = r.rules.iter().map(|x| x.instances).sum();
    verdict(
        failures.is_empty() && refuted && r.topological > 0 && r.boolean > 0 && r.boolean < r.models,
        format!(
            "{} rules, {instances} instances in {} models ({} topological, {} Set); ¬¬p ⊢ p refuted on the edge: {refuted}{}",
            r.rules.len(),
            r.models,
            r.topological,
            r.boolean,
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join("; ")) }
        ),
    )
}

fn failed(r: &PostulateReport) -> String {
    let f: Vec<String> = r
        .results
        .iter()
        .filter(|x| x.claimed && !x.pass)
        .map(|x| {
            let w: Vec<String> = x
                .counterexample
                .iter()
                .map(|w| format!("{}={}", w.role, w.formula))
                .collect();
            format!("{} ({})", x.postulate, w.join(", "))
        })
        .collect();
    if f.is_empty() {
        "all claimed hold".into()
    } else {
        format!("failing {}", f.join("; "))
    }
}

fn postulates(
    universes: &[(&str, &ModelUniverse, SuiteConfig)],
    corpus: &[Formula],
    suites: &[Suite],
) -> (bool, Vec<String>) {
    let mut pass = true;
    let mut lines = Vec::new();
    for (name, u, cfg) in universes {
        for &s in suites {
            let r = check_postulates(u, corpus, s, cfg).unwrap();
            pass &= r.claims_hold();
            lines.push(format!("{s} on {name}: {}", failed(&r)));
        }
    }
    (pass, lines)
}

fn c9_agm(corpus: &[Formula], two: &ModelUniverse, big: &ModelUniverse) -> Verdict {
    let t = Instant::now();
    let cfg = SuiteConfig {
        seed: SEED,
        ..SuiteConfig::default()
    };
    let suites = [
        Suite::Agm(RevisionOp::Dilation),
        Suite::Agm(RevisionOp::Tau),
    ];
    let (pass, mut lines) = postulates(
        &[("two-model", two, cfg), ("256-valuation", big, cfg)],
        corpus,
        &suites,
    );
    let values = SuiteConfig {
        equivalence: Equivalence::Values,
        ..cfg
    };
    let (values_pass, values_lines) = postulates(
        &[("two-model", two, values), ("256-valuation", big, values)],
        corpus,
        &suites,
    );
    lines.extend(
        values_lines
            .into_iter()
            .map(|l| format!("[≡ as value equality] {l}")),
    );
    let dt = t.elapsed();
    lines.push(format!(
        "value-equality reading: {}; domains {}/{}, {:.1?} (< 5 min)",
        if values_pass { "pass" } else { "fail" },
        cfg.pair_domain,
        cfg.triple_domain,
        dt
    ));
    verdict(
        pass && dt < Duration::from_secs(300),
        lines.join("\n      "),
    )
}

fn c10_contraction(corpus: &[Formula], two: &ModelUniverse, big: &ModelUniverse) -> Verdict {
    let cfg = SuiteConfig {
        seed: SEED,
        ..SuiteConfig::default()
    };
    let (pass, lines) = postulates(
        &[("two-model", two, cfg), ("256-valuation", big, cfg)],
        corpus,
        &[Suite::Contraction(RevisionOp::Tau)],
    );
    verdict(pass, lines.join("\n      "))
}

fn c11_abduction(corpus: &[Formula], two: &ModelUniverse, big: &ModelUniverse) -> Verdict {
    let small = SuiteConfig {
        seed: SEED,
        pair_domain: 300,
        triple_domain: 60,
        theories: 8,
        ..SuiteConfig::default()
    };
    let smaller = SuiteConfig {
        pair_domain: 200,
        triple_domain: 40,
        theories: 6,
        ..small
    };
    let (pass, mut lines) = postulates(
        &[("two-model", two, small), ("256-valuation", big, smaller)],
        corpus,
        &[
            Suite::Abduction(AbductionVariant::Lcr),
            Suite::Abduction(AbductionVariant::Lnr),
        ],
    );
    lines
        .push("quantifiers are bounded to seeded corpus sub-domains (sizes in each report)".into());
    verdict(pass, lines.join("\n      "))
}

fn c12_minimality(corpus: &[Formula], two: &ModelUniverse) -> Verdict {
    let phis = sample_domain(corpus, 200, SEED);
    let mut pass = true;
    let mut lines = Vec::new();
    for op in [RevisionOp::Dilation, RevisionOp::Tau] {
        let r = minimality_suite(two, corpus, &phis, op, FixpointMode::Semantic).unwrap();
        pass &= r.pass() && r.partial < r.phis;
        lines.push(format!(
            "{op:?}: {} φ × {} ψ, {} φ skipped (operator partial), {} failing",
            r.phis,
            r.corpus,
            r.partial,
            r.failures.len()
        ));
    }
    verdict(pass, lines.join("; "))
}

fn c13_rcc8() -> Verdict {
    for (rel, p, q) in line_fixtures() {
        let m = line_model(8, &p, &q).unwrap();
        let r = classify(&m, &Formula::var("p"), &Formula::var("q")).unwrap();
        if r.relation != Some(rel) {
            return verdict(
                false,
                format!("{rel} fixture classified as {:?}", r.relation),
            );
        }
    }
    let mut r = rng(SEED + 13);
    let (p, q) = (Formula::var("p"), Formula::var("q"));
    let mut disconnected = 0;
    for i in 0..1000 {
        let space = Arc::new(random_presheaf(&mut r, 6));
        let b = random_element(&mut r, &space, ElementShape::Reflexive);
        let val = BTreeMap::from([
            ("p".to_string(), random_subobject(&mut r, &space)),
            ("q".to_string(), random_subobject(&mut r, &space)),
        ]);
        let m = Model::new(format!("S{i}"), neighborhood_from_element(&b).unwrap(), val).unwrap();
        let rep = classify(&m, &p, &q).unwrap();
        if rep.dc != rep.dc_negated {
            return verdict(false, format!("DC forms disagree in scene {i}"));
        }
        disconnected += rep.dc as usize;
    }
    verdict(
        true,
        format!("8/8 fixtures; DC forms agree on 1000 scenes ({disconnected} disconnected)"),
    )
}

/// Every graph with at most three vertices and three edges.
fn small_graphs() -> Vec<Arc<Presheaf>> {
    let mut out = Vec::new();
    for nv in 0..=3usize {
        let vs: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        for ne in 0..=3u32 {
            if nv == 0 && ne > 0 {
                continue;
            }
            let ends = nv * nv;
            for code in 0..ends.pow(ne) {
                let edges: Vec<(String, String, String)> = (0..ne as usize)
                    .map(|k| {
                        let c = code / ends.pow(k as u32) % ends;
                        (format!("e{k}"), vs[c / nv].clone(), vs[c % nv].clone())
                    })
                    .collect();
                out.push(Arc::new(Presheaf::graph(&vs, &edges).unwrap()));
            }
        }
    }
    out
}

fn c14_infrastructure() -> Verdict {
    let graphs = small_graphs();
    for g in &graphs {
        let all = subs(g);
        if let Some(r) = check_heyting_laws(&all).into_iter().find(|r| !r.pass) {
            return verdict(
                false,
                format!("{} fails on a {}-element graph", r.law, g.total()),
            );
        }
    }
    // Ω(E) = Sub(y(E)); the generic edge has vertices s, t and edge e.
    let edge = Presheaf::graph(&["s", "t"], &[("e", "s", "t")]).unwrap();
    let brute = (0u8..8)
        .filter(|m| {
            let (s, t, e) = (m & 1 != 0, m & 2 != 0, m & 4 != 0);
            !e || (s && t)
        })
        .count();
    let cat = Arc::new(FiniteCategory::graph_index());
    let omega = power_object(&Arc::new(Presheaf::terminal(cat.clone())), DEFAULT_CAP).unwrap();
    let e = cat.object_index("E").unwrap();
    let omega_e = omega.stage(e).len();
    let sub_edge = subs(&Arc::new(edge)).len();
    let mut r = rng(SEED + 14);
    let bad = (0..1000).find_map(|_| {
        let f = random_formula(&mut r, 5);
        let back = parse_formula(&format_formula(&f)).ok();
        (back.as_ref() != Some(&f)).then(|| format_formula(&f))
    });
    let ok = omega_e == brute && sub_edge == brute && bad.is_none();
    verdict(
        ok,
        format!(
            "Heyting laws on {} graphs; |Ω(E)| = {omega_e} (brute force {brute}); parser round-trip on 1000 ASTs{}",
            graphs.len(),
            bad.map(|b| format!(" fails on {b}")).unwrap_or_default()
        ),
    )
}

fn random_formula(r: &mut impl Rng, depth: usize) -> Formula {
    let leaf = depth == 0 || r.gen_bool(0.2);
    if leaf {
        return match r.gen_range(0..5) {
            0 => Formula::top(),
            1 => Formula::bot(),
            2 => Formula::var("p"),
            3 => Formula::var("q"),
            _ => Formula::var("r1"),
        };
    }
    let op = r.gen_range(0..6);
    let a = random_formula(r, depth - 1);
    if op < 3 {
        return [Formula::not, Formula::boxed, Formula::dia][op](a);
    }
    let b = random_formula(r, depth - 1);
    [Formula::and, Formula::or, Formula::imp][op - 3](a, b)
}

fn main() {
    let start = Instant::now();
    let corpus = generate_corpus(&["p", "q"], 2, usize::MAX);
    let two = two_model_universe();
    let big = standard_valuation_universe();
    println!(
        "acceptance: depth-2 corpus of {} formulas over p, q; universes of {} and {} models; seed {SEED}",
        corpus.len(),
        two.len(),
        big.len()
    );
    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Verdict + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("adjunction δ[b] ⊣ ε[b]", Box::new(c1_adjunction)),
        ("reflexivity biconditional", Box::new(c2_reflexivity)),
        ("erosion/dilation duality", Box::new(c3_duality)),
        ("opening/closing absorption", Box::new(c4_opening_closing)),
        ("N_b operators", Box::new(c5_neighborhood_of_element)),
        ("topological neighborhoods", Box::new(c6_topological)),
        ("adjunction iff open = closed", Box::new(c7_open_closed)),
        (
            "soundness of the calculus",
            Box::new(|| c8_soundness(&corpus)),
        ),
        ("AGM postulates", Box::new(|| c9_agm(&corpus, &two, &big))),
        (
            "contraction postulates",
            Box::new(|| c10_contraction(&corpus, &two, &big)),
        ),
        (
            "abduction postulates",
            Box::new(|| c11_abduction(&corpus, &two, &big)),
        ),
        (
            "faithful assignment minimality",
            Box::new(|| c12_minimality(&corpus, &two)),
        ),
        ("RCC-8 classification", Box::new(c13_rcc8)),
        ("lattice, Ω and parser", Box::new(c14_infrastructure)),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = run();
        failures += !v.pass as usize;
        println!(
            "{} criterion {:>2} {name} [{:.1?}]: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed(),
            v.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass in {:.1?}",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
