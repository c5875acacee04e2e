use serde::{Deserialize, Serialize};

use super::formula::{format_sequent, parse_sequent, Formula, Kind};
use crate::error::Result;

/// `φ ⊢ ψ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Sequent {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Sequent { lhs, rhs }
    }

    pub fn parse(src: &str) -> Result<Self> {
        let (lhs, rhs) = parse_sequent(src)?;
        Ok(Sequent { lhs, rhs })
    }
}

impl std::fmt::Display for Sequent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_sequent(&self.lhs, &self.rhs))
    }
}

/// Rule tags of the calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "Identity")]
    Identity,
    #[serde(rename = "Axiom-Preservation")]
    AxiomPreservation,
    #[serde(rename = "Axiom-Duality")]
    AxiomDuality,
    #[serde(rename = "Axiom-Distributivity")]
    AxiomDistributivity,
    #[serde(rename = "Axiom-K")]
    AxiomK,
    #[serde(rename = "Axiom-T")]
    AxiomT,
    #[serde(rename = "Axiom-S4")]
    AxiomS4,
    #[serde(rename = "Axiom-Classical")]
    AxiomClassical,
    #[serde(rename = "Inconsistency")]
    Inconsistency,
    #[serde(rename = "Tautology")]
    Tautology,
    #[serde(rename = "Cut")]
    Cut,
    /// `φ∧ψ ⊢ φ` and `φ∧ψ ⊢ ψ`.
    #[serde(rename = "Conj-Elim")]
    ConjElim,
    /// `φ∧φ ⊣⊢ φ`.
    #[serde(rename = "Conj-Idem")]
    ConjIdem,
    /// `φ∧ψ ⊣⊢ ψ∧φ`.
    #[serde(rename = "Conj-Comm")]
    ConjComm,
    /// From `φ ⊢ ψ` and `φ ⊢ χ` infer `φ ⊢ ψ∧χ`.
    #[serde(rename = "Conj-Intro")]
    ConjIntro,
    /// `φ ⊢ φ∨ψ` and `ψ ⊢ φ∨ψ`.
    #[serde(rename = "Disj-Intro")]
    DisjIntro,
    /// `φ∨ψ ⊣⊢ ψ∨φ`.
    #[serde(rename = "Disj-Comm")]
    DisjComm,
    /// Double line: from `φ ⊢ χ` and `ψ ⊢ χ` infer `φ∨ψ ⊢ χ`, and from
    /// `φ∨ψ ⊢ χ` infer either of `φ ⊢ χ`, `ψ ⊢ χ`.
    #[serde(rename = "Disj-Elim")]
    DisjElim,
    /// `φ∧(ψ∨χ) ⊣⊢ (φ∧ψ)∨(φ∧χ)`.
    #[serde(rename = "Distr")]
    Distr,
    /// Double line between `φ∧ψ ⊢ χ` and `φ ⊢ ψ⇒χ`.
    #[serde(rename = "Imp")]
    Imp,
    /// `¬φ ⊣⊢ φ⇒⊥`.
    #[serde(rename = "Neg")]
    Neg,
    #[serde(rename = "Mod-Box")]
    ModBox,
    #[serde(rename = "Mod-Dia")]
    ModDia,
}

impl Rule {
    pub const ALL: [Rule; 23] = [
        Rule::Identity,
        Rule::AxiomPreservation,
        Rule::AxiomDuality,
        Rule::AxiomDistributivity,
        Rule::AxiomK,
        Rule::AxiomT,
        Rule::AxiomS4,
        Rule::AxiomClassical,
        Rule::Inconsistency,
        Rule::Tautology,
        Rule::Cut,
        Rule::ConjElim,
        Rule::ConjIdem,
        Rule::ConjComm,
        Rule::ConjIntro,
        Rule::DisjIntro,
        Rule::DisjComm,
        Rule::DisjElim,
        Rule::Distr,
        Rule::Imp,
        Rule::Neg,
        Rule::ModBox,
        Rule::ModDia,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Identity => "Identity",
            Rule::AxiomPreservation => "Axiom-Preservation",
            Rule::AxiomDuality => "Axiom-Duality",
            Rule::AxiomDistributivity => "Axiom-Distributivity",
            Rule::AxiomK => "Axiom-K",
            Rule::AxiomT => "Axiom-T",
            Rule::AxiomS4 => "Axiom-S4",
            Rule::AxiomClassical => "Axiom-Classical",
            Rule::Inconsistency => "Inconsistency",
            Rule::Tautology => "Tautology",
            Rule::Cut => "Cut",
            Rule::ConjElim => "Conj-Elim",
            Rule::ConjIdem => "Conj-Idem",
            Rule::ConjComm => "Conj-Comm",
            Rule::ConjIntro => "Conj-Intro",
            Rule::DisjIntro => "Disj-Intro",
            Rule::DisjComm => "Disj-Comm",
            Rule::DisjElim => "Disj-Elim",
            Rule::Distr => "Distr",
            Rule::Imp => "Imp",
            Rule::Neg => "Neg",
            Rule::ModBox => "Mod-Box",
            Rule::ModDia => "Mod-Dia",
        }
    }

    /// Accepted numbers of premises.
    pub fn arities(self) -> &'static [usize] {
        match self {
            Rule::Cut | Rule::ConjIntro => &[2],
            Rule::DisjElim => &[1, 2],
            Rule::Imp | Rule::ModBox | Rule::ModDia => &[1],
            _ => &[0],
        }
    }

    /// The schema shown when a node is rejected.
    pub fn schema(self) -> &'static str {
        match self {
            Rule::Identity => "φ ⊢ φ",
            Rule::AxiomPreservation => "□⊤ ⊣⊢ ⊤ or ◇⊥ ⊣⊢ ⊥",
            Rule::AxiomDuality => "□¬φ ⊢ ¬◇φ",
            Rule::AxiomDistributivity => "□(φ∧ψ) ⊣⊢ □φ∧□ψ or ◇φ∨◇ψ ⊢ ◇(φ∨ψ)",
            Rule::AxiomK => "□(φ⇒ψ) ⊢ □φ⇒□ψ",
            Rule::AxiomT => "□φ ⊢ φ or φ ⊢ ◇φ",
            Rule::AxiomS4 => "□φ ⊢ □□φ or ◇◇φ ⊢ ◇φ",
            Rule::AxiomClassical => "¬¬φ ⊢ φ",
            Rule::Inconsistency => "⊥ ⊢ ψ",
            Rule::Tautology => "φ ⊢ ⊤",
            Rule::Cut => "φ ⊢ ψ, ψ ⊢ χ / φ ⊢ χ",
            Rule::ConjElim => "φ∧ψ ⊢ φ or φ∧ψ ⊢ ψ",
            Rule::ConjIdem => "φ∧φ ⊣⊢ φ",
            Rule::ConjComm => "φ∧ψ ⊣⊢ ψ∧φ",
            Rule::ConjIntro => "φ ⊢ ψ, φ ⊢ χ / φ ⊢ ψ∧χ",
            Rule::DisjIntro => "φ ⊢ φ∨ψ or ψ ⊢ φ∨ψ",
            Rule::DisjComm => "φ∨ψ ⊣⊢ ψ∨φ",
            Rule::DisjElim => "φ ⊢ χ, ψ ⊢ χ // φ∨ψ ⊢ χ",
            Rule::Distr => "φ∧(ψ∨χ) ⊣⊢ (φ∧ψ)∨(φ∧χ)",
            Rule::Imp => "φ∧ψ ⊢ χ // φ ⊢ ψ⇒χ",
            Rule::Neg => "¬φ ⊣⊢ φ⇒⊥",
            Rule::ModBox => "φ ⊢ ψ / □φ ⊢ □ψ",
            Rule::ModDia => "φ ⊢ ψ / ◇φ ⊢ ◇ψ",
        }
    }
}

impl std::str::FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Rule::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// A rule-labeled tree of sequents.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub rule: Rule,
    pub sequent: Sequent,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: Rule, sequent: Sequent) -> Self {
        Derivation {
            rule,
            sequent,
            children: vec![],
        }
    }

    pub fn node(rule: Rule, sequent: Sequent, children: Vec<Derivation>) -> Self {
        Derivation {
            rule,
            sequent,
            children,
        }
    }
}

/// Which optional axioms a check admits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckFlags {
    pub allow_s4: bool,
    pub allow_classical: bool,
}

/// Outcome of [`check_derivation`]. On rejection, `path` lists child indices
/// from the root to the offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationReport {
    pub accepted: bool,
    pub path: Vec<usize>,
    pub rule: Option<Rule>,
    pub sequent: Option<String>,
    pub expected: String,
}

fn both_ways(s: &Sequent, a: &Formula, b: &Formula) -> bool {
    (s.lhs == *a && s.rhs == *b) || (s.lhs == *b && s.rhs == *a)
}

/// Whether a leaf sequent instantiates an axiom schema.
fn leaf_ok(rule: Rule, s: &Sequent) -> bool {
    let (l, r) = (&s.lhs, &s.rhs);
    match rule {
        Rule::Identity => l == r,
        Rule::AxiomPreservation => {
            both_ways(s, &Formula::boxed(Formula::top()), &Formula::top())
                || both_ways(s, &Formula::dia(Formula::bot()), &Formula::bot())
        }
        Rule::AxiomDuality => match (l.kind(), r.kind()) {
            (Kind::Box(a), Kind::Not(b)) => match (a.kind(), b.kind()) {
                (Kind::Not(phi), Kind::Dia(phi2)) => phi == phi2,
                _ => false,
            },
            _ => false,
        },
        Rule::AxiomDistributivity => {
            let box_split = |whole: &Formula, parts: &Formula| match (whole.kind(), parts.kind()) {
                (Kind::Box(inner), Kind::And(x, y)) => match (inner.kind(), x.kind(), y.kind()) {
                    (Kind::And(a, b), Kind::Box(a2), Kind::Box(b2)) => a == a2 && b == b2,
                    _ => false,
                },
                _ => false,
            };
            let dia_join = match (l.kind(), r.kind()) {
                (Kind::Or(x, y), Kind::Dia(inner)) => match (x.kind(), y.kind(), inner.kind()) {
                    (Kind::Dia(a), Kind::Dia(b), Kind::Or(a2, b2)) => a == a2 && b == b2,
                    _ => false,
                },
                _ => false,
            };
            box_split(l, r) || box_split(r, l) || dia_join
        }
        Rule::AxiomK => match (l.kind(), r.kind()) {
            (Kind::Box(inner), Kind::Imp(x, y)) => match (inner.kind(), x.kind(), y.kind()) {
                (Kind::Imp(a, b), Kind::Box(a2), Kind::Box(b2)) => a == a2 && b == b2,
                _ => false,
            },
            _ => false,
        },
        Rule::AxiomT => {
            matches!(l.kind(), Kind::Box(a) if a == r) || matches!(r.kind(), Kind::Dia(a) if a == l)
        }
        Rule::AxiomS4 => {
            matches!(r.kind(), Kind::Box(a) if a == l && matches!(l.kind(), Kind::Box(_)))
                || matches!(l.kind(), Kind::Dia(a) if a == r && matches!(r.kind(), Kind::Dia(_)))
        }
        Rule::AxiomClassical => match l.kind() {
            Kind::Not(a) => matches!(a.kind(), Kind::Not(b) if b == r),
            _ => false,
        },
        Rule::Inconsistency => matches!(l.kind(), Kind::Bot),
        Rule::Tautology => matches!(r.kind(), Kind::Top),
        Rule::ConjElim => matches!(l.kind(), Kind::And(a, b) if a == r || b == r),
        Rule::ConjIdem => {
            matches!(l.kind(), Kind::And(a, b) if a == b && a == r)
                || matches!(r.kind(), Kind::And(a, b) if a == b && a == l)
        }
        Rule::ConjComm => match (l.kind(), r.kind()) {
            (Kind::And(a, b), Kind::And(c, d)) => a == d && b == c,
            _ => false,
        },
        Rule::DisjIntro => matches!(r.kind(), Kind::Or(a, b) if a == l || b == l),
        Rule::DisjComm => match (l.kind(), r.kind()) {
            (Kind::Or(a, b), Kind::Or(c, d)) => a == d && b == c,
            _ => false,
        },
        Rule::Distr => {
            let distr = |x: &Formula, y: &Formula| match (x.kind(), y.kind()) {
                (Kind::And(a, bc), Kind::Or(ab, ac)) => match (bc.kind(), ab.kind(), ac.kind()) {
                    (Kind::Or(b, c), Kind::And(a1, b1), Kind::And(a2, c1)) => {
                        a == a1 && a == a2 && b == b1 && c == c1
                    }
                    _ => false,
                },
                _ => false,
            };
            distr(l, r) || distr(r, l)
        }
        Rule::Neg => {
            let neg = |x: &Formula, y: &Formula| match (x.kind(), y.kind()) {
                (Kind::Not(a), Kind::Imp(b, bot)) => a == b && matches!(bot.kind(), Kind::Bot),
                _ => false,
            };
            neg(l, r) || neg(r, l)
        }
        _ => false,
    }
}

/// Whether an inference node matches its rule's premise/conclusion shape.
fn node_ok(rule: Rule, s: &Sequent, kids: &[&Sequent]) -> bool {
    match (rule, kids) {
        (Rule::Cut, [a, b]) => a.lhs == s.lhs && b.rhs == s.rhs && a.rhs == b.lhs,
        (Rule::ConjIntro, [a, b]) => {
            a.lhs == s.lhs && b.lhs == s.lhs && s.rhs == Formula::and(a.rhs.clone(), b.rhs.clone())
        }
        (Rule::DisjElim, [a, b]) => {
            a.rhs == s.rhs && b.rhs == s.rhs && s.lhs == Formula::or(a.lhs.clone(), b.lhs.clone())
        }
        (Rule::DisjElim, [a]) => {
            a.rhs == s.rhs && matches!(a.lhs.kind(), Kind::Or(x, y) if *x == s.lhs || *y == s.lhs)
        }
        (Rule::Imp, [a]) => {
            let down = |p: &Sequent, c: &Sequent| match (p.lhs.kind(), c.rhs.kind()) {
                (Kind::And(phi, psi), Kind::Imp(psi2, chi)) => {
                    *phi == c.lhs && psi == psi2 && *chi == p.rhs
                }
                _ => false,
            };
            down(a, s) || down(s, a)
        }
        (Rule::ModBox, [a]) => {
            s.lhs == Formula::boxed(a.lhs.clone()) && s.rhs == Formula::boxed(a.rhs.clone())
        }
        (Rule::ModDia, [a]) => {
            s.lhs == Formula::dia(a.lhs.clone()) && s.rhs == Formula::dia(a.rhs.clone())
        }
        _ => false,
    }
}

/// Checks every node of `d` against the calculus. Axiom-S4 and
/// Axiom-Classical leaves are accepted only when the matching flag is set.
pub fn check_derivation(d: &Derivation, flags: CheckFlags) -> DerivationReport {
    let mut path = Vec::new();
    match check_rec(d, flags, &mut path) {
        None => DerivationReport {
            accepted: true,
            path: vec![],
            rule: None,
            sequent: None,
            expected: String::new(),
        },
        Some((node, expected)) => DerivationReport {
            accepted: false,
            path,
            rule: Some(node.rule),
            sequent: Some(node.sequent.to_string()),
            expected,
        },
    }
}

fn check_rec<'a>(
    d: &'a Derivation,
    flags: CheckFlags,
    path: &mut Vec<usize>,
) -> Option<(&'a Derivation, String)> {
    let rule = d.rule;
    if !rule.arities().contains(&d.children.len()) {
        return Some((
            d,
            format!(
                "{} takes {:?} premises, got {}",
                rule.name(),
                rule.arities(),
                d.children.len()
            ),
        ));
    }
    if rule == Rule::AxiomS4 && !flags.allow_s4 {
        return Some((d, "Axiom-S4 requires topological models (--s4)".into()));
    }
    if rule == Rule::AxiomClassical && !flags.allow_classical {
        return Some((
            d,
            "Axiom-Classical requires a Boolean topos (--classical)".into(),
        ));
    }
    let ok = if d.children.is_empty() {
        leaf_ok(rule, &d.sequent)
    } else {
        let kids: Vec<&Sequent> = d.children.iter().map(|c| &c.sequent).collect();
        node_ok(rule, &d.sequent, &kids)
    };
    if !ok {
        return Some((d, rule.schema().to_string()));
    }
    for (i, c) in d.children.iter().enumerate() {
        path.push(i);
        if let Some(bad) = check_rec(c, flags, path) {
            return Some(bad);
        }
        path.pop();
    }
    None
}

/// Serialized form: `{rule, sequent: "phi |- psi", children: [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivationJson {
    pub rule: String,
    pub sequent: String,
    #[serde(default)]
    pub children: Vec<DerivationJson>,
}

impl DerivationJson {
    pub fn to_derivation(&self) -> Result<Derivation> {
        let rule = self
            .rule
            .parse::<Rule>()
            .map_err(crate::error::Error::Bundle)?;
        let children = self
            .children
            .iter()
            .map(|c| c.to_derivation())
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            rule,
            sequent: Sequent::parse(&self.sequent)?,
            children,
        })
    }

    pub fn from_derivation(d: &Derivation) -> Self {
        DerivationJson {
            rule: d.rule.name().to_string(),
            sequent: d.sequent.to_string(),
            children: d
                .children
                .iter()
                .map(DerivationJson::from_derivation)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    fn leaf(r: Rule, s: &str) -> Derivation {
        Derivation::leaf(r, seq(s))
    }

    fn ok(d: &Derivation) -> bool {
        check_derivation(d, CheckFlags::default()).accepted
    }

    #[test]
    fn axiom_t_leaf() {
        assert!(ok(&leaf(Rule::AxiomT, "[]p |- p")));
        assert!(ok(&leaf(Rule::AxiomT, "p |- <>p")));
        assert!(!ok(&leaf(Rule::AxiomT, "p |- []p")));
    }

    #[test]
    fn modality_rule() {
        let d = Derivation::node(
            Rule::ModBox,
            seq("[]p |- [](p | q)"),
            vec![leaf(Rule::DisjIntro, "p |- p | q")],
        );
        assert!(ok(&d));
    }

    #[test]
    fn wrong_distributivity_shape() {
        let r = check_derivation(
            &leaf(Rule::AxiomDistributivity, "[](p | q) |- []p | []q"),
            CheckFlags::default(),
        );
        assert!(!r.accepted);
        assert_eq!(r.rule, Some(Rule::AxiomDistributivity));
        assert!(ok(&leaf(
            Rule::AxiomDistributivity,
            "[](p & q) |- []p & []q"
        )));
        assert!(ok(&leaf(
            Rule::AxiomDistributivity,
            "[]p & []q |- [](p & q)"
        )));
        assert!(ok(&leaf(
            Rule::AxiomDistributivity,
            "<>p | <>q |- <>(p | q)"
        )));
        assert!(!ok(&leaf(
            Rule::AxiomDistributivity,
            "<>(p | q) |- <>p | <>q"
        )));
    }

    #[test]
    fn gated_axioms() {
        let s4 = leaf(Rule::AxiomS4, "[]p |- [][]p");
        assert!(!ok(&s4));
        assert!(
            check_derivation(
                &s4,
                CheckFlags {
                    allow_s4: true,
                    allow_classical: false
                }
            )
            .accepted
        );
        let cl = leaf(Rule::AxiomClassical, "~~p |- p");
        assert!(!ok(&cl));
        assert!(
            check_derivation(
                &cl,
                CheckFlags {
                    allow_s4: false,
                    allow_classical: true
                }
            )
            .accepted
        );
    }

    #[test]
    fn cut_and_path() {
        let d = Derivation::node(
            Rule::Cut,
            seq("[]p |- <>p"),
            vec![
                leaf(Rule::AxiomT, "[]p |- p"),
                leaf(Rule::AxiomT, "p |- <>p"),
            ],
        );
        assert!(ok(&d));
        let bad = Derivation::node(
            Rule::Cut,
            seq("[]p |- <>p"),
            vec![
                leaf(Rule::AxiomT, "[]p |- p"),
                leaf(Rule::Identity, "p |- <>p"),
            ],
        );
        let r = check_derivation(&bad, CheckFlags::default());
        assert!(!r.accepted);
        assert_eq!(r.path, vec![1]);
    }

    #[test]
    fn double_line_rules() {
        let up = Derivation::node(
            Rule::Imp,
            seq("p |- q -> p & q"),
            vec![leaf(Rule::Identity, "p & q |- p & q")],
        );
        assert!(ok(&up));
        let down = Derivation::node(
            Rule::Imp,
            seq("p & q |- r"),
            vec![Derivation::leaf(Rule::Identity, seq("p |- q -> r"))],
        );
        // The premise p ⊢ q→r is not an identity, so only the leaf fails.
        assert_eq!(check_derivation(&down, CheckFlags::default()).path, vec![0]);
        let split = Derivation::node(
            Rule::DisjElim,
            seq("p |- p | q"),
            vec![leaf(Rule::Identity, "p | q |- p | q")],
        );
        assert!(ok(&split));
    }

    #[test]
    fn arity_is_checked() {
        let d = Derivation::node(
            Rule::Identity,
            seq("p |- p"),
            vec![leaf(Rule::Identity, "p |- p")],
        );
        assert!(!ok(&d));
    }

    #[test]
    fn json_round_trip() {
        let d = Derivation::node(
            Rule::ModDia,
            seq("<>p |- <>(p | q)"),
            vec![leaf(Rule::DisjIntro, "p |- p | q")],
        );
        let j = serde_json::to_string(&DerivationJson::from_derivation(&d)).unwrap();
        let back: DerivationJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_derivation().unwrap(), d);
    }
}
