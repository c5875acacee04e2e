//! RCC-8 relations between two regions of one model.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fincat::Presheaf;
use crate::logic::{Formula, Model};
use crate::morphology::neighborhood_from_element;
use crate::sublattice::Subpresheaf;
use crate::universes::line_element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rcc8 {
    DC,
    EC,
    PO,
    TPP,
    TPPi,
    NTPP,
    NTPPi,
    EQ,
}

impl Rcc8 {
    pub const ALL: [Rcc8; 8] = [
        Rcc8::DC,
        Rcc8::EC,
        Rcc8::PO,
        Rcc8::TPP,
        Rcc8::TPPi,
        Rcc8::NTPP,
        Rcc8::NTPPi,
        Rcc8::EQ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rcc8::DC => "DC",
            Rcc8::EC => "EC",
            Rcc8::PO => "PO",
            Rcc8::TPP => "TPP",
            Rcc8::TPPi => "TPPi",
            Rcc8::NTPP => "NTPP",
            Rcc8::NTPPi => "NTPPi",
            Rcc8::EQ => "EQ",
        }
    }

    /// The relation with its arguments swapped.
    pub fn converse(self) -> Rcc8 {
        match self {
            Rcc8::TPP => Rcc8::TPPi,
            Rcc8::TPPi => Rcc8::TPP,
            Rcc8::NTPP => Rcc8::NTPPi,
            Rcc8::NTPPi => Rcc8::NTPP,
            r => r,
        }
    }
}

impl std::fmt::Display for Rcc8 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Flags of every clause, plus the evaluated subformulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rcc8Report {
    #[serde(rename = "C")]
    pub c: bool,
    #[serde(rename = "DC")]
    pub dc: bool,
    #[serde(rename = "EC")]
    pub ec: bool,
    #[serde(rename = "PO")]
    pub po: bool,
    #[serde(rename = "TPP")]
    pub tpp: bool,
    #[serde(rename = "TPPi")]
    pub tppi: bool,
    #[serde(rename = "NTPP")]
    pub ntpp: bool,
    #[serde(rename = "NTPPi")]
    pub ntppi: bool,
    #[serde(rename = "EQ")]
    pub eq: bool,
    /// `⟦¬(φ ∧ ψ)⟧ = ⊤`, the negated form of `DC`.
    pub dc_negated: bool,
    pub relation: Option<Rcc8>,
    /// Subformula text to its value.
    pub witnesses: BTreeMap<String, String>,
}

impl Rcc8Report {
    pub fn holds(&self, r: Rcc8) -> bool {
        match r {
            Rcc8::DC => self.dc,
            Rcc8::EC => self.ec,
            Rcc8::PO => self.po,
            Rcc8::TPP => self.tpp,
            Rcc8::TPPi => self.tppi,
            Rcc8::NTPP => self.ntpp,
            Rcc8::NTPPi => self.ntppi,
            Rcc8::EQ => self.eq,
        }
    }

    /// The relations whose flag is set, in [`Rcc8::ALL`] order.
    pub fn flagged(&self) -> Vec<Rcc8> {
        Rcc8::ALL.into_iter().filter(|&r| self.holds(r)).collect()
    }
}

/// Precedence for picking one relation: `EQ > NTPP > NTPPi > TPP > TPPi > PO > EC > DC`.
pub const PRECEDENCE: [Rcc8; 8] = [
    Rcc8::EQ,
    Rcc8::NTPP,
    Rcc8::NTPPi,
    Rcc8::TPP,
    Rcc8::TPPi,
    Rcc8::PO,
    Rcc8::EC,
    Rcc8::DC,
];

/// Evaluates the decision table in one model.
///
/// Intersection clauses test `≠ ⊥`; inclusion clauses test `= ⊤`.
pub fn classify(model: &Model, phi: &Formula, psi: &Formula) -> Result<Rcc8Report> {
    let mut witnesses = BTreeMap::new();
    let mut ev = |f: Formula| -> Result<Subpresheaf> {
        let v = model.eval(&f)?;
        witnesses.insert(f.to_string(), v.to_string());
        Ok(v)
    };
    let (p, q) = (phi.clone(), psi.clone());
    let not = Formula::not;
    let meet = ev(Formula::and(p.clone(), q.clone()))?;
    let dc_negated = ev(not(Formula::and(p.clone(), q.clone())))?.is_top();
    let dia_p_q = ev(Formula::and(Formula::dia(p.clone()), q.clone()))?;
    let p_dia_q = ev(Formula::and(p.clone(), Formula::dia(q.clone())))?;
    let p_not_q = ev(Formula::and(p.clone(), not(q.clone())))?;
    let not_p_q = ev(Formula::and(not(p.clone()), q.clone()))?;
    let p_in_q = ev(Formula::imp(p.clone(), q.clone()))?.is_top();
    let q_in_p = ev(Formula::imp(q.clone(), p.clone()))?.is_top();
    let p_touch = ev(Formula::and(Formula::dia(p.clone()), not(q.clone())))?;
    let q_touch = ev(Formula::and(Formula::dia(q.clone()), not(p.clone())))?;
    let p_inner = ev(Formula::imp(p.clone(), Formula::boxed(q.clone())))?.is_top();
    let q_inner = ev(Formula::imp(q.clone(), Formula::boxed(p.clone())))?.is_top();
    let eq = ev(p)? == ev(q)?;

    let c = !meet.is_bottom();
    let dc = !c;
    let mut report = Rcc8Report {
        c,
        dc,
        ec: dc && !dia_p_q.is_bottom() && !p_dia_q.is_bottom(),
        po: c && !p_not_q.is_bottom() && !not_p_q.is_bottom(),
        tpp: p_in_q && !p_touch.is_bottom(),
        tppi: q_in_p && !q_touch.is_bottom(),
        ntpp: p_in_q && p_inner,
        ntppi: q_in_p && q_inner,
        eq,
        dc_negated,
        relation: None,
        witnesses,
    };
    report.relation = PRECEDENCE.into_iter().find(|&r| report.holds(r));
    Ok(report)
}

/// `X = {0, …, n-1}` with `b(x) = {x-1, x, x+1}` and the given regions.
pub fn line_model(n: usize, p: &[usize], q: &[usize]) -> Result<Model> {
    let b = line_element(n);
    let space: Arc<Presheaf> = b.space().clone();
    let region = |xs: &[usize]| {
        let idx: Vec<(usize, usize)> = xs.iter().map(|&x| (0, x)).collect();
        Subpresheaf::from_indices(&space, &idx)
    };
    let val = BTreeMap::from([("p".to_string(), region(p)?), ("q".to_string(), region(q)?)]);
    Model::new("line", neighborhood_from_element(&b)?, val)
}

/// One scene per relation on the eight-point line, regions `p` and `q`.
pub fn line_fixtures() -> Vec<(Rcc8, Vec<usize>, Vec<usize>)> {
    vec![
        (Rcc8::DC, vec![0, 1], vec![5, 6]),
        (Rcc8::EC, vec![0, 1, 2], vec![3, 4, 5]),
        (Rcc8::PO, vec![0, 1, 2, 3], vec![2, 3, 4, 5]),
        (Rcc8::TPP, vec![2, 3], vec![2, 3, 4, 5]),
        (Rcc8::TPPi, vec![2, 3, 4, 5], vec![2, 3]),
        (Rcc8::NTPP, vec![3, 4], vec![2, 3, 4, 5]),
        (Rcc8::NTPPi, vec![2, 3, 4, 5], vec![3, 4]),
        (Rcc8::EQ, vec![2, 3, 4], vec![2, 3, 4]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(p: &[usize], q: &[usize]) -> Rcc8Report {
        let m = line_model(8, p, q).unwrap();
        classify(&m, &Formula::var("p"), &Formula::var("q")).unwrap()
    }

    #[test]
    fn externally_connected_fixture() {
        let r = run(&[0, 1, 2], &[3, 4, 5]);
        assert!(r.dc && r.ec && !r.c);
        assert_eq!(r.witnesses["<>p & q"], "{3}");
        assert_eq!(r.witnesses["p & <>q"], "{2}");
        assert_eq!(r.relation, Some(Rcc8::EC));
    }

    #[test]
    fn non_tangential_fixture() {
        let r = run(&[3, 4], &[2, 3, 4, 5]);
        assert!(r.ntpp && !r.tpp && r.c);
        assert_eq!(r.witnesses["p -> []q"], "{0, 1, 2, 3, 4, 5, 6, 7}");
        assert_eq!(r.witnesses["<>p & ~q"], "{}");
    }

    #[test]
    fn fixtures_flag_only_their_relation() {
        for (rel, p, q) in line_fixtures() {
            let r = run(&p, &q);
            assert_eq!(r.relation, Some(rel), "{rel}");
            let expected = match rel {
                Rcc8::EC => vec![Rcc8::DC, Rcc8::EC],
                Rcc8::EQ => vec![Rcc8::TPP, Rcc8::TPPi, Rcc8::EQ],
                r => vec![r],
            };
            assert_eq!(r.flagged(), expected, "{rel}");
            assert_eq!(r.c, !r.dc);
            assert_eq!(r.dc, r.dc_negated);
        }
    }

    #[test]
    fn identical_regions_also_touch_their_boundary() {
        let r = run(&[2, 3, 4], &[2, 3, 4]);
        assert_eq!(r.flagged(), vec![Rcc8::TPP, Rcc8::TPPi, Rcc8::EQ]);
        let r = run(&[0, 1, 2, 3, 4, 5, 6, 7], &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(r.flagged(), vec![Rcc8::NTPP, Rcc8::NTPPi, Rcc8::EQ]);
    }

    #[test]
    fn swapping_arguments_takes_converses() {
        for (_, p, q) in line_fixtures() {
            let a = run(&p, &q);
            let b = run(&q, &p);
            let conv: Vec<Rcc8> = {
                let mut v: Vec<Rcc8> = a.flagged().into_iter().map(Rcc8::converse).collect();
                v.sort();
                v
            };
            assert_eq!(conv, b.flagged());
            assert_eq!((a.c, a.dc), (b.c, b.dc));
        }
    }

    #[test]
    fn unknown_variable() {
        let m = line_model(8, &[0], &[1]).unwrap();
        assert!(classify(&m, &Formula::var("r"), &Formula::var("q")).is_err());
    }
}
