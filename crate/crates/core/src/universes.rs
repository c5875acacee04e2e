//! Ready-made model universes and seeded random generators.

use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fincat::Presheaf;
use crate::logic::{Model, ModelUniverse};
use crate::morphology::{neighborhood_from_element, StructuringElement};
use crate::sublattice::Subpresheaf;

/// `{0, …, n-1}` with `b(x) = {x-1, x, x+1}`.
pub fn line_element(n: usize) -> StructuringElement {
    let space = Arc::new(Presheaf::range_set(n));
    StructuringElement::from_fn(&space, |_, x| {
        (x.saturating_sub(1)..=(x + 1).min(n - 1)).collect()
    })
    .expect("the line relation is closed")
}

fn set_of(space: &Arc<Presheaf>, elems: &[usize]) -> Subpresheaf {
    let idx: Vec<(usize, usize)> = elems.iter().map(|&x| (0, x)).collect();
    Subpresheaf::from_indices(space, &idx).expect("Set backend subsets are closed")
}

/// `X = {0, 1}`, full `b`; `M1: p = X, q = ∅`; `M2: p = {1}, q = X`.
pub fn two_model_universe() -> ModelUniverse {
    let space = Arc::new(Presheaf::range_set(2));
    let n = neighborhood_from_element(&StructuringElement::full(&space)).unwrap();
    let val = |p: &[usize], q: &[usize]| {
        BTreeMap::from([
            ("p".to_string(), set_of(&space, p)),
            ("q".to_string(), set_of(&space, q)),
        ])
    };
    let m1 = Model::new("M1", n.clone(), val(&[0, 1], &[])).unwrap();
    let m2 = Model::new("M2", n, val(&[1], &[0, 1])).unwrap();
    ModelUniverse::new(vec![m1, m2]).unwrap()
}

/// Every valuation of `vars` over the line `{0, …, size-1}`.
///
/// Model `i` assigns to the `k`-th variable the subset whose bit `x` is bit
/// `k·size + x` of `i`.
pub fn valuation_universe<S: AsRef<str>>(size: usize, vars: &[S]) -> ModelUniverse {
    let b = line_element(size);
    let space = b.space().clone();
    let n = neighborhood_from_element(&b).unwrap();
    let base = Model::new("base", n, BTreeMap::new()).unwrap();
    let count = 1usize << (size * vars.len());
    let models = (0..count)
        .map(|i| {
            let mut val = BTreeMap::new();
            for (k, v) in vars.iter().enumerate() {
                let elems: Vec<usize> =
                    (0..size).filter(|x| i >> (k * size + x) & 1 == 1).collect();
                val.insert(v.as_ref().to_string(), set_of(&space, &elems));
            }
            base.with_valuation(format!("V{i}"), val).unwrap()
        })
        .collect();
    ModelUniverse::new(models).unwrap()
}

/// The two-variable valuation universe over a four-point line: 256 models.
pub fn standard_valuation_universe() -> ModelUniverse {
    valuation_universe(4, &["p", "q"])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A finite set or a directed multigraph with at most `max` elements per stage.
pub fn random_presheaf(rng: &mut impl Rng, max: usize) -> Presheaf {
    if rng.gen_bool(0.5) {
        return Presheaf::range_set(rng.gen_range(1..=max));
    }
    let nv = rng.gen_range(1..=max);
    let ne = rng.gen_range(0..=max);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..ne)
        .map(|i| {
            (
                format!("e{i}"),
                vertices[rng.gen_range(0..nv)].clone(),
                vertices[rng.gen_range(0..nv)].clone(),
            )
        })
        .collect();
    Presheaf::graph(&vertices, &edges).expect("random graph is well formed")
}

/// Constraints on a random structuring element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementShape {
    Any,
    Reflexive,
    /// Reflexive and transitive at every stage.
    Preorder,
}

fn pairs_of(b: &StructuringElement) -> Vec<(usize, usize, usize)> {
    let space = b.space();
    let mut out = Vec::new();
    for c in 0..space.category().num_objects() {
        for x in 0..space.stage_len(c) {
            out.extend(b.image(c, x).iter().map(|&y| (c, x, y)));
        }
    }
    out
}

fn transitive_closure(
    space: &Presheaf,
    pairs: &[(usize, usize, usize)],
) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for c in 0..space.category().num_objects() {
        let n = space.stage_len(c);
        let mut m = vec![vec![false; n]; n];
        for &(d, x, y) in pairs {
            if d == c {
                m[x][y] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if m[i][k] {
                    for j in 0..n {
                        if m[k][j] {
                            m[i][j] = true;
                        }
                    }
                }
            }
        }
        for (x, row) in m.iter().enumerate() {
            out.extend(
                row.iter()
                    .enumerate()
                    .filter(|(_, &t)| t)
                    .map(|(y, _)| (c, x, y)),
            );
        }
    }
    out
}

/// A restriction-closed relation built from a random seed set of pairs.
pub fn random_element(
    rng: &mut impl Rng,
    space: &Arc<Presheaf>,
    shape: ElementShape,
) -> StructuringElement {
    let density: f64 = rng.gen_range(0.05..0.5);
    let mut pairs = Vec::new();
    for c in 0..space.category().num_objects() {
        let n = space.stage_len(c);
        for x in 0..n {
            for y in 0..n {
                if rng.gen_bool(density) || (shape != ElementShape::Any && x == y) {
                    pairs.push((c, x, y));
                }
            }
        }
    }
    let mut b = StructuringElement::generated(space, &pairs).expect("same space");
    if shape == ElementShape::Preorder {
        loop {
            let before = b.relation().count();
            let closed = transitive_closure(space, &pairs_of(&b));
            b = StructuringElement::generated(space, &closed).expect("same space");
            if b.relation().count() == before {
                break;
            }
        }
    }
    b
}

/// A random subpresheaf: the interior or the closure of a random selection.
pub fn random_subobject(rng: &mut impl Rng, space: &Arc<Presheaf>) -> Subpresheaf {
    let density: f64 = rng.gen_range(0.0..1.0);
    let mut sel = FixedBitSet::with_capacity(space.total());
    for k in 0..space.total() {
        if rng.gen_bool(density) {
            sel.insert(k);
        }
    }
    if rng.gen_bool(0.5) {
        Subpresheaf::interior(space, &sel)
    } else {
        Subpresheaf::generated(space, &sel)
    }
}

/// `n` models over `vars` on random presheaves of at most `max` elements per
/// stage, mixing topological and non-topological neighborhoods.
pub fn mixed_universe<S: AsRef<str>>(seed: u64, n: usize, vars: &[S], max: usize) -> ModelUniverse {
    let mut rng = rng(seed);
    let shapes = [ElementShape::Reflexive, ElementShape::Preorder];
    let models = (0..n)
        .map(|i| {
            let space = Arc::new(random_presheaf(&mut rng, max));
            let shape = *shapes.choose(&mut rng).unwrap();
            let b = random_element(&mut rng, &space, shape);
            let nb = neighborhood_from_element(&b).expect("reflexive by construction");
            let val = vars
                .iter()
                .map(|v| (v.as_ref().to_string(), random_subobject(&mut rng, &space)))
                .collect();
            Model::new(format!("R{i}"), nb, val).expect("valid by construction")
        })
        .collect();
    ModelUniverse::new(models).expect("shared variables")
}
