//! Structuring elements and neighborhoods, and the morphological operators
//! built on them.
//!
//! A structuring element is stored as its relation `R_b ↣ X × X`, where
//! `(x, y) ∈ R_b(c)` reads `y ∈ b(x)` at stage `c`. Neighborhoods are stored
//! transposed, as subobjects of `X × PX`, so `PPX` is never built.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::fincat::{product, Presheaf};
use crate::sublattice::{power_object, PowerObject, Subpresheaf};

/// Verdict of one morphological law, with witnesses when it fails.
#[derive(Debug, Clone)]
pub struct MorphoReport {
    pub property: String,
    pub pass: bool,
    pub detail: String,
    pub witnesses: Vec<Subpresheaf>,
}

impl MorphoReport {
    fn pass(property: &str) -> Self {
        MorphoReport {
            property: property.to_string(),
            pass: true,
            detail: String::new(),
            witnesses: vec![],
        }
    }

    fn fail(property: &str, detail: impl Into<String>, witnesses: Vec<Subpresheaf>) -> Self {
        MorphoReport {
            property: property.to_string(),
            pass: false,
            detail: detail.into(),
            witnesses,
        }
    }
}

/// A relation `R_b ↣ X × X`.
#[derive(Debug, Clone)]
pub struct StructuringElement {
    space: Arc<Presheaf>,
    square: Arc<Presheaf>,
    relation: Subpresheaf,
    /// `image[c][x]`: the `y` with `(x, y) ∈ R_b(c)`.
    image: Vec<Vec<Vec<usize>>>,
    /// `preimage[c][y]`: the `x` with `(x, y) ∈ R_b(c)`.
    preimage: Vec<Vec<Vec<usize>>>,
}

impl StructuringElement {
    /// Wraps a subobject of `X × X`.
    pub fn new(space: &Arc<Presheaf>, relation: Subpresheaf) -> Result<Self> {
        let square = Arc::new(product(space, space)?);
        if **relation.parent() != *square {
            return Err(Error::ParentMismatch);
        }
        Ok(Self::assemble(space, square, relation.bits().clone()))
    }

    fn assemble(space: &Arc<Presheaf>, square: Arc<Presheaf>, bits: FixedBitSet) -> Self {
        let n = space.category().num_objects();
        let mut image = Vec::with_capacity(n);
        let mut preimage = Vec::with_capacity(n);
        for c in 0..n {
            let m = space.stage_len(c);
            let mut im = vec![Vec::new(); m];
            let mut pre = vec![Vec::new(); m];
            for x in 0..m {
                for y in 0..m {
                    if bits.contains(square.flat(c, x * m + y)) {
                        im[x].push(y);
                        pre[y].push(x);
                    }
                }
            }
            image.push(im);
            preimage.push(pre);
        }
        let relation = Subpresheaf::from_bits_unchecked(&square, bits);
        StructuringElement {
            space: space.clone(),
            square,
            relation,
            image,
            preimage,
        }
    }

    /// From `(stage, x, y)` index triples; the selection must be restriction-closed.
    pub fn from_pairs(space: &Arc<Presheaf>, pairs: &[(usize, usize, usize)]) -> Result<Self> {
        let square = Arc::new(product(space, space)?);
        let elems: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(c, x, y)| (c, x * space.stage_len(c) + y))
            .collect();
        let rel = Subpresheaf::from_indices(&square, &elems)?;
        Ok(Self::assemble(space, square, rel.bits().clone()))
    }

    /// From `(object, x, y)` id triples.
    pub fn from_named_pairs<S: AsRef<str>>(
        space: &Arc<Presheaf>,
        pairs: &[(S, S, S)],
    ) -> Result<Self> {
        let cat = space.category();
        let mut idx = Vec::with_capacity(pairs.len());
        for (o, x, y) in pairs {
            let c = cat.object_index(o.as_ref())?;
            idx.push((
                c,
                space.element_index(c, x.as_ref())?,
                space.element_index(c, y.as_ref())?,
            ));
        }
        Self::from_pairs(space, &idx)
    }

    /// `b(x)` at stage `c` given as a function on indices.
    pub fn from_fn(space: &Arc<Presheaf>, f: impl Fn(usize, usize) -> Vec<usize>) -> Result<Self> {
        let mut pairs = Vec::new();
        for c in 0..space.category().num_objects() {
            for x in 0..space.stage_len(c) {
                for y in f(c, x) {
                    pairs.push((c, x, y));
                }
            }
        }
        Self::from_pairs(space, &pairs)
    }

    /// The restriction-closure of an arbitrary relation.
    pub fn generated(space: &Arc<Presheaf>, pairs: &[(usize, usize, usize)]) -> Result<Self> {
        let square = Arc::new(product(space, space)?);
        let mut sel = FixedBitSet::with_capacity(square.total());
        for &(c, x, y) in pairs {
            sel.insert(square.flat(c, x * space.stage_len(c) + y));
        }
        let rel = Subpresheaf::generated(&square, &sel);
        Ok(Self::assemble(space, square, rel.bits().clone()))
    }

    /// `b(x) = {x}`.
    pub fn diagonal(space: &Arc<Presheaf>) -> Self {
        Self::from_fn(space, |_, x| vec![x]).expect("the diagonal is restriction-closed")
    }

    /// `b(x) = X`.
    pub fn full(space: &Arc<Presheaf>) -> Self {
        Self::from_fn(space, |c, _| (0..space.stage_len(c)).collect())
            .expect("the full relation is restriction-closed")
    }

    pub fn space(&self) -> &Arc<Presheaf> {
        &self.space
    }

    /// `X × X`, the parent of the relation.
    pub fn square(&self) -> &Arc<Presheaf> {
        &self.square
    }

    pub fn relation(&self) -> &Subpresheaf {
        &self.relation
    }

    /// `b(x)` at stage `c`.
    pub fn image(&self, c: usize, x: usize) -> &[usize] {
        &self.image[c][x]
    }

    /// `b̆(y)` at stage `c`.
    pub fn preimage(&self, c: usize, y: usize) -> &[usize] {
        &self.preimage[c][y]
    }

    pub fn contains(&self, c: usize, x: usize, y: usize) -> bool {
        self.image[c][x].contains(&y)
    }

    /// `R_b̆`, the swapped relation.
    pub fn transpose(&self) -> StructuringElement {
        let mut bits = FixedBitSet::with_capacity(self.square.total());
        for c in 0..self.space.category().num_objects() {
            let m = self.space.stage_len(c);
            for (x, ys) in self.image[c].iter().enumerate() {
                for &y in ys {
                    bits.insert(self.square.flat(c, y * m + x));
                }
            }
        }
        Self::assemble(&self.space, self.square.clone(), bits)
    }

    /// First `(stage, x)` with `x ∉ b(x)`.
    pub fn reflexivity_violation(&self) -> Option<(usize, usize)> {
        (0..self.space.category().num_objects()).find_map(|c| {
            (0..self.space.stage_len(c))
                .find(|&x| !self.contains(c, x, x))
                .map(|x| (c, x))
        })
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexivity_violation().is_none()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.space.category().num_objects()).all(|c| {
            self.image[c]
                .iter()
                .enumerate()
                .all(|(x, ys)| ys.iter().all(|&y| self.contains(c, y, x)))
        })
    }

    /// First stage-wise `(stage, x, y, z)` with `x R y R z` but not `x R z`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize, usize)> {
        for c in 0..self.space.category().num_objects() {
            for (x, ys) in self.image[c].iter().enumerate() {
                for &y in ys {
                    for &z in &self.image[c][y] {
                        if !self.contains(c, x, z) {
                            return Some((c, x, y, z));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_violation().is_none()
    }

    fn check(&self, y: &Subpresheaf) -> Result<()> {
        if Arc::ptr_eq(y.parent(), &self.space) || **y.parent() == *self.space {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    /// `x ∈ ε[b](Y)(c)` iff every restriction `x·f` has `b(x·f) ⊆ Y`.
    pub fn erosion(&self, y: &Subpresheaf) -> Result<Subpresheaf> {
        self.check(y)?;
        let mut sel = FixedBitSet::with_capacity(self.space.total());
        for c in 0..self.space.category().num_objects() {
            let off = self.space.offset(c);
            for (x, ys) in self.image[c].iter().enumerate() {
                if ys.iter().all(|&z| y.contains_flat(off + z)) {
                    sel.insert(off + x);
                }
            }
        }
        Ok(Subpresheaf::interior(&self.space, &sel))
    }

    /// `x ∈ δ[b](Y)(c)` iff some `y ∈ Y(c)` has `x ∈ b(y)`.
    pub fn dilation(&self, y: &Subpresheaf) -> Result<Subpresheaf> {
        self.check(y)?;
        let mut bits = FixedBitSet::with_capacity(self.space.total());
        for c in 0..self.space.category().num_objects() {
            let off = self.space.offset(c);
            for (x, ws) in self.preimage[c].iter().enumerate() {
                if ws.iter().any(|&w| y.contains_flat(off + w)) {
                    bits.insert(off + x);
                }
            }
        }
        Ok(Subpresheaf::from_bits_unchecked(&self.space, bits))
    }

    /// `δ[b̆](Y)`: `x` is kept iff `b(x)` meets `Y` at its own stage.
    pub fn dilation_transposed(&self, y: &Subpresheaf) -> Result<Subpresheaf> {
        self.check(y)?;
        let mut bits = FixedBitSet::with_capacity(self.space.total());
        for c in 0..self.space.category().num_objects() {
            let off = self.space.offset(c);
            for (x, ys) in self.image[c].iter().enumerate() {
                if ys.iter().any(|&w| y.contains_flat(off + w)) {
                    bits.insert(off + x);
                }
            }
        }
        Ok(Subpresheaf::from_bits_unchecked(&self.space, bits))
    }

    /// `δ[b] ∘ ε[b]`.
    pub fn opening(&self, y: &Subpresheaf) -> Result<Subpresheaf> {
        self.dilation(&self.erosion(y)?)
    }

    /// `ε[b] ∘ δ[b]`.
    pub fn closing(&self, y: &Subpresheaf) -> Result<Subpresheaf> {
        self.erosion(&self.dilation(y)?)
    }

    /// `(opening, closing)`.
    pub fn opening_closing(&self, y: &Subpresheaf) -> Result<(Subpresheaf, Subpresheaf)> {
        Ok((self.opening(y)?, self.closing(y)?))
    }
}

/// A neighborhood given as a table `N ↣ X × PX`.
#[derive(Debug, Clone)]
pub struct ExplicitNeighborhood {
    power: Arc<PowerObject>,
    table_parent: Arc<Presheaf>,
    table: Subpresheaf,
    /// `members[c][x]`: the `A ∈ PX(c)` with `(x, A) ∈ N(c)`, ascending.
    members: Vec<Vec<Vec<usize>>>,
}

impl ExplicitNeighborhood {
    /// Wraps a subobject of `X × PX`.
    pub fn new(power: Arc<PowerObject>, table: Subpresheaf) -> Result<Self> {
        let xp = Arc::new(product(power.base(), power.presheaf())?);
        if **table.parent() != *xp {
            return Err(Error::ParentMismatch);
        }
        Ok(Self::assemble(power, xp, table.bits().clone()))
    }

    fn assemble(power: Arc<PowerObject>, xp: Arc<Presheaf>, bits: FixedBitSet) -> Self {
        let base = power.base().clone();
        let n = base.category().num_objects();
        let members = (0..n)
            .map(|c| {
                let np = power.stage(c).len();
                (0..base.stage_len(c))
                    .map(|x| {
                        (0..np)
                            .filter(|&a| bits.contains(xp.flat(c, x * np + a)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let table = Subpresheaf::from_bits_unchecked(&xp, bits);
        ExplicitNeighborhood {
            power,
            table_parent: xp,
            table,
            members,
        }
    }

    /// From `(stage, x, A)` triples, `A` an index into `PX(stage)`; the
    /// selection must be restriction-closed in `X × PX`.
    pub fn from_entries(
        power: Arc<PowerObject>,
        entries: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let xp = Arc::new(product(power.base(), power.presheaf())?);
        let elems: Vec<(usize, usize)> = entries
            .iter()
            .map(|&(c, x, a)| (c, x * power.stage(c).len() + a))
            .collect();
        let t = Subpresheaf::from_indices(&xp, &elems)?;
        Ok(Self::assemble(power, xp, t.bits().clone()))
    }

    /// Set backend: `families[x]` lists the subsets in `N(x)`.
    pub fn from_families(power: Arc<PowerObject>, families: &[Vec<Subpresheaf>]) -> Result<Self> {
        let base = power.base().clone();
        if !base.category().is_set_backend() {
            return Err(Error::InvalidNeighborhood(
                "families are only accepted on the set backend".into(),
            ));
        }
        if families.len() != base.stage_len(0) {
            return Err(Error::InvalidNeighborhood(format!(
                "expected {} families, got {}",
                base.stage_len(0),
                families.len()
            )));
        }
        let mut entries = Vec::new();
        for (x, fam) in families.iter().enumerate() {
            for a in fam {
                entries.push((0, x, power.name_global(a, 0)?));
            }
        }
        Self::from_entries(power, &entries)
    }

    pub fn power(&self) -> &Arc<PowerObject> {
        &self.power
    }

    pub fn table(&self) -> &Subpresheaf {
        &self.table
    }

    /// `X × PX`.
    pub fn table_parent(&self) -> &Arc<Presheaf> {
        &self.table_parent
    }

    /// Indices `A ∈ PX(c)` with `(x, A) ∈ N(c)`.
    pub fn members(&self, c: usize, x: usize) -> &[usize] {
        &self.members[c][x]
    }

    pub fn contains(&self, c: usize, x: usize, a: usize) -> bool {
        self.members[c][x].binary_search(&a).is_ok()
    }
}

/// A structuring neighborhood `N: X → PPX`.
#[derive(Debug, Clone)]
pub enum StructuringNeighborhood {
    /// `N_b(x) = {Y | b(x) ≼ Y}`, never materialized.
    Derived(StructuringElement),
    Explicit(ExplicitNeighborhood),
}

/// Wraps a reflexive structuring element as `N_b`.
pub fn neighborhood_from_element(b: &StructuringElement) -> Result<StructuringNeighborhood> {
    if let Some((c, x)) = b.reflexivity_violation() {
        let space = b.space();
        return Err(Error::NotReflexive {
            object: space.category().objects()[c].clone(),
            elem: space.carrier(c)[x].clone(),
        });
    }
    Ok(StructuringNeighborhood::Derived(b.clone()))
}

impl StructuringNeighborhood {
    pub fn space(&self) -> &Arc<Presheaf> {
        match self {
            StructuringNeighborhood::Derived(b) => b.space(),
            StructuringNeighborhood::Explicit(n) => n.power.base(),
        }
    }

    fn check(&self, y: &Subpresheaf) -> Result<()> {
        let space = self.space();
        if Arc::ptr_eq(y.parent(), space) || **y.parent() == **space {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    /// `ε[N](Y) = {x | Y ∈ N(x)}`.
    pub fn erosion(&self, y: &Subpresheaf) -> Result<Subpresheaf> {
        match self {
            StructuringNeighborhood::Derived(b) => b.erosion(y),
            StructuringNeighborhood::Explicit(n) => {
                self.check(y)?;
                let space = n.power.base();
                let mut bits = FixedBitSet::with_capacity(space.total());
                for c in 0..space.category().num_objects() {
                    let a = n.power.name_global(y, c)?;
                    for x in 0..space.stage_len(c) {
                        if n.contains(c, x, a) {
                            bits.insert(space.flat(c, x));
                        }
                    }
                }
                Ok(Subpresheaf::from_bits_unchecked(space, bits))
            }
        }
    }

    /// `δ[N](Y) = {x | ∀A ∈ N(x). ∃y ∈ A ∧ Y}`.
    pub fn dilation(&self, y: &Subpresheaf) -> Result<Subpresheaf> {
        match self {
            StructuringNeighborhood::Derived(b) => b.dilation_transposed(y),
            StructuringNeighborhood::Explicit(n) => {
                self.check(y)?;
                let space = n.power.base();
                let mut sel = FixedBitSet::with_capacity(space.total());
                for c in 0..space.category().num_objects() {
                    let off = space.offset(c);
                    let mut yc = FixedBitSet::with_capacity(space.stage_len(c));
                    for z in y.stage(c) {
                        yc.insert(z);
                    }
                    for x in 0..space.stage_len(c) {
                        let ok = n
                            .members(c, x)
                            .iter()
                            .all(|&a| !n.power.points(c, a).is_disjoint(&yc));
                        if ok {
                            sel.insert(off + x);
                        }
                    }
                }
                // The universal quantifier ranges over all restrictions.
                Ok(Subpresheaf::interior(space, &sel))
            }
        }
    }

    /// `(open(Y), closed(Y))`: `ε[N](Y) = Y` and `δ[N](Y) = Y`.
    pub fn open_closed(&self, y: &Subpresheaf) -> Result<(bool, bool)> {
        Ok((self.erosion(y)? == *y, self.dilation(y)? == *y))
    }

    /// The explicit table of this neighborhood.
    ///
    /// For `N_b`, `(x, A) ∈ N(c)` iff `(f, y) ∈ A` whenever `(x·f, y) ∈ R_b`.
    pub fn materialize(&self, cap: u64) -> Result<ExplicitNeighborhood> {
        match self {
            StructuringNeighborhood::Explicit(n) => Ok(n.clone()),
            StructuringNeighborhood::Derived(b) => {
                let space = b.space();
                let power = Arc::new(power_object(space, cap)?);
                let cat = space.category();
                let mut entries = Vec::new();
                for c in 0..cat.num_objects() {
                    let rep = power.representable(c);
                    for x in 0..space.stage_len(c) {
                        let mut need = FixedBitSet::with_capacity(rep.total());
                        for d in 0..cat.num_objects() {
                            let nd = space.stage_len(d);
                            for (gi, &g) in cat.hom(d, c).iter().enumerate() {
                                for &z in b.image(d, space.act(g, x)) {
                                    need.insert(rep.flat(d, gi * nd + z));
                                }
                            }
                        }
                        for (a, m) in power.stage(c).iter().enumerate() {
                            if need.is_subset(m.bits()) {
                                entries.push((c, x, a));
                            }
                        }
                    }
                }
                ExplicitNeighborhood::from_entries(power, &entries)
            }
        }
    }

    /// Checks the filter axioms at every `x` and `x ∈ A` for every `A ∈ N(x)`.
    pub fn is_structuring_neighborhood(&self) -> MorphoReport {
        const NAME: &str = "structuring neighborhood";
        match self {
            StructuringNeighborhood::Derived(b) => {
                let space = b.space();
                for c in 0..space.category().num_objects() {
                    for x in 0..space.stage_len(c) {
                        if b.image(c, x).is_empty() {
                            return MorphoReport::fail(
                                NAME,
                                format!("strict: b({}) is empty", space.describe(space.flat(c, x))),
                                vec![],
                            );
                        }
                    }
                }
                match b.reflexivity_violation() {
                    None => MorphoReport::pass(NAME),
                    Some((c, x)) => {
                        let bx: Vec<(usize, usize)> =
                            b.image(c, x).iter().map(|&y| (c, y)).collect();
                        let a = Subpresheaf::from_indices(space, &bx)
                            .unwrap_or_else(|_| Subpresheaf::bottom(space));
                        MorphoReport::fail(
                            NAME,
                            format!(
                                "condition 2: b({0}) ∈ N({0}) does not contain {0}",
                                space.describe(space.flat(c, x))
                            ),
                            vec![a],
                        )
                    }
                }
            }
            StructuringNeighborhood::Explicit(n) => {
                let filter = is_filter(n);
                if !filter.pass {
                    return MorphoReport {
                        property: NAME.into(),
                        ..filter
                    };
                }
                let space = n.power.base();
                for c in 0..space.category().num_objects() {
                    for x in 0..space.stage_len(c) {
                        if let Some(&a) = n
                            .members(c, x)
                            .iter()
                            .find(|&&a| !n.power.contains_point(c, a, x))
                        {
                            return MorphoReport::fail(
                                NAME,
                                format!("condition 2 at {}", space.describe(space.flat(c, x))),
                                vec![n.power.member(c, a).clone()],
                            );
                        }
                    }
                }
                MorphoReport::pass(NAME)
            }
        }
    }

    /// Checks the interiority condition of topological neighborhoods.
    pub fn is_topological_neighborhood(&self) -> MorphoReport {
        const NAME: &str = "topological neighborhood";
        match self {
            // For N_b this is stage-wise transitivity of R_b.
            StructuringNeighborhood::Derived(b) => match b.transitivity_violation() {
                None => MorphoReport::pass(NAME),
                Some((c, x, y, z)) => {
                    let space = b.space();
                    let bx: Vec<(usize, usize)> = b.image(c, x).iter().map(|&w| (c, w)).collect();
                    let a = Subpresheaf::from_indices(space, &bx)
                        .unwrap_or_else(|_| Subpresheaf::bottom(space));
                    MorphoReport::fail(
                        NAME,
                        format!(
                            "A = b({}) ∈ N(x), but every B ∈ N(x) contains {} and b({}) ∌ {}",
                            space.describe(space.flat(c, x)),
                            space.describe(space.flat(c, y)),
                            space.describe(space.flat(c, y)),
                            space.describe(space.flat(c, z)),
                        ),
                        vec![a],
                    )
                }
            },
            StructuringNeighborhood::Explicit(n) => topological_explicit(n),
        }
    }
}

/// The four filter axioms for every `N(x)`, checked at every stage.
pub fn is_filter(n: &ExplicitNeighborhood) -> MorphoReport {
    const NAME: &str = "filter";
    let power = &n.power;
    let space = power.base();
    for c in 0..space.category().num_objects() {
        for x in 0..space.stage_len(c) {
            let here = || space.describe(space.flat(c, x));
            let fam = n.members(c, x);
            if !n.contains(c, x, power.top_index(c)) {
                return MorphoReport::fail(NAME, format!("non-empty: ⊤ ∉ N({})", here()), vec![]);
            }
            for &a in fam {
                if power.points(c, a).is_clear() {
                    return MorphoReport::fail(
                        NAME,
                        format!("strict at {}", here()),
                        vec![power.member(c, a).clone()],
                    );
                }
            }
            for &a in fam {
                for &b in fam {
                    let m = power.meet_at(c, a, b);
                    if !n.contains(c, x, m) {
                        return MorphoReport::fail(
                            NAME,
                            format!("closed under finite intersections at {}", here()),
                            vec![power.member(c, a).clone(), power.member(c, b).clone()],
                        );
                    }
                }
            }
            for &a in fam {
                for b in 0..power.stage(c).len() {
                    if power.leq_at(c, a, b) && !n.contains(c, x, b) {
                        return MorphoReport::fail(
                            NAME,
                            format!("upper closed at {}", here()),
                            vec![power.member(c, a).clone(), power.member(c, b).clone()],
                        );
                    }
                }
            }
        }
    }
    MorphoReport::pass(NAME)
}

/// The four filter axioms for a family of subsets of a set.
pub fn is_filter_family(space: &Arc<Presheaf>, family: &[Subpresheaf]) -> MorphoReport {
    const NAME: &str = "filter";
    let has = |s: &Subpresheaf| family.iter().any(|f| f == s);
    let top = Subpresheaf::top(space);
    for a in family {
        for b in family {
            let m = match a.meet(b) {
                Ok(m) => m,
                Err(_) => {
                    return MorphoReport::fail(NAME, "members have different parents", vec![])
                }
            };
            if !has(&m) {
                return MorphoReport::fail(
                    NAME,
                    "closed under finite intersections",
                    vec![a.clone(), b.clone()],
                );
            }
        }
    }
    if let Ok(all) = crate::sublattice::enumerate_subobjects(space, crate::sublattice::DEFAULT_CAP)
    {
        for a in family {
            for b in &all {
                if a.leq(b).unwrap_or(false) && !has(b) {
                    return MorphoReport::fail(NAME, "upper closed", vec![a.clone(), b.clone()]);
                }
            }
        }
    }
    if !has(&top) {
        return MorphoReport::fail(NAME, "non-empty: ⊤ is missing", vec![]);
    }
    if let Some(a) = family.iter().find(|a| a.is_bottom()) {
        return MorphoReport::fail(NAME, "strict", vec![a.clone()]);
    }
    MorphoReport::pass(NAME)
}

fn topological_explicit(n: &ExplicitNeighborhood) -> MorphoReport {
    const NAME: &str = "topological neighborhood";
    let power = &n.power;
    let space = power.base();
    let cat = space.category();
    for c in 0..cat.num_objects() {
        for x in 0..space.stage_len(c) {
            for &a in n.members(c, x) {
                // Some B ∈ N(x) all of whose points (at every restriction) have A·f as a neighborhood.
                let found = n.members(c, x).iter().any(|&b| {
                    cat.incoming(c).iter().all(|&f| {
                        let d = cat.morphisms()[f].dom;
                        let af = power.restrict(f, a);
                        (0..space.stage_len(d))
                            .all(|y| !power.holds(c, b, d, f, y) || n.contains(d, y, af))
                    })
                });
                if !found {
                    return MorphoReport::fail(
                        NAME,
                        format!(
                            "no interior witness for A at {}",
                            space.describe(space.flat(c, x))
                        ),
                        vec![power.member(c, a).clone()],
                    );
                }
            }
        }
    }
    MorphoReport::pass(NAME)
}

/// `δ(Y) ≼ Z ⇔ Y ≼ ε(Z)` over all pairs drawn from `subs`.
pub fn check_adjunction(
    subs: &[Subpresheaf],
    dilation: impl Fn(&Subpresheaf) -> Subpresheaf,
    erosion: impl Fn(&Subpresheaf) -> Subpresheaf,
) -> MorphoReport {
    const NAME: &str = "adjunction";
    let d: Vec<Subpresheaf> = subs.iter().map(&dilation).collect();
    let e: Vec<Subpresheaf> = subs.iter().map(&erosion).collect();
    for (i, y) in subs.iter().enumerate() {
        for (j, z) in subs.iter().enumerate() {
            let lhs = d[i].bits().is_subset(z.bits());
            let rhs = y.bits().is_subset(e[j].bits());
            if lhs != rhs {
                return MorphoReport::fail(
                    NAME,
                    format!("δ(Y) ≼ Z is {lhs} but Y ≼ ε(Z) is {rhs}"),
                    vec![y.clone(), z.clone()],
                );
            }
        }
    }
    MorphoReport::pass(NAME)
}

/// Whether the open and closed fixed points of `(ε, δ)` coincide on `subs`;
/// returns the first `Y` in one set but not the other.
pub fn open_closed_mismatch(
    subs: &[Subpresheaf],
    dilation: impl Fn(&Subpresheaf) -> Subpresheaf,
    erosion: impl Fn(&Subpresheaf) -> Subpresheaf,
) -> Option<Subpresheaf> {
    subs.iter()
        .find(|y| (erosion(y) == **y) != (dilation(y) == **y))
        .cloned()
}

/// `Y ≼ Z ⇒ op(Y) ≼ op(Z)` over all pairs drawn from `subs`.
pub fn check_monotone(
    name: &str,
    subs: &[Subpresheaf],
    op: impl Fn(&Subpresheaf) -> Subpresheaf,
) -> MorphoReport {
    let img: Vec<Subpresheaf> = subs.iter().map(op).collect();
    for (i, y) in subs.iter().enumerate() {
        for (j, z) in subs.iter().enumerate() {
            if y.bits().is_subset(z.bits()) && !img[i].bits().is_subset(img[j].bits()) {
                return MorphoReport::fail(
                    name,
                    "Y ≼ Z but op(Y) ⋠ op(Z)",
                    vec![y.clone(), z.clone()],
                );
            }
        }
    }
    MorphoReport::pass(name)
}

/// `lhs(Y) ≼ rhs(Y)` (or equality when `exact`) for every `Y` in `subs`.
pub fn check_pointwise(
    name: &str,
    subs: &[Subpresheaf],
    exact: bool,
    lhs: impl Fn(&Subpresheaf) -> Subpresheaf,
    rhs: impl Fn(&Subpresheaf) -> Subpresheaf,
) -> MorphoReport {
    for y in subs {
        let (l, r) = (lhs(y), rhs(y));
        let ok = if exact {
            l == r
        } else {
            l.bits().is_subset(r.bits())
        };
        if !ok {
            return MorphoReport::fail(name, format!("lhs = {l}, rhs = {r}"), vec![y.clone()]);
        }
    }
    MorphoReport::pass(name)
}

/// `lhs(Y, Z) ≼ rhs(Y, Z)` (or equality) over all pairs drawn from `subs`.
pub fn check_pairwise(
    name: &str,
    subs: &[Subpresheaf],
    exact: bool,
    lhs: impl Fn(&Subpresheaf, &Subpresheaf) -> Subpresheaf,
    rhs: impl Fn(&Subpresheaf, &Subpresheaf) -> Subpresheaf,
) -> MorphoReport {
    for y in subs {
        for z in subs {
            let (l, r) = (lhs(y, z), rhs(y, z));
            let ok = if exact {
                l == r
            } else {
                l.bits().is_subset(r.bits())
            };
            if !ok {
                return MorphoReport::fail(
                    name,
                    format!("lhs = {l}, rhs = {r}"),
                    vec![y.clone(), z.clone()],
                );
            }
        }
    }
    MorphoReport::pass(name)
}

/// `is_reflexive(b) ⇔ ε[b] anti-extensive ⇔ δ[b] extensive`.
///
/// For a reflexive `b` passes iff no `Y` violates either law; otherwise
/// passes iff a violating `Y` is found, which is returned as witness.
pub fn check_reflexivity_biconditional(
    b: &StructuringElement,
    subs: &[Subpresheaf],
) -> MorphoReport {
    const NAME: &str = "reflexive iff anti-extensive/extensive";
    let violation = subs.iter().find(|y| {
        let e = b.erosion(y).expect("same space");
        let d = b.dilation(y).expect("same space");
        !e.bits().is_subset(y.bits()) || !y.bits().is_subset(d.bits())
    });
    match (b.is_reflexive(), violation) {
        (true, None) => MorphoReport::pass(NAME),
        (true, Some(y)) => MorphoReport::fail(
            NAME,
            "reflexive b violates (anti-)extensivity",
            vec![y.clone()],
        ),
        (false, Some(y)) => MorphoReport {
            property: NAME.into(),
            pass: true,
            detail: "violating Y found".into(),
            witnesses: vec![y.clone()],
        },
        (false, None) => MorphoReport::fail(NAME, "non-reflexive b with no violating Y", vec![]),
    }
}

/// The structuring-element law set over `subs` (all subobjects of one space).
pub fn check_element_laws(b: &StructuringElement, subs: &[Subpresheaf]) -> Vec<MorphoReport> {
    let bt = b.transpose();
    let e = |y: &Subpresheaf| b.erosion(y).expect("same space");
    let d = |y: &Subpresheaf| b.dilation(y).expect("same space");
    let dt = |y: &Subpresheaf| bt.dilation(y).expect("same space");
    let boolean = b.space().category().is_set_backend();
    let mut out = vec![
        check_adjunction(subs, d, e),
        check_monotone("erosion monotone", subs, e),
        check_monotone("dilation monotone", subs, d),
        check_pairwise(
            "erosion commutes with meet",
            subs,
            true,
            |y, z| e(&y.meet(z).unwrap()),
            |y, z| e(y).meet(&e(z)).unwrap(),
        ),
        check_pairwise(
            "dilation commutes with join",
            subs,
            true,
            |y, z| d(&y.join(z).unwrap()),
            |y, z| d(y).join(&d(z)).unwrap(),
        ),
        check_reflexivity_biconditional(b, subs),
        check_pointwise(
            "erosion duality",
            subs,
            true,
            |y| e(&y.neg()),
            |y| dt(y).neg(),
        ),
        check_pointwise(
            "dilation duality",
            subs,
            boolean,
            |y| dt(&y.neg()),
            |y| e(y).neg(),
        ),
        check_pointwise(
            "closing extensive",
            subs,
            false,
            |y| y.clone(),
            |y| e(&d(y)),
        ),
        check_pointwise(
            "opening anti-extensive",
            subs,
            false,
            |y| d(&e(y)),
            |y| y.clone(),
        ),
        check_pointwise("εδε = ε", subs, true, |y| e(&d(&e(y))), e),
        check_pointwise("δεδ = δ", subs, true, |y| d(&e(&d(y))), d),
        check_pointwise(
            "opening idempotent",
            subs,
            true,
            |y| d(&e(&d(&e(y)))),
            |y| d(&e(y)),
        ),
        check_pointwise(
            "closing idempotent",
            subs,
            true,
            |y| e(&d(&e(&d(y)))),
            |y| e(&d(y)),
        ),
    ];
    if let Some(r) = out.iter_mut().find(|r| r.property == "dilation duality") {
        if boolean {
            r.property = "dilation duality (equality)".into();
        }
    }
    out
}

/// The neighborhood law set over `subs`; with `topological`, also the
/// interior-operator and closure idempotence laws.
pub fn check_neighborhood_laws(
    n: &StructuringNeighborhood,
    subs: &[Subpresheaf],
    topological: bool,
) -> Vec<MorphoReport> {
    let e = |y: &Subpresheaf| n.erosion(y).expect("same space");
    let d = |y: &Subpresheaf| n.dilation(y).expect("same space");
    let space = n.space();
    let (top, bot) = (Subpresheaf::top(space), Subpresheaf::bottom(space));
    let mut out = vec![
        check_monotone("ε[N] monotone", subs, e),
        check_monotone("δ[N] monotone", subs, d),
        check_pairwise(
            "ε[N] commutes with meet",
            subs,
            true,
            |y, z| e(&y.meet(z).unwrap()),
            |y, z| e(y).meet(&e(z)).unwrap(),
        ),
        check_pairwise(
            "δ[N] of join above join",
            subs,
            false,
            |y, z| d(y).join(&d(z)).unwrap(),
            |y, z| d(&y.join(z).unwrap()),
        ),
        check_pointwise("ε[N] anti-extensive", subs, false, e, |y| y.clone()),
        check_pointwise("δ[N] extensive", subs, false, |y| y.clone(), d),
        check_pointwise("ε[N] duality", subs, false, |y| e(&y.neg()), |y| d(y).neg()),
    ];
    out.push(if e(&top).is_top() {
        MorphoReport::pass("ε[N](⊤) = ⊤")
    } else {
        MorphoReport::fail("ε[N](⊤) = ⊤", "", vec![e(&top)])
    });
    out.push(if d(&bot).is_bottom() {
        MorphoReport::pass("δ[N](⊥) = ⊥")
    } else {
        MorphoReport::fail("δ[N](⊥) = ⊥", "", vec![d(&bot)])
    });
    if topological {
        out.push(check_pointwise(
            "ε[N] idempotent",
            subs,
            true,
            |y| e(&e(y)),
            e,
        ));
        out.push(check_pointwise(
            "δ[N] idempotent",
            subs,
            true,
            |y| d(&d(y)),
            d,
        ));
    }
    out
}
