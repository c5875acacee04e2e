//! Subobject lattices `Sub(X)` of finite presheaves, their enumeration, and
//! power objects `PX`.
//!
//! A subobject is represented canonically by its selection: one subset
//! `A(c) ⊆ X(c)` per stage, closed under restriction. Selections are stored
//! as a single bitset over the flat element indices of the parent.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::fincat::{product, yoneda, Presheaf};

/// Default bound on `Π_c 2^|X(c)|` for brute-force enumeration.
pub const DEFAULT_CAP: u64 = 1 << 16;

/// A restriction-closed selection of a presheaf.
#[derive(Clone, Debug)]
pub struct Subpresheaf {
    parent: Arc<Presheaf>,
    bits: FixedBitSet,
}

impl PartialEq for Subpresheaf {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
            && (Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent)
    }
}

impl Eq for Subpresheaf {}

impl Hash for Subpresheaf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

/// First element of `bits` whose restriction leaves `bits`, as `(element, restriction)`.
fn closure_violation(parent: &Presheaf, bits: &FixedBitSet) -> Option<(usize, usize)> {
    bits.ones().find_map(|k| {
        parent
            .restrictions(k)
            .iter()
            .find(|&&r| !bits.contains(r))
            .map(|&r| (k, r))
    })
}

impl Subpresheaf {
    pub fn bottom(parent: &Arc<Presheaf>) -> Self {
        Subpresheaf {
            parent: parent.clone(),
            bits: FixedBitSet::with_capacity(parent.total()),
        }
    }

    pub fn top(parent: &Arc<Presheaf>) -> Self {
        let mut bits = FixedBitSet::with_capacity(parent.total());
        bits.insert_range(..);
        Subpresheaf {
            parent: parent.clone(),
            bits,
        }
    }

    /// Wraps a flat selection, checking restriction-closure.
    pub fn from_bits(parent: &Arc<Presheaf>, bits: FixedBitSet) -> Result<Self> {
        assert_eq!(
            bits.len(),
            parent.total(),
            "selection length must match the parent"
        );
        if let Some((k, r)) = closure_violation(parent, &bits) {
            let se = parent.unflat(k);
            let cat = parent.category();
            let f = cat
                .incoming(se.stage)
                .iter()
                .copied()
                .find(|&f| parent.flat(cat.morphisms()[f].dom, parent.act(f, se.elem)) == r)
                .unwrap_or(0);
            return Err(Error::NotRestrictionClosed {
                object: cat.objects()[se.stage].clone(),
                elem: parent.carrier(se.stage)[se.elem].clone(),
                morphism: cat.morphisms()[f].name.clone(),
            });
        }
        Ok(Subpresheaf {
            parent: parent.clone(),
            bits,
        })
    }

    /// Internal constructor for selections known to be closed.
    pub(crate) fn from_bits_unchecked(parent: &Arc<Presheaf>, bits: FixedBitSet) -> Self {
        debug_assert!(closure_violation(parent, &bits).is_none());
        Subpresheaf {
            parent: parent.clone(),
            bits,
        }
    }

    /// Selection given as `(stage, element index)` pairs.
    pub fn from_indices(parent: &Arc<Presheaf>, elems: &[(usize, usize)]) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(parent.total());
        for &(c, i) in elems {
            bits.insert(parent.flat(c, i));
        }
        Subpresheaf::from_bits(parent, bits)
    }

    /// Selection given as object id → element ids. Missing objects select nothing.
    pub fn from_named<K, V>(parent: &Arc<Presheaf>, selection: &[(K, Vec<V>)]) -> Result<Self>
    where
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let cat = parent.category();
        let mut bits = FixedBitSet::with_capacity(parent.total());
        for (obj, elems) in selection {
            let c = cat.object_index(obj.as_ref())?;
            for e in elems {
                bits.insert(parent.flat(c, parent.element_index(c, e.as_ref())?));
            }
        }
        Subpresheaf::from_bits(parent, bits)
    }

    /// Selection of a finite set (single stage) by element ids.
    pub fn from_elements<V: AsRef<str>>(parent: &Arc<Presheaf>, elems: &[V]) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(parent.total());
        for e in elems {
            bits.insert(parent.flat(0, parent.element_index(0, e.as_ref())?));
        }
        Subpresheaf::from_bits(parent, bits)
    }

    /// The largest subpresheaf contained in an arbitrary flat selection:
    /// `x` survives iff every restriction of `x` lies in `sel`.
    ///
    /// This is the forcing clause of a universally quantified stage condition.
    pub fn interior(parent: &Arc<Presheaf>, sel: &FixedBitSet) -> Self {
        let mut bits = FixedBitSet::with_capacity(parent.total());
        for k in sel.ones() {
            if parent.restrictions(k).iter().all(|&r| sel.contains(r)) {
                bits.insert(k);
            }
        }
        Subpresheaf {
            parent: parent.clone(),
            bits,
        }
    }

    /// The smallest subpresheaf containing an arbitrary flat selection.
    pub fn generated(parent: &Arc<Presheaf>, sel: &FixedBitSet) -> Self {
        let mut bits = FixedBitSet::with_capacity(parent.total());
        for k in sel.ones() {
            bits.insert(k);
            for &r in parent.restrictions(k) {
                bits.insert(r);
            }
        }
        Subpresheaf {
            parent: parent.clone(),
            bits,
        }
    }

    pub fn parent(&self) -> &Arc<Presheaf> {
        &self.parent
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn contains(&self, c: usize, i: usize) -> bool {
        self.bits.contains(self.parent.flat(c, i))
    }

    pub fn contains_flat(&self, k: usize) -> bool {
        self.bits.contains(k)
    }

    /// Element indices selected at stage `c`.
    pub fn stage(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        let off = self.parent.offset(c);
        (0..self.parent.stage_len(c)).filter(move |&i| self.bits.contains(off + i))
    }

    /// Element ids selected at stage `c`, sorted lexicographically.
    pub fn stage_names(&self, c: usize) -> Vec<String> {
        let mut v: Vec<String> = self
            .stage(c)
            .map(|i| self.parent.carrier(c)[i].clone())
            .collect();
        v.sort();
        v
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_bottom(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_top(&self) -> bool {
        self.bits.is_full()
    }

    pub fn same_parent(&self, other: &Subpresheaf) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent
    }

    fn check(&self, other: &Subpresheaf) -> Result<()> {
        if self.same_parent(other) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    /// Stage-wise inclusion.
    pub fn leq(&self, other: &Subpresheaf) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn meet(&self, other: &Subpresheaf) -> Result<Subpresheaf> {
        self.check(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(Subpresheaf {
            parent: self.parent.clone(),
            bits,
        })
    }

    pub fn join(&self, other: &Subpresheaf) -> Result<Subpresheaf> {
        self.check(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(Subpresheaf {
            parent: self.parent.clone(),
            bits,
        })
    }

    /// Heyting implication: `x ∈ (A ⇒ B)(c)` iff every restriction of `x`
    /// that lies in `A` also lies in `B`.
    pub fn implies(&self, other: &Subpresheaf) -> Result<Subpresheaf> {
        self.check(other)?;
        // Stage-wise (¬A ∪ B), then the largest subpresheaf inside it.
        let mut sel = self.bits.clone();
        sel.toggle_range(..);
        sel.union_with(&other.bits);
        Ok(Subpresheaf::interior(&self.parent, &sel))
    }

    /// Pseudo-complement `A ⇒ ⊥`.
    pub fn neg(&self) -> Subpresheaf {
        self.implies(&Subpresheaf::bottom(&self.parent))
            .expect("bottom shares the parent")
    }

    /// `{V: [u, v], E: []}`; on the Set backend just `{u, v}`.
    pub fn to_string_sorted(&self) -> String {
        let cat = self.parent.category();
        if cat.is_set_backend() {
            return format!("{{{}}}", self.stage_names(0).join(", "));
        }
        let parts: Vec<String> = (0..cat.num_objects())
            .map(|c| format!("{}: [{}]", cat.objects()[c], self.stage_names(c).join(", ")))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for Subpresheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_sorted())
    }
}

fn check_cap(total: usize, cap: u64) -> Result<()> {
    if total >= 64 || (1u64 << total) > cap {
        Err(Error::SizeCapExceeded {
            needed_log2: total,
            cap,
        })
    } else {
        Ok(())
    }
}

/// All subobjects of `x`, each exactly once.
///
/// Order: increasing as binary numbers over flat element indices (flat
/// element `k` has weight `2^k`). In particular `⊥` comes first and `⊤` last.
pub fn enumerate_subobjects(x: &Arc<Presheaf>, cap: u64) -> Result<Vec<Subpresheaf>> {
    let n = x.total();
    check_cap(n, cap)?;
    let mut restricted_from: Vec<Vec<usize>> = vec![Vec::new(); n];
    for k in 0..n {
        for &r in x.restrictions(k) {
            if r != k {
                restricted_from[r].push(k);
            }
        }
    }
    let mut out = Vec::new();
    let mut bits = FixedBitSet::with_capacity(n);
    enumerate_rec(x, &restricted_from, n, &mut bits, &mut out);
    Ok(out)
}

/// Decides flat indices `pos-1, pos-2, …, 0`, absent before present.
fn enumerate_rec(
    x: &Arc<Presheaf>,
    restricted_from: &[Vec<usize>],
    pos: usize,
    bits: &mut FixedBitSet,
    out: &mut Vec<Subpresheaf>,
) {
    if pos == 0 {
        out.push(Subpresheaf::from_bits_unchecked(x, bits.clone()));
        return;
    }
    let k = pos - 1;
    // Absent: no already-present element above k may restrict to k.
    if restricted_from[k]
        .iter()
        .all(|&p| p < k || !bits.contains(p))
    {
        enumerate_rec(x, restricted_from, k, bits, out);
    }
    // Present: every already-decided restriction of k must be present.
    if x.restrictions(k)
        .iter()
        .all(|&r| r <= k || bits.contains(r))
    {
        bits.insert(k);
        enumerate_rec(x, restricted_from, k, bits, out);
        bits.set(k, false);
    }
}

/// One named law over a family of subobjects, with witnesses on failure.
#[derive(Debug, Clone)]
pub struct LatticeReport {
    pub law: String,
    pub pass: bool,
    pub witnesses: Vec<Subpresheaf>,
}

/// Heyting adjunction `A∧C ≼ B ⇔ C ≼ (A⇒B)` and distributivity
/// `A∧(B∨C) = (A∧B)∨(A∧C)`, over all triples drawn from `subs`.
pub fn check_heyting_laws(subs: &[Subpresheaf]) -> Vec<LatticeReport> {
    let mut adj = LatticeReport {
        law: "heyting adjunction".into(),
        pass: true,
        witnesses: vec![],
    };
    let mut dist = LatticeReport {
        law: "distributivity".into(),
        pass: true,
        witnesses: vec![],
    };
    'outer: for a in subs {
        for b in subs {
            let ab = a.implies(b).expect("same parent");
            let a_and_b = a.meet(b).expect("same parent");
            for c in subs {
                if adj.pass {
                    let lhs = a.meet(c).unwrap().leq(b).unwrap();
                    let rhs = c.leq(&ab).unwrap();
                    if lhs != rhs {
                        adj.pass = false;
                        adj.witnesses = vec![a.clone(), b.clone(), c.clone()];
                    }
                }
                if dist.pass {
                    let lhs = a.meet(&b.join(c).unwrap()).unwrap();
                    let rhs = a_and_b.join(&a.meet(c).unwrap()).unwrap();
                    if lhs != rhs {
                        dist.pass = false;
                        dist.witnesses = vec![a.clone(), b.clone(), c.clone()];
                    }
                }
                if !adj.pass && !dist.pass {
                    break 'outer;
                }
            }
        }
    }
    vec![adj, dist]
}

/// The power object `PX`, with `PX(c) = Sub(y(c) × X)`.
#[derive(Debug, Clone)]
pub struct PowerObject {
    base: Arc<Presheaf>,
    /// `y(c) × X`, per object `c`.
    representables: Vec<Arc<Presheaf>>,
    members: Vec<Vec<Subpresheaf>>,
    lookup: Vec<HashMap<FixedBitSet, usize>>,
    /// `points[c][a]`: the `z ∈ X(c)` with `(id_c, z) ∈ A`.
    points: Vec<Vec<FixedBitSet>>,
    presheaf: Arc<Presheaf>,
}

impl PowerObject {
    pub fn base(&self) -> &Arc<Presheaf> {
        &self.base
    }

    /// `PX` as a presheaf in its own right.
    pub fn presheaf(&self) -> &Arc<Presheaf> {
        &self.presheaf
    }

    /// `y(c) × X`.
    pub fn representable(&self, c: usize) -> &Arc<Presheaf> {
        &self.representables[c]
    }

    /// `PX(c)`.
    pub fn stage(&self, c: usize) -> &[Subpresheaf] {
        &self.members[c]
    }

    pub fn member(&self, c: usize, a: usize) -> &Subpresheaf {
        &self.members[c][a]
    }

    pub fn index_of(&self, c: usize, sub: &Subpresheaf) -> Option<usize> {
        self.lookup[c].get(sub.bits()).copied()
    }

    /// Index of the top subobject of `y(c) × X`.
    pub fn top_index(&self, c: usize) -> usize {
        self.members[c].len() - 1
    }

    /// Flat index of `(g, z)` in `y(c) × X`, with `g: d → c`.
    fn pair_flat(&self, c: usize, d: usize, g: usize, z: usize) -> usize {
        let cat = self.base.category();
        let gi = cat
            .hom(d, c)
            .iter()
            .position(|&h| h == g)
            .expect("morphism in hom set");
        self.representables[c].flat(d, gi * self.base.stage_len(d) + z)
    }

    /// Whether `(g, z) ∈ A` for `A ∈ PX(c)`, `g: d → c`, `z ∈ X(d)`.
    pub fn holds(&self, c: usize, a: usize, d: usize, g: usize, z: usize) -> bool {
        self.members[c][a].contains_flat(self.pair_flat(c, d, g, z))
    }

    /// Internal membership `z ∈_X A` at stage `c`: `(id_c, z) ∈ A`.
    pub fn contains_point(&self, c: usize, a: usize, z: usize) -> bool {
        self.points[c][a].contains(z)
    }

    /// All `z` with `z ∈_X A` at stage `c`, as a bitset over `X(c)`.
    pub fn points(&self, c: usize, a: usize) -> &FixedBitSet {
        &self.points[c][a]
    }

    /// The action of `f: c' → c` on `PX(c)`: pullback along `y(f) × X`.
    pub fn restrict(&self, f: usize, a: usize) -> usize {
        self.presheaf.act(f, a)
    }

    /// The stage-`c` name of a global subobject `Y ≤ X`:
    /// `{(g: d → c, z) | z ∈ Y(d)}`.
    pub fn name_global(&self, y: &Subpresheaf, c: usize) -> Result<usize> {
        if !Arc::ptr_eq(y.parent(), &self.base) && **y.parent() != *self.base {
            return Err(Error::ParentMismatch);
        }
        let cat = self.base.category();
        let rep = &self.representables[c];
        let mut bits = FixedBitSet::with_capacity(rep.total());
        for d in 0..cat.num_objects() {
            let nd = self.base.stage_len(d);
            for (gi, _) in cat.hom(d, c).iter().enumerate() {
                for z in y.stage(d) {
                    bits.insert(rep.flat(d, gi * nd + z));
                }
            }
        }
        Ok(self.lookup[c][&bits])
    }

    /// Stage-wise meet inside `y(c) × X`.
    pub fn meet_at(&self, c: usize, a: usize, b: usize) -> usize {
        let m = self.members[c][a]
            .meet(&self.members[c][b])
            .expect("same parent");
        self.lookup[c][m.bits()]
    }

    /// Inclusion inside `y(c) × X`.
    pub fn leq_at(&self, c: usize, a: usize, b: usize) -> bool {
        self.members[c][a]
            .bits()
            .is_subset(self.members[c][b].bits())
    }

    /// The membership relation `∈_X`, a subobject of `X × PX`.
    pub fn membership(&self) -> Result<(Arc<Presheaf>, Subpresheaf)> {
        let xp = Arc::new(product(&self.base, &self.presheaf)?);
        let mut bits = FixedBitSet::with_capacity(xp.total());
        for c in 0..self.base.category().num_objects() {
            let np = self.members[c].len();
            for x in 0..self.base.stage_len(c) {
                for a in 0..np {
                    if self.contains_point(c, a, x) {
                        bits.insert(xp.flat(c, x * np + a));
                    }
                }
            }
        }
        let mem = Subpresheaf::from_bits(&xp, bits)?;
        Ok((xp, mem))
    }
}

/// Builds `PX(c) = Sub(y(c) × X)` for every `c`, with the pullback action.
///
/// Every `Sub(y(c) × X)` enumeration must fit under `cap`.
pub fn power_object(x: &Arc<Presheaf>, cap: u64) -> Result<PowerObject> {
    let cat = x.category().clone();
    let n = cat.num_objects();
    let mut representables = Vec::with_capacity(n);
    let mut members = Vec::with_capacity(n);
    let mut lookup = Vec::with_capacity(n);
    for c in 0..n {
        let rep = Arc::new(product(&yoneda(&cat, c)?, x)?);
        let subs = enumerate_subobjects(&rep, cap)?;
        let map: HashMap<FixedBitSet, usize> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.bits().clone(), i))
            .collect();
        representables.push(rep);
        members.push(subs);
        lookup.push(map);
    }
    let mut points = Vec::with_capacity(n);
    for c in 0..n {
        let id_pos = cat
            .hom(c, c)
            .iter()
            .position(|&h| h == cat.identity(c))
            .expect("identity");
        let nc = x.stage_len(c);
        let off = representables[c].offset(c) + id_pos * nc;
        points.push(
            members[c]
                .iter()
                .map(|a: &Subpresheaf| {
                    let mut p = FixedBitSet::with_capacity(nc);
                    for z in 0..nc {
                        p.set(z, a.contains_flat(off + z));
                    }
                    p
                })
                .collect::<Vec<_>>(),
        );
    }
    let set_backend = cat.is_set_backend();
    let carriers: Vec<Vec<String>> = members
        .iter()
        .enumerate()
        .map(|(c, subs)| {
            subs.iter()
                .map(|s| {
                    let rep = &representables[c];
                    let names: Vec<String> = s
                        .bits()
                        .ones()
                        .map(|k| {
                            let se = rep.unflat(k);
                            if set_backend {
                                x.carrier(0)[se.elem].clone()
                            } else {
                                rep.carrier(se.stage)[se.elem].clone()
                            }
                        })
                        .collect();
                    format!("{{{}}}", names.join(","))
                })
                .collect()
        })
        .collect();
    let mut actions = Vec::with_capacity(cat.morphisms().len());
    for (f, m) in cat.morphisms().iter().enumerate() {
        // f: c' → c sends A ∈ PX(c) to {(g, z) | (f∘g, z) ∈ A} ∈ PX(c').
        let (cp, c) = (m.dom, m.cod);
        let src_rep = &representables[c];
        let dst_rep = &representables[cp];
        let mut act = Vec::with_capacity(members[c].len());
        for a in &members[c] {
            let mut bits = FixedBitSet::with_capacity(dst_rep.total());
            for d in 0..n {
                let nd = x.stage_len(d);
                for (gi, &g) in cat.hom(d, cp).iter().enumerate() {
                    let fg = cat.compose(f, g).ok_or_else(|| {
                        Error::CarrierMissing(format!(
                            "composite {}∘{}",
                            m.name,
                            cat.morphisms()[g].name
                        ))
                    })?;
                    let fgi = cat
                        .hom(d, c)
                        .iter()
                        .position(|&h| h == fg)
                        .expect("typed composite");
                    for z in 0..nd {
                        if a.contains_flat(src_rep.flat(d, fgi * nd + z)) {
                            bits.insert(dst_rep.flat(d, gi * nd + z));
                        }
                    }
                }
            }
            act.push(lookup[cp][&bits]);
        }
        actions.push(act);
    }
    let presheaf = Arc::new(Presheaf::new(cat, carriers, actions)?);
    Ok(PowerObject {
        base: x.clone(),
        representables,
        members,
        lookup,
        points,
        presheaf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FiniteCategory;

    fn edge() -> Arc<Presheaf> {
        Arc::new(Presheaf::graph(&["u", "v"], &[("e", "u", "v")]).unwrap())
    }

    fn sub(x: &Arc<Presheaf>, v: &[&str], e: &[&str]) -> Subpresheaf {
        Subpresheaf::from_named(x, &[("V", v.to_vec()), ("E", e.to_vec())]).unwrap()
    }

    fn set3() -> Arc<Presheaf> {
        Arc::new(Presheaf::range_set(3))
    }

    #[test]
    fn bounded_lattice_units() {
        let x = edge();
        for a in enumerate_subobjects(&x, DEFAULT_CAP).unwrap() {
            assert_eq!(a.meet(&Subpresheaf::top(&x)).unwrap(), a);
            assert_eq!(a.join(&Subpresheaf::bottom(&x)).unwrap(), a);
        }
    }

    #[test]
    fn set_meet_is_intersection() {
        let x = set3();
        let a = Subpresheaf::from_elements(&x, &["0", "1"]).unwrap();
        let b = Subpresheaf::from_elements(&x, &["1", "2"]).unwrap();
        assert_eq!(
            a.meet(&b).unwrap(),
            Subpresheaf::from_elements(&x, &["1"]).unwrap()
        );
    }

    #[test]
    fn stagewise_join_omits_the_edge() {
        let x = edge();
        let j = sub(&x, &["u"], &[]).join(&sub(&x, &["v"], &[])).unwrap();
        assert_eq!(j, sub(&x, &["u", "v"], &[]));
        assert!(!j.is_top());
    }

    #[test]
    fn implication_on_set_is_boolean() {
        let x = set3();
        let a = Subpresheaf::from_elements(&x, &["0", "1"]).unwrap();
        let b = Subpresheaf::from_elements(&x, &["1"]).unwrap();
        assert_eq!(
            a.implies(&b).unwrap(),
            Subpresheaf::from_elements(&x, &["1", "2"]).unwrap()
        );
        assert!(a.implies(&a).unwrap().is_top());
    }

    #[test]
    fn implication_on_graph() {
        let x = edge();
        let a = sub(&x, &["u", "v"], &[]);
        assert!(a.implies(&Subpresheaf::bottom(&x)).unwrap().is_bottom());
    }

    #[test]
    fn negation_on_graph_is_not_boolean() {
        let x = edge();
        assert!(Subpresheaf::top(&x).neg().is_bottom());
        assert!(Subpresheaf::bottom(&x).neg().is_top());
        let u = sub(&x, &["u"], &[]);
        assert_eq!(u.neg(), sub(&x, &["v"], &[]));
        assert_eq!(u.neg().neg(), u);
        let uv = sub(&x, &["u", "v"], &[]);
        assert!(uv.neg().is_bottom());
        assert!(uv.neg().neg().is_top());
        assert_ne!(uv.neg().neg(), uv);
    }

    #[test]
    fn parent_mismatch() {
        let a = Subpresheaf::top(&set3());
        let b = Subpresheaf::top(&edge());
        assert_eq!(a.meet(&b).unwrap_err(), Error::ParentMismatch);
        assert_eq!(a.implies(&b).unwrap_err(), Error::ParentMismatch);
    }

    #[test]
    fn non_closed_selection_is_rejected() {
        let x = edge();
        let err = Subpresheaf::from_named(&x, &[("V", vec!["u"]), ("E", vec!["e"])]).unwrap_err();
        assert!(matches!(err, Error::NotRestrictionClosed { .. }));
    }

    #[test]
    fn enumeration_counts() {
        let s2 = Arc::new(Presheaf::range_set(2));
        assert_eq!(enumerate_subobjects(&s2, DEFAULT_CAP).unwrap().len(), 4);
        // ∅, {u}, {v}, {u,v}, {u,v,e}
        let subs = enumerate_subobjects(&edge(), DEFAULT_CAP).unwrap();
        assert_eq!(subs.len(), 5);
        assert!(subs.first().unwrap().is_bottom());
        assert!(subs.last().unwrap().is_top());
    }

    #[test]
    fn enumeration_respects_cap() {
        let x = Arc::new(Presheaf::range_set(5));
        assert_eq!(
            enumerate_subobjects(&x, 16).unwrap_err(),
            Error::SizeCapExceeded {
                needed_log2: 5,
                cap: 16
            }
        );
    }

    #[test]
    fn power_object_of_two_element_set() {
        let x = Arc::new(Presheaf::range_set(2));
        let p = power_object(&x, DEFAULT_CAP).unwrap();
        assert_eq!(p.stage(0).len(), 4);
        assert!(p.presheaf().validate().is_pass());
    }

    #[test]
    fn subobject_classifier_of_graphs() {
        let cat = Arc::new(FiniteCategory::graph_index());
        let one = Arc::new(Presheaf::terminal(cat));
        let omega = power_object(&one, DEFAULT_CAP).unwrap();
        assert_eq!(omega.stage(0).len(), 2);
        assert_eq!(omega.stage(1).len(), 5);
        assert!(omega.presheaf().validate().is_pass());
    }

    #[test]
    fn membership_matches_global_names() {
        let x = edge();
        let p = power_object(&x, DEFAULT_CAP).unwrap();
        let (_, mem) = p.membership().unwrap();
        let np = |c: usize| p.stage(c).len();
        for y in enumerate_subobjects(&x, DEFAULT_CAP).unwrap() {
            for c in 0..2 {
                let a = p.name_global(&y, c).unwrap();
                for z in 0..x.stage_len(c) {
                    let flat = mem.parent().flat(c, z * np(c) + a);
                    assert_eq!(mem.contains_flat(flat), y.contains(c, z));
                }
            }
        }
    }

    #[test]
    fn global_names_are_natural() {
        // Restricting ŷ_c(Y) along f: c' → c gives ŷ_{c'}(Y).
        let x = edge();
        let p = power_object(&x, DEFAULT_CAP).unwrap();
        let cat = x.category();
        for y in enumerate_subobjects(&x, DEFAULT_CAP).unwrap() {
            for (f, m) in cat.morphisms().iter().enumerate() {
                let a = p.name_global(&y, m.cod).unwrap();
                assert_eq!(p.restrict(f, a), p.name_global(&y, m.dom).unwrap());
            }
        }
    }
}
