//! Finite index categories and finite presheaves over them.
//!
//! Everything is by-id at the boundary and by-index inside: objects,
//! morphisms and elements are addressed by their position in the lists the
//! value was built from. Elements of a presheaf are additionally given a
//! *flat* index, running over all stages in object order, which is what
//! [`crate::sublattice::Subpresheaf`] uses for its bitsets.
//!
//! The Set backend is the one-object, identity-only category; it goes
//! through exactly the same code as any other presheaf.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Object id used by the one-object category backing plain finite sets.
pub const SET_OBJECT: &str = "*";
/// Identity morphism id of the one-object category.
pub const SET_IDENTITY: &str = "id";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// Outcome of a law check: pass, or the first violated law with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Pass,
    Fail { law: String, witness: Vec<String> },
}

impl Validation {
    pub fn is_pass(&self) -> bool {
        matches!(self, Validation::Pass)
    }

    fn fail(law: &str, witness: impl IntoIterator<Item = String>) -> Self {
        Validation::Fail {
            law: law.to_string(),
            witness: witness.into_iter().collect(),
        }
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validation::Pass => write!(f, "pass"),
            Validation::Fail { law, witness } => {
                write!(f, "fail: {law} (witness: {})", witness.join(", "))
            }
        }
    }
}

/// A finite category given by an explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// Raw table as supplied: `(g, f, g∘f)`.
    table: Vec<(usize, usize, usize)>,
    compose: HashMap<(usize, usize), usize>,
    /// `hom[a * n + b]`: morphisms `a → b`, in morphism order.
    hom: Vec<Vec<usize>>,
    /// Morphisms with codomain `c`, identity first.
    into: Vec<Vec<usize>>,
}

/// Incremental construction of a [`FiniteCategory`] from string ids.
#[derive(Debug, Default, Clone)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identities: Vec<(String, String)>,
    composition: Vec<(String, String, String)>,
    fill_identity_composites: bool,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        CategoryBuilder {
            fill_identity_composites: true,
            ..Default::default()
        }
    }

    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn morphism(mut self, name: &str, dom: &str, cod: &str) -> Self {
        self.morphisms
            .push((name.to_string(), dom.to_string(), cod.to_string()));
        self
    }

    /// Declares `name` as the identity of `object`, adding the morphism.
    pub fn identity(mut self, object: &str, name: &str) -> Self {
        self.morphisms
            .push((name.to_string(), object.to_string(), object.to_string()));
        self.identities.push((object.to_string(), name.to_string()));
        self
    }

    /// Records `g ∘ f = gf`.
    pub fn compose(mut self, g: &str, f: &str, gf: &str) -> Self {
        self.composition
            .push((g.to_string(), f.to_string(), gf.to_string()));
        self
    }

    /// When set (the default), composites with an identity that are absent
    /// from the table are filled in by the unit laws. Explicit entries are
    /// never overridden, so a wrong one still fails validation.
    pub fn fill_identity_composites(mut self, on: bool) -> Self {
        self.fill_identity_composites = on;
        self
    }

    pub fn build(self) -> Result<FiniteCategory> {
        let mut obj_index = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::Duplicate(o.clone()));
            }
        }
        let find_obj = |o: &str| {
            obj_index
                .get(o)
                .copied()
                .ok_or_else(|| Error::UnknownObject(o.to_string()))
        };
        let mut mor_index = HashMap::new();
        let mut morphisms = Vec::new();
        for (name, dom, cod) in &self.morphisms {
            if mor_index.insert(name.clone(), morphisms.len()).is_some() {
                return Err(Error::Duplicate(name.clone()));
            }
            morphisms.push(Morphism {
                name: name.clone(),
                dom: find_obj(dom)?,
                cod: find_obj(cod)?,
            });
        }
        let find_mor = |m: &str| {
            mor_index
                .get(m)
                .copied()
                .ok_or_else(|| Error::UnknownMorphism(m.to_string()))
        };
        let mut identities = vec![usize::MAX; self.objects.len()];
        for (o, m) in &self.identities {
            identities[find_obj(o)?] = find_mor(m)?;
        }
        if let Some(c) = identities.iter().position(|&i| i == usize::MAX) {
            return Err(Error::CarrierMissing(format!(
                "identity of object `{}`",
                self.objects[c]
            )));
        }
        let mut table = Vec::new();
        for (g, f, gf) in &self.composition {
            table.push((find_mor(g)?, find_mor(f)?, find_mor(gf)?));
        }
        if self.fill_identity_composites {
            let mut given: std::collections::HashSet<(usize, usize)> =
                table.iter().map(|&(g, f, _)| (g, f)).collect();
            for (m, mor) in morphisms.iter().enumerate() {
                let left = identities[mor.cod];
                if given.insert((left, m)) {
                    table.push((left, m, m));
                }
                let right = identities[mor.dom];
                if given.insert((m, right)) {
                    table.push((m, right, m));
                }
            }
        }
        Ok(FiniteCategory::assemble(
            self.objects,
            morphisms,
            identities,
            table,
        ))
    }
}

impl FiniteCategory {
    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        table: Vec<(usize, usize, usize)>,
    ) -> Self {
        let n = objects.len();
        let mut compose = HashMap::new();
        for &(g, f, gf) in &table {
            compose.entry((g, f)).or_insert(gf);
        }
        let mut hom = vec![Vec::new(); n * n];
        let mut into = vec![Vec::new(); n];
        for (i, m) in morphisms.iter().enumerate() {
            hom[m.dom * n + m.cod].push(i);
            if identities[m.cod] != i {
                into[m.cod].push(i);
            }
        }
        for (c, list) in into.iter_mut().enumerate() {
            list.insert(0, identities[c]);
        }
        FiniteCategory {
            objects,
            morphisms,
            identities,
            table,
            compose,
            hom,
            into,
        }
    }

    /// The one-object, identity-only category: presheaves over it are finite sets.
    pub fn one_object() -> Self {
        CategoryBuilder::new()
            .object(SET_OBJECT)
            .identity(SET_OBJECT, SET_IDENTITY)
            .build()
            .expect("one-object category is well formed")
    }

    /// The index category of directed multigraphs: `V`, `E` and `s, t: V → E`.
    pub fn graph_index() -> Self {
        CategoryBuilder::new()
            .object("V")
            .object("E")
            .identity("V", "idV")
            .identity("E", "idE")
            .morphism("s", "V", "E")
            .morphism("t", "V", "E")
            .build()
            .expect("graph index category is well formed")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_index(&self, name: &str) -> Result<usize> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn identity(&self, c: usize) -> usize {
        self.identities[c]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].cod] == m
    }

    /// `g ∘ f`, if the table has an entry for the pair.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// Morphisms `a → b`.
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.objects.len() + b]
    }

    /// All morphisms with codomain `c`, the identity first.
    pub fn incoming(&self, c: usize) -> &[usize] {
        &self.into[c]
    }

    /// True for the one-object, identity-only category.
    pub fn is_set_backend(&self) -> bool {
        self.objects.len() == 1 && self.morphisms.len() == 1
    }

    pub fn composition_table(&self) -> &[(usize, usize, usize)] {
        &self.table
    }

    /// Checks the category laws. Returns the first violation with a witness.
    pub fn validate(&self) -> Validation {
        let name = |m: usize| self.morphisms[m].name.clone();
        for (c, &id) in self.identities.iter().enumerate() {
            let m = &self.morphisms[id];
            if m.dom != c || m.cod != c {
                return Validation::fail("identity typing", [name(id)]);
            }
        }
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for &(g, f, gf) in &self.table {
            let (mg, mf, mgf) = (&self.morphisms[g], &self.morphisms[f], &self.morphisms[gf]);
            if mf.cod != mg.dom {
                return Validation::fail("table entry on non-composable pair", [name(g), name(f)]);
            }
            if mgf.dom != mf.dom || mgf.cod != mg.cod {
                return Validation::fail("composite typing", [name(g), name(f), name(gf)]);
            }
            if let Some(&prev) = seen.get(&(g, f)) {
                if prev != gf {
                    return Validation::fail("conflicting table entries", [name(g), name(f)]);
                }
            }
            seen.insert((g, f), gf);
        }
        for g in 0..self.morphisms.len() {
            for f in 0..self.morphisms.len() {
                if self.morphisms[f].cod == self.morphisms[g].dom && self.compose(g, f).is_none() {
                    return Validation::fail("composition table coverage", [name(g), name(f)]);
                }
            }
        }
        for f in 0..self.morphisms.len() {
            let left = self.identities[self.morphisms[f].cod];
            if self.compose(left, f) != Some(f) {
                return Validation::fail("left identity law", [name(left), name(f)]);
            }
            let right = self.identities[self.morphisms[f].dom];
            if self.compose(f, right) != Some(f) {
                return Validation::fail("right identity law", [name(f), name(right)]);
            }
        }
        for h in 0..self.morphisms.len() {
            for g in 0..self.morphisms.len() {
                if self.morphisms[g].cod != self.morphisms[h].dom {
                    continue;
                }
                for f in 0..self.morphisms.len() {
                    if self.morphisms[f].cod != self.morphisms[g].dom {
                        continue;
                    }
                    let lhs = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                    let rhs = self.compose(g, f).and_then(|gf| self.compose(h, gf));
                    if lhs != rhs {
                        return Validation::fail("associativity", [name(h), name(g), name(f)]);
                    }
                }
            }
        }
        Validation::Pass
    }
}

/// A presheaf `X: C^op → FinSet`.
#[derive(Debug, Clone)]
pub struct Presheaf {
    category: Arc<FiniteCategory>,
    carriers: Vec<Vec<String>>,
    index: Vec<HashMap<String, usize>>,
    /// For `f: c' → c`, `actions[f][i]` is `X(f)` of element `i` of `X(c)`, an index into `X(c')`.
    actions: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    stage_of: Vec<usize>,
    /// For each flat element, the flat indices of its restrictions along `incoming(c)`.
    restrictions: Vec<Vec<usize>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.category, &other.category) || self.category == other.category)
            && self.carriers == other.carriers
            && self.actions == other.actions
    }
}

impl Eq for Presheaf {}

/// An element picked at a stage: a generalized element `y(c) → X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StageElement {
    pub stage: usize,
    pub elem: usize,
}

impl Presheaf {
    /// Index-level constructor. Every action must be total into the right carrier.
    pub fn new(
        category: Arc<FiniteCategory>,
        carriers: Vec<Vec<String>>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if carriers.len() != category.num_objects() {
            return Err(Error::CarrierMissing("carrier list length".into()));
        }
        if actions.len() != category.morphisms().len() {
            return Err(Error::CarrierMissing("action list length".into()));
        }
        let mut index = Vec::with_capacity(carriers.len());
        for (c, carrier) in carriers.iter().enumerate() {
            let mut map = HashMap::with_capacity(carrier.len());
            for (i, e) in carrier.iter().enumerate() {
                if map.insert(e.clone(), i).is_some() {
                    return Err(Error::Duplicate(format!(
                        "{} at {}",
                        e,
                        category.objects()[c]
                    )));
                }
            }
            index.push(map);
        }
        for (f, act) in actions.iter().enumerate() {
            let m = &category.morphisms()[f];
            if act.len() != carriers[m.cod].len() {
                return Err(Error::CarrierMissing(m.name.clone()));
            }
            if act.iter().any(|&j| j >= carriers[m.dom].len()) {
                return Err(Error::CarrierMissing(m.name.clone()));
            }
        }
        let mut offsets = Vec::with_capacity(carriers.len() + 1);
        let mut stage_of = Vec::new();
        let mut acc = 0;
        for (c, carrier) in carriers.iter().enumerate() {
            offsets.push(acc);
            acc += carrier.len();
            stage_of.extend(std::iter::repeat_n(c, carrier.len()));
        }
        offsets.push(acc);
        let mut restrictions = Vec::with_capacity(acc);
        for (c, carrier) in carriers.iter().enumerate() {
            for i in 0..carrier.len() {
                restrictions.push(
                    category
                        .incoming(c)
                        .iter()
                        .map(|&f| {
                            let d = category.morphisms()[f].dom;
                            offsets[d] + actions[f][i]
                        })
                        .collect(),
                );
            }
        }
        Ok(Presheaf {
            category,
            carriers,
            index,
            actions,
            offsets,
            stage_of,
            restrictions,
        })
    }

    /// Builds a presheaf from string ids.
    ///
    /// `actions` maps a morphism `f: c' → c` to pairs `(x, X(f)(x))` with
    /// `x ∈ X(c)`. Identity actions may be omitted.
    pub fn from_named(
        category: Arc<FiniteCategory>,
        carriers: &BTreeMap<String, Vec<String>>,
        actions: &BTreeMap<String, Vec<(String, String)>>,
    ) -> Result<Self> {
        for name in carriers.keys() {
            category.object_index(name)?;
        }
        for name in actions.keys() {
            category.morphism_index(name)?;
        }
        let mut cars = Vec::with_capacity(category.num_objects());
        for o in category.objects() {
            let carrier = carriers
                .get(o)
                .ok_or_else(|| Error::CarrierMissing(o.clone()))?;
            cars.push(carrier.clone());
        }
        let lookup = |c: usize, e: &str| -> Result<usize> {
            cars[c]
                .iter()
                .position(|x| x == e)
                .ok_or_else(|| Error::UnknownElement {
                    object: category.objects()[c].clone(),
                    elem: e.to_string(),
                })
        };
        let mut acts = Vec::with_capacity(category.morphisms().len());
        for (f, m) in category.morphisms().iter().enumerate() {
            match actions.get(&m.name) {
                None if category.is_identity(f) => acts.push((0..cars[m.cod].len()).collect()),
                None => return Err(Error::CarrierMissing(m.name.clone())),
                Some(pairs) => {
                    let mut act = vec![usize::MAX; cars[m.cod].len()];
                    for (x, y) in pairs {
                        act[lookup(m.cod, x)?] = lookup(m.dom, y)?;
                    }
                    if let Some(i) = act.iter().position(|&j| j == usize::MAX) {
                        return Err(Error::CarrierMissing(format!(
                            "{} at {}",
                            m.name, cars[m.cod][i]
                        )));
                    }
                    acts.push(act);
                }
            }
        }
        Presheaf::new(category, cars, acts)
    }

    /// A finite set, as a presheaf over the one-object category.
    pub fn set<S: AsRef<str>>(elements: &[S]) -> Self {
        Presheaf::new(
            Arc::new(FiniteCategory::one_object()),
            vec![elements.iter().map(|e| e.as_ref().to_string()).collect()],
            vec![(0..elements.len()).collect()],
        )
        .expect("finite set presheaf is well formed")
    }

    /// `{0, 1, …, n-1}` on the Set backend.
    pub fn range_set(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Presheaf::set(&names)
    }

    /// A directed multigraph over [`FiniteCategory::graph_index`].
    pub fn graph<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        Self::graph_over(Arc::new(FiniteCategory::graph_index()), vertices, edges)
    }

    pub fn graph_over<S: AsRef<str>>(
        category: Arc<FiniteCategory>,
        vertices: &[S],
        edges: &[(S, S, S)],
    ) -> Result<Self> {
        let mut carriers = BTreeMap::new();
        carriers.insert(
            "V".to_string(),
            vertices.iter().map(|v| v.as_ref().to_string()).collect(),
        );
        carriers.insert(
            "E".to_string(),
            edges
                .iter()
                .map(|(e, _, _)| e.as_ref().to_string())
                .collect(),
        );
        let mut actions = BTreeMap::new();
        actions.insert(
            "s".to_string(),
            edges
                .iter()
                .map(|(e, s, _)| (e.as_ref().to_string(), s.as_ref().to_string()))
                .collect(),
        );
        actions.insert(
            "t".to_string(),
            edges
                .iter()
                .map(|(e, _, t)| (e.as_ref().to_string(), t.as_ref().to_string()))
                .collect(),
        );
        Presheaf::from_named(category, &carriers, &actions)
    }

    /// The terminal presheaf: one element `*` at every stage.
    pub fn terminal(category: Arc<FiniteCategory>) -> Self {
        let n = category.num_objects();
        let actions = vec![vec![0]; category.morphisms().len()];
        Presheaf::new(category, vec![vec!["*".to_string()]; n], actions)
            .expect("terminal presheaf is well formed")
    }

    pub fn category(&self) -> &Arc<FiniteCategory> {
        &self.category
    }

    pub fn carrier(&self, c: usize) -> &[String] {
        &self.carriers[c]
    }

    pub fn carriers(&self) -> &[Vec<String>] {
        &self.carriers
    }

    pub fn stage_len(&self, c: usize) -> usize {
        self.carriers[c].len()
    }

    pub fn element_index(&self, c: usize, name: &str) -> Result<usize> {
        self.index[c]
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement {
                object: self.category.objects()[c].clone(),
                elem: name.to_string(),
            })
    }

    /// `X(f)(x)` for `f: c' → c` and `x` an index into `X(c)`.
    pub fn act(&self, f: usize, x: usize) -> usize {
        self.actions[f][x]
    }

    pub fn action(&self, f: usize) -> &[usize] {
        &self.actions[f]
    }

    /// Total number of elements over all stages.
    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn flat(&self, c: usize, i: usize) -> usize {
        self.offsets[c] + i
    }

    pub fn offset(&self, c: usize) -> usize {
        self.offsets[c]
    }

    pub fn unflat(&self, k: usize) -> StageElement {
        let stage = self.stage_of[k];
        StageElement {
            stage,
            elem: k - self.offsets[stage],
        }
    }

    /// Flat indices of the restrictions of flat element `k`, along `incoming(stage)`.
    pub fn restrictions(&self, k: usize) -> &[usize] {
        &self.restrictions[k]
    }

    pub fn describe(&self, k: usize) -> String {
        let se = self.unflat(k);
        format!(
            "{}@{}",
            self.carriers[se.stage][se.elem],
            self.category.objects()[se.stage]
        )
    }

    pub fn same_category(&self, other: &Presheaf) -> bool {
        Arc::ptr_eq(&self.category, &other.category) || self.category == other.category
    }

    /// Checks functoriality exhaustively.
    pub fn validate(&self) -> Validation {
        let cat = &self.category;
        let name = |m: usize| cat.morphisms()[m].name.clone();
        for c in 0..cat.num_objects() {
            let id = cat.identity(c);
            for x in 0..self.stage_len(c) {
                if self.act(id, x) != x {
                    return Validation::fail(
                        "identity action",
                        [name(id), self.carriers[c][x].clone()],
                    );
                }
            }
        }
        for &(g, f, gf) in cat.composition_table() {
            let c = cat.morphisms()[g].cod;
            for x in 0..self.stage_len(c) {
                // X(g∘f)(x) = X(f)(X(g)(x))
                if self.act(gf, x) != self.act(f, self.act(g, x)) {
                    return Validation::fail(
                        "contravariant functoriality",
                        [name(g), name(f), self.carriers[c][x].clone()],
                    );
                }
            }
        }
        Validation::Pass
    }
}

/// Checks the category laws of `category`.
pub fn validate_category(category: &FiniteCategory) -> Validation {
    category.validate()
}

/// Checks the category laws, then functoriality of `presheaf`.
pub fn validate_presheaf(presheaf: &Presheaf) -> Validation {
    match presheaf.category().validate() {
        Validation::Pass => presheaf.validate(),
        fail => fail,
    }
}

/// `(X × Y)(c) = X(c) × Y(c)` with the componentwise action.
///
/// The pair `(x, y)` sits at index `x * |Y(c)| + y`.
pub fn product(x: &Presheaf, y: &Presheaf) -> Result<Presheaf> {
    if !x.same_category(y) {
        return Err(Error::BackendMismatch);
    }
    let cat = x.category().clone();
    let carriers = (0..cat.num_objects())
        .map(|c| {
            let mut v = Vec::with_capacity(x.stage_len(c) * y.stage_len(c));
            for a in x.carrier(c) {
                for b in y.carrier(c) {
                    v.push(format!("({a},{b})"));
                }
            }
            v
        })
        .collect();
    let actions = cat
        .morphisms()
        .iter()
        .enumerate()
        .map(|(f, m)| {
            let ny = y.stage_len(m.dom);
            let mut act = Vec::with_capacity(x.stage_len(m.cod) * y.stage_len(m.cod));
            for a in 0..x.stage_len(m.cod) {
                for b in 0..y.stage_len(m.cod) {
                    act.push(x.act(f, a) * ny + y.act(f, b));
                }
            }
            act
        })
        .collect();
    Presheaf::new(cat, carriers, actions)
}

/// The representable presheaf `y(c) = Hom(-, c)`, acting by precomposition.
pub fn yoneda(category: &Arc<FiniteCategory>, c: usize) -> Result<Presheaf> {
    if c >= category.num_objects() {
        return Err(Error::UnknownObject(c.to_string()));
    }
    let n = category.num_objects();
    let carriers: Vec<Vec<String>> = (0..n)
        .map(|d| {
            category
                .hom(d, c)
                .iter()
                .map(|&g| category.morphisms()[g].name.clone())
                .collect()
        })
        .collect();
    let mut actions = Vec::with_capacity(category.morphisms().len());
    for (f, m) in category.morphisms().iter().enumerate() {
        // f: m.dom → m.cod, acts Hom(m.cod, c) → Hom(m.dom, c) by g ↦ g∘f.
        let target = category.hom(m.dom, c);
        let mut act = Vec::new();
        for &g in category.hom(m.cod, c) {
            let gf = category.compose(g, f).ok_or_else(|| {
                Error::CarrierMissing(format!(
                    "composite {}∘{}",
                    category.morphisms()[g].name,
                    m.name
                ))
            })?;
            let pos = target
                .iter()
                .position(|&h| h == gf)
                .ok_or_else(|| Error::UnknownMorphism(category.morphisms()[gf].name.clone()))?;
            act.push(pos);
        }
        actions.push(act);
    }
    Presheaf::new(category.clone(), carriers, actions)
}

/// A natural transformation between presheaves over the same category.
#[derive(Debug, Clone)]
pub struct PresheafMorphism {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    components: Vec<Vec<usize>>,
}

impl PresheafMorphism {
    pub fn new(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if !source.same_category(&target) {
            return Err(Error::BackendMismatch);
        }
        let cat = source.category();
        if components.len() != cat.num_objects() {
            return Err(Error::CarrierMissing("component list length".into()));
        }
        for (c, comp) in components.iter().enumerate() {
            if comp.len() != source.stage_len(c) || comp.iter().any(|&y| y >= target.stage_len(c)) {
                return Err(Error::CarrierMissing(format!(
                    "component at {}",
                    cat.objects()[c]
                )));
            }
        }
        Ok(PresheafMorphism {
            source,
            target,
            components,
        })
    }

    pub fn component(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    /// `α_{c'} ∘ X(f) = Y(f) ∘ α_c` for every `f: c' → c`.
    pub fn is_natural(&self) -> Validation {
        let cat = self.source.category();
        for (f, m) in cat.morphisms().iter().enumerate() {
            for x in 0..self.source.stage_len(m.cod) {
                let lhs = self.components[m.dom][self.source.act(f, x)];
                let rhs = self.target.act(f, self.components[m.cod][x]);
                if lhs != rhs {
                    return Validation::fail(
                        "naturality",
                        [m.name.clone(), self.source.carrier(m.cod)[x].clone()],
                    );
                }
            }
        }
        Validation::Pass
    }
}
