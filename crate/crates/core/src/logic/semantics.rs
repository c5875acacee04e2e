use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;

use super::formula::{Formula, Kind};
use crate::error::{Error, Result};
use crate::fincat::Presheaf;
use crate::morphology::StructuringNeighborhood;
use crate::sublattice::Subpresheaf;

/// A model `(X, N, ν)`. The flags are computed, never taken from input.
#[derive(Debug, Clone)]
pub struct Model {
    name: String,
    neighborhood: StructuringNeighborhood,
    valuation: BTreeMap<String, Subpresheaf>,
    topological: bool,
    boolean: bool,
}

impl Model {
    /// Checks that `N` is a structuring neighborhood and that every value of
    /// `ν` lives in `X`.
    pub fn new(
        name: impl Into<String>,
        neighborhood: StructuringNeighborhood,
        valuation: BTreeMap<String, Subpresheaf>,
    ) -> Result<Self> {
        let report = neighborhood.is_structuring_neighborhood();
        if !report.pass {
            return Err(Error::InvalidNeighborhood(report.detail));
        }
        let space = neighborhood.space().clone();
        for v in valuation.values() {
            if !Arc::ptr_eq(v.parent(), &space) && **v.parent() != *space {
                return Err(Error::ParentMismatch);
            }
        }
        let topological = neighborhood.is_topological_neighborhood().pass;
        let boolean = space.category().is_set_backend();
        Ok(Model {
            name: name.into(),
            neighborhood,
            valuation,
            topological,
            boolean,
        })
    }

    /// Same space and neighborhood, different valuation.
    pub fn with_valuation(
        &self,
        name: impl Into<String>,
        valuation: BTreeMap<String, Subpresheaf>,
    ) -> Result<Self> {
        for v in valuation.values() {
            if !Arc::ptr_eq(v.parent(), self.space()) && **v.parent() != **self.space() {
                return Err(Error::ParentMismatch);
            }
        }
        Ok(Model {
            name: name.into(),
            valuation,
            ..self.clone()
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Arc<Presheaf> {
        self.neighborhood.space()
    }

    pub fn neighborhood(&self) -> &StructuringNeighborhood {
        &self.neighborhood
    }

    pub fn valuation(&self) -> &BTreeMap<String, Subpresheaf> {
        &self.valuation
    }

    pub fn is_topological(&self) -> bool {
        self.topological
    }

    /// True iff the model lives on the set backend.
    pub fn is_boolean(&self) -> bool {
        self.boolean
    }

    pub fn vars(&self) -> Vec<String> {
        self.valuation.keys().cloned().collect()
    }

    /// `⟦φ⟧`, memoized over shared subtrees.
    pub fn eval(&self, f: &Formula) -> Result<Subpresheaf> {
        let mut memo = HashMap::new();
        self.eval_memo(f, &mut memo)
    }

    fn eval_memo(
        &self,
        f: &Formula,
        memo: &mut HashMap<Formula, Subpresheaf>,
    ) -> Result<Subpresheaf> {
        if let Some(v) = memo.get(f) {
            return Ok(v.clone());
        }
        let space = self.space();
        let v = match f.kind() {
            Kind::Top => Subpresheaf::top(space),
            Kind::Bot => Subpresheaf::bottom(space),
            Kind::Var(p) => self
                .valuation
                .get(&**p)
                .cloned()
                .ok_or_else(|| Error::UnknownVariable(p.to_string()))?,
            Kind::Not(a) => self.eval_memo(a, memo)?.neg(),
            Kind::And(a, b) => self.eval_memo(a, memo)?.meet(&self.eval_memo(b, memo)?)?,
            Kind::Or(a, b) => self.eval_memo(a, memo)?.join(&self.eval_memo(b, memo)?)?,
            Kind::Imp(a, b) => self
                .eval_memo(a, memo)?
                .implies(&self.eval_memo(b, memo)?)?,
            Kind::Box(a) => self.neighborhood.erosion(&self.eval_memo(a, memo)?)?,
            Kind::Dia(a) => self.neighborhood.dilation(&self.eval_memo(a, memo)?)?,
        };
        memo.insert(f.clone(), v.clone());
        Ok(v)
    }

    /// Applies the top connective of `f` to already-computed child values.
    pub(crate) fn apply(&self, f: &Formula, kids: &[Subpresheaf]) -> Result<Subpresheaf> {
        let space = self.space();
        Ok(match f.kind() {
            Kind::Top => Subpresheaf::top(space),
            Kind::Bot => Subpresheaf::bottom(space),
            Kind::Var(p) => self
                .valuation
                .get(&**p)
                .cloned()
                .ok_or_else(|| Error::UnknownVariable(p.to_string()))?,
            Kind::Not(_) => kids[0].neg(),
            Kind::And(..) => kids[0].meet(&kids[1])?,
            Kind::Or(..) => kids[0].join(&kids[1])?,
            Kind::Imp(..) => kids[0].implies(&kids[1])?,
            Kind::Box(_) => self.neighborhood.erosion(&kids[0])?,
            Kind::Dia(_) => self.neighborhood.dilation(&kids[0])?,
        })
    }

    /// `M ⊨ φ`: `⟦φ⟧ = ⊤`.
    pub fn satisfies(&self, f: &Formula) -> Result<bool> {
        Ok(self.eval(f)?.is_top())
    }

    /// `M ⊨_ι φ`: `ι ≼ ⟦φ⟧`.
    pub fn satisfies_at(&self, iota: &Subpresheaf, f: &Formula) -> Result<bool> {
        iota.leq(&self.eval(f)?)
    }

    /// `φ ⊢ ψ` is valid in this model: `⟦φ⟧ ≼ ⟦ψ⟧`.
    pub fn sequent_valid(&self, lhs: &Formula, rhs: &Formula) -> Result<bool> {
        let mut memo = HashMap::new();
        let l = self.eval_memo(lhs, &mut memo)?;
        let r = self.eval_memo(rhs, &mut memo)?;
        l.leq(&r)
    }
}

/// Free-function form of [`Model::eval`].
pub fn eval(model: &Model, f: &Formula) -> Result<Subpresheaf> {
    model.eval(f)
}

/// Free-function form of [`Model::sequent_valid`].
pub fn sequent_valid(model: &Model, lhs: &Formula, rhs: &Formula) -> Result<bool> {
    model.sequent_valid(lhs, rhs)
}

/// Free-function form of [`Model::satisfies`].
pub fn satisfies(model: &Model, f: &Formula) -> Result<bool> {
    model.satisfies(f)
}

/// A set of models of a universe, as a bitset over model indices.
pub type ModSet = FixedBitSet;

const CACHE_LIMIT: usize = 400_000;

/// A finite nonempty family of models over one shared set of variables.
///
/// Values of a formula across all models are packed into one bitset (model
/// `i` occupies the bits `offsets[i]..offsets[i+1]`) and cached per formula.
#[derive(Debug)]
pub struct ModelUniverse {
    models: Vec<Model>,
    vars: Vec<String>,
    offsets: Vec<usize>,
    full: FixedBitSet,
    cache: Mutex<HashMap<Formula, Arc<FixedBitSet>>>,
}

impl Clone for ModelUniverse {
    fn clone(&self) -> Self {
        ModelUniverse::new(self.models.clone()).expect("already validated")
    }
}

impl ModelUniverse {
    pub fn new(models: Vec<Model>) -> Result<Self> {
        let first = models
            .first()
            .ok_or_else(|| Error::InvalidUniverse("no models".into()))?;
        let vars = first.vars();
        for m in &models {
            if m.vars() != vars {
                return Err(Error::InvalidUniverse(format!(
                    "model `{}` has variables {:?}, expected {:?}",
                    m.name(),
                    m.vars(),
                    vars
                )));
            }
        }
        let mut offsets = vec![0];
        for m in &models {
            offsets.push(offsets.last().unwrap() + m.space().total());
        }
        let mut full = FixedBitSet::with_capacity(*offsets.last().unwrap());
        full.insert_range(..);
        Ok(ModelUniverse {
            models,
            vars,
            offsets,
            full,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn models(&self) -> &[Model] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of bits in a packed value.
    pub fn packed_len(&self) -> usize {
        self.full.len()
    }

    /// The packed bit range of model `i`.
    pub fn model_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// An order-sensitive digest of the models, for report headers.
    pub fn fingerprint(&self) -> String {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for m in &self.models {
            m.name().hash(&mut h);
            m.space().total().hash(&mut h);
            for (k, v) in m.valuation() {
                k.hash(&mut h);
                v.bits().as_slice().hash(&mut h);
            }
        }
        format!("{}-models-{:016x}", self.models.len(), h.finish())
    }

    fn unpack(&self, packed: &FixedBitSet, i: usize) -> Subpresheaf {
        let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
        let mut bits = FixedBitSet::with_capacity(hi - lo);
        for k in (lo..hi).filter(|&k| packed.contains(k)) {
            bits.insert(k - lo);
        }
        Subpresheaf::from_bits_unchecked(self.models[i].space(), bits)
    }

    /// `⟦φ⟧` in every model, packed.
    pub fn values(&self, f: &Formula) -> Result<Arc<FixedBitSet>> {
        if let Some(v) = self.cache.lock().unwrap().get(f) {
            return Ok(v.clone());
        }
        let kids: Vec<Arc<FixedBitSet>> = match f.kind() {
            Kind::Top | Kind::Bot | Kind::Var(_) => vec![],
            Kind::Not(a) | Kind::Box(a) | Kind::Dia(a) => vec![self.values(a)?],
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                vec![self.values(a)?, self.values(b)?]
            }
        };
        let mut out = FixedBitSet::with_capacity(self.full.len());
        match f.kind() {
            Kind::Top => out = self.full.clone(),
            Kind::Bot => {}
            Kind::And(..) => {
                out = (*kids[0]).clone();
                out.intersect_with(&kids[1]);
            }
            Kind::Or(..) => {
                out = (*kids[0]).clone();
                out.union_with(&kids[1]);
            }
            _ => {
                for (i, m) in self.models.iter().enumerate() {
                    let args: Vec<Subpresheaf> = kids.iter().map(|k| self.unpack(k, i)).collect();
                    let v = m.apply(f, &args)?;
                    let lo = self.offsets[i];
                    for k in v.bits().ones() {
                        out.insert(lo + k);
                    }
                }
            }
        }
        let out = Arc::new(out);
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(f.clone(), out.clone());
        Ok(out)
    }

    /// `⟦φ⟧` in model `i`.
    pub fn value_in(&self, i: usize, f: &Formula) -> Result<Subpresheaf> {
        Ok(self.unpack(&*self.values(f)?, i))
    }

    /// `{M ∈ U | M ⊨ φ}`.
    pub fn mod_set(&self, f: &Formula) -> Result<ModSet> {
        Ok(self.mods_of(&*self.values(f)?))
    }

    /// The models in which a packed value is the top subobject.
    pub fn mods_of(&self, v: &FixedBitSet) -> ModSet {
        let mut out = FixedBitSet::with_capacity(self.models.len());
        for i in 0..self.models.len() {
            let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
            if v.count_ones(lo..hi) == hi - lo {
                out.insert(i);
            }
        }
        out
    }

    /// `Mod(φ) ≠ ∅`.
    pub fn consistent(&self, f: &Formula) -> Result<bool> {
        Ok(!self.mod_set(f)?.is_clear())
    }

    /// `⟦φ⟧ = ⟦ψ⟧` in every model.
    pub fn same_values(&self, a: &Formula, b: &Formula) -> Result<bool> {
        Ok(*self.values(a)? == *self.values(b)?)
    }

    /// `φ ⊢ ψ` valid in every model.
    pub fn entails(&self, a: &Formula, b: &Formula) -> Result<bool> {
        Ok(self.values(a)?.is_subset(&*self.values(b)?))
    }

    /// Model names of a mod set, in universe order.
    pub fn names(&self, set: &ModSet) -> Vec<String> {
        set.ones()
            .map(|i| self.models[i].name().to_string())
            .collect()
    }

    pub fn clear_cache(&self) {
        self.cache.lock().unwrap().clear();
    }
}

/// Free-function form of [`ModelUniverse::mod_set`].
pub fn mod_set(universe: &ModelUniverse, f: &Formula) -> Result<ModSet> {
    universe.mod_set(f)
}

/// Free-function form of [`ModelUniverse::consistent`].
pub fn consistent(universe: &ModelUniverse, f: &Formula) -> Result<bool> {
    universe.consistent(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::parse_formula;
    use crate::morphology::{neighborhood_from_element, StructuringElement};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn graph_model() -> Model {
        let x = Arc::new(Presheaf::graph(&["u", "v"], &[("e", "u", "v")]).unwrap());
        let pv = Subpresheaf::from_named(&x, &[("V", vec!["u", "v"]), ("E", vec![])]).unwrap();
        let n = neighborhood_from_element(&StructuringElement::diagonal(&x)).unwrap();
        Model::new("graph", n, BTreeMap::from([("p".to_string(), pv)])).unwrap()
    }

    fn two_models() -> ModelUniverse {
        let x = Arc::new(Presheaf::range_set(2));
        let n = neighborhood_from_element(&StructuringElement::full(&x)).unwrap();
        let set = |e: &[&str]| Subpresheaf::from_elements(&x, e).unwrap();
        let m1 = Model::new(
            "M1",
            n.clone(),
            BTreeMap::from([("p".into(), set(&["0", "1"])), ("q".into(), set(&[]))]),
        )
        .unwrap();
        let m2 = m1
            .with_valuation(
                "M2",
                BTreeMap::from([("p".into(), set(&["1"])), ("q".into(), set(&["0", "1"]))]),
            )
            .unwrap();
        ModelUniverse::new(vec![m1, m2]).unwrap()
    }

    #[test]
    fn no_excluded_middle_in_graphs() {
        let m = graph_model();
        let v = m.eval(&p("p | ~p")).unwrap();
        assert_eq!(v, m.valuation()["p"]);
        assert!(!v.is_top());
        assert!(!m.sequent_valid(&p("~~p"), &p("p")).unwrap());
        assert!(!m.is_boolean());
    }

    #[test]
    fn preservation_and_identity_box() {
        let m = graph_model();
        assert!(m.eval(&p("[]T")).unwrap().is_top());
        assert!(m.eval(&p("<>F")).unwrap().is_bottom());
        assert_eq!(m.eval(&p("[]p")).unwrap(), m.valuation()["p"]);
    }

    #[test]
    fn unknown_variable() {
        assert_eq!(
            graph_model().eval(&p("q")).unwrap_err(),
            Error::UnknownVariable("q".into())
        );
    }

    #[test]
    fn lemma_one_on_samples() {
        let m = graph_model();
        for (a, b) in [
            ("p", "[]p"),
            ("[]p", "p"),
            ("p", "<>p"),
            ("~p", "F"),
            ("T", "p | ~p"),
        ] {
            let (a, b) = (p(a), p(b));
            assert_eq!(
                m.satisfies(&Formula::imp(a.clone(), b.clone())).unwrap(),
                m.sequent_valid(&a, &b).unwrap()
            );
        }
    }

    #[test]
    fn two_model_universe() {
        let u = two_models();
        assert_eq!(u.mod_set(&p("T")).unwrap().count_ones(..), 2);
        assert!(u.mod_set(&p("F")).unwrap().is_clear());
        assert_eq!(u.names(&u.mod_set(&p("<>p & q")).unwrap()), vec!["M2"]);
        assert!(u.consistent(&p("<>p & q")).unwrap());
        assert!(!u.consistent(&p("p & q")).unwrap());
        assert!(u.models()[0].is_topological());
    }

    #[test]
    fn packed_values_match_direct_eval() {
        let u = two_models();
        for s in ["p -> q", "~<>q", "[]p | q", "~~p"] {
            let f = p(s);
            for (i, m) in u.models().iter().enumerate() {
                assert_eq!(u.value_in(i, &f).unwrap(), m.eval(&f).unwrap());
            }
        }
    }

    #[test]
    fn universe_rejects_mixed_variables() {
        let u = two_models();
        let m = u.models()[0]
            .with_valuation(
                "M3",
                BTreeMap::from([("p".into(), Subpresheaf::top(u.models()[0].space()))]),
            )
            .unwrap();
        assert!(matches!(
            ModelUniverse::new(vec![u.models()[0].clone(), m]),
            Err(Error::InvalidUniverse(_))
        ));
        assert!(ModelUniverse::new(vec![]).is_err());
    }
}
