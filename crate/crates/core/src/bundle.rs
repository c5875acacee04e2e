//! JSON model bundles: a space, a structuring element or neighborhood, and
//! one or more valuations.
//!
//! ```json
//! {
//!   "backend": "set",
//!   "carriers": ["0", "1", "2"],
//!   "structuring": {"pairs": [["0","0"], ["0","1"], ["1","1"], ["2","2"]]},
//!   "valuation": {"p": ["0"]}
//! }
//! ```
//!
//! On the presheaf backend `carriers` and region values are maps from object
//! to element ids, `category` is `"graph"` or an explicit table, and pairs
//! are `[object, x, y]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{CategoryBuilder, FiniteCategory, Presheaf, SET_OBJECT};
use crate::logic::{Derivation, DerivationJson, Model, ModelUniverse};
use crate::morphology::{
    neighborhood_from_element, ExplicitNeighborhood, StructuringElement, StructuringNeighborhood,
};
use crate::sublattice::{enumerate_subobjects, power_object, Subpresheaf, DEFAULT_CAP};

pub const BUNDLE_VERSION: u32 = 1;

/// Largest universe `enumerate_valuations` may produce.
pub const MAX_ENUMERATED_MODELS: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Set,
    Presheaf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategorySpec {
    /// `"graph"`: objects `V, E`, morphisms `s, t: V → E`.
    Named(String),
    Explicit {
        objects: Vec<String>,
        /// `[name, dom, cod]`.
        morphisms: Vec<(String, String, String)>,
        /// Object to identity name; defaults to `id_<object>`.
        #[serde(default)]
        identities: BTreeMap<String, String>,
        /// `[g, f, g∘f]`; composites with identities may be omitted.
        #[serde(default)]
        compositions: Vec<(String, String, String)>,
    },
}

/// A region: a list of ids on the Set backend, a per-object map otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Region {
    Set(Vec<String>),
    Staged(BTreeMap<String, Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructuringSpec {
    /// A restriction-closed relation, `[x, y]` or `[object, x, y]`.
    Pairs(Vec<Vec<String>>),
    /// The restriction closure of the listed pairs.
    Generated(Vec<Vec<String>>),
    /// `b(x) = X`.
    Full,
    /// `b(x) = {x}`.
    Diagonal,
    /// Set backend only: element id to its family of neighborhoods.
    Families(BTreeMap<String, Vec<Vec<String>>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overlay {
    pub name: String,
    pub valuation: BTreeMap<String, Region>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Carriers {
    Set(Vec<String>),
    Staged(BTreeMap<String, Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBundle {
    /// Schema version; only [`BUNDLE_VERSION`] is accepted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<CategorySpec>,
    pub carriers: Carriers,
    /// Morphism name to `[x, X(f)(x)]` pairs.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, Vec<(String, String)>>,
    pub structuring: StructuringSpec,
    #[serde(default)]
    pub valuation: BTreeMap<String, Region>,
    /// Further valuations over the same space and neighborhood.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<Vec<Overlay>>,
    /// Every assignment of subobjects to these variables, as a universe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumerate_valuations: Option<Vec<String>>,
}

/// A validated bundle.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub space: Arc<Presheaf>,
    pub neighborhood: StructuringNeighborhood,
    pub models: Vec<Model>,
}

impl Loaded {
    /// The first model.
    pub fn model(&self) -> &Model {
        &self.models[0]
    }

    pub fn universe(&self) -> Result<ModelUniverse> {
        ModelUniverse::new(self.models.clone())
    }
}

fn at(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Bundle(m) => Error::Bundle(format!("{path}.{m}")),
        e => Error::Bundle(format!("{path}: {e}")),
    }
}

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Bundle(format!("{path}: {msg}"))
}

impl ModelBundle {
    /// Parses JSON; syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| bad(&format!("line {} column {}", e.line(), e.column()), e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundles serialize")
    }

    fn category(&self) -> Result<FiniteCategory> {
        match (self.backend, &self.category) {
            (Backend::Set, None) => Ok(FiniteCategory::one_object()),
            (Backend::Set, Some(_)) => Err(bad("category", "not allowed on the set backend")),
            (Backend::Presheaf, None) => Err(bad("category", "required on the presheaf backend")),
            (Backend::Presheaf, Some(CategorySpec::Named(n))) if n == "graph" => {
                Ok(FiniteCategory::graph_index())
            }
            (Backend::Presheaf, Some(CategorySpec::Named(n))) => {
                Err(bad("category", format!("unknown category `{n}`")))
            }
            (
                Backend::Presheaf,
                Some(CategorySpec::Explicit {
                    objects,
                    morphisms,
                    identities,
                    compositions,
                }),
            ) => {
                let mut b = CategoryBuilder::new();
                for o in objects {
                    let id = identities
                        .get(o)
                        .cloned()
                        .unwrap_or_else(|| format!("id_{o}"));
                    b = b.object(o).identity(o, &id);
                }
                for (name, dom, cod) in morphisms {
                    b = b.morphism(name, dom, cod);
                }
                for (g, f, gf) in compositions {
                    b = b.compose(g, f, gf);
                }
                let cat = b.build().map_err(at("category"))?;
                let v = cat.validate();
                if !v.is_pass() {
                    return Err(bad("category", v));
                }
                Ok(cat)
            }
        }
    }

    fn space(&self) -> Result<Arc<Presheaf>> {
        let cat = Arc::new(self.category()?);
        let carriers = match (&self.carriers, self.backend) {
            (Carriers::Set(xs), Backend::Set) => {
                BTreeMap::from([(SET_OBJECT.to_string(), xs.clone())])
            }
            (Carriers::Staged(m), Backend::Presheaf) => m.clone(),
            (Carriers::Set(_), Backend::Presheaf) => {
                return Err(bad("carriers", "expected an object → ids map"))
            }
            (Carriers::Staged(_), Backend::Set) => {
                return Err(bad("carriers", "expected a list of ids"))
            }
        };
        let space = Presheaf::from_named(cat, &carriers, &self.actions).map_err(at("actions"))?;
        let v = space.validate();
        if !v.is_pass() {
            return Err(bad("actions", v));
        }
        Ok(Arc::new(space))
    }

    fn region(space: &Arc<Presheaf>, path: &str, r: &Region) -> Result<Subpresheaf> {
        let named: Vec<(String, Vec<String>)> = match r {
            Region::Set(xs) if space.category().is_set_backend() => {
                vec![(SET_OBJECT.to_string(), xs.clone())]
            }
            Region::Staged(m) if !space.category().is_set_backend() => {
                m.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
            }
            _ => return Err(bad(path, "region shape does not match the backend")),
        };
        Subpresheaf::from_named(space, &named).map_err(at(path))
    }

    fn pair_indices(
        space: &Arc<Presheaf>,
        path: &str,
        pairs: &[Vec<String>],
    ) -> Result<Vec<(usize, usize, usize)>> {
        let set = space.category().is_set_backend();
        let mut out = Vec::with_capacity(pairs.len());
        for (i, p) in pairs.iter().enumerate() {
            let here = format!("{path}[{i}]");
            let (obj, x, y) = match (set, p.as_slice()) {
                (true, [x, y]) => (SET_OBJECT, x, y),
                (false, [o, x, y]) => (o.as_str(), x, y),
                _ => {
                    return Err(bad(
                        &here,
                        if set {
                            "expected [x, y]"
                        } else {
                            "expected [object, x, y]"
                        },
                    ))
                }
            };
            let c = space.category().object_index(obj).map_err(at(&here))?;
            let xi = space.element_index(c, x).map_err(at(&here))?;
            let yi = space.element_index(c, y).map_err(at(&here))?;
            out.push((c, xi, yi));
        }
        Ok(out)
    }

    fn neighborhood(&self, space: &Arc<Presheaf>) -> Result<StructuringNeighborhood> {
        let element = match &self.structuring {
            StructuringSpec::Pairs(p) => {
                let idx = Self::pair_indices(space, "structuring.pairs", p)?;
                StructuringElement::from_pairs(space, &idx).map_err(at("structuring.pairs"))?
            }
            StructuringSpec::Generated(p) => {
                let idx = Self::pair_indices(space, "structuring.generated", p)?;
                StructuringElement::generated(space, &idx).map_err(at("structuring.generated"))?
            }
            StructuringSpec::Full => StructuringElement::full(space),
            StructuringSpec::Diagonal => StructuringElement::diagonal(space),
            StructuringSpec::Families(fam) => {
                if !space.category().is_set_backend() {
                    return Err(bad("structuring.families", "only on the set backend"));
                }
                let power =
                    Arc::new(power_object(space, DEFAULT_CAP).map_err(at("structuring.families"))?);
                let mut families = Vec::with_capacity(space.stage_len(0));
                for x in space.carrier(0) {
                    let path = format!("structuring.families.{x}");
                    let members = fam.get(x).ok_or_else(|| bad(&path, "missing"))?;
                    let subs = members
                        .iter()
                        .enumerate()
                        .map(|(i, m)| {
                            Self::region(space, &format!("{path}[{i}]"), &Region::Set(m.clone()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    families.push(subs);
                }
                if let Some(k) = fam.keys().find(|k| space.element_index(0, k).is_err()) {
                    return Err(bad(
                        "structuring.families",
                        format!("unknown element `{k}`"),
                    ));
                }
                let n = ExplicitNeighborhood::from_families(power, &families)
                    .map_err(at("structuring.families"))?;
                return Ok(StructuringNeighborhood::Explicit(n));
            }
        };
        neighborhood_from_element(&element).map_err(at("structuring"))
    }

    fn valuation(
        space: &Arc<Presheaf>,
        path: &str,
        v: &BTreeMap<String, Region>,
    ) -> Result<BTreeMap<String, Subpresheaf>> {
        v.iter()
            .map(|(k, r)| Ok((k.clone(), Self::region(space, &format!("{path}.{k}"), r)?)))
            .collect()
    }

    /// Builds and validates every model of the bundle.
    pub fn load(&self) -> Result<Loaded> {
        if let Some(v) = self.version.filter(|&v| v != BUNDLE_VERSION) {
            return Err(bad(
                "version",
                format!("unsupported version {v}, expected {BUNDLE_VERSION}"),
            ));
        }
        let space = self.space()?;
        let neighborhood = self.neighborhood(&space)?;
        let name = self.name.clone().unwrap_or_else(|| "M".to_string());
        let base = Model::new(
            name.clone(),
            neighborhood.clone(),
            Self::valuation(&space, "valuation", &self.valuation)?,
        )
        .map_err(at("structuring"))?;
        let mut models = Vec::new();
        match (&self.universe, &self.enumerate_valuations) {
            (Some(_), Some(_)) => {
                return Err(bad("universe", "conflicts with enumerate_valuations"))
            }
            (Some(overlays), None) => {
                for (i, o) in overlays.iter().enumerate() {
                    let path = format!("universe[{i}].valuation");
                    let mut val = base.valuation().clone();
                    val.extend(Self::valuation(&space, &path, &o.valuation)?);
                    models.push(
                        base.with_valuation(o.name.clone(), val)
                            .map_err(at(&path))?,
                    );
                }
                if models.is_empty() {
                    return Err(bad("universe", "empty"));
                }
            }
            (None, Some(vars)) => {
                let subs = enumerate_subobjects(&space, DEFAULT_CAP)
                    .map_err(at("enumerate_valuations"))?;
                let count = subs
                    .len()
                    .checked_pow(vars.len() as u32)
                    .filter(|&n| n <= MAX_ENUMERATED_MODELS);
                let Some(count) = count else {
                    return Err(bad(
                        "enumerate_valuations",
                        format!("more than {MAX_ENUMERATED_MODELS} models"),
                    ));
                };
                for i in 0..count {
                    let mut val = base.valuation().clone();
                    let mut rest = i;
                    for v in vars {
                        val.insert(v.clone(), subs[rest % subs.len()].clone());
                        rest /= subs.len();
                    }
                    models.push(
                        base.with_valuation(format!("{name}{i}"), val)
                            .map_err(at("enumerate_valuations"))?,
                    );
                }
            }
            (None, None) => models.push(base),
        }
        Ok(Loaded {
            space,
            neighborhood,
            models,
        })
    }
}

/// Parses and loads a bundle in one step.
pub fn load_bundle(text: &str) -> Result<Loaded> {
    ModelBundle::from_json(text)?.load()
}

/// Parses a derivation tree `{rule, sequent, children}`.
pub fn load_derivation(text: &str) -> Result<Derivation> {
    let json: DerivationJson = serde_json::from_str(text)
        .map_err(|e| bad(&format!("line {} column {}", e.line(), e.column()), e))?;
    json.to_derivation()
}

/// Element ids of a subobject per object name, sorted lexicographically.
pub fn selection_ids(sub: &Subpresheaf) -> BTreeMap<String, Vec<String>> {
    let cat = sub.parent().category();
    (0..cat.num_objects())
        .map(|c| {
            let mut ids = sub.stage_names(c);
            ids.sort();
            (cat.objects()[c].clone(), ids)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    const SET: &str = r#"{
        "backend": "set",
        "carriers": ["0", "1", "2"],
        "structuring": {"pairs": [["0","0"],["0","1"],["1","1"],["1","0"],["1","2"],["2","2"],["2","1"]]},
        "valuation": {"p": ["0"], "q": ["1", "2"]}
    }"#;

    const GRAPH: &str = r#"{
        "backend": "presheaf",
        "category": "graph",
        "carriers": {"V": ["u", "v"], "E": ["e"]},
        "actions": {"s": [["e", "u"]], "t": [["e", "v"]]},
        "structuring": "diagonal",
        "valuation": {"p": {"V": ["u", "v"], "E": ["e"]}, "q": {"V": ["u"]}}
    }"#;

    #[test]
    fn set_bundle_evaluates() {
        let l = load_bundle(SET).unwrap();
        let v = l.model().eval(&parse_formula("<>p").unwrap()).unwrap();
        assert_eq!(v.to_string(), "{0, 1}");
        assert_eq!(l.models.len(), 1);
    }

    #[test]
    fn graph_bundle_evaluates() {
        let l = load_bundle(GRAPH).unwrap();
        let v = l.model().eval(&parse_formula("~q").unwrap()).unwrap();
        assert_eq!(v.to_string(), "{V: [v], E: []}");
        assert!(l.model().is_topological());
    }

    #[test]
    fn enumerated_universe() {
        let text = SET.replace(
            r#""valuation""#,
            r#""enumerate_valuations": ["p"], "valuation""#,
        );
        let l = load_bundle(&text).unwrap();
        assert_eq!(l.models.len(), 8);
        let u = l.universe().unwrap();
        assert_eq!(
            u.mod_set(&parse_formula("p").unwrap())
                .unwrap()
                .count_ones(..),
            1
        );
    }

    #[test]
    fn overlays() {
        let text = SET.replace(
            r#""valuation""#,
            r#""universe": [{"name": "A", "valuation": {"p": ["0","1","2"]}}, {"name": "B", "valuation": {}}], "valuation""#,
        );
        let u = load_bundle(&text).unwrap().universe().unwrap();
        assert_eq!(
            u.names(&u.mod_set(&parse_formula("p").unwrap()).unwrap()),
            vec!["A"]
        );
    }

    #[test]
    fn families_bundle() {
        let text = r#"{
            "carriers": ["0", "1"],
            "structuring": {"families": {"0": [["0"], ["0","1"]], "1": [["0","1"]]}},
            "valuation": {"p": ["0"]}
        }"#;
        let l = load_bundle(text).unwrap();
        assert_eq!(
            l.model()
                .eval(&parse_formula("[]p").unwrap())
                .unwrap()
                .to_string(),
            "{0}"
        );
    }

    #[test]
    fn located_errors() {
        let e = load_bundle(&SET.replace(r#"["1","2"]"#, r#"["1","9"]"#))
            .unwrap_err()
            .to_string();
        assert!(e.contains("structuring.pairs[4]"), "{e}");
        let e = load_bundle(&SET.replace(r#""q": ["1", "2"]"#, r#""q": ["7"]"#))
            .unwrap_err()
            .to_string();
        assert!(e.contains("valuation.q"), "{e}");
        let e = load_bundle(&SET.replacen('{', r#"{"version": 2,"#, 1))
            .unwrap_err()
            .to_string();
        assert!(e.starts_with("invalid bundle: version"), "{e}");
        let e = load_bundle("{\n  \"carriers\": [\n")
            .unwrap_err()
            .to_string();
        assert!(e.contains("line"), "{e}");
        let non_reflexive = r#"{"carriers": ["0","1"], "structuring": {"pairs": [["0","1"]]}}"#;
        let e = load_bundle(non_reflexive).unwrap_err().to_string();
        assert!(e.contains("structuring"), "{e}");
    }

    #[test]
    fn non_closed_region_on_graph() {
        let bad_region = GRAPH.replace(r#""q": {"V": ["u"]}"#, r#""q": {"E": ["e"]}"#);
        let e = load_bundle(&bad_region).unwrap_err().to_string();
        assert!(e.contains("valuation.q"), "{e}");
    }

    #[test]
    fn derivation_json() {
        let d = load_derivation(r#"{"rule": "Axiom-T", "sequent": "[]p |- p", "children": []}"#)
            .unwrap();
        assert_eq!(d.children.len(), 0);
        assert!(
            load_derivation(r#"{"rule": "Nope", "sequent": "p |- p", "children": []}"#).is_err()
        );
    }
}
