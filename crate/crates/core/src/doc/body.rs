use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adjunction::{builtin_adjunction, Adjunction, AdjunctionError, BuiltinParams, Limits};
use crate::cat::{thin_from_preorder, CatError, CategoryBuilder, FinCategory, FinFunctor, Preorder};
use crate::hsg::{build_grid, Axis, Grid, GridError, Token};
use crate::jguard::{ExternalCriterion, QuasiMode};
use crate::kan::{SetValuedFunctor, Side};
use crate::neuro::WorldSpec;
use crate::registry::{AxiomPackage, Registry};
use crate::temporal::{DepGraph, TimeBinding};
use crate::tower::FinRing;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismBody {
    pub id: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub grade: u32,
}

/// Either a thin category (`order` pairs) or explicit morphisms with a
/// composition table of `[g, f, g∘f]` triples. Identities are implicit and
/// named `id_<object>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryBody {
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<[String; 2]>>,
    #[serde(default)]
    pub morphisms: Vec<MorphismBody>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

impl CategoryBody {
    pub fn build(&self) -> Result<FinCategory, CatError> {
        if let Some(order) = &self.order {
            if !self.morphisms.is_empty() || !self.compose.is_empty() {
                return Err(CatError::Malformed("a thin category takes `order` only".into()));
            }
            let mut pairs: Vec<(&str, &str)> = self.objects.iter().map(|o| (o.as_str(), o.as_str())).collect();
            pairs.extend(order.iter().map(|[a, b]| (a.as_str(), b.as_str())));
            return thin_from_preorder(&Preorder::new(self.objects.clone(), pairs)?);
        }
        let mut b = CategoryBuilder::new();
        for o in &self.objects {
            b.object(o.clone());
        }
        for m in &self.morphisms {
            b.morphism(m.id.clone(), m.source.clone(), m.target.clone(), m.grade);
        }
        for [g, f, h] in &self.compose {
            b.compose(g.clone(), f.clone(), h.clone());
        }
        b.build()
    }
}

/// Object and morphism assignments. A morphism may be omitted when the
/// target hom-set it must land in has exactly one element.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapBody {
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

impl MapBody {
    pub fn build(&self, name: &str, source: Arc<FinCategory>, target: Arc<FinCategory>) -> Result<FinFunctor, CatError> {
        let mut objs = Vec::with_capacity(source.num_objects());
        for x in source.objects() {
            let y = self
                .objects
                .get(x)
                .ok_or_else(|| CatError::Malformed(format!("{name}: object {x:?} is unmapped")))?;
            objs.push(target.object_index(y).ok_or_else(|| CatError::Malformed(format!("{name}: {y:?} is not an object of the target")))?);
        }
        let mut mors = Vec::with_capacity(source.num_morphisms());
        for m in 0..source.num_morphisms() {
            let id = source.mor_id(m);
            let image = match self.morphisms.get(id) {
                Some(g) => target
                    .morphism_index(g)
                    .ok_or_else(|| CatError::Malformed(format!("{name}: {g:?} is not a morphism of the target")))?,
                None => {
                    let (s, t) = (objs[source.source(m)], objs[source.target(m)]);
                    match target.hom(s, t) {
                        [only] => *only,
                        _ if source.is_identity(m) => target.identity(s),
                        _ => return Err(CatError::Malformed(format!("{name}: morphism {id:?} is unmapped"))),
                    }
                }
            };
            mors.push(image);
        }
        FinFunctor::from_indices(name, source, target, objs, mors)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorBody {
    pub source: CategoryBody,
    pub target: CategoryBody,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

impl FunctorBody {
    pub fn build(&self, name: &str) -> Result<FinFunctor, CatError> {
        let map = MapBody {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
        };
        map.build(name, Arc::new(self.source.build()?), Arc::new(self.target.build()?))
    }
}

/// A builtin (`builtin` plus `bound` or `grid`) or explicit tables.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjunctionBody {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<CategoryBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<CategoryBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<MapBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<MapBody>,
    /// Component per object of the lower category.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<BTreeMap<String, String>>,
    /// Component per object of the upper category.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<BTreeMap<String, String>>,
}

fn components(name: &str, c: &FinCategory, table: &BTreeMap<String, String>) -> Result<Vec<usize>, CatError> {
    c.objects()
        .iter()
        .map(|x| {
            let m = table.get(x).ok_or_else(|| CatError::Malformed(format!("{name}: no component at {x:?}")))?;
            c.morphism_index(m).ok_or_else(|| CatError::Malformed(format!("{name}: unknown morphism {m:?}")))
        })
        .collect()
}

impl AdjunctionBody {
    pub fn build(&self, name: &str, limits: Limits) -> Result<Adjunction, AdjunctionError> {
        if let Some(b) = &self.builtin {
            let params = match (&self.grid, self.bound) {
                (Some(g), None) => BuiltinParams::Grid(g.build().map_err(|e| CatError::Malformed(e.to_string()))?),
                (None, Some(n)) => BuiltinParams::Bound(n),
                _ => return Err(CatError::Malformed(format!("{name}: a builtin takes exactly one of `grid` and `bound`")).into()),
            };
            return builtin_adjunction(b, &params, limits);
        }
        let missing = || CatError::Malformed(format!("{name}: explicit adjunctions need lower, upper, left, right, unit and counit"));
        let (Some(lo), Some(up), Some(l), Some(r), Some(u), Some(cu)) = (&self.lower, &self.upper, &self.left, &self.right, &self.unit, &self.counit) else {
            return Err(missing().into());
        };
        let (c, d) = (Arc::new(lo.build()?), Arc::new(up.build()?));
        let left = l.build("F", c.clone(), d.clone())?;
        let right = r.build("G", d.clone(), c.clone())?;
        let unit = components("unit", &c, u)?;
        let counit = components("counit", &d, cu)?;
        Adjunction::new(name, left, right, unit, counit)
    }
}

/// Value sets per object and actions per non-identity morphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFunctorBody {
    pub sizes: BTreeMap<String, usize>,
    #[serde(default)]
    pub action: BTreeMap<String, Vec<usize>>,
}

impl SetFunctorBody {
    pub fn build(&self, source: Arc<FinCategory>) -> Result<SetValuedFunctor, CatError> {
        SetValuedFunctor::from_tables(
            source,
            self.sizes.iter().map(|(k, &v)| (k.as_str(), v)),
            self.action.iter().map(|(k, v)| (k.as_str(), v.clone())),
        )
    }
}

/// A Kan extension problem `F: C → Set` along `K: C → D`, optionally with a
/// proposed answer on `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramBody {
    pub source: CategoryBody,
    pub target: CategoryBody,
    pub along: MapBody,
    pub values: SetFunctorBody,
    pub side: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<SetFunctorBody>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBody {
    pub axes: Vec<Axis>,
    pub tokens: Vec<Token>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dep: Option<DepGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeBinding>,
}

impl GridBody {
    pub fn build(&self) -> Result<Grid, GridError> {
        build_grid(self.axes.clone(), self.tokens.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionBody {
    pub grid: GridBody,
    pub criterion: ExternalCriterion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<QuasiMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBody {
    pub ring: FinRing,
    /// Generators for the free-ring check.
    #[serde(default)]
    pub generators: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum TypedBody {
    Category(CategoryBody),
    Functor(FunctorBody),
    Adjunction(AdjunctionBody),
    Diagram(DiagramBody),
    Grid(GridBody),
    Criterion(CriterionBody),
    Registry(Registry),
    Package(AxiomPackage),
    Ring(RingBody),
    World(WorldSpec),
}
