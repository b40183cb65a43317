//! Finite presentations of categories, functors and natural transformations.
//!
//! A [`FinCategory`] stores its composition table explicitly. Object and
//! morphism ids are opaque strings; internally everything is indexed so the
//! exhaustive law checks stay cheap at the sizes used throughout the crate.

mod functor;
mod grade;
mod law;
mod nat;
mod preorder;
mod product;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::par::{self, Execution};

pub use functor::{compose_functors, identity_functor, thin_functor, validate_functor, FinFunctor};
pub use grade::{grade_extend, grade_truncate, DEFAULT_PATH_BOUND};
pub use law::{Law, LawReport, Violation};
pub use nat::{identity_transformation, validate_nat_trans, FinNatTrans};
pub use preorder::{thin_from_preorder, two_point, Preorder};
pub use product::{product_category, projection, terminal_category};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("path closure exceeds length bound {bound}: {detail}")]
    Truncation { bound: usize, detail: String },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

/// Enumeration caps for exhaustive checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_objects: usize,
    pub max_morphisms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_objects: 6,
            max_morphisms: 64,
        }
    }
}

impl Limits {
    pub fn admit(&self, c: &FinCategory, what: &str) -> Result<()> {
        if c.num_objects() > self.max_objects || c.num_morphisms() > self.max_morphisms {
            return Err(CatError::Capacity(format!(
                "{what} has {} objects and {} morphisms; cap is {} / {}",
                c.num_objects(),
                c.num_morphisms(),
                self.max_objects,
                self.max_morphisms
            )));
        }
        Ok(())
    }
}

pub type Result<T, E = CatError> = std::result::Result<T, E>;

/// A morphism record: id, endpoints (object indices) and mapping-hierarchy grade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub source: usize,
    pub target: usize,
    pub grade: u32,
}

/// Morphism declaration by object ids, used when constructing from raw tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismSpec {
    pub id: String,
    pub source: String,
    pub target: String,
    pub grade: u32,
}

impl MorphismSpec {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>, grade: u32) -> Self {
        MorphismSpec {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            grade,
        }
    }
}

/// A finite category with an explicit (partial) composition table.
#[derive(Debug, Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    obj_index: HashMap<String, usize>,
    mor_index: HashMap<String, usize>,
    homs: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

impl Eq for FinCategory {}

impl FinCategory {
    /// Build from raw tables. Dangling or duplicate ids are rejected; the
    /// category laws are *not* checked here (see [`validate_category`]).
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<MorphismSpec>,
        identities: Vec<(String, String)>,
        compose: Vec<(String, String, String)>,
    ) -> Result<Self> {
        let mut obj_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(CatError::Malformed(format!("duplicate object id {o:?}")));
            }
        }
        let mut mor_index = HashMap::new();
        let mut mors = Vec::with_capacity(morphisms.len());
        for (i, m) in morphisms.into_iter().enumerate() {
            let source = *obj_index
                .get(&m.source)
                .ok_or_else(|| CatError::Malformed(format!("morphism {:?} has undeclared source {:?}", m.id, m.source)))?;
            let target = *obj_index
                .get(&m.target)
                .ok_or_else(|| CatError::Malformed(format!("morphism {:?} has undeclared target {:?}", m.id, m.target)))?;
            if mor_index.insert(m.id.clone(), i).is_some() {
                return Err(CatError::Malformed(format!("duplicate morphism id {:?}", m.id)));
            }
            mors.push(Morphism {
                id: m.id,
                source,
                target,
                grade: m.grade,
            });
        }
        let mut ids = vec![usize::MAX; objects.len()];
        for (o, m) in identities {
            let oi = *obj_index
                .get(&o)
                .ok_or_else(|| CatError::Malformed(format!("identity declared for undeclared object {o:?}")))?;
            let mi = *mor_index
                .get(&m)
                .ok_or_else(|| CatError::Malformed(format!("identity of {o:?} is undeclared morphism {m:?}")))?;
            ids[oi] = mi;
        }
        if let Some(missing) = ids.iter().position(|&m| m == usize::MAX) {
            return Err(CatError::Malformed(format!("object {:?} has no identity", objects[missing])));
        }
        let mut table = HashMap::new();
        for (g, f, h) in compose {
            let lookup = |id: &String| {
                mor_index
                    .get(id)
                    .copied()
                    .ok_or_else(|| CatError::Malformed(format!("composition table references undeclared morphism {id:?}")))
            };
            let (gi, fi, hi) = (lookup(&g)?, lookup(&f)?, lookup(&h)?);
            if table.insert((gi, fi), hi).is_some() {
                return Err(CatError::Malformed(format!("composite {g}∘{f} declared twice")));
            }
        }
        Ok(Self::assemble(objects, mors, ids, table))
    }

    /// Trusted constructor from already-indexed parts.
    pub(crate) fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Self {
        let obj_index = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let mor_index = morphisms.iter().enumerate().map(|(i, m)| (m.id.clone(), i)).collect();
        let n = objects.len();
        let mut homs = vec![vec![Vec::new(); n]; n];
        for (i, m) in morphisms.iter().enumerate() {
            homs[m.source][m.target].push(i);
        }
        FinCategory {
            objects,
            morphisms,
            identities,
            compose,
            obj_index,
            mor_index,
            homs,
        }
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

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn morphism(&self, i: usize) -> &Morphism {
        &self.morphisms[i]
    }

    pub fn mor_id(&self, i: usize) -> &str {
        &self.morphisms[i].id
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.obj_index.get(id).copied()
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.mor_index.get(id).copied()
    }

    pub fn source(&self, m: usize) -> usize {
        self.morphisms[m].source
    }

    pub fn target(&self, m: usize) -> usize {
        self.morphisms[m].target
    }

    pub fn grade(&self, m: usize) -> u32 {
        self.morphisms[m].grade
    }

    pub fn identity(&self, obj: usize) -> usize {
        self.identities[obj]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        let mor = &self.morphisms[m];
        mor.source == mor.target && self.identities[mor.source] == m
    }

    /// `g ∘ f`, if the table defines it.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// Compose a path given in diagrammatic order (first morphism first).
    pub fn compose_path(&self, path: &[usize]) -> Option<usize> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &next| self.compose(next, acc))
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x][y]
    }

    pub fn max_grade(&self) -> u32 {
        self.morphisms.iter().map(|m| m.grade).max().unwrap_or(0)
    }

    /// All `(g, f, g∘f)` entries, sorted by morphism index.
    pub fn compose_entries(&self) -> Vec<(usize, usize, usize)> {
        let mut v: Vec<_> = self.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        v.sort_unstable();
        v
    }

    pub(crate) fn compose_table(&self) -> &HashMap<(usize, usize), usize> {
        &self.compose
    }

    pub(crate) fn identities(&self) -> &[usize] {
        &self.identities
    }

    /// Morphisms with the given source.
    pub fn out_of(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.homs[x].iter().flatten().copied()
    }

    /// Identity-to-identity map from object ids to identity morphism ids.
    pub fn identity_table(&self) -> BTreeMap<String, String> {
        self.objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), self.morphisms[self.identities[i]].id.clone()))
            .collect()
    }

    /// The discrete category on the given objects.
    pub fn discrete<I, S>(objects: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut b = CategoryBuilder::new();
        for o in objects {
            b.object(o);
        }
        b.build().expect("discrete category is well formed")
    }
}

/// Incremental construction of a [`FinCategory`].
///
/// Identities `id_<object>` and their composites are added automatically;
/// non-identity composites must be declared with [`CategoryBuilder::compose`].
#[derive(Debug, Default, Clone)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<MorphismSpec>,
    compose: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, id: impl Into<String>) -> &mut Self {
        self.objects.push(id.into());
        self
    }

    pub fn morphism(
        &mut self,
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        grade: u32,
    ) -> &mut Self {
        self.morphisms.push(MorphismSpec::new(id, source, target, grade));
        self
    }

    pub fn compose(&mut self, g: impl Into<String>, f: impl Into<String>, h: impl Into<String>) -> &mut Self {
        self.compose.push((g.into(), f.into(), h.into()));
        self
    }

    pub fn build(&self) -> Result<FinCategory> {
        let mut morphisms: Vec<MorphismSpec> = self
            .objects
            .iter()
            .map(|o| MorphismSpec::new(format!("id_{o}"), o.clone(), o.clone(), 0))
            .collect();
        morphisms.extend(self.morphisms.iter().cloned());
        let identities: Vec<(String, String)> = self.objects.iter().map(|o| (o.clone(), format!("id_{o}"))).collect();
        let mut compose = self.compose.clone();
        for m in &morphisms {
            let id_s = format!("id_{}", m.source);
            let id_t = format!("id_{}", m.target);
            compose.push((id_t.clone(), m.id.clone(), m.id.clone()));
            if id_s != m.id {
                compose.push((m.id.clone(), id_s, m.id.clone()));
            }
        }
        compose.sort();
        compose.dedup();
        FinCategory::new(self.objects.clone(), morphisms, identities, compose)
    }
}

/// Check identity, composition-closure, associativity and grade laws.
pub fn validate_category(c: &FinCategory) -> LawReport {
    validate_category_with(c, Execution::default())
}

pub fn validate_category_with(c: &FinCategory, exec: Execution) -> LawReport {
    let mut violations = Vec::new();
    for (x, &id) in c.identities.iter().enumerate() {
        let m = &c.morphisms[id];
        if m.source != x || m.target != x {
            violations.push(Violation::new(Law::Identity, [c.mor_id(id), c.object(x)], "identity has wrong endpoints"));
        }
        if m.grade != 0 {
            violations.push(Violation::new(Law::Grade, [c.mor_id(id)], "identity must have grade 0"));
        }
    }
    for (&(g, f), &h) in &c.compose {
        if c.target(f) != c.source(g) {
            violations.push(Violation::new(
                Law::Composition,
                [c.mor_id(g), c.mor_id(f)],
                "composite defined on a non-composable pair",
            ));
        } else if c.source(h) != c.source(f) || c.target(h) != c.target(g) {
            violations.push(Violation::new(
                Law::Composition,
                [c.mor_id(g), c.mor_id(f), c.mor_id(h)],
                "composite has wrong endpoints",
            ));
        }
    }
    let per_f = par::map_range(exec, c.num_morphisms(), |f| check_from(c, f));
    violations.extend(per_f.into_iter().flatten());
    LawReport::new(violations)
}

fn check_from(c: &FinCategory, f: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let (x, y) = (c.source(f), c.target(f));
    let id_y = c.identity(y);
    let id_x = c.identity(x);
    if c.compose(id_y, f) != Some(f) {
        out.push(Violation::new(Law::Identity, [c.mor_id(id_y), c.mor_id(f)], ""));
    }
    if c.compose(f, id_x) != Some(f) {
        out.push(Violation::new(Law::Identity, [c.mor_id(f), c.mor_id(id_x)], ""));
    }
    for g in c.out_of(y) {
        let Some(gf) = c.compose(g, f) else {
            if !c.is_identity(g) {
                out.push(Violation::new(Law::Composition, [c.mor_id(g), c.mor_id(f)], "composite undefined"));
            }
            continue;
        };
        let expected = c.grade(g).max(c.grade(f));
        if c.grade(gf) != expected {
            out.push(Violation::new(
                Law::Grade,
                [c.mor_id(g), c.mor_id(f)],
                format!("grade {} but max of factors is {expected}", c.grade(gf)),
            ));
        }
        for h in c.out_of(c.target(g)) {
            let (Some(hg), Some(h_gf)) = (c.compose(h, g), c.compose(h, gf)) else {
                continue;
            };
            match c.compose(hg, f) {
                Some(hg_f) if hg_f == h_gf => {}
                Some(_) => out.push(Violation::new(Law::Associativity, [c.mor_id(h), c.mor_id(g), c.mor_id(f)], "")),
                None => {}
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_category() -> FinCategory {
        let mut b = CategoryBuilder::new();
        b.object("a").object("b").morphism("f", "a", "b", 1);
        b.build().unwrap()
    }

    #[test]
    fn single_object_is_valid() {
        let c = FinCategory::discrete(["x"]);
        assert!(validate_category(&c).is_ok());
        assert_eq!(c.num_morphisms(), 1);
    }

    #[test]
    fn missing_identity_composite_is_named() {
        let c = FinCategory::new(
            vec!["a".into(), "b".into()],
            vec![
                MorphismSpec::new("id_a", "a", "a", 0),
                MorphismSpec::new("id_b", "b", "b", 0),
                MorphismSpec::new("f", "a", "b", 1),
            ],
            vec![("a".into(), "id_a".into()), ("b".into(), "id_b".into())],
            vec![
                ("id_a".into(), "id_a".into(), "id_a".into()),
                ("id_b".into(), "id_b".into(), "id_b".into()),
                ("f".into(), "id_a".into(), "f".into()),
            ],
        )
        .unwrap();
        let report = validate_category(&c);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].to_string(), "identity law (id_b, f)");
    }

    #[test]
    fn dangling_reference_is_malformed_not_a_law_violation() {
        let err = FinCategory::new(
            vec!["a".into()],
            vec![MorphismSpec::new("id_a", "a", "zz", 0)],
            vec![("a".into(), "id_a".into())],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, CatError::Malformed(_)));
    }

    #[test]
    fn chain_with_brute_force_composition_is_valid() {
        // Oracle: compose every path in the chain a -> b -> c -> d by hand.
        let objs = ["a", "b", "c", "d"];
        let mut b = CategoryBuilder::new();
        for o in objs {
            b.object(o);
        }
        let name = |i: usize, j: usize| format!("{}{}", objs[i], objs[j]);
        for i in 0..4 {
            for j in i + 1..4 {
                b.morphism(name(i, j), objs[i], objs[j], 1);
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                for k in j + 1..4 {
                    b.compose(name(j, k), name(i, j), name(i, k));
                }
            }
        }
        let c = b.build().unwrap();
        assert!(validate_category(&c).is_ok(), "{}", validate_category(&c));
        assert_eq!(c.hom(0, 3).len(), 1);
    }

    #[test]
    fn broken_associativity_is_detected() {
        // (s∘s)∘s = t∘s = s but s∘(s∘s) = s∘t = t
        let mut b = CategoryBuilder::new();
        b.object("o").morphism("s", "o", "o", 1).morphism("t", "o", "o", 1);
        b.compose("s", "s", "t").compose("s", "t", "t").compose("t", "s", "s").compose("t", "t", "t");
        let c = b.build().unwrap();
        assert!(validate_category(&c).has(Law::Associativity));
    }

    #[test]
    fn grade_of_composite_is_max() {
        let mut b = CategoryBuilder::new();
        b.object("a").object("b").object("c");
        b.morphism("f", "a", "b", 1).morphism("g", "b", "c", 2).morphism("gf", "a", "c", 1);
        b.compose("g", "f", "gf");
        let c = b.build().unwrap();
        let r = validate_category(&c);
        assert!(r.has(Law::Grade), "{r}");
    }

    #[test]
    fn arrow_category_homs() {
        let c = arrow_category();
        assert_eq!(c.hom(0, 1), &[2]);
        assert!(c.hom(1, 0).is_empty());
        assert_eq!(c.compose_path(&[c.identity(0), 2, c.identity(1)]), Some(2));
    }
}
