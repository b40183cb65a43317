use std::sync::Arc;

use super::{CatError, FinCategory, Law, LawReport, Result, Violation};

/// A functor between finite categories, stored as index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub name: String,
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    object_map: Vec<usize>,
    morphism_map: Vec<usize>,
}

impl FinFunctor {
    /// Build from id-level maps. Every source object and morphism must be
    /// mapped to a declared id of the target.
    pub fn from_maps<'a, O, M>(
        name: impl Into<String>,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        object_map: O,
        morphism_map: M,
    ) -> Result<Self>
    where
        O: IntoIterator<Item = (&'a str, &'a str)>,
        M: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let name = name.into();
        let mut objs = vec![usize::MAX; source.num_objects()];
        for (x, y) in object_map {
            let xi = source
                .object_index(x)
                .ok_or_else(|| CatError::Malformed(format!("functor {name}: undeclared source object {x:?}")))?;
            let yi = target
                .object_index(y)
                .ok_or_else(|| CatError::Malformed(format!("functor {name}: object {x:?} maps to undeclared {y:?}")))?;
            objs[xi] = yi;
        }
        let mut mors = vec![usize::MAX; source.num_morphisms()];
        for (f, g) in morphism_map {
            let fi = source
                .morphism_index(f)
                .ok_or_else(|| CatError::Malformed(format!("functor {name}: undeclared source morphism {f:?}")))?;
            let gi = target
                .morphism_index(g)
                .ok_or_else(|| CatError::Malformed(format!("functor {name}: morphism {f:?} maps to undeclared {g:?}")))?;
            mors[fi] = gi;
        }
        Self::from_indices(name, source, target, objs, mors)
    }

    /// Build from index maps, checking only totality and range.
    pub fn from_indices(
        name: impl Into<String>,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if object_map.len() != source.num_objects() {
            return Err(CatError::Malformed(format!("functor {name}: object map has wrong length")));
        }
        if morphism_map.len() != source.num_morphisms() {
            return Err(CatError::Malformed(format!("functor {name}: morphism map has wrong length")));
        }
        if let Some(x) = object_map.iter().position(|&y| y >= target.num_objects()) {
            return Err(CatError::Malformed(format!(
                "functor {name}: object {:?} is unmapped",
                source.object(x)
            )));
        }
        if let Some(f) = morphism_map.iter().position(|&g| g >= target.num_morphisms()) {
            return Err(CatError::Malformed(format!(
                "functor {name}: morphism {:?} is unmapped",
                source.mor_id(f)
            )));
        }
        Ok(FinFunctor {
            name,
            source,
            target,
            object_map,
            morphism_map,
        })
    }

    pub fn obj(&self, x: usize) -> usize {
        self.object_map[x]
    }

    pub fn mor(&self, f: usize) -> usize {
        self.morphism_map[f]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn morphism_map(&self) -> &[usize] {
        &self.morphism_map
    }

    /// Image of an object, by id.
    pub fn apply_object(&self, x: &str) -> Option<&str> {
        self.source.object_index(x).map(|i| self.target.object(self.obj(i)))
    }

    /// Image of a morphism, by id.
    pub fn apply_morphism(&self, f: &str) -> Option<&str> {
        self.source.morphism_index(f).map(|i| self.target.mor_id(self.mor(i)))
    }

    /// True when source and target are the same category value.
    pub fn is_endo(&self) -> bool {
        Arc::ptr_eq(&self.source, &self.target) || self.source == self.target
    }
}

pub fn identity_functor(c: Arc<FinCategory>) -> FinFunctor {
    let objs = (0..c.num_objects()).collect();
    let mors = (0..c.num_morphisms()).collect();
    FinFunctor::from_indices("Id", c.clone(), c, objs, mors).expect("identity maps are total")
}

/// The functor between thin categories induced by a monotone object map.
pub fn thin_functor(
    name: impl Into<String>,
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    object_map: Vec<usize>,
) -> Result<FinFunctor> {
    let name = name.into();
    let mut mors = Vec::with_capacity(source.num_morphisms());
    for m in source.morphisms() {
        let (x, y) = (object_map[m.source], object_map[m.target]);
        let hom = target.hom(x, y);
        if hom.len() != 1 {
            return Err(CatError::Precondition(format!(
                "{name}: {} has {} candidate images",
                m.id,
                hom.len()
            )));
        }
        mors.push(hom[0]);
    }
    FinFunctor::from_indices(name, source, target, object_map, mors)
}

/// `g ∘ f` (apply `f` first).
pub fn compose_functors(g: &FinFunctor, f: &FinFunctor) -> Result<FinFunctor> {
    if *f.target != *g.source {
        return Err(CatError::Precondition(format!(
            "cannot compose {} after {}: categories differ",
            g.name, f.name
        )));
    }
    let objs = f.object_map.iter().map(|&y| g.obj(y)).collect();
    let mors = f.morphism_map.iter().map(|&m| g.mor(m)).collect();
    FinFunctor::from_indices(format!("{}{}", g.name, f.name), f.source.clone(), g.target.clone(), objs, mors)
}

/// Check that `f` preserves identities, endpoints and composition.
pub fn validate_functor(f: &FinFunctor) -> LawReport {
    let (s, t) = (&*f.source, &*f.target);
    let mut out = Vec::new();
    for x in 0..s.num_objects() {
        let id = s.identity(x);
        if f.mor(id) != t.identity(f.obj(x)) {
            out.push(Violation::new(
                Law::FunctorIdentity,
                [s.mor_id(id)],
                format!("sent to {} instead of {}", t.mor_id(f.mor(id)), t.mor_id(t.identity(f.obj(x)))),
            ));
        }
    }
    for m in 0..s.num_morphisms() {
        let fm = f.mor(m);
        if t.source(fm) != f.obj(s.source(m)) || t.target(fm) != f.obj(s.target(m)) {
            out.push(Violation::new(
                Law::FunctorTyping,
                [s.mor_id(m)],
                format!(
                    "image {}: {} -> {} but endpoints map to {} -> {}",
                    t.mor_id(fm),
                    t.object(t.source(fm)),
                    t.object(t.target(fm)),
                    t.object(f.obj(s.source(m))),
                    t.object(f.obj(s.target(m)))
                ),
            ));
        }
    }
    for (g, h, gh) in s.compose_entries() {
        if t.compose(f.mor(g), f.mor(h)) != Some(f.mor(gh)) {
            out.push(Violation::new(Law::FunctorComposition, [s.mor_id(g), s.mor_id(h)], ""));
        }
    }
    LawReport::new(out)
}
