use super::{CatError, FinFunctor, Law, LawReport, Result, Violation};

/// A natural transformation between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinNatTrans {
    pub name: String,
    pub source: FinFunctor,
    pub target: FinFunctor,
    components: Vec<usize>,
}

impl FinNatTrans {
    pub fn from_map<'a, I>(name: impl Into<String>, source: FinFunctor, target: FinFunctor, components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let name = name.into();
        let dom = source.source.clone();
        let cod = source.target.clone();
        let mut comps = vec![usize::MAX; dom.num_objects()];
        for (x, m) in components {
            let xi = dom
                .object_index(x)
                .ok_or_else(|| CatError::Malformed(format!("{name}: component at undeclared object {x:?}")))?;
            let mi = cod
                .morphism_index(m)
                .ok_or_else(|| CatError::Malformed(format!("{name}: component {m:?} is not a morphism of the target")))?;
            comps[xi] = mi;
        }
        Self::from_indices(name, source, target, comps)
    }

    pub fn from_indices(name: impl Into<String>, source: FinFunctor, target: FinFunctor, components: Vec<usize>) -> Result<Self> {
        let name = name.into();
        if source.source != target.source || source.target != target.target {
            return Err(CatError::Precondition(format!("{name}: functors {} and {} are not parallel", source.name, target.name)));
        }
        if components.len() != source.source.num_objects() {
            return Err(CatError::Malformed(format!("{name}: component vector has wrong length")));
        }
        if let Some(x) = components.iter().position(|&m| m >= source.target.num_morphisms()) {
            return Err(CatError::Malformed(format!(
                "{name}: missing component at {:?}",
                source.source.object(x)
            )));
        }
        Ok(FinNatTrans {
            name,
            source,
            target,
            components,
        })
    }

    pub fn component(&self, x: usize) -> usize {
        self.components[x]
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn with_component(&self, x: usize, m: usize) -> Self {
        let mut out = self.clone();
        out.components[x] = m;
        out
    }
}

pub fn identity_transformation(f: &FinFunctor) -> FinNatTrans {
    let comps = (0..f.source.num_objects()).map(|x| f.target.identity(f.obj(x))).collect();
    FinNatTrans::from_indices(format!("id_{}", f.name), f.clone(), f.clone(), comps).expect("identity components are total")
}

/// Check component typing and every naturality square.
pub fn validate_nat_trans(a: &FinNatTrans) -> LawReport {
    let (f, g) = (&a.source, &a.target);
    let (s, t) = (&*f.source, &*f.target);
    let mut out = Vec::new();
    for x in 0..s.num_objects() {
        let m = a.component(x);
        if t.source(m) != f.obj(x) || t.target(m) != g.obj(x) {
            out.push(Violation::new(
                Law::ComponentTyping,
                [s.object(x), t.mor_id(m)],
                format!("expected {} -> {}", t.object(f.obj(x)), t.object(g.obj(x))),
            ));
        }
    }
    if !out.is_empty() {
        return LawReport::new(out);
    }
    for (m, mor) in s.morphisms().iter().enumerate() {
        let left = t.compose(g.mor(m), a.component(mor.source));
        let right = t.compose(a.component(mor.target), f.mor(m));
        if left.is_none() || left != right {
            out.push(Violation::new(
                Law::Naturality,
                [s.mor_id(m)],
                format!("square at {} -> {} does not commute", s.object(mor.source), s.object(mor.target)),
            ));
        }
    }
    LawReport::new(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cat::{identity_functor, thin_from_preorder, CategoryBuilder, FinCategory, Preorder};

    fn c1() -> Arc<FinCategory> {
        Arc::new(thin_from_preorder(&Preorder::total(["Empty", "NonEmpty"])).unwrap())
    }

    #[test]
    fn identity_transformation_is_natural() {
        let f = identity_functor(c1());
        assert!(validate_nat_trans(&identity_transformation(&f)).is_ok());
    }

    #[test]
    fn mistyped_component_is_reported() {
        let f = identity_functor(c1());
        let bad = FinNatTrans::from_map(
            "k",
            f.clone(),
            f,
            [("Empty", "Empty<=NonEmpty"), ("NonEmpty", "id_NonEmpty")],
        )
        .unwrap();
        assert!(validate_nat_trans(&bad).has(Law::ComponentTyping));
    }

    #[test]
    fn swapped_components_break_the_square() {
        // Constant functors C1 -> D at p and q, where D has parallel u, v: p -> q.
        // Oracle: the square at Empty<=NonEmpty reads id_q ∘ a_Empty = a_NonEmpty ∘ id_p.
        let c = c1();
        let mut b = CategoryBuilder::new();
        b.object("p").object("q").morphism("u", "p", "q", 1).morphism("v", "p", "q", 1);
        let d = Arc::new(b.build().unwrap());
        let constant = |name: &str, o: &str| {
            let id = format!("id_{o}");
            FinFunctor::from_maps(
                name,
                c.clone(),
                d.clone(),
                [("Empty", o), ("NonEmpty", o)],
                [("id_Empty", id.as_str()), ("id_NonEmpty", id.as_str()), ("Empty<=NonEmpty", id.as_str())],
            )
            .unwrap()
        };
        let (p, q) = (constant("P", "p"), constant("Q", "q"));
        let good = FinNatTrans::from_map("a", p.clone(), q.clone(), [("Empty", "u"), ("NonEmpty", "u")]).unwrap();
        assert!(validate_nat_trans(&good).is_ok());
        let swapped = FinNatTrans::from_map("a", p, q, [("Empty", "u"), ("NonEmpty", "v")]).unwrap();
        let r = validate_nat_trans(&swapped);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].law, Law::Naturality);
        assert_eq!(r.violations[0].ids, vec!["Empty<=NonEmpty".to_string()]);
    }

    #[test]
    fn missing_component_is_malformed() {
        let f = identity_functor(c1());
        let err = FinNatTrans::from_map("k", f.clone(), f, [("Empty", "id_Empty")]).unwrap_err();
        assert!(matches!(err, CatError::Malformed(_)));
    }
}
