//! Adjunctions between finite categories, their monads, and exhaustive law checks.

mod builtin;
mod element_monad;
pub mod finset;
mod monad;

use std::sync::Arc;

use thiserror::Error;

pub use crate::cat::Limits;
use crate::cat::{validate_functor, validate_nat_trans, CatError, FinCategory, FinFunctor, FinNatTrans, Law, LawReport, Violation};
use crate::par::{self, Execution};

pub use builtin::{builtin_adjunction, c0, c1, definability, definability_preorder, discrete_order, emptiness, identity_adjunction, BuiltinParams};
pub use element_monad::{ListMonad, Value};
pub use monad::{check_idempotent, check_monad_laws, monad_of, Idempotence, IdempotenceCheck, Monad};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdjunctionError {
    #[error("unknown builtin adjunction {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// `F ⊣ G` with `F: C → D`, `G: D → C`, unit `η: Id ⇒ GF` and counit `ε: FG ⇒ Id`.
///
/// Unit and counit are stored as component vectors (indexed by objects of
/// `C` and `D`); typing is part of what [`verify_adjunction`] checks.
#[derive(Debug, Clone)]
pub struct Adjunction {
    pub name: String,
    pub left: FinFunctor,
    pub right: FinFunctor,
    pub unit: Vec<usize>,
    pub counit: Vec<usize>,
}

impl Adjunction {
    pub fn new(name: impl Into<String>, left: FinFunctor, right: FinFunctor, unit: Vec<usize>, counit: Vec<usize>) -> Result<Self, AdjunctionError> {
        let name = name.into();
        if *left.source != *right.target || *left.target != *right.source {
            return Err(CatError::Precondition(format!("{name}: functors do not run in opposite directions")).into());
        }
        if unit.len() != left.source.num_objects() || counit.len() != left.target.num_objects() {
            return Err(CatError::Malformed(format!("{name}: unit or counit is missing components")).into());
        }
        if unit.iter().any(|&m| m >= left.source.num_morphisms()) || counit.iter().any(|&m| m >= left.target.num_morphisms()) {
            return Err(CatError::Malformed(format!("{name}: unit or counit component out of range")).into());
        }
        Ok(Adjunction {
            name,
            left,
            right,
            unit,
            counit,
        })
    }

    /// The domain `C` of the left adjoint.
    pub fn lower(&self) -> &Arc<FinCategory> {
        &self.left.source
    }

    /// The codomain `D` of the left adjoint.
    pub fn upper(&self) -> &Arc<FinCategory> {
        &self.left.target
    }

    pub fn unit_transformation(&self) -> Result<FinNatTrans, CatError> {
        let id = crate::cat::identity_functor(self.lower().clone());
        let gf = crate::cat::compose_functors(&self.right, &self.left)?;
        FinNatTrans::from_indices("eta", id, gf, self.unit.clone())
    }

    pub fn counit_transformation(&self) -> Result<FinNatTrans, CatError> {
        let id = crate::cat::identity_functor(self.upper().clone());
        let fg = crate::cat::compose_functors(&self.left, &self.right)?;
        FinNatTrans::from_indices("epsilon", fg, id, self.counit.clone())
    }

    /// The transpose `φ(f) = G f ∘ η_x` of `f: F x → a`.
    pub fn transpose(&self, x: usize, f: usize) -> Option<usize> {
        self.lower().compose(self.right.mor(f), self.unit[x])
    }
}

/// Check functor laws, naturality of unit and counit, both triangle
/// identities and the hom-set bijection `φ` with its naturality.
pub fn verify_adjunction(adj: &Adjunction, limits: Limits) -> Result<LawReport, AdjunctionError> {
    verify_adjunction_with(adj, limits, Execution::default())
}

pub fn verify_adjunction_with(adj: &Adjunction, limits: Limits, exec: Execution) -> Result<LawReport, AdjunctionError> {
    let (c, d) = (adj.lower().clone(), adj.upper().clone());
    limits.admit(&c, "lower category")?;
    limits.admit(&d, "upper category")?;
    let (f, g) = (&adj.left, &adj.right);

    let mut report = validate_functor(f).merge(validate_functor(g));
    report = report.merge(validate_nat_trans(&adj.unit_transformation()?));
    report = report.merge(validate_nat_trans(&adj.counit_transformation()?));
    if report.has(Law::ComponentTyping) || report.has(Law::FunctorTyping) {
        // The remaining checks assume well-typed data.
        return Ok(report);
    }

    let mut out = Vec::new();
    for x in 0..c.num_objects() {
        let fx = f.obj(x);
        let lhs = d.compose(adj.counit[fx], f.mor(adj.unit[x]));
        if lhs != Some(d.identity(fx)) {
            out.push(Violation::new(Law::Triangle, [c.object(x), "εF∘Fη"], format!("not the identity of {}", d.object(fx))));
        }
    }
    for a in 0..d.num_objects() {
        let ga = g.obj(a);
        let lhs = c.compose(g.mor(adj.counit[a]), adj.unit[ga]);
        if lhs != Some(c.identity(ga)) {
            out.push(Violation::new(Law::Triangle, [d.object(a), "Gε∘ηG"], format!("not the identity of {}", c.object(ga))));
        }
    }

    let per_x = par::map_range(exec, c.num_objects(), |x| hom_bijection_at(adj, x));
    out.extend(per_x.into_iter().flatten());
    Ok(report.merge(LawReport::new(out)))
}

fn hom_bijection_at(adj: &Adjunction, x: usize) -> Vec<Violation> {
    let (c, d) = (adj.lower(), adj.upper());
    let (f, g) = (&adj.left, &adj.right);
    let fx = f.obj(x);
    let mut out = Vec::new();
    for a in 0..d.num_objects() {
        let left = d.hom(fx, a);
        let right = c.hom(x, g.obj(a));
        if left.len() != right.len() {
            out.push(Violation::new(
                Law::HomBijection,
                [c.object(x), d.object(a)],
                format!("|Hom(F{0}, {1})| = {2} but |Hom({0}, G{1})| = {3}", c.object(x), d.object(a), left.len(), right.len()),
            ));
            continue;
        }
        let mut images: Vec<usize> = Vec::with_capacity(left.len());
        for &m in left {
            match adj.transpose(x, m) {
                Some(t) if c.target(t) == g.obj(a) => images.push(t),
                _ => out.push(Violation::new(Law::HomBijection, [c.object(x), d.mor_id(m)], "transpose undefined")),
            }
        }
        images.sort_unstable();
        images.dedup();
        if images.len() != right.len() {
            out.push(Violation::new(
                Law::HomBijection,
                [c.object(x), d.object(a)],
                "transposition is not injective",
            ));
        }
        // naturality in the second variable: φ(k∘m) = Gk∘φ(m)
        for &m in left {
            for k in d.out_of(a) {
                let lhs = d.compose(k, m).and_then(|km| adj.transpose(x, km));
                let rhs = adj.transpose(x, m).and_then(|t| c.compose(g.mor(k), t));
                if lhs != rhs {
                    out.push(Violation::new(Law::HomBijection, [d.mor_id(m), d.mor_id(k)], "not natural in the upper variable"));
                }
            }
        }
    }
    // naturality in the first variable: φ(m∘Fh) = φ(m)∘h for h: x' → x
    for h in (0..c.num_morphisms()).filter(|&h| c.target(h) == x) {
        let xp = c.source(h);
        for m in d.out_of(fx) {
            let lhs = d.compose(m, f.mor(h)).and_then(|mh| adj.transpose(xp, mh));
            let rhs = adj.transpose(x, m).and_then(|t| c.compose(t, h));
            if lhs != rhs {
                out.push(Violation::new(Law::HomBijection, [c.mor_id(h), d.mor_id(m)], "not natural in the lower variable"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg::{build_grid, Axis, Delta, Token};

    fn grid(deltas: &[Delta]) -> crate::hsg::Grid {
        let tokens = deltas
            .iter()
            .enumerate()
            .map(|(i, &d)| Token::new(format!("x{i}"), [("time", i as i64)], d))
            .collect();
        build_grid(vec![Axis::new("time", 0..deltas.len() as i64)], tokens).unwrap()
    }

    #[test]
    fn definability_maps_tokens_by_delta() {
        let adj = definability(&grid(&[Delta::Bot, Delta::Top, Delta::Top]));
        let images: Vec<&str> = ["x0", "x1", "x2"].iter().map(|t| adj.left.apply_object(t).unwrap()).collect();
        assert_eq!(images, vec!["Undef", "Define", "Define"]);
        assert!(verify_adjunction(&adj, Limits::default()).unwrap().is_ok());
    }

    #[test]
    fn definability_adjoins_missing_representative() {
        let adj = definability(&grid(&[Delta::Top, Delta::Top]));
        assert_eq!(adj.right.apply_object("Undef"), Some("⊥_δ"));
        assert!(verify_adjunction(&adj, Limits::default()).unwrap().is_ok());
    }

    #[test]
    fn emptiness_right_adjoint_values() {
        let adj = emptiness(3, Limits::default()).unwrap();
        assert_eq!(adj.right.apply_object("Empty"), Some("0"));
        assert_eq!(adj.right.apply_object("NonEmpty"), Some("1"));
        assert!(verify_adjunction(&adj, Limits::default()).unwrap().is_ok());
    }

    #[test]
    fn discrete_order_is_antichain() {
        let adj = discrete_order(2, Limits::default()).unwrap();
        assert_eq!(adj.left.apply_object("2"), Some("P2[]"));
        assert!(verify_adjunction(&adj, Limits::default()).unwrap().is_ok());
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(discrete_order(3, Limits::default()), Err(AdjunctionError::Cat(CatError::Capacity(_)))));
        assert!(matches!(emptiness(4, Limits::default()), Err(AdjunctionError::Cat(CatError::Capacity(_)))));
    }

    #[test]
    fn swapped_unit_component_breaks_a_triangle() {
        let mut adj = discrete_order(2, Limits::default()).unwrap();
        let c = adj.lower().clone();
        let two = c.object_index("2").unwrap();
        adj.unit[two] = c.morphism_index("2->2:[1,0]").unwrap();
        let r = verify_adjunction(&adj, Limits::default()).unwrap();
        assert!(r.has(Law::Triangle), "{r}");
        assert!(r.first(Law::Triangle).unwrap().ids.contains(&"P2[]".to_string()) || r.first(Law::Triangle).unwrap().ids.contains(&"2".to_string()));
    }

    #[test]
    fn sequential_and_parallel_reports_agree() {
        let adj = emptiness(3, Limits::default()).unwrap();
        let a = verify_adjunction_with(&adj, Limits::default(), Execution::Sequential).unwrap();
        let b = verify_adjunction_with(&adj, Limits::default(), Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
