use serde::Serialize;

use super::Adjunction;
use crate::cat::{
    compose_functors, identity_functor, validate_functor, validate_nat_trans, CatError, FinFunctor, FinNatTrans, Law, LawReport,
    Violation,
};

/// A monad on a finite category: endofunctor `T`, unit `η: Id ⇒ T`,
/// multiplication `μ: TT ⇒ T`, all by component index.
#[derive(Debug, Clone)]
pub struct Monad {
    pub name: String,
    pub functor: FinFunctor,
    pub unit: Vec<usize>,
    pub mult: Vec<usize>,
}

/// `T = G∘F`, unit `η`, multiplication `GεF`.
pub fn monad_of(adj: &Adjunction) -> Result<Monad, CatError> {
    let t = compose_functors(&adj.right, &adj.left)?;
    let mult = (0..adj.lower().num_objects())
        .map(|x| adj.right.mor(adj.counit[adj.left.obj(x)]))
        .collect();
    Ok(Monad {
        name: format!("T[{}]", adj.name),
        functor: t,
        unit: adj.unit.clone(),
        mult,
    })
}

/// Unit, associativity and naturality laws, checked componentwise.
pub fn check_monad_laws(m: &Monad) -> LawReport {
    let t = &m.functor;
    let c = &*t.source;
    let mut report = validate_functor(t);
    let tt = compose_functors(t, t).expect("T is an endofunctor");
    let id = identity_functor(t.source.clone());
    match FinNatTrans::from_indices("η", id, t.clone(), m.unit.clone()) {
        Ok(n) => report = report.merge(validate_nat_trans(&n)),
        Err(e) => return LawReport::new(vec![Violation::new(Law::ComponentTyping, ["η"], e.to_string())]),
    }
    match FinNatTrans::from_indices("μ", tt, t.clone(), m.mult.clone()) {
        Ok(n) => report = report.merge(validate_nat_trans(&n)),
        Err(e) => return LawReport::new(vec![Violation::new(Law::ComponentTyping, ["μ"], e.to_string())]),
    }
    if !report.is_ok() {
        return report;
    }
    let mut out = Vec::new();
    for x in 0..c.num_objects() {
        let tx = t.obj(x);
        let id_tx = c.identity(tx);
        if c.compose(m.mult[x], m.unit[tx]) != Some(id_tx) {
            out.push(Violation::new(Law::MonadUnit, [c.object(x), "μ∘ηT"], ""));
        }
        if c.compose(m.mult[x], t.mor(m.unit[x])) != Some(id_tx) {
            out.push(Violation::new(Law::MonadUnit, [c.object(x), "μ∘Tη"], ""));
        }
        let lhs = c.compose(m.mult[x], t.mor(m.mult[x]));
        let rhs = c.compose(m.mult[x], m.mult[tx]);
        if lhs.is_none() || lhs != rhs {
            out.push(Violation::new(Law::MonadAssociativity, [c.object(x)], ""));
        }
    }
    report.merge(LawReport::new(out))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotenceWitness {
    pub object: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Idempotence {
    pub idempotent: bool,
    pub witness: Option<IdempotenceWitness>,
}

/// Anything whose multiplication can be tested for invertibility.
pub trait IdempotenceCheck {
    fn idempotence(&self) -> Idempotence;
}

pub fn check_idempotent<M: IdempotenceCheck + ?Sized>(m: &M) -> Idempotence {
    m.idempotence()
}

impl IdempotenceCheck for Monad {
    /// Search `Hom(Tx, TTx)` for a two-sided inverse of each `μ_x`.
    fn idempotence(&self) -> Idempotence {
        let t = &self.functor;
        let c = &*t.source;
        for x in 0..c.num_objects() {
            let (tx, ttx) = (t.obj(x), t.obj(t.obj(x)));
            let mu = self.mult[x];
            let invertible = c.hom(tx, ttx).iter().any(|&inv| {
                c.compose(mu, inv) == Some(c.identity(tx)) && c.compose(inv, mu) == Some(c.identity(ttx))
            });
            if !invertible {
                return Idempotence {
                    idempotent: false,
                    witness: Some(IdempotenceWitness {
                        object: c.object(x).to_string(),
                        detail: format!("μ component {} has no inverse", c.mor_id(mu)),
                    }),
                };
            }
        }
        Idempotence {
            idempotent: true,
            witness: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjunction::{c1, definability, emptiness, identity_adjunction, Limits};
    use crate::hsg::{build_grid, Axis, Delta, Token};

    #[test]
    fn emptiness_monad_values() {
        let m = monad_of(&emptiness(3, Limits::default()).unwrap()).unwrap();
        let c = m.functor.source.clone();
        let t = |k: &str| c.object(m.functor.obj(c.object_index(k).unwrap())).to_string();
        assert_eq!(t("0"), "0");
        assert_eq!(t("1"), "1");
        assert_eq!(t("2"), "1");
        assert_eq!(t("3"), "1");
        assert!(check_monad_laws(&m).is_ok());
        assert!(check_idempotent(&m).idempotent);
    }

    #[test]
    fn definability_monad_collapses_to_representatives() {
        let g = build_grid(
            vec![Axis::new("t", [0i64, 1, 2])],
            vec![
                Token::new("a", [("t", 0i64)], Delta::Bot),
                Token::new("b", [("t", 1i64)], Delta::Top),
                Token::new("c", [("t", 2i64)], Delta::Top),
                Token::new("d", [("t", 0i64)], Delta::Bot),
            ],
        )
        .unwrap();
        let m = monad_of(&definability(&g)).unwrap();
        let c = m.functor.source.clone();
        let images: Vec<&str> = ["a", "b", "c", "d"]
            .iter()
            .map(|x| c.object(m.functor.obj(c.object_index(x).unwrap())))
            .collect();
        assert_eq!(images, vec!["a", "b", "b", "a"]);
        assert!(check_monad_laws(&m).is_ok());
        assert!(check_idempotent(&m).idempotent);
    }

    #[test]
    fn identity_monad() {
        let m = monad_of(&identity_adjunction(c1())).unwrap();
        assert_eq!(m.functor.object_map(), &[0, 1]);
        assert!(check_monad_laws(&m).is_ok());
        assert!(check_idempotent(&m).idempotent);
    }
}
