use serde::Serialize;

use super::comma::comma_category;
use super::limits::finset_colimit;
use super::SetValuedFunctor;
use crate::cat::{CatError, FinFunctor, Limits};

/// A square `P --p--> A`, `P --q--> B`, `A --u--> D`, `B --v--> D` with `u∘p = v∘q`.
#[derive(Debug, Clone)]
pub struct Square {
    pub p: FinFunctor,
    pub q: FinFunctor,
    pub u: FinFunctor,
    pub v: FinFunctor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub anchor: String,
    /// `|Lan_q(F∘p)(b)|`
    pub left: usize,
    /// `|(Lan_u F)(v b)|`
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeckChevalleyReport {
    pub mismatches: Vec<Mismatch>,
}

impl BeckChevalleyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl Square {
    fn check(&self) -> Result<(), CatError> {
        let Square { p, q, u, v } = self;
        if *p.source != *q.source || *p.target != *u.source || *q.target != *v.source || *u.target != *v.target {
            return Err(CatError::Precondition("functors do not form a square".into()));
        }
        let objs = (0..p.source.num_objects()).all(|x| u.obj(p.obj(x)) == v.obj(q.obj(x)));
        let mors = (0..p.source.num_morphisms()).all(|m| u.mor(p.mor(m)) == v.mor(q.mor(m)));
        if !(objs && mors) {
            return Err(CatError::Precondition("square does not commute".into()));
        }
        Ok(())
    }
}

/// Compares `Lan_q(F∘p)` with `(Lan_u F)∘v` through the canonical comparison
/// map, anchor by anchor in `B`.
pub fn beck_chevalley_check(sq: &Square, f: &SetValuedFunctor, limits: Limits) -> Result<BeckChevalleyReport, CatError> {
    sq.check()?;
    for (c, what) in [(&sq.p.source, "P"), (&sq.p.target, "A"), (&sq.q.target, "B"), (&sq.u.target, "D")] {
        limits.admit(c, what)?;
    }
    if *f.source != *sq.p.target {
        return Err(CatError::Precondition("F is not defined on the source of u".into()));
    }
    let fp = f.precompose(&sq.p)?;
    let b_cat = &*sq.q.target;
    let d_cat = &*sq.u.target;
    let mut mismatches = Vec::new();
    for b in 0..b_cat.num_objects() {
        let lc = comma_category(&sq.q, b)?;
        let lcol = finset_colimit(&fp.precompose(&lc.projection)?);
        let rc = comma_category(&sq.u, sq.v.obj(b))?;
        let rcol = finset_colimit(&f.precompose(&rc.projection)?);
        // (x, m: qx → b, e) ↦ (px, v(m), e)
        let image: Vec<usize> = lcol
            .reps
            .iter()
            .map(|&(i, e)| {
                let (x, m) = lc.objects[i];
                let target = (sq.p.obj(x), sq.v.mor(m));
                let j = rc.objects.iter().position(|&o| o == target).expect("v carries the triangle");
                rcol.injections[j][e]
            })
            .collect();
        let mut hit = vec![false; rcol.size()];
        let mut injective = true;
        for &y in &image {
            injective &= !std::mem::replace(&mut hit[y], true);
        }
        if !injective || hit.iter().any(|h| !h) {
            mismatches.push(Mismatch {
                anchor: format!("{} -> {}", b_cat.object(b), d_cat.object(sq.v.obj(b))),
                left: lcol.size(),
                right: rcol.size(),
            });
        }
    }
    Ok(BeckChevalleyReport { mismatches })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::adjunction::{c0, c1};
    use crate::cat::{identity_functor, product_category, projection, terminal_category, FinCategory};

    fn to_point(c: Arc<FinCategory>, t: Arc<FinCategory>) -> FinFunctor {
        FinFunctor::from_indices("!", c.clone(), t, vec![0; c.num_objects()], vec![0; c.num_morphisms()]).unwrap()
    }

    #[test]
    fn identity_square_passes() {
        let c = c1();
        let id = identity_functor(c.clone());
        let sq = Square {
            p: id.clone(),
            q: id.clone(),
            u: id.clone(),
            v: id,
        };
        let f = SetValuedFunctor::representable(c, 0);
        assert!(beck_chevalley_check(&sq, &f, Limits::default()).unwrap().passed());
    }

    #[test]
    fn product_square_passes() {
        let (a, b) = (c0(), c1());
        let p_cat = Arc::new(product_category(&[&*a, &*b]));
        let factors = [a.clone(), b.clone()];
        let t = Arc::new(terminal_category());
        let sq = Square {
            p: projection(p_cat.clone(), &factors, 0).unwrap(),
            q: projection(p_cat, &factors, 1).unwrap(),
            u: to_point(a.clone(), t.clone()),
            v: to_point(b, t),
        };
        let f = SetValuedFunctor::representable(a.clone(), a.object_index("Undef").unwrap());
        assert!(beck_chevalley_check(&sq, &f, Limits::default()).unwrap().passed());
    }

    #[test]
    fn disjoint_square_reports_cardinalities() {
        let p_cat = Arc::new(FinCategory::discrete(["l", "r"]));
        let one = || Arc::new(FinCategory::discrete(["*"]));
        let (a, b, d) = (one(), one(), one());
        let sq = Square {
            p: to_point(p_cat.clone(), a.clone()),
            q: to_point(p_cat, b.clone()),
            u: to_point(a.clone(), d.clone()),
            v: to_point(b, d),
        };
        let f = SetValuedFunctor::constant(a, 1);
        let r = beck_chevalley_check(&sq, &f, Limits::default()).unwrap();
        assert_eq!(r.mismatches, vec![Mismatch { anchor: "* -> *".into(), left: 2, right: 1 }]);
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let c = c1();
        let id = identity_functor(c.clone());
        let swap_ends = crate::cat::thin_functor("K", c.clone(), c.clone(), vec![1, 1]).unwrap();
        let sq = Square {
            p: id.clone(),
            q: id.clone(),
            u: swap_ends,
            v: id,
        };
        let f = SetValuedFunctor::constant(c, 1);
        assert!(matches!(beck_chevalley_check(&sq, &f, Limits::default()), Err(CatError::Precondition(_))));
    }
}
