use std::sync::Arc;

use super::finset::{finset, posets, Poset};
use super::{Adjunction, AdjunctionError, Limits};
use crate::cat::{identity_functor, thin_from_preorder, thin_functor, two_point, CatError, FinCategory, FinFunctor, Preorder};
use crate::hsg::{Delta, Grid};

/// `{Undef ≤ Define}`.
pub fn c0() -> Arc<FinCategory> {
    Arc::new(two_point("Undef", "Define"))
}

/// `{Empty ≤ NonEmpty}`.
pub fn c1() -> Arc<FinCategory> {
    Arc::new(two_point("Empty", "NonEmpty"))
}

#[derive(Debug, Clone)]
pub enum BuiltinParams {
    Grid(Grid),
    Bound(usize),
}

pub fn builtin_adjunction(name: &str, params: &BuiltinParams, limits: Limits) -> Result<Adjunction, AdjunctionError> {
    match (name, params) {
        ("definability", BuiltinParams::Grid(g)) => Ok(definability(g)),
        ("emptiness", BuiltinParams::Bound(n)) => emptiness(*n, limits),
        ("discrete_order", BuiltinParams::Bound(n)) => discrete_order(*n, limits),
        ("definability" | "emptiness" | "discrete_order", _) => {
            Err(CatError::Precondition(format!("wrong parameters for {name}")).into())
        }
        _ => Err(AdjunctionError::UnknownBuiltin(name.to_string())),
    }
}

/// The thin category on the grid's tokens ordered by δ, with a free
/// representative adjoined for each empty δ-fiber.
pub fn definability_preorder(g: &Grid) -> (Preorder, [usize; 2]) {
    let mut names: Vec<String> = g.tokens().iter().map(|t| t.id.clone()).collect();
    let mut deltas: Vec<Delta> = g.deltas();
    let mut rep = [usize::MAX; 2];
    for (slot, d, extra) in [(0, Delta::Bot, "⊥_δ"), (1, Delta::Top, "⊤_δ")] {
        rep[slot] = match deltas.iter().position(|&x| x == d) {
            Some(i) => i,
            None => {
                names.push(extra.to_string());
                deltas.push(d);
                names.len() - 1
            }
        };
    }
    let p = Preorder::from_fn(names, |i, j| deltas[i] <= deltas[j]);
    (p, rep)
}

/// `Σ_def ⊣ ι₀` between the δ-ordered token category and `C₀`.
pub fn definability(g: &Grid) -> Adjunction {
    let (p, rep) = definability_preorder(g);
    let t = Arc::new(thin_from_preorder(&p).expect("order by δ is a preorder"));
    let c0 = c0();
    let level: Vec<usize> = (0..t.num_objects())
        .map(|i| usize::from(!p.leq(i, rep[0])))
        .collect();
    let sigma = thin_functor("Σ_def", t.clone(), c0.clone(), level.clone()).expect("δ is monotone");
    let iota = thin_functor("ι₀", c0.clone(), t.clone(), rep.to_vec()).expect("representatives are ordered");
    let unit = (0..t.num_objects()).map(|x| t.hom(x, rep[level[x]])[0]).collect();
    let counit = (0..2).map(|a| c0.identity(a)).collect();
    Adjunction::new("definability", sigma, iota, unit, counit).expect("well-typed by construction")
}

/// `Σ_emp ⊣ ι₁` between finite sets of size at most `n` and `C₁`.
pub fn emptiness(n: usize, limits: Limits) -> Result<Adjunction, AdjunctionError> {
    if n == 0 {
        return Err(CatError::Precondition("emptiness needs n ≥ 1 so that NonEmpty has an image".into()).into());
    }
    let set = finset(n);
    limits.admit(&set.cat, "FinSet")?;
    let c1 = c1();
    let s = Arc::new(set.cat.clone());
    let level: Vec<usize> = set.sizes.iter().map(|&k| usize::from(k > 0)).collect();
    let mors = s
        .morphisms()
        .iter()
        .map(|m| c1.hom(level[m.source], level[m.target])[0])
        .collect();
    let sigma = FinFunctor::from_indices("Σ_emp", s.clone(), c1.clone(), level.clone(), mors)?;
    let zero = set.object_of_size(0).unwrap();
    let one = set.object_of_size(1).unwrap();
    let iota_mors = c1
        .morphisms()
        .iter()
        .map(|m| {
            let (a, b) = ([zero, one][m.source], [zero, one][m.target]);
            set.find(a, b, &vec![0; set.sizes[a]]).unwrap()
        })
        .collect();
    let iota = FinFunctor::from_indices("ι₁", c1.clone(), s.clone(), vec![zero, one], iota_mors)?;
    let unit = (0..s.num_objects())
        .map(|x| {
            let k = set.sizes[x];
            let target = if k == 0 { zero } else { one };
            set.find(x, target, &vec![0; k]).unwrap()
        })
        .collect();
    let counit = (0..2).map(|a| c1.identity(a)).collect();
    Adjunction::new("emptiness", sigma, iota, unit, counit)
}

/// `Δ ⊣ U_pos` between finite sets and posets (up to isomorphism) of size at most `n`.
pub fn discrete_order(n: usize, limits: Limits) -> Result<Adjunction, AdjunctionError> {
    let set = finset(n);
    limits.admit(&set.cat, "FinSet")?;
    let (pos, ps) = posets(n);
    limits.admit(&pos.cat, "Pos")?;
    let s = Arc::new(set.cat.clone());
    let p = Arc::new(pos.cat.clone());
    let antichain = |k: usize| ps.iter().position(|q| *q == Poset::antichain(k)).unwrap();
    let delta_obj: Vec<usize> = set.sizes.iter().map(|&k| antichain(k)).collect();
    let delta_mor = (0..s.num_morphisms())
        .map(|m| pos.find(delta_obj[s.source(m)], delta_obj[s.target(m)], &set.funcs[m]).unwrap())
        .collect();
    let delta = FinFunctor::from_indices("Δ", s.clone(), p.clone(), delta_obj.clone(), delta_mor)?;
    let u_obj: Vec<usize> = ps.iter().map(|q| set.object_of_size(q.size).unwrap()).collect();
    let u_mor = (0..p.num_morphisms())
        .map(|m| set.find(u_obj[p.source(m)], u_obj[p.target(m)], &pos.funcs[m]).unwrap())
        .collect();
    let forget = FinFunctor::from_indices("U_pos", p.clone(), s.clone(), u_obj.clone(), u_mor)?;
    let unit = (0..s.num_objects()).map(|x| s.identity(x)).collect();
    let counit = (0..p.num_objects())
        .map(|q| {
            let id: Vec<usize> = (0..ps[q].size).collect();
            pos.find(delta_obj[u_obj[q]], q, &id).unwrap()
        })
        .collect();
    Adjunction::new("discrete_order", delta, forget, unit, counit)
}

/// `Id ⊣ Id` on any category.
pub fn identity_adjunction(c: Arc<FinCategory>) -> Adjunction {
    let id = identity_functor(c.clone());
    let comps: Vec<usize> = (0..c.num_objects()).map(|x| c.identity(x)).collect();
    Adjunction::new("identity", id.clone(), id, comps.clone(), comps).expect("identity data is well-typed")
}
