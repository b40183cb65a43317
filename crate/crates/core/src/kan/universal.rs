use serde::Serialize;

use super::solver::{Components, Search};
use super::{SetValuedFunctor, Side};
use crate::cat::{CatError, FinFunctor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Existence,
    Uniqueness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    /// Index into the competing family; `None` when no (co)unit exists at all.
    pub competitor: Option<usize>,
    pub transformation: Option<usize>,
    pub factorizations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalReport {
    pub failures: Vec<Failure>,
    /// Set when the competing family was empty and the pass is vacuous.
    pub weak: bool,
}

impl UniversalReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has(&self, kind: FailureKind) -> bool {
        self.failures.iter().any(|f| f.kind == kind)
    }
}

/// Factorization count through `(candidate, t)` of `alpha: F ⇒ G∘K`
/// (left) or `alpha: G∘K ⇒ F` (right), capped at 2.
fn count_factorizations(
    side: Side,
    candidate: &SetValuedFunctor,
    k: &FinFunctor,
    t: &Components,
    g: &SetValuedFunctor,
    alpha: &Components,
) -> Result<usize, CatError> {
    let mut s = match side {
        Side::Left => Search::new(candidate, g)?,
        Side::Right => Search::new(g, candidate)?,
    };
    for c in 0..k.source.num_objects() {
        let kc = k.obj(c);
        match side {
            // σ_{Kc}(t_c(e)) = α_c(e)
            Side::Left => {
                for (e, &x) in t[c].iter().enumerate() {
                    let want = alpha[c][e];
                    s.restrict(kc, x, |v| v == want);
                }
            }
            // t_c(σ_{Kc}(y)) = α_c(y)
            Side::Right => {
                for (y, &want) in alpha[c].iter().enumerate() {
                    s.restrict(kc, y, |r| t[c][r] == want);
                }
            }
        }
    }
    Ok(s.count(2))
}

fn shape(side: Side, f: &SetValuedFunctor, gk: &SetValuedFunctor) -> Result<Vec<Components>, CatError> {
    match side {
        Side::Left => Ok(Search::new(f, gk)?.solutions(usize::MAX)),
        Side::Right => Ok(Search::new(gk, f)?.solutions(usize::MAX)),
    }
}

/// Checks that some (co)unit on `candidate` makes every transformation of
/// the right shape into (out of) a member of `family` factor uniquely.
pub fn verify_kan_universal(
    candidate: &SetValuedFunctor,
    f: &SetValuedFunctor,
    k: &FinFunctor,
    side: Side,
    family: &[SetValuedFunctor],
) -> Result<UniversalReport, CatError> {
    if *candidate.source != *k.target || *f.source != *k.source {
        return Err(CatError::Precondition("candidate, F and K do not line up".into()));
    }
    if family.is_empty() {
        return Ok(UniversalReport {
            failures: vec![],
            weak: true,
        });
    }
    let units = shape(side, f, &candidate.precompose(k)?)?;
    if units.is_empty() {
        return Ok(UniversalReport {
            failures: vec![Failure {
                kind: FailureKind::Existence,
                competitor: None,
                transformation: None,
                factorizations: 0,
            }],
            weak: false,
        });
    }
    let mut alphas = Vec::with_capacity(family.len());
    for g in family {
        alphas.push(shape(side, f, &g.precompose(k)?)?);
    }

    let mut first_missing: Option<Vec<Failure>> = None;
    let mut first_repeated: Option<Vec<Failure>> = None;
    for t in &units {
        let mut missing = Vec::new();
        let mut repeated = Vec::new();
        'outer: for (gi, g) in family.iter().enumerate() {
            for (ai, alpha) in alphas[gi].iter().enumerate() {
                let n = count_factorizations(side, candidate, k, t, g, alpha)?;
                let failure = |kind| Failure {
                    kind,
                    competitor: Some(gi),
                    transformation: Some(ai),
                    factorizations: n,
                };
                match n {
                    0 => {
                        missing.push(failure(FailureKind::Existence));
                        if first_missing.is_some() {
                            break 'outer;
                        }
                    }
                    1 => {}
                    _ => repeated.push(failure(FailureKind::Uniqueness)),
                }
            }
        }
        if missing.is_empty() && repeated.is_empty() {
            return Ok(UniversalReport {
                failures: vec![],
                weak: false,
            });
        }
        if missing.is_empty() {
            first_repeated.get_or_insert(repeated);
        } else {
            first_missing.get_or_insert(missing);
        }
    }
    let failures = first_repeated.or(first_missing).unwrap_or_default();
    Ok(UniversalReport { failures, weak: false })
}

/// Largest subfunctor not containing element `elem` of `obj`.
pub fn perturb_delete(l: &SetValuedFunctor, obj: usize, elem: usize) -> Result<SetValuedFunctor, CatError> {
    let c = &*l.source;
    if obj >= l.sizes.len() || elem >= l.sizes[obj] {
        return Err(CatError::Malformed("no such element".into()));
    }
    // keep x in L(d) unless some arrow d → obj sends it to elem
    let keep: Vec<Vec<bool>> = (0..c.num_objects())
        .map(|d| (0..l.sizes[d]).map(|x| c.hom(d, obj).iter().all(|&g| l.action[g][x] != elem)).collect())
        .collect();
    let index: Vec<Vec<usize>> = keep
        .iter()
        .map(|row| {
            let mut next = 0;
            row.iter()
                .map(|&k| {
                    let i = next;
                    next += usize::from(k);
                    if k { i } else { usize::MAX }
                })
                .collect()
        })
        .collect();
    let sizes = keep.iter().map(|row| row.iter().filter(|&&k| k).count()).collect();
    let action = (0..c.num_morphisms())
        .map(|m| {
            let (s, t) = (c.source(m), c.target(m));
            (0..l.sizes[s]).filter(|&x| keep[s][x]).map(|x| index[t][l.action[m][x]]).collect()
        })
        .collect();
    SetValuedFunctor::new(l.source.clone(), sizes, action)
}

/// Adds a copy of element `elem` of `obj` with no preimages that every
/// non-identity arrow sends where it sends the original.
pub fn perturb_duplicate(l: &SetValuedFunctor, obj: usize, elem: usize) -> Result<SetValuedFunctor, CatError> {
    let c = &*l.source;
    if obj >= l.sizes.len() || elem >= l.sizes[obj] {
        return Err(CatError::Malformed("no such element".into()));
    }
    let mut sizes = l.sizes.clone();
    let copy = sizes[obj];
    sizes[obj] += 1;
    let mut action = l.action.clone();
    for (m, row) in action.iter_mut().enumerate() {
        if c.source(m) != obj {
            continue;
        }
        row.push(if c.is_identity(m) { copy } else { l.action[m][elem] });
    }
    let out = SetValuedFunctor::new(l.source.clone(), sizes, action)?;
    if !out.validate().is_ok() {
        return Err(CatError::Precondition(format!("duplicating at {} breaks functoriality", c.object(obj))));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cat::{FinCategory, Limits};
    use crate::kan::kan_extend;

    fn collapse() -> (SetValuedFunctor, FinFunctor) {
        let two = Arc::new(FinCategory::discrete(["p", "q"]));
        let one = Arc::new(FinCategory::discrete(["*"]));
        let k = FinFunctor::from_indices("K", two.clone(), one, vec![0, 0], vec![0, 0]).unwrap();
        let f = SetValuedFunctor::from_tables(two, [("p", 1), ("q", 2)], []).unwrap();
        (f, k)
    }

    #[test]
    fn extension_passes_and_perturbations_fail() {
        let (f, k) = collapse();
        for side in [Side::Left, Side::Right] {
            let ext = kan_extend(side, &f, &k, Limits::default()).unwrap().functor;
            let ok = verify_kan_universal(&ext, &f, &k, side, std::slice::from_ref(&ext)).unwrap();
            assert!(ok.passed() && !ok.weak);

            let del = perturb_delete(&ext, 0, 0).unwrap();
            let r = verify_kan_universal(&del, &f, &k, side, &[ext.clone(), del.clone()]).unwrap();
            assert!(r.has(FailureKind::Existence), "{side:?}: {r:?}");

            let dup = perturb_duplicate(&ext, 0, 0).unwrap();
            let r = verify_kan_universal(&dup, &f, &k, side, &[ext.clone(), dup.clone()]).unwrap();
            assert!(r.has(FailureKind::Uniqueness), "{side:?}: {r:?}");
        }
    }

    #[test]
    fn empty_family_is_weak() {
        let (f, k) = collapse();
        let ext = kan_extend(Side::Left, &f, &k, Limits::default()).unwrap().functor;
        let r = verify_kan_universal(&ext, &f, &k, Side::Left, &[]).unwrap();
        assert!(r.passed() && r.weak);
    }
}
