use std::collections::HashMap;
use std::sync::Arc;

use super::Side;
use crate::cat::{CatError, FinCategory, FinFunctor, Morphism};

/// A comma category `(K↓d)` or `(d↓K)` with its projection to the source of `K`.
#[derive(Debug, Clone)]
pub struct CommaCategory {
    pub side: Side,
    pub anchor: usize,
    pub cat: Arc<FinCategory>,
    /// `(c, m)` per object: `m: Kc → d` for `(K↓d)`, `m: d → Kc` for `(d↓K)`.
    pub objects: Vec<(usize, usize)>,
    pub projection: FinFunctor,
}

/// `(K↓d)`: objects are arrows `Kc → d`, morphisms commuting triangles.
pub fn comma_category(k: &FinFunctor, d: usize) -> Result<CommaCategory, CatError> {
    build(k, d, Side::Left)
}

/// `(d↓K)`: objects are arrows `d → Kc`.
pub fn under_category(k: &FinFunctor, d: usize) -> Result<CommaCategory, CatError> {
    build(k, d, Side::Right)
}

fn build(k: &FinFunctor, d: usize, side: Side) -> Result<CommaCategory, CatError> {
    let (c, t) = (&*k.source, &*k.target);
    if d >= t.num_objects() {
        return Err(CatError::Malformed(format!("anchor {d} is not an object of the target")));
    }
    let mut objects = Vec::new();
    for x in 0..c.num_objects() {
        let arrows = match side {
            Side::Left => t.hom(k.obj(x), d),
            Side::Right => t.hom(d, k.obj(x)),
        };
        objects.extend(arrows.iter().map(|&m| (x, m)));
    }
    let names: Vec<String> = objects
        .iter()
        .map(|&(x, m)| format!("({},{})", c.object(x), t.mor_id(m)))
        .collect();

    let mut morphisms = Vec::new();
    let mut underlying = Vec::new();
    let mut identities = vec![usize::MAX; objects.len()];
    let mut by_pair: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (i, &(x, m)) in objects.iter().enumerate() {
        for (j, &(y, n)) in objects.iter().enumerate() {
            for &h in c.hom(x, y) {
                let commutes = match side {
                    Side::Left => t.compose(n, k.mor(h)) == Some(m),
                    Side::Right => t.compose(k.mor(h), m) == Some(n),
                };
                if !commutes {
                    continue;
                }
                let idx = morphisms.len();
                if i == j && c.is_identity(h) {
                    identities[i] = idx;
                }
                by_pair.insert((i, j, h), idx);
                morphisms.push(Morphism {
                    id: format!("{}:{}->{}", c.mor_id(h), names[i], names[j]),
                    source: i,
                    target: j,
                    grade: c.grade(h),
                });
                underlying.push(h);
            }
        }
    }
    let mut compose = HashMap::new();
    for (f, mf) in morphisms.iter().enumerate() {
        for (g, mg) in morphisms.iter().enumerate() {
            if mg.source != mf.target {
                continue;
            }
            let h = c
                .compose(underlying[g], underlying[f])
                .ok_or_else(|| CatError::Precondition("source of K is not composition-closed".into()))?;
            let gf = by_pair[&(mf.source, mg.target, h)];
            compose.insert((g, f), gf);
        }
    }
    let cat = Arc::new(FinCategory::assemble(names, morphisms, identities, compose));
    let proj_obj = objects.iter().map(|&(x, _)| x).collect();
    let projection = FinFunctor::from_indices("proj", cat.clone(), k.source.clone(), proj_obj, underlying)?;
    Ok(CommaCategory {
        side,
        anchor: d,
        cat,
        objects,
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjunction::{c0, c1};
    use crate::cat::{identity_functor, thin_functor, validate_category, validate_functor};

    #[test]
    fn comma_over_identity_is_slice() {
        let c = c1();
        let k = identity_functor(c.clone());
        let ne = c.object_index("NonEmpty").unwrap();
        let cc = comma_category(&k, ne).unwrap();
        // slice over NonEmpty: every object with its unique arrow
        assert_eq!(cc.objects.len(), 2);
        assert!(validate_category(&cc.cat).is_ok());
        assert!(validate_functor(&cc.projection).is_ok());
    }

    #[test]
    fn tr_comma_at_nonempty() {
        let tr = thin_functor("Tr", c0(), c1(), vec![0, 1]).unwrap();
        let cc = comma_category(&tr, 1).unwrap();
        let names: Vec<&str> = cc.cat.objects().iter().map(String::as_str).collect();
        assert_eq!(names, vec!["(Undef,Empty<=NonEmpty)", "(Define,id_NonEmpty)"]);
        assert_eq!(cc.cat.num_morphisms(), 3);
    }

    #[test]
    fn constant_functor_away_from_anchor_gives_empty_comma() {
        // K constant at NonEmpty; no arrow NonEmpty -> Empty
        let k = thin_functor("K", c0(), c1(), vec![1, 1]).unwrap();
        let cc = comma_category(&k, 0).unwrap();
        assert_eq!(cc.cat.num_objects(), 0);
    }
}
