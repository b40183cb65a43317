use super::comma::{comma_category, under_category};
use super::limits::{finset_colimit, finset_limit};
use super::{SetValuedFunctor, Side};
use crate::cat::{CatError, FinFunctor, Limits};
use crate::par::{self, Execution};

/// A pointwise Kan extension with its universal transformation.
#[derive(Debug, Clone)]
pub struct KanExtension {
    pub side: Side,
    pub functor: SetValuedFunctor,
    /// Left: unit components `F(c) → Lan(Kc)`. Right: counit components
    /// `Ran(Kc) → F(c)`. Indexed by objects `c` of the source of `K`.
    pub transform: Vec<Vec<usize>>,
}

pub fn kan_extend(side: Side, f: &SetValuedFunctor, k: &FinFunctor, limits: Limits) -> Result<KanExtension, CatError> {
    kan_extend_with(side, f, k, limits, Execution::default())
}

/// Per-anchor data: the comma objects and the (co)limit over them.
enum Anchor {
    Left {
        objects: Vec<(usize, usize)>,
        injections: Vec<Vec<usize>>,
        reps: Vec<(usize, usize)>,
    },
    Right {
        objects: Vec<(usize, usize)>,
        families: Vec<Vec<usize>>,
    },
}

pub fn kan_extend_with(side: Side, f: &SetValuedFunctor, k: &FinFunctor, limits: Limits, exec: Execution) -> Result<KanExtension, CatError> {
    if *k.source != *f.source {
        return Err(CatError::Precondition("F and K have different sources".into()));
    }
    limits.admit(&k.source, "source of K")?;
    limits.admit(&k.target, "target of K")?;
    let d_cat = k.target.clone();
    let anchors: Vec<Result<Anchor, CatError>> = par::map_range(exec, d_cat.num_objects(), |d| {
        let comma = match side {
            Side::Left => comma_category(k, d)?,
            Side::Right => under_category(k, d)?,
        };
        let diagram = f.precompose(&comma.projection)?;
        Ok(match side {
            Side::Left => {
                let col = finset_colimit(&diagram);
                Anchor::Left {
                    objects: comma.objects,
                    injections: col.injections,
                    reps: col.reps,
                }
            }
            Side::Right => Anchor::Right {
                objects: comma.objects,
                families: finset_limit(&diagram).families,
            },
        })
    });
    let anchors: Vec<Anchor> = anchors.into_iter().collect::<Result<_, _>>()?;

    let sizes: Vec<usize> = anchors
        .iter()
        .map(|a| match a {
            Anchor::Left { reps, .. } => reps.len(),
            Anchor::Right { families, .. } => families.len(),
        })
        .collect();

    let mut action = Vec::with_capacity(d_cat.num_morphisms());
    for g in 0..d_cat.num_morphisms() {
        let (d, d2) = (d_cat.source(g), d_cat.target(g));
        let row = match (&anchors[d], &anchors[d2]) {
            (Anchor::Left { objects, reps, .. }, Anchor::Left { objects: objects2, injections: inj2, .. }) => reps
                .iter()
                .map(|&(i, e)| {
                    let (c, m) = objects[i];
                    let gm = d_cat.compose(g, m).expect("composable");
                    let j = objects2.iter().position(|&o| o == (c, gm)).expect("re-anchored object exists");
                    inj2[j][e]
                })
                .collect(),
            (Anchor::Right { objects, families }, Anchor::Right { objects: objects2, families: families2 }) => families
                .iter()
                .map(|fam| {
                    let image: Vec<usize> = objects2
                        .iter()
                        .map(|&(c, m2)| {
                            let m = d_cat.compose(m2, g).expect("composable");
                            let i = objects.iter().position(|&o| o == (c, m)).expect("re-anchored object exists");
                            fam[i]
                        })
                        .collect();
                    families2.iter().position(|f2| *f2 == image).expect("image is a matching family")
                })
                .collect(),
            _ => unreachable!("all anchors share a side"),
        };
        action.push(row);
    }

    let c_cat = &f.source;
    let transform = (0..c_cat.num_objects())
        .map(|c| {
            let kc = k.obj(c);
            let id = d_cat.identity(kc);
            match &anchors[kc] {
                Anchor::Left { objects, injections, .. } => {
                    let i = objects.iter().position(|&o| o == (c, id)).unwrap();
                    injections[i].clone()
                }
                Anchor::Right { objects, families } => {
                    let i = objects.iter().position(|&o| o == (c, id)).unwrap();
                    families.iter().map(|fam| fam[i]).collect()
                }
            }
        })
        .collect();

    Ok(KanExtension {
        side,
        functor: SetValuedFunctor::new(d_cat, sizes, action)?,
        transform,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::adjunction::c1;
    use crate::cat::{identity_functor, FinCategory};

    #[test]
    fn along_identity_is_pointwise_bijective() {
        let c = c1();
        let f = SetValuedFunctor::from_tables(c.clone(), [("Empty", 2), ("NonEmpty", 3)], [("Empty<=NonEmpty", vec![0, 2])]).unwrap();
        let k = identity_functor(c);
        for side in [Side::Left, Side::Right] {
            let ext = kan_extend(side, &f, &k, Limits::default()).unwrap();
            assert_eq!(ext.functor.sizes, f.sizes);
            assert!(ext.functor.validate().is_ok());
        }
    }

    #[test]
    fn collapse_two_points() {
        let two = Arc::new(FinCategory::discrete(["p", "q"]));
        let one = Arc::new(FinCategory::discrete(["*"]));
        let k = FinFunctor::from_indices("K", two.clone(), one, vec![0, 0], vec![0, 0]).unwrap();
        let f = SetValuedFunctor::from_tables(two, [("p", 2), ("q", 3)], []).unwrap();
        let lan = kan_extend(Side::Left, &f, &k, Limits::default()).unwrap();
        assert_eq!(lan.functor.sizes, vec![2 + 3]);
        let ran = kan_extend(Side::Right, &f, &k, Limits::default()).unwrap();
        assert_eq!(ran.functor.sizes, vec![2 * 3]);
    }
}
