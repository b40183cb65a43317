use std::collections::HashMap;

use super::{CatError, FinCategory, Morphism, Result};

pub const DEFAULT_PATH_BOUND: usize = 8;

/// A normal-form word `o_0 g_1 o_1 ... g_r o_r` (old morphisms `o_i`, new
/// generators `g_i`), stored in diagrammatic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Word {
    olds: Vec<usize>,
    gens: Vec<usize>,
}

impl Word {
    fn length(&self, c: &FinCategory) -> usize {
        self.gens.len() + self.olds.iter().filter(|&&o| !c.is_identity(o)).count()
    }
}

/// Freely adjoin generators one grade above the current maximum.
///
/// Each generator is a `(source, target)` pair and receives the id
/// `gen<i>:<source>-><target>`. New morphisms are all normal-form words with
/// at least one generator; two words are equal only if they agree letter by
/// letter after composing adjacent old morphisms. Words longer than `bound`
/// non-identity letters are refused.
pub fn grade_extend(c: &FinCategory, generators: &[(&str, &str)], bound: usize) -> Result<FinCategory> {
    if generators.is_empty() {
        return Ok(c.clone());
    }
    let k1 = c.max_grade() + 1;
    let mut gens = Vec::with_capacity(generators.len());
    for (i, &(s, t)) in generators.iter().enumerate() {
        let si = c
            .object_index(s)
            .ok_or_else(|| CatError::Malformed(format!("generator {i} has undeclared source {s:?}")))?;
        let ti = c
            .object_index(t)
            .ok_or_else(|| CatError::Malformed(format!("generator {i} has undeclared target {t:?}")))?;
        gens.push((format!("gen{i}:{s}->{t}"), si, ti));
    }

    // Breadth-first over the number of generators in a word.
    let mut words: Vec<Word> = Vec::new();
    let mut frontier: Vec<Word> = (0..c.num_morphisms())
        .map(|o| Word {
            olds: vec![o],
            gens: vec![],
        })
        .collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            let end = c.target(*w.olds.last().unwrap());
            for (gi, &(_, gs, gt)) in gens.iter().enumerate() {
                if gs != end {
                    continue;
                }
                for o in c.out_of(gt) {
                    let mut nw = w.clone();
                    nw.gens.push(gi);
                    nw.olds.push(o);
                    if nw.length(c) > bound {
                        return Err(CatError::Truncation {
                            bound,
                            detail: format!("a composite with more than {bound} factors exists"),
                        });
                    }
                    next.push(nw);
                }
            }
        }
        words.extend(std::mem::take(&mut frontier).into_iter().filter(|w| !w.gens.is_empty()));
        frontier = next;
    }

    let mut morphisms: Vec<Morphism> = c.morphisms().to_vec();
    let mut index: HashMap<Word, usize> = HashMap::new();
    for w in &words {
        let mut parts: Vec<&str> = Vec::new();
        for (i, &o) in w.olds.iter().enumerate() {
            if !c.is_identity(o) {
                parts.push(c.mor_id(o));
            }
            if let Some(&g) = w.gens.get(i) {
                parts.push(&gens[g].0);
            }
        }
        parts.reverse();
        index.insert(w.clone(), morphisms.len());
        morphisms.push(Morphism {
            id: parts.join("∘"),
            source: c.source(w.olds[0]),
            target: c.target(*w.olds.last().unwrap()),
            grade: k1,
        });
    }

    let as_word = |m: usize| -> Word {
        if m < c.num_morphisms() {
            Word {
                olds: vec![m],
                gens: vec![],
            }
        } else {
            words[m - c.num_morphisms()].clone()
        }
    };
    let mut compose = c.compose_table().clone();
    let all: Vec<Word> = (0..morphisms.len()).map(as_word).collect();
    for (f, wf) in all.iter().enumerate() {
        for (g, wg) in all.iter().enumerate() {
            if f < c.num_morphisms() && g < c.num_morphisms() {
                continue;
            }
            if morphisms[f].target != morphisms[g].source {
                continue;
            }
            let joint = c
                .compose(wg.olds[0], *wf.olds.last().unwrap())
                .ok_or_else(|| CatError::Precondition("input category is not composition-closed".into()))?;
            let mut olds = wf.olds[..wf.olds.len() - 1].to_vec();
            olds.push(joint);
            olds.extend_from_slice(&wg.olds[1..]);
            let mut gs = wf.gens.clone();
            gs.extend_from_slice(&wg.gens);
            let h = index.get(&Word { olds, gens: gs }).copied().ok_or_else(|| CatError::Truncation {
                bound,
                detail: format!("{} ∘ {} exceeds the bound", morphisms[g].id, morphisms[f].id),
            })?;
            compose.insert((g, f), h);
        }
    }
    Ok(FinCategory::assemble(
        c.objects().to_vec(),
        morphisms,
        c.identities().to_vec(),
        compose,
    ))
}

/// Keep the morphisms of grade at most `k`.
pub fn grade_truncate(c: &FinCategory, k: u32) -> FinCategory {
    if k >= c.max_grade() {
        return c.clone();
    }
    let mut remap = vec![usize::MAX; c.num_morphisms()];
    let mut morphisms = Vec::new();
    for (i, m) in c.morphisms().iter().enumerate() {
        if m.grade <= k {
            remap[i] = morphisms.len();
            morphisms.push(m.clone());
        }
    }
    let compose = c
        .compose_table()
        .iter()
        .filter_map(|(&(g, f), &h)| {
            let (g, f, h) = (remap[g], remap[f], remap[h]);
            (g != usize::MAX && f != usize::MAX && h != usize::MAX).then_some(((g, f), h))
        })
        .collect();
    let identities = c.identities().iter().map(|&i| remap[i]).collect();
    FinCategory::assemble(c.objects().to_vec(), morphisms, identities, compose)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{validate_category, CategoryBuilder};

    #[test]
    fn single_generator_on_discrete_pair() {
        let c = FinCategory::discrete(["a", "b"]);
        let e = grade_extend(&c, &[("a", "b")], DEFAULT_PATH_BOUND).unwrap();
        assert_eq!(e.num_morphisms(), 3);
        assert_eq!(e.grade(2), 1);
        assert!(validate_category(&e).is_ok());
    }

    #[test]
    fn no_generators_is_identity() {
        let c = FinCategory::discrete(["a", "b"]);
        assert_eq!(grade_extend(&c, &[], DEFAULT_PATH_BOUND).unwrap(), c);
    }

    #[test]
    fn cycle_hits_the_bound() {
        let c = FinCategory::discrete(["a", "b"]);
        let err = grade_extend(&c, &[("a", "b"), ("b", "a")], 4).unwrap_err();
        assert!(matches!(err, CatError::Truncation { bound: 4, .. }));
    }

    #[test]
    fn path_count_matches_enumeration() {
        // a -f-> b in grade 1; adjoin b -> c and a -> c at grade 2.
        // Oracle: new words are g1, g1∘f, g2, so 3 + 3 old = 6 plus id_c.
        let mut b = CategoryBuilder::new();
        b.object("a").object("b").object("c").morphism("f", "a", "b", 1);
        let c = b.build().unwrap();
        let e = grade_extend(&c, &[("b", "c"), ("a", "c")], DEFAULT_PATH_BOUND).unwrap();
        assert_eq!(e.num_morphisms(), 7);
        assert!(e.morphism_index("gen0:b->c∘f").is_some());
        assert!(validate_category(&e).is_ok(), "{}", validate_category(&e));
    }

    #[test]
    fn truncation_retracts_extension() {
        let mut b = CategoryBuilder::new();
        b.object("a").object("b").morphism("f", "a", "b", 1);
        let c = b.build().unwrap();
        let e = grade_extend(&c, &[("b", "a")], DEFAULT_PATH_BOUND).unwrap_err();
        assert!(matches!(e, CatError::Truncation { .. }));
        let e = grade_extend(&c, &[("b", "b")], 3).unwrap_err();
        assert!(matches!(e, CatError::Truncation { .. }));
        let e = grade_extend(&c, &[("a", "a")], 2);
        assert!(e.is_err());
        let d = FinCategory::discrete(["x", "y"]);
        let e = grade_extend(&d, &[("x", "y")], DEFAULT_PATH_BOUND).unwrap();
        assert_eq!(grade_truncate(&e, 0), d);
        assert_eq!(grade_truncate(&d, 0), d);
    }

    #[test]
    fn truncate_to_zero_is_discrete() {
        let mut b = CategoryBuilder::new();
        b.object("a").object("b").morphism("f", "a", "b", 1);
        let c = b.build().unwrap();
        let t = grade_truncate(&c, 0);
        assert_eq!(t.num_morphisms(), 2);
        assert_eq!(t, FinCategory::discrete(["a", "b"]));
    }
}
