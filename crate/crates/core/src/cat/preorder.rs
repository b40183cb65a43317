use std::collections::HashMap;

use super::{CatError, FinCategory, Morphism, Result};

/// A finite relation intended to be a preorder. The invariants are checked by
/// [`thin_from_preorder`], not on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    pub elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl Preorder {
    /// Relation given by explicit pairs `(x, y)` meaning `x ≤ y`.
    pub fn new<'a, I>(elements: Vec<String>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        if index.len() != elements.len() {
            return Err(CatError::Malformed("duplicate preorder element".into()));
        }
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (x, y) in pairs {
            let xi = *index.get(x).ok_or_else(|| CatError::Malformed(format!("undeclared element {x:?}")))?;
            let yi = *index.get(y).ok_or_else(|| CatError::Malformed(format!("undeclared element {y:?}")))?;
            leq[xi][yi] = true;
        }
        Ok(Preorder { elements, leq })
    }

    pub fn from_fn<I, S>(elements: I, rel: impl Fn(usize, usize) -> bool) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let n = elements.len();
        let leq = (0..n).map(|i| (0..n).map(|j| rel(i, j)).collect()).collect();
        Preorder { elements, leq }
    }

    /// Chain in the given order.
    pub fn total<I, S>(elements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_fn(elements, |i, j| i <= j)
    }

    pub fn discrete<I, S>(elements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_fn(elements, |i, j| i == j)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    fn check(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.leq[i][i] {
                return Err(CatError::Precondition(format!("not reflexive at {:?}", self.elements[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.leq[i][j] {
                    continue;
                }
                for k in 0..n {
                    if self.leq[j][k] && !self.leq[i][k] {
                        return Err(CatError::Precondition(format!(
                            "not transitive: {0} <= {1} <= {2} but not {0} <= {2}",
                            self.elements[i], self.elements[j], self.elements[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The thin category of a preorder: one arrow `x<=y` per related pair.
/// Non-invertible arrows get grade 1.
pub fn thin_from_preorder(p: &Preorder) -> Result<FinCategory> {
    p.check()?;
    let n = p.len();
    let mut morphisms = Vec::new();
    let mut arrow = vec![vec![usize::MAX; n]; n];
    for i in 0..n {
        arrow[i][i] = morphisms.len();
        morphisms.push(Morphism {
            id: format!("id_{}", p.elements[i]),
            source: i,
            target: i,
            grade: 0,
        });
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && p.leq(i, j) {
                arrow[i][j] = morphisms.len();
                morphisms.push(Morphism {
                    id: format!("{}<={}", p.elements[i], p.elements[j]),
                    source: i,
                    target: j,
                    // arrows inside an isomorphism class compose to identities
                    grade: u32::from(!p.leq(j, i)),
                });
            }
        }
    }
    let mut compose = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if !p.leq(i, j) {
                continue;
            }
            for k in 0..n {
                if p.leq(j, k) {
                    compose.insert((arrow[j][k], arrow[i][j]), arrow[i][k]);
                }
            }
        }
    }
    let identities = (0..n).collect();
    Ok(FinCategory::assemble(p.elements.clone(), morphisms, identities, compose))
}

/// `{bot ≤ top}` as a thin category.
pub fn two_point(bot: &str, top: &str) -> FinCategory {
    thin_from_preorder(&Preorder::total([bot, top])).expect("a chain is a preorder")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::validate_category;

    #[test]
    fn two_point_has_one_non_identity_arrow() {
        let c = two_point("Empty", "NonEmpty");
        assert_eq!(c.num_morphisms(), 3);
        assert_eq!(c.mor_id(2), "Empty<=NonEmpty");
        assert!(validate_category(&c).is_ok());
    }

    #[test]
    fn time_category_count_matches_enumeration() {
        let p = Preorder::total((0..=5).map(|i| i.to_string()));
        let c = thin_from_preorder(&p).unwrap();
        let oracle = (0..=5).flat_map(|i| (i..=5).map(move |j| (i, j))).count();
        assert_eq!(c.num_morphisms(), oracle);
        assert_eq!(oracle, 21);
        assert!(validate_category(&c).is_ok());
    }

    #[test]
    fn discrete_relation_gives_discrete_category() {
        let c = thin_from_preorder(&Preorder::discrete(["a", "b", "c"])).unwrap();
        assert_eq!(c.num_morphisms(), 3);
        assert!((0..3).all(|m| c.is_identity(m)));
    }

    #[test]
    fn non_transitive_relation_is_rejected() {
        let p = Preorder::new(
            vec!["a".into(), "b".into(), "c".into()],
            [("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c")],
        )
        .unwrap();
        assert!(matches!(thin_from_preorder(&p), Err(CatError::Precondition(_))));
    }
}
