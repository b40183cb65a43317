use super::SetValuedFunctor;

/// A colimit in finite sets: classes of `(object, element)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colimit {
    /// Representative of each class: the least `(object id, element)` pair.
    pub reps: Vec<(usize, usize)>,
    /// `injections[x][e]` is the class of element `e` of `F(x)`.
    pub injections: Vec<Vec<usize>>,
}

impl Colimit {
    pub fn size(&self) -> usize {
        self.reps.len()
    }
}

/// A limit in finite sets: the matching families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limit {
    /// One element per object, in lexicographic order.
    pub families: Vec<Vec<usize>>,
}

impl Limit {
    pub fn size(&self) -> usize {
        self.families.len()
    }

    pub fn projection(&self, x: usize) -> Vec<usize> {
        self.families.iter().map(|f| f[x]).collect()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Disjoint union of the values modulo the zigzags generated by the action.
pub fn finset_colimit(f: &SetValuedFunctor) -> Colimit {
    let c = &*f.source;
    let mut offset = vec![0; f.sizes.len() + 1];
    for (x, &n) in f.sizes.iter().enumerate() {
        offset[x + 1] = offset[x] + n;
    }
    let total = offset[f.sizes.len()];
    let mut parent: Vec<usize> = (0..total).collect();
    for (m, act) in f.action.iter().enumerate() {
        let (s, t) = (c.source(m), c.target(m));
        for (e, &v) in act.iter().enumerate() {
            let (a, b) = (find(&mut parent, offset[s] + e), find(&mut parent, offset[t] + v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    // order pairs by object id, then element
    let mut order: Vec<(usize, usize)> = (0..f.sizes.len()).flat_map(|x| (0..f.sizes[x]).map(move |e| (x, e))).collect();
    order.sort_by(|a, b| c.object(a.0).cmp(c.object(b.0)).then(a.1.cmp(&b.1)));
    let mut class_of_root = vec![usize::MAX; total];
    let mut reps = Vec::new();
    for &(x, e) in &order {
        let r = find(&mut parent, offset[x] + e);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = reps.len();
            reps.push((x, e));
        }
    }
    let injections = (0..f.sizes.len())
        .map(|x| (0..f.sizes[x]).map(|e| class_of_root[find(&mut parent, offset[x] + e)]).collect())
        .collect();
    Colimit { reps, injections }
}

/// Matching families, found by backtracking in object order.
pub fn finset_limit(f: &SetValuedFunctor) -> Limit {
    let c = &*f.source;
    let n = f.sizes.len();
    // constraints checked once both endpoints are assigned
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for m in 0..c.num_morphisms() {
        let (s, t) = (c.source(m), c.target(m));
        checks[s.max(t)].push(m);
    }
    let mut families = Vec::new();
    let mut cur = vec![0usize; n];
    fn go(f: &SetValuedFunctor, checks: &[Vec<usize>], x: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if x == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..f.sizes[x] {
            cur[x] = e;
            let ok = checks[x].iter().all(|&m| {
                let (s, t) = (f.source.source(m), f.source.target(m));
                f.action[m][cur[s]] == cur[t]
            });
            if ok {
                go(f, checks, x + 1, cur, out);
            }
        }
    }
    go(f, &checks, 0, &mut cur, &mut families);
    Limit { families }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cat::{CategoryBuilder, FinCategory};

    #[test]
    fn coproduct_and_product_on_discrete() {
        let c = Arc::new(FinCategory::discrete(["a", "b"]));
        let f = SetValuedFunctor::from_tables(c.clone(), [("a", 1), ("b", 1)], []).unwrap();
        assert_eq!(finset_colimit(&f).size(), 2);
        let g = SetValuedFunctor::from_tables(c, [("a", 2), ("b", 3)], []).unwrap();
        assert_eq!(finset_limit(&g).size(), 6);
    }

    #[test]
    fn arrow_identifying_both_elements() {
        let mut b = CategoryBuilder::new();
        b.object("a").object("b").morphism("f", "a", "b", 1);
        let c = Arc::new(b.build().unwrap());
        let f = SetValuedFunctor::from_tables(c, [("a", 2), ("b", 1)], [("f", vec![0, 0])]).unwrap();
        let col = finset_colimit(&f);
        assert_eq!(col.size(), 1);
        assert_eq!(col.reps, vec![(0, 0)]);
    }

    #[test]
    fn equalizer_agreeing_on_one_element() {
        let mut b = CategoryBuilder::new();
        b.object("a").object("b").morphism("f", "a", "b", 1).morphism("g", "a", "b", 1);
        let c = Arc::new(b.build().unwrap());
        let f = SetValuedFunctor::from_tables(c, [("a", 2), ("b", 2)], [("f", vec![0, 1]), ("g", vec![0, 0])]).unwrap();
        // oracle: filter a × b by f(x) = y = g(x)
        let oracle = (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).filter(|&(x, y)| [0, 1][x] == y && [0, 0][x] == y).count();
        assert_eq!(finset_limit(&f).size(), oracle);
        assert_eq!(oracle, 1);
    }

    #[test]
    fn empty_source() {
        let c = Arc::new(FinCategory::discrete(Vec::<String>::new()));
        let f = SetValuedFunctor::new(c, vec![], vec![]).unwrap();
        assert_eq!(finset_colimit(&f).size(), 0);
        assert_eq!(finset_limit(&f).size(), 1);
    }
}
