//! Skeletal concrete categories: objects are finite carriers `0..k`, morphisms
//! are the functions selected by a predicate. All morphisms sit at grade 0,
//! since a composite of non-identities may be an identity (`2 -> 1 -> 2`).

use std::collections::{BTreeSet, HashMap};

use crate::cat::{FinCategory, Morphism};

/// A concrete finite category together with the underlying functions.
#[derive(Debug, Clone)]
pub struct Concrete {
    pub cat: FinCategory,
    pub sizes: Vec<usize>,
    pub funcs: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize, Vec<usize>), usize>,
}

impl Concrete {
    /// Build from named carriers; `is_morphism(src, tgt, f)` filters functions.
    pub fn new(objects: Vec<(String, usize)>, is_morphism: impl Fn(usize, usize, &[usize]) -> bool) -> Self {
        let sizes: Vec<usize> = objects.iter().map(|o| o.1).collect();
        let names: Vec<String> = objects.into_iter().map(|o| o.0).collect();
        let mut morphisms = Vec::new();
        let mut funcs = Vec::new();
        let mut lookup = HashMap::new();
        let mut identities = vec![usize::MAX; names.len()];
        for s in 0..names.len() {
            for t in 0..names.len() {
                for f in all_functions(sizes[s], sizes[t]) {
                    if !is_morphism(s, t, &f) {
                        continue;
                    }
                    let is_id = s == t && f.iter().enumerate().all(|(i, &v)| i == v);
                    let idx = morphisms.len();
                    if is_id {
                        identities[s] = idx;
                    }
                    morphisms.push(Morphism {
                        id: function_id(&names[s], &names[t], &f),
                        source: s,
                        target: t,
                        grade: 0,
                    });
                    lookup.insert((s, t, f.clone()), idx);
                    funcs.push(f);
                }
            }
        }
        assert!(
            identities.iter().all(|&i| i != usize::MAX),
            "morphism predicate must admit identities"
        );
        let mut compose = HashMap::new();
        for f in 0..morphisms.len() {
            for g in 0..morphisms.len() {
                if morphisms[g].source != morphisms[f].target {
                    continue;
                }
                let h: Vec<usize> = funcs[f].iter().map(|&i| funcs[g][i]).collect();
                let key = (morphisms[f].source, morphisms[g].target, h);
                let hi = *lookup
                    .get(&key)
                    .expect("morphism predicate must be closed under composition");
                compose.insert((g, f), hi);
            }
        }
        Concrete {
            cat: FinCategory::assemble(names, morphisms, identities, compose),
            sizes,
            funcs,
            lookup,
        }
    }

    pub fn find(&self, s: usize, t: usize, f: &[usize]) -> Option<usize> {
        self.lookup.get(&(s, t, f.to_vec())).copied()
    }

    pub fn object_of_size(&self, k: usize) -> Option<usize> {
        self.sizes.iter().position(|&s| s == k)
    }
}

fn function_id(s: &str, t: &str, f: &[usize]) -> String {
    let body: Vec<String> = f.iter().map(|v| v.to_string()).collect();
    format!("{s}->{t}:[{}]", body.join(","))
}

/// All functions `0..k -> 0..m` in lexicographic order.
pub fn all_functions(k: usize, m: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if m == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur = vec![0; k];
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < m {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Skeletal finite sets `0, 1, ..., n` with all functions.
pub fn finset(n: usize) -> Concrete {
    let objects = (0..=n).map(|k| (k.to_string(), k)).collect();
    Concrete::new(objects, |_, _, _| true)
}

/// A finite poset on `0..k`, given by its strict order pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poset {
    pub size: usize,
    pub less: BTreeSet<(usize, usize)>,
}

impl Poset {
    pub fn antichain(size: usize) -> Self {
        Poset {
            size,
            less: BTreeSet::new(),
        }
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.less.contains(&(i, j))
    }

    pub fn name(&self) -> String {
        let rel: Vec<String> = self.less.iter().map(|(i, j)| format!("{i}<{j}")).collect();
        format!("P{}[{}]", self.size, rel.join(","))
    }

    pub fn is_monotone(&self, to: &Poset, f: &[usize]) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| !self.leq(i, j) || to.leq(f[i], f[j])))
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    all_functions(k, k)
        .into_iter()
        .filter(|p| p.iter().collect::<BTreeSet<_>>().len() == k)
        .collect()
}

/// Posets of size at most `n`, one per isomorphism class, ordered by size
/// then relation. Each representative is the lexicographically least relabeling.
pub fn posets_up_to_iso(n: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    for k in 0..=n {
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        let perms = permutations(k);
        let mut reps = BTreeSet::new();
        for mask in 0u64..(1 << pairs.len()) {
            let less: BTreeSet<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let antisym = less.iter().all(|&(i, j)| !less.contains(&(j, i)));
            let trans = less
                .iter()
                .all(|&(i, j)| less.iter().all(|&(a, b)| a != j || less.contains(&(i, b))));
            if !antisym || !trans {
                continue;
            }
            let canon = perms
                .iter()
                .map(|p| less.iter().map(|&(i, j)| (p[i], p[j])).collect::<BTreeSet<_>>())
                .min()
                .unwrap_or_default();
            reps.insert(canon);
        }
        out.extend(reps.into_iter().map(|less| Poset { size: k, less }));
    }
    out
}

/// Skeletal posets of size at most `n` with monotone maps.
pub fn posets(n: usize) -> (Concrete, Vec<Poset>) {
    let ps = posets_up_to_iso(n);
    let objects = ps.iter().map(|p| (p.name(), p.size)).collect();
    let c = Concrete::new(objects, |s, t, f| ps[s].is_monotone(&ps[t], f));
    (c, ps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::validate_category;

    #[test]
    fn finset_morphism_count() {
        // Oracle: Σ_{k,m ≤ 3} m^k with 0^0 = 1.
        let oracle: usize = (0..=3u32).flat_map(|k| (0..=3usize).map(move |m| m.pow(k))).sum();
        let c = finset(3);
        assert_eq!(c.cat.num_morphisms(), oracle);
        assert_eq!(oracle, 60);
        assert!(validate_category(&c.cat).is_ok());
    }

    #[test]
    fn poset_classes() {
        let counts: Vec<usize> = (0..=3).map(|k| posets_up_to_iso(3).iter().filter(|p| p.size == k).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5]);
        let (c, _) = posets(2);
        assert!(validate_category(&c.cat).is_ok());
    }
}
