//! Enumeration of natural transformations between set-valued functors.
//!
//! Variables are the pairs `(object, element)` of the domain functor. Fixing
//! `α_c(e) = v` forces `α_{c'}(A(h)e) = B(h)v` along every `h: c → c'`, so
//! each choice is propagated before branching again.

use super::SetValuedFunctor;
use crate::cat::CatError;

/// Components `comps[c][e]`.
pub type Components = Vec<Vec<usize>>;

#[derive(Debug, Clone)]
pub struct Search<'a> {
    a: &'a SetValuedFunctor,
    b: &'a SetValuedFunctor,
    offset: Vec<usize>,
    domains: Vec<Vec<bool>>,
    out_of: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    pub fn new(a: &'a SetValuedFunctor, b: &'a SetValuedFunctor) -> Result<Self, CatError> {
        if *a.source != *b.source {
            return Err(CatError::Precondition("functors have different sources".into()));
        }
        let c = &*a.source;
        let mut offset = vec![0; a.sizes.len() + 1];
        for (x, &n) in a.sizes.iter().enumerate() {
            offset[x + 1] = offset[x] + n;
        }
        let domains = (0..a.sizes.len()).flat_map(|x| (0..a.sizes[x]).map(move |_| vec![true; b.sizes[x]])).collect();
        let out_of = (0..c.num_objects()).map(|x| c.out_of(x).collect()).collect();
        Ok(Search {
            a,
            b,
            offset,
            domains,
            out_of,
        })
    }

    /// Keep only values `v` of `α_obj(elem)` with `keep(v)`.
    pub fn restrict(&mut self, obj: usize, elem: usize, keep: impl Fn(usize) -> bool) {
        for (v, ok) in self.domains[self.offset[obj] + elem].iter_mut().enumerate() {
            *ok &= keep(v);
        }
    }

    fn object_of(&self, var: usize) -> usize {
        self.offset.partition_point(|&o| o <= var) - 1
    }

    fn propagate(&self, assign: &mut [Option<usize>], var: usize, val: usize) -> bool {
        let mut stack = vec![(var, val)];
        while let Some((var, val)) = stack.pop() {
            match assign[var] {
                Some(w) if w == val => continue,
                Some(_) => return false,
                None if !self.domains[var][val] => return false,
                None => assign[var] = Some(val),
            }
            let x = self.object_of(var);
            let e = var - self.offset[x];
            for &h in &self.out_of[x] {
                let t = self.a.source.target(h);
                stack.push((self.offset[t] + self.a.action[h][e], self.b.action[h][val]));
            }
        }
        true
    }

    fn go(&self, assign: Vec<Option<usize>>, cap: usize, out: &mut Vec<Components>) {
        if out.len() >= cap {
            return;
        }
        let Some(var) = assign.iter().position(Option::is_none) else {
            let comps = (0..self.a.sizes.len())
                .map(|x| (self.offset[x]..self.offset[x + 1]).map(|v| assign[v].unwrap()).collect())
                .collect();
            out.push(comps);
            return;
        };
        for val in 0..self.domains[var].len() {
            if !self.domains[var][val] {
                continue;
            }
            let mut next = assign.clone();
            if self.propagate(&mut next, var, val) {
                self.go(next, cap, out);
                if out.len() >= cap {
                    return;
                }
            }
        }
    }

    /// At most `cap` solutions, in lexicographic order of the flattened components.
    pub fn solutions(&self, cap: usize) -> Vec<Components> {
        let mut out = Vec::new();
        self.go(vec![None; self.domains.len()], cap, &mut out);
        out
    }

    pub fn count(&self, cap: usize) -> usize {
        self.solutions(cap).len()
    }
}

pub fn nat_transformations(a: &SetValuedFunctor, b: &SetValuedFunctor) -> Result<Vec<Components>, CatError> {
    Ok(Search::new(a, b)?.solutions(usize::MAX))
}

pub fn is_natural(a: &SetValuedFunctor, b: &SetValuedFunctor, comps: &Components) -> bool {
    let c = &*a.source;
    (0..c.num_morphisms()).all(|h| {
        let (s, t) = (c.source(h), c.target(h));
        (0..a.sizes[s]).all(|e| comps[t][a.action[h][e]] == b.action[h][comps[s][e]])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjunction::c1;

    fn brute(a: &SetValuedFunctor, b: &SetValuedFunctor) -> usize {
        // all tuples of functions, filtered
        let n = a.sizes.len();
        let mut total = 0;
        let mut comps: Components = (0..n).map(|x| vec![0; a.sizes[x]]).collect();
        let flat: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..a.sizes[x]).map(move |e| (x, e))).collect();
        if flat.iter().any(|&(x, _)| b.sizes[x] == 0) {
            return 0;
        }
        loop {
            if is_natural(a, b, &comps) {
                total += 1;
            }
            let mut i = 0;
            loop {
                if i == flat.len() {
                    return total;
                }
                let (x, e) = flat[i];
                comps[x][e] += 1;
                if comps[x][e] < b.sizes[x] {
                    break;
                }
                comps[x][e] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn counts_match_brute_force() {
        let c = c1();
        let a = SetValuedFunctor::from_tables(c.clone(), [("Empty", 2), ("NonEmpty", 2)], [("Empty<=NonEmpty", vec![0, 0])]).unwrap();
        let b = SetValuedFunctor::from_tables(c.clone(), [("Empty", 3), ("NonEmpty", 2)], [("Empty<=NonEmpty", vec![0, 1, 1])]).unwrap();
        for (x, y) in [(&a, &b), (&b, &a), (&a, &a), (&b, &b)] {
            assert_eq!(nat_transformations(x, y).unwrap().len(), brute(x, y));
        }
        for t in nat_transformations(&a, &b).unwrap() {
            assert!(is_natural(&a, &b, &t));
        }
    }

    #[test]
    fn restriction_prunes() {
        let c = c1();
        let a = SetValuedFunctor::constant(c.clone(), 1);
        let b = SetValuedFunctor::constant(c, 2);
        let mut s = Search::new(&a, &b).unwrap();
        assert_eq!(s.count(10), 2);
        s.restrict(0, 0, |v| v == 1);
        assert_eq!(s.solutions(10), vec![vec![vec![1], vec![1]]]);
    }
}
