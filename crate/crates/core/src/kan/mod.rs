//! Pointwise Kan extensions of finite-set-valued functors.

mod beck;
mod comma;
mod extend;
mod limits;
pub mod solver;
mod universal;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cat::{CatError, FinCategory, FinFunctor, Law, LawReport, Violation};

pub use beck::{beck_chevalley_check, BeckChevalleyReport, Mismatch, Square};
pub use comma::{comma_category, under_category, CommaCategory};
pub use extend::{kan_extend, kan_extend_with, KanExtension};
pub use limits::{finset_colimit, finset_limit, Colimit, Limit};
pub use universal::{perturb_delete, perturb_duplicate, verify_kan_universal, Failure, FailureKind, UniversalReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A functor into finite sets: `value(x) = {0, .., sizes[x]-1}` and each
/// morphism acts by an index vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetValuedFunctor {
    pub source: Arc<FinCategory>,
    pub sizes: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl SetValuedFunctor {
    pub fn new(source: Arc<FinCategory>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self, CatError> {
        if sizes.len() != source.num_objects() || action.len() != source.num_morphisms() {
            return Err(CatError::Malformed("set-valued functor tables have the wrong length".into()));
        }
        for (m, f) in action.iter().enumerate() {
            let (s, t) = (source.source(m), source.target(m));
            if f.len() != sizes[s] || f.iter().any(|&v| v >= sizes[t]) {
                return Err(CatError::Malformed(format!("action of {} is not a function between the value sets", source.mor_id(m))));
            }
        }
        Ok(SetValuedFunctor { source, sizes, action })
    }

    /// Build from an object-size table and an action table keyed by morphism id;
    /// identities may be omitted.
    pub fn from_tables<'a, S, A>(source: Arc<FinCategory>, sizes: S, action: A) -> Result<Self, CatError>
    where
        S: IntoIterator<Item = (&'a str, usize)>,
        A: IntoIterator<Item = (&'a str, Vec<usize>)>,
    {
        let mut sz = vec![usize::MAX; source.num_objects()];
        for (x, n) in sizes {
            let i = source
                .object_index(x)
                .ok_or_else(|| CatError::Malformed(format!("undeclared object {x:?}")))?;
            sz[i] = n;
        }
        if let Some(i) = sz.iter().position(|&n| n == usize::MAX) {
            return Err(CatError::Malformed(format!("no value set for {:?}", source.object(i))));
        }
        let mut act: Vec<Option<Vec<usize>>> = vec![None; source.num_morphisms()];
        for (m, f) in action {
            let i = source
                .morphism_index(m)
                .ok_or_else(|| CatError::Malformed(format!("undeclared morphism {m:?}")))?;
            act[i] = Some(f);
        }
        let mut full = Vec::with_capacity(act.len());
        for (m, f) in act.into_iter().enumerate() {
            match f {
                Some(f) => full.push(f),
                None if source.is_identity(m) => full.push((0..sz[source.source(m)]).collect()),
                None => return Err(CatError::Malformed(format!("no action given for {:?}", source.mor_id(m)))),
            }
        }
        Self::new(source, sz, full)
    }

    /// The constant functor with value of size `n`.
    pub fn constant(source: Arc<FinCategory>, n: usize) -> Self {
        let sizes = vec![n; source.num_objects()];
        let action = vec![(0..n).collect(); source.num_morphisms()];
        SetValuedFunctor { source, sizes, action }
    }

    /// `Hom(x, -)`, elements indexed in hom order.
    pub fn representable(source: Arc<FinCategory>, x: usize) -> Self {
        let sizes: Vec<usize> = (0..source.num_objects()).map(|y| source.hom(x, y).len()).collect();
        let action = source
            .morphisms()
            .iter()
            .enumerate()
            .map(|(m, mor)| {
                source
                    .hom(x, mor.source)
                    .iter()
                    .map(|&f| {
                        let g = source.compose(m, f).expect("composition is total on composable pairs");
                        source.hom(x, mor.target).iter().position(|&h| h == g).unwrap()
                    })
                    .collect()
            })
            .collect();
        SetValuedFunctor { source, sizes, action }
    }

    /// `F ∘ K`.
    pub fn precompose(&self, k: &FinFunctor) -> Result<Self, CatError> {
        if *k.target != *self.source {
            return Err(CatError::Precondition("precomposition along a functor with the wrong target".into()));
        }
        let sizes = (0..k.source.num_objects()).map(|c| self.sizes[k.obj(c)]).collect();
        let action = (0..k.source.num_morphisms()).map(|m| self.action[k.mor(m)].clone()).collect();
        Ok(SetValuedFunctor {
            source: k.source.clone(),
            sizes,
            action,
        })
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Identities act trivially and composites act by composition.
    pub fn validate(&self) -> LawReport {
        let c = &*self.source;
        let mut out = Vec::new();
        for x in 0..c.num_objects() {
            let id = c.identity(x);
            if self.action[id].iter().enumerate().any(|(i, &v)| i != v) {
                out.push(Violation::new(Law::FunctorIdentity, [c.mor_id(id)], ""));
            }
        }
        for (g, f, h) in c.compose_entries() {
            let composite: Vec<usize> = self.action[f].iter().map(|&v| self.action[g][v]).collect();
            if composite != self.action[h] {
                out.push(Violation::new(Law::FunctorComposition, [c.mor_id(g), c.mor_id(f)], ""));
            }
        }
        LawReport::new(out)
    }
}
