//! The list (free monoid) monad on sets, handled elementwise.
//!
//! Its carrier sets are infinite, so it cannot be a [`FinCategory`](crate::cat::FinCategory)
//! monad; laws and idempotence are checked on all elements up to a length bound.

use std::collections::HashMap;
use std::fmt;

use super::monad::{Idempotence, IdempotenceCheck, IdempotenceWitness};
use crate::cat::{Law, LawReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Atom(u32),
    Seq(Vec<Value>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(0) => f.write_str("•"),
            Value::Atom(i) => write!(f, "a{i}"),
            Value::Seq(xs) => {
                f.write_str("[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// `T(X) = X*` with `η(x) = [x]` and `μ` = concatenation.
#[derive(Debug, Clone, Copy)]
pub struct ListMonad {
    /// Base set size; elements are `Atom(0..base)`.
    pub base: u32,
    /// Longest list enumerated at each layer.
    pub max_len: usize,
}

impl Default for ListMonad {
    fn default() -> Self {
        ListMonad { base: 1, max_len: 2 }
    }
}

impl ListMonad {
    pub fn unit(&self, x: Value) -> Value {
        Value::Seq(vec![x])
    }

    pub fn join(&self, tt: &Value) -> Value {
        match tt {
            Value::Seq(xs) => Value::Seq(
                xs.iter()
                    .flat_map(|x| match x {
                        Value::Seq(inner) => inner.clone(),
                        atom => vec![atom.clone()],
                    })
                    .collect(),
            ),
            atom => atom.clone(),
        }
    }

    pub fn fmap(&self, t: &Value, f: impl Fn(&Value) -> Value) -> Value {
        match t {
            Value::Seq(xs) => Value::Seq(xs.iter().map(f).collect()),
            atom => f(atom),
        }
    }

    /// Elements of `T^layers(X)` with every list of length at most `max_len`.
    pub fn enumerate(&self, layers: usize) -> Vec<Value> {
        let mut level: Vec<Value> = (0..self.base).map(Value::Atom).collect();
        for _ in 0..layers {
            let mut next = vec![Value::Seq(vec![])];
            let mut frontier: Vec<Vec<Value>> = vec![vec![]];
            for _ in 0..self.max_len {
                let mut grown = Vec::new();
                for prefix in &frontier {
                    for x in &level {
                        let mut p = prefix.clone();
                        p.push(x.clone());
                        next.push(Value::Seq(p.clone()));
                        grown.push(p);
                    }
                }
                frontier = grown;
            }
            level = next;
        }
        level
    }

    /// Unit and associativity laws on every enumerated element.
    pub fn check_laws(&self) -> LawReport {
        let mut out = Vec::new();
        for t in self.enumerate(1) {
            if self.join(&self.unit(t.clone())) != t {
                out.push(Violation::new(Law::MonadUnit, [t.to_string(), "μ∘ηT".into()], ""));
            }
            if self.join(&self.fmap(&t, |x| self.unit(x.clone()))) != t {
                out.push(Violation::new(Law::MonadUnit, [t.to_string(), "μ∘Tη".into()], ""));
            }
        }
        for ttt in self.enumerate(3) {
            let lhs = self.join(&self.join(&ttt));
            let rhs = self.join(&self.fmap(&ttt, |x| self.join(x)));
            if lhs != rhs {
                out.push(Violation::new(Law::MonadAssociativity, [ttt.to_string()], ""));
            }
        }
        LawReport::new(out)
    }
}

impl IdempotenceCheck for ListMonad {
    /// Look for two distinct elements of `T(T(X))` with the same join.
    fn idempotence(&self) -> Idempotence {
        let mut seen: HashMap<Value, Value> = HashMap::new();
        let mut tt = self.enumerate(2);
        tt.sort();
        for v in tt {
            let j = self.join(&v);
            if let Some(prev) = seen.get(&j) {
                return Idempotence {
                    idempotent: false,
                    witness: Some(IdempotenceWitness {
                        object: self.base.to_string(),
                        detail: format!("μ({prev}) = μ({v}) = {j}"),
                    }),
                };
            }
            seen.insert(j, v);
        }
        Idempotence {
            idempotent: true,
            witness: None,
        }
    }
}
