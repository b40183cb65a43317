//! External criteria on grid tokens and their comparison with definability.

mod expr;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adjunction::{c0, c1};
use crate::cat::{thin_from_preorder, thin_functor, validate_nat_trans, CatError, FinCategory, FinFunctor, FinNatTrans, LawReport, Preorder};
use crate::hsg::{Delta, Grid, GridError, IndexValue};
use crate::temporal::{evaluate_at_time, DepGraph, TemporalError, TimeBinding};

pub use expr::{CmpOp, GuardExpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JGuardError {
    #[error("guard syntax: {0}")]
    Parse(String),
    #[error("guard type error: {0}")]
    Type(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("malformed criterion: {0}")]
    Malformed(String),
    #[error(transparent)]
    Temporal(#[from] TemporalError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

type Result<T> = std::result::Result<T, JGuardError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    Expr(GuardExpr),
    /// Tokens for which the guard holds.
    Table(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalCriterion {
    pub guard: Guard,
    /// Carrier per token, used when the guard holds.
    pub carrier: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub dep: DepGraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeBinding>,
}

impl ExternalCriterion {
    pub fn new(guard: Guard, carrier: BTreeMap<String, Vec<String>>) -> Self {
        ExternalCriterion {
            guard,
            carrier,
            dep: DepGraph::default(),
            time: None,
        }
    }

    /// The same singleton carrier `{•}` at every token of `g`.
    pub fn with_point_carriers(guard: Guard, g: &Grid) -> Self {
        let carrier = g.tokens().iter().map(|t| (t.id.clone(), vec!["•".to_string()])).collect();
        Self::new(guard, carrier)
    }

    fn type_check(&self, e: &GuardExpr, g: &Grid) -> Result<()> {
        match e {
            GuardExpr::True | GuardExpr::False | GuardExpr::DeltaIs(_) => Ok(()),
            GuardExpr::CoordCmp { axis, op, value } => {
                let a = g.axis(axis).ok_or_else(|| JGuardError::Type(format!("no axis {axis:?}")))?;
                let numeric = a.indices.iter().all(|v| v.as_int().is_some());
                match (numeric, value) {
                    (true, IndexValue::Int(_)) => Ok(()),
                    (true, IndexValue::Sym(s)) => Err(JGuardError::Type(format!("axis {axis:?} is numeric but {s:?} is not"))),
                    (false, _) if op.is_order() => Err(JGuardError::Type(format!("axis {axis:?} is symbolic; only = and != apply"))),
                    (false, v) if a.position(v).is_none() => Err(JGuardError::Type(format!("{v} is not an index of axis {axis:?}"))),
                    (false, _) => Ok(()),
                }
            }
            GuardExpr::ReachableWithin(_) => {
                let tb = self
                    .time
                    .as_ref()
                    .ok_or_else(|| JGuardError::Type("reachable_within needs a time binding".into()))?;
                tb.times(g)?;
                Ok(())
            }
            GuardExpr::And(xs) | GuardExpr::Or(xs) => xs.iter().try_for_each(|x| self.type_check(x, g)),
            GuardExpr::Not(x) => self.type_check(x, g),
        }
    }

    fn holds_expr(&self, e: &GuardExpr, g: &Grid, t: usize) -> Result<bool> {
        Ok(match e {
            GuardExpr::True => true,
            GuardExpr::False => false,
            GuardExpr::DeltaIs(d) => g.delta(t) == *d,
            GuardExpr::CoordCmp { axis, op, value } => {
                let a = g.axis_index(axis).unwrap();
                let v = g.value(t, a);
                match (v, value) {
                    (IndexValue::Int(x), IndexValue::Int(y)) => op.holds(x, y),
                    _ => op.holds(v, value),
                }
            }
            GuardExpr::ReachableWithin(h) => {
                let tb = self.time.as_ref().unwrap();
                evaluate_at_time(g, &self.dep, tb, *h, &g.tokens()[t].id)?.is_nonempty()
            }
            GuardExpr::And(xs) => {
                for x in xs {
                    if !self.holds_expr(x, g, t)? {
                        return Ok(false);
                    }
                }
                true
            }
            GuardExpr::Or(xs) => {
                for x in xs {
                    if self.holds_expr(x, g, t)? {
                        return Ok(true);
                    }
                }
                false
            }
            GuardExpr::Not(x) => !self.holds_expr(x, g, t)?,
        })
    }

    /// Static checks against the grid: guard typing, table entries, carriers.
    pub fn validate(&self, g: &Grid) -> Result<()> {
        match &self.guard {
            Guard::Expr(e) => self.type_check(e, g)?,
            Guard::Table(ts) => {
                if let Some(t) = ts.iter().find(|t| g.token_index(t).is_none()) {
                    return Err(JGuardError::NotFound(format!("guard table token {t:?}")));
                }
            }
        }
        if let Some(t) = self.carrier.keys().find(|t| g.token_index(t).is_none()) {
            return Err(JGuardError::NotFound(format!("carrier token {t:?}")));
        }
        Ok(())
    }

    fn holds(&self, g: &Grid, t: usize) -> Result<bool> {
        match &self.guard {
            Guard::Expr(e) => self.holds_expr(e, g, t),
            Guard::Table(ts) => Ok(ts.contains(&g.tokens()[t].id)),
        }
    }
}

/// `J(x)`: the carrier when the guard holds, otherwise empty.
pub fn guard_eval(j: &ExternalCriterion, g: &Grid, x: &str) -> Result<Vec<String>> {
    j.validate(g)?;
    let t = g.token_index(x).ok_or_else(|| JGuardError::NotFound(format!("token {x:?}")))?;
    eval_at(j, g, t)
}

fn eval_at(j: &ExternalCriterion, g: &Grid, t: usize) -> Result<Vec<String>> {
    if !j.holds(g, t)? {
        return Ok(vec![]);
    }
    let id = &g.tokens()[t].id;
    j.carrier
        .get(id)
        .cloned()
        .ok_or_else(|| JGuardError::Malformed(format!("guard holds at {id:?} but no carrier is given")))
}

/// `J(x) ≠ ∅` per token, in grid order.
pub fn nonempty_table(j: &ExternalCriterion, g: &Grid) -> Result<Vec<bool>> {
    j.validate(g)?;
    (0..g.len()).map(|t| Ok(!eval_at(j, g, t)?.is_empty())).collect()
}

/// `Tr: C₀ → C₁`, Undef ↦ Empty, Define ↦ NonEmpty.
pub fn tr() -> FinFunctor {
    thin_functor("Tr", c0(), c1(), vec![0, 1]).expect("Tr is monotone")
}

/// Tokens ordered by definability: every ⊥ token below every ⊤ token.
pub fn token_category(g: &Grid) -> Arc<FinCategory> {
    let d = g.deltas();
    let p = Preorder::from_fn(g.tokens().iter().map(|t| t.id.clone()), |i, j| {
        i == j || (d[i] == Delta::Bot && d[j] == Delta::Top)
    });
    Arc::new(thin_from_preorder(&p).expect("the relation is a preorder"))
}

#[derive(Debug, Clone)]
pub enum Kappa {
    Exists { kappa: FinNatTrans, naturality: LawReport },
    /// First ⊥ token with a nonempty carrier.
    Missing { token: String },
}

fn j0_witness(g: &Grid, nonempty: &[bool]) -> Option<String> {
    (0..g.len())
        .find(|&t| g.delta(t) == Delta::Bot && nonempty[t])
        .map(|t| g.tokens()[t].id.clone())
}

/// `κ: Σ_emp∘J ⇒ Tr∘Σ_def`, or the token that rules it out.
pub fn kappa_transform(j: &ExternalCriterion, g: &Grid) -> Result<Kappa> {
    let nonempty = nonempty_table(j, g)?;
    if let Some(token) = j0_witness(g, &nonempty) {
        return Ok(Kappa::Missing { token });
    }
    let t = token_category(g);
    let c1 = c1();
    let left_map = nonempty.iter().map(|&n| usize::from(n)).collect();
    let right_map = g.deltas().iter().map(|d| usize::from(d.is_top())).collect();
    let left = thin_functor("Σ_emp∘J", t.clone(), c1.clone(), left_map)?;
    let right = thin_functor("Tr∘Σ_def", t.clone(), c1.clone(), right_map)?;
    let comps = (0..t.num_objects()).map(|x| c1.hom(left.obj(x), right.obj(x))[0]).collect();
    let kappa = FinNatTrans::from_indices("κ", left, right, comps)?;
    let naturality = validate_nat_trans(&kappa);
    Ok(Kappa::Exists { kappa, naturality })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuasiMode {
    Isomorphism,
    Implication,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomRow {
    pub token: String,
    pub b: String,
    /// `|Hom_C₁(Σ_emp J(x), b)|`
    pub left: usize,
    /// `|Hom_C₀(Σ_def x, Tr⁻¹ b)|`
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiReport {
    pub mode: QuasiMode,
    pub rows: Vec<HomRow>,
    pub witness: Option<String>,
}

pub fn check_quasi_adjunction(j: &ExternalCriterion, g: &Grid) -> Result<QuasiReport> {
    let nonempty = nonempty_table(j, g)?;
    let (c0, c1) = (c0(), c1());
    let mut rows = Vec::with_capacity(2 * g.len());
    for t in 0..g.len() {
        let sx = usize::from(g.delta(t).is_top());
        for b in 0..c1.num_objects() {
            rows.push(HomRow {
                token: g.tokens()[t].id.clone(),
                b: c1.object(b).to_string(),
                left: c1.hom(usize::from(nonempty[t]), b).len(),
                // Tr is the identity on indices
                right: c0.hom(sx, b).len(),
            });
        }
    }
    let (mode, witness) = if let Some(w) = j0_witness(g, &nonempty) {
        (QuasiMode::Fails, Some(w))
    } else if rows.iter().all(|r| r.left == r.right) {
        (QuasiMode::Isomorphism, None)
    } else if let Some(r) = rows.iter().find(|r| r.right > 0 && r.left == 0) {
        (QuasiMode::Fails, Some(r.token.clone()))
    } else {
        (QuasiMode::Implication, None)
    };
    Ok(QuasiReport { mode, rows, witness })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetParams {
    /// Observed or granted tokens.
    #[serde(default)]
    pub tokens: Vec<String>,
    #[serde(default)]
    pub horizon: Option<i64>,
    #[serde(default)]
    pub dep: DepGraph,
    #[serde(default)]
    pub time: Option<TimeBinding>,
}

pub fn preset_guard(name: &str, g: &Grid, params: &PresetParams) -> Result<ExternalCriterion> {
    if let Some(t) = params.tokens.iter().find(|t| g.token_index(t).is_none()) {
        return Err(JGuardError::NotFound(format!("token {t:?}")));
    }
    let table = || Guard::Table(params.tokens.iter().cloned().collect());
    let j = match name {
        "observation" | "authorization" => ExternalCriterion::with_point_carriers(table(), g),
        "reachability" => {
            let horizon = params
                .horizon
                .ok_or_else(|| JGuardError::Malformed("reachability needs a horizon".into()))?;
            let mut j = ExternalCriterion::with_point_carriers(Guard::Expr(GuardExpr::ReachableWithin(horizon)), g);
            j.dep = params.dep.clone();
            j.time = params.time.clone();
            j
        }
        other => return Err(JGuardError::NotFound(format!("preset {other:?}"))),
    };
    j.validate(g)?;
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg::{build_grid, Axis, Token};

    fn grid() -> Grid {
        let axes = vec![Axis::new("time", (0..=5).map(i64::from))];
        let tokens = vec![
            Token::new("x", [("time", 1)], Delta::Top),
            Token::new("y", [("time", 5)], Delta::Top),
            Token::new("z", [("time", 0)], Delta::Bot),
        ];
        build_grid(axes, tokens).unwrap()
    }

    fn expr(s: &str, g: &Grid) -> ExternalCriterion {
        ExternalCriterion::with_point_carriers(Guard::Expr(s.parse().unwrap()), g)
    }

    #[test]
    fn guard_examples() {
        let g = grid();
        let j = expr("(delta_is ⊤)", &g);
        assert_eq!(guard_eval(&j, &g, "x").unwrap(), vec!["•"]);
        assert!(guard_eval(&j, &g, "z").unwrap().is_empty());
        let j = expr("(coord_cmp time <= 3)", &g);
        assert!(guard_eval(&j, &g, "y").unwrap().is_empty());
        let j = expr("(coord_cmp depth <= 3)", &g);
        assert!(matches!(guard_eval(&j, &g, "x"), Err(JGuardError::Type(_))));
        let j = expr("(coord_cmp time = early)", &g);
        assert!(matches!(guard_eval(&j, &g, "x"), Err(JGuardError::Type(_))));
    }

    #[test]
    fn trichotomy() {
        let g = grid();
        let sound = expr("(delta_is ⊤)", &g);
        let r = check_quasi_adjunction(&sound, &g).unwrap();
        assert_eq!(r.mode, QuasiMode::Isomorphism);
        match kappa_transform(&sound, &g).unwrap() {
            Kappa::Exists { kappa, naturality } => {
                assert!(naturality.is_ok());
                assert!((0..3).all(|x| kappa.source.target.is_identity(kappa.component(x))));
            }
            Kappa::Missing { .. } => panic!("κ should exist"),
        }

        let partial = expr("(and (delta_is ⊤) (coord_cmp time <= 3))", &g);
        let r = check_quasi_adjunction(&partial, &g).unwrap();
        assert_eq!(r.mode, QuasiMode::Implication);
        let y_empty = r.rows.iter().find(|r| r.token == "y" && r.b == "Empty").unwrap();
        assert_eq!((y_empty.left, y_empty.right), (1, 0));
        let Kappa::Exists { kappa, .. } = kappa_transform(&partial, &g).unwrap() else { panic!() };
        assert_eq!(kappa.source.target.mor_id(kappa.component(1)), "Empty<=NonEmpty");

        let unsound = expr("true", &g);
        let r = check_quasi_adjunction(&unsound, &g).unwrap();
        assert_eq!((r.mode, r.witness.as_deref()), (QuasiMode::Fails, Some("z")));
        assert!(matches!(kappa_transform(&unsound, &g).unwrap(), Kappa::Missing { token } if token == "z"));
    }

    #[test]
    fn presets() {
        let g = grid();
        let obs = preset_guard("observation", &g, &PresetParams { tokens: vec!["x".into()], ..Default::default() }).unwrap();
        assert_eq!(nonempty_table(&obs, &g).unwrap(), vec![true, false, false]);
        let auth = preset_guard("authorization", &g, &PresetParams::default()).unwrap();
        assert_eq!(nonempty_table(&auth, &g).unwrap(), vec![false; 3]);
        let params = PresetParams {
            horizon: Some(0),
            dep: DepGraph::new([("z", "x")]),
            time: Some(TimeBinding::new("time")),
            ..Default::default()
        };
        let reach = preset_guard("reachability", &g, &params).unwrap();
        // z is ⊥ and depends on x at t=1
        assert!(guard_eval(&reach, &g, "z").unwrap().is_empty());
        assert!(matches!(preset_guard("oracle", &g, &PresetParams::default()), Err(JGuardError::NotFound(_))));
    }
}
