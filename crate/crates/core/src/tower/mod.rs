//! The numeric depth tower with finite witnesses at each step.

mod frac;
mod poly;
mod ring;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::adjunction::{discrete_order, emptiness, verify_adjunction, AdjunctionError};
use crate::cat::Limits;
use crate::hsg::{build_grid, Axis, Delta, Token};
use crate::jguard::{check_quasi_adjunction, ExternalCriterion, Guard, GuardExpr, QuasiMode};

pub use frac::{check_frac_extension, fraction_field, rational, Domain, FieldTarget, FracReport, FractionField, Rational, PROBE_BOUND};
pub use poly::{free_ring_hom, FreeRingElement, FreeRingHom, Monomial};
pub use ring::FinRing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("malformed: {0}")]
    Malformed(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("{ring} is not an integral domain: {} · {} = 0", .witness.0, .witness.1)]
    NotADomain { ring: String, witness: (String, String) },
    #[error(transparent)]
    Adjunction(#[from] AdjunctionError),
}

pub const MAX_GENERATORS: usize = 2;
pub const MAX_RING: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeRingReport {
    pub generators: Vec<String>,
    pub target: String,
    pub assignments: usize,
    /// Assignments whose evaluation passed every hom law, counted once per
    /// distinct restriction to the generators.
    pub homs: usize,
    pub expected: usize,
    pub failures: Vec<String>,
}

impl FreeRingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.homs == self.expected
    }
}

fn samples(generators: &[&str]) -> Vec<FreeRingElement> {
    let c = FreeRingElement::constant;
    let mut out = vec![c(0), c(1), c(-1), c(2), c(7)];
    let gens: Vec<FreeRingElement> = generators.iter().map(|g| FreeRingElement::generator(g)).collect();
    for g in &gens {
        out.push(g.clone());
        out.push(g.pow(2));
        out.push(&g.pow(3) - &c(3));
        out.push(&(&c(2) * g) + &c(1));
    }
    if let [x, y] = gens.as_slice() {
        out.push(x * y);
        out.push(&(x * &y.pow(2)) - x);
    }
    out
}

/// Set maps `S → |R|` against ring maps `ℤ[S] → R`.
pub fn check_free_ring_universal(generators: &[&str], target: &FinRing) -> Result<FreeRingReport, TowerError> {
    if generators.len() > MAX_GENERATORS || target.len() > MAX_RING {
        return Err(TowerError::Capacity(format!(
            "{} generators into a ring of size {}; cap is {MAX_GENERATORS} / {MAX_RING}",
            generators.len(),
            target.len()
        )));
    }
    let n = target.len();
    let k = generators.len();
    let expected = n.pow(k as u32);
    let elems = samples(generators);
    let one = FreeRingElement::constant(1);
    let mut failures = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for code in 0..expected {
        let mut rest = code;
        let images: BTreeMap<String, usize> = generators
            .iter()
            .map(|g| {
                let v = rest % n;
                rest /= n;
                (g.to_string(), v)
            })
            .collect();
        let h = free_ring_hom(images.clone(), target)?;
        let mut ok = h.eval(&one)? == target.one;
        'pairs: for a in &elems {
            for b in &elems {
                let (ea, eb) = (h.eval(a)?, h.eval(b)?);
                if h.eval(&(a + b))? != target.add(ea, eb) || h.eval(&(a * b))? != target.mul(ea, eb) {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if !ok {
            failures.push(format!("assignment {images:?} does not give a ring map"));
            continue;
        }
        let on_generators: Vec<usize> = generators
            .iter()
            .map(|g| h.eval(&FreeRingElement::generator(g)))
            .collect::<Result<_, _>>()?;
        if !seen.insert(on_generators) {
            failures.push(format!("assignment {images:?} repeats an earlier map"));
        }
    }
    Ok(FreeRingReport {
        generators: generators.iter().map(|g| g.to_string()).collect(),
        target: target.name.clone(),
        assignments: expected,
        homs: seen.len(),
        expected,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    Definability,
    Emptiness,
    Set,
    OrdSet,
    Ring,
    Field,
    CompleteField,
}

pub const STAGES: [Stage; 7] = [
    Stage::Definability,
    Stage::Emptiness,
    Stage::Set,
    Stage::OrdSet,
    Stage::Ring,
    Stage::Field,
    Stage::CompleteField,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerNode {
    pub level: usize,
    pub label: Stage,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    InternalAdjunction,
    JRelative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    /// What was checked for this step; `None` for the symbolic step.
    pub witness: Option<String>,
    pub verified: bool,
    pub symbolic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tower {
    pub nodes: Vec<TowerNode>,
    pub edges: Vec<TowerEdge>,
}

fn j_relative_step() -> Result<bool, TowerError> {
    let grid = build_grid(
        vec![Axis::new("time", [0i64, 1])],
        vec![Token::new("a", [("time", 0i64)], Delta::Top), Token::new("b", [("time", 1i64)], Delta::Bot)],
    )
    .expect("fixture grid is valid");
    let j = ExternalCriterion::with_point_carriers(Guard::Expr(GuardExpr::DeltaIs(Delta::Top)), &grid);
    let r = check_quasi_adjunction(&j, &grid).map_err(|e| TowerError::Precondition(e.to_string()))?;
    Ok(r.mode == QuasiMode::Isomorphism)
}

pub fn build_numeric_tower() -> Result<Tower, TowerError> {
    let limits = Limits::default();
    let witnesses = [
        Some("C₀ = {Undef ≤ Define}"),
        Some("C₁ = {Empty ≤ NonEmpty}"),
        Some("skeletal FinSet"),
        Some("posets up to isomorphism"),
        Some("ℤ[S] and finite rings"),
        Some("ℚ and finite fields"),
        None,
    ];
    let nodes = STAGES
        .iter()
        .zip(witnesses)
        .enumerate()
        .map(|(level, (&label, w))| TowerNode {
            level,
            label,
            witness: w.map(str::to_string),
        })
        .collect();

    let emp = emptiness(2, limits)?;
    let pos = discrete_order(2, limits)?;
    let ring_ok = check_free_ring_universal(&["x"], &FinRing::zmod(2))?.passed();
    let id = |q: &Rational| q.clone();
    let frac_ok = check_frac_extension(&FieldTarget::Rationals, &[&id])?.passed();
    let edge = |from: usize, kind, witness: Option<&str>, verified| TowerEdge {
        from,
        to: from + 1,
        kind,
        witness: witness.map(str::to_string),
        verified,
        symbolic: witness.is_none(),
    };
    let edges = vec![
        edge(0, EdgeKind::JRelative, Some("Σ_emp∘J ⊣_J Tr∘Σ_def"), j_relative_step()?),
        edge(1, EdgeKind::InternalAdjunction, Some(&emp.name), verify_adjunction(&emp, limits)?.is_ok()),
        edge(2, EdgeKind::InternalAdjunction, Some(&pos.name), verify_adjunction(&pos, limits)?.is_ok()),
        edge(3, EdgeKind::InternalAdjunction, Some("FreeRing ⊣ U"), ring_ok),
        edge(4, EdgeKind::InternalAdjunction, Some("Frac ⊣ U_dom"), frac_ok),
        edge(5, EdgeKind::InternalAdjunction, None, false),
    ];
    Ok(Tower { nodes, edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletionDescriptor {
    pub level: usize,
    pub label: Stage,
    pub reflection: bool,
    pub idempotent: bool,
    pub law: String,
    pub numeric: bool,
}

pub fn completion_descriptor() -> CompletionDescriptor {
    CompletionDescriptor {
        level: 6,
        label: Stage::CompleteField,
        reflection: true,
        idempotent: true,
        law: "K̂̂ ≅ K̂".into(),
        numeric: false,
    }
}
