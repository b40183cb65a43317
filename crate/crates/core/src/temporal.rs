//! Time-indexed dependency checks over a grid.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hsg::{Delta, Grid, GridError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemporalError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

type Result<T> = std::result::Result<T, TemporalError>;

/// Edges `(x, y)` meaning `x` depends on `y`. Kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DepGraph {
    edges: Vec<(String, String)>,
}

impl DepGraph {
    pub fn new<I, S>(edges: I) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut edges: Vec<(String, String)> = edges.into_iter().map(|(x, y)| (x.into(), y.into())).collect();
        edges.sort();
        edges.dedup();
        DepGraph { edges }
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    fn resolve(&self, g: &Grid) -> Result<Vec<(usize, usize)>> {
        self.edges
            .iter()
            .map(|(x, y)| {
                let find = |t: &str| g.token_index(t).ok_or_else(|| GridError::NotFound(format!("dependency endpoint {t:?}")));
                Ok((find(x)?, find(y)?))
            })
            .collect()
    }

    fn successors(&self, g: &Grid) -> Result<Vec<Vec<usize>>> {
        let mut out = vec![Vec::new(); g.len()];
        for (x, y) in self.resolve(g)? {
            out[x].push(y);
        }
        Ok(out)
    }
}

/// The axis read as time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeBinding {
    pub axis: String,
}

impl TimeBinding {
    pub fn new(axis: impl Into<String>) -> Self {
        TimeBinding { axis: axis.into() }
    }

    /// `τ` per token, in grid order.
    pub fn times(&self, g: &Grid) -> Result<Vec<i64>> {
        let a = g
            .axis_index(&self.axis)
            .ok_or_else(|| TemporalError::Precondition(format!("no time axis {:?}", self.axis)))?;
        if let Some(v) = g.axes()[a].indices.iter().find(|v| v.as_int().is_none()) {
            return Err(TemporalError::Precondition(format!("time axis {:?} has non-integer index {v}", self.axis)));
        }
        Ok((0..g.len()).map(|t| g.value(t, a).as_int().unwrap()).collect())
    }

    /// Axis values in increasing order.
    pub fn instants(&self, g: &Grid) -> Result<Vec<i64>> {
        self.times(g)?;
        let a = g.axis_index(&self.axis).unwrap();
        let mut ts: Vec<i64> = g.axes()[a].indices.iter().filter_map(|v| v.as_int()).collect();
        ts.sort_unstable();
        Ok(ts)
    }
}

/// Edges whose dependency lies strictly in the future.
pub fn future_violations(g: &Grid, d: &DepGraph, tb: &TimeBinding) -> Result<Vec<(String, String)>> {
    let tau = tb.times(g)?;
    let edges = d.resolve(g)?;
    Ok(d
        .edges
        .iter()
        .zip(edges)
        .filter(|(_, (x, y))| tau[*y] > tau[*x])
        .map(|(e, _)| e.clone())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EnforceMode {
    #[default]
    Report,
    Apply,
    ApplyTransitive,
}

impl FromStr for EnforceMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "report" => Ok(EnforceMode::Report),
            "apply" => Ok(EnforceMode::Apply),
            "apply_transitive" | "apply-transitive" => Ok(EnforceMode::ApplyTransitive),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

impl fmt::Display for EnforceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnforceMode::Report => "report",
            EnforceMode::Apply => "apply",
            EnforceMode::ApplyTransitive => "apply_transitive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enforcement {
    pub grid: Grid,
    pub violations: Vec<(String, String)>,
    /// Tokens whose δ changed from ⊤ to ⊥, in grid order.
    pub flipped: Vec<String>,
}

pub fn enforce_no_future(g: &Grid, d: &DepGraph, tb: &TimeBinding, mode: EnforceMode) -> Result<Enforcement> {
    let violations = future_violations(g, d, tb)?;
    let mut delta = g.deltas();
    if mode != EnforceMode::Report {
        for (x, _) in &violations {
            delta[g.token_index(x).unwrap()] = Delta::Bot;
        }
    }
    if mode == EnforceMode::ApplyTransitive {
        let edges = d.resolve(g)?;
        loop {
            let mut changed = false;
            for &(x, y) in &edges {
                if delta[y] == Delta::Bot && delta[x] == Delta::Top {
                    delta[x] = Delta::Bot;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    let flipped = (0..g.len())
        .filter(|&t| g.delta(t) != delta[t])
        .map(|t| g.tokens()[t].id.clone())
        .collect();
    Ok(Enforcement {
        grid: g.with_deltas(&delta),
        violations,
        flipped,
    })
}

/// Outcome of evaluating a token with data up to some instant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    /// Tokens reachable from the queried one, itself included, in grid order.
    pub witness: Vec<String>,
    /// First consulted token that is undefined or lies after the instant.
    pub blocker: Option<String>,
}

impl Evaluation {
    pub fn is_nonempty(&self) -> bool {
        self.blocker.is_none()
    }
}

fn reachable(succ: &[Vec<usize>], x: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([x]);
    let mut stack = vec![x];
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

pub fn evaluate_at_time(g: &Grid, d: &DepGraph, tb: &TimeBinding, t: i64, x: &str) -> Result<Evaluation> {
    let tau = tb.times(g)?;
    let xi = g.token_index(x).ok_or_else(|| GridError::NotFound(format!("token {x:?}")))?;
    let consulted = reachable(&d.successors(g)?, xi);
    let blocker = consulted
        .iter()
        .find(|&&y| tau[y] > t || g.delta(y) == Delta::Bot)
        .map(|&y| g.tokens()[y].id.clone());
    Ok(Evaluation {
        witness: consulted.iter().map(|&y| g.tokens()[y].id.clone()).collect(),
        blocker,
    })
}

/// Once a token evaluates at some instant it keeps evaluating at every later one.
pub fn check_time_monotonicity(g: &Grid, d: &DepGraph, tb: &TimeBinding, x: &str) -> Result<bool> {
    let mut seen_nonempty = false;
    for t in tb.instants(g)? {
        let now = evaluate_at_time(g, d, tb, t, x)?.is_nonempty();
        if seen_nonempty && !now {
            return Ok(false);
        }
        seen_nonempty |= now;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg::{build_grid, Axis, Token};

    fn grid(tokens: &[(&str, i64, Delta)]) -> Grid {
        let axes = vec![Axis::new("time", (0..=3).map(i64::from))];
        let tokens = tokens.iter().map(|&(id, t, d)| Token::new(id, [("time", t)], d)).collect();
        build_grid(axes, tokens).unwrap()
    }

    #[test]
    fn direct_violation_flips_only_the_dependent() {
        let g = grid(&[("x", 1, Delta::Top), ("y", 2, Delta::Top), ("w", 0, Delta::Top)]);
        let d = DepGraph::new([("x", "y"), ("y", "w"), ("w", "w")]);
        let tb = TimeBinding::new("time");
        assert_eq!(future_violations(&g, &d, &tb).unwrap(), vec![("x".to_string(), "y".to_string())]);
        let e = enforce_no_future(&g, &d, &tb, EnforceMode::Apply).unwrap();
        assert_eq!(e.flipped, vec!["x"]);
        let again = enforce_no_future(&e.grid, &d, &tb, EnforceMode::Apply).unwrap();
        assert!(again.flipped.is_empty());
        assert_eq!(again.grid, e.grid);
        let report = enforce_no_future(&g, &d, &tb, EnforceMode::Report).unwrap();
        assert_eq!(report.grid, g);
    }

    #[test]
    fn transitive_mode_reaches_the_chain() {
        let g = grid(&[("z", 1, Delta::Top), ("x", 1, Delta::Top), ("y", 2, Delta::Top)]);
        let d = DepGraph::new([("z", "x"), ("x", "y")]);
        let tb = TimeBinding::new("time");
        let e = enforce_no_future(&g, &d, &tb, EnforceMode::ApplyTransitive).unwrap();
        assert_eq!(e.flipped, vec!["z", "x"]);
        let plain = enforce_no_future(&g, &d, &tb, EnforceMode::Apply).unwrap();
        assert_eq!(plain.flipped, vec!["x"]);
    }

    #[test]
    fn evaluation_examples() {
        let g = grid(&[("x", 2, Delta::Top), ("y", 0, Delta::Top)]);
        let tb = TimeBinding::new("time");
        let none = DepGraph::default();
        let e = evaluate_at_time(&g, &none, &tb, 2, "x").unwrap();
        assert!(e.is_nonempty());
        assert_eq!(e.witness, vec!["x"]);
        assert!(!evaluate_at_time(&g, &none, &tb, 1, "x").unwrap().is_nonempty());
        let d = DepGraph::new([("x", "y")]);
        let e = evaluate_at_time(&g, &d, &tb, 3, "x").unwrap();
        assert!(e.is_nonempty());
        assert_eq!(e.witness, vec!["x", "y"]);
        assert!(check_time_monotonicity(&g, &d, &tb, "x").unwrap());
    }

    #[test]
    fn symbolic_time_axis_is_rejected() {
        let g = build_grid(vec![Axis::new("time", ["early", "late"])], vec![Token::new("x", [("time", "early")], Delta::Top)]).unwrap();
        let r = future_violations(&g, &DepGraph::default(), &TimeBinding::new("time"));
        assert!(matches!(r, Err(TemporalError::Precondition(_))));
    }
}
