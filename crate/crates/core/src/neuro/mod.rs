//! Delayed threshold neurons on point sets, simplicial shapes and a
//! multi-fiber world over a shared material store.

mod shape;
mod world;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use shape::{all_shapes, check_sk_cosk_adjunction, shape_truncate, simplicial_maps, SimplicialShape, SkCoskReport, Truncation};
pub use world::{
    activity_density, causality_probe, step_world, ChannelSpec, Density, Divergence, Event, EventKind, Fiber, Perturbation, Policy,
    ProbeReport, Schedule, Synapse, World, WorldSpec, MAX_TICKS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeuroError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("duplicate point id {0:?}")]
    DuplicateId(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("window {start}..{end} is outside the recorded history 0..{clock}")]
    Window { start: u64, end: u64, clock: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, NeuroError>;

/// Named real channels.
pub type Carrier = BTreeMap<String, f64>;

pub const POTENTIAL: &str = "potential";
pub const SPIKE: &str = "spike";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(id: &str, x: f64, y: f64, z: f64) -> Self {
        Point3 { id: id.into(), x, y, z }
    }
}

/// `b ∘ φ` with a fixed delay. `φ` is `clamp₀₁(W·input + c)`, `b` fires
/// `amplitude` when `⟨gate, φ⟩ ≥ threshold` and `baseline` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuronFunction {
    /// Column labels of `weights`.
    pub inputs: Vec<String>,
    pub weights: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
    pub gate: Vec<f64>,
    pub threshold: f64,
    pub amplitude: f64,
    pub baseline: f64,
    pub delay: u64,
    #[serde(default = "default_output")]
    pub output: String,
}

fn default_output() -> String {
    SPIKE.into()
}

impl Default for NeuronFunction {
    fn default() -> Self {
        NeuronFunction {
            inputs: vec![POTENTIAL.into()],
            weights: vec![vec![1.0]],
            offset: vec![0.0],
            gate: vec![1.0],
            threshold: 0.5,
            amplitude: 1.0,
            baseline: 0.0,
            delay: 1,
            output: default_output(),
        }
    }
}

impl NeuronFunction {
    pub fn validate(&self) -> Result<()> {
        let m = self.weights.len();
        let k = self.inputs.len();
        if self.delay == 0 {
            return Err(NeuroError::Malformed("neuron delay must be at least one tick".into()));
        }
        if self.offset.len() != m || self.gate.len() != m || self.weights.iter().any(|row| row.len() != k) {
            return Err(NeuroError::Malformed(format!("neuron shapes disagree: W is {m}×{k}, c has {}, w has {}", self.offset.len(), self.gate.len())));
        }
        let finite = self.weights.iter().flatten().chain(&self.offset).chain(&self.gate).chain([&self.threshold, &self.amplitude, &self.baseline]);
        if finite.into_iter().any(|v| !v.is_finite()) {
            return Err(NeuroError::Malformed("non-finite neuron parameter".into()));
        }
        Ok(())
    }

    pub fn phi(&self, input: &Carrier) -> Result<Vec<f64>> {
        let keys: BTreeSet<&String> = input.keys().collect();
        let cols: BTreeSet<&String> = self.inputs.iter().collect();
        if keys != cols {
            return Err(NeuroError::Malformed(format!("input channels {keys:?} do not match {cols:?}")));
        }
        let x: Vec<f64> = self.inputs.iter().map(|c| input[c]).collect();
        Ok(self
            .weights
            .iter()
            .zip(&self.offset)
            .map(|(row, c)| {
                let v = row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + c;
                // NaN collapses to 0
                if v >= 1.0 {
                    1.0
                } else if v > 0.0 {
                    v
                } else {
                    0.0
                }
            })
            .collect())
    }

    pub fn fires(&self, phi: &[f64]) -> bool {
        self.gate.iter().zip(phi).map(|(a, b)| a * b).sum::<f64>() >= self.threshold
    }
}

/// Output carrier and the tick it is delivered at.
pub fn eval_neuron(n: &NeuronFunction, input: &Carrier, t: u64) -> Result<(Carrier, u64)> {
    n.validate()?;
    let phi = n.phi(input)?;
    let v = if n.fires(&phi) { n.amplitude } else { n.baseline };
    Ok((Carrier::from([(n.output.clone(), v)]), t + n.delay))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NF0Body {
    pub points: Vec<Point3>,
    pub neurons: BTreeMap<String, NeuronFunction>,
    pub carriers: BTreeMap<String, Carrier>,
}

fn check_ids(points: &[Point3]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(p.id.as_str()) {
            return Err(NeuroError::DuplicateId(p.id.clone()));
        }
        if ![p.x, p.y, p.z].iter().all(|v| v.is_finite()) {
            return Err(NeuroError::Malformed(format!("point {:?} has a non-finite coordinate", p.id)));
        }
    }
    Ok(())
}

pub fn free_body(points: &[Point3]) -> Result<NF0Body> {
    check_ids(points)?;
    Ok(NF0Body {
        points: points.to_vec(),
        neurons: points.iter().map(|p| (p.id.clone(), NeuronFunction::default())).collect(),
        carriers: points.iter().map(|p| (p.id.clone(), Carrier::from([(POTENTIAL.to_string(), 0.0)]))).collect(),
    })
}

/// `U_N`: the underlying point set.
pub fn underlying(body: &NF0Body) -> Vec<Point3> {
    body.points.clone()
}

pub const BODY_CAP: usize = 3;

/// Body morphisms are arbitrary maps of the underlying point sets; this is
/// the predicate the enumeration filters by.
pub fn is_body_morphism(from: &NF0Body, to: &NF0Body, map: &[usize]) -> bool {
    map.len() == from.points.len() && map.iter().all(|&i| i < to.points.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomCounts {
    pub left: usize,
    pub right: usize,
}

impl HomCounts {
    pub fn agree(&self) -> bool {
        self.left == self.right
    }
}

fn all_maps(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 { 1 } else { m.pow(n as u32) };
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let v = code % m.max(1);
                code /= m.max(1);
                v
            })
            .collect()
    })
}

/// `|Hom(F_N P, B)|` against `|Hom(P, U_N B)|`.
pub fn check_body_adjunction(p: &[Point3], b: &NF0Body) -> Result<HomCounts> {
    if p.len() > BODY_CAP || b.points.len() > BODY_CAP {
        return Err(NeuroError::Capacity(format!("point sets are capped at {BODY_CAP}")));
    }
    let fp = free_body(p)?;
    let left = all_maps(fp.points.len(), b.points.len()).filter(|f| is_body_morphism(&fp, b, f)).count();
    let ub = underlying(b);
    let right = all_maps(p.len(), ub.len()).filter(|f| f.iter().all(|&i| i < ub.len())).count();
    Ok(HomCounts { left, right })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(n: usize) -> Vec<Point3> {
        (0..n).map(|i| Point3::new(&format!("p{i}"), i as f64, 0.0, 0.0)).collect()
    }

    #[test]
    fn neuron_examples() {
        let zero = NeuronFunction {
            weights: vec![vec![0.0]],
            ..Default::default()
        };
        let input = Carrier::from([(POTENTIAL.to_string(), 0.9)]);
        assert_eq!(eval_neuron(&zero, &input, 4).unwrap(), (Carrier::from([(SPIKE.to_string(), 0.0)]), 5));
        let n = NeuronFunction::default();
        assert_eq!(n.phi(&Carrier::from([(POTENTIAL.to_string(), 1e9)])).unwrap(), vec![1.0]);
        let slow = NeuronFunction { delay: 2, ..Default::default() };
        let (out, at) = eval_neuron(&slow, &Carrier::from([(POTENTIAL.to_string(), 0.6)]), 3).unwrap();
        assert_eq!((out[SPIKE], at), (1.0, 5));
        assert!(matches!(eval_neuron(&n, &Carrier::from([("calcium".to_string(), 0.6)]), 0), Err(NeuroError::Malformed(_))));
    }

    #[test]
    fn free_bodies() {
        let p = pts(3);
        let b = free_body(&p).unwrap();
        assert_eq!(b.neurons.len(), 3);
        assert_eq!(underlying(&b), p);
        assert!(free_body(&[]).unwrap().points.is_empty());
        let dup = vec![Point3::new("a", 0.0, 0.0, 0.0), Point3::new("a", 1.0, 0.0, 0.0)];
        assert_eq!(free_body(&dup), Err(NeuroError::DuplicateId("a".into())));
    }

    #[test]
    fn body_hom_counts() {
        for (np, nb, want) in [(1, 2, 2), (0, 2, 1), (2, 2, 4), (3, 3, 27)] {
            let c = check_body_adjunction(&pts(np), &free_body(&pts(nb)).unwrap()).unwrap();
            assert_eq!(c, HomCounts { left: want, right: want });
        }
        assert!(check_body_adjunction(&pts(4), &free_body(&pts(1)).unwrap()).is_err());
    }
}
