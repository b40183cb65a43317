use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_ids, Carrier, NeuroError, NeuronFunction, Point3, Result, POTENTIAL, SPIKE};
use crate::par::{self, Execution};

/// Longest run a single call will simulate.
pub const MAX_TICKS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub name: String,
    pub unit: String,
    pub lo: f64,
    pub hi: f64,
}

impl ChannelSpec {
    pub fn new(name: &str, unit: &str, lo: f64, hi: f64) -> Self {
        ChannelSpec {
            name: name.into(),
            unit: unit.into(),
            lo,
            hi,
        }
    }

    fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }
}

fn default_channels() -> Vec<ChannelSpec> {
    vec![ChannelSpec::new(POTENTIAL, "1", 0.0, 1.0), ChannelSpec::new(SPIKE, "1", 0.0, 1.0)]
}

/// Directed 1-simplex with a weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Synapse {
    pub from: String,
    pub to: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// Repeats cyclically.
    Values { values: Vec<f64> },
    /// One draw per tick from the world seed.
    Uniform { lo: f64, hi: f64 },
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fiber {
    Neural {
        /// Ticks after a firing during which the neuron stays silent.
        #[serde(default = "one")]
        refractory: u64,
    },
    Learning { eta: f64, w_max: f64 },
    Modulator {
        channel: String,
        #[serde(default = "one")]
        delay: u64,
        #[serde(default = "one")]
        window: u64,
        scale: f64,
        schedule: Schedule,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Sum of all writes, then clamp.
    #[default]
    Sum,
    LastWriter,
    Max,
}

impl Policy {
    fn reconcile(self, writes: &mut [f64]) -> f64 {
        match self {
            Policy::Sum => {
                // fixed summation order, independent of who wrote first
                writes.sort_by(f64::total_cmp);
                writes.iter().sum()
            }
            Policy::LastWriter => *writes.last().expect("at least one write"),
            Policy::Max => writes.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldSpec {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_channels")]
    pub channels: Vec<ChannelSpec>,
    pub points: Vec<Point3>,
    /// Points not listed get the default neuron.
    #[serde(default)]
    pub neurons: BTreeMap<String, NeuronFunction>,
    #[serde(default)]
    pub synapses: Vec<Synapse>,
    #[serde(default)]
    pub fibers: Vec<Fiber>,
    #[serde(default)]
    pub policy: Policy,
    /// Base values at tick 0.
    #[serde(default)]
    pub initial: BTreeMap<String, Carrier>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Fire,
    WeightUpdate,
    Modulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Event {
    pub tick: u64,
    pub point: usize,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Write {
    point: usize,
    channel: usize,
    value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub point: String,
    pub tick: u64,
    pub channel: String,
    pub magnitude: f64,
}

#[derive(Debug, Clone)]
pub struct World {
    spec: WorldSpec,
    neurons: Vec<NeuronFunction>,
    /// Synapse endpoints as point indices.
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
    clock: u64,
    /// Sealed base values for ticks `0..=clock`, point-major.
    base: Vec<Vec<f64>>,
    pending: BTreeMap<u64, Vec<Write>>,
    events: Vec<Event>,
    last_fire: Vec<Option<u64>>,
    draws: Vec<Vec<f64>>,
    rng: ChaCha8Rng,
    perturbations: Vec<(usize, u64, usize, f64)>,
    exec: Execution,
}

impl World {
    pub fn new(spec: WorldSpec) -> Result<World> {
        check_ids(&spec.points)?;
        let mut names = BTreeSet::new();
        for c in &spec.channels {
            if !names.insert(c.name.as_str()) {
                return Err(NeuroError::Malformed(format!("channel {:?} declared twice", c.name)));
            }
            if !(c.lo.is_finite() && c.hi.is_finite() && c.lo <= c.hi) {
                return Err(NeuroError::Malformed(format!("channel {:?} has bad bounds", c.name)));
            }
        }
        let point = |id: &str| {
            spec.points
                .iter()
                .position(|p| p.id == id)
                .ok_or_else(|| NeuroError::Malformed(format!("unknown point {id:?}")))
        };
        let channel = |name: &str| {
            spec.channels
                .iter()
                .position(|c| c.name == name)
                .ok_or_else(|| NeuroError::Malformed(format!("unknown channel {name:?}")))
        };
        for id in spec.neurons.keys() {
            point(id)?;
        }
        let neurons: Vec<NeuronFunction> = spec.points.iter().map(|p| spec.neurons.get(&p.id).cloned().unwrap_or_default()).collect();
        let neural = spec.fibers.iter().filter(|f| matches!(f, Fiber::Neural { .. })).count();
        if neural > 1 {
            return Err(NeuroError::Malformed("at most one neural fiber".into()));
        }
        if neural == 1 {
            channel(POTENTIAL)?;
            for n in &neurons {
                n.validate()?;
                for c in n.inputs.iter().chain([&n.output]) {
                    channel(c)?;
                }
            }
        }
        let mut edges = Vec::new();
        for s in &spec.synapses {
            if !s.weight.is_finite() {
                return Err(NeuroError::Malformed(format!("synapse {} -> {} has a non-finite weight", s.from, s.to)));
            }
            edges.push((point(&s.from)?, point(&s.to)?));
        }
        for f in &spec.fibers {
            match f {
                Fiber::Neural { .. } => {}
                Fiber::Learning { eta, w_max } => {
                    if neural == 0 || !(eta.is_finite() && w_max.is_finite() && *eta >= 0.0 && *w_max >= 0.0) {
                        return Err(NeuroError::Malformed("learning needs a neural fiber and nonnegative finite parameters".into()));
                    }
                }
                Fiber::Modulator {
                    channel: c,
                    delay,
                    window,
                    scale,
                    schedule,
                } => {
                    channel(c)?;
                    let ok = match schedule {
                        Schedule::Values { values } => !values.is_empty() && values.iter().all(|v| v.is_finite()),
                        Schedule::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
                    };
                    if *delay == 0 || *window == 0 || !scale.is_finite() || !ok {
                        return Err(NeuroError::Malformed(format!("modulator on {c:?} is misconfigured")));
                    }
                }
            }
        }
        let mut initial = Vec::new();
        for (id, carrier) in &spec.initial {
            let p = point(id)?;
            for (c, &v) in carrier {
                if !v.is_finite() {
                    return Err(NeuroError::Malformed(format!("initial {id}.{c} is not finite")));
                }
                initial.push(Write {
                    point: p,
                    channel: channel(c)?,
                    value: v,
                });
            }
        }
        let n = spec.points.len();
        let mut w = World {
            weights: spec.synapses.iter().map(|s| s.weight).collect(),
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            draws: vec![Vec::new(); spec.fibers.len()],
            neurons,
            edges,
            clock: 0,
            base: Vec::new(),
            pending: BTreeMap::from([(0, initial)]),
            events: Vec::new(),
            last_fire: vec![None; n],
            perturbations: Vec::new(),
            exec: Execution::default(),
            spec,
        };
        w.seal(0);
        Ok(w)
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn spec(&self) -> &WorldSpec {
        &self.spec
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sealed base value, if `tick ≤ clock`.
    pub fn value(&self, point: &str, tick: u64, channel: &str) -> Option<f64> {
        let p = self.spec.points.iter().position(|x| x.id == point)?;
        let c = self.spec.channels.iter().position(|x| x.name == channel)?;
        self.base.get(tick as usize).map(|row| row[p * self.spec.channels.len() + c])
    }

    /// Smallest delay any fiber writes with; `None` for a world that never writes.
    pub fn min_delay(&self) -> Option<u64> {
        self.spec
            .fibers
            .iter()
            .filter_map(|f| match f {
                Fiber::Neural { .. } => Some(self.neurons.iter().map(|n| n.delay).chain([1]).min().unwrap()),
                Fiber::Learning { .. } => None,
                Fiber::Modulator { delay, .. } => Some(*delay),
            })
            .min()
    }

    fn seal(&mut self, t: u64) {
        let nc = self.spec.channels.len();
        let mut cells: Vec<Vec<f64>> = vec![Vec::new(); self.spec.points.len() * nc];
        for w in self.pending.remove(&t).unwrap_or_default() {
            cells[w.point * nc + w.channel].push(w.value);
        }
        let mut row: Vec<f64> = cells
            .iter_mut()
            .enumerate()
            .map(|(i, writes)| {
                let ch = &self.spec.channels[i % nc];
                if writes.is_empty() {
                    ch.clamp(0.0)
                } else {
                    ch.clamp(self.spec.policy.reconcile(writes))
                }
            })
            .collect();
        for &(p, tick, c, m) in &self.perturbations {
            if tick == t {
                row[p * nc + c] = self.spec.channels[c].clamp(row[p * nc + c] + m);
            }
        }
        debug_assert_eq!(self.base.len() as u64, t);
        self.base.push(row);
    }

    fn step(&mut self) -> Result<()> {
        let t = self.clock;
        let nc = self.spec.channels.len();
        let channel = |name: &str| self.spec.channels.iter().position(|c| c.name == name);
        let row = &self.base[t as usize];
        let refractory = self.spec.fibers.iter().find_map(|f| match f {
            Fiber::Neural { refractory } => Some(*refractory),
            _ => None,
        });
        // (fired, output) per point; reads only the sealed tick t
        let outputs: Vec<(bool, f64)> = match refractory {
            None => vec![(false, 0.0); self.spec.points.len()],
            Some(r) => {
                let evals = par::map_range(self.exec, self.spec.points.len(), |p| {
                    let n = &self.neurons[p];
                    let input: Carrier = n.inputs.iter().map(|c| (c.clone(), row[p * nc + channel(c).unwrap()])).collect();
                    let phi = n.phi(&input)?;
                    let silent = matches!(self.last_fire[p], Some(f) if t - f <= r);
                    let fired = !silent && n.fires(&phi);
                    Ok((fired, if fired { n.amplitude } else { n.baseline }))
                });
                evals.into_iter().collect::<Result<_>>()?
            }
        };
        let potential = channel(POTENTIAL);
        let mut writes: Vec<(u64, Write)> = Vec::new();
        for fi in 0..self.spec.fibers.len() {
            match self.spec.fibers[fi].clone() {
                Fiber::Neural { .. } => {
                    let pc = potential.expect("checked at construction");
                    for (p, &(fired, out)) in outputs.iter().enumerate() {
                        let n = &self.neurons[p];
                        let oc = channel(&n.output).unwrap();
                        let carry = if fired { 0.0 } else { row[p * nc + pc] };
                        writes.push((t + 1, Write { point: p, channel: pc, value: carry }));
                        writes.push((t + n.delay, Write { point: p, channel: oc, value: out }));
                        for (s, &(from, to)) in self.edges.iter().enumerate() {
                            if from == p {
                                let value = self.weights[s] * out;
                                writes.push((t + n.delay, Write { point: to, channel: pc, value }));
                            }
                        }
                        if fired {
                            self.events.push(Event { tick: t, point: p, kind: EventKind::Fire });
                            self.last_fire[p] = Some(t);
                        }
                    }
                }
                Fiber::Learning { eta, w_max } => {
                    for (s, &(i, j)) in self.edges.iter().enumerate() {
                        if outputs[i].0 && outputs[j].0 {
                            self.weights[s] = (self.weights[s] + eta).clamp(0.0, w_max);
                            for p in if i == j { vec![i] } else { vec![i, j] } {
                                self.events.push(Event { tick: t, point: p, kind: EventKind::WeightUpdate });
                            }
                        }
                    }
                }
                Fiber::Modulator {
                    channel: name,
                    delay,
                    window,
                    scale,
                    schedule,
                } => {
                    let draw = match &schedule {
                        Schedule::Values { values } => values[(t % values.len() as u64) as usize],
                        Schedule::Uniform { lo, hi } => self.rng.gen_range(*lo..*hi),
                    };
                    let hist = &mut self.draws[fi];
                    hist.push(draw);
                    let recent = &hist[hist.len().saturating_sub(window as usize)..];
                    let avg = recent.iter().sum::<f64>() / recent.len() as f64;
                    let c = channel(&name).unwrap();
                    for p in 0..self.spec.points.len() {
                        writes.push((t + delay, Write { point: p, channel: c, value: scale * avg }));
                        self.events.push(Event { tick: t, point: p, kind: EventKind::Modulation });
                    }
                }
            }
        }
        for (at, w) in writes {
            if at <= t {
                return Err(NeuroError::Internal(format!("write scheduled at {at} from tick {t}")));
            }
            self.pending.entry(at).or_default().push(w);
        }
        self.clock += 1;
        self.seal(self.clock);
        Ok(())
    }

    pub fn run(&mut self, ticks: u64) -> Result<()> {
        if ticks > MAX_TICKS || self.clock.saturating_add(ticks) > MAX_TICKS {
            return Err(NeuroError::Capacity(format!("runs are capped at {MAX_TICKS} ticks")));
        }
        for _ in 0..ticks {
            self.step()?;
        }
        Ok(())
    }

    /// One `tick,point,channel,value` line per sealed cell before the clock.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        let nc = self.spec.channels.len();
        for (t, row) in self.base.iter().take(self.clock as usize).enumerate() {
            for (p, pt) in self.spec.points.iter().enumerate() {
                for (c, ch) in self.spec.channels.iter().enumerate() {
                    writeln!(out, "{t},{},{},{:.16e}", pt.id, ch.name, row[p * nc + c]).unwrap();
                }
            }
        }
        out
    }
}

pub fn step_world(w: &World) -> Result<World> {
    let mut next = w.clone();
    next.step()?;
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Density {
    pub start: u64,
    pub end: u64,
    pub counts: BTreeMap<String, usize>,
    pub per_point: BTreeMap<String, f64>,
    pub events: usize,
    pub total: f64,
}

/// Morphism applications per point per tick over `window`.
pub fn activity_density(w: &World, window: Range<u64>) -> Result<Density> {
    if window.start > window.end || window.end > w.clock {
        return Err(NeuroError::Window {
            start: window.start,
            end: window.end,
            clock: w.clock,
        });
    }
    let len = (window.end - window.start) as f64;
    let mut counts: BTreeMap<String, usize> = w.spec.points.iter().map(|p| (p.id.clone(), 0)).collect();
    let mut events = 0;
    for e in w.events.iter().filter(|e| window.contains(&e.tick)) {
        *counts.get_mut(&w.spec.points[e.point].id).unwrap() += 1;
        events += 1;
    }
    let norm = |c: usize| if len == 0.0 { 0.0 } else { c as f64 / len };
    Ok(Density {
        start: window.start,
        end: window.end,
        per_point: counts.iter().map(|(k, &c)| (k.clone(), norm(c))).collect(),
        counts,
        events,
        total: norm(events),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub point: String,
    pub tick: u64,
    pub channel: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub perturbation_tick: u64,
    pub horizon: u64,
    pub min_delay: Option<u64>,
    /// First differing cell other than the perturbed one.
    pub divergence: Option<Divergence>,
}

impl ProbeReport {
    pub fn respects_delay(&self) -> bool {
        match (&self.divergence, self.min_delay) {
            (None, _) => true,
            (Some(d), Some(m)) => d.tick >= self.perturbation_tick + m,
            (Some(_), None) => false,
        }
    }
}

/// Runs `w` to `horizon` with and without the perturbation.
pub fn causality_probe(w: &World, p: &Perturbation, horizon: u64) -> Result<ProbeReport> {
    if p.tick > horizon || p.tick < w.clock {
        return Err(NeuroError::Malformed(format!("perturbation tick {} must lie in {}..={horizon}", p.tick, w.clock)));
    }
    let pi = w.spec.points.iter().position(|x| x.id == p.point).ok_or_else(|| NeuroError::Malformed(format!("unknown point {:?}", p.point)))?;
    let ci = w
        .spec
        .channels
        .iter()
        .position(|x| x.name == p.channel)
        .ok_or_else(|| NeuroError::Malformed(format!("unknown channel {:?}", p.channel)))?;
    if !p.magnitude.is_finite() {
        return Err(NeuroError::Malformed("perturbation magnitude is not finite".into()));
    }
    let mut base = w.clone();
    let mut pert = w.clone();
    pert.perturbations.push((pi, p.tick, ci, p.magnitude));
    if p.tick == w.clock {
        let nc = w.spec.channels.len();
        let cell = &mut pert.base[p.tick as usize][pi * nc + ci];
        *cell = w.spec.channels[ci].clamp(*cell + p.magnitude);
    }
    base.run(horizon - w.clock)?;
    pert.run(horizon - w.clock)?;
    let nc = w.spec.channels.len();
    let mut divergence = None;
    'scan: for t in w.clock..=horizon {
        let (a, b) = (&base.base[t as usize], &pert.base[t as usize]);
        for i in 0..a.len() {
            if (t, i) == (p.tick, pi * nc + ci) {
                continue;
            }
            if a[i].to_bits() != b[i].to_bits() {
                divergence = Some(Divergence {
                    point: w.spec.points[i / nc].id.clone(),
                    tick: t,
                    channel: w.spec.channels[i % nc].name.clone(),
                });
                break 'scan;
            }
        }
    }
    Ok(ProbeReport {
        perturbation_tick: p.tick,
        horizon,
        min_delay: w.min_delay(),
        divergence,
    })
}
