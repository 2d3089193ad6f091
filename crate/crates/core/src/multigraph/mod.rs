//! Multi-resolution layered sample sets.
//!
//! `N` free samples are shared by `L` nested layers: layer `l` holds the first
//! `n_l` samples plus the initial and goal configurations, which are appended
//! at indices `N` and `N + 1`. A node is a sample seen at one layer. Nodes
//! connect to same-layer nodes under that layer's connection rule, and to the
//! node of the same sample in each adjacent layer through a zero-cost
//! counterpart edge.

mod kdtree;
mod schedule;

use std::f64::consts::{E, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cspace::{Config, SpaceSpec};
use crate::error::{Error, Result};
use crate::world::WorldModel;

pub use kdtree::KdTree;
pub use schedule::{LayerSchedule, ScheduleKind};

/// A sample index seen at one layer (1-based). Orders by index, then layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId {
    pub index: u32,
    pub layer: u16,
}

impl NodeId {
    pub fn new(index: u32, layer: u16) -> Self {
        NodeId { index, layer }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    Metric,
    Counterpart,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NeighborSpec {
    /// Radius `multiplier · γ* · (log n / n)^(1/d)`.
    RDisk { multiplier: f64 },
    /// `⌈multiplier · e · (1 + 1/d) · log n⌉` nearest neighbours.
    KNearest { multiplier: f64 },
    /// The same radius on every layer.
    FixedRadius { radius: f64 },
}

pub const DEFAULT_RADIUS_MULTIPLIER: f64 = 1.1;

impl Default for NeighborSpec {
    fn default() -> Self {
        NeighborSpec::RDisk {
            multiplier: DEFAULT_RADIUS_MULTIPLIER,
        }
    }
}

impl NeighborSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            NeighborSpec::RDisk { multiplier } => multiplier > 1.0 && multiplier.is_finite(),
            NeighborSpec::KNearest { multiplier } => multiplier > 0.0 && multiplier.is_finite(),
            NeighborSpec::FixedRadius { radius } => radius > 0.0 && radius.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("neighbors", format!("{self:?}: r-disk multipliers must exceed 1, others be positive")))
        }
    }
}

/// Per-layer connection rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Connection {
    Radius(f64),
    Nearest(usize),
}

/// Volume of the unit ball in `d` dimensions.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

/// Connection rule for a layer of `n` nodes in a `d`-dimensional space of volume `measure`.
pub fn connection_radius(spec: &NeighborSpec, n: usize, d: usize, measure: f64) -> Result<Connection> {
    if n < 2 {
        return Err(Error::contract(format!("connection rule needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let df = d as f64;
    Ok(match *spec {
        NeighborSpec::RDisk { multiplier } => {
            let gamma = multiplier * 2.0 * (1.0 / df).powf(1.0 / df) * (measure / unit_ball_volume(d)).powf(1.0 / df);
            Connection::Radius(gamma * (nf.ln() / nf).powf(1.0 / df))
        }
        NeighborSpec::KNearest { multiplier } => {
            Connection::Nearest((multiplier * E * (1.0 + 1.0 / df) * nf.ln()).ceil() as usize)
        }
        NeighborSpec::FixedRadius { radius } => Connection::Radius(radius),
    })
}

#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub configs: Vec<Config>,
    pub attempts: u64,
    pub rejections: u64,
}

/// Rejection attempts allowed per requested sample.
pub const REJECTION_BUDGET_PER_SAMPLE: u64 = 1000;

/// Rejection-samples `n` collision-free configurations.
pub fn sample_free<R: Rng + ?Sized>(world: &WorldModel, space: &SpaceSpec, n: usize, rng: &mut R) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::contract("sample_free needs n >= 1"));
    }
    if space.dim() != world.config_dim() {
        return Err(Error::DimensionMismatch {
            expected: world.config_dim(),
            found: space.dim(),
        });
    }
    let budget = REJECTION_BUDGET_PER_SAMPLE * n as u64;
    let mut configs = Vec::with_capacity(n);
    let mut attempts = 0;
    while configs.len() < n {
        if attempts >= budget {
            return Err(Error::SamplingStarved {
                attempts,
                collected: configs.len(),
                requested: n,
            });
        }
        attempts += 1;
        let x = space.sample_uniform(rng);
        if world.free_at(x.coords()) {
            configs.push(x);
        }
    }
    Ok(SampleBatch {
        configs,
        attempts,
        rejections: attempts - n as u64,
    })
}

/// One neighbour of a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub node: NodeId,
    pub kind: EdgeKind,
    /// Metric length for same-layer edges, zero for counterparts.
    pub cost: f64,
}

/// `N + 2` configurations sliced into nested layers, with a spatial index.
#[derive(Debug, Clone)]
pub struct LayeredSampleSet {
    space: SpaceSpec,
    configs: Vec<Config>,
    schedule: LayerSchedule,
    neighbor_spec: NeighborSpec,
    connections: Vec<Connection>,
    index: KdTree,
    rejections: u64,
}

impl LayeredSampleSet {
    /// Samples `schedule.total()` free configurations and builds the layers.
    pub fn build<R: Rng + ?Sized>(
        world: &WorldModel,
        space: &SpaceSpec,
        schedule: LayerSchedule,
        spec: NeighborSpec,
        x_init: &Config,
        x_goal: &Config,
        rng: &mut R,
    ) -> Result<Self> {
        if !world.is_free(x_init)? {
            return Err(Error::QueryInCollision("x_init"));
        }
        if !world.is_free(x_goal)? {
            return Err(Error::QueryInCollision("x_goal"));
        }
        let batch = sample_free(world, space, schedule.total(), rng)?;
        let mut set = Self::from_samples(space, batch.configs, schedule, spec, x_init, x_goal)?;
        set.rejections = batch.rejections;
        Ok(set)
    }

    /// Builds layers over an existing sample array. Samples are assumed
    /// collision-free; paired comparisons reuse one array across schedules.
    pub fn from_samples(
        space: &SpaceSpec,
        mut samples: Vec<Config>,
        schedule: LayerSchedule,
        spec: NeighborSpec,
        x_init: &Config,
        x_goal: &Config,
    ) -> Result<Self> {
        spec.validate()?;
        if samples.len() != schedule.total() {
            return Err(Error::contract(format!(
                "schedule expects {} samples, got {}",
                schedule.total(),
                samples.len()
            )));
        }
        for (i, s) in samples.iter().enumerate() {
            if !space.contains(s) {
                return Err(Error::contract(format!("sample {i} is not a valid configuration")));
            }
        }
        let mut init = x_init.clone();
        let mut goal = x_goal.clone();
        space.normalize(&mut init)?;
        space.normalize(&mut goal)?;
        let n = samples.len();
        samples.push(init);
        samples.push(goal);

        let d = space.dim();
        let measure = space.measure();
        let connections = schedule
            .thresholds()
            .iter()
            .map(|&n_l| connection_radius(&spec, n_l + 2, d, measure))
            .collect::<Result<Vec<_>>>()?;

        let ranks = (0..samples.len()).map(|i| if i >= n { 0 } else { i as u32 }).collect();
        let refs: Vec<&[f64]> = samples.iter().map(|c| c.coords()).collect();
        let index = KdTree::new(space.clone(), &refs, ranks);
        Ok(LayeredSampleSet {
            space: space.clone(),
            configs: samples,
            schedule,
            neighbor_spec: spec,
            connections,
            index,
            rejections: 0,
        })
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    /// Number of regular samples `N`.
    pub fn n_samples(&self) -> usize {
        self.configs.len() - 2
    }

    /// `N + 2`.
    pub fn n_configs(&self) -> usize {
        self.configs.len()
    }

    pub fn layers(&self) -> usize {
        self.schedule.layers()
    }

    pub fn schedule(&self) -> &LayerSchedule {
        &self.schedule
    }

    pub fn neighbor_spec(&self) -> &NeighborSpec {
        &self.neighbor_spec
    }

    pub fn rejections(&self) -> u64 {
        self.rejections
    }

    pub fn init_index(&self) -> u32 {
        self.n_samples() as u32
    }

    pub fn goal_index(&self) -> u32 {
        self.n_samples() as u32 + 1
    }

    /// Connection rule of layer `l` (1-based).
    pub fn connection(&self, layer: usize) -> Connection {
        self.connections[layer - 1]
    }

    pub fn configs(&self) -> &[Config] {
        &self.configs
    }

    pub fn config(&self, index: u32) -> &Config {
        &self.configs[index as usize]
    }

    #[inline]
    pub fn in_layer(&self, index: u32, layer: usize) -> bool {
        layer >= 1
            && layer <= self.layers()
            && (index as usize) < self.configs.len()
            && (index >= self.init_index() || (index as usize) < self.schedule.size(layer))
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.in_layer(node.index, node.layer as usize)
    }

    /// Same-layer neighbours of `v` under the layer's connection rule,
    /// ascending by index. Each call is one spatial query.
    pub fn metric_neighbors(&self, v: NodeId, queries: &mut u64) -> Vec<u32> {
        debug_assert!(self.contains(v));
        *queries += 1;
        let layer = v.layer as usize;
        let limit = self.schedule.size(layer) as u32;
        let q = self.configs[v.index as usize].coords();
        match self.connections[layer - 1] {
            Connection::Radius(r) => self.index.within(q, r, limit, Some(v.index)),
            Connection::Nearest(k) => self.index.nearest(q, k, limit, Some(v.index)),
        }
    }

    /// Nodes of the same sample in the adjacent layers.
    pub fn counterparts(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let below = (v.layer > 1 && self.in_layer(v.index, v.layer as usize - 1)).then(|| NodeId::new(v.index, v.layer - 1));
        let above = ((v.layer as usize) < self.layers()).then(|| NodeId::new(v.index, v.layer + 1));
        below.into_iter().chain(above)
    }

    /// Full neighbour relation: metric same-layer edges followed by counterparts.
    pub fn neighbors(&self, v: NodeId, queries: &mut u64) -> Vec<Neighbor> {
        let q = self.configs[v.index as usize].coords();
        let mut out: Vec<Neighbor> = self
            .metric_neighbors(v, queries)
            .into_iter()
            .map(|i| Neighbor {
                node: NodeId::new(i, v.layer),
                kind: EdgeKind::Metric,
                cost: self.space.metric(q, self.configs[i as usize].coords()),
            })
            .collect();
        out.extend(self.counterparts(v).map(|node| Neighbor {
            node,
            kind: EdgeKind::Counterpart,
            cost: 0.0,
        }));
        out
    }
}
