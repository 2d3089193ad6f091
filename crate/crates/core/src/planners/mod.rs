//! FMT*, MRFMT* and the bidirectional BMRFMT*.

mod expand;
mod fmt;
mod multi;
mod tree;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cspace::{Config, SpaceSpec};
use crate::error::{Error, Result};
use crate::multigraph::{LayeredSampleSet, NodeId};
use crate::world::WorldModel;

pub use expand::{expand, ExpandContext};
pub use fmt::plan_fmt;
pub use multi::{plan_bmrfmt, plan_mrfmt};
pub use tree::{NodeState, SearchTree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GoalSpec {
    /// Reach the appended goal sample.
    ExactNode,
    /// Reach any configuration within `radius` of `center`. The appended
    /// goal sample must be `center`.
    Ball { center: Config, radius: f64 },
}

impl GoalSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            GoalSpec::ExactNode => Ok(()),
            GoalSpec::Ball { radius, .. } if *radius > 0.0 && radius.is_finite() => Ok(()),
            GoalSpec::Ball { radius, .. } => Err(Error::invalid("goal.radius", format!("{radius} must be positive"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Heuristic {
    Off,
    /// Metric distance to the tree's target, admissible and consistent.
    Metric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Termination {
    pub first_solution: bool,
    pub time_budget_ms: Option<u64>,
}

impl Termination {
    pub const FIRST_SOLUTION: Termination = Termination {
        first_solution: true,
        time_budget_ms: None,
    };

    pub fn first_solution_within(ms: u64) -> Self {
        Termination {
            first_solution: true,
            time_budget_ms: Some(ms),
        }
    }

    pub fn time_budget(ms: u64) -> Self {
        Termination {
            first_solution: false,
            time_budget_ms: Some(ms),
        }
    }
}

impl Default for Termination {
    fn default() -> Self {
        Termination::FIRST_SOLUTION
    }
}

#[derive(Debug, Clone)]
pub struct PlanRequest<'a> {
    pub world: &'a WorldModel,
    pub space: &'a SpaceSpec,
    pub x_init: Config,
    pub goal: GoalSpec,
    pub termination: Termination,
    pub heuristic: Heuristic,
    /// Motion discretization step.
    pub resolution: f64,
}

impl<'a> PlanRequest<'a> {
    pub fn new(world: &'a WorldModel, space: &'a SpaceSpec, x_init: Config, resolution: f64) -> Self {
        PlanRequest {
            world,
            space,
            x_init,
            goal: GoalSpec::ExactNode,
            termination: Termination::default(),
            heuristic: Heuristic::Off,
            resolution,
        }
    }

    pub fn with_goal(mut self, goal: GoalSpec) -> Self {
        self.goal = goal;
        self
    }

    pub fn with_heuristic(mut self, heuristic: Heuristic) -> Self {
        self.heuristic = heuristic;
        self
    }

    pub fn with_termination(mut self, termination: Termination) -> Self {
        self.termination = termination;
        self
    }

    /// Checks the request against the sample set it will run on.
    pub fn validate(&self, set: &LayeredSampleSet) -> Result<()> {
        if self.space != set.space() {
            return Err(Error::contract("request space differs from the sample set's space"));
        }
        if self.space.dim() != self.world.config_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.world.config_dim(),
                found: self.space.dim(),
            });
        }
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(Error::invalid("resolution", format!("{} must be positive", self.resolution)));
        }
        if self.termination.time_budget_ms == Some(0) {
            return Err(Error::invalid("termination.time_budget_ms", "must be positive"));
        }
        self.goal.validate()?;
        let mut init = self.x_init.clone();
        self.space.normalize(&mut init)?;
        if &init != set.config(set.init_index()) {
            return Err(Error::contract("x_init differs from the sample set's initial configuration"));
        }
        if let GoalSpec::Ball { center, .. } = &self.goal {
            let mut c = center.clone();
            self.space.normalize(&mut c)?;
            if &c != set.config(set.goal_index()) {
                return Err(Error::contract("goal ball centre differs from the sample set's goal configuration"));
            }
        }
        if !self.world.is_free(&init)? {
            return Err(Error::QueryInCollision("x_init"));
        }
        if !self.world.is_free(set.config(set.goal_index()))? {
            return Err(Error::QueryInCollision("x_goal"));
        }
        Ok(())
    }

    pub(crate) fn deadline(&self, start: Instant) -> Option<Instant> {
        self.termination.time_budget_ms.map(|ms| start + Duration::from_millis(ms))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlanStatus {
    Solved,
    Failure,
    Timeout,
}

impl PlanStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PlanStatus::Solved => "Solved",
            PlanStatus::Failure => "Failure",
            PlanStatus::Timeout => "Timeout",
        }
    }
}

/// A change of a tree's layer pointer during one expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayerEvent {
    /// Zero-based position in the expansion order.
    pub expansion: u64,
    /// 0 for the forward tree, 1 for the backward tree.
    pub tree: u8,
    pub from: u16,
    pub to: u16,
    /// Sparsest layer opened by the expansion.
    pub sparsest_opened: Option<u16>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Stats {
    /// Motion checks on metric edges.
    pub edge_evaluations: u64,
    pub collision_point_checks: u64,
    /// Spatial-index queries; neighbour lists are cached per node.
    pub neighbor_queries: u64,
    pub expansions: u64,
    pub layer_switches: u64,
    pub metric_connections: u64,
    pub counterpart_connections: u64,
    pub failed_edges: u64,
    pub max_node_expansions: u32,
    pub wall_time_ms: f64,
    pub expansion_order: Vec<NodeId>,
    pub layer_events: Vec<LayerEvent>,
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub status: PlanStatus,
    /// Configurations from `x_init` into the goal region, counterpart hops collapsed.
    pub path: Vec<Config>,
    /// Tree nodes along the path, before collapsing.
    pub nodes: Vec<NodeId>,
    /// Infinite unless solved.
    pub cost: f64,
    pub stats: Stats,
    /// Forward tree first; the bidirectional planner adds its backward tree.
    pub trees: Vec<SearchTree>,
    pub meet: Option<NodeId>,
}

impl PlanResult {
    pub fn solved(&self) -> bool {
        self.status == PlanStatus::Solved
    }
}

/// Root-to-`node` configurations of `tree`, counterpart hops collapsed.
pub fn extract_path(tree: &SearchTree, set: &LayeredSampleSet, node: NodeId) -> Result<Vec<Config>> {
    let nodes = tree
        .node_path(node)
        .ok_or_else(|| Error::contract(format!("{node:?} is not in the tree")))?;
    Ok(collapse(set, &nodes))
}

pub(crate) fn collapse(set: &LayeredSampleSet, nodes: &[NodeId]) -> Vec<Config> {
    let mut out: Vec<Config> = Vec::with_capacity(nodes.len());
    let mut last = None;
    for v in nodes {
        if last != Some(v.index) {
            out.push(set.config(v.index).clone());
            last = Some(v.index);
        }
    }
    out
}

/// Sum of metric lengths along a configuration sequence.
pub fn path_cost(space: &SpaceSpec, path: &[Config]) -> f64 {
    path.windows(2).map(|w| space.metric(w[0].coords(), w[1].coords())).sum()
}

/// Re-checks every segment of `path` with `motion_free` at `resolution`.
pub fn validate_path(world: &WorldModel, space: &SpaceSpec, path: &[Config], resolution: f64) -> Result<bool> {
    let mut checks = 0;
    if path.len() == 1 {
        return world.is_free(&path[0]);
    }
    for w in path.windows(2) {
        if !world.motion_free(space, &w[0], &w[1], resolution, &mut checks)? {
            return Ok(false);
        }
    }
    Ok(!path.is_empty())
}

pub(crate) fn in_goal(set: &LayeredSampleSet, goal: &GoalSpec, v: NodeId) -> bool {
    match goal {
        GoalSpec::ExactNode => v.index == set.goal_index(),
        GoalSpec::Ball { radius, .. } => {
            v.index == set.goal_index()
                || set.space().metric(set.config(v.index).coords(), set.config(set.goal_index()).coords()) <= *radius
        }
    }
}
