//! Multi-resolution fast marching tree planners over layered sample sets.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cspace;
pub mod error;
pub mod multigraph;
pub mod planners;
pub mod world;

pub use cspace::{Config, Dimension, SpaceSpec, Topology};
pub use error::{Error, Result};
pub use multigraph::{LayerSchedule, LayeredSampleSet, NeighborSpec, NodeId, ScheduleKind};
pub use planners::{
    extract_path, path_cost, plan_bmrfmt, plan_fmt, plan_mrfmt, validate_path, GoalSpec, Heuristic, PlanRequest, PlanResult,
    PlanStatus, SearchTree, Stats, Termination,
};
pub use world::{Obstacle, PlanarChain, RobotModel, WorldModel};
