use std::time::Instant;

use crate::error::{Error, Result};
use crate::multigraph::{LayeredSampleSet, NodeId};

use super::expand::cached;
use super::tree::{NodeState, SearchTree};
use super::{collapse, in_goal, Heuristic, PlanRequest, PlanResult, PlanStatus, Stats};

/// Single-resolution FMT* on a one-layer sample set.
pub fn plan_fmt(req: &PlanRequest<'_>, set: &LayeredSampleSet) -> Result<PlanResult> {
    if set.layers() != 1 {
        return Err(Error::contract(format!("FMT* runs on one layer, got {}", set.layers())));
    }
    req.validate(set)?;
    let start = Instant::now();
    let deadline = req.deadline(start);
    let space = set.space();
    let mut stats = Stats::default();
    let mut cache = vec![None; set.n_configs()];

    let root = NodeId::new(set.init_index(), 1);
    let mut tree = SearchTree::new(set, root, forward_target(req, set));
    let mut z = root;
    let status = loop {
        if in_goal(set, &req.goal, z) {
            break PlanStatus::Solved;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break PlanStatus::Timeout;
        }
        let near: Vec<NodeId> = cached(&mut cache, set, z, &mut stats.neighbor_queries)
            .iter()
            .map(|&i| NodeId::new(i, 1))
            .filter(|&x| tree.state(x) == NodeState::Unvisited)
            .collect();
        let mut fresh = Vec::new();
        for x in near {
            let xc = set.config(x.index).coords();
            let mut best: Option<(NodeId, f64)> = None;
            for &i in cached(&mut cache, set, x, &mut stats.neighbor_queries) {
                let y = NodeId::new(i, 1);
                if tree.state(y) == NodeState::Open {
                    let c = tree.cost_unchecked(y) + space.metric(set.config(i).coords(), xc);
                    if best.is_none_or(|(_, bc)| c < bc) {
                        best = Some((y, c));
                    }
                }
            }
            let Some((y, c)) = best else { continue };
            stats.edge_evaluations += 1;
            let yc = set.config(y.index).coords();
            if req.world.motion_free_raw(space, yc, xc, req.resolution, &mut stats.collision_point_checks) {
                stats.metric_connections += 1;
                tree.connect(x, y, c);
                fresh.push(x);
            } else {
                stats.failed_edges += 1;
            }
        }
        tree.close(z);
        stats.expansions += 1;
        stats.expansion_order.push(z);
        stats.max_node_expansions = stats.max_node_expansions.max(tree.expansion_count(z));
        for x in fresh {
            tree.open(set, x);
        }
        match tree.peek(1) {
            Some(next) => z = next,
            None => break PlanStatus::Failure,
        }
    };
    stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let (nodes, cost) = if status == PlanStatus::Solved {
        (tree.node_path(z).expect("goal node is in the tree"), tree.cost_unchecked(z))
    } else {
        (Vec::new(), f64::INFINITY)
    };
    Ok(PlanResult {
        status,
        path: collapse(set, &nodes),
        nodes,
        cost,
        stats,
        trees: vec![tree],
        meet: None,
    })
}

pub(crate) fn forward_target(req: &PlanRequest<'_>, set: &LayeredSampleSet) -> Option<(u32, f64)> {
    let slack = match &req.goal {
        super::GoalSpec::ExactNode => 0.0,
        super::GoalSpec::Ball { radius, .. } => *radius,
    };
    (req.heuristic == Heuristic::Metric).then_some((set.goal_index(), slack))
}
