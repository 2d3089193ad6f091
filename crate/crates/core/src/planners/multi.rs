use std::time::Instant;

use crate::error::Result;
use crate::multigraph::{LayeredSampleSet, NodeId};

use super::expand::{expand, ExpandContext};
use super::fmt::forward_target;
use super::tree::SearchTree;
use super::{collapse, in_goal, Heuristic, PlanRequest, PlanResult, PlanStatus};

/// MRFMT*: a single tree marching over all layers of `set`.
///
/// Stops when the expanded node lies in the goal region, all queues empty,
/// or the time budget runs out. There is no anytime refinement, so
/// `first_solution: false` behaves like `true`.
pub fn plan_mrfmt(req: &PlanRequest<'_>, set: &LayeredSampleSet) -> Result<PlanResult> {
    req.validate(set)?;
    let start = Instant::now();
    let deadline = req.deadline(start);
    let mut ctx = ExpandContext::new(set, req.world, req.resolution);

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
        if !expand(&mut ctx, &mut tree, z, None) {
            break PlanStatus::Failure;
        }
        z = tree.peek(tree.p).expect("successful expansion leaves an open node at p");
    };
    let mut stats = ctx.stats;
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

/// BMRFMT*: forward and backward trees expanded alternately until they meet.
///
/// With `first_solution` the search stops at the first meeting node;
/// otherwise it keeps improving the meeting node until the trees are
/// exhausted or the time budget runs out.
pub fn plan_bmrfmt(req: &PlanRequest<'_>, set: &LayeredSampleSet) -> Result<PlanResult> {
    req.validate(set)?;
    let start = Instant::now();
    let deadline = req.deadline(start);
    let mut ctx = ExpandContext::new(set, req.world, req.resolution);

    let forward = SearchTree::new(set, NodeId::new(set.init_index(), 1), forward_target(req, set));
    let backward_target = (req.heuristic == Heuristic::Metric).then_some((set.init_index(), 0.0));
    let backward = SearchTree::new(set, NodeId::new(set.goal_index(), 1), backward_target);
    let mut trees = [forward, backward];
    let mut meet: Option<NodeId> = None;
    let mut cur = 0;
    let mut z = trees[0].root();

    let status = loop {
        if meet.is_some() && req.termination.first_solution {
            break PlanStatus::Solved;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break if meet.is_some() { PlanStatus::Solved } else { PlanStatus::Timeout };
        }
        let (head, tail) = trees.split_at_mut(1);
        let (this, that) = if cur == 0 { (&mut head[0], &tail[0]) } else { (&mut tail[0], &head[0]) };
        let ok = expand(&mut ctx, this, z, Some((that, &mut meet)));
        let other_open = that.open_len(that.p) > 0;
        if other_open {
            cur = 1 - cur;
        } else if !ok {
            break if meet.is_some() { PlanStatus::Solved } else { PlanStatus::Failure };
        }
        let t = &trees[cur];
        z = t.peek(t.p).expect("the selected tree has an open node at p");
    };
    let mut stats = ctx.stats;
    stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let [forward, backward] = trees;
    let (nodes, cost) = match (status, meet) {
        (PlanStatus::Solved, Some(m)) => {
            let mut nodes = forward.node_path(m).expect("meeting node is in the forward tree");
            let mut back = backward.node_path(m).expect("meeting node is in the backward tree");
            back.pop();
            nodes.extend(back.into_iter().rev());
            (nodes, forward.cost_unchecked(m) + backward.cost_unchecked(m))
        }
        _ => (Vec::new(), f64::INFINITY),
    };
    debug_assert!(nodes.is_empty() || in_goal(set, &req.goal, *nodes.last().unwrap()));
    Ok(PlanResult {
        status,
        path: collapse(set, &nodes),
        nodes,
        cost,
        stats,
        trees: vec![forward, backward],
        meet,
    })
}
