use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::multigraph::{LayeredSampleSet, NodeId};

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NodeState {
    Unvisited,
    /// Connected during the running expansion, not yet in a queue.
    Pending,
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct QueueEntry {
    pub key: f64,
    pub node: NodeId,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    // reversed so `BinaryHeap` pops the smallest key, then the smallest node
    fn cmp(&self, other: &Self) -> Ordering {
        other.key.total_cmp(&self.key).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Search tree over the nodes of a layered sample set, with one open queue
/// per layer and the layer pointer `p`.
#[derive(Debug, Clone)]
pub struct SearchTree {
    root: NodeId,
    n_configs: usize,
    layers: usize,
    state: Vec<NodeState>,
    parent: Vec<u32>,
    cost: Vec<f64>,
    expansions: Vec<u32>,
    pub(crate) queues: Vec<BinaryHeap<QueueEntry>>,
    pub(crate) p: usize,
    /// Heuristic target index and goal-region slack.
    target: Option<(u32, f64)>,
}

impl SearchTree {
    /// Tree holding only `root`, queued at its layer. `target` is the heuristic
    /// target index with the slack subtracted from its distance.
    pub fn new(set: &LayeredSampleSet, root: NodeId, target: Option<(u32, f64)>) -> Self {
        let n_configs = set.n_configs();
        let layers = set.layers();
        let slots = n_configs * layers;
        let mut tree = SearchTree {
            root,
            n_configs,
            layers,
            state: vec![NodeState::Unvisited; slots],
            parent: vec![NO_PARENT; slots],
            cost: vec![f64::INFINITY; slots],
            expansions: vec![0; slots],
            queues: vec![BinaryHeap::new(); layers],
            p: root.layer as usize,
            target,
        };
        let s = tree.slot(root);
        tree.state[s] = NodeState::Open;
        tree.cost[s] = 0.0;
        let key = tree.heuristic(set, root);
        tree.queues[root.layer as usize - 1].push(QueueEntry { key, node: root });
        tree
    }

    /// Heuristic estimate of the remaining cost from `v`.
    #[inline]
    pub(crate) fn heuristic(&self, set: &LayeredSampleSet, v: NodeId) -> f64 {
        match self.target {
            None => 0.0,
            Some((t, slack)) => {
                let d = set.space().metric(set.config(v.index).coords(), set.config(t).coords());
                (d - slack).max(0.0)
            }
        }
    }

    #[inline]
    pub(crate) fn slot(&self, v: NodeId) -> usize {
        (v.layer as usize - 1) * self.n_configs + v.index as usize
    }

    #[inline]
    fn node_of(&self, slot: usize) -> NodeId {
        NodeId::new((slot % self.n_configs) as u32, (slot / self.n_configs + 1) as u16)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    /// Current layer pointer.
    pub fn pointer(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn state(&self, v: NodeId) -> NodeState {
        self.state[self.slot(v)]
    }

    #[inline]
    pub fn in_tree(&self, v: NodeId) -> bool {
        self.state(v) != NodeState::Unvisited
    }

    /// Cost-to-come, or `None` when `v` is not in the tree.
    #[inline]
    pub fn cost(&self, v: NodeId) -> Option<f64> {
        self.in_tree(v).then(|| self.cost[self.slot(v)])
    }

    #[inline]
    pub(crate) fn cost_unchecked(&self, v: NodeId) -> f64 {
        self.cost[self.slot(v)]
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.parent[self.slot(v)];
        (p != NO_PARENT).then(|| self.node_of(p as usize))
    }

    pub fn expansion_count(&self, v: NodeId) -> u32 {
        self.expansions[self.slot(v)]
    }

    pub fn max_expansions(&self) -> u32 {
        self.expansions.iter().copied().max().unwrap_or(0)
    }

    /// Number of open nodes in layer `l`.
    pub fn open_len(&self, layer: usize) -> usize {
        self.queues[layer - 1].len()
    }

    pub fn has_open(&self) -> bool {
        self.queues.iter().any(|q| !q.is_empty())
    }

    /// Minimum-key open node of layer `l`.
    pub fn peek(&self, layer: usize) -> Option<NodeId> {
        self.queues[layer - 1].peek().map(|e| e.node)
    }

    /// All connected nodes in slot order (layer-major, then index).
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.state.len())
            .filter(|&s| self.state[s] != NodeState::Unvisited)
            .map(|s| self.node_of(s))
    }

    /// `(child, parent)` pairs in slot order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes().filter_map(|v| self.parent(v).map(|p| (v, p))).collect()
    }

    pub(crate) fn connect(&mut self, v: NodeId, parent: NodeId, cost: f64) {
        let s = self.slot(v);
        debug_assert_eq!(self.state[s], NodeState::Unvisited);
        self.state[s] = NodeState::Pending;
        self.parent[s] = self.slot(parent) as u32;
        self.cost[s] = cost;
    }

    pub(crate) fn open(&mut self, set: &LayeredSampleSet, v: NodeId) {
        let s = self.slot(v);
        let key = self.cost[s] + self.heuristic(set, v);
        debug_assert_eq!(self.state[s], NodeState::Pending);
        self.state[s] = NodeState::Open;
        self.queues[v.layer as usize - 1].push(QueueEntry { key, node: v });
    }

    /// Removes `z` from the top of its queue and closes it.
    pub(crate) fn close(&mut self, z: NodeId) {
        let top = self.queues[z.layer as usize - 1].pop();
        debug_assert_eq!(top.map(|e| e.node), Some(z), "closed node must be the queue minimum");
        let s = self.slot(z);
        self.state[s] = NodeState::Closed;
        self.expansions[s] += 1;
    }

    /// Root-to-`v` node sequence.
    pub fn node_path(&self, v: NodeId) -> Option<Vec<NodeId>> {
        if !self.in_tree(v) {
            return None;
        }
        let mut out = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            out.push(p);
            cur = p;
        }
        out.reverse();
        Some(out)
    }

    /// Checks every structural invariant of the tree against `set`: state
    /// and queue agreement, exact cost recurrences, and acyclicity.
    pub fn check_consistency(&self, set: &LayeredSampleSet) -> Result<(), String> {
        if self.cost_unchecked(self.root) != 0.0 || self.parent(self.root).is_some() {
            return Err("root must have zero cost and no parent".into());
        }
        for (l, q) in self.queues.iter().enumerate() {
            for e in q.iter() {
                if e.node.layer as usize != l + 1 {
                    return Err(format!("{:?} queued in layer {}", e.node, l + 1));
                }
                if self.state(e.node) != NodeState::Open {
                    return Err(format!("{:?} queued but {:?}", e.node, self.state(e.node)));
                }
            }
            let open = (0..self.n_configs)
                .filter(|&i| self.state[l * self.n_configs + i] == NodeState::Open)
                .count();
            if open != q.len() {
                return Err(format!("layer {}: {open} open nodes, {} queued", l + 1, q.len()));
            }
        }
        for v in self.nodes() {
            if !set.contains(v) {
                return Err(format!("{v:?} is not a node of the sample set"));
            }
            if self.state(v) == NodeState::Pending {
                return Err(format!("{v:?} left pending"));
            }
            if v == self.root {
                continue;
            }
            let Some(p) = self.parent(v) else {
                return Err(format!("{v:?} has no parent"));
            };
            if !self.in_tree(p) {
                return Err(format!("{v:?} hangs off {p:?}, which is not in the tree"));
            }
            let edge = if p.index == v.index {
                if (p.layer as i32 - v.layer as i32).abs() != 1 {
                    return Err(format!("{v:?}: counterpart edge skips layers"));
                }
                0.0
            } else {
                if p.layer != v.layer {
                    return Err(format!("{v:?}: metric edge across layers"));
                }
                set.space().metric(set.config(p.index).coords(), set.config(v.index).coords())
            };
            if self.cost_unchecked(v) != self.cost_unchecked(p) + edge {
                return Err(format!("{v:?}: cost recurrence broken"));
            }
            let mut steps = 0;
            let mut cur = v;
            while let Some(next) = self.parent(cur) {
                steps += 1;
                if steps > self.state.len() {
                    return Err(format!("{v:?}: parent chain cycles"));
                }
                cur = next;
            }
            if cur != self.root {
                return Err(format!("{v:?} does not reach the root"));
            }
        }
        Ok(())
    }
}

impl PartialEq for SearchTree {
    /// Bitwise comparison of states, parents and costs.
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
            && self.n_configs == other.n_configs
            && self.layers == other.layers
            && self.state == other.state
            && self.parent == other.parent
            && self.cost.iter().zip(&other.cost).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}
