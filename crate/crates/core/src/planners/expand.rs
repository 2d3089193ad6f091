use crate::multigraph::{LayeredSampleSet, NodeId};
use crate::world::WorldModel;

use super::tree::{NodeState, SearchTree};
use super::{LayerEvent, Stats};

/// Shared state of one planning call: the sample set, collision model,
/// neighbour cache and counters. Both trees of a bidirectional search share
/// one context.
#[derive(Debug)]
pub struct ExpandContext<'a> {
    pub set: &'a LayeredSampleSet,
    pub world: &'a WorldModel,
    pub resolution: f64,
    pub stats: Stats,
    cache: Vec<Option<Box<[u32]>>>,
}

impl<'a> ExpandContext<'a> {
    pub fn new(set: &'a LayeredSampleSet, world: &'a WorldModel, resolution: f64) -> Self {
        ExpandContext {
            set,
            world,
            resolution,
            stats: Stats::default(),
            cache: vec![None; set.n_configs() * set.layers()],
        }
    }
}

/// Metric neighbours of `v`, queried once and cached.
pub(crate) fn cached<'c>(
    cache: &'c mut [Option<Box<[u32]>>],
    set: &LayeredSampleSet,
    v: NodeId,
    queries: &mut u64,
) -> &'c [u32] {
    let slot = (v.layer as usize - 1) * set.n_configs() + v.index as usize;
    cache[slot].get_or_insert_with(|| set.metric_neighbors(v, queries).into_boxed_slice())
}

/// Expands `z`, the minimum of `tree`'s queue at the current layer pointer.
///
/// Every unvisited neighbour `x` of `z` is connected through the cheapest
/// open node of layer `p` next to it, if that edge is collision-free.
/// Counterpart edges are accepted unchecked. New nodes are queued after the
/// loop, `p` drops to the sparsest layer that received one, then climbs
/// past empty queues. Returns false once every queue is empty.
///
/// With `other`, connected nodes also present in the other tree update the
/// meeting node when their summed cost improves on it.
pub fn expand(
    ctx: &mut ExpandContext<'_>,
    tree: &mut SearchTree,
    z: NodeId,
    mut other: Option<(&SearchTree, &mut Option<NodeId>)>,
) -> bool {
    let set = ctx.set;
    let space = set.space();
    let p = tree.p;
    debug_assert_eq!(z.layer as usize, p);
    debug_assert_eq!(tree.state(z), NodeState::Open);
    debug_assert_eq!(tree.peek(p), Some(z));

    let mut z_near: Vec<NodeId> = cached(&mut ctx.cache, set, z, &mut ctx.stats.neighbor_queries)
        .iter()
        .map(|&i| NodeId::new(i, z.layer))
        .filter(|&x| tree.state(x) == NodeState::Unvisited)
        .collect();
    z_near.extend(set.counterparts(z).filter(|&x| tree.state(x) == NodeState::Unvisited));

    let mut v_new = Vec::new();
    for x in z_near {
        let xc = set.config(x.index).coords();
        let metric = x.layer == z.layer;
        let (x_min, cost) = if metric {
            let mut best: Option<(NodeId, f64)> = None;
            for &i in cached(&mut ctx.cache, set, x, &mut ctx.stats.neighbor_queries) {
                let u = NodeId::new(i, x.layer);
                if tree.state(u) != NodeState::Open {
                    continue;
                }
                let c = tree.cost_unchecked(u) + space.metric(set.config(i).coords(), xc);
                if best.is_none_or(|(_, bc)| c < bc) {
                    best = Some((u, c));
                }
            }
            match best {
                Some(b) => b,
                None => continue,
            }
        } else {
            // across layers the only layer-p neighbour of x is its counterpart
            let u = NodeId::new(x.index, p as u16);
            if tree.state(u) != NodeState::Open {
                continue;
            }
            (u, tree.cost_unchecked(u))
        };
        if metric {
            ctx.stats.edge_evaluations += 1;
            let free = ctx.world.motion_free_raw(
                space,
                set.config(x_min.index).coords(),
                xc,
                ctx.resolution,
                &mut ctx.stats.collision_point_checks,
            );
            if !free {
                ctx.stats.failed_edges += 1;
                continue;
            }
            ctx.stats.metric_connections += 1;
        } else {
            ctx.stats.counterpart_connections += 1;
        }
        tree.connect(x, x_min, cost);
        v_new.push(x);

        if let Some((back, meet)) = other.as_mut() {
            if back.in_tree(x) {
                let sum = cost + back.cost_unchecked(x);
                let better = match **meet {
                    None => true,
                    Some(m) => sum < tree.cost_unchecked(m) + back.cost_unchecked(m),
                };
                if better {
                    **meet = Some(x);
                }
            }
        }
    }

    tree.close(z);
    ctx.stats.expansions += 1;
    ctx.stats.expansion_order.push(z);
    ctx.stats.max_node_expansions = ctx.stats.max_node_expansions.max(tree.expansion_count(z));

    let sparsest = v_new.iter().map(|v| v.layer).min();
    for &v in &v_new {
        tree.open(set, v);
    }
    let mut q = sparsest.map_or(p, |l| p.min(l as usize));
    let ok = loop {
        if tree.open_len(q) > 0 {
            break true;
        }
        if q < tree.layers() {
            q += 1;
        } else {
            break false;
        }
    };
    tree.p = q;
    if q != p {
        ctx.stats.layer_switches += 1;
        ctx.stats.layer_events.push(LayerEvent {
            expansion: ctx.stats.expansions - 1,
            tree: u8::from(tree.root().index != set.init_index()),
            from: p as u16,
            to: q as u16,
            sparsest_opened: sparsest,
        });
    }
    ok
}
