//! Kd-tree over configurations with wrap-aware weighted pruning and an
//! index-rank filter, so one tree answers queries restricted to any prefix
//! layer of the sample set.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::cspace::{angle_diff, SpaceSpec, Topology};

const LEAF_SIZE: usize = 10;
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    start: u32,
    end: u32,
    left: u32,
    right: u32,
    min_rank: u32,
}

#[derive(Debug, Clone)]
pub struct KdTree {
    space: SpaceSpec,
    dim: usize,
    coords: Vec<f64>,
    /// Points with `rank < limit` pass a layer filter of size `limit`.
    ranks: Vec<u32>,
    perm: Vec<u32>,
    nodes: Vec<Node>,
    /// `[lo_0, hi_0, lo_1, hi_1, …]` per node.
    boxes: Vec<f64>,
}

impl KdTree {
    pub fn new(space: SpaceSpec, points: &[&[f64]], ranks: Vec<u32>) -> Self {
        assert_eq!(points.len(), ranks.len());
        let dim = space.dim();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            assert_eq!(p.len(), dim);
            coords.extend_from_slice(p);
        }
        let mut tree = KdTree {
            space,
            dim,
            coords,
            ranks,
            perm: (0..points.len() as u32).collect(),
            nodes: Vec::new(),
            boxes: Vec::new(),
        };
        if !points.is_empty() {
            tree.build(0, points.len());
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    #[inline]
    fn point(&self, i: u32) -> &[f64] {
        let i = i as usize;
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn build(&mut self, start: usize, end: usize) -> u32 {
        let id = self.nodes.len();
        let d = self.dim;
        let mut bbox = vec![0.0; 2 * d];
        for k in 0..d {
            bbox[2 * k] = f64::INFINITY;
            bbox[2 * k + 1] = f64::NEG_INFINITY;
        }
        let mut min_rank = u32::MAX;
        for &i in &self.perm[start..end] {
            let p = &self.coords[i as usize * d..(i as usize + 1) * d];
            for k in 0..d {
                bbox[2 * k] = bbox[2 * k].min(p[k]);
                bbox[2 * k + 1] = bbox[2 * k + 1].max(p[k]);
            }
            min_rank = min_rank.min(self.ranks[i as usize]);
        }
        self.boxes.extend_from_slice(&bbox);
        self.nodes.push(Node {
            start: start as u32,
            end: end as u32,
            left: NONE,
            right: NONE,
            min_rank,
        });
        if end - start <= LEAF_SIZE {
            return id as u32;
        }
        let dims = self.space.dims();
        let axis = (0..d)
            .max_by(|&a, &b| {
                let sa = (bbox[2 * a + 1] - bbox[2 * a]) * dims[a].weight;
                let sb = (bbox[2 * b + 1] - bbox[2 * b]) * dims[b].weight;
                sa.total_cmp(&sb)
            })
            .unwrap();
        let mid = (start + end) / 2;
        {
            let coords = &self.coords;
            self.perm[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                coords[a as usize * d + axis]
                    .total_cmp(&coords[b as usize * d + axis])
                    .then(a.cmp(&b))
            });
        }
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id].left = left;
        self.nodes[id].right = right;
        id as u32
    }

    /// Squared weighted distance lower bound from `q` to the node's box.
    fn box_dist2(&self, node: usize, q: &[f64]) -> f64 {
        let b = &self.boxes[node * 2 * self.dim..(node + 1) * 2 * self.dim];
        let mut sum = 0.0;
        for (k, dim) in self.space.dims().iter().enumerate() {
            let (lo, hi) = (b[2 * k], b[2 * k + 1]);
            let x = q[k];
            let gap = if x >= lo && x <= hi {
                0.0
            } else {
                match dim.topology {
                    Topology::Euclidean => {
                        if x < lo {
                            lo - x
                        } else {
                            x - hi
                        }
                    }
                    Topology::Angular => angle_diff(x, lo).abs().min(angle_diff(x, hi).abs()),
                }
            };
            let g = gap * dim.weight;
            sum += g * g;
        }
        sum
    }

    /// Indices of points with `rank < limit`, other than `exclude`, within
    /// `radius` of `q`; ascending by index.
    pub fn within(&self, q: &[f64], radius: f64, limit: u32, exclude: Option<u32>) -> Vec<u32> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        // slack keeps the box bound conservative against rounding
        let bound = radius * radius * (1.0 + 1e-9) + 1e-300;
        let mut stack = vec![0u32];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if node.min_rank >= limit || self.box_dist2(id as usize, q) > bound {
                continue;
            }
            if node.left == NONE {
                for &i in &self.perm[node.start as usize..node.end as usize] {
                    if self.ranks[i as usize] < limit
                        && Some(i) != exclude
                        && self.space.metric(q, self.point(i)) <= radius
                    {
                        out.push(i);
                    }
                }
            } else {
                stack.push(node.left);
                stack.push(node.right);
            }
        }
        out.sort_unstable();
        out
    }

    /// The `k` nearest filtered points, ties broken by smaller index; ascending by index.
    pub fn nearest(&self, q: &[f64], k: usize, limit: u32, exclude: Option<u32>) -> Vec<u32> {
        if k == 0 || self.nodes.is_empty() {
            return Vec::new();
        }
        let mut best: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        let mut stack = vec![0u32];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if node.min_rank >= limit {
                continue;
            }
            if best.len() == k {
                let worst = best.peek().unwrap().dist;
                if self.box_dist2(id as usize, q) > worst * worst * (1.0 + 1e-9) + 1e-300 {
                    continue;
                }
            }
            if node.left == NONE {
                for &i in &self.perm[node.start as usize..node.end as usize] {
                    if self.ranks[i as usize] >= limit || Some(i) == exclude {
                        continue;
                    }
                    let c = Candidate {
                        dist: self.space.metric(q, self.point(i)),
                        index: i,
                    };
                    if best.len() < k {
                        best.push(c);
                    } else if c < *best.peek().unwrap() {
                        best.pop();
                        best.push(c);
                    }
                }
            } else {
                let (l, r) = (node.left, node.right);
                let dl = self.box_dist2(l as usize, q);
                let dr = self.box_dist2(r as usize, q);
                // nearer child is popped first
                if dl <= dr {
                    stack.push(r);
                    stack.push(l);
                } else {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        let mut out: Vec<u32> = best.into_iter().map(|c| c.index).collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist: f64,
    index: u32,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist.total_cmp(&other.dist).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
