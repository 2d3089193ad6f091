//! Geometric world and robot models with point-state and swept-motion
//! collision queries.
//!
//! Obstacles live in a workspace with axis-aligned bounds. Point robots may
//! move in a workspace of any dimension against axis-aligned boxes; every other
//! robot and obstacle kind is planar.

pub mod geom;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cspace::{Config, SpaceSpec};
use crate::error::{Error, Result};
use geom::{Rect, P2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Obstacle {
    /// Axis-aligned box of the workspace dimension.
    Aabb { min: Vec<f64>, max: Vec<f64> },
    /// Counterclockwise convex polygon.
    ConvexPolygon { vertices: Vec<P2> },
    /// Occupancy grid; `rows[0]` is the row nearest `origin.y`, `'#'` marks an
    /// occupied cell and `'.'` a free one.
    OccupancyGrid {
        origin: P2,
        cell_size: f64,
        rows: Vec<String>,
    },
}

impl Obstacle {
    pub fn aabb(min: impl Into<Vec<f64>>, max: impl Into<Vec<f64>>) -> Self {
        Obstacle::Aabb {
            min: min.into(),
            max: max.into(),
        }
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::aabb(vec![x0, y0], vec![x1, y1])
    }
}

/// A planar serial chain of revolute joints, optionally on a mobile base.
///
/// Configuration layout: `[base_x, base_y]` when the base is mobile, followed
/// by one relative joint angle per link. Link `i` points along the sum of the
/// first `i + 1` joint angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarChain {
    pub link_lengths: Vec<f64>,
    pub mobile_base: bool,
    /// Base position when the base is fixed.
    #[serde(default)]
    pub base: P2,
    /// Links are capsules of this radius; zero means bare segments.
    #[serde(default)]
    pub link_radius: f64,
}

impl PlanarChain {
    pub fn config_dim(&self) -> usize {
        self.link_lengths.len() + if self.mobile_base { 2 } else { 0 }
    }

    /// Link endpoint positions, in order from the base outwards.
    pub fn forward_kinematics(&self, x: &Config) -> Result<Vec<P2>> {
        if x.dim() != self.config_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.config_dim(),
                found: x.dim(),
            });
        }
        let mut joints = Vec::new();
        self.joints_into(x.coords(), &mut joints);
        joints.remove(0);
        Ok(joints)
    }

    /// Base followed by every link endpoint.
    pub(crate) fn joints_into(&self, x: &[f64], out: &mut Vec<P2>) {
        let (mut p, angles) = if self.mobile_base {
            ([x[0], x[1]], &x[2..])
        } else {
            (self.base, x)
        };
        out.clear();
        out.push(p);
        let mut heading = 0.0f64;
        for (&len, &q) in self.link_lengths.iter().zip(angles) {
            heading += q;
            let (s, c) = heading.sin_cos();
            p = [p[0] + len * c, p[1] + len * s];
            out.push(p);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RobotModel {
    /// The configuration is the workspace position.
    Point,
    /// Disc centred at `(x, y)`.
    Disc { radius: f64 },
    /// Convex body posed by `(x, y, θ)`; vertices in the body frame, counterclockwise.
    PolygonBody { vertices: Vec<P2> },
    PlanarChain(PlanarChain),
}

impl RobotModel {
    /// Configuration dimension this robot expects in a workspace of `workspace_dim`.
    pub fn config_dim(&self, workspace_dim: usize) -> usize {
        match self {
            RobotModel::Point => workspace_dim,
            RobotModel::Disc { .. } => 2,
            RobotModel::PolygonBody { .. } => 3,
            RobotModel::PlanarChain(chain) => chain.config_dim(),
        }
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Box { min: Vec<f64>, max: Vec<f64> },
    Convex { verts: Vec<P2>, bbox: Rect },
    Grid(Grid),
}

#[derive(Debug, Clone)]
struct Grid {
    origin: P2,
    cell: f64,
    width: usize,
    height: usize,
    occupied: Vec<bool>,
}

impl Grid {
    fn cell_rect(&self, col: usize, row: usize) -> Rect {
        let x0 = self.origin[0] + col as f64 * self.cell;
        let y0 = self.origin[1] + row as f64 * self.cell;
        Rect {
            min: [x0, y0],
            max: [x0 + self.cell, y0 + self.cell],
        }
    }

    fn index_range(&self, lo: f64, hi: f64, origin: f64, count: usize) -> Option<(usize, usize)> {
        let a = ((lo - origin) / self.cell).floor();
        let b = ((hi - origin) / self.cell).floor();
        if b < 0.0 || a >= count as f64 {
            return None;
        }
        let a = a.max(0.0) as usize;
        let b = (b as usize).min(count - 1);
        Some((a, b))
    }

    /// Visits the occupied cells whose closed rectangle meets `area`.
    fn any_cell(&self, area: Rect, mut hit: impl FnMut(Rect) -> bool) -> bool {
        // floor() assigns a boundary to the upper cell; widen by one cell so the
        // closed lower neighbour is also tested.
        let Some((c0, c1)) = self.index_range(area.min[0] - self.cell, area.max[0], self.origin[0], self.width)
        else {
            return false;
        };
        let Some((r0, r1)) = self.index_range(area.min[1] - self.cell, area.max[1], self.origin[1], self.height)
        else {
            return false;
        };
        for row in r0..=r1 {
            for col in c0..=c1 {
                if self.occupied[row * self.width + col] {
                    let rect = self.cell_rect(col, row);
                    if rect.overlaps(&area) && hit(rect) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

#[derive(Deserialize)]
struct RawWorld {
    bounds: Vec<[f64; 2]>,
    obstacles: Vec<Obstacle>,
    robot: RobotModel,
}

/// Workspace bounds, obstacles and robot. Immutable after construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawWorld")]
pub struct WorldModel {
    /// `[lower, upper]` per workspace axis.
    bounds: Vec<[f64; 2]>,
    obstacles: Vec<Obstacle>,
    robot: RobotModel,
    #[serde(skip)]
    shapes: Vec<Shape>,
}

impl TryFrom<RawWorld> for WorldModel {
    type Error = Error;

    fn try_from(raw: RawWorld) -> Result<Self> {
        WorldModel::new(raw.bounds, raw.obstacles, raw.robot)
    }
}

impl PartialEq for WorldModel {
    fn eq(&self, other: &Self) -> bool {
        self.bounds == other.bounds && self.obstacles == other.obstacles && self.robot == other.robot
    }
}

impl WorldModel {
    pub fn new(bounds: Vec<[f64; 2]>, obstacles: Vec<Obstacle>, robot: RobotModel) -> Result<Self> {
        let wdim = bounds.len();
        if wdim < 2 {
            return Err(Error::invalid("world.bounds", "workspace needs at least 2 axes"));
        }
        if bounds.iter().any(|b| !(b[0] < b[1])) {
            return Err(Error::invalid("world.bounds", "every axis needs lower < upper"));
        }
        let planar_only = !matches!(robot, RobotModel::Point);
        if planar_only && wdim != 2 {
            return Err(Error::invalid("world.bounds", "non-point robots need a planar workspace"));
        }
        match &robot {
            RobotModel::Point => {}
            RobotModel::Disc { radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::invalid("world.robot", "disc radius must be positive"));
                }
            }
            RobotModel::PolygonBody { vertices } => {
                if !geom::is_convex_ccw(vertices) {
                    return Err(Error::invalid("world.robot", "body polygon must be convex and counterclockwise"));
                }
            }
            RobotModel::PlanarChain(chain) => {
                if chain.link_lengths.is_empty() || chain.link_lengths.iter().any(|&l| !(l > 0.0)) {
                    return Err(Error::invalid("world.robot", "chain link lengths must be positive"));
                }
                if !(chain.link_radius >= 0.0) {
                    return Err(Error::invalid("world.robot", "link radius must be non-negative"));
                }
            }
        }

        let mut shapes = Vec::with_capacity(obstacles.len());
        for (i, obstacle) in obstacles.iter().enumerate() {
            shapes.push(compile(i, obstacle, wdim)?);
        }
        Ok(WorldModel {
            bounds,
            obstacles,
            robot,
            shapes,
        })
    }

    /// Unit-square or unit-cube workspace.
    pub fn unit(dim: usize, obstacles: Vec<Obstacle>, robot: RobotModel) -> Result<Self> {
        Self::new(vec![[0.0, 1.0]; dim], obstacles, robot)
    }

    pub fn bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn robot(&self) -> &RobotModel {
        &self.robot
    }

    pub fn config_dim(&self) -> usize {
        self.robot.config_dim(self.bounds.len())
    }

    fn check_dim(&self, x: &Config) -> Result<()> {
        if x.dim() != self.config_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.config_dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn is_free(&self, x: &Config) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.free_at(x.coords()))
    }

    /// Discretized swept-motion check between `a` and `b` at configuration-space
    /// step `resolution`; `point_checks` accumulates the number of state checks.
    pub fn motion_free(
        &self,
        space: &SpaceSpec,
        a: &Config,
        b: &Config,
        resolution: f64,
        point_checks: &mut u64,
    ) -> Result<bool> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        if space.dim() != self.config_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.config_dim(),
                found: space.dim(),
            });
        }
        if !(resolution > 0.0) {
            return Err(Error::contract("motion resolution must be positive"));
        }
        Ok(self.motion_free_raw(space, a.coords(), b.coords(), resolution, point_checks))
    }

    /// Checks `2^k + 1` evenly spaced states, where `2^k` is the smallest power
    /// of two with `2^k * resolution >= distance(a, b)`. The endpoints go first,
    /// then midpoints coarse to fine. Power-of-two counts nest, so halving the
    /// resolution only adds states.
    pub(crate) fn motion_free_raw(
        &self,
        space: &SpaceSpec,
        a: &[f64],
        b: &[f64],
        resolution: f64,
        point_checks: &mut u64,
    ) -> bool {
        // symmetric by construction: always discretize from the smaller endpoint
        let (a, b) = if lex_cmp(a, b) == Ordering::Greater { (b, a) } else { (a, b) };
        *point_checks += 1;
        if !self.free_at(a) {
            return false;
        }
        let length = space.metric(a, b);
        if length == 0.0 {
            return true;
        }
        *point_checks += 1;
        if !self.free_at(b) {
            return false;
        }
        let segments = ((length / resolution).ceil() as usize).max(1).next_power_of_two();
        let mut state = vec![0.0; a.len()];
        let mut step = segments / 2;
        while step >= 1 {
            let mut i = step;
            while i < segments {
                space.interpolate_into(a, b, i as f64 / segments as f64, &mut state);
                *point_checks += 1;
                if !self.free_at(&state) {
                    return false;
                }
                i += 2 * step;
            }
            step /= 2;
        }
        true
    }

    pub(crate) fn free_at(&self, x: &[f64]) -> bool {
        match &self.robot {
            RobotModel::Point => self.point_free(x),
            RobotModel::Disc { radius } => {
                let c = [x[0], x[1]];
                self.inside_bounds(Rect { min: c, max: c }.inflate(*radius)) && !self.primitive_hits(&[c], *radius)
            }
            RobotModel::PolygonBody { vertices } => {
                let (s, co) = x[2].sin_cos();
                let posed: Vec<P2> = vertices
                    .iter()
                    .map(|v| [x[0] + co * v[0] - s * v[1], x[1] + s * v[0] + co * v[1]])
                    .collect();
                self.inside_bounds(Rect::of_points(&posed)) && !self.primitive_hits(&posed, 0.0)
            }
            RobotModel::PlanarChain(chain) => {
                let mut joints = Vec::with_capacity(chain.link_lengths.len() + 1);
                chain.joints_into(x, &mut joints);
                let r = chain.link_radius;
                if !self.inside_bounds(Rect::of_points(&joints).inflate(r)) {
                    return false;
                }
                !joints.windows(2).any(|seg| self.primitive_hits(seg, r))
            }
        }
    }

    fn inside_bounds(&self, r: Rect) -> bool {
        (0..2).all(|k| r.min[k] >= self.bounds[k][0] && r.max[k] <= self.bounds[k][1])
    }

    fn point_free(&self, x: &[f64]) -> bool {
        if x.iter().zip(&self.bounds).any(|(&c, b)| c < b[0] || c > b[1]) {
            return false;
        }
        let p = if x.len() == 2 { Some([x[0], x[1]]) } else { None };
        !self.shapes.iter().any(|shape| match shape {
            Shape::Box { min, max } => x.iter().zip(min.iter().zip(max)).all(|(&c, (&lo, &hi))| c >= lo && c <= hi),
            Shape::Convex { verts, bbox } => {
                let p = p.expect("planar shapes imply a planar workspace");
                bbox.overlaps(&Rect { min: p, max: p }) && geom::intersects(&[p], verts)
            }
            Shape::Grid(grid) => {
                let p = p.expect("planar shapes imply a planar workspace");
                grid.any_cell(Rect { min: p, max: p }, |_| true)
            }
        })
    }

    /// Whether a planar convex primitive inflated by `radius` touches an obstacle.
    fn primitive_hits(&self, verts: &[P2], radius: f64) -> bool {
        let bbox = Rect::of_points(verts).inflate(radius);
        self.shapes.iter().any(|shape| match shape {
            Shape::Box { min, max } => {
                let rect = Rect {
                    min: [min[0], min[1]],
                    max: [max[0], max[1]],
                };
                rect.overlaps(&bbox) && geom::collides(verts, radius, &rect.corners())
            }
            Shape::Convex { verts: obstacle, bbox: ob } => ob.overlaps(&bbox) && geom::collides(verts, radius, obstacle),
            Shape::Grid(grid) => grid.any_cell(bbox, |cell| geom::collides(verts, radius, &cell.corners())),
        })
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn compile(i: usize, obstacle: &Obstacle, wdim: usize) -> Result<Shape> {
    let bad = |reason: String| Error::invalid("world.obstacles", format!("obstacle {i}: {reason}"));
    match obstacle {
        Obstacle::Aabb { min, max } => {
            if min.len() != wdim || max.len() != wdim {
                return Err(bad(format!("box must have {wdim} coordinates")));
            }
            if min.iter().zip(max).any(|(lo, hi)| !(lo < hi)) {
                return Err(bad("box needs min < max on every axis".into()));
            }
            Ok(Shape::Box {
                min: min.clone(),
                max: max.clone(),
            })
        }
        Obstacle::ConvexPolygon { vertices } => {
            if wdim != 2 {
                return Err(bad("polygons need a planar workspace".into()));
            }
            if !geom::is_convex_ccw(vertices) {
                return Err(bad("polygon must have >= 3 vertices, convex and counterclockwise".into()));
            }
            Ok(Shape::Convex {
                verts: vertices.clone(),
                bbox: Rect::of_points(vertices),
            })
        }
        Obstacle::OccupancyGrid { origin, cell_size, rows } => {
            if wdim != 2 {
                return Err(bad("grids need a planar workspace".into()));
            }
            if !(*cell_size > 0.0) {
                return Err(bad("cell size must be positive".into()));
            }
            let width = rows.first().map_or(0, |r| r.chars().count());
            if width == 0 || rows.iter().any(|r| r.chars().count() != width) {
                return Err(bad("grid rows must be non-empty and equally long".into()));
            }
            let mut occupied = Vec::with_capacity(width * rows.len());
            for row in rows {
                for ch in row.chars() {
                    occupied.push(match ch {
                        '#' => true,
                        '.' => false,
                        other => return Err(bad(format!("unexpected grid cell {other:?}"))),
                    });
                }
            }
            Ok(Shape::Grid(Grid {
                origin: *origin,
                cell: *cell_size,
                width,
                height: rows.len(),
                occupied,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn point_world(obstacles: Vec<Obstacle>) -> WorldModel {
        WorldModel::unit(2, obstacles, RobotModel::Point).unwrap()
    }

    fn cfg(v: &[f64]) -> Config {
        Config::new(v.to_vec())
    }

    /// Exact segment/rectangle intersection by Liang-Barsky clipping.
    fn segment_hits_rect(a: P2, b: P2, min: P2, max: P2) -> bool {
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        let d = [b[0] - a[0], b[1] - a[1]];
        for k in 0..2 {
            if d[k] == 0.0 {
                if a[k] < min[k] || a[k] > max[k] {
                    return false;
                }
            } else {
                let mut ta = (min[k] - a[k]) / d[k];
                let mut tb = (max[k] - a[k]) / d[k];
                if ta > tb {
                    std::mem::swap(&mut ta, &mut tb);
                }
                t0 = t0.max(ta);
                t1 = t1.min(tb);
            }
        }
        t0 <= t1
    }

    #[test]
    fn point_robot_basics() {
        let empty = point_world(vec![]);
        assert!(empty.is_free(&cfg(&[0.3, 0.7])).unwrap());
        let blocked = point_world(vec![Obstacle::rect(0.4, 0.4, 0.6, 0.6)]);
        assert!(!blocked.is_free(&cfg(&[0.5, 0.5])).unwrap());
        assert!(blocked.is_free(&cfg(&[0.7, 0.5])).unwrap());
        assert!(!blocked.is_free(&cfg(&[1.2, 0.5])).unwrap());
        assert!(matches!(
            blocked.is_free(&cfg(&[0.5])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn point_robot_in_higher_dimensions() {
        let w = WorldModel::unit(4, vec![Obstacle::aabb(vec![0.4; 4], vec![0.6; 4])], RobotModel::Point).unwrap();
        assert!(!w.is_free(&cfg(&[0.5; 4])).unwrap());
        assert!(w.is_free(&cfg(&[0.5, 0.5, 0.5, 0.7])).unwrap());
        assert!(WorldModel::unit(4, vec![Obstacle::rect(0.0, 0.0, 1.0, 1.0)], RobotModel::Point).is_err());
    }

    #[test]
    fn fk_examples() {
        let chain = PlanarChain {
            link_lengths: vec![1.0, 1.0],
            mobile_base: false,
            base: [0.0, 0.0],
            link_radius: 0.0,
        };
        let p = chain.forward_kinematics(&cfg(&[0.0, 0.0])).unwrap();
        assert_eq!(p, vec![[1.0, 0.0], [2.0, 0.0]]);
        let p = chain.forward_kinematics(&cfg(&[FRAC_PI_2, 0.0])).unwrap();
        assert!((p[0][0]).abs() < 1e-12 && (p[0][1] - 1.0).abs() < 1e-12);
        assert!((p[1][0]).abs() < 1e-12 && (p[1][1] - 2.0).abs() < 1e-12);
        let p = chain.forward_kinematics(&cfg(&[FRAC_PI_4, FRAC_PI_4])).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert!((p[0][0] - h).abs() < 1e-12 && (p[0][1] - h).abs() < 1e-12);
        assert!((p[1][0] - h).abs() < 1e-12 && (p[1][1] - (h + 1.0)).abs() < 1e-12);
        assert!(chain.forward_kinematics(&cfg(&[0.0])).is_err());
    }

    #[test]
    fn chain_link_hits_box() {
        let chain = PlanarChain {
            link_lengths: vec![1.0, 1.0],
            mobile_base: false,
            base: [0.0, 0.0],
            link_radius: 0.0,
        };
        let obstacle = Obstacle::rect(1.4, -0.1, 1.6, 0.1);
        let w = WorldModel::new(vec![[-3.0, 3.0], [-3.0, 3.0]], vec![obstacle], RobotModel::PlanarChain(chain)).unwrap();
        // second link spans (1,0)-(2,0) and crosses the box centred at (1.5, 0)
        assert!(segment_hits_rect([1.0, 0.0], [2.0, 0.0], [1.4, -0.1], [1.6, 0.1]));
        assert!(!w.is_free(&cfg(&[0.0, 0.0])).unwrap());
        assert!(w.is_free(&cfg(&[FRAC_PI_2, 0.0])).unwrap());
    }

    #[test]
    fn link_radius_widens_links() {
        let chain = |r| PlanarChain {
            link_lengths: vec![1.0],
            mobile_base: true,
            base: [0.0, 0.0],
            link_radius: r,
        };
        let obstacle = Obstacle::rect(0.0, 0.55, 1.0, 0.6);
        let bounds = vec![[-2.0, 2.0], [-2.0, 2.0]];
        let thin = WorldModel::new(bounds.clone(), vec![obstacle.clone()], RobotModel::PlanarChain(chain(0.0))).unwrap();
        let fat = WorldModel::new(bounds, vec![obstacle], RobotModel::PlanarChain(chain(0.1))).unwrap();
        let x = cfg(&[0.0, 0.5, 0.0]);
        assert!(thin.is_free(&x).unwrap());
        assert!(!fat.is_free(&x).unwrap());
    }

    #[test]
    fn disc_and_polygon_bodies() {
        let obstacle = Obstacle::ConvexPolygon {
            vertices: vec![[0.4, 0.4], [0.6, 0.4], [0.5, 0.6]],
        };
        let disc = WorldModel::unit(2, vec![obstacle.clone()], RobotModel::Disc { radius: 0.05 }).unwrap();
        assert!(!disc.is_free(&cfg(&[0.5, 0.36])).unwrap());
        assert!(disc.is_free(&cfg(&[0.5, 0.3])).unwrap());
        assert!(!disc.is_free(&cfg(&[0.02, 0.5])).unwrap(), "disc leaves the workspace");

        let body = RobotModel::PolygonBody {
            vertices: vec![[-0.1, -0.01], [0.1, -0.01], [0.1, 0.01], [-0.1, 0.01]],
        };
        let w = WorldModel::unit(2, vec![obstacle], body).unwrap();
        // horizontal bar under the triangle touches it, vertical one fits
        assert!(!w.is_free(&cfg(&[0.5, 0.39, 0.0])).unwrap());
        assert!(w.is_free(&cfg(&[0.5, 0.25, FRAC_PI_2])).unwrap());
        assert!(!w.is_free(&cfg(&[0.5, 0.35, FRAC_PI_2])).unwrap());
    }

    #[test]
    fn invalid_worlds_are_rejected() {
        assert!(WorldModel::unit(2, vec![Obstacle::rect(0.5, 0.5, 0.4, 0.6)], RobotModel::Point).is_err());
        let cw = Obstacle::ConvexPolygon {
            vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]],
        };
        assert!(WorldModel::unit(2, vec![cw], RobotModel::Point).is_err());
        let grid = Obstacle::OccupancyGrid {
            origin: [0.0, 0.0],
            cell_size: 0.0,
            rows: vec!["#".into()],
        };
        assert!(WorldModel::unit(2, vec![grid], RobotModel::Point).is_err());
        assert!(WorldModel::unit(2, vec![], RobotModel::Disc { radius: -1.0 }).is_err());
    }

    #[test]
    fn degenerate_motion_is_one_check() {
        let w = point_world(vec![]);
        let s = SpaceSpec::unit_cube(2).unwrap();
        let mut checks = 0;
        let x = cfg(&[0.2, 0.2]);
        assert!(w.motion_free(&s, &x, &x, 0.01, &mut checks).unwrap());
        assert_eq!(checks, 1);
    }

    fn wall_with_gap() -> WorldModel {
        // full-height wall at x in [0.45, 0.55] with a gap for y in [0.45, 0.55]
        point_world(vec![Obstacle::rect(0.45, 0.0, 0.55, 0.45), Obstacle::rect(0.45, 0.55, 0.55, 1.0)])
    }

    #[test]
    fn motion_against_wall_matches_exact_oracle() {
        let w = wall_with_gap();
        let s = SpaceSpec::unit_cube(2).unwrap();
        let cases: [(P2, P2); 4] = [
            ([0.1, 0.2], [0.9, 0.3]),
            ([0.1, 0.5], [0.9, 0.5]),
            ([0.2, 0.4], [0.8, 0.6]),
            ([0.1, 0.1], [0.9, 0.9]),
        ];
        for (a, b) in cases {
            let exact = !segment_hits_rect(a, b, [0.45, 0.0], [0.55, 0.45])
                && !segment_hits_rect(a, b, [0.45, 0.55], [0.55, 1.0]);
            let mut checks = 0;
            let got = w.motion_free(&s, &cfg(&a), &cfg(&b), 0.025, &mut checks).unwrap();
            assert_eq!(got, exact, "{a:?} -> {b:?}");
        }
    }

    #[test]
    fn grid_matches_polygons_at_cell_centres() {
        let rows: Vec<String> = vec!["..##..".into(), "..##..".into(), "......".into(), "..##..".into()];
        let cell = 0.25 / 1.5;
        let grid = point_world(vec![Obstacle::OccupancyGrid {
            origin: [0.0, 0.0],
            cell_size: cell,
            rows: rows.clone(),
        }]);
        let mut boxes = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, ch) in row.chars().enumerate() {
                if ch == '#' {
                    let (x0, y0) = (c as f64 * cell, r as f64 * cell);
                    boxes.push(Obstacle::ConvexPolygon {
                        vertices: vec![[x0, y0], [x0 + cell, y0], [x0 + cell, y0 + cell], [x0, y0 + cell]],
                    });
                }
            }
        }
        let polys = point_world(boxes);
        for r in 0..rows.len() {
            for c in 0..6 {
                let x = cfg(&[(c as f64 + 0.5) * cell, (r as f64 + 0.5) * cell]);
                assert_eq!(grid.is_free(&x).unwrap(), polys.is_free(&x).unwrap(), "cell {c},{r}");
            }
        }
    }

    #[test]
    fn grid_blocks_disc_near_cells() {
        let w = WorldModel::unit(
            2,
            vec![Obstacle::OccupancyGrid {
                origin: [0.0, 0.0],
                cell_size: 0.1,
                rows: vec!["..........".into(), ".....#....".into()],
            }],
            RobotModel::Disc { radius: 0.05 },
        )
        .unwrap();
        assert!(!w.is_free(&cfg(&[0.55, 0.24])).unwrap());
        assert!(w.is_free(&cfg(&[0.55, 0.3])).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pt() -> impl Strategy<Value = Config> {
            (0.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y)| Config::new(vec![x, y]))
        }

        proptest! {
            #[test]
            fn motion_is_symmetric_and_implies_free_endpoints(a in pt(), b in pt()) {
                let w = wall_with_gap();
                let s = SpaceSpec::unit_cube(2).unwrap();
                let mut c1 = 0;
                let mut c2 = 0;
                let ab = w.motion_free(&s, &a, &b, 0.02, &mut c1).unwrap();
                let ba = w.motion_free(&s, &b, &a, 0.02, &mut c2).unwrap();
                prop_assert_eq!(ab, ba);
                prop_assert_eq!(c1, c2);
                if ab {
                    prop_assert!(w.is_free(&a).unwrap() && w.is_free(&b).unwrap());
                }
            }

            #[test]
            fn refinement_never_frees_a_blocked_motion(a in pt(), b in pt(), eps in 0.005f64..0.3) {
                let w = wall_with_gap();
                let s = SpaceSpec::unit_cube(2).unwrap();
                let mut c = 0;
                let coarse = w.motion_free(&s, &a, &b, eps, &mut c).unwrap();
                let fine = w.motion_free(&s, &a, &b, eps / 2.0, &mut c).unwrap();
                prop_assert!(!(fine && !coarse));
            }
        }
    }
}
