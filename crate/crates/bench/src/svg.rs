//! Deterministic SVG rendering of planar scenes, samples, trees and paths.
//!
//! Palette:
//!
//! | element            | class        | colour    |
//! |--------------------|--------------|-----------|
//! | unvisited sample   | `unvisited`  | `#000000` |
//! | open sample        | `open`       | `#2ca02c` |
//! | closed sample      | `closed`     | `#e8c31a` |
//! | tree edge          | `tree-edge`  | `#1f77b4` |
//! | solution path      | `path`       | `#d62728` |
//! | obstacle           | `obstacle`   | `#808080` |
//!
//! Samples are drawn layer by layer from the sparsest up, with larger dots
//! for sparser layers. Counterpart edges are not drawn.

use std::fmt::Write;

use mrfmt_core::planners::NodeState;
use mrfmt_core::world::geom::P2;
use mrfmt_core::{Config, LayeredSampleSet, NodeId, Obstacle, RobotModel, SearchTree};

use crate::scenario::Scenario;

pub const UNVISITED: &str = "#000000";
pub const OPEN: &str = "#2ca02c";
pub const CLOSED: &str = "#e8c31a";
pub const TREE_EDGE: &str = "#1f77b4";
pub const PATH: &str = "#d62728";
pub const OBSTACLE: &str = "#808080";

const CANVAS: f64 = 600.0;
const MARGIN: f64 = 10.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RenderError {
    #[error("rendering unsupported for this space: {0}")]
    Unsupported(String),
}

/// Maps workspace coordinates to pixels, with `y` pointing up.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    origin: P2,
    top: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Projection {
    pub fn new(bounds: &[[f64; 2]]) -> Self {
        let (w, h) = (bounds[0][1] - bounds[0][0], bounds[1][1] - bounds[1][0]);
        let scale = CANVAS / w.max(h);
        Projection {
            origin: [bounds[0][0], bounds[1][0]],
            top: bounds[1][1],
            scale,
            width: w * scale + 2.0 * MARGIN,
            height: h * scale + 2.0 * MARGIN,
        }
    }

    pub fn to_px(&self, p: P2) -> P2 {
        [MARGIN + (p[0] - self.origin[0]) * self.scale, MARGIN + (self.top - p[1]) * self.scale]
    }

    pub fn to_world(&self, px: P2) -> P2 {
        [(px[0] - MARGIN) / self.scale + self.origin[0], self.top - (px[1] - MARGIN) / self.scale]
    }
}

/// Planar anchor of a configuration: the position for point-like robots and
/// mobile chains, the end effector for fixed-base chains.
fn anchor(robot: &RobotModel, x: &Config) -> P2 {
    match robot {
        RobotModel::PlanarChain(chain) if !chain.mobile_base => {
            *chain.forward_kinematics(x).expect("config matches the chain").last().unwrap()
        }
        _ => [x[0], x[1]],
    }
}

/// Robot outline at `x`, if it has extent.
fn pose(robot: &RobotModel, x: &Config) -> Option<Vec<P2>> {
    match robot {
        RobotModel::Point | RobotModel::Disc { .. } => None,
        RobotModel::PolygonBody { vertices } => {
            let (s, c) = x[2].sin_cos();
            let mut pts: Vec<P2> = vertices.iter().map(|v| [x[0] + c * v[0] - s * v[1], x[1] + s * v[0] + c * v[1]]).collect();
            pts.push(pts[0]);
            Some(pts)
        }
        RobotModel::PlanarChain(chain) => {
            let base = if chain.mobile_base { [x[0], x[1]] } else { chain.base };
            let mut pts = vec![base];
            pts.extend(chain.forward_kinematics(x).expect("config matches the chain"));
            Some(pts)
        }
    }
}

fn points(proj: &Projection, pts: &[P2]) -> String {
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        let q = proj.to_px(*p);
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{:.3},{:.3}", q[0], q[1]).unwrap();
    }
    s
}

fn state_of(trees: &[SearchTree], v: NodeId) -> &'static str {
    let states: Vec<NodeState> = trees.iter().map(|t| t.state(v)).collect();
    if states.contains(&NodeState::Closed) {
        "closed"
    } else if states.iter().any(|s| matches!(s, NodeState::Open | NodeState::Pending)) {
        "open"
    } else {
        "unvisited"
    }
}

/// Renders the scene. `set` and `trees` are optional; `path` may be empty.
pub fn render_svg(
    scenario: &Scenario,
    set: Option<&LayeredSampleSet>,
    trees: &[SearchTree],
    path: &[Config],
) -> Result<String, RenderError> {
    let world = &scenario.world;
    if world.bounds().len() != 2 {
        return Err(RenderError::Unsupported(format!("{}-dimensional workspace", world.bounds().len())));
    }
    let robot = world.robot();
    let proj = Projection::new(world.bounds());
    let mut out = String::new();
    let w = &mut out;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        proj.width, proj.height, proj.width, proj.height
    )
    .unwrap();
    writeln!(
        w,
        "<style>.unvisited{{fill:{UNVISITED}}} .open{{fill:{OPEN}}} .closed{{fill:{CLOSED}}} .tree-edge{{stroke:{TREE_EDGE};stroke-width:0.6}} .path{{stroke:{PATH};stroke-width:2;fill:none}} .pose{{stroke:{PATH};stroke-width:1;fill:none;opacity:0.6}} .obstacle{{fill:{OBSTACLE}}} .bounds{{fill:#ffffff;stroke:#000000}}</style>"
    )
    .unwrap();
    let b = world.bounds();
    let lo = proj.to_px([b[0][0], b[1][1]]);
    let hi = proj.to_px([b[0][1], b[1][0]]);
    writeln!(
        w,
        r#"<rect class="bounds" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
        lo[0],
        lo[1],
        hi[0] - lo[0],
        hi[1] - lo[1]
    )
    .unwrap();

    writeln!(w, r#"<g id="obstacles">"#).unwrap();
    for obstacle in world.obstacles() {
        match obstacle {
            Obstacle::Aabb { min, max } => {
                let a = proj.to_px([min[0], max[1]]);
                let c = proj.to_px([max[0], min[1]]);
                writeln!(
                    w,
                    r#"<rect class="obstacle" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                    a[0],
                    a[1],
                    c[0] - a[0],
                    c[1] - a[1]
                )
                .unwrap();
            }
            Obstacle::ConvexPolygon { vertices } => {
                writeln!(w, r#"<polygon class="obstacle" points="{}"/>"#, points(&proj, vertices)).unwrap();
            }
            Obstacle::OccupancyGrid { origin, cell_size, rows } => {
                for (r, row) in rows.iter().enumerate() {
                    for (c, ch) in row.chars().enumerate() {
                        if ch != '#' {
                            continue;
                        }
                        let x0 = origin[0] + c as f64 * cell_size;
                        let y0 = origin[1] + r as f64 * cell_size;
                        let a = proj.to_px([x0, y0 + cell_size]);
                        let side = cell_size * proj.scale;
                        writeln!(
                            w,
                            r#"<rect class="obstacle" x="{:.3}" y="{:.3}" width="{side:.3}" height="{side:.3}"/>"#,
                            a[0], a[1]
                        )
                        .unwrap();
                    }
                }
            }
        }
    }
    writeln!(w, "</g>").unwrap();

    if let Some(set) = set {
        let layers = set.layers();
        writeln!(w, r#"<g id="samples">"#).unwrap();
        for layer in 1..=layers {
            let radius = 1.2 + 0.8 * (layers - layer) as f64;
            writeln!(w, r#"<g class="layer" data-layer="{layer}">"#).unwrap();
            for index in (0..set.n_configs() as u32).filter(|&i| set.in_layer(i, layer)) {
                let p = proj.to_px(anchor(robot, set.config(index)));
                let class = state_of(trees, NodeId::new(index, layer as u16));
                writeln!(w, r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="{radius:.1}"/>"#, p[0], p[1]).unwrap();
            }
            writeln!(w, "</g>").unwrap();
        }
        writeln!(w, "</g>").unwrap();

        writeln!(w, r#"<g id="tree">"#).unwrap();
        for tree in trees {
            for (child, parent) in tree.edges() {
                if child.index == parent.index {
                    continue;
                }
                let a = proj.to_px(anchor(robot, set.config(parent.index)));
                let c = proj.to_px(anchor(robot, set.config(child.index)));
                writeln!(
                    w,
                    r#"<line class="tree-edge" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                    a[0], a[1], c[0], c[1]
                )
                .unwrap();
            }
        }
        writeln!(w, "</g>").unwrap();
    }

    if !path.is_empty() {
        let anchors: Vec<P2> = path.iter().map(|x| anchor(robot, x)).collect();
        writeln!(w, r#"<polyline id="path" class="path" points="{}"/>"#, points(&proj, &anchors)).unwrap();
        let poses: Vec<Vec<P2>> = path.iter().filter_map(|x| pose(robot, x)).collect();
        if !poses.is_empty() {
            writeln!(w, r#"<g id="poses">"#).unwrap();
            for p in poses {
                writeln!(w, r#"<polyline class="pose" points="{}"/>"#, points(&proj, &p)).unwrap();
            }
            writeln!(w, "</g>").unwrap();
        }
    }
    writeln!(w, "</svg>").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{bugtrap_se2, corridor2d, empty2d, links_planar, random_boxes};

    #[test]
    fn empty_scene_has_only_bounds_and_obstacles() {
        let svg = render_svg(&corridor2d(0.1), None, &[], &[]).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("class=\"obstacle\"").count(), 2);
        assert!(!svg.contains("<circle") && !svg.contains("<line") && !svg.contains("polyline"));
        let bare = render_svg(&empty2d(), None, &[], &[]).unwrap();
        assert_eq!(bare.matches("class=\"obstacle\"").count(), 0);
    }

    #[test]
    fn palette_is_exact() {
        let svg = render_svg(&empty2d(), None, &[], &[]).unwrap();
        for (class, colour) in [
            ("unvisited", UNVISITED),
            ("open", OPEN),
            ("closed", CLOSED),
            ("obstacle", OBSTACLE),
        ] {
            assert!(svg.contains(&format!(".{class}{{fill:{colour}}}")), "{class}");
        }
        assert!(svg.contains(&format!(".tree-edge{{stroke:{TREE_EDGE};")));
        assert!(svg.contains(&format!(".path{{stroke:{PATH};")));
        assert_eq!(
            [UNVISITED, OPEN, CLOSED, TREE_EDGE, PATH, OBSTACLE],
            ["#000000", "#2ca02c", "#e8c31a", "#1f77b4", "#d62728", "#808080"]
        );
    }

    #[test]
    fn higher_dimensional_worlds_are_unsupported() {
        let err = render_svg(&random_boxes(3, 5, 0.1), None, &[], &[]).unwrap_err();
        assert!(err.to_string().starts_with("rendering unsupported for this space"));
    }

    #[test]
    fn poses_follow_the_robot() {
        let s = bugtrap_se2();
        let svg = render_svg(&s, None, &[], &[s.x_init.clone(), s.x_goal.clone()]).unwrap();
        assert_eq!(svg.matches("class=\"pose\"").count(), 2);
        let s = links_planar(3);
        let svg = render_svg(&s, None, &[], std::slice::from_ref(&s.x_init)).unwrap();
        let pose = svg.lines().find(|l| l.contains("class=\"pose\"")).unwrap();
        assert_eq!(pose.matches(',').count(), 4, "base plus three joints");
    }

    #[test]
    fn projection_round_trips() {
        let proj = Projection::new(&[[0.0, 2.0], [-1.0, 1.0]]);
        let p = [0.3, -0.7];
        let back = proj.to_world(proj.to_px(p));
        assert!((back[0] - p[0]).abs() < 1e-12 && (back[1] - p[1]).abs() < 1e-12);
        assert_eq!(proj.to_px([0.0, 1.0]), [MARGIN, MARGIN]);
    }
}
