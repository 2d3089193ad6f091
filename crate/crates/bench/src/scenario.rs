//! Benchmark scenarios and their JSON file format.
//!
//! A scenario file mirrors [`Scenario`] field for field:
//!
//! ```json
//! {
//!   "name": "corridor2d(0.05)",
//!   "space": { "dims": [ { "lower": 0.0, "upper": 1.0, "topology": "euclidean", "weight": 1.0 }, … ] },
//!   "world": { "bounds": [[0, 1], [0, 1]], "obstacles": [ { "type": "aabb", "min": [..], "max": [..] } ], "robot": { "type": "point" } },
//!   "x_init": [0.1, 0.1],
//!   "x_goal": [0.9, 0.9],
//!   "goal_radius": null,
//!   "resolution": 0.025,
//!   "neighbors": { "type": "r_disk", "multiplier": 1.1 },
//!   "layers": 3,
//!   "notes": "…"
//! }
//! ```

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use mrfmt_core::cspace::Dimension;
use mrfmt_core::world::PlanarChain;
use mrfmt_core::{Config, GoalSpec, NeighborSpec, Obstacle, RobotModel, SpaceSpec, WorldModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("scenario field `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("unknown scenario {0:?}; run `bench scenarios` for the built-in list")]
    Unknown(String),
    #[error("reading scenario file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing scenario file {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
}

fn field(field: &'static str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Field {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub space: SpaceSpec,
    pub world: WorldModel,
    pub x_init: Config,
    pub x_goal: Config,
    /// Goal ball radius around `x_goal`; `None` means the goal sample itself.
    #[serde(default)]
    pub goal_radius: Option<f64>,
    /// Motion discretization step.
    pub resolution: f64,
    #[serde(default)]
    pub neighbors: NeighborSpec,
    /// Default layer count.
    pub layers: usize,
    #[serde(default)]
    pub notes: String,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.name.trim().is_empty() {
            return Err(field("name", "must not be empty"));
        }
        if self.space.dim() != self.world.config_dim() {
            return Err(field(
                "space",
                format!("{} dimensions, but the robot needs {}", self.space.dim(), self.world.config_dim()),
            ));
        }
        for (name, x) in [("x_init", &self.x_init), ("x_goal", &self.x_goal)] {
            if x.dim() != self.space.dim() {
                return Err(field(name, format!("has {} coordinates, expected {}", x.dim(), self.space.dim())));
            }
            if !self.space.contains(x) {
                return Err(field(name, "lies outside the space bounds"));
            }
            if !self.world.is_free(x).map_err(|e| field(name, e.to_string()))? {
                return Err(field(name, "is in collision"));
            }
        }
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(field("resolution", format!("{} must be positive", self.resolution)));
        }
        if let Some(r) = self.goal_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(field("goal_radius", format!("{r} must be positive")));
            }
        }
        self.neighbors.validate().map_err(|e| field("neighbors", e.to_string()))?;
        if self.layers == 0 {
            return Err(field("layers", "must be at least 1"));
        }
        Ok(())
    }

    pub fn goal(&self) -> GoalSpec {
        match self.goal_radius {
            None => GoalSpec::ExactNode,
            Some(radius) => GoalSpec::Ball {
                center: self.x_goal.clone(),
                radius,
            },
        }
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|source| ScenarioError::Parse {
            path: origin.to_string(),
            source,
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios always serialize")
    }

    /// Resolves a built-in name such as `corridor2d(0.05)`, or else a file path.
    pub fn resolve(spec: &str) -> Result<Self, ScenarioError> {
        match by_name(spec) {
            Ok(s) => Ok(s),
            Err(ScenarioError::Unknown(_)) if Path::new(spec).is_file() => Self::load(Path::new(spec)),
            Err(e) => Err(e),
        }
    }
}

/// Unit-box space with unit weights.
fn unit_space(d: usize) -> SpaceSpec {
    SpaceSpec::unit_cube(d).expect("d >= 1")
}

fn config(v: &[f64]) -> Config {
    Config::new(v.to_vec())
}

/// Point robot in the unit square; init and goal on the diagonal.
pub fn empty2d() -> Scenario {
    Scenario {
        name: "empty2d".into(),
        space: unit_space(2),
        world: WorldModel::unit(2, vec![], RobotModel::Point).unwrap(),
        x_init: config(&[0.1, 0.1]),
        x_goal: config(&[0.9, 0.9]),
        goal_radius: None,
        resolution: 0.01,
        neighbors: NeighborSpec::default(),
        layers: 4,
        notes: "Obstacle-free unit square; straight-line optimum 0.8·√2.".into(),
    }
}

/// Full-height wall of thickness 0.1 at `x = 0.5` with one gap of `width`.
pub fn corridor2d(width: f64) -> Scenario {
    let mut s = corridor2d_with(width, 0.1);
    s.name = format!("corridor2d({width})");
    s
}

/// Like [`corridor2d`] with a wall of the given thickness, so the gap is a
/// passage of length `thickness`.
pub fn corridor2d_with(width: f64, thickness: f64) -> Scenario {
    assert!(width > 0.0 && width < 1.0 && thickness > 0.0 && thickness < 0.8);
    let (lo, hi) = (0.5 - width / 2.0, 0.5 + width / 2.0);
    let (x0, x1) = (0.5 - thickness / 2.0, 0.5 + thickness / 2.0);
    Scenario {
        name: format!("corridor2d({width},{thickness})"),
        space: unit_space(2),
        world: WorldModel::unit(
            2,
            vec![Obstacle::rect(x0, 0.0, x1, lo), Obstacle::rect(x0, hi, x1, 1.0)],
            RobotModel::Point,
        )
        .unwrap(),
        x_init: config(&[0.1, 0.1]),
        x_goal: config(&[0.9, 0.9]),
        goal_radius: None,
        resolution: width.min(thickness) / 2.0,
        neighbors: NeighborSpec::default(),
        layers: 3,
        notes: format!("Point robot, wall x in [{x0}, {x1}] with a gap y in [{lo}, {hi}]."),
    }
}

/// Rectangular SE(2) robot starting inside a C-shaped trap whose mouth is a
/// narrow channel; the goal lies behind the trap's closed side.
pub fn bugtrap_se2() -> Scenario {
    let obstacles = vec![
        Obstacle::rect(0.30, 0.30, 0.34, 0.70),
        Obstacle::rect(0.30, 0.66, 0.70, 0.70),
        Obstacle::rect(0.30, 0.30, 0.70, 0.34),
        Obstacle::rect(0.66, 0.30, 0.70, 0.47),
        Obstacle::rect(0.66, 0.53, 0.70, 0.70),
        // lips turning the mouth into a channel
        Obstacle::rect(0.58, 0.42, 0.66, 0.47),
        Obstacle::rect(0.58, 0.53, 0.66, 0.58),
    ];
    let robot = RobotModel::PolygonBody {
        vertices: vec![[-0.04, -0.01], [0.04, -0.01], [0.04, 0.01], [-0.04, 0.01]],
    };
    Scenario {
        name: "bugtrap_se2".into(),
        space: SpaceSpec::se2((0.0, 1.0), (0.0, 1.0), mrfmt_core::cspace::DEFAULT_ROTATION_WEIGHT).unwrap(),
        world: WorldModel::unit(2, obstacles, robot).unwrap(),
        x_init: config(&[0.45, 0.5, 0.0]),
        x_goal: config(&[0.1, 0.5, 0.0]),
        goal_radius: None,
        resolution: 0.01,
        neighbors: NeighborSpec::default(),
        layers: 4,
        notes: "0.08 x 0.02 rectangle; the trap opens through a 0.06-wide, 0.12-long channel.".into(),
    }
}

/// Seed for the box layout of [`random_boxes`].
const BOX_LAYOUT_SEED: u64 = 0x5eed_b0c5;

/// `count` axis-aligned cubes of side `size` placed uniformly in the unit
/// `d`-cube, keeping clear of the init and goal corners.
pub fn random_boxes(d: usize, count: usize, size: f64) -> Scenario {
    assert!(d >= 2 && size > 0.0 && size < 0.5);
    let init = vec![0.1; d];
    let goal = vec![0.9; d];
    let clearance = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(BOX_LAYOUT_SEED ^ ((d as u64) << 32) ^ count as u64);
    let mut obstacles = Vec::with_capacity(count);
    while obstacles.len() < count {
        let min: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..1.0 - size)).collect();
        let max: Vec<f64> = min.iter().map(|m| m + size).collect();
        let near = |p: &[f64]| (0..d).all(|k| p[k] >= min[k] - clearance && p[k] <= max[k] + clearance);
        if near(&init) || near(&goal) {
            continue;
        }
        obstacles.push(Obstacle::aabb(min, max));
    }
    Scenario {
        name: format!("random_boxes({d},{count},{size})"),
        space: unit_space(d),
        world: WorldModel::unit(d, obstacles, RobotModel::Point).unwrap(),
        x_init: Config::new(init),
        x_goal: Config::new(goal),
        goal_radius: None,
        resolution: size / 2.0,
        neighbors: NeighborSpec::default(),
        layers: 4,
        notes: format!("Point robot among {count} boxes of side {size}; fixed layout."),
    }
}

/// `k`-link planar chain with a mobile base. The chain must pass a wall
/// gap and turn around.
pub fn links_planar(k: usize) -> Scenario {
    assert!((1..=12).contains(&k));
    let reach = 0.3;
    let link = reach / k as f64;
    let joint_weight = reach / 2.0;
    let mut dims = vec![Dimension::euclidean(0.0, 1.0), Dimension::euclidean(0.0, 1.0)];
    dims.push(Dimension::angular().with_weight(joint_weight));
    for _ in 1..k {
        dims.push(Dimension::euclidean(-FRAC_PI_2, FRAC_PI_2).with_weight(joint_weight));
    }
    let chain = PlanarChain {
        link_lengths: vec![link; k],
        mobile_base: true,
        base: [0.0, 0.0],
        link_radius: 0.0,
    };
    let obstacles = vec![Obstacle::rect(0.48, 0.0, 0.52, 0.42), Obstacle::rect(0.48, 0.58, 0.52, 1.0)];
    let mut init = vec![0.1, 0.5, 0.0];
    let mut goal = vec![0.9, 0.5, PI];
    init.resize(k + 2, 0.0);
    goal.resize(k + 2, 0.0);
    let wall = 0.04_f64;
    Scenario {
        name: format!("links_planar({k})"),
        space: SpaceSpec::new(dims).unwrap(),
        world: WorldModel::unit(2, obstacles, RobotModel::PlanarChain(chain)).unwrap(),
        x_init: Config::new(init),
        x_goal: Config::new(goal),
        goal_radius: None,
        resolution: wall.min(link) / 2.0,
        neighbors: NeighborSpec::default(),
        layers: 6,
        notes: format!(
            "{k} links of length {link:.4} on a mobile base; joints after the first limited to ±90°, joint weight {joint_weight}. Wall gap y in [0.42, 0.58]."
        ),
    }
}

/// Built-in scenarios at their default parameters.
pub fn builtin_scenarios() -> Vec<Scenario> {
    vec![
        empty2d(),
        corridor2d(0.1),
        corridor2d(0.05),
        corridor2d_with(0.02, 0.3),
        bugtrap_se2(),
        random_boxes(2, 30, 0.1),
        random_boxes(4, 40, 0.25),
        links_planar(6),
    ]
}

/// Parses `name` or `name(arg, …)`.
pub fn by_name(spec: &str) -> Result<Scenario, ScenarioError> {
    let spec = spec.trim();
    let (name, args) = match spec.find('(') {
        Some(open) if spec.ends_with(')') => {
            let inner = &spec[open + 1..spec.len() - 1];
            let args: Result<Vec<f64>, _> = inner.split(',').map(|a| a.trim().parse::<f64>()).collect();
            let args = args.map_err(|_| field("name", format!("bad arguments in {spec:?}")))?;
            (&spec[..open], args)
        }
        _ => (spec, Vec::new()),
    };
    let count = |v: f64| -> Result<usize, ScenarioError> {
        if v >= 1.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(field("name", format!("{v} is not a positive integer in {spec:?}")))
        }
    };
    let fraction = |v: f64, hi: f64| -> Result<f64, ScenarioError> {
        if v > 0.0 && v < hi {
            Ok(v)
        } else {
            Err(field("name", format!("{v} is out of range (0, {hi}) in {spec:?}")))
        }
    };
    match (name, args.as_slice()) {
        ("empty2d", []) => Ok(empty2d()),
        ("corridor2d", []) => Ok(corridor2d(0.05)),
        ("corridor2d", [w]) => Ok(corridor2d(fraction(*w, 1.0)?)),
        ("corridor2d", [w, t]) => Ok(corridor2d_with(fraction(*w, 1.0)?, fraction(*t, 0.8)?)),
        ("bugtrap_se2", []) => Ok(bugtrap_se2()),
        ("random_boxes", []) => Ok(random_boxes(2, 30, 0.1)),
        ("random_boxes", [d, c, s]) => {
            let d = count(*d)?;
            if d < 2 {
                return Err(field("name", "random_boxes needs d >= 2"));
            }
            Ok(random_boxes(d, count(*c)?, fraction(*s, 0.5)?))
        }
        ("links_planar", []) => Ok(links_planar(6)),
        ("links_planar", [k]) => {
            let k = count(*k)?;
            if k > 12 {
                return Err(field("name", "links_planar supports at most 12 links"));
            }
            Ok(links_planar(k))
        }
        _ => Err(ScenarioError::Unknown(spec.to_string())),
    }
}

/// File name used when exporting a scenario.
pub fn file_name(s: &Scenario) -> String {
    let stem: String = s
        .name
        .chars()
        .map(|c| match c {
            '(' | ',' => '_',
            ')' => '\0',
            c => c,
        })
        .filter(|&c| c != '\0')
        .collect();
    format!("{stem}.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for s in builtin_scenarios() {
            s.validate().unwrap_or_else(|e| panic!("{}: {e}", s.name));
        }
    }

    #[test]
    fn names_round_trip() {
        for s in builtin_scenarios() {
            assert_eq!(by_name(&s.name).unwrap(), s, "{}", s.name);
        }
        assert_eq!(by_name("corridor2d(0.05)").unwrap().name, "corridor2d(0.05)");
        assert!(matches!(by_name("maze"), Err(ScenarioError::Unknown(_))));
        assert!(by_name("links_planar(13)").is_err());
        assert!(by_name("corridor2d(x)").is_err());
    }

    #[test]
    fn corridor_has_one_gap_of_the_given_width() {
        let s = corridor2d(0.05);
        let mut checks = 0;
        // sweep a vertical line through the wall and measure free length
        let steps = 100_000;
        let mut free = 0;
        let mut runs = 0;
        let mut prev = false;
        for i in 0..=steps {
            let y = i as f64 / steps as f64;
            let f = s.world.is_free(&config(&[0.5, y])).unwrap();
            if f {
                free += 1;
                if !prev {
                    runs += 1;
                }
            }
            prev = f;
        }
        assert_eq!(runs, 1);
        assert!(((free + 1) as f64 / steps as f64 - 0.05).abs() < 2e-5, "{free}");
        assert!(s.world.motion_free(&s.space, &config(&[0.3, 0.5]), &config(&[0.7, 0.5]), 0.01, &mut checks).unwrap());
    }

    #[test]
    fn bugtrap_start_is_enclosed() {
        let s = bugtrap_se2();
        let mut checks = 0;
        assert!(!s.world.motion_free(&s.space, &s.x_init, &s.x_goal, s.resolution, &mut checks).unwrap());
        // rotated sideways the robot cannot enter the channel
        assert!(!s.world.is_free(&config(&[0.62, 0.5, FRAC_PI_2])).unwrap());
        assert!(s.world.is_free(&config(&[0.62, 0.5, 0.0])).unwrap());
    }

    #[test]
    fn links_dimensions() {
        assert_eq!(links_planar(6).space.dim(), 8);
        assert_eq!(links_planar(12).space.dim(), 14);
        let s = links_planar(6);
        let mut checks = 0;
        assert!(!s.world.motion_free(&s.space, &s.x_init, &s.x_goal, s.resolution, &mut checks).unwrap());
    }

    #[test]
    fn random_boxes_keep_queries_clear() {
        let s = random_boxes(3, 25, 0.2);
        assert_eq!(s.world.obstacles().len(), 25);
        s.validate().unwrap();
        assert_eq!(random_boxes(3, 25, 0.2), s, "layout is fixed");
    }

    #[test]
    fn validation_names_the_field() {
        let mut s = corridor2d(0.1);
        s.resolution = 0.0;
        assert!(matches!(s.validate(), Err(ScenarioError::Field { field: "resolution", .. })));
        let mut s = corridor2d(0.1);
        s.x_goal = config(&[0.5, 0.2]);
        assert!(matches!(s.validate(), Err(ScenarioError::Field { field: "x_goal", .. })));
        let mut s = corridor2d(0.1);
        s.x_init = config(&[0.5, 0.2, 0.1]);
        assert!(matches!(s.validate(), Err(ScenarioError::Field { field: "x_init", .. })));
        let mut s = bugtrap_se2();
        s.space = unit_space(2);
        assert!(matches!(s.validate(), Err(ScenarioError::Field { field: "space", .. })));
    }

    #[test]
    fn json_round_trip() {
        for s in builtin_scenarios() {
            let back = Scenario::from_json(&s.to_json(), "memory").unwrap();
            assert_eq!(back, s);
        }
        let err = Scenario::from_json("{\"name\": \"x\"}", "memory").unwrap_err();
        assert!(err.to_string().contains("missing field"), "{err}");
    }

    #[test]
    fn file_names_are_plain() {
        assert_eq!(file_name(&corridor2d(0.05)), "corridor2d_0.05.json");
        assert_eq!(file_name(&random_boxes(2, 30, 0.1)), "random_boxes_2_30_0.1.json");
    }
}
