//! Configuration spaces: bounds, topology, weighted metric, interpolation and
//! uniform sampling.
//!
//! Every dimension is either Euclidean (a closed interval) or Angular (the
//! circle `[0, 2π)`). The metric is a weighted L2 norm over per-dimension
//! differences, where angular differences take the shorter way around.

use std::f64::consts::{PI, TAU};
use std::ops::Index;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Euclidean,
    Angular,
}

/// One coordinate axis of a configuration space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    pub lower: f64,
    pub upper: f64,
    pub topology: Topology,
    pub weight: f64,
}

impl Dimension {
    pub fn euclidean(lower: f64, upper: f64) -> Self {
        Dimension {
            lower,
            upper,
            topology: Topology::Euclidean,
            weight: 1.0,
        }
    }

    pub fn angular() -> Self {
        Dimension {
            lower: 0.0,
            upper: TAU,
            topology: Topology::Angular,
            weight: 1.0,
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    fn extent(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Default weight of the rotational coordinate in SE(2)-style spaces.
pub const DEFAULT_ROTATION_WEIGHT: f64 = 0.5;

/// A validated d-dimensional configuration space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct SpaceSpec {
    dims: Vec<Dimension>,
}

#[derive(Deserialize)]
struct RawSpace {
    dims: Vec<Dimension>,
}

impl TryFrom<RawSpace> for SpaceSpec {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        SpaceSpec::new(raw.dims)
    }
}

impl SpaceSpec {
    pub fn new(dims: Vec<Dimension>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::invalid(
                "space.dims",
                format!("need at least 2 dimensions, got {}", dims.len()),
            ));
        }
        for (i, dim) in dims.iter().enumerate() {
            if !(dim.weight > 0.0 && dim.weight.is_finite()) {
                return Err(Error::invalid(
                    "space.dims",
                    format!("dimension {i}: weight must be positive, got {}", dim.weight),
                ));
            }
            match dim.topology {
                Topology::Euclidean => {
                    if !(dim.lower < dim.upper && dim.lower.is_finite() && dim.upper.is_finite()) {
                        return Err(Error::invalid(
                            "space.dims",
                            format!("dimension {i}: need lower < upper, got [{}, {}]", dim.lower, dim.upper),
                        ));
                    }
                }
                Topology::Angular => {
                    if dim.lower != 0.0 || dim.upper != TAU {
                        return Err(Error::invalid(
                            "space.dims",
                            format!("dimension {i}: angular dimensions span exactly [0, 2pi)"),
                        ));
                    }
                }
            }
        }
        Ok(SpaceSpec { dims })
    }

    /// Unit hypercube `[0,1]^d` with unit weights.
    pub fn unit_cube(d: usize) -> Result<Self> {
        Self::new(vec![Dimension::euclidean(0.0, 1.0); d])
    }

    pub fn euclidean(bounds: &[(f64, f64)]) -> Result<Self> {
        Self::new(bounds.iter().map(|&(lo, hi)| Dimension::euclidean(lo, hi)).collect())
    }

    /// Planar rigid-body space `(x, y, θ)`.
    pub fn se2(x: (f64, f64), y: (f64, f64), rotation_weight: f64) -> Result<Self> {
        Self::new(vec![
            Dimension::euclidean(x.0, x.1),
            Dimension::euclidean(y.0, y.1),
            Dimension::angular().with_weight(rotation_weight),
        ])
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.dims
    }

    /// Volume of the space under the weighted metric.
    pub fn measure(&self) -> f64 {
        self.dims.iter().map(|d| d.weight * d.extent()).product()
    }

    /// Validates coordinates against the space, normalizing angular ones into `[0, 2π)`.
    pub fn config(&self, coords: Vec<f64>) -> Result<Config> {
        let mut config = Config(coords);
        self.normalize(&mut config)?;
        Ok(config)
    }

    /// Checks an existing configuration in place; angular coordinates are wrapped.
    pub fn normalize(&self, config: &mut Config) -> Result<()> {
        self.check_dim(config)?;
        for (i, (c, dim)) in config.0.iter_mut().zip(&self.dims).enumerate() {
            if !c.is_finite() {
                return Err(Error::contract(format!("coordinate {i} is not finite")));
            }
            match dim.topology {
                Topology::Angular => *c = wrap_angle(*c),
                Topology::Euclidean => {
                    if *c < dim.lower || *c > dim.upper {
                        return Err(Error::contract(format!(
                            "coordinate {i} = {c} outside [{}, {}]",
                            dim.lower, dim.upper
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, config: &Config) -> bool {
        config.dim() == self.dim()
            && config.0.iter().zip(&self.dims).all(|(&c, dim)| match dim.topology {
                Topology::Angular => (0.0..TAU).contains(&c),
                Topology::Euclidean => c >= dim.lower && c <= dim.upper,
            })
    }

    fn check_dim(&self, config: &Config) -> Result<()> {
        if config.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: config.dim(),
            });
        }
        Ok(())
    }

    pub fn distance(&self, a: &Config, b: &Config) -> Result<f64> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.metric(&a.0, &b.0))
    }

    /// Weighted distance on raw coordinate slices. Callers guarantee matching lengths.
    #[inline]
    pub fn metric(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert!(a.len() == self.dims.len() && b.len() == self.dims.len());
        let mut sum = 0.0;
        for ((&x, &y), dim) in a.iter().zip(b).zip(&self.dims) {
            let delta = match dim.topology {
                Topology::Euclidean => y - x,
                Topology::Angular => angle_diff(x, y),
            };
            let w = dim.weight * delta;
            sum += w * w;
        }
        sum.sqrt()
    }

    pub fn interpolate(&self, a: &Config, b: &Config, t: f64) -> Result<Config> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::contract(format!("interpolation parameter {t} outside [0, 1]")));
        }
        let mut out = vec![0.0; self.dim()];
        self.interpolate_into(&a.0, &b.0, t, &mut out);
        Ok(Config(out))
    }

    /// Writes `interpolate(a, b, t)` into `out` without validation.
    #[inline]
    pub fn interpolate_into(&self, a: &[f64], b: &[f64], t: f64, out: &mut [f64]) {
        if t == 0.0 {
            out.copy_from_slice(a);
            return;
        }
        if t == 1.0 {
            out.copy_from_slice(b);
            return;
        }
        for (((o, &x), &y), dim) in out.iter_mut().zip(a).zip(b).zip(&self.dims) {
            *o = match dim.topology {
                Topology::Euclidean => x + t * (y - x),
                Topology::Angular => wrap_angle(x + t * angle_diff(x, y)),
            };
        }
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Config {
        Config(
            self.dims
                .iter()
                .map(|dim| match dim.topology {
                    Topology::Euclidean => rng.gen_range(dim.lower..dim.upper),
                    Topology::Angular => rng.gen_range(0.0..TAU),
                })
                .collect(),
        )
    }
}

/// Signed shortest angular difference `b - a`, in `[-π, π]`.
#[inline]
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Wraps an angle into `[0, 2π)`.
#[inline]
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly TAU
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// A point in a configuration space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Config(Vec<f64>);

impl Config {
    /// Wraps raw coordinates without validation; see [`SpaceSpec::config`].
    pub fn new(coords: Vec<f64>) -> Self {
        Config(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Index<usize> for Config {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for Config {
    fn from(v: Vec<f64>) -> Self {
        Config(v)
    }
}
