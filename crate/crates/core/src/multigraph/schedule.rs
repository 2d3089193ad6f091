use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `n_l = ⌊l·N/L⌋`
    Linear,
    /// `n_l = ⌊N / 2^(L−l)⌋`
    Exponential,
    Explicit,
}

impl ScheduleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleKind::Linear => "linear",
            ScheduleKind::Exponential => "exponential",
            ScheduleKind::Explicit => "explicit",
        }
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ScheduleKind::Linear),
            "exponential" => Ok(ScheduleKind::Exponential),
            "explicit" => Ok(ScheduleKind::Explicit),
            other => Err(Error::invalid("schedule", format!("unknown schedule {other:?}"))),
        }
    }
}

/// Layer sizes `n_1 < n_2 < … < n_L = N` of the nested sample sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSchedule {
    kind: ScheduleKind,
    thresholds: Vec<usize>,
}

impl LayerSchedule {
    pub fn linear(n: usize, layers: usize) -> Result<Self> {
        check_counts(n, layers)?;
        let t = (1..=layers).map(|l| l * n / layers).collect();
        Self::build(ScheduleKind::Linear, t)
    }

    pub fn exponential(n: usize, layers: usize) -> Result<Self> {
        check_counts(n, layers)?;
        if layers > 63 {
            return Err(Error::invalid("layers", "too many layers for an exponential schedule"));
        }
        let t = (1..=layers).map(|l| n >> (layers - l)).collect();
        Self::build(ScheduleKind::Exponential, t)
    }

    pub fn explicit(thresholds: Vec<usize>) -> Result<Self> {
        Self::build(ScheduleKind::Explicit, thresholds)
    }

    pub fn of_kind(kind: ScheduleKind, n: usize, layers: usize) -> Result<Self> {
        match kind {
            ScheduleKind::Linear => Self::linear(n, layers),
            ScheduleKind::Exponential => Self::exponential(n, layers),
            ScheduleKind::Explicit => Err(Error::invalid("schedule", "explicit schedules need thresholds")),
        }
    }

    /// One layer holding all `n` samples.
    pub fn single(n: usize) -> Result<Self> {
        Self::linear(n, 1)
    }

    fn build(kind: ScheduleKind, thresholds: Vec<usize>) -> Result<Self> {
        let layers = thresholds.len();
        let n = *thresholds
            .last()
            .ok_or_else(|| Error::invalid("schedule", "at least one layer is required"))?;
        check_counts(n, layers)?;
        if thresholds[0] == 0 {
            return Err(Error::invalid("schedule", format!("layer 1 is empty: {thresholds:?}")));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "schedule",
                format!("layer sizes must strictly increase: {thresholds:?}"),
            ));
        }
        Ok(LayerSchedule { kind, thresholds })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn layers(&self) -> usize {
        self.thresholds.len()
    }

    pub fn total(&self) -> usize {
        *self.thresholds.last().unwrap()
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }

    /// Number of regular samples in layer `l` (1-based).
    pub fn size(&self, layer: usize) -> usize {
        self.thresholds[layer - 1]
    }
}

fn check_counts(n: usize, layers: usize) -> Result<()> {
    if layers == 0 {
        return Err(Error::invalid("layers", "at least one layer is required"));
    }
    if layers * 4 > n {
        return Err(Error::invalid(
            "layers",
            format!("L = {layers} is too large for N = {n} (need L <= N/4)"),
        ));
    }
    Ok(())
}
