//! Per-group success rates, median costs and counters with 95% intervals.

use std::collections::BTreeMap;
use std::io::Write;

use mrfmt_core::ScheduleKind;
use serde::Serialize;

use crate::sweep::{PlannerKind, TrialRecord};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub planner: PlannerKind,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub layers: usize,
    pub schedule: ScheduleKind,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub success_lo: f64,
    pub success_hi: f64,
    /// Failures count as infinite cost.
    pub median_cost: f64,
    pub cost_lo: f64,
    pub cost_hi: f64,
    pub median_wall_time_ms: f64,
    pub median_edge_evaluations: f64,
    pub median_collision_point_checks: f64,
    pub median_neighbor_queries: f64,
    pub median_layer_switches: f64,
}

/// Wilson score interval for `successes` out of `n`.
pub fn wilson(successes: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Median of an unsorted sample; the mean of the middle pair when even.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 || v[m - 1] == v[m] {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Distribution-free 95% interval on the median from order statistics
/// `x_(l)` and `x_(u)`, `l = ⌊n/2 − z√n/2⌋`, `u = ⌈1 + n/2 + z√n/2⌉`, clamped to `[1, n]`.
pub fn median_interval(values: &[f64]) -> (f64, f64) {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let (lo, hi) = median_ranks(v.len());
    (v[lo - 1], v[hi - 1])
}

/// 1-based ranks of [`median_interval`].
pub fn median_ranks(n: usize) -> (usize, usize) {
    let nf = n as f64;
    let spread = Z95 * nf.sqrt() / 2.0;
    let lo = (nf / 2.0 - spread).floor().max(1.0) as usize;
    let hi = ((1.0 + nf / 2.0 + spread).ceil() as usize).min(n);
    (lo, hi)
}

type Key = (String, PlannerKind, usize, usize, ScheduleKind);

/// One row per (scenario, planner, N, L, schedule), independent of record order.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<Key, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.scenario.clone(), r.planner, r.n, r.layers, r.schedule))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((scenario, planner, n, layers, schedule), rs)| {
            let trials = rs.len();
            let successes = rs.iter().filter(|r| r.solved()).count();
            let (success_lo, success_hi) = wilson(successes, trials);
            let costs: Vec<f64> = rs.iter().map(|r| r.cost_or_inf()).collect();
            let (cost_lo, cost_hi) = median_interval(&costs);
            let med = |f: fn(&TrialRecord) -> f64| median(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
            SummaryRow {
                scenario,
                planner,
                n,
                layers,
                schedule,
                trials,
                successes,
                success_rate: successes as f64 / trials as f64,
                success_lo,
                success_hi,
                median_cost: median(&costs),
                cost_lo,
                cost_hi,
                median_wall_time_ms: med(|r| r.wall_time_ms),
                median_edge_evaluations: med(|r| r.edge_evaluations as f64),
                median_collision_point_checks: med(|r| r.collision_point_checks as f64),
                median_neighbor_queries: med(|r| r.neighbor_queries as f64),
                median_layer_switches: med(|r| r.layer_switches as f64),
            }
        })
        .collect()
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
