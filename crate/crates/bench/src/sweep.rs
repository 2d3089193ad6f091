//! Seeded benchmark sweeps over planners, sample counts and seeds.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Context};
use mrfmt_core::multigraph::sample_free;
use mrfmt_core::{
    path_cost, plan_bmrfmt, plan_fmt, plan_mrfmt, validate_path, Config, Heuristic, LayerSchedule, LayeredSampleSet,
    PlanRequest, PlanResult, ScheduleKind, Termination,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    Fmt,
    Mrfmt,
    Bmrfmt,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 3] = [PlannerKind::Fmt, PlannerKind::Mrfmt, PlannerKind::Bmrfmt];

    pub fn as_str(self) -> &'static str {
        match self {
            PlannerKind::Fmt => "fmt",
            PlannerKind::Mrfmt => "mrfmt",
            PlannerKind::Bmrfmt => "bmrfmt",
        }
    }
}

impl std::str::FromStr for PlannerKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fmt" | "fmt*" => Ok(PlannerKind::Fmt),
            "mrfmt" | "mrfmt*" => Ok(PlannerKind::Mrfmt),
            "bmrfmt" | "bmrfmt*" => Ok(PlannerKind::Bmrfmt),
            other => bail!("unknown planner {other:?} (expected fmt, mrfmt or bmrfmt)"),
        }
    }
}

impl std::fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub scenario: Scenario,
    pub planners: Vec<PlannerKind>,
    pub samples: Vec<usize>,
    /// Layer count of the multi-resolution planners; FMT* always uses one.
    pub layers: usize,
    pub schedule: ScheduleKind,
    pub seeds: Vec<u64>,
    pub heuristic: bool,
    pub timeout_ms: Option<u64>,
}

impl SweepConfig {
    pub fn new(scenario: Scenario) -> Self {
        let layers = scenario.layers;
        SweepConfig {
            scenario,
            planners: PlannerKind::ALL.to_vec(),
            samples: vec![1000],
            layers,
            schedule: ScheduleKind::Linear,
            seeds: (0..10).collect(),
            heuristic: true,
            timeout_ms: None,
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.scenario.validate()?;
        if self.planners.is_empty() {
            bail!("sweep needs at least one planner");
        }
        if self.samples.is_empty() || self.samples.contains(&0) {
            bail!("sample counts must be a nonempty list of positive integers");
        }
        if self.seeds.is_empty() {
            bail!("sweep needs at least one seed");
        }
        if self.timeout_ms == Some(0) {
            bail!("timeout must be positive");
        }
        if self.planners.iter().any(|&p| p != PlannerKind::Fmt) {
            for &n in &self.samples {
                LayerSchedule::of_kind(self.schedule, n, self.layers)
                    .with_context(|| format!("layer schedule for N = {n}"))?;
            }
        }
        Ok(())
    }

    fn termination(&self) -> Termination {
        Termination {
            first_solution: true,
            time_budget_ms: self.timeout_ms,
        }
    }
}

/// One CSV row. Fields after `layer_switches` are audit data and stay out of the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub scenario: String,
    pub planner: PlannerKind,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub layers: usize,
    pub schedule: ScheduleKind,
    pub seed: u64,
    pub status: String,
    pub cost: Option<f64>,
    pub wall_time_ms: f64,
    pub build_time_ms: f64,
    pub edge_evaluations: u64,
    pub collision_point_checks: u64,
    pub neighbor_queries: u64,
    pub layer_switches: u64,
    #[serde(skip)]
    pub audit: TrialAudit,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialAudit {
    pub expansions: u64,
    pub max_node_expansions: u32,
    pub counterpart_connections: u64,
    pub metric_connections: u64,
    pub failed_edges: u64,
    /// Hash of the regular sample array.
    pub samples_hash: u64,
    /// End-to-end motion re-check of a solved path.
    pub path_valid: Option<bool>,
    /// |recomputed path cost − reported cost| of a solved path.
    pub cost_error: Option<f64>,
}

impl TrialRecord {
    pub fn solved(&self) -> bool {
        self.status == "Solved"
    }

    /// Cost with failures as infinity.
    pub fn cost_or_inf(&self) -> f64 {
        self.cost.unwrap_or(f64::INFINITY)
    }
}

pub const CSV_COLUMNS: [&str; 14] = [
    "scenario",
    "planner",
    "N",
    "L",
    "schedule",
    "seed",
    "status",
    "cost",
    "wall_time_ms",
    "build_time_ms",
    "edge_evaluations",
    "collision_point_checks",
    "neighbor_queries",
    "layer_switches",
];

/// Columns that vary between identical reruns.
pub const TIMING_COLUMNS: [&str; 2] = ["wall_time_ms", "build_time_ms"];

/// A finished trial with everything needed to render it.
pub struct Trial {
    pub record: TrialRecord,
    pub set: LayeredSampleSet,
    pub result: PlanResult,
}

/// RNG for the samples of one `(seed, N)` pair, shared by every planner.
pub fn trial_rng(seed: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    rng
}

pub fn samples_hash(samples: &[Config]) -> u64 {
    let mut h = DefaultHasher::new();
    for c in samples {
        for x in c.coords() {
            x.to_bits().hash(&mut h);
        }
    }
    h.finish()
}

/// Free samples for `(seed, N)` and the time spent drawing them.
pub fn draw_samples(scenario: &Scenario, seed: u64, n: usize) -> anyhow::Result<(Vec<Config>, f64)> {
    let start = Instant::now();
    let mut rng = trial_rng(seed, n);
    let batch = sample_free(&scenario.world, &scenario.space, n, &mut rng)
        .with_context(|| format!("sampling {n} configurations for seed {seed}"))?;
    Ok((batch.configs, start.elapsed().as_secs_f64() * 1e3))
}

/// Runs one planner on a prepared sample array.
pub fn run_trial(
    config: &SweepConfig,
    planner: PlannerKind,
    n: usize,
    seed: u64,
    samples: &[Config],
    sampling_ms: f64,
) -> anyhow::Result<Trial> {
    let s = &config.scenario;
    let schedule = match planner {
        PlannerKind::Fmt => LayerSchedule::single(n)?,
        _ => LayerSchedule::of_kind(config.schedule, n, config.layers)?,
    };
    let build_start = Instant::now();
    let set = LayeredSampleSet::from_samples(&s.space, samples.to_vec(), schedule, s.neighbors, &s.x_init, &s.x_goal)?;
    let build_time_ms = sampling_ms + build_start.elapsed().as_secs_f64() * 1e3;

    let heuristic = if config.heuristic { Heuristic::Metric } else { Heuristic::Off };
    let request = PlanRequest::new(&s.world, &s.space, s.x_init.clone(), s.resolution)
        .with_goal(s.goal())
        .with_heuristic(heuristic)
        .with_termination(config.termination());
    let result = match planner {
        PlannerKind::Fmt => plan_fmt(&request, &set)?,
        PlannerKind::Mrfmt => plan_mrfmt(&request, &set)?,
        PlannerKind::Bmrfmt => plan_bmrfmt(&request, &set)?,
    };

    let solved = result.solved();
    let (path_valid, cost_error) = if solved {
        let valid = validate_path(&s.world, &s.space, &result.path, s.resolution)?;
        (Some(valid), Some((path_cost(&s.space, &result.path) - result.cost).abs()))
    } else {
        (None, None)
    };
    let st = &result.stats;
    let record = TrialRecord {
        scenario: s.name.clone(),
        planner,
        n,
        layers: set.layers(),
        schedule: set.schedule().kind(),
        seed,
        status: result.status.as_str().to_string(),
        cost: solved.then_some(result.cost),
        wall_time_ms: st.wall_time_ms,
        build_time_ms,
        edge_evaluations: st.edge_evaluations,
        collision_point_checks: st.collision_point_checks,
        neighbor_queries: st.neighbor_queries,
        layer_switches: st.layer_switches,
        audit: TrialAudit {
            expansions: st.expansions,
            max_node_expansions: st.max_node_expansions,
            counterpart_connections: st.counterpart_connections,
            metric_connections: st.metric_connections,
            failed_edges: st.failed_edges,
            samples_hash: samples_hash(samples),
            path_valid,
            cost_error,
        },
    };
    Ok(Trial { record, set, result })
}

pub fn run_sweep(config: &SweepConfig) -> anyhow::Result<Vec<TrialRecord>> {
    run_sweep_with(config, |_| {})
}

/// Runs the sweep, handing every finished trial to `on_trial`. Records come
/// back sorted by planner, N and seed.
pub fn run_sweep_with(config: &SweepConfig, mut on_trial: impl FnMut(&Trial)) -> anyhow::Result<Vec<TrialRecord>> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.planners.len() * config.samples.len() * config.seeds.len());
    for &n in &config.samples {
        for &seed in &config.seeds {
            let (samples, sampling_ms) = draw_samples(&config.scenario, seed, n)?;
            for &planner in &config.planners {
                let trial = run_trial(config, planner, n, seed, &samples, sampling_ms)
                    .with_context(|| format!("{planner} N={n} seed={seed}"))?;
                on_trial(&trial);
                records.push(trial.record);
            }
        }
    }
    records.sort_by_key(|r| (r.planner, r.n, r.seed));
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> anyhow::Result<Vec<TrialRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        bail!("unexpected CSV header {header:?}");
    }
    r.deserialize().map(|row| Ok(row?)).collect()
}

/// CSV text with the timing columns blanked, for determinism comparisons.
pub fn strip_timing(csv_text: &str) -> anyhow::Result<String> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header = r.headers()?.clone();
    let skip: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| TIMING_COLUMNS.contains(h))
        .map(|(i, _)| i)
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in r.records() {
        let row = row?;
        w.write_record(row.iter().enumerate().map(|(i, v)| if skip.contains(&i) { "" } else { v }))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
