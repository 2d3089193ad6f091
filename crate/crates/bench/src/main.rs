use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use mrfmt_bench::scenario::{self, Scenario};
use mrfmt_bench::summary::{summarize, write_summary_csv};
use mrfmt_bench::svg::render_svg;
use mrfmt_bench::sweep::{self, PlannerKind, SweepConfig};
use mrfmt_core::ScheduleKind;

#[derive(Parser)]
#[command(name = "bench", about = "Benchmark sweeps for the FMT*, MRFMT* and BMRFMT* planners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Schedule {
    Linear,
    Exponential,
}

impl From<Schedule> for ScheduleKind {
    fn from(s: Schedule) -> Self {
        match s {
            Schedule::Linear => ScheduleKind::Linear,
            Schedule::Exponential => ScheduleKind::Exponential,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded sweep and write one CSV row per trial.
    Run {
        /// Built-in scenario name, e.g. `corridor2d(0.05)`, or a scenario JSON file.
        #[arg(long)]
        scenario: String,
        #[arg(long, value_delimiter = ',', default_value = "fmt,mrfmt,bmrfmt")]
        planners: Vec<PlannerKind>,
        #[arg(long, value_delimiter = ',', default_value = "1000")]
        samples: Vec<usize>,
        /// Defaults to the scenario's layer count.
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long, value_enum, default_value = "linear")]
        schedule: Schedule,
        /// Number of seeds; seeds run from `--seed-start`.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed_start: u64,
        #[arg(long, value_enum, default_value = "on")]
        heuristic: Toggle,
        #[arg(long)]
        timeout_ms: Option<u64>,
        /// CSV output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-group summary CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Render the first seed of every (planner, N) pair here.
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
    /// List built-in scenarios.
    Scenarios {
        /// Write every built-in as JSON into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Replay one trial and write it as SVG.
    Render {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value = "mrfmt")]
        planner: PlannerKind,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long, value_enum, default_value = "linear")]
        schedule: Schedule,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "on")]
        heuristic: Toggle,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run {
            scenario,
            planners,
            samples,
            layers,
            schedule,
            seeds,
            seed_start,
            heuristic,
            timeout_ms,
            out,
            summary,
            svg_dir,
        } => {
            let scenario = Scenario::resolve(&scenario)?;
            let config = SweepConfig {
                layers: layers.unwrap_or(scenario.layers),
                planners,
                samples,
                schedule: schedule.into(),
                seeds: (seed_start..seed_start + seeds).collect(),
                heuristic: matches!(heuristic, Toggle::On),
                timeout_ms,
                scenario,
            };
            if let Some(dir) = &svg_dir {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            let first_seed = config.seeds[0];
            let mut render_error = None;
            let records = sweep::run_sweep_with(&config, |trial| {
                let (Some(dir), true) = (&svg_dir, trial.record.seed == first_seed) else { return };
                let r = &trial.record;
                match render_svg(&config.scenario, Some(&trial.set), &trial.result.trees, &trial.result.path) {
                    Ok(svg) => {
                        let stem = scenario::file_name(&config.scenario).trim_end_matches(".json").to_string();
                        let path = dir.join(format!("{stem}_{}_N{}_seed{}.svg", r.planner, r.n, r.seed));
                        if let Err(e) = std::fs::write(&path, svg) {
                            render_error.get_or_insert(anyhow::anyhow!("writing {}: {e}", path.display()));
                        }
                    }
                    Err(e) => eprintln!("warning: {e}"),
                }
            })?;
            if let Some(e) = render_error {
                return Err(e);
            }
            match &out {
                Some(path) => {
                    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    sweep::write_csv(&records, BufWriter::new(file))?;
                }
                None => sweep::write_csv(&records, io::stdout().lock())?,
            }
            let rows = summarize(&records);
            if let Some(path) = &summary {
                let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                write_summary_csv(&rows, BufWriter::new(file))?;
            }
            let mut err = io::stderr().lock();
            for row in &rows {
                writeln!(
                    err,
                    "{:<7} N={:<6} L={} {:<11} success {:.2} [{:.2}, {:.2}]  median cost {:.4}  median time {:.1} ms  edges {:.0}",
                    row.planner.as_str(),
                    row.n,
                    row.layers,
                    row.schedule.as_str(),
                    row.success_rate,
                    row.success_lo,
                    row.success_hi,
                    row.median_cost,
                    row.median_wall_time_ms,
                    row.median_edge_evaluations
                )?;
            }
        }
        Command::Scenarios { export } => {
            let mut stdout = io::stdout().lock();
            for s in scenario::builtin_scenarios() {
                writeln!(stdout, "{:<28} d={:<3} L={}  {}", s.name, s.space.dim(), s.layers, s.notes)?;
            }
            writeln!(stdout, "parameterized: corridor2d(width[,thickness]), random_boxes(d,count,size), links_planar(k)")?;
            if let Some(dir) = export {
                std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for s in scenario::builtin_scenarios() {
                    let path = dir.join(scenario::file_name(&s));
                    std::fs::write(&path, s.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
                }
            }
        }
        Command::Render {
            scenario,
            planner,
            samples,
            layers,
            schedule,
            seed,
            heuristic,
            out,
        } => {
            let scenario = Scenario::resolve(&scenario)?;
            let config = SweepConfig {
                layers: layers.unwrap_or(scenario.layers),
                planners: vec![planner],
                samples: vec![samples],
                schedule: schedule.into(),
                seeds: vec![seed],
                heuristic: matches!(heuristic, Toggle::On),
                timeout_ms: None,
                scenario,
            };
            config.validate()?;
            let (drawn, ms) = sweep::draw_samples(&config.scenario, seed, samples)?;
            let trial = sweep::run_trial(&config, planner, samples, seed, &drawn, ms)?;
            let svg = render_svg(&config.scenario, Some(&trial.set), &trial.result.trees, &trial.result.path)?;
            std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "{} {} cost {}",
                trial.record.planner,
                trial.record.status,
                trial.record.cost.map_or("inf".to_string(), |c| format!("{c:.6}"))
            );
        }
    }
    Ok(())
}
