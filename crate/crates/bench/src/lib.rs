//! Benchmark harness for the fast marching tree planners: scenarios, seeded
//! sweeps with CSV output, summaries and SVG rendering.

pub mod scenario;
pub mod summary;
pub mod svg;
pub mod sweep;

pub use scenario::{builtin_scenarios, Scenario, ScenarioError};
pub use summary::{summarize, SummaryRow};
pub use svg::render_svg;
pub use sweep::{run_sweep, run_sweep_with, PlannerKind, SweepConfig, TrialRecord};
