//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::process::ExitCode;
use std::time::Instant;

use mrfmt_bench::scenario::{bugtrap_se2, corridor2d, empty2d, links_planar, random_boxes, Scenario};
use mrfmt_bench::summary::{summarize, SummaryRow};
use mrfmt_bench::sweep::{run_sweep_with, strip_timing, write_csv, PlannerKind, Trial};
use mrfmt_bench::{SweepConfig, TrialRecord};
use mrfmt_core::multigraph::Connection;
use mrfmt_core::{LayeredSampleSet, ScheduleKind};

/// One-sided 95% normal quantile.
const Z_ONE_SIDED: f64 = 1.6448536269514722;
const SEEDS_C1: u64 = 100;
const N_C1: usize = 1000;
const NS_C2: [usize; 3] = [100, 300, 500];
const SEEDS_C2: u64 = 20;
const REL_TOL_C2: f64 = 1e-9;
const NS_C4: [usize; 6] = [200, 500, 1000, 2000, 5000, 10_000];
const MIN_SUCCESS_C4: f64 = 0.95;
const NS_C5: [usize; 3] = [500, 2000, 10_000];
const COST_TOL_C5: f64 = 0.05;
const SUCCESS_DROP_C6: f64 = 0.02;
const SUCCESS_GAP_C7: f64 = 0.05;
const COST_TOL_C9: f64 = 1e-9;
const SEEDS: u64 = 50;

struct Suite {
    records: Vec<TrialRecord>,
    failures: usize,
}

impl Suite {
    fn sweep(&mut self, config: &SweepConfig, on_trial: impl FnMut(&Trial)) -> Vec<TrialRecord> {
        let records = run_sweep_with(config, on_trial).expect("sweep runs");
        self.records.extend(records.iter().cloned());
        records
    }

    fn report(&mut self, id: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn config(scenario: Scenario, planners: &[PlannerKind], samples: &[usize], layers: usize, seeds: u64) -> SweepConfig {
    SweepConfig {
        planners: planners.to_vec(),
        samples: samples.to_vec(),
        layers,
        seeds: (0..seeds).collect(),
        ..SweepConfig::new(scenario)
    }
}

fn row(rows: &[SummaryRow], planner: PlannerKind, n: usize, schedule: ScheduleKind) -> &SummaryRow {
    rows.iter()
        .find(|r| r.planner == planner && r.n == n && r.schedule == schedule)
        .expect("summary row present")
}

fn overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// z statistic for "success rate dropped from `a` to `b`".
fn drop_z(a: &SummaryRow, b: &SummaryRow) -> f64 {
    let pa = a.success_rate;
    let pb = b.success_rate;
    let pooled = (a.successes + b.successes) as f64 / (a.trials + b.trials) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / a.trials as f64 + 1.0 / b.trials as f64)).sqrt();
    if se == 0.0 {
        return if pa > pb { f64::INFINITY } else { 0.0 };
    }
    (pa - pb) / se
}

/// Shortest init-goal distance on the explicit single-layer r-disk graph.
fn dijkstra(set: &LayeredSampleSet) -> f64 {
    let Connection::Radius(r) = set.connection(1) else { panic!("r-disk expected") };
    let n = set.n_configs();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    let src = set.init_index() as usize;
    dist[src] = 0.0;
    heap.push(Reverse((0u64, src)));
    while let Some(Reverse((bits, u))) = heap.pop() {
        let d = f64::from_bits(bits);
        if d > dist[u] {
            continue;
        }
        for (v, dv) in dist.iter_mut().enumerate() {
            let w = set.space().metric(set.config(u as u32).coords(), set.config(v as u32).coords());
            if v != u && w <= r && d + w < *dv {
                *dv = d + w;
                heap.push(Reverse(((d + w).to_bits(), v)));
            }
        }
    }
    dist[set.goal_index() as usize]
}

fn c1(suite: &mut Suite) {
    let mut mismatches = Vec::new();
    let mut total = 0;
    for scenario in [corridor2d(0.1), random_boxes(2, 30, 0.1)] {
        let name = scenario.name.clone();
        let cfg = config(scenario, &[PlannerKind::Fmt, PlannerKind::Mrfmt], &[N_C1], 1, SEEDS_C1);
        let mut pending: Vec<(u64, mrfmt_core::PlanResult)> = Vec::new();
        suite.sweep(&cfg, |t| {
            let seed = t.record.seed;
            match pending.iter().position(|(s, _)| *s == seed) {
                None => pending.push((seed, t.result.clone())),
                Some(i) => {
                    let (_, a) = pending.swap_remove(i);
                    let b = &t.result;
                    total += 1;
                    let same = a.status == b.status
                        && a.trees == b.trees
                        && a.stats.expansion_order == b.stats.expansion_order
                        && a.cost.to_bits() == b.cost.to_bits();
                    if !same {
                        mismatches.push(format!("{name} seed {seed}"));
                    }
                }
            }
        });
    }
    suite.report(
        "C1 L=1 reduction",
        mismatches.is_empty() && total == 2 * SEEDS_C1,
        format!("{total} paired runs, {} mismatches {:?}", mismatches.len(), mismatches),
    );
}

fn c2(suite: &mut Suite) {
    let mut cfg = config(empty2d(), &[PlannerKind::Fmt], &NS_C2, 1, SEEDS_C2);
    cfg.heuristic = false;
    let mut worst = 0.0_f64;
    let mut bad = 0;
    let mut runs = 0;
    suite.sweep(&cfg, |t| {
        runs += 1;
        let oracle = dijkstra(&t.set);
        let got = t.result.cost;
        let rel = if oracle.is_finite() && got.is_finite() {
            (got - oracle).abs() / oracle
        } else if oracle.is_infinite() && got.is_infinite() {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(rel);
        if rel > REL_TOL_C2 {
            bad += 1;
        }
    });
    suite.report(
        "C2 Dijkstra oracle",
        bad == 0 && runs == NS_C2.len() * SEEDS_C2 as usize,
        format!("{runs} runs, worst relative error {worst:.3e} (tol {REL_TOL_C2:e})"),
    );
}

fn c4(suite: &mut Suite) {
    let cfg = config(corridor2d(0.05), &[PlannerKind::Fmt, PlannerKind::Mrfmt], &NS_C4, 3, SEEDS);
    let rows = summarize(&suite.sweep(&cfg, |_| {}));
    let mr: Vec<&SummaryRow> = NS_C4.iter().map(|&n| row(&rows, PlannerKind::Mrfmt, n, ScheduleKind::Linear)).collect();
    let mut worst_z = f64::NEG_INFINITY;
    for i in 0..mr.len() {
        for j in i + 1..mr.len() {
            worst_z = worst_z.max(drop_z(mr[i], mr[j]));
        }
    }
    let last = mr.last().unwrap();
    let fmt_last = row(&rows, PlannerKind::Fmt, *NS_C4.last().unwrap(), ScheduleKind::Linear);
    let rates: Vec<String> = mr.iter().map(|r| format!("{}:{:.2}", r.n, r.success_rate)).collect();
    suite.report(
        "C4 completeness trend",
        worst_z <= Z_ONE_SIDED && last.success_rate >= MIN_SUCCESS_C4,
        format!(
            "success [{}], worst drop z {worst_z:.2} (max {Z_ONE_SIDED:.3}), N=10000 {:.2} (min {MIN_SUCCESS_C4}), FMT* baseline {:.2}",
            rates.join(" "),
            last.success_rate,
            fmt_last.success_rate
        ),
    );
}

fn c5(suite: &mut Suite) {
    let s = empty2d();
    let optimum = 0.8 * 2f64.sqrt();
    let layers = s.layers;
    let cfg = config(s, &[PlannerKind::Mrfmt], &NS_C5, layers, SEEDS);
    let rows = summarize(&suite.sweep(&cfg, |_| {}));
    let mr: Vec<&SummaryRow> = NS_C5.iter().map(|&n| row(&rows, PlannerKind::Mrfmt, n, ScheduleKind::Linear)).collect();
    let monotone = mr
        .windows(2)
        .all(|w| w[1].median_cost <= w[0].median_cost || overlap((w[0].cost_lo, w[0].cost_hi), (w[1].cost_lo, w[1].cost_hi)));
    let last = mr.last().unwrap().median_cost;
    let rel = (last - optimum) / optimum;
    let medians: Vec<String> = mr.iter().map(|r| format!("{}:{:.4}", r.n, r.median_cost)).collect();
    suite.report(
        "C5 optimality trend",
        monotone && rel.abs() <= COST_TOL_C5,
        format!(
            "medians [{}], optimum {optimum:.4}, N=10000 excess {:.2}% (max {:.0}%), nonincreasing {monotone}",
            medians.join(" "),
            rel * 100.0,
            COST_TOL_C5 * 100.0
        ),
    );
}

fn c6(suite: &mut Suite) {
    let cfg = config(corridor2d(0.05), &[PlannerKind::Fmt, PlannerKind::Mrfmt], &[5000], 4, SEEDS);
    let rows = summarize(&suite.sweep(&cfg, |_| {}));
    let f = row(&rows, PlannerKind::Fmt, 5000, ScheduleKind::Linear);
    let m = row(&rows, PlannerKind::Mrfmt, 5000, ScheduleKind::Linear);
    let pass = m.median_edge_evaluations < f.median_edge_evaluations
        && m.median_neighbor_queries < f.median_neighbor_queries
        && m.success_rate >= f.success_rate - SUCCESS_DROP_C6;
    suite.report(
        "C6 selective densification",
        pass,
        format!(
            "edges {} vs {}, queries {} vs {}, success {:.2} vs {:.2} (MRFMT* vs FMT*)",
            m.median_edge_evaluations,
            f.median_edge_evaluations,
            m.median_neighbor_queries,
            f.median_neighbor_queries,
            m.success_rate,
            f.success_rate
        ),
    );
}

fn c7(suite: &mut Suite) {
    let s = links_planar(6);
    let layers = s.layers;
    let cfg = config(s, &[PlannerKind::Mrfmt, PlannerKind::Bmrfmt], &[8000], layers, SEEDS);
    let rows = summarize(&suite.sweep(&cfg, |_| {}));
    let m = row(&rows, PlannerKind::Mrfmt, 8000, ScheduleKind::Linear);
    let b = row(&rows, PlannerKind::Bmrfmt, 8000, ScheduleKind::Linear);
    let pass = b.median_wall_time_ms <= m.median_wall_time_ms && (b.success_rate - m.success_rate).abs() <= SUCCESS_GAP_C7;
    suite.report(
        "C7 bidirectional advantage",
        pass,
        format!(
            "median time {:.1} ms vs {:.1} ms, success {:.2} vs {:.2} (BMRFMT* vs MRFMT*)",
            b.median_wall_time_ms, m.median_wall_time_ms, b.success_rate, m.success_rate
        ),
    );
}

fn c8(suite: &mut Suite) {
    let mut rows = Vec::new();
    for schedule in [ScheduleKind::Linear, ScheduleKind::Exponential] {
        let planners: &[PlannerKind] =
            if schedule == ScheduleKind::Linear { &[PlannerKind::Fmt, PlannerKind::Mrfmt] } else { &[PlannerKind::Mrfmt] };
        let mut cfg = config(bugtrap_se2(), planners, &[5000], 4, SEEDS);
        cfg.schedule = schedule;
        rows.extend(summarize(&suite.sweep(&cfg, |_| {})));
    }
    let f = row(&rows, PlannerKind::Fmt, 5000, ScheduleKind::Linear);
    let lin = row(&rows, PlannerKind::Mrfmt, 5000, ScheduleKind::Linear);
    let exp = row(&rows, PlannerKind::Mrfmt, 5000, ScheduleKind::Exponential);
    let ci = |r: &SummaryRow| (r.success_lo, r.success_hi);
    let pass = lin.median_cost <= exp.median_cost
        && exp.median_wall_time_ms <= lin.median_wall_time_ms
        && overlap(ci(lin), ci(f))
        && overlap(ci(exp), ci(f));
    suite.report(
        "C8 schedule study",
        pass,
        format!(
            "cost lin {:.4} exp {:.4}, time lin {:.2} ms exp {:.2} ms, success lin {:.2} exp {:.2} FMT* {:.2} [{:.2}, {:.2}]",
            lin.median_cost,
            exp.median_cost,
            lin.median_wall_time_ms,
            exp.median_wall_time_ms,
            lin.success_rate,
            exp.success_rate,
            f.success_rate,
            f.success_lo,
            f.success_hi
        ),
    );
}

fn c3_c9(suite: &mut Suite) {
    let trials = suite.records.len();
    let max_expansions = suite.records.iter().map(|r| r.audit.max_node_expansions).max().unwrap_or(0);
    suite.report(
        "C3 expand-once",
        max_expansions <= 1,
        format!("{trials} trials, max per-node expansions {max_expansions}"),
    );
    let solved: Vec<&TrialRecord> = suite.records.iter().filter(|r| r.solved()).collect();
    let invalid = solved.iter().filter(|r| r.audit.path_valid != Some(true)).count();
    let worst = solved.iter().filter_map(|r| r.audit.cost_error).fold(0.0_f64, f64::max);
    let missing = solved.iter().filter(|r| r.audit.cost_error.is_none()).count();
    suite.report(
        "C9 path validity",
        invalid == 0 && missing == 0 && worst <= COST_TOL_C9,
        format!("{} solved, {invalid} invalid, worst cost error {worst:.3e} (tol {COST_TOL_C9:e})", solved.len()),
    );
}

fn c10(suite: &mut Suite) {
    let sweeps = [
        config(corridor2d(0.05), &PlannerKind::ALL, &[500, 2000], 4, 10),
        config(bugtrap_se2(), &PlannerKind::ALL, &[1000], 4, 10),
    ];
    let mut identical = true;
    let mut rows = 0;
    for cfg in &sweeps {
        let text = |records: &[TrialRecord]| {
            let mut buf = Vec::new();
            write_csv(records, &mut buf).unwrap();
            strip_timing(&String::from_utf8(buf).unwrap()).unwrap()
        };
        let first = suite.sweep(cfg, |_| {});
        let second = suite.sweep(cfg, |_| {});
        rows += first.len();
        identical &= text(&first) == text(&second);
    }
    suite.report("C10 determinism", identical, format!("{rows} rows rerun, identical apart from timing: {identical}"));
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut suite = Suite { records: Vec::new(), failures: 0 };
    c1(&mut suite);
    c2(&mut suite);
    c4(&mut suite);
    c5(&mut suite);
    c6(&mut suite);
    c7(&mut suite);
    c8(&mut suite);
    c10(&mut suite);
    c3_c9(&mut suite);
    println!(
        "{} criteria failed, {} trials, {:.1} s",
        suite.failures,
        suite.records.len(),
        start.elapsed().as_secs_f64()
    );
    if suite.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
