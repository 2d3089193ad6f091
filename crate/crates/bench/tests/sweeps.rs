use mrfmt_bench::scenario::bugtrap_se2;
use mrfmt_bench::summary::summarize;
use mrfmt_bench::{run_sweep, PlannerKind, SweepConfig};

const SAMPLES: [usize; 6] = [200, 500, 1000, 2000, 5000, 10_000];
/// One-sided 95% normal quantile for the drop test between sample counts.
const Z_ONE_SIDED: f64 = 1.6448536269514722;

#[test]
fn bugtrap_success_grows_with_samples() {
    let config = SweepConfig {
        planners: vec![PlannerKind::Mrfmt],
        samples: SAMPLES.to_vec(),
        layers: 4,
        seeds: (0..50).collect(),
        ..SweepConfig::new(bugtrap_se2())
    };
    let records = run_sweep(&config).unwrap();
    assert!(records.iter().all(|r| r.audit.path_valid != Some(false)));
    let rows = summarize(&records);
    assert_eq!(rows.len(), SAMPLES.len());
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        assert!(a.n < b.n);
        let pooled = (a.successes + b.successes) as f64 / (a.trials + b.trials) as f64;
        let se = (pooled * (1.0 - pooled) * (2.0 / a.trials as f64)).sqrt();
        let z = if se > 0.0 { (a.success_rate - b.success_rate) / se } else { 0.0 };
        assert!(z <= Z_ONE_SIDED, "success fell from {} at N={} to {} at N={}", a.success_rate, a.n, b.success_rate, b.n);
    }
    assert!(rows.last().unwrap().success_rate >= 0.98);
}
