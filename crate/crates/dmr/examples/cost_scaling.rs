//! Grid sweep over (n, k, alpha) measuring two-step payload bits and
//! fitting the single constant C in C*(alpha^2 kn + alpha n + k)*log n.

use dmr::experiment::{
    fit_constant, run_experiment, to_csv, twostep_cost_model, ExperimentConfig,
};
use dmr::sim::ProtocolKind;

fn main() {
    let config = ExperimentConfig {
        protocol: ProtocolKind::TwoStep,
        ns: vec![2048, 4096, 8192],
        ks: vec![64, 128],
        alphas: vec![0.0625, 0.125],
        trials: 5,
        master_seed: 0xc057,
    };
    let result = run_experiment(&config);

    println!(
        "{:>6} {:>5} {:>8} {:>14} {:>8} {:>8}",
        "n", "k", "alpha", "mean payload", "ratio", "rounds"
    );
    for s in &result.summaries {
        println!(
            "{:>6} {:>5} {:>8} {:>14.0} {:>8.3} {:>8.1}",
            s.n, s.k, s.alpha, s.mean_payload_bits, s.mean_ratio, s.mean_rounds
        );
    }

    let cells: Vec<(f64, f64)> = result
        .summaries
        .iter()
        .map(|s| (twostep_cost_model(s.n, s.k, s.alpha), s.mean_payload_bits))
        .collect();
    let (c, deviations) = fit_constant(&cells);
    let worst = deviations.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    println!("\nfit: payload ~ C * (alpha^2 kn + alpha n + k) * ceil(log2 n)");
    println!("C = {c:.2}, max per-cell deviation {:.1}%", worst * 100.0);

    let out = std::env::temp_dir().join("dmr-cost-scaling.csv");
    std::fs::write(&out, to_csv(&result.rows)).unwrap();
    println!("full rows written to {}", out.display());
}
