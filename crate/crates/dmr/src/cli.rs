//! Implementations of the command-line operations. The `dmr` binary is a
//! thin argument parser over these functions; they are also directly
//! callable (and tested) as library code.
//!
//! Exit-code contract: 0 success / all checks pass, 1 usage error,
//! 2 file/parse error, 3 invariant or acceptance failure.

use crate::dist::{build_hard_instance, classify_edges, instance_to_graph};
use crate::experiment::{
    fit_constant, greedy_payload_bound, run_experiment, to_csv, twostep_cost_model,
    ExperimentConfig, ResultRow,
};
use crate::graph::{maximum_matching, BipartiteGraph, Edge, EdgePartition};
use crate::io::{format_instance, read_instance_file, HardSidecar};
use crate::reduction::run_trial;
use crate::rng;
use crate::sim::{run_protocol, ProtocolKind};
use crate::stats::binomial_sigma;
use rand::Rng;
use std::collections::HashSet;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Parse(String),
    Check(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => EXIT_USAGE,
            CmdError::Parse(_) => EXIT_PARSE,
            CmdError::Check(_) => EXIT_CHECK,
        }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Usage(m) => write!(f, "usage error: {m}"),
            CmdError::Parse(m) => write!(f, "parse error: {m}"),
            CmdError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError::Usage(msg.into())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    std::fs::write(path, contents)
        .map_err(|e| CmdError::Parse(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Hard,
    Random,
}

/// `gen`: writes an instance file.
pub fn cmd_gen(
    kind: GenKind,
    n: usize,
    k: usize,
    alpha: Option<f64>,
    density: Option<f64>,
    seed: u64,
    out: &Path,
) -> Result<(), CmdError> {
    let (graph, partition, sidecar) = match kind {
        GenKind::Hard => {
            let alpha = alpha.ok_or_else(|| usage("gen hard requires --alpha"))?;
            let inst = build_hard_instance(n, k, alpha, seed)
                .map_err(|e| usage(e.to_string()))?;
            let (graph, partition) = instance_to_graph(&inst);
            let sidecar =
                HardSidecar { alpha: inst.alpha(), p: inst.p(), r: inst.r(), seed };
            (graph, partition, Some(sidecar))
        }
        GenKind::Random => {
            let density = density.ok_or_else(|| usage("gen random requires --density"))?;
            if !(0.0..=1.0).contains(&density) {
                return Err(usage(format!("density must lie in [0, 1], got {density}")));
            }
            if n < 2 || !n.is_multiple_of(2) {
                return Err(usage(format!("n must be even and >= 2, got {n}")));
            }
            if k == 0 {
                return Err(usage("k must be >= 1"));
            }
            let half = n / 2;
            let mut graph = BipartiteGraph::new(half, half);
            let mut r = rng::stream(seed, &[0x50]);
            for u in 0..half {
                for v in 0..half {
                    if r.gen_bool(density) {
                        graph.add_edge(Edge::new(u, v)).expect("pairs are unique");
                    }
                }
            }
            let partition = EdgePartition::round_robin_left(&graph, k)
                .expect("round robin is always valid");
            (graph, partition, None)
        }
    };
    write_file(out, &format_instance(&graph, &partition, sidecar.as_ref()))?;
    println!(
        "wrote {} (n_left={} n_right={} k={} m={}{})",
        out.display(),
        graph.n_left(),
        graph.n_right(),
        partition.k(),
        graph.edge_count(),
        if sidecar.is_some() { ", hard" } else { "" }
    );
    Ok(())
}

/// `run`: one protocol execution on an instance file.
#[allow(clippy::too_many_arguments)]
pub fn cmd_run(
    protocol: ProtocolKind,
    input: &Path,
    alpha: Option<f64>,
    seed: u64,
    csv_out: Option<&Path>,
    transcript_out: Option<&Path>,
) -> Result<ResultRow, CmdError> {
    let file = read_instance_file(input).map_err(|e| CmdError::Parse(e.to_string()))?;
    if protocol == ProtocolKind::TwoStep && alpha.is_none() {
        return Err(usage("protocol twostep requires --alpha"));
    }
    let alpha = alpha.unwrap_or(0.0);
    let run = run_protocol(protocol.with_alpha(alpha), &file.graph, &file.partition, seed)
        .map_err(|e| usage(e.to_string()))?;
    let opt = maximum_matching(&file.graph).len();
    let row = ResultRow::from_run(
        &run,
        protocol.name(),
        0,
        file.graph.n_total(),
        file.partition.k(),
        alpha,
        opt,
    );
    println!(
        "protocol={} matching={} opt={} ratio={:.4} payload_bits={} total_bits={} rounds={} messages={}",
        row.protocol,
        row.matching_size,
        row.opt,
        row.ratio,
        row.payload_bits,
        row.total_bits,
        row.rounds,
        row.messages
    );
    if let Some(path) = csv_out {
        write_file(path, &to_csv(std::slice::from_ref(&row)))?;
    }
    if let Some(path) = transcript_out {
        write_file(path, &run.dump_transcript())?;
    }
    Ok(row)
}

/// `experiment`: a grid sweep writing one CSV, with an optional summary
/// table and cost-model fits.
pub fn cmd_experiment(
    config: &ExperimentConfig,
    out: &Path,
    summary: bool,
) -> Result<(), CmdError> {
    if config.trials == 0 {
        return Err(usage("--trials must be >= 1"));
    }
    if config.ns.is_empty() || config.ks.is_empty() || config.alphas.is_empty() {
        return Err(usage("--ns, --ks and --alphas must each list at least one value"));
    }
    let result = run_experiment(config);
    for warning in &result.skipped {
        eprintln!("warning: {warning}");
    }
    if result.rows.is_empty() {
        return Err(usage("no feasible cells in the grid"));
    }
    write_file(out, &to_csv(&result.rows))?;
    println!("wrote {} rows to {}", result.rows.len(), out.display());

    if summary {
        println!(
            "{:<8} {:>6} {:>5} {:>8} {:>7} {:>14} {:>14} {:>8} {:>8}",
            "protocol", "n", "k", "alpha", "trials", "mean_payload", "median_payload", "ratio", "rounds"
        );
        for s in &result.summaries {
            println!(
                "{:<8} {:>6} {:>5} {:>8} {:>7} {:>14.1} {:>14.1} {:>8.4} {:>8.1}",
                s.protocol,
                s.n,
                s.k,
                s.alpha,
                s.trials,
                s.mean_payload_bits,
                s.median_payload_bits,
                s.mean_ratio,
                s.mean_rounds
            );
        }
        match config.protocol {
            ProtocolKind::TwoStep => {
                let cells: Vec<(f64, f64)> = result
                    .summaries
                    .iter()
                    .map(|s| (twostep_cost_model(s.n, s.k, s.alpha), s.mean_payload_bits))
                    .collect();
                let (c, deviations) = fit_constant(&cells);
                let worst = deviations.iter().fold(0.0f64, |m, d| m.max(d.abs()));
                println!(
                    "twostep cost fit: payload ~ C*(alpha^2*k*n + alpha*n + k)*ceil(log2 n), C = {c:.3}"
                );
                for (s, d) in result.summaries.iter().zip(&deviations) {
                    println!(
                        "  cell n={} k={} alpha={}: deviation {:+.1}%",
                        s.n,
                        s.k,
                        s.alpha,
                        d * 100.0
                    );
                }
                println!("max deviation {:.1}%", worst * 100.0);
            }
            ProtocolKind::Greedy => {
                let mut worst = 0.0f64;
                for s in &result.summaries {
                    let bound = greedy_payload_bound(s.n, s.k) as f64;
                    worst = worst.max(s.max_payload_bits as f64 / bound);
                    if s.max_payload_bits > greedy_payload_bound(s.n, s.k) {
                        return Err(CmdError::Check(format!(
                            "greedy payload {} exceeds bound {} at n={} k={}",
                            s.max_payload_bits,
                            greedy_payload_bound(s.n, s.k),
                            s.n,
                            s.k
                        )));
                    }
                }
                println!(
                    "greedy payload bound 2*k*n*ceil(log2 n) holds on every run (peak usage {:.1}%)",
                    worst * 100.0
                );
            }
            ProtocolKind::Luby => {
                let mut c_max = 0.0f64;
                for row in &result.rows {
                    let iterations = row.rounds.saturating_sub(1).max(1) as f64;
                    let per_iter = row.payload_bits as f64 / iterations;
                    let model = row.k as f64
                        * row.n as f64
                        * crate::sim::bits_for(row.n) as f64;
                    c_max = c_max.max(per_iter / model);
                }
                println!(
                    "luby per-iteration payload <= C'*k*n*ceil(log2 n) with fitted C' = {c_max:.4}"
                );
            }
        }
    }
    Ok(())
}

struct CheckReport {
    failed: Vec<String>,
}

impl CheckReport {
    fn new() -> Self {
        CheckReport { failed: Vec::new() }
    }

    fn pass(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("PASS {name}: {detail}");
        } else {
            println!("FAIL {name}: {detail}");
            self.failed.push(name.to_string());
        }
    }

    fn skip(&self, name: &str, why: String) {
        println!("SKIP {name}: {why}");
    }
}

/// `verify`: structural and concentration-bound checks of an instance file.
pub fn cmd_verify(input: &Path) -> Result<(), CmdError> {
    let file = read_instance_file(input).map_err(|e| CmdError::Parse(e.to_string()))?;
    let graph = &file.graph;
    let mut report = CheckReport::new();

    report.pass(
        "partition",
        true,
        format!(
            "{} edges each assigned to exactly one of {} sites",
            graph.edge_count(),
            file.partition.k()
        ),
    );

    let Some(sidecar) = file.hard else {
        println!("notice: no hard sidecar; concentration checks skipped");
        return Ok(());
    };

    let n = graph.n_total();
    let k = file.partition.k();
    report.pass(
        "left-vertex-rule",
        file.partition.is_left_vertex_partition(graph),
        "every left vertex's edges on a single site".into(),
    );

    let shape_ok = graph.n_left() == graph.n_right() && graph.n_left() == sidecar.r * k;
    report.pass(
        "shape",
        shape_ok,
        format!("n_left = n_right = r*k = {}", sidecar.r * k),
    );
    if !shape_ok {
        return Err(CmdError::Check(format!("checks failed: {}", report.failed.join(", "))));
    }

    let inst = build_hard_instance(n, k, sidecar.alpha, sidecar.seed)
        .map_err(|e| usage(format!("sidecar parameters invalid: {e}")))?;
    report.pass(
        "sidecar-p",
        sidecar.p == inst.p() && sidecar.r == inst.r(),
        format!("p = alpha/20 = {}, r = n/(2k) = {}", inst.p(), inst.r()),
    );

    let (rebuilt, _) = instance_to_graph(&inst);
    let file_edges: HashSet<Edge> = graph.edges().iter().copied().collect();
    let rebuilt_edges: HashSet<Edge> = rebuilt.edges().iter().copied().collect();
    report.pass(
        "seed-rebuild",
        file_edges == rebuilt_edges,
        format!(
            "file has {} edges, seed rebuild has {}",
            file_edges.len(),
            rebuilt_edges.len()
        ),
    );

    // classification from the rebuilt tensor; structural checks on file edges
    let classes = classify_edges(&inst);
    let v1: HashSet<usize> = classes.v1.iter().copied().collect();
    let u0: HashSet<usize> = classes.u0.iter().copied().collect();

    let mut worst_row_hits = 0usize;
    for u in 0..graph.n_left() {
        let hits = graph
            .edges()
            .iter()
            .filter(|e| e.left == u && v1.contains(&e.right))
            .count();
        worst_row_hits = worst_row_hits.max(hits);
    }
    report.pass(
        "one-intersection-per-row",
        worst_row_hits <= 1,
        format!("max intersections of any row with its block's y: {worst_row_hits}"),
    );

    let u0v1 = graph
        .edges()
        .iter()
        .filter(|e| u0.contains(&e.left) && v1.contains(&e.right))
        .count();
    report.pass("no-u0-v1-edges", u0v1 == 0, format!("{u0v1} forbidden edges found"));

    let p = inst.p();
    let p2n = p * p * n as f64;
    if p2n >= 3.0 {
        let bound = 2.0 * p * n as f64;
        report.pass(
            "v0-bound",
            (classes.v0.len() as f64) <= bound,
            format!("|V0| = {} vs 2pn = {bound:.1}", classes.v0.len()),
        );
    } else {
        report.skip(
            "v0-bound",
            format!("p^2 n = {p2n:.2} < 3, outside the concentration regime"),
        );
    }

    if k >= 64 && inst.r() >= 16 {
        let opt = maximum_matching(graph).len();
        report.pass(
            "opt-bound",
            opt * 5 >= n,
            format!("maximum matching {opt} vs n/5 = {:.1}", n as f64 / 5.0),
        );
    } else {
        report.skip(
            "opt-bound",
            format!("k = {k}, r = {} below the (k >= 64, r >= 16) regime", inst.r()),
        );
    }

    if report.failed.is_empty() {
        Ok(())
    } else {
        Err(CmdError::Check(format!("checks failed: {}", report.failed.join(", "))))
    }
}

/// `reduce`: the disjointness-extraction demonstration, reporting the
/// one-sided error check and the hit rate against the alpha/10 threshold.
pub fn cmd_reduce(
    n: usize,
    k: usize,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<(), CmdError> {
    if trials == 0 {
        return Err(usage("--trials must be >= 1"));
    }
    crate::dist::check_params(n, k, alpha).map_err(|e| usage(e.to_string()))?;

    let protocol = ProtocolKind::TwoStep.with_alpha(alpha);
    let mut disj0 = 0u64;
    let mut false_positives = 0u64;
    let mut disj1 = 0u64;
    let mut hits = 0u64;
    let mut alice_bob_total = 0u64;
    for t in 0..trials {
        let report = run_trial(n, k, alpha, &protocol, seed, t)
            .map_err(|e| usage(e.to_string()))?;
        alice_bob_total += report.alice_bob_bits;
        if report.disj {
            disj1 += 1;
            if report.answer {
                hits += 1;
            }
        } else {
            disj0 += 1;
            if report.answer {
                false_positives += 1;
            }
        }
    }

    let threshold = alpha / 10.0;
    println!("trials            {trials}");
    println!("disj=0 trials     {disj0}");
    println!("false positives   {false_positives}");
    println!("disj=1 trials     {disj1}");
    println!("hits              {hits}");
    println!("mean alice-bob payload bits  {:.1}", alice_bob_total as f64 / trials as f64);

    let mut failed = false;
    if false_positives == 0 {
        println!("one-sided error   PASS (exact)");
    } else {
        println!("one-sided error   FAIL ({false_positives} false positives)");
        failed = true;
    }
    if disj1 > 0 {
        let rate = hits as f64 / disj1 as f64;
        let sigma = binomial_sigma(threshold, disj1);
        let floor = threshold - 3.0 * sigma;
        println!("hit rate          {rate:.4}");
        println!("alpha/10          {threshold:.4}");
        println!("threshold (-3s)   {floor:.4}");
        if rate >= floor {
            println!("hit rate          PASS");
        } else {
            println!("hit rate          FAIL");
            failed = true;
        }
    } else {
        println!("hit rate          SKIP (no disj=1 trials)");
    }

    if failed {
        Err(CmdError::Check("reduction checks failed".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("dmr-cli-tests");
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn gen_run_round_trip() {
        let path = tmp("hard.dmr");
        cmd_gen(GenKind::Hard, 64, 4, Some(0.5), None, 7, &path).unwrap();
        let file = read_instance_file(&path).unwrap();
        assert_eq!(file.graph.n_total(), 64);
        assert!(file.hard.is_some());

        let row = cmd_run(ProtocolKind::Greedy, &path, None, 3, None, None).unwrap();
        assert!(row.ratio >= 0.5);

        // identical seed, identical row
        let again = cmd_run(ProtocolKind::Greedy, &path, None, 3, None, None).unwrap();
        assert_eq!(row, again);
    }

    #[test]
    fn gen_random_density_zero_is_empty() {
        let path = tmp("empty.dmr");
        cmd_gen(GenKind::Random, 16, 2, None, Some(0.0), 1, &path).unwrap();
        let file = read_instance_file(&path).unwrap();
        assert_eq!(file.graph.edge_count(), 0);
    }

    #[test]
    fn gen_rejects_bad_params() {
        let path = tmp("unused.dmr");
        assert!(matches!(
            cmd_gen(GenKind::Hard, 63, 4, Some(0.5), None, 1, &path),
            Err(CmdError::Usage(_))
        ));
        assert!(matches!(
            cmd_gen(GenKind::Hard, 64, 4, None, None, 1, &path),
            Err(CmdError::Usage(_))
        ));
        assert!(matches!(
            cmd_gen(GenKind::Random, 16, 2, None, Some(1.5), 1, &path),
            Err(CmdError::Usage(_))
        ));
    }

    #[test]
    fn run_requires_alpha_for_twostep() {
        let path = tmp("hard2.dmr");
        cmd_gen(GenKind::Hard, 32, 4, Some(0.25), None, 2, &path).unwrap();
        assert!(matches!(
            cmd_run(ProtocolKind::TwoStep, &path, None, 1, None, None),
            Err(CmdError::Usage(_))
        ));
        assert!(cmd_run(ProtocolKind::TwoStep, &path, Some(0.125), 1, None, None).is_ok());
    }

    #[test]
    fn verify_fresh_and_corrupted() {
        let path = tmp("verify.dmr");
        cmd_gen(GenKind::Hard, 128, 4, Some(0.5), None, 9, &path).unwrap();
        cmd_verify(&path).unwrap();

        // corrupt: add an edge from a u0 row into v1
        let inst = build_hard_instance(128, 4, 0.5, 9).unwrap();
        let classes = classify_edges(&inst);
        let (graph, _) = instance_to_graph(&inst);
        let u = *classes.u0.first().expect("some u0 row exists");
        let v = *classes
            .v1
            .iter()
            .find(|&&v| v / 4 == u / 4 && !graph.contains_edge(Edge::new(u, v)))
            .expect("free v1 slot in the same block");
        let mut corrupted = graph.clone();
        corrupted.add_edge(Edge::new(u, v)).unwrap();
        let partition = EdgePartition::round_robin_left(&corrupted, 4).unwrap();
        let sidecar = HardSidecar { alpha: 0.5, p: 0.025, r: 16, seed: 9 };
        let bad_path = tmp("corrupted.dmr");
        std::fs::write(&bad_path, format_instance(&corrupted, &partition, Some(&sidecar)))
            .unwrap();
        let err = cmd_verify(&bad_path).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_CHECK);
    }

    #[test]
    fn verify_non_hard_skips_concentration_checks() {
        let path = tmp("plain.dmr");
        cmd_gen(GenKind::Random, 16, 2, None, Some(0.3), 5, &path).unwrap();
        cmd_verify(&path).unwrap();
    }

    #[test]
    fn experiment_writes_deterministic_csv() {
        let out1 = tmp("exp1.csv");
        let out2 = tmp("exp2.csv");
        let config = ExperimentConfig {
            protocol: ProtocolKind::TwoStep,
            ns: vec![64],
            ks: vec![4],
            alphas: vec![0.125],
            trials: 2,
            master_seed: 11,
        };
        cmd_experiment(&config, &out1, true).unwrap();
        cmd_experiment(&config, &out2, false).unwrap();
        assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
    }

    #[test]
    fn reduce_small_run_passes() {
        cmd_reduce(64, 8, 0.125, 60, 21).unwrap();
        assert!(matches!(cmd_reduce(64, 8, 0.125, 0, 21), Err(CmdError::Usage(_))));
        assert!(matches!(cmd_reduce(63, 8, 0.125, 5, 21), Err(CmdError::Usage(_))));
    }
}
