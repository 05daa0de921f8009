//! Experiment sweeps over (n, k, alpha) grids of hard instances, CSV
//! emission, and the cost-model fit for the two-step protocol.
//!
//! All measurement rows are re-derivable from (protocol, n, k, alpha,
//! master seed, trial): the per-trial seed is a pure function of those,
//! so adding grid cells never perturbs existing rows, and reruns are
//! byte-identical regardless of the worker thread count.

use crate::dist::{build_hard_instance, check_params, instance_to_graph, DistError};
use crate::graph::maximum_matching;
use crate::rng;
use crate::sim::{bits_for, run_protocol, ProtocolKind, ProtocolRun, SimError};
use crate::stats::{mean, median};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

const TAG_INSTANCE: u64 = 0x40;
const TAG_RUN: u64 = 0x41;

/// One grid sweep: a protocol over hard instances at every (n, k, alpha)
/// cell, `trials` runs per cell.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub alphas: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
}

/// One measured protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub trial: u64,
    pub protocol: &'static str,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub seed: u64,
    pub opt: usize,
    pub matching_size: usize,
    pub ratio: f64,
    pub payload_bits: u64,
    pub total_bits: u64,
    pub rounds: u32,
    pub messages: u64,
}

pub const CSV_HEADER: &str =
    "trial,protocol,n,k,alpha,seed,opt,matching_size,ratio,payload_bits,total_bits,rounds,messages";

impl ResultRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.protocol,
            self.n,
            self.k,
            self.alpha,
            self.seed,
            self.opt,
            self.matching_size,
            self.ratio,
            self.payload_bits,
            self.total_bits,
            self.rounds,
            self.messages
        )
    }

    pub fn from_run(
        run: &ProtocolRun,
        protocol: &'static str,
        trial: u64,
        n: usize,
        k: usize,
        alpha: f64,
        opt: usize,
    ) -> Self {
        let size = run.output.len();
        let ratio = if opt == 0 { 1.0 } else { size as f64 / opt as f64 };
        ResultRow {
            trial,
            protocol,
            n,
            k,
            alpha,
            seed: run.seed,
            opt,
            matching_size: size,
            ratio,
            payload_bits: run.ledger.total_payload_bits(),
            total_bits: run.ledger.total_bits(),
            rounds: run.ledger.rounds(),
            messages: run.ledger.total_messages(),
        }
    }
}

/// Renders header plus rows; the single results format.
pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// The seed driving trial `trial` of cell (n, k, alpha); pure in its
/// arguments.
pub fn cell_seed(master: u64, n: usize, k: usize, alpha: f64, trial: u64) -> u64 {
    rng::derive(master, &[n as u64, k as u64, rng::tag_f64(alpha), trial])
}

/// Builds the cell's hard instance for one trial and runs the protocol.
pub fn run_cell_trial(
    protocol: ProtocolKind,
    n: usize,
    k: usize,
    alpha: f64,
    master: u64,
    trial: u64,
) -> Result<(ResultRow, ProtocolRun), ExperimentError> {
    let seed = cell_seed(master, n, k, alpha, trial);
    let inst = build_hard_instance(n, k, alpha, rng::derive(seed, &[TAG_INSTANCE]))?;
    let (graph, partition) = instance_to_graph(&inst);
    let run = run_protocol(
        protocol.with_alpha(alpha),
        &graph,
        &partition,
        rng::derive(seed, &[TAG_RUN]),
    )?;
    let opt = maximum_matching(&graph).len();
    let row = ResultRow::from_run(&run, protocol.name(), trial, n, k, alpha, opt);
    Ok((row, run))
}

/// Per-cell aggregate over its trials.
#[derive(Debug, Clone)]
pub struct CellSummary {
    pub protocol: &'static str,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub trials: u64,
    pub mean_payload_bits: f64,
    pub median_payload_bits: f64,
    pub mean_ratio: f64,
    pub mean_rounds: f64,
    pub max_payload_bits: u64,
}

#[derive(Debug)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
    pub summaries: Vec<CellSummary>,
    /// Human-readable warnings for skipped (infeasible) cells.
    pub skipped: Vec<String>,
}

/// Worker count: `DMR_THREADS` if set, else the machine parallelism.
pub fn worker_threads() -> usize {
    if let Ok(v) = std::env::var("DMR_THREADS") {
        if let Ok(t) = v.parse::<usize>() {
            return t.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Runs the full grid. Trials execute concurrently (up to
/// [`worker_threads`]); rows come back in deterministic (cell, trial)
/// order regardless of scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> ExperimentResult {
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for &n in &config.ns {
        for &k in &config.ks {
            for &alpha in &config.alphas {
                match check_params(n, k, alpha) {
                    Ok(()) => cells.push((n, k, alpha)),
                    Err(e) => skipped.push(format!("skipping cell n={n} k={k} alpha={alpha}: {e}")),
                }
            }
        }
    }

    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| (0..config.trials).map(move |t| (c, t)))
        .collect();
    let results: Mutex<Vec<Option<ResultRow>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let workers = worker_threads().min(jobs.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= jobs.len() {
                    break;
                }
                let (cell_idx, trial) = jobs[idx];
                let (n, k, alpha) = cells[cell_idx];
                let (row, _) =
                    run_cell_trial(config.protocol, n, k, alpha, config.master_seed, trial)
                        .expect("cell parameters were pre-validated");
                results.lock().unwrap()[idx] = Some(row);
            });
        }
    });

    let rows: Vec<ResultRow> = results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect();

    let mut summaries = Vec::new();
    for (cell_idx, &(n, k, alpha)) in cells.iter().enumerate() {
        let cell_rows = &rows[cell_idx * config.trials as usize
            ..(cell_idx + 1) * config.trials as usize];
        let payloads: Vec<f64> = cell_rows.iter().map(|r| r.payload_bits as f64).collect();
        summaries.push(CellSummary {
            protocol: config.protocol.name(),
            n,
            k,
            alpha,
            trials: config.trials,
            mean_payload_bits: mean(&payloads),
            median_payload_bits: median(&payloads),
            mean_ratio: mean(&cell_rows.iter().map(|r| r.ratio).collect::<Vec<_>>()),
            mean_rounds: mean(&cell_rows.iter().map(|r| r.rounds as f64).collect::<Vec<_>>()),
            max_payload_bits: cell_rows.iter().map(|r| r.payload_bits).max().unwrap_or(0),
        });
    }

    ExperimentResult { rows, summaries, skipped }
}

/// The two-step cost model `(alpha^2 k n + alpha n + k) * ceil(log2 n)`.
pub fn twostep_cost_model(n: usize, k: usize, alpha: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    (alpha * alpha * kf * nf + alpha * nf + kf) * bits_for(n) as f64
}

/// The sequential-greedy payload bound `2 k n ceil(log2 n)`, exact.
pub fn greedy_payload_bound(n: usize, k: usize) -> u64 {
    2 * k as u64 * n as u64 * bits_for(n)
}

/// Fits the single constant C minimizing multiplicative deviation (the
/// geometric mean of per-cell mean-payload / model ratios) and returns
/// (C, per-cell relative deviations from C * model).
pub fn fit_constant(cells: &[(f64, f64)]) -> (f64, Vec<f64>) {
    assert!(!cells.is_empty());
    let log_sum: f64 = cells.iter().map(|&(model, bits)| (bits / model).ln()).sum();
    let c = (log_sum / cells.len() as f64).exp();
    let deviations = cells
        .iter()
        .map(|&(model, bits)| bits / (c * model) - 1.0)
        .collect();
    (c, deviations)
}
