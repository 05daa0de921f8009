//! The instance text format.
//!
//! ```text
//! DMR v1
//! n <n_left> <n_right>
//! k <k>
//! m <edge_count>
//! e <left_index> <right_index> <site>     (m lines, 0-based indices)
//! ```
//!
//! Tokens are whitespace-separated, lines newline-terminated, and anything
//! from `#` to end of line is a comment. Hard instances carry a sidecar
//! comment `# hard alpha=<a> p=<p> r=<r> seed=<seed>` right after the magic
//! line, so their classification can be recomputed from the seed.

use crate::graph::{BipartiteGraph, Edge, EdgePartition};
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Provenance of a hard instance, recoverable from its file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardSidecar {
    pub alpha: f64,
    pub p: f64,
    pub r: usize,
    pub seed: u64,
}

/// A parsed instance file.
#[derive(Debug)]
pub struct InstanceFile {
    pub graph: BipartiteGraph,
    pub partition: EdgePartition,
    pub hard: Option<HardSidecar>,
}

/// Renders an instance in the v1 format.
pub fn format_instance(
    graph: &BipartiteGraph,
    partition: &EdgePartition,
    hard: Option<&HardSidecar>,
) -> String {
    let mut out = String::new();
    out.push_str("DMR v1\n");
    if let Some(h) = hard {
        let _ = writeln!(out, "# hard alpha={} p={} r={} seed={}", h.alpha, h.p, h.r, h.seed);
    }
    let _ = writeln!(out, "n {} {}", graph.n_left(), graph.n_right());
    let _ = writeln!(out, "k {}", partition.k());
    let _ = writeln!(out, "m {}", graph.edge_count());
    for (idx, e) in graph.edges().iter().enumerate() {
        let _ = writeln!(out, "e {} {} {}", e.left, e.right, partition.site_of(idx));
    }
    out
}

pub fn write_instance<W: Write>(
    w: &mut W,
    graph: &BipartiteGraph,
    partition: &EdgePartition,
    hard: Option<&HardSidecar>,
) -> Result<(), FormatError> {
    w.write_all(format_instance(graph, partition, hard).as_bytes())?;
    Ok(())
}

pub fn write_instance_file<P: AsRef<Path>>(
    path: P,
    graph: &BipartiteGraph,
    partition: &EdgePartition,
    hard: Option<&HardSidecar>,
) -> Result<(), FormatError> {
    let mut f = std::fs::File::create(path)?;
    write_instance(&mut f, graph, partition, hard)
}

pub fn read_instance<R: BufRead>(reader: R) -> Result<InstanceFile, FormatError> {
    let mut hard = None;
    let mut magic_seen = false;
    let mut n: Option<(usize, usize)> = None;
    let mut k: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut edges: Vec<(Edge, usize)> = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if let Some(comment) = line.find('#').map(|pos| line[pos + 1..].trim()) {
            if let Some(rest) = comment.strip_prefix("hard ") {
                hard = Some(parse_sidecar(rest, line_no)?);
            }
        }
        let text = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !magic_seen {
            if tokens != ["DMR", "v1"] {
                return Err(parse_err(line_no, "expected magic line `DMR v1`"));
            }
            magic_seen = true;
            continue;
        }
        match tokens[0] {
            "n" => {
                let [nl, nr] = expect_ints::<2>(&tokens[1..], line_no)?;
                n = Some((nl, nr));
            }
            "k" => {
                let [kv] = expect_ints::<1>(&tokens[1..], line_no)?;
                k = Some(kv);
            }
            "m" => {
                let [mv] = expect_ints::<1>(&tokens[1..], line_no)?;
                m = Some(mv);
            }
            "e" => {
                let [l, r, s] = expect_ints::<3>(&tokens[1..], line_no)?;
                edges.push((Edge::new(l, r), s));
            }
            other => return Err(parse_err(line_no, format!("unknown record `{other}`"))),
        }
    }

    if !magic_seen {
        return Err(parse_err(0, "empty file: missing `DMR v1` magic"));
    }
    let (n_left, n_right) = n.ok_or_else(|| parse_err(0, "missing `n` line"))?;
    let k = k.ok_or_else(|| parse_err(0, "missing `k` line"))?;
    let m = m.ok_or_else(|| parse_err(0, "missing `m` line"))?;
    if edges.len() != m {
        return Err(parse_err(0, format!("declared {} edges, found {}", m, edges.len())));
    }

    let mut graph = BipartiteGraph::new(n_left, n_right);
    for &(e, _) in &edges {
        graph
            .add_edge(e)
            .map_err(|err| parse_err(0, format!("bad edge ({}, {}): {err}", e.left, e.right)))?;
    }
    let assignment: Vec<usize> = edges.iter().map(|&(_, s)| s).collect();
    let partition = EdgePartition::new(&graph, k, assignment)
        .map_err(|err| parse_err(0, format!("bad partition: {err}")))?;
    Ok(InstanceFile { graph, partition, hard })
}

pub fn read_instance_file<P: AsRef<Path>>(path: P) -> Result<InstanceFile, FormatError> {
    let f = std::fs::File::open(path)?;
    read_instance(std::io::BufReader::new(f))
}

fn expect_ints<const N: usize>(tokens: &[&str], line: usize) -> Result<[usize; N], FormatError> {
    if tokens.len() != N {
        return Err(parse_err(line, format!("expected {N} fields, got {}", tokens.len())));
    }
    let mut out = [0usize; N];
    for (slot, tok) in out.iter_mut().zip(tokens) {
        *slot = tok
            .parse()
            .map_err(|_| parse_err(line, format!("`{tok}` is not a non-negative integer")))?;
    }
    Ok(out)
}

fn parse_sidecar(rest: &str, line: usize) -> Result<HardSidecar, FormatError> {
    let mut alpha = None;
    let mut p = None;
    let mut r = None;
    let mut seed = None;
    for pair in rest.split_whitespace() {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("sidecar field `{pair}` is not key=value")))?;
        match key {
            "alpha" => alpha = Some(value.parse().map_err(|_| parse_err(line, "bad alpha"))?),
            "p" => p = Some(value.parse().map_err(|_| parse_err(line, "bad p"))?),
            "r" => r = Some(value.parse().map_err(|_| parse_err(line, "bad r"))?),
            "seed" => seed = Some(value.parse().map_err(|_| parse_err(line, "bad seed"))?),
            other => return Err(parse_err(line, format!("unknown sidecar field `{other}`"))),
        }
    }
    match (alpha, p, r, seed) {
        (Some(alpha), Some(p), Some(r), Some(seed)) => Ok(HardSidecar { alpha, p, r, seed }),
        _ => Err(parse_err(line, "sidecar needs alpha, p, r and seed")),
    }
}
