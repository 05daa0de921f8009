//! Input distributions for the AND/DISJ problems and the hard-instance
//! distribution over bipartite graphs, plus the noisy/important edge
//! classification.
//!
//! Conventions: a "bit" is a `bool` with `true` = 1. `tau(q)` is the
//! Bernoulli law taking value **0 with probability q** and 1 otherwise
//! (note the inversion relative to the usual parameterization).
//!
//! The single-coordinate law `nu` is generated through an auxiliary bit `w`:
//! sample `w ~ tau(p)`; if `w = 0` then `a ~ tau(1/2)`, `b = 0`; if `w = 1`
//! then `a = 0`, `b ~ tau(p)`. The joint law is
//!
//! ```text
//! (0,0) w.p. p(3-2p)/2     (0,1) w.p. (1-p)^2     (1,0) w.p. p/2
//! ```
//!
//! and (1,1) never occurs. `mu` additionally resets `a` to a fresh
//! `tau(1/2)` draw, which makes (1,1) occur with probability
//! `delta = (1-p)^2 / 2`. The k-coordinate versions `nu_k`/`mu_k` apply
//! `nu` coordinate-wise; `mu_k` resets one uniformly chosen coordinate of
//! the `a` vector, so at most one coordinate intersects.

use crate::graph::{BipartiteGraph, Edge, EdgePartition};
use crate::rng;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DistError {
    #[error("n must be even and k must divide n/2 exactly (got n={n}, k={k})")]
    Divisibility { n: usize, k: usize },
    #[error("alpha must lie in (0, 1/2], got {0}")]
    AlphaRange(String),
    #[error("need at least 2 sites, got k={0}")]
    TooFewSites(usize),
    #[error("input vectors are not in the support of the distribution: {0}")]
    OutOfSupport(String),
}

const TAG_Y: u64 = 0x01;
const TAG_X: u64 = 0x02;

/// One draw from `tau(q)`: 0 with probability `q`, else 1.
///
/// Panics if `q` is outside `[0, 1]`.
pub fn sample_tau<R: Rng + ?Sized>(q: f64, rng: &mut R) -> bool {
    assert!((0.0..=1.0).contains(&q), "tau parameter {q} outside [0, 1]");
    !rng.gen_bool(q)
}

/// One (a, b, w) sample from `nu`.
///
/// Panics unless `0 < p <= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AndSample {
    pub a: bool,
    pub b: bool,
    pub w: bool,
    /// Reset coordinate for mu-derived samples (always 0 in the
    /// single-coordinate case); `None` under plain `nu`.
    pub d_reset: Option<usize>,
}

fn assert_p(p: f64) {
    assert!(p > 0.0 && p <= 0.5, "distribution parameter p={p} outside (0, 1/2]");
}

pub fn sample_nu<R: Rng + ?Sized>(p: f64, rng: &mut R) -> AndSample {
    assert_p(p);
    let w = sample_tau(p, rng);
    let (a, b) = if !w {
        (sample_tau(0.5, rng), false)
    } else {
        (false, sample_tau(p, rng))
    };
    AndSample { a, b, w, d_reset: None }
}

/// `nu` followed by a fresh `tau(1/2)` reset of `a`; Pr[(1,1)] = (1-p)^2/2.
pub fn sample_mu<R: Rng + ?Sized>(p: f64, rng: &mut R) -> AndSample {
    let mut s = sample_nu(p, rng);
    s.a = sample_tau(0.5, rng);
    s.d_reset = Some(0);
    s
}

/// Probability that (a, b) = (1, 1) under `mu`.
pub fn delta(p: f64) -> f64 {
    (1.0 - p) * (1.0 - p) / 2.0
}

/// OR of coordinate-wise ANDs: 1 iff some `l` has `x[l] = y[l] = 1`.
///
/// Panics on length mismatch.
pub fn disj_eval(x: &[bool], y: &[bool]) -> bool {
    assert_eq!(x.len(), y.len(), "DISJ inputs must have equal length");
    x.iter().zip(y).any(|(&a, &b)| a && b)
}

/// A k-coordinate input pair with its auxiliary vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjInput {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
    pub w: Vec<bool>,
    /// Reset coordinate; `Some` only for mu_k samples.
    pub d: Option<usize>,
}

pub fn sample_nu_k<R: Rng + ?Sized>(k: usize, p: f64, rng: &mut R) -> DisjInput {
    assert!(k >= 1, "k must be >= 1");
    assert_p(p);
    let mut x = Vec::with_capacity(k);
    let mut y = Vec::with_capacity(k);
    let mut w = Vec::with_capacity(k);
    for _ in 0..k {
        let s = sample_nu(p, rng);
        x.push(s.a);
        y.push(s.b);
        w.push(s.w);
    }
    DisjInput { x, y, w, d: None }
}

/// `nu_k` followed by resetting `x[d]` (d uniform) to `tau(1/2)`.
/// At most one coordinate can intersect; Pr[DISJ = 1] = delta(p).
pub fn sample_mu_k<R: Rng + ?Sized>(k: usize, p: f64, rng: &mut R) -> DisjInput {
    let mut s = sample_nu_k(k, p, rng);
    let d = rng.gen_range(0..k);
    s.x[d] = sample_tau(0.5, rng);
    s.d = Some(d);
    s
}

/// Samples `a` from the conditional law `mu_k(a | b = y)`.
///
/// Realization (Bayes on the `nu` construction, validated against the
/// direct joint sampler): coordinates with `y[l] = 1` force `a[l] = 0`;
/// coordinates with `y[l] = 0` have `w[l] = 0` with probability `1/(2-p)`,
/// in which case `a[l] ~ tau(1/2)`, else `a[l] = 0`. Finally a uniform
/// coordinate `d` is reset to `tau(1/2)`.
pub fn sample_mu_k_conditional_a<R: Rng + ?Sized>(y: &[bool], p: f64, rng: &mut R) -> Vec<bool> {
    assert_p(p);
    let k = y.len();
    assert!(k >= 1, "y must be non-empty");
    let mut a = Vec::with_capacity(k);
    for &yl in y {
        if yl {
            a.push(false);
        } else if rng.gen_bool(1.0 / (2.0 - p)) {
            a.push(sample_tau(0.5, rng));
        } else {
            a.push(false);
        }
    }
    let d = rng.gen_range(0..k);
    a[d] = sample_tau(0.5, rng);
    a
}

/// Samples the `b`-marginal of `mu_k` (equal to the `nu_k` b-marginal):
/// coordinate-wise `w ~ tau(p)`, then `b = 0` if `w = 0`, else `b ~ tau(p)`.
pub fn sample_y_marginal<R: Rng + ?Sized>(k: usize, p: f64, rng: &mut R) -> Vec<bool> {
    assert_p(p);
    (0..k)
        .map(|_| {
            let w = sample_tau(p, rng);
            if !w {
                false
            } else {
                sample_tau(p, rng)
            }
        })
        .collect()
}

/// `nu`'s conditional of `a` given the auxiliary bit vector `w`:
/// `a[l] ~ tau(1/2)` where `w[l] = 0`, else `a[l] = 0`.
pub fn sample_nu_a_given_w<R: Rng + ?Sized>(w: &[bool], rng: &mut R) -> Vec<bool> {
    w.iter().map(|&wl| if !wl { sample_tau(0.5, rng) } else { false }).collect()
}

/// `nu`'s conditional of `b` given `w`: `b[l] = 0` where `w[l] = 0`, else
/// `b[l] ~ tau(p)`.
pub fn sample_nu_b_given_w<R: Rng + ?Sized>(w: &[bool], p: f64, rng: &mut R) -> Vec<bool> {
    assert_p(p);
    w.iter().map(|&wl| if wl { sample_tau(p, rng) } else { false }).collect()
}

// ---------------------------------------------------------------------------
// Exact probability mass functions (enumeration oracles for the statistical
// tests; also handy for examples).

/// Exact nu probability of a single coordinate pair.
pub fn nu_pmf(a: bool, b: bool, p: f64) -> f64 {
    match (a, b) {
        (false, false) => p * (3.0 - 2.0 * p) / 2.0,
        (false, true) => (1.0 - p) * (1.0 - p),
        (true, false) => p / 2.0,
        (true, true) => 0.0,
    }
}

/// Exact b-marginal of nu (and of mu / mu_k per coordinate).
pub fn nu_b_pmf(b: bool, p: f64) -> f64 {
    if b {
        (1.0 - p) * (1.0 - p)
    } else {
        p * (2.0 - p)
    }
}

/// Exact mu probability: the reset makes `a` a fresh fair bit.
pub fn mu_pmf(a: bool, b: bool, p: f64) -> f64 {
    let _ = a;
    0.5 * nu_b_pmf(b, p)
}

/// Exact mu_k probability of a joint (x, y) pair, by summing over the
/// uniformly chosen reset coordinate.
pub fn mu_k_pmf(x: &[bool], y: &[bool], p: f64) -> f64 {
    assert_eq!(x.len(), y.len());
    let k = x.len();
    let mut total = 0.0;
    for d in 0..k {
        let mut term = 0.5 * nu_b_pmf(y[d], p);
        for l in 0..k {
            if l != d {
                term *= nu_pmf(x[l], y[l], p);
            }
        }
        total += term;
    }
    total / k as f64
}

// ---------------------------------------------------------------------------
// Hard instances.

/// The hard input distribution over bipartite graphs: `r = n/(2k)`
/// independent blocks, each a k-by-k random bipartite graph whose rows are
/// drawn from `mu_k` conditioned on a shared per-block `y` vector.
#[derive(Debug, Clone)]
pub struct HardInstance {
    n: usize,
    k: usize,
    r: usize,
    alpha: f64,
    p: f64,
    /// Flat bit tensor, indexed `[block j][site i][coordinate l]`.
    x: Vec<bool>,
    /// Flat bit matrix, indexed `[block j][coordinate l]`.
    y: Vec<bool>,
}

impl HardInstance {
    /// Assembles an instance from raw tensors, validating shape and the
    /// at-most-one-intersection invariant of every row.
    pub fn from_parts(
        n: usize,
        k: usize,
        alpha: f64,
        x: Vec<bool>,
        y: Vec<bool>,
    ) -> Result<Self, DistError> {
        check_params(n, k, alpha)?;
        let r = n / (2 * k);
        if x.len() != r * k * k || y.len() != r * k {
            return Err(DistError::OutOfSupport(format!(
                "tensor shape mismatch: |x|={} (want {}), |y|={} (want {})",
                x.len(),
                r * k * k,
                y.len(),
                r * k
            )));
        }
        let inst = HardInstance { n, k, r, alpha, p: alpha / 20.0, x, y };
        for j in 0..r {
            for i in 0..k {
                let hits = (0..k).filter(|&l| inst.x(j, i, l) && inst.y(j, l)).count();
                if hits > 1 {
                    return Err(DistError::OutOfSupport(format!(
                        "row (block {j}, site {i}) intersects y in {hits} coordinates"
                    )));
                }
            }
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of blocks, `r = n / (2k)`.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Noise parameter, fixed to `alpha / 20`.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Bit `X[j][i][l]`: whether left vertex (j, i) connects to right
    /// vertex (j, l).
    pub fn x(&self, j: usize, i: usize, l: usize) -> bool {
        self.x[(j * self.k + i) * self.k + l]
    }

    /// Bit `Y[j][l]`.
    pub fn y(&self, j: usize, l: usize) -> bool {
        self.y[j * self.k + l]
    }

    pub fn x_row(&self, j: usize, i: usize) -> &[bool] {
        let start = (j * self.k + i) * self.k;
        &self.x[start..start + self.k]
    }

    pub fn y_row(&self, j: usize) -> &[bool] {
        &self.y[j * self.k..(j + 1) * self.k]
    }

    /// Global left-vertex index of row (j, i).
    pub fn left_index(&self, j: usize, i: usize) -> usize {
        j * self.k + i
    }

    /// Global right-vertex index of coordinate (j, l).
    pub fn right_index(&self, j: usize, l: usize) -> usize {
        j * self.k + l
    }
}

pub(crate) fn check_params(n: usize, k: usize, alpha: f64) -> Result<(), DistError> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(DistError::AlphaRange(format!("{alpha}")));
    }
    if k < 2 {
        return Err(DistError::TooFewSites(k));
    }
    if n == 0 || !n.is_multiple_of(2) || !(n / 2).is_multiple_of(k) {
        return Err(DistError::Divisibility { n, k });
    }
    Ok(())
}

/// Draws a hard instance: `Y^j` i.i.d. from the mu_k b-marginal and each
/// row `X^{j,i}` i.i.d. from `mu_k(a | Y^j)`, with `p = alpha/20`.
///
/// Requires `n` even, `k >= 2`, `k` dividing `n/2` exactly (no rounding),
/// and `alpha` in (0, 1/2]. Block `j` and row `(j, i)` draw from streams
/// derived from `master_seed`, so instances are reproducible and rows may
/// be resampled independently.
pub fn build_hard_instance(
    n: usize,
    k: usize,
    alpha: f64,
    master_seed: u64,
) -> Result<HardInstance, DistError> {
    check_params(n, k, alpha)?;
    let r = n / (2 * k);
    let p = alpha / 20.0;

    let mut y = Vec::with_capacity(r * k);
    for j in 0..r {
        let mut yrng = rng::stream(master_seed, &[TAG_Y, j as u64]);
        y.extend(sample_y_marginal(k, p, &mut yrng));
    }

    let mut x = Vec::with_capacity(r * k * k);
    for j in 0..r {
        let yj = &y[j * k..(j + 1) * k];
        for i in 0..k {
            let mut xrng = rng::stream(master_seed, &[TAG_X, j as u64, i as u64]);
            x.extend(sample_mu_k_conditional_a(yj, p, &mut xrng));
        }
    }

    HardInstance::from_parts(n, k, alpha, x, y)
}

/// Materializes the instance as a bipartite graph plus its left-vertex
/// partition: edge `(u^{j,i}, v^{j,l})` present iff `X[j][i][l] = 1`, all
/// edges of left vertex (j, i) assigned to site `i`.
pub fn instance_to_graph(inst: &HardInstance) -> (BipartiteGraph, EdgePartition) {
    let half = inst.r * inst.k;
    let mut graph = BipartiteGraph::new(half, half);
    for j in 0..inst.r {
        for i in 0..inst.k {
            for l in 0..inst.k {
                if inst.x(j, i, l) {
                    graph
                        .add_edge(Edge::new(inst.left_index(j, i), inst.right_index(j, l)))
                        .expect("tensor indices are in range and unique");
                }
            }
        }
    }
    // left vertex j*k + i belongs to site i = index mod k
    let partition = EdgePartition::round_robin_left(&graph, inst.k)
        .expect("round-robin assignment is always valid");
    (graph, partition)
}

/// Left/right vertex classes and the noisy/important edge split.
#[derive(Debug, Clone)]
pub struct EdgeClassification {
    /// Left vertices whose row does not intersect the block's y vector.
    pub u0: Vec<usize>,
    /// Left vertices whose row intersects (exactly one coordinate).
    pub u1: Vec<usize>,
    /// Right vertices with y bit 0.
    pub v0: Vec<usize>,
    /// Right vertices with y bit 1.
    pub v1: Vec<usize>,
    /// The unique intersecting edge of each u1 row.
    pub important_edges: Vec<Edge>,
    /// Edges incident to v0.
    pub noisy_edges: Vec<Edge>,
}

/// Classifies vertices and edges of a hard instance.
pub fn classify_edges(inst: &HardInstance) -> EdgeClassification {
    let mut c = EdgeClassification {
        u0: Vec::new(),
        u1: Vec::new(),
        v0: Vec::new(),
        v1: Vec::new(),
        important_edges: Vec::new(),
        noisy_edges: Vec::new(),
    };
    for j in 0..inst.r {
        for l in 0..inst.k {
            if inst.y(j, l) {
                c.v1.push(inst.right_index(j, l));
            } else {
                c.v0.push(inst.right_index(j, l));
            }
        }
        for i in 0..inst.k {
            let u = inst.left_index(j, i);
            let mut hit = None;
            for l in 0..inst.k {
                if inst.x(j, i, l) {
                    if inst.y(j, l) {
                        debug_assert!(hit.is_none(), "row intersects more than once");
                        hit = Some(l);
                    } else {
                        c.noisy_edges.push(Edge::new(u, inst.right_index(j, l)));
                    }
                }
            }
            match hit {
                Some(l) => {
                    c.u1.push(u);
                    c.important_edges.push(Edge::new(u, inst.right_index(j, l)));
                }
                None => c.u0.push(u),
            }
        }
    }
    c
}
