//! Executable set-disjointness machinery: the Alice/Bob input reduction
//! that turns one DISJ instance into a hard-distribution matching input,
//! and the extraction protocol that reads a DISJ answer back out of any
//! matching protocol's output.
//!
//! Alice simulates site `I`; Bob simulates every other site and the
//! coordinator. Alice's tensor column depends only on (`a`, public coins,
//! her private coins); everything else depends only on (`b`, public coins,
//! Bob's private coins). Consequently the only "real" communication is the
//! traffic on channel `I`.

use crate::dist::{
    check_params, disj_eval, sample_mu_k_conditional_a, sample_nu_a_given_w,
    sample_nu_b_given_w, sample_tau, instance_to_graph, DistError, HardInstance,
};
use crate::graph::Edge;
use crate::rng;
use crate::sim::{DmrProtocol, ProtocolRun, SimError};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

const TAG_PUBLIC: u64 = 0x20;
const TAG_ALICE: u64 = 0x21;
const TAG_BOB: u64 = 0x22;

/// Public coins of one reduction: the embedded position (I, J) and the
/// per-block auxiliary vectors for the non-embedded blocks.
#[derive(Debug, Clone)]
pub struct ReductionContext {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub alpha: f64,
    pub p: f64,
    /// Site index I whose channel Alice plays.
    pub site: usize,
    /// Block index J carrying the real (a, b) pair.
    pub block: usize,
    pub public_seed: u64,
    pub alice_seed: u64,
    pub bob_seed: u64,
    /// Public `W^j ~ tau(p)^k` for every block `j != J` (`None` at `J`).
    pub w_blocks: Vec<Option<Vec<bool>>>,
    /// Auxiliary vector used when the caller sampled (a, b) from mu_k;
    /// recorded for audit, unused by the reduction itself.
    pub w_ab: Option<Vec<bool>>,
}

impl ReductionContext {
    /// Draws (I, J, W-blocks) from the public stream.
    pub fn sample(
        n: usize,
        k: usize,
        alpha: f64,
        public_seed: u64,
        alice_seed: u64,
        bob_seed: u64,
    ) -> Result<Self, DistError> {
        check_params(n, k, alpha)?;
        let r = n / (2 * k);
        let p = alpha / 20.0;
        let mut public = rng::stream(public_seed, &[TAG_PUBLIC]);
        let site = public.gen_range(0..k);
        let block = public.gen_range(0..r);
        let w_blocks = (0..r)
            .map(|j| {
                if j == block {
                    None
                } else {
                    Some((0..k).map(|_| sample_tau(p, &mut public)).collect())
                }
            })
            .collect();
        Ok(ReductionContext {
            n,
            k,
            r,
            alpha,
            p,
            site,
            block,
            public_seed,
            alice_seed,
            bob_seed,
            w_blocks,
            w_ab: None,
        })
    }
}

/// Builds the matching input embedding `(a, b)` at position (J, I).
///
/// Row (J, I) is exactly `a` and the block-J auxiliary vector is exactly
/// `b`; Bob fills block J's other rows from the conditional sampler. For
/// every other block, Alice derives her row from the public `W^j` plus a
/// private coordinate reset, and Bob derives the `y` vector and the
/// remaining rows. When `(a, b)` is mu_k-distributed the output follows
/// the hard-instance law.
pub fn reduce_inputs(
    a: &[bool],
    b: &[bool],
    ctx: &ReductionContext,
) -> Result<HardInstance, DistError> {
    let (n, k, r, p) = (ctx.n, ctx.k, ctx.r, ctx.p);
    if a.len() != k || b.len() != k {
        return Err(DistError::OutOfSupport(format!(
            "inputs must have length k={k}, got |a|={}, |b|={}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().zip(b).filter(|&(&x, &y)| x && y).count() > 1 {
        return Err(DistError::OutOfSupport(
            "(a, b) intersects more than once, outside the mu_k support".into(),
        ));
    }

    let mut alice = rng::stream(ctx.alice_seed, &[TAG_ALICE]);
    let mut bob = rng::stream(ctx.bob_seed, &[TAG_BOB]);

    let mut x = vec![false; r * k * k];
    let mut y = vec![false; r * k];
    let put_row = |x: &mut Vec<bool>, j: usize, i: usize, row: &[bool]| {
        x[(j * k + i) * k..(j * k + i + 1) * k].copy_from_slice(row);
    };

    for j in 0..r {
        if j == ctx.block {
            y[j * k..(j + 1) * k].copy_from_slice(b);
            put_row(&mut x, j, ctx.site, a);
            for i in (0..k).filter(|&i| i != ctx.site) {
                let row = sample_mu_k_conditional_a(b, p, &mut bob);
                put_row(&mut x, j, i, &row);
            }
        } else {
            let w = ctx.w_blocks[j].as_ref().expect("non-embedded block has public W");
            // Alice: nu-conditional row plus the mu reset
            let mut row = sample_nu_a_given_w(w, &mut alice);
            let d = alice.gen_range(0..k);
            row[d] = sample_tau(0.5, &mut alice);
            put_row(&mut x, j, ctx.site, &row);
            // Bob: y vector and the remaining rows
            let yj = sample_nu_b_given_w(w, p, &mut bob);
            y[j * k..(j + 1) * k].copy_from_slice(&yj);
            for i in (0..k).filter(|&i| i != ctx.site) {
                let row = sample_mu_k_conditional_a(&yj, p, &mut bob);
                put_row(&mut x, j, i, &row);
            }
        }
    }

    HardInstance::from_parts(n, k, ctx.alpha, x, y)
}

/// Outcome of one extraction: the DISJ answer plus the protocol run it was
/// read from.
#[derive(Debug)]
pub struct ReductionOutcome {
    pub answer: bool,
    pub run: ProtocolRun,
}

/// Runs a matching protocol on the reduced input and extracts the DISJ
/// answer: 1 iff the output matching contains an edge (u^{J,I}, v^{J,l})
/// with `b[l] = 1`.
///
/// When `disj(a, b) = 0` the answer is 0 with certainty: any matched edge
/// out of row (J, I) exists only where `a[l] = 1`, which forces `b[l] = 0`.
pub fn protocol_p(
    a: &[bool],
    b: &[bool],
    ctx: &ReductionContext,
    protocol: &dyn DmrProtocol,
    protocol_seed: u64,
) -> Result<ReductionOutcome, ReductionError> {
    let inst = reduce_inputs(a, b, ctx)?;
    let (graph, partition) = instance_to_graph(&inst);
    let run = protocol.execute(&graph, &partition, protocol_seed)?;
    let left = inst.left_index(ctx.block, ctx.site);
    let answer = (0..ctx.k).any(|l| {
        b[l] && run.output.contains(Edge::new(left, inst.right_index(ctx.block, l)))
    });
    Ok(ReductionOutcome { answer, run })
}

/// Bits exchanged between Alice and Bob: payload on channel `site` only.
/// Everything on other channels is Bob simulating against himself.
pub fn alice_bob_cost(run: &ProtocolRun, site: usize) -> u64 {
    run.ledger.channel_payload_bits(site)
}

/// All seeds of one reduction trial, derived from a master seed and a
/// trial index.
#[derive(Debug, Clone, Copy)]
pub struct ReductionSeeds {
    pub public_seed: u64,
    pub alice_seed: u64,
    pub bob_seed: u64,
    pub protocol_seed: u64,
}

impl ReductionSeeds {
    pub fn derive(master: u64, trial: u64) -> Self {
        ReductionSeeds {
            public_seed: rng::derive(master, &[0x30, trial]),
            alice_seed: rng::derive(master, &[0x31, trial]),
            bob_seed: rng::derive(master, &[0x32, trial]),
            protocol_seed: rng::derive(master, &[0x33, trial]),
        }
    }
}

/// One full reduction trial: sample `(a, b) ~ mu_k`, reduce, run the
/// protocol, extract the answer.
#[derive(Debug)]
pub struct TrialReport {
    pub disj: bool,
    pub answer: bool,
    pub alice_bob_bits: u64,
    pub total_payload_bits: u64,
}

pub fn run_trial(
    n: usize,
    k: usize,
    alpha: f64,
    protocol: &dyn DmrProtocol,
    master_seed: u64,
    trial: u64,
) -> Result<TrialReport, ReductionError> {
    check_params(n, k, alpha)?;
    let p = alpha / 20.0;
    let seeds = ReductionSeeds::derive(master_seed, trial);
    let mut ab_rng = rng::stream(master_seed, &[0x34, trial]);
    let sample = crate::dist::sample_mu_k(k, p, &mut ab_rng);
    let mut ctx = ReductionContext::sample(
        n,
        k,
        alpha,
        seeds.public_seed,
        seeds.alice_seed,
        seeds.bob_seed,
    )?;
    ctx.w_ab = Some(sample.w.clone());
    let disj = disj_eval(&sample.x, &sample.y);
    let out = protocol_p(&sample.x, &sample.y, &ctx, protocol, seeds.protocol_seed)?;
    Ok(TrialReport {
        disj,
        answer: out.answer,
        alice_bob_bits: alice_bob_cost(&out.run, ctx.site),
        total_payload_bits: out.run.ledger.total_payload_bits(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{build_hard_instance, sample_mu_k};
    use crate::graph::{BipartiteGraph, EdgePartition, Matching};
    use crate::sim::{Net, ProtocolSpec};
    use crate::stats::{binomial_sigma, chi2_sf, chi2_two_sample};

    fn ctx_for(n: usize, k: usize, alpha: f64, t: u64) -> (ReductionContext, ReductionSeeds) {
        let seeds = ReductionSeeds::derive(0xabcdef, t);
        let ctx = ReductionContext::sample(
            n, k, alpha, seeds.public_seed, seeds.alice_seed, seeds.bob_seed,
        )
        .unwrap();
        (ctx, seeds)
    }

    #[test]
    fn embedded_row_and_y_are_verbatim() {
        let (k, n, alpha) = (4, 48, 0.5);
        for t in 0..20 {
            let (ctx, _) = ctx_for(n, k, alpha, t);
            let mut ab = rng::stream(5, &[t]);
            let s = sample_mu_k(k, alpha / 20.0, &mut ab);
            let inst = reduce_inputs(&s.x, &s.y, &ctx).unwrap();
            assert_eq!(inst.x_row(ctx.block, ctx.site), &s.x[..]);
            assert_eq!(inst.y_row(ctx.block), &s.y[..]);
        }
    }

    #[test]
    fn bobs_tensor_ignores_alice_seed() {
        let (k, n, alpha) = (4, 32, 0.5);
        let seeds = ReductionSeeds::derive(77, 0);
        let a = vec![true, false, false, false];
        let b = vec![false, true, false, true];
        let build = |alice_seed: u64| {
            let ctx = ReductionContext::sample(n, k, alpha, seeds.public_seed, alice_seed, seeds.bob_seed)
                .unwrap();
            (reduce_inputs(&a, &b, &ctx).unwrap(), ctx)
        };
        let (inst1, ctx) = build(seeds.alice_seed);
        let (inst2, _) = build(seeds.alice_seed ^ 0xdeadbeef);
        for j in 0..ctx.r {
            assert_eq!(inst1.y_row(j), inst2.y_row(j), "y must come from Bob only");
            for i in (0..k).filter(|&i| i != ctx.site) {
                assert_eq!(inst1.x_row(j, i), inst2.x_row(j, i), "column {i} is Bob's");
            }
        }
        // and Alice's own column generally does change
        let alice_differs = (0..ctx.r)
            .any(|j| inst1.x_row(j, ctx.site) != inst2.x_row(j, ctx.site));
        assert!(alice_differs || ctx.r == 1);
    }

    #[test]
    fn rejects_out_of_support_inputs() {
        let (ctx, _) = ctx_for(16, 2, 0.5, 0);
        assert!(reduce_inputs(&[true, true], &[true, true], &ctx).is_err());
        assert!(reduce_inputs(&[true], &[true, false], &ctx).is_err());
    }

    /// Distributional equivalence: with (a, b) ~ mu_k the reduced instance
    /// law matches the direct hard-instance sampler, chi-square over all
    /// 2^(rk*k + rk) = 4096 outcomes at k = 2, r = 2 (low-mass cells pooled).
    #[test]
    fn reduced_law_matches_direct_law() {
        let (n, k, r, alpha) = (8usize, 2usize, 2usize, 0.5);
        let p = alpha / 20.0;
        let trials = 120_000u64;
        let cells = 1usize << (r * k * k + r * k);
        let encode = |inst: &HardInstance| {
            let mut code = 0usize;
            let mut bit = 0;
            for j in 0..r {
                for i in 0..k {
                    for l in 0..k {
                        code |= (inst.x(j, i, l) as usize) << bit;
                        bit += 1;
                    }
                }
            }
            for j in 0..r {
                for l in 0..k {
                    code |= (inst.y(j, l) as usize) << bit;
                    bit += 1;
                }
            }
            code
        };

        let mut reduced = vec![0u64; cells];
        for t in 0..trials {
            let (ctx, _) = ctx_for(n, k, alpha, t);
            let mut ab = rng::stream(0x5151, &[t]);
            let s = sample_mu_k(k, p, &mut ab);
            let inst = reduce_inputs(&s.x, &s.y, &ctx).unwrap();
            reduced[encode(&inst)] += 1;
        }

        let mut direct = vec![0u64; cells];
        for t in 0..trials {
            let inst = build_hard_instance(n, k, alpha, rng::derive(0x7272, &[t])).unwrap();
            direct[encode(&inst)] += 1;
        }

        let (stat, df) = chi2_two_sample(&reduced, &direct, 5.0);
        let sf = chi2_sf(stat, df);
        assert!(
            sf > 0.01,
            "reduced law differs from direct law: stat={stat:.1} df={df} sf={sf:.4}"
        );
    }

    struct EmptyProtocol;

    impl DmrProtocol for EmptyProtocol {
        fn name(&self) -> String {
            "empty".into()
        }

        fn execute(
            &self,
            graph: &BipartiteGraph,
            partition: &EdgePartition,
            seed: u64,
        ) -> Result<ProtocolRun, SimError> {
            let net = Net::new(partition.k(), graph.n_total());
            Ok(net.finish(Matching::new(), seed))
        }
    }

    #[test]
    fn empty_protocol_never_answers_one() {
        let (n, k, alpha) = (32, 4, 0.5);
        for t in 0..50 {
            let (ctx, seeds) = ctx_for(n, k, alpha, t);
            let mut ab = rng::stream(0x99, &[t]);
            let s = sample_mu_k(k, alpha / 20.0, &mut ab);
            let out = protocol_p(&s.x, &s.y, &ctx, &EmptyProtocol, seeds.protocol_seed).unwrap();
            assert!(!out.answer);
            assert_eq!(alice_bob_cost(&out.run, ctx.site), 0);
        }
    }

    #[test]
    fn one_sided_error_is_exact_for_all_protocols() {
        let (n, k, alpha) = (64, 8, 0.125);
        let protocols: [&dyn DmrProtocol; 3] = [
            &ProtocolSpec::Greedy,
            &ProtocolSpec::TwoStep { alpha },
            &ProtocolSpec::Luby,
        ];
        for (pi, protocol) in protocols.iter().enumerate() {
            let mut disj0 = 0;
            for t in 0..200u64 {
                let report =
                    run_trial(n, k, alpha, *protocol, 0x600d + pi as u64, t).unwrap();
                if !report.disj {
                    disj0 += 1;
                    assert!(!report.answer, "false positive from {}", protocol.name());
                }
            }
            assert!(disj0 > 50, "not enough disj=0 trials to be meaningful");
        }
    }

    #[test]
    fn hit_rate_clears_threshold_at_small_scale() {
        let (n, k, alpha) = (256, 16, 0.125);
        let protocol = ProtocolSpec::TwoStep { alpha };
        let mut hits = 0u64;
        let mut disj1 = 0u64;
        let mut t = 0u64;
        while disj1 < 300 {
            let report = run_trial(n, k, alpha, &protocol, 0xcafe, t).unwrap();
            t += 1;
            if report.disj {
                disj1 += 1;
                if report.answer {
                    hits += 1;
                }
            }
        }
        let rate = hits as f64 / disj1 as f64;
        let threshold = alpha / 10.0;
        let sigma = binomial_sigma(threshold, disj1);
        assert!(
            rate >= threshold - 3.0 * sigma,
            "hit rate {rate:.4} below alpha/10 = {threshold:.4} - 3 sigma"
        );
    }

    /// Symmetry: the hit rate is statistically invariant to re-sampling
    /// the embedded position (fresh public seeds).
    #[test]
    fn hit_rate_is_position_symmetric() {
        let (n, k, alpha) = (128, 8, 0.125);
        let protocol = ProtocolSpec::TwoStep { alpha };
        let mut rates = Vec::new();
        let mut counts = Vec::new();
        for batch in 0..2u64 {
            let mut hits = 0u64;
            let mut disj1 = 0u64;
            let mut t = 0u64;
            while disj1 < 400 {
                let report =
                    run_trial(n, k, alpha, &protocol, 0xfade + batch * 0x1000, t).unwrap();
                t += 1;
                if report.disj {
                    disj1 += 1;
                    if report.answer {
                        hits += 1;
                    }
                }
            }
            rates.push(hits as f64 / disj1 as f64);
            counts.push(disj1);
        }
        let pooled = (rates[0] + rates[1]) / 2.0;
        let se = (pooled * (1.0 - pooled) * (1.0 / counts[0] as f64 + 1.0 / counts[1] as f64))
            .sqrt();
        assert!(
            (rates[0] - rates[1]).abs() <= 4.0 * se.max(1e-6),
            "batch hit rates {rates:?} differ beyond noise"
        );
    }

    #[test]
    fn alice_bob_cost_is_channel_subset() {
        let (n, k, alpha) = (64, 8, 0.125);
        for t in 0..10 {
            let report = run_trial(n, k, alpha, &ProtocolSpec::Greedy, 0xbeef, t).unwrap();
            assert!(report.alice_bob_bits <= report.total_payload_bits);
        }
    }

    #[test]
    fn alice_bob_cost_hand_count() {
        // sequential greedy, channel 0: the empty request down plus the
        // site's extended matching up
        use crate::graph::Edge;
        let graph = BipartiteGraph::from_edges(4, 4, [Edge::new(0, 0), Edge::new(1, 1)]).unwrap();
        let partition = EdgePartition::new(&graph, 2, vec![0, 1]).unwrap();
        let run = crate::protocols::sequential_greedy(&graph, &partition, 0);
        // edge = 2 + 2 bits; site 0 sends back one edge
        assert_eq!(alice_bob_cost(&run, 0), 4);
        // site 1 receives that edge and replies with two
        assert_eq!(alice_bob_cost(&run, 1), 4 + 8);
        let empty = crate::protocols::sequential_greedy(
            &BipartiteGraph::new(4, 4),
            &EdgePartition::new(&BipartiteGraph::new(4, 4), 2, vec![]).unwrap(),
            0,
        );
        assert_eq!(alice_bob_cost(&empty, 0), 0);
    }
}
