//! The three matching protocols, implemented against the simulator
//! contract: sequential greedy, the two-step approximation, and the
//! distributed variant of Luby's algorithm.

use crate::graph::{
    greedy_maximal_matching, maximum_matching, BipartiteGraph, Edge, EdgePartition, Matching,
};
use crate::rng;
use crate::sim::{edge_bits, bits_for, MessageKind, Net, ProtocolRun, SimError, PRIORITY_BITS};
use rand::Rng;

const TAG_COORDINATOR: u64 = 0x10;
const TAG_SITE: u64 = 0x11;

/// Parameters of the two-step protocol. `q = 8 * alpha` only exists on the
/// non-delegating branch (`alpha <= 1/8`), which keeps it a probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStepParams {
    pub alpha: f64,
}

impl TwoStepParams {
    pub fn new(alpha: f64) -> Result<Self, SimError> {
        if !(alpha > 0.0 && alpha <= 0.5) {
            return Err(SimError::InvalidParameter(format!(
                "alpha must lie in (0, 1/2], got {alpha}"
            )));
        }
        Ok(TwoStepParams { alpha })
    }

    /// True when the protocol simply delegates to sequential greedy.
    pub fn delegates(&self) -> bool {
        self.alpha > 0.125
    }

    /// Site selection probability for step 2.
    pub fn q(&self) -> f64 {
        debug_assert!(!self.delegates());
        8.0 * self.alpha
    }
}

/// Per-round edge priority: a fresh 64-bit key, with the edge id breaking
/// ties so the order is total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LubyPriority {
    pub key: u64,
    pub tiebreak: Edge,
}

/// Sequential greedy maximal matching: sites extend the running matching
/// in index order, relaying it through the coordinator. Output is maximal
/// in the whole graph, hence at least half a maximum matching.
pub fn sequential_greedy(
    graph: &BipartiteGraph,
    partition: &EdgePartition,
    seed: u64,
) -> ProtocolRun {
    let site_edges = partition.site_edge_lists(graph);
    let eb = edge_bits(graph);
    let mut net = Net::new(partition.k(), graph.n_total());
    let mut m = Matching::new();
    for (site, edges) in site_edges.iter().enumerate() {
        net.begin_round();
        net.coordinator_send(site, MessageKind::MatchingDown, m.len() as u64 * eb);
        m = greedy_maximal_matching(edges, &m);
        net.site_send(site, MessageKind::MatchingUp, m.len() as u64 * eb);
    }
    net.finish(m, seed)
}

/// The two-step approximation protocol.
///
/// With `alpha > 1/8` it delegates to [`sequential_greedy`], transcript
/// and all. Otherwise: step 1 collects every site's local maximum matching
/// size, then fetches up to `ceil(alpha * n)` edges of the largest one
/// (lowest site index on ties, first edges in the site's canonical
/// matching order). Step 2 selects each site independently with
/// probability `q = 8 * alpha` and runs the sequential greedy over the
/// selected sites in index order. The output is the larger of the two
/// matchings.
pub fn two_step(
    graph: &BipartiteGraph,
    partition: &EdgePartition,
    alpha: f64,
    seed: u64,
) -> Result<ProtocolRun, SimError> {
    let params = TwoStepParams::new(alpha)?;
    if params.delegates() {
        return Ok(sequential_greedy(graph, partition, seed));
    }

    let k = partition.k();
    let n = graph.n_total();
    let site_edges = partition.site_edge_lists(graph);
    let eb = edge_bits(graph);
    let size_report_bits = bits_for(n + 1);
    let mut net = Net::new(k, n);

    // Step 1: local maximum matching sizes.
    let local_max: Vec<Matching> = site_edges
        .iter()
        .map(|edges| {
            let local = BipartiteGraph::from_edges(graph.n_left(), graph.n_right(), edges.iter().copied())
                .expect("site edges are a subset of the graph");
            maximum_matching(&local)
        })
        .collect();

    net.begin_round();
    for site in 0..k {
        net.coordinator_send(site, MessageKind::SizeQuery, 0);
        net.site_send(site, MessageKind::SizeReport, size_report_bits);
    }
    let best_site = (0..k)
        .max_by(|&a, &b| {
            local_max[a]
                .len()
                .cmp(&local_max[b].len())
                .then(b.cmp(&a)) // prefer the lower index on ties
        })
        .expect("k >= 1");

    let cap = (alpha * n as f64).ceil() as usize;
    let take = local_max[best_site].len().min(cap);
    net.begin_round();
    net.coordinator_send(best_site, MessageKind::FetchRequest, 0);
    net.site_send(best_site, MessageKind::EdgeList, take as u64 * eb);
    let step1 = Matching::try_from_edges(
        local_max[best_site].sorted_edges().into_iter().take(take),
    )
    .expect("subset of a matching is a matching");

    // Step 2: greedy over a random subset of sites.
    let mut coord_rng = rng::stream(seed, &[TAG_COORDINATOR]);
    let q = params.q();
    let selected: Vec<usize> = (0..k).filter(|_| coord_rng.gen_bool(q)).collect();
    let mut step2 = Matching::new();
    for &site in &selected {
        net.begin_round();
        net.coordinator_send(site, MessageKind::MatchingDown, step2.len() as u64 * eb);
        step2 = greedy_maximal_matching(&site_edges[site], &step2);
        net.site_send(site, MessageKind::MatchingUp, step2.len() as u64 * eb);
    }

    let output = if step2.len() > step1.len() { step2 } else { step1 };
    Ok(net.finish(output, seed))
}

/// Distributed Luby: per round, every live site draws fresh priorities for
/// its surviving edges, reports its local priority winners, the
/// coordinator picks the globally winning candidates and broadcasts them,
/// and sites delete every edge touching a winner. A site that runs out of
/// edges says so with a 1-bit notice and halts. The output is a maximal
/// matching; the number of priority rounds is `rounds - 1`.
pub fn luby_distributed(
    graph: &BipartiteGraph,
    partition: &EdgePartition,
    seed: u64,
) -> ProtocolRun {
    luby_with_observer(graph, partition, seed, |_, _, _, _| {})
}

/// Luby core with a per-round observer hook for the invariant tests.
/// The observer sees (round, surviving edges per site, candidates,
/// winners) after each coordinator selection.
pub(crate) fn luby_with_observer<F>(
    graph: &BipartiteGraph,
    partition: &EdgePartition,
    seed: u64,
    mut observer: F,
) -> ProtocolRun
where
    F: FnMut(u32, &[Vec<Edge>], &[(Edge, LubyPriority)], &[Edge]),
{
    let k = partition.k();
    let eb = edge_bits(graph);
    let mut net = Net::new(k, graph.n_total());
    let mut surviving = partition.site_edge_lists(graph);
    let mut halted = vec![false; k];
    let mut site_rngs: Vec<_> = (0..k)
        .map(|i| rng::stream(seed, &[TAG_SITE, i as u64]))
        .collect();
    let mut m = Matching::new();
    let mut last_winners: Option<Vec<Edge>> = None;

    while halted.iter().any(|&h| !h) {
        net.begin_round();
        let snapshot_before = surviving.clone();
        let mut candidates: Vec<(Edge, LubyPriority)> = Vec::new();
        for site in 0..k {
            if halted[site] {
                continue;
            }
            match &last_winners {
                None => net.coordinator_send(site, MessageKind::Start, 0),
                Some(w) => {
                    net.coordinator_send(site, MessageKind::Winners, w.len() as u64 * eb);
                    delete_touching(&mut surviving[site], w);
                }
            }
            if surviving[site].is_empty() {
                net.site_send(site, MessageKind::Done, 1);
                halted[site] = true;
                continue;
            }
            let keys: Vec<u64> = surviving[site]
                .iter()
                .map(|_| site_rngs[site].gen::<u64>())
                .collect();
            let local = local_winners(&surviving[site], &keys);
            net.site_send(
                site,
                MessageKind::Candidates,
                local.len() as u64 * (eb + PRIORITY_BITS),
            );
            candidates.extend(local);
        }
        if candidates.is_empty() {
            // every remaining site halted this round
            let _ = snapshot_before;
            continue;
        }
        let winners = global_winners(&candidates);
        for &e in &winners {
            let inserted = m.try_insert(e);
            debug_assert!(inserted, "coordinator winners must be vertex-disjoint from M");
        }
        observer(net.round(), &snapshot_before, &candidates, &winners);
        last_winners = Some(winners);
    }
    net.finish(m, seed)
}

/// Edges of `edges` whose priority beats every adjacent edge in `edges`.
/// Priorities are unique, so a winner is exactly an edge that attains the
/// priority maximum at both of its endpoints.
pub(crate) fn local_winners(edges: &[Edge], keys: &[u64]) -> Vec<(Edge, LubyPriority)> {
    use std::collections::HashMap;
    let prio = |i: usize| LubyPriority { key: keys[i], tiebreak: edges[i] };
    let mut left_max: HashMap<usize, LubyPriority> = HashMap::new();
    let mut right_max: HashMap<usize, LubyPriority> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        let p = prio(i);
        left_max.entry(e.left).and_modify(|m| *m = (*m).max(p)).or_insert(p);
        right_max.entry(e.right).and_modify(|m| *m = (*m).max(p)).or_insert(p);
    }
    edges
        .iter()
        .enumerate()
        .filter(|(i, e)| {
            let p = prio(*i);
            left_max[&e.left] == p && right_max[&e.right] == p
        })
        .map(|(i, e)| (*e, prio(i)))
        .collect()
}

/// Candidates whose priority beats every adjacent candidate.
pub(crate) fn global_winners(candidates: &[(Edge, LubyPriority)]) -> Vec<Edge> {
    use std::collections::HashMap;
    let mut left_max: HashMap<usize, LubyPriority> = HashMap::new();
    let mut right_max: HashMap<usize, LubyPriority> = HashMap::new();
    for &(e, p) in candidates {
        left_max.entry(e.left).and_modify(|m| *m = (*m).max(p)).or_insert(p);
        right_max.entry(e.right).and_modify(|m| *m = (*m).max(p)).or_insert(p);
    }
    candidates
        .iter()
        .filter(|&&(e, p)| left_max[&e.left] == p && right_max[&e.right] == p)
        .map(|&(e, _)| e)
        .collect()
}

fn delete_touching(edges: &mut Vec<Edge>, winners: &[Edge]) {
    use std::collections::HashSet;
    let lefts: HashSet<usize> = winners.iter().map(|e| e.left).collect();
    let rights: HashSet<usize> = winners.iter().map(|e| e.right).collect();
    edges.retain(|e| !lefts.contains(&e.left) && !rights.contains(&e.right));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_matching, is_maximal, approximation_ratio};
    use crate::sim::{run_protocol, ProtocolSpec};

    fn g(n_left: usize, n_right: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
        BipartiteGraph::from_edges(n_left, n_right, edges.iter().map(|&(l, r)| Edge::new(l, r)))
            .unwrap()
    }

    fn random_instance(seed: u64, n_left: usize, n_right: usize, density: f64, k: usize)
        -> (BipartiteGraph, EdgePartition)
    {
        let mut r = rng::stream(seed, &[0xfeed]);
        let mut graph = BipartiteGraph::new(n_left, n_right);
        for u in 0..n_left {
            for v in 0..n_right {
                if r.gen_bool(density) {
                    graph.add_edge(Edge::new(u, v)).unwrap();
                }
            }
        }
        let partition = EdgePartition::round_robin_left(&graph, k).unwrap();
        (graph, partition)
    }

    #[test]
    fn greedy_single_site_reduces_to_core_op() {
        let graph = g(2, 2, &[(0, 0), (0, 1), (1, 0)]);
        let partition = EdgePartition::new(&graph, 1, vec![0, 0, 0]).unwrap();
        let run = sequential_greedy(&graph, &partition, 0);
        let direct = greedy_maximal_matching(graph.edges(), &Matching::new());
        assert_eq!(run.output.sorted_edges(), direct.sorted_edges());
        assert_eq!(run.ledger.rounds(), 1);
    }

    #[test]
    fn greedy_two_site_hand_trace_and_bit_count() {
        // site 0: (0,0), (1,1); site 1: (2,2), (2,0); 4+4 vertices
        let graph = g(4, 4, &[(0, 0), (1, 1), (2, 2), (2, 0)]);
        let partition = EdgePartition::new(&graph, 2, vec![0, 0, 1, 1]).unwrap();
        let run = sequential_greedy(&graph, &partition, 7);
        assert_eq!(
            run.output.sorted_edges(),
            vec![Edge::new(0, 0), Edge::new(1, 1), Edge::new(2, 2)]
        );
        // edge = 2+2 bits; rounds send 0, 8 | 8, 12 payload bits
        assert_eq!(run.ledger.total_payload_bits(), 28);
        assert_eq!(run.ledger.rounds(), 2);
        assert_eq!(run.ledger.total_messages(), 4);
        // header: site id (1) + kind tag (4) + length prefix (ceil lg 9 = 4)
        assert_eq!(run.ledger.header_bits(), 4 * 9);
        assert_eq!(run.ledger.channel_payload_bits(0), 8);
        assert_eq!(run.ledger.channel_payload_bits(1), 20);
    }

    #[test]
    fn greedy_two_site_extension_trace() {
        // site0 = {(u0,v0)}, site1 = {(u1,v0),(u1,v1)}
        let graph = g(2, 2, &[(0, 0), (1, 0), (1, 1)]);
        let partition = EdgePartition::new(&graph, 2, vec![0, 1, 1]).unwrap();
        let run = sequential_greedy(&graph, &partition, 0);
        assert_eq!(run.output.sorted_edges(), vec![Edge::new(0, 0), Edge::new(1, 1)]);
    }

    #[test]
    fn greedy_payload_bound_and_maximality() {
        for seed in 0..20 {
            let (graph, partition) = random_instance(seed, 24, 24, 0.12, 4);
            let run = sequential_greedy(&graph, &partition, seed);
            assert!(is_matching(&graph, run.output.edges()));
            assert!(is_maximal(&graph, &run.output));
            let bound = 2 * partition.k() as u64 * (graph.n_total() as u64 / 2) * edge_bits(&graph);
            assert!(run.ledger.total_payload_bits() <= bound);
            assert_eq!(run.ledger.rounds(), partition.k() as u32);
        }
    }

    #[test]
    fn empty_graph_runs() {
        let graph = BipartiteGraph::new(4, 4);
        let partition = EdgePartition::new(&graph, 3, vec![]).unwrap();
        let run = sequential_greedy(&graph, &partition, 0);
        assert!(run.output.is_empty());
        assert_eq!(run.ledger.rounds(), 3);

        let run = luby_distributed(&graph, &partition, 0);
        assert!(run.output.is_empty());
        assert_eq!(run.ledger.rounds(), 1);

        let run = two_step(&graph, &partition, 0.1, 0).unwrap();
        assert!(run.output.is_empty());
    }

    #[test]
    fn two_step_delegates_above_one_eighth() {
        let (graph, partition) = random_instance(3, 16, 16, 0.2, 4);
        let greedy = sequential_greedy(&graph, &partition, 42);
        let delegated = two_step(&graph, &partition, 0.5, 42).unwrap();
        assert_eq!(greedy.transcript, delegated.transcript);
        assert_eq!(greedy.ledger, delegated.ledger);
        assert_eq!(greedy.output.sorted_edges(), delegated.output.sorted_edges());
    }

    #[test]
    fn two_step_rejects_bad_alpha() {
        let (graph, partition) = random_instance(3, 8, 8, 0.2, 2);
        assert!(two_step(&graph, &partition, 0.0, 0).is_err());
        assert!(two_step(&graph, &partition, 0.7, 0).is_err());
    }

    #[test]
    fn two_step_step1_fetches_from_perfect_matching_site() {
        // one site holds a perfect matching of size 8; alpha = 1/16
        let n_side = 8;
        let edges: Vec<(usize, usize)> = (0..n_side).map(|i| (i, i)).collect();
        let graph = g(n_side, n_side, &edges);
        let partition = EdgePartition::new(&graph, 4, vec![2; n_side]).unwrap();
        let alpha = 1.0 / 16.0;
        let run = two_step(&graph, &partition, alpha, 11).unwrap();
        let cap = (alpha * graph.n_total() as f64).ceil() as usize; // 1
        assert!(run.output.len() >= cap);
        // step-1 fetch went to site 2
        let fetch: Vec<_> = run
            .transcript
            .iter()
            .filter(|m| m.kind == MessageKind::EdgeList)
            .collect();
        assert_eq!(fetch.len(), 1);
        assert_eq!(fetch[0].site, 2);
        assert_eq!(fetch[0].payload_bits, cap as u64 * edge_bits(&graph));
    }

    #[test]
    fn two_step_size_tie_breaks_to_lowest_site() {
        // sites 1 and 3 both hold a local maximum of size 2
        let graph = g(8, 8, &[(0, 0), (1, 1), (4, 4), (5, 5)]);
        let partition = EdgePartition::new(&graph, 4, vec![1, 1, 3, 3]).unwrap();
        let run = two_step(&graph, &partition, 0.0625, 0).unwrap();
        let fetch: Vec<_> = run
            .transcript
            .iter()
            .filter(|m| m.kind == MessageKind::FetchRequest)
            .collect();
        assert_eq!(fetch.len(), 1);
        assert_eq!(fetch[0].site, 1);
    }

    #[test]
    fn two_step_alpha_eighth_selects_everything() {
        // q = 1: step 2 is the full greedy, so the output is maximal
        let (graph, partition) = random_instance(9, 32, 32, 0.1, 8);
        let run = two_step(&graph, &partition, 0.125, 5).unwrap();
        assert!(is_matching(&graph, run.output.edges()));
        assert!(is_maximal(&graph, &run.output));
        let ratio = approximation_ratio(&run.output, &graph).unwrap();
        assert!(ratio >= 0.5);
    }

    #[test]
    fn two_step_guarantee_on_spread_instance() {
        // 32 loaded sites each hold a perfect matching piece of size m/32 <
        // alpha*m, so step 1 cannot reach alpha*OPT alone and step 2 must.
        let n_side = 512usize;
        let k = 64usize;
        let alpha = 1.0 / 16.0;
        let edges: Vec<(usize, usize)> = (0..n_side).map(|i| (i, i)).collect();
        let graph = g(n_side, n_side, &edges);
        // left vertex u -> site u % 32 (sites 32..64 stay empty)
        let sites: Vec<usize> = (0..n_side).map(|u| u % 32).collect();
        let partition = EdgePartition::by_left_vertex(&graph, k, &sites).unwrap();
        let opt = n_side; // perfect matching
        let need = (alpha * opt as f64).ceil() as usize;
        let trials = 200;
        let mut ok = 0;
        for t in 0..trials {
            let run = two_step(&graph, &partition, alpha, 1000 + t).unwrap();
            if run.output.len() >= need {
                ok += 1;
            }
        }
        // guaranteed rate is 3/4; this instance overshoots it comfortably
        assert!(ok * 4 >= trials * 3, "two-step met alpha*OPT in only {ok}/{trials} trials");
    }

    #[test]
    fn luby_single_edge() {
        let graph = g(1, 1, &[(0, 0)]);
        let partition = EdgePartition::new(&graph, 2, vec![1]).unwrap();
        let run = luby_distributed(&graph, &partition, 3);
        assert_eq!(run.output.sorted_edges(), vec![Edge::new(0, 0)]);
        // 1 priority round + the final all-done round
        assert_eq!(run.ledger.rounds(), 2);
    }

    #[test]
    fn luby_pinned_priority_trace() {
        // path: e1=(0,0) prio 3, e2=(1,0) prio 2, e3=(1,1) prio 1
        let e1 = Edge::new(0, 0);
        let e2 = Edge::new(1, 0);
        let e3 = Edge::new(1, 1);
        // site 0 = {e1}: e1 wins locally
        let c0 = local_winners(&[e1], &[3]);
        assert_eq!(c0.len(), 1);
        // site 1 = {e2, e3}: e2 beats e3 (shared left vertex)
        let c1 = local_winners(&[e2, e3], &[2, 1]);
        assert_eq!(c1.iter().map(|&(e, _)| e).collect::<Vec<_>>(), vec![e2]);
        // coordinator: e1 beats e2 (shared right vertex)
        let mut cands = c0.clone();
        cands.extend(c1);
        assert_eq!(global_winners(&cands), vec![e1]);
        // round 2: e3 survives alone and wins
        let mut site1 = vec![e2, e3];
        delete_touching(&mut site1, &[e1]);
        assert_eq!(site1, vec![e3]);
        let c1 = local_winners(&site1, &[5]);
        assert_eq!(global_winners(&c1), vec![e3]);

        // full run on the same graph ends with a maximal matching
        let graph = g(2, 2, &[(0, 0), (1, 0), (1, 1)]);
        let partition = EdgePartition::new(&graph, 2, vec![0, 1, 1]).unwrap();
        for seed in 0..10 {
            let run = luby_distributed(&graph, &partition, seed);
            assert!(is_maximal(&graph, &run.output));
        }
    }

    #[test]
    fn luby_rounds_and_winner_invariants() {
        for seed in 0..15 {
            let (graph, partition) = random_instance(seed, 20, 20, 0.15, 4);
            let mut rounds_seen = 0;
            let run = luby_with_observer(&graph, &partition, seed, |_, surviving, cands, winners| {
                rounds_seen += 1;
                // reference: quadratic two-stage winner computation
                let mut reference: Vec<(Edge, LubyPriority)> = Vec::new();
                for site_edges in surviving {
                    for &(e, p) in cands.iter().filter(|(e, _)| site_edges.contains(e)) {
                        // locally maximal among this site's surviving edges
                        let beaten = cands
                            .iter()
                            .filter(|(f, _)| {
                                site_edges.contains(f) && adjacent(e, *f) && e != *f
                            })
                            .all(|&(_, q)| p > q);
                        assert!(beaten, "candidate not locally maximal");
                        reference.push((e, p));
                    }
                }
                // the coordinator's winners: quadratic filter over candidates
                let expect: Vec<Edge> = cands
                    .iter()
                    .filter(|&&(e, p)| {
                        cands
                            .iter()
                            .all(|&(f, q)| e == f || !adjacent(e, f) || p > q)
                    })
                    .map(|&(e, _)| e)
                    .collect();
                assert_eq!(winners, expect, "two-stage winner mismatch");

                // superset property: a candidate whose graph-adjacent
                // survivors are all candidates it beats is a single-machine
                // Luby winner and must be selected (non-candidate neighbor
                // keys are site-private, so the check is restricted to
                // fully observable neighborhoods)
                let by_edge: std::collections::HashMap<Edge, LubyPriority> =
                    cands.iter().map(|&(e, p)| (e, p)).collect();
                let all_surviving: Vec<Edge> = surviving.iter().flatten().copied().collect();
                for &(e, p) in cands {
                    let luby_winner = all_surviving.iter().all(|&f| {
                        e == f || !adjacent(e, f) || by_edge.get(&f).is_some_and(|&q| p > q)
                    });
                    if luby_winner {
                        assert!(winners.contains(&e), "dropped a Luby winner {e:?}");
                    }
                }
                // winners form a matching within the surviving edges
                let mut lefts = std::collections::HashSet::new();
                let mut rights = std::collections::HashSet::new();
                for w in winners {
                    assert!(lefts.insert(w.left) && rights.insert(w.right));
                    assert!(surviving.iter().any(|s| s.contains(w)));
                }
            });
            assert!(rounds_seen >= 1 || graph.edge_count() == 0);
            assert!(is_maximal(&graph, &run.output));
            assert_eq!(run.ledger.rounds() as usize, rounds_seen + 1);
        }
    }

    fn adjacent(e: Edge, f: Edge) -> bool {
        e.left == f.left || e.right == f.right
    }

    #[test]
    fn luby_winners_superset_of_single_machine() {
        // direct unit test of the superset property on the known example
        let e1 = Edge::new(0, 0); // prio 1
        let f = Edge::new(0, 1); // prio 2, shares left with e1, right with g2
        let g2 = Edge::new(1, 1); // prio 3
        // sites: {e1}, {f, g2}
        let c0 = local_winners(&[e1], &[1]);
        let c1 = local_winners(&[f, g2], &[2, 3]);
        let mut cands = c0;
        cands.extend(c1);
        let winners = global_winners(&cands);
        // single-machine Luby winners: only g2 (f beats e1, g2 beats f)
        // two-stage winners: {e1, g2} — a strict superset that is still a matching
        assert_eq!(winners, vec![Edge::new(0, 0), Edge::new(1, 1)]);
    }

    #[test]
    fn protocols_deterministic_under_seed() {
        let (graph, partition) = random_instance(5, 24, 24, 0.15, 6);
        for spec in [ProtocolSpec::Greedy, ProtocolSpec::TwoStep { alpha: 0.1 }, ProtocolSpec::Luby] {
            let a = run_protocol(spec, &graph, &partition, 123).unwrap();
            let b = run_protocol(spec, &graph, &partition, 123).unwrap();
            assert_eq!(a.transcript, b.transcript);
            assert_eq!(a.ledger, b.ledger);
            assert_eq!(a.output.sorted_edges(), b.output.sorted_edges());
            let c = run_protocol(spec, &graph, &partition, 124).unwrap();
            let _ = c; // different seed may differ; only well-formedness is required
        }
    }

    #[test]
    fn run_protocol_validates_partition() {
        let graph = g(2, 2, &[(0, 0)]);
        let other = g(3, 3, &[(0, 0), (1, 1)]);
        let partition = EdgePartition::new(&other, 2, vec![0, 1]).unwrap();
        assert!(run_protocol(ProtocolSpec::Greedy, &graph, &partition, 0).is_err());
    }
}
