//! Build a hard-distribution instance and a uniform random instance,
//! serialize both to the v1 text format, and read them back.

use dmr::dist::{build_hard_instance, instance_to_graph};
use dmr::graph::{BipartiteGraph, Edge, EdgePartition};
use dmr::io::{format_instance, read_instance, HardSidecar};
use dmr::rng;
use rand::Rng;

fn main() {
    // hard instance: r = n/(2k) blocks of k x k bits
    let (n, k, alpha, seed) = (64usize, 4usize, 0.5, 42u64);
    let inst = build_hard_instance(n, k, alpha, seed).unwrap();
    println!(
        "hard instance: n={} k={} r={} p={} (alpha/20)",
        inst.n(),
        inst.k(),
        inst.r(),
        inst.p()
    );
    let (graph, partition) = instance_to_graph(&inst);
    println!("  {} edges across {} sites", graph.edge_count(), partition.k());

    let sidecar = HardSidecar { alpha: inst.alpha(), p: inst.p(), r: inst.r(), seed };
    let text = format_instance(&graph, &partition, Some(&sidecar));
    println!("--- first lines of the file ---");
    for line in text.lines().take(6) {
        println!("{line}");
    }

    let parsed = read_instance(text.as_bytes()).unwrap();
    assert_eq!(parsed.graph.edges(), graph.edges());
    assert_eq!(parsed.hard, Some(sidecar));
    println!("round trip: parsed {} edges, sidecar intact", parsed.graph.edge_count());

    // uniform random instance with a round-robin left-vertex partition
    let mut r = rng::stream(7, &[1]);
    let half = 16;
    let mut random = BipartiteGraph::new(half, half);
    for u in 0..half {
        for v in 0..half {
            if r.gen_bool(0.2) {
                random.add_edge(Edge::new(u, v)).unwrap();
            }
        }
    }
    let partition = EdgePartition::round_robin_left(&random, 4).unwrap();
    println!(
        "random instance: {} edges, left-vertex partition over {} sites",
        random.edge_count(),
        partition.k()
    );
}
