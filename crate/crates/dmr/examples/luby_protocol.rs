//! Distributed Luby matching: iterations grow like log n on dense
//! inputs. Reports the fitted constant c in median_iterations <=
//! c * log2(n) over both instance families.

use dmr::dist::{build_hard_instance, instance_to_graph};
use dmr::graph::{is_maximal, BipartiteGraph, Edge, EdgePartition};
use dmr::protocols::luby_distributed;
use dmr::rng;
use dmr::stats::median;
use rand::Rng;

fn median_iterations(
    label: &str,
    sizes: &[u32],
    make: impl Fn(usize, u64) -> (BipartiteGraph, EdgePartition),
) -> f64 {
    println!("{label}:");
    println!("  {:>6} {:>8} {:>8} {:>12} {:>10}", "n", "log2 n", "edges", "median iters", "c");
    let mut worst_c = 0.0f64;
    for &exp in sizes {
        let n = 1usize << exp;
        let mut iters = Vec::new();
        let mut m = 0;
        for s in 0..50u64 {
            let (graph, partition) = make(n, s);
            m = graph.edge_count();
            let run = luby_distributed(&graph, &partition, s);
            assert!(is_maximal(&graph, &run.output));
            // rounds = priority iterations + the final all-done round
            iters.push((run.ledger.rounds() - 1) as f64);
        }
        let med = median(&iters);
        let c = med / exp as f64;
        worst_c = worst_c.max(c);
        println!("  {:>6} {:>8} {:>8} {:>12} {:>10.3}", n, exp, m, med, c);
    }
    worst_c
}

fn main() {
    let c_hard = median_iterations("hard instances (sparse), k=64", &[8, 10, 12, 13], |n, s| {
        let inst = build_hard_instance(n, 64, 0.5, rng::derive(0x1b, &[n as u64, s])).unwrap();
        instance_to_graph(&inst)
    });

    let c_dense = median_iterations("uniform random, density 0.1, k=16", &[8, 10, 12], |n, s| {
        let half = n / 2;
        let mut r = rng::stream(rng::derive(0x2b, &[n as u64, s]), &[]);
        let mut graph = BipartiteGraph::new(half, half);
        for u in 0..half {
            for v in 0..half {
                if r.gen_bool(0.1) {
                    graph.add_edge(Edge::new(u, v)).unwrap();
                }
            }
        }
        let partition = EdgePartition::round_robin_left(&graph, 16).unwrap();
        (graph, partition)
    });

    println!(
        "\nfitted c = {:.3} (median iterations <= c * log2 n on every family and size)",
        c_hard.max(c_dense)
    );
}
