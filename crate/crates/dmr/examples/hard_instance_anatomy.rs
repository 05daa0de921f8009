//! Anatomy of the hard input distribution: many noisy edges that form
//! only a small matching, few important edges that carry a large one.

use dmr::dist::{build_hard_instance, classify_edges, instance_to_graph};
use dmr::graph::{maximum_matching, BipartiteGraph};

fn main() {
    let (n, k, alpha, seed) = (8192usize, 64usize, 0.5, 99u64);
    let inst = build_hard_instance(n, k, alpha, seed).unwrap();
    let p = inst.p();
    let classes = classify_edges(&inst);
    let (graph, _) = instance_to_graph(&inst);

    println!("n={} k={} r={} p={}", n, k, inst.r(), p);
    println!("left split : |U0|={} |U1|={}", classes.u0.len(), classes.u1.len());
    println!("right split: |V0|={} |V1|={}", classes.v0.len(), classes.v1.len());
    println!(
        "edges      : {} total = {} noisy (into V0) + {} important (U1 -> V1)",
        graph.edge_count(),
        classes.noisy_edges.len(),
        classes.important_edges.len()
    );

    // noisy edges are numerous but match at most |V0| vertices
    let noisy_graph =
        BipartiteGraph::from_edges(graph.n_left(), graph.n_right(), classes.noisy_edges.iter().copied())
            .unwrap();
    let noisy_opt = maximum_matching(&noisy_graph).len();
    println!(
        "noisy-only maximum matching: {} (<= |V0| = {})",
        noisy_opt,
        classes.v0.len()
    );

    // important edges alone already carry a large matching
    let important_graph = BipartiteGraph::from_edges(
        graph.n_left(),
        graph.n_right(),
        classes.important_edges.iter().copied(),
    )
    .unwrap();
    let important_opt = maximum_matching(&important_graph).len();
    let opt = maximum_matching(&graph).len();
    println!("important-only maximum matching: {important_opt}");
    println!("full maximum matching: {opt}");

    println!("\nconcentration bounds at this scale:");
    println!(
        "  |V0| = {} vs 2pn = {} (expected {:.1})",
        classes.v0.len(),
        (2.0 * p * n as f64) as u64,
        p * (2.0 - p) * n as f64 / 2.0
    );
    println!("  OPT = {opt} vs n/5 = {:.0}", n as f64 / 5.0);
    assert!(classes.important_edges.len() <= n / 2);
    assert!((classes.v0.len() as f64) <= 2.0 * p * n as f64);
    assert!(opt * 5 >= n);
}
