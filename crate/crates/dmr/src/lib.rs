//! Distributed approximate maximum matching in the coordinator model.
//!
//! `k` sites each hold a piece of a bipartite graph's edge set and may
//! talk only to a central coordinator, which must output a matching. This
//! crate provides:
//!
//! - a simulator for that star topology with exact per-channel bit,
//!   message, and round accounting ([`sim`]);
//! - three matching protocols: sequential greedy, a two-step
//!   alpha-approximation, and a distributed variant of Luby's algorithm
//!   ([`protocols`]);
//! - the hard input distribution that makes the problem
//!   communication-expensive, built from set-disjointness instances
//!   ([`dist`]), with noisy/important edge classification;
//! - an executable reduction showing how a disjointness answer can be
//!   extracted from any matching protocol's output ([`reduction`]);
//! - experiment sweeps with CSV output and cost-model fitting
//!   ([`experiment`]), plus a command-line front end ([`cli`]).
//!
//! Everything is deterministic under a master seed: instances, protocol
//! coin flips, and experiment grids replay bit-for-bit ([`rng`]).
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example generate_instances     # build + serialize instances
//! cargo run --example greedy_protocol        # sequential greedy, bit ledger
//! cargo run --example two_step_protocol      # alpha-approximation, cost split
//! cargo run --example luby_protocol          # rounds vs log n
//! cargo run --example hard_instance_anatomy  # noisy/important edge structure
//! cargo run --example disjointness_reduction # one-sided error + hit rate
//! cargo run --example cost_scaling           # grid sweep + fitted constant
//! cargo run --example custom_protocol        # roll your own protocol
//! ```
//!
//! # Quick start
//!
//! ```
//! use dmr::dist::{build_hard_instance, instance_to_graph};
//! use dmr::sim::{run_protocol, ProtocolSpec};
//!
//! let inst = build_hard_instance(256, 8, 0.5, 42).unwrap();
//! let (graph, partition) = instance_to_graph(&inst);
//! let run = run_protocol(ProtocolSpec::Greedy, &graph, &partition, 7).unwrap();
//! assert!(run.output.len() > 0);
//! println!("{} payload bits over {} rounds", run.ledger.total_payload_bits(), run.ledger.rounds());
//! ```

pub mod cli;
pub mod dist;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod protocols;
pub mod reduction;
pub mod rng;
pub mod sim;
pub mod stats;

pub use graph::{BipartiteGraph, Edge, EdgePartition, Matching};
pub use sim::{run_protocol, CostLedger, ProtocolRun, ProtocolSpec};
