//! Coordinator-model execution engine: in-process sites exchange messages
//! with a coordinator over star-topology channels, with exact bit
//! accounting, round counting, and deterministic seeded replay.
//!
//! The only communication primitives are [`Net::coordinator_send`] and
//! [`Net::site_send`], so site-to-site traffic cannot exist by
//! construction. A round is one batch in which the coordinator sends to
//! any subset of sites and each addressed site replies once.
//!
//! Framing: every message carries a fixed header of ceil(log2 k) site-id
//! bits, 4 kind-tag bits, and a ceil(log2(n+1))-bit length prefix for
//! variable-length payloads. The ledger reports payload-only and
//! payload-plus-header totals separately so experiments can match either
//! accounting convention.

use crate::graph::{BipartiteGraph, Edge, EdgePartition, GraphError, Matching, VertexId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid protocol parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Bits needed to address one of `count` values, floored at 1:
/// `ceil(log2(max(count, 2)))`.
pub fn bits_for(count: usize) -> u64 {
    let c = count.max(2) as u64;
    u64::from((c - 1).ilog2()) + 1
}

/// Encoded size of a vertex id on a side with `n_side` vertices.
///
/// Panics if the vertex is out of range.
pub fn encode_vertex(id: VertexId, n_side: usize) -> u64 {
    assert!(id.index < n_side, "vertex {id:?} out of range for side of {n_side}");
    bits_for(n_side)
}

/// Encoded size of an edge of `graph`: left-vertex bits plus right-vertex
/// bits.
///
/// Panics if the edge is not in the graph.
pub fn encode_edge(e: Edge, graph: &BipartiteGraph) -> u64 {
    assert!(graph.contains_edge(e), "edge {e:?} not in graph");
    encode_vertex(e.left_vertex(), graph.n_left())
        + encode_vertex(e.right_vertex(), graph.n_right())
}

/// Encoded size of any one edge of `graph` (membership not checked).
pub fn edge_bits(graph: &BipartiteGraph) -> u64 {
    bits_for(graph.n_left()) + bits_for(graph.n_right())
}

pub const KIND_TAG_BITS: u64 = 4;

/// Bits of the per-round priority key attached to Luby candidates.
pub const PRIORITY_BITS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    SiteToCoordinator,
    CoordinatorToSite,
}

/// Protocol-level tag of a message; encoded in 4 header bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageKind {
    /// Coordinator kickoff / generic request.
    Start,
    /// Coordinator -> site: current partial matching.
    MatchingDown,
    /// Site -> coordinator: greedily extended matching.
    MatchingUp,
    /// Coordinator -> site: report your local maximum matching size.
    SizeQuery,
    /// Site -> coordinator: local maximum matching size.
    SizeReport,
    /// Coordinator -> site: send your matching edges.
    FetchRequest,
    /// Site -> coordinator: truncated local maximum matching.
    EdgeList,
    /// Site -> coordinator: priority-annotated local winner edges.
    Candidates,
    /// Coordinator -> site: globally winning edges.
    Winners,
    /// Site -> coordinator: 1-bit halt notice.
    Done,
}

impl MessageKind {
    pub fn tag(self) -> u8 {
        match self {
            MessageKind::Start => 0,
            MessageKind::MatchingDown => 1,
            MessageKind::MatchingUp => 2,
            MessageKind::SizeQuery => 3,
            MessageKind::SizeReport => 4,
            MessageKind::FetchRequest => 5,
            MessageKind::EdgeList => 6,
            MessageKind::Candidates => 7,
            MessageKind::Winners => 8,
            MessageKind::Done => 9,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MessageKind::Start => "start",
            MessageKind::MatchingDown => "matching_down",
            MessageKind::MatchingUp => "matching_up",
            MessageKind::SizeQuery => "size_query",
            MessageKind::SizeReport => "size_report",
            MessageKind::FetchRequest => "fetch_request",
            MessageKind::EdgeList => "edge_list",
            MessageKind::Candidates => "candidates",
            MessageKind::Winners => "winners",
            MessageKind::Done => "done",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Message {
    pub direction: Direction,
    pub site: usize,
    pub round: u32,
    pub kind: MessageKind,
    pub payload_bits: u64,
}

/// Per-channel bit, message, and round accounting for one protocol run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostLedger {
    k: usize,
    uplink_payload: Vec<u64>,
    downlink_payload: Vec<u64>,
    uplink_messages: Vec<u64>,
    downlink_messages: Vec<u64>,
    header_bits: u64,
    rounds: u32,
}

impl CostLedger {
    fn new(k: usize) -> Self {
        CostLedger {
            k,
            uplink_payload: vec![0; k],
            downlink_payload: vec![0; k],
            uplink_messages: vec![0; k],
            downlink_messages: vec![0; k],
            header_bits: 0,
            rounds: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    /// Payload bits on one channel, both directions.
    pub fn channel_payload_bits(&self, site: usize) -> u64 {
        self.uplink_payload[site] + self.downlink_payload[site]
    }

    pub fn uplink_payload_bits(&self, site: usize) -> u64 {
        self.uplink_payload[site]
    }

    pub fn downlink_payload_bits(&self, site: usize) -> u64 {
        self.downlink_payload[site]
    }

    /// Total payload bits across all channels (header-free count).
    pub fn total_payload_bits(&self) -> u64 {
        self.uplink_payload.iter().sum::<u64>() + self.downlink_payload.iter().sum::<u64>()
    }

    /// Total header bits (site id + kind tag + length prefix, per message).
    pub fn header_bits(&self) -> u64 {
        self.header_bits
    }

    /// Payload plus header bits.
    pub fn total_bits(&self) -> u64 {
        self.total_payload_bits() + self.header_bits
    }

    pub fn total_messages(&self) -> u64 {
        self.uplink_messages.iter().sum::<u64>() + self.downlink_messages.iter().sum::<u64>()
    }

    pub fn channel_messages(&self, site: usize) -> u64 {
        self.uplink_messages[site] + self.downlink_messages[site]
    }

    /// Recomputes the ledger from a transcript and checks it matches.
    pub fn consistent_with(&self, transcript: &[Message], header_per_message: u64) -> bool {
        let mut fresh = CostLedger::new(self.k);
        for m in transcript {
            fresh.record(m, header_per_message);
            fresh.rounds = fresh.rounds.max(m.round);
        }
        fresh.rounds = fresh.rounds.max(self.rounds);
        fresh == *self
    }

    fn record(&mut self, m: &Message, header_per_message: u64) {
        match m.direction {
            Direction::SiteToCoordinator => {
                self.uplink_payload[m.site] += m.payload_bits;
                self.uplink_messages[m.site] += 1;
            }
            Direction::CoordinatorToSite => {
                self.downlink_payload[m.site] += m.payload_bits;
                self.downlink_messages[m.site] += 1;
            }
        }
        self.header_bits += header_per_message;
    }
}

/// The result of one protocol execution: output matching, cost ledger,
/// full message transcript, and the seed that replays it.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub output: Matching,
    pub ledger: CostLedger,
    pub transcript: Vec<Message>,
    pub seed: u64,
}

impl ProtocolRun {
    /// Sum of payload bits over messages of one kind.
    pub fn payload_bits_by_kind(&self, kind: MessageKind) -> u64 {
        self.transcript
            .iter()
            .filter(|m| m.kind == kind)
            .map(|m| m.payload_bits)
            .sum()
    }

    /// Transcript dump: one line per message,
    /// `<round> <dir> <site> <kind> <payload_bits>`.
    pub fn dump_transcript(&self) -> String {
        let mut out = String::new();
        for m in &self.transcript {
            let dir = match m.direction {
                Direction::SiteToCoordinator => "up",
                Direction::CoordinatorToSite => "down",
            };
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                m.round,
                dir,
                m.site,
                m.kind.label(),
                m.payload_bits
            ));
        }
        out
    }
}

/// Message fabric for one protocol run.
pub struct Net {
    k: usize,
    header_per_message: u64,
    round: u32,
    transcript: Vec<Message>,
    ledger: CostLedger,
}

impl Net {
    pub fn new(k: usize, n_total: usize) -> Self {
        let header = bits_for(k) + KIND_TAG_BITS + bits_for(n_total + 1);
        Net {
            k,
            header_per_message: header,
            round: 0,
            transcript: Vec::new(),
            ledger: CostLedger::new(k),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Fixed header bits attached to every message.
    pub fn header_per_message(&self) -> u64 {
        self.header_per_message
    }

    /// Opens the next round and returns its number (1-based).
    pub fn begin_round(&mut self) -> u32 {
        self.round += 1;
        self.ledger.rounds = self.round;
        self.round
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn coordinator_send(&mut self, site: usize, kind: MessageKind, payload_bits: u64) {
        self.push(Message {
            direction: Direction::CoordinatorToSite,
            site,
            round: self.round,
            kind,
            payload_bits,
        });
    }

    pub fn site_send(&mut self, site: usize, kind: MessageKind, payload_bits: u64) {
        self.push(Message {
            direction: Direction::SiteToCoordinator,
            site,
            round: self.round,
            kind,
            payload_bits,
        });
    }

    fn push(&mut self, m: Message) {
        assert!(m.site < self.k, "site {} out of range for k={}", m.site, self.k);
        assert!(self.round >= 1, "messages must be sent inside a round");
        self.ledger.record(&m, self.header_per_message);
        self.transcript.push(m);
    }

    /// Seals the run. Asserts ledger/transcript consistency.
    pub fn finish(self, output: Matching, seed: u64) -> ProtocolRun {
        debug_assert!(self.ledger.consistent_with(&self.transcript, self.header_per_message));
        ProtocolRun { output, ledger: self.ledger, transcript: self.transcript, seed }
    }
}

/// Descriptor of one of the built-in protocols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolSpec {
    Greedy,
    TwoStep { alpha: f64 },
    Luby,
}

impl ProtocolSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolSpec::Greedy => "greedy",
            ProtocolSpec::TwoStep { .. } => "twostep",
            ProtocolSpec::Luby => "luby",
        }
    }
}

/// Protocol family without parameters; the CLI-facing names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    Greedy,
    TwoStep,
    Luby,
}

impl ProtocolKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "greedy" => Some(ProtocolKind::Greedy),
            "twostep" => Some(ProtocolKind::TwoStep),
            "luby" => Some(ProtocolKind::Luby),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Greedy => "greedy",
            ProtocolKind::TwoStep => "twostep",
            ProtocolKind::Luby => "luby",
        }
    }

    /// Instantiates the runnable descriptor; `alpha` only matters for
    /// `twostep`.
    pub fn with_alpha(self, alpha: f64) -> ProtocolSpec {
        match self {
            ProtocolKind::Greedy => ProtocolSpec::Greedy,
            ProtocolKind::TwoStep => ProtocolSpec::TwoStep { alpha },
            ProtocolKind::Luby => ProtocolSpec::Luby,
        }
    }
}

/// Anything that can play the part of a matching protocol in the
/// coordinator model; implemented by [`ProtocolSpec`] and by custom
/// protocols built directly on [`Net`].
pub trait DmrProtocol {
    fn name(&self) -> String;
    fn execute(
        &self,
        graph: &BipartiteGraph,
        partition: &EdgePartition,
        seed: u64,
    ) -> Result<ProtocolRun, SimError>;
}

impl DmrProtocol for ProtocolSpec {
    fn name(&self) -> String {
        ProtocolSpec::name(self).to_string()
    }

    fn execute(
        &self,
        graph: &BipartiteGraph,
        partition: &EdgePartition,
        seed: u64,
    ) -> Result<ProtocolRun, SimError> {
        run_protocol(*self, graph, partition, seed)
    }
}

/// Runs a built-in protocol and verifies the run-level invariants: the
/// output is a valid matching of `graph` and the ledger agrees with the
/// transcript.
pub fn run_protocol(
    spec: ProtocolSpec,
    graph: &BipartiteGraph,
    partition: &EdgePartition,
    seed: u64,
) -> Result<ProtocolRun, SimError> {
    partition.check_covers(graph)?;
    let run = match spec {
        ProtocolSpec::Greedy => crate::protocols::sequential_greedy(graph, partition, seed),
        ProtocolSpec::TwoStep { alpha } => {
            crate::protocols::two_step(graph, partition, alpha, seed)?
        }
        ProtocolSpec::Luby => crate::protocols::luby_distributed(graph, partition, seed),
    };
    assert!(
        crate::graph::is_matching(graph, run.output.edges()),
        "protocol {} produced an invalid matching",
        spec.name()
    );
    assert!(
        run.ledger.consistent_with(&run.transcript, bits_for(partition.k()) + KIND_TAG_BITS + bits_for(graph.n_total() + 1)),
        "ledger does not match transcript"
    );
    Ok(run)
}
