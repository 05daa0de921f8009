//! Bipartite graphs, matchings, the exact maximum-matching oracle, and
//! greedy maximal matching.
//!
//! Edge order is part of a graph's identity: the greedy procedure and the
//! protocol messages built on top of it are sequence-sensitive, so the
//! canonical order is insertion order and reruns under a fixed seed replay
//! exactly.

use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("{side:?} vertex {index} out of range (side has {size} vertices)")]
    VertexOutOfRange { side: Side, index: usize, size: usize },
    #[error("duplicate edge ({left}, {right})")]
    DuplicateEdge { left: usize, right: usize },
    #[error("edge set is not a matching (shared vertex or edge outside the graph)")]
    NotAMatching,
    #[error("partition does not cover the graph: {0}")]
    BadPartition(String),
    #[error("left vertex {left} has edges assigned to more than one site")]
    SplitLeftVertex { left: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A vertex on a named side of the bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexId {
    pub side: Side,
    pub index: usize,
}

impl VertexId {
    pub fn left(index: usize) -> Self {
        VertexId { side: Side::Left, index }
    }

    pub fn right(index: usize) -> Self {
        VertexId { side: Side::Right, index }
    }
}

/// An edge between left vertex `left` and right vertex `right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub left: usize,
    pub right: usize,
}

impl Edge {
    pub fn new(left: usize, right: usize) -> Self {
        Edge { left, right }
    }

    pub fn left_vertex(&self) -> VertexId {
        VertexId::left(self.left)
    }

    pub fn right_vertex(&self) -> VertexId {
        VertexId::right(self.right)
    }
}

/// Bipartite graph with an ordered edge list and no duplicate edges.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<Edge>,
    edge_set: HashSet<Edge>,
}

impl BipartiteGraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        BipartiteGraph { n_left, n_right, edges: Vec::new(), edge_set: HashSet::new() }
    }

    pub fn from_edges<I>(n_left: usize, n_right: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Self::new(n_left, n_right);
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        if e.left >= self.n_left {
            return Err(GraphError::VertexOutOfRange {
                side: Side::Left,
                index: e.left,
                size: self.n_left,
            });
        }
        if e.right >= self.n_right {
            return Err(GraphError::VertexOutOfRange {
                side: Side::Right,
                index: e.right,
                size: self.n_right,
            });
        }
        if !self.edge_set.insert(e) {
            return Err(GraphError::DuplicateEdge { left: e.left, right: e.right });
        }
        self.edges.push(e);
        Ok(())
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    /// Total vertex count `n = n_left + n_right`.
    pub fn n_total(&self) -> usize {
        self.n_left + self.n_right
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edge_set.contains(&e)
    }
}

/// A set of vertex-disjoint edges. Valid by construction: the only ways to
/// build one ([`Matching::try_insert`], [`Matching::try_from_edges`]) refuse
/// edges that reuse a vertex.
#[derive(Debug, Clone, Default)]
pub struct Matching {
    edges: Vec<Edge>,
    left_to_right: HashMap<usize, usize>,
    right_used: HashSet<usize>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn try_from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut m = Matching::new();
        for e in edges {
            if !m.try_insert(e) {
                return Err(GraphError::NotAMatching);
            }
        }
        Ok(m)
    }

    /// Adds `e` if it conflicts with no present edge; returns whether it was added.
    pub fn try_insert(&mut self, e: Edge) -> bool {
        if self.left_to_right.contains_key(&e.left) || self.right_used.contains(&e.right) {
            return false;
        }
        self.left_to_right.insert(e.left, e.right);
        self.right_used.insert(e.right);
        self.edges.push(e);
        true
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.left_to_right.get(&e.left) == Some(&e.right)
    }

    pub fn covers_left(&self, u: usize) -> bool {
        self.left_to_right.contains_key(&u)
    }

    pub fn covers_right(&self, v: usize) -> bool {
        self.right_used.contains(&v)
    }

    /// Edges sorted by (left, right); the canonical order for comparisons
    /// and for truncation rules.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut v = self.edges.clone();
        v.sort();
        v
    }
}

/// Disjoint assignment of every graph edge to one of `k` sites, stored
/// parallel to the graph's edge order.
#[derive(Debug, Clone)]
pub struct EdgePartition {
    k: usize,
    assignment: Vec<usize>,
}

impl EdgePartition {
    pub fn new(graph: &BipartiteGraph, k: usize, assignment: Vec<usize>) -> Result<Self, GraphError> {
        if k == 0 {
            return Err(GraphError::BadPartition("site count k must be >= 1".into()));
        }
        if assignment.len() != graph.edge_count() {
            return Err(GraphError::BadPartition(format!(
                "{} assignments for {} edges",
                assignment.len(),
                graph.edge_count()
            )));
        }
        if let Some(&s) = assignment.iter().find(|&&s| s >= k) {
            return Err(GraphError::BadPartition(format!("site {s} out of range for k={k}")));
        }
        Ok(EdgePartition { k, assignment })
    }

    /// Left-vertex partition: all edges of left vertex `u` go to
    /// `site_of_left[u]`.
    pub fn by_left_vertex(
        graph: &BipartiteGraph,
        k: usize,
        site_of_left: &[usize],
    ) -> Result<Self, GraphError> {
        if site_of_left.len() != graph.n_left() {
            return Err(GraphError::BadPartition(format!(
                "{} left-vertex sites for {} left vertices",
                site_of_left.len(),
                graph.n_left()
            )));
        }
        let assignment = graph.edges().iter().map(|e| site_of_left[e.left]).collect();
        Self::new(graph, k, assignment)
    }

    /// Left-vertex partition with `site(u) = u mod k`.
    pub fn round_robin_left(graph: &BipartiteGraph, k: usize) -> Result<Self, GraphError> {
        let sites: Vec<usize> = (0..graph.n_left()).map(|u| u % k).collect();
        Self::by_left_vertex(graph, k, &sites)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn site_of(&self, edge_index: usize) -> usize {
        self.assignment[edge_index]
    }

    /// Per-site edge lists in graph (insertion) order.
    pub fn site_edge_lists(&self, graph: &BipartiteGraph) -> Vec<Vec<Edge>> {
        let mut lists = vec![Vec::new(); self.k];
        for (idx, &e) in graph.edges().iter().enumerate() {
            lists[self.assignment[idx]].push(e);
        }
        lists
    }

    /// Checks the left-vertex rule: every left vertex's edges sit on one site.
    pub fn is_left_vertex_partition(&self, graph: &BipartiteGraph) -> bool {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (idx, e) in graph.edges().iter().enumerate() {
            match seen.entry(e.left) {
                std::collections::hash_map::Entry::Occupied(o) => {
                    if *o.get() != self.assignment[idx] {
                        return false;
                    }
                }
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(self.assignment[idx]);
                }
            }
        }
        true
    }

    /// Errors unless the partition covers exactly this graph's edges.
    pub fn check_covers(&self, graph: &BipartiteGraph) -> Result<(), GraphError> {
        if self.assignment.len() != graph.edge_count() {
            return Err(GraphError::BadPartition(format!(
                "partition has {} assignments, graph has {} edges",
                self.assignment.len(),
                graph.edge_count()
            )));
        }
        Ok(())
    }
}

/// True iff `edges` is a matching in `graph`: every edge present in the
/// graph and no vertex repeated. Out-of-range or foreign edges yield false.
pub fn is_matching(graph: &BipartiteGraph, edges: &[Edge]) -> bool {
    let mut left = HashSet::new();
    let mut right = HashSet::new();
    for &e in edges {
        if !graph.contains_edge(e) {
            return false;
        }
        if !left.insert(e.left) || !right.insert(e.right) {
            return false;
        }
    }
    true
}

/// True iff no graph edge can be added to `m` without breaking the matching
/// property.
pub fn is_maximal(graph: &BipartiteGraph, m: &Matching) -> bool {
    graph
        .edges()
        .iter()
        .all(|e| m.covers_left(e.left) || m.covers_right(e.right))
}

/// Exact maximum-cardinality matching via Hopcroft–Karp.
///
/// Only the cardinality is contractual; which maximum matching is returned
/// is an implementation detail (currently: edges reported in left-vertex
/// order).
pub fn maximum_matching(graph: &BipartiteGraph) -> Matching {
    const NIL: usize = usize::MAX;
    const INF: u32 = u32::MAX;

    let n_l = graph.n_left();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_l];
    for e in graph.edges() {
        adj[e.left].push(e.right);
    }

    let mut pair_l = vec![NIL; n_l];
    let mut pair_r = vec![NIL; graph.n_right()];
    let mut dist = vec![INF; n_l];

    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        pair_l: &mut [usize],
        pair_r: &mut [usize],
        dist: &mut [u32],
        dist_nil: u32,
    ) -> bool {
        for i in 0..adj[u].len() {
            let v = adj[u][i];
            let w = pair_r[v];
            let reachable = if w == NIL {
                dist[u] + 1 == dist_nil
            } else {
                dist[w] == dist[u] + 1 && augment(w, adj, pair_l, pair_r, dist, dist_nil)
            };
            if reachable {
                pair_l[u] = v;
                pair_r[v] = u;
                return true;
            }
        }
        dist[u] = INF;
        false
    }

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_l {
            if pair_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut dist_nil = INF;
        while let Some(u) = queue.pop_front() {
            if dist[u] >= dist_nil {
                continue;
            }
            for &v in &adj[u] {
                let w = pair_r[v];
                if w == NIL {
                    if dist_nil == INF {
                        dist_nil = dist[u] + 1;
                    }
                } else if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist_nil == INF {
            break;
        }
        for u in 0..n_l {
            if pair_l[u] == NIL {
                augment(u, &adj, &mut pair_l, &mut pair_r, &mut dist, dist_nil);
            }
        }
    }

    let mut m = Matching::new();
    for (u, &v) in pair_l.iter().enumerate() {
        if v != NIL {
            let added = m.try_insert(Edge::new(u, v));
            debug_assert!(added);
        }
    }
    m
}

/// Greedily extends `initial` with the edges of `edge_sequence` in sequence
/// order. The result contains `initial` and is maximal relative to the
/// sequence. Validity of `initial` is guaranteed by the [`Matching`] type.
pub fn greedy_maximal_matching(edge_sequence: &[Edge], initial: &Matching) -> Matching {
    let mut m = initial.clone();
    for &e in edge_sequence {
        m.try_insert(e);
    }
    m
}

/// |candidate| / |maximum matching|, defined as 1 for edgeless graphs.
///
/// Errors if `candidate` is not a matching of `graph`.
pub fn approximation_ratio(candidate: &Matching, graph: &BipartiteGraph) -> Result<f64, GraphError> {
    if !is_matching(graph, candidate.edges()) {
        return Err(GraphError::NotAMatching);
    }
    if graph.edge_count() == 0 {
        return Ok(1.0);
    }
    let opt = maximum_matching(graph).len();
    Ok(candidate.len() as f64 / opt as f64)
}
