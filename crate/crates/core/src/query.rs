//! The bounded-degree query model: degree and j-th-neighbor queries, counted.

use std::collections::HashMap;

use crate::graph::{Graph, Vertex};

/// Running query counters, plus per-call snapshots.
///
/// A snapshot records how many queries were issued since the previous
/// snapshot (or since creation), so summing the snapshot counts gives the
/// total at the time of the last snapshot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryLedger {
    degree_queries: u64,
    neighbor_queries: u64,
    snapshots: Vec<(u64, u64)>,
    at_last_snapshot: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn degree_queries(&self) -> u64 {
        self.degree_queries
    }

    pub fn neighbor_queries(&self) -> u64 {
        self.neighbor_queries
    }

    pub fn total(&self) -> u64 {
        self.degree_queries + self.neighbor_queries
    }

    /// Closes the current call window and returns its query count.
    pub fn snapshot(&mut self, call_id: u64) -> u64 {
        let delta = self.total() - self.at_last_snapshot;
        self.at_last_snapshot = self.total();
        self.snapshots.push((call_id, delta));
        delta
    }

    pub fn snapshots(&self) -> &[(u64, u64)] {
        &self.snapshots
    }

    pub fn max_per_call(&self) -> u64 {
        self.snapshots.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }

    /// Adds the counters of a finished call ledger as one snapshot.
    pub fn absorb(&mut self, call_id: u64, other: &QueryLedger) {
        self.degree_queries += other.degree_queries;
        self.neighbor_queries += other.neighbor_queries;
        self.snapshot(call_id);
    }
}

impl Graph {
    /// Degree query.
    pub fn degree_query(&self, ledger: &mut QueryLedger, v: Vertex) -> usize {
        ledger.degree_queries += 1;
        self.degree(v)
    }

    /// The `j`-th neighbor of `v`, 1-based, in ascending id order.
    ///
    /// Panics unless `1 <= j <= degree(v)`.
    pub fn neighbor_query(&self, ledger: &mut QueryLedger, v: Vertex, j: usize) -> Vertex {
        let nbrs = self.neighbors(v);
        assert!(
            (1..=nbrs.len()).contains(&j),
            "neighbor index {j} out of range for vertex {v} of degree {}",
            nbrs.len()
        );
        ledger.neighbor_queries += 1;
        nbrs[j - 1]
    }
}

/// Read access to adjacency lists.
pub trait Adjacency {
    fn adjacent(&mut self, v: Vertex) -> &[Vertex];
}

impl Adjacency for &Graph {
    fn adjacent(&mut self, v: Vertex) -> &[Vertex] {
        self.neighbors(v)
    }
}

/// Query-model access that remembers every adjacency list it has fetched.
///
/// Fetching `v` costs one degree query plus one neighbor query per incident
/// edge; repeated requests for `v` within the same probe are free.
pub struct Probe<'a> {
    graph: &'a Graph,
    ledger: &'a mut QueryLedger,
    seen: HashMap<Vertex, Box<[Vertex]>>,
}

impl<'a> Probe<'a> {
    pub fn new(graph: &'a Graph, ledger: &'a mut QueryLedger) -> Self {
        Probe {
            graph,
            ledger,
            seen: HashMap::new(),
        }
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn ledger(&self) -> &QueryLedger {
        self.ledger
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

impl Adjacency for Probe<'_> {
    fn adjacent(&mut self, v: Vertex) -> &[Vertex] {
        let graph = self.graph;
        let ledger = &mut *self.ledger;
        self.seen.entry(v).or_insert_with(|| {
            let deg = graph.degree_query(ledger, v);
            (1..=deg).map(|j| graph.neighbor_query(ledger, v, j)).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build;

    #[test]
    fn neighbor_order_is_ascending() {
        let g = build::path(3);
        let mut l = QueryLedger::new();
        assert_eq!(g.neighbor_query(&mut l, 1, 1), 0);
        assert_eq!(g.neighbor_query(&mut l, 1, 2), 2);
        let star = build::star(4);
        assert_eq!(star.neighbor_query(&mut l, 0, 3), 3);
        assert_eq!(l.neighbor_queries(), 3);
        assert_eq!(l.degree_queries(), 0);
    }

    #[test]
    fn degree_of_isolated_vertex() {
        let g = Graph::empty(2);
        let mut l = QueryLedger::new();
        assert_eq!(g.degree_query(&mut l, 1), 0);
        assert_eq!(l.degree_queries(), 1);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn neighbor_index_zero_panics() {
        let g = build::path(3);
        g.neighbor_query(&mut QueryLedger::new(), 1, 0);
    }

    #[test]
    fn snapshots_are_deltas() {
        let g = build::path(4);
        let mut l = QueryLedger::new();
        g.degree_query(&mut l, 0);
        g.degree_query(&mut l, 1);
        assert_eq!(l.snapshot(0), 2);
        g.neighbor_query(&mut l, 1, 1);
        assert_eq!(l.snapshot(1), 1);
        assert_eq!(l.snapshot(2), 0);
        assert_eq!(l.snapshots(), &[(0, 2), (1, 1), (2, 0)]);
        assert_eq!(l.total(), 3);
        assert_eq!(l.max_per_call(), 2);
    }

    #[test]
    fn probe_charges_each_vertex_once() {
        let g = build::star(3);
        let mut l = QueryLedger::new();
        {
            let mut p = Probe::new(&g, &mut l);
            assert_eq!(p.adjacent(0), &[1, 2, 3]);
            assert_eq!(p.adjacent(0), &[1, 2, 3]);
            assert_eq!(p.adjacent(2), &[0]);
        }
        assert_eq!(l.degree_queries(), 2);
        assert_eq!(l.neighbor_queries(), 4);
    }
}
