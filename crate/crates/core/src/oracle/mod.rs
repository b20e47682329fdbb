//! The partitioning oracle.
//!
//! Globally: compute `S_v = find_neighborhood(v)` for every vertex, walk the
//! vertices in rank order, and let the still-unassigned part of each `S_v`
//! become a component. Locally, for a query `q`: the component containing
//! `q` was created by the rank-minimal vertex `u` whose search result
//! contains `q`, and it consists of those `w ∈ S_u` whose own rank-minimal
//! coverer is also `u`. Both sides compute the same function.

mod params;

pub use params::{ceil_log2, derive_parameters, OracleParams, ParamError, ParameterMode, ORACLE_QUERY_BOUND_CONSTANT};

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::neighborhood::{find_coverers_with, find_neighborhood_with, SearchBudget};
use crate::partition::Partition;
use crate::query::{Probe, QueryLedger};

/// Random-looking priority of a vertex; ties in `value` go to the smaller id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank {
    pub value: u64,
    pub vertex: Vertex,
}

/// SplitMix64 finalizer applied to `seed + (v + 1) · φ64`.
pub fn rank(seed: u64, v: Vertex) -> Rank {
    let mut z = seed.wrapping_add((v as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    Rank {
        value: z ^ (z >> 31),
        vertex: v,
    }
}

/// `S_v` for every vertex, computed in parallel.
pub fn all_neighborhoods(g: &Graph, budget: &SearchBudget) -> Vec<VertexSet> {
    (0..g.n())
        .into_par_iter()
        .map(|v| find_neighborhood_with(&mut &*g, v, budget))
        .collect()
}

/// Walks vertices by rank; the unassigned part of each `S_v` becomes a component.
pub fn assign_by_rank(g: &Graph, neighborhoods: &[VertexSet], seed: u64) -> Partition {
    let mut order: Vec<Rank> = (0..g.n()).map(|v| rank(seed, v)).collect();
    order.sort_unstable();
    let mut marked = vec![false; g.n()];
    let mut components = Vec::new();
    for r in order {
        let fresh: VertexSet = neighborhoods[r.vertex]
            .iter()
            .filter(|&w| !marked[w])
            .collect();
        for w in fresh.iter() {
            marked[w] = true;
        }
        components.push(fresh);
    }
    Partition::from_components(g, components).expect("every vertex marks itself at the latest")
}

pub fn global_partition(g: &Graph, params: &OracleParams) -> Partition {
    assign_by_rank(g, &all_neighborhoods(g, &params.budget()), params.seed)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("vertex {q} out of range for n = {n}")]
    OutOfRange { q: Vertex, n: usize },
}

/// Search results and coverer lists for one graph and budget. They do not
/// depend on the seed, so sessions that differ only in seed may share one.
#[derive(Debug)]
pub struct CoverCache {
    budget: SearchBudget,
    found: Mutex<HashMap<Vertex, VertexSet>>,
    coverers: Mutex<HashMap<Vertex, Vec<Vertex>>>,
}

impl CoverCache {
    pub fn new(budget: SearchBudget) -> Self {
        CoverCache {
            budget,
            found: Mutex::default(),
            coverers: Mutex::default(),
        }
    }

    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }
}

/// Local access to the partition.
///
/// Answers depend only on the graph and the seed. The optional cache stores
/// search results and coverer lists across calls; it changes query counts,
/// never answers. Use an uncached session to measure per-call cost.
pub struct OracleSession<'g> {
    graph: &'g Graph,
    params: OracleParams,
    budget: SearchBudget,
    cache: Option<Arc<CoverCache>>,
    ledger: Mutex<QueryLedger>,
    calls: AtomicU64,
}

impl<'g> OracleSession<'g> {
    pub fn new(graph: &'g Graph, params: OracleParams) -> Self {
        let budget = params.budget();
        OracleSession {
            graph,
            params,
            budget,
            cache: None,
            ledger: Mutex::new(QueryLedger::new()),
            calls: AtomicU64::new(0),
        }
    }

    pub fn cached(graph: &'g Graph, params: OracleParams) -> Self {
        let cache = Arc::new(CoverCache::new(params.budget()));
        OracleSession::sharing(graph, params, cache)
    }

    /// A session using `cache`, which must have been built for the same graph.
    ///
    /// # Panics
    /// If the cache was built for a different budget.
    pub fn sharing(graph: &'g Graph, params: OracleParams, cache: Arc<CoverCache>) -> Self {
        assert_eq!(cache.budget, params.budget(), "cache built for another budget");
        OracleSession {
            cache: Some(cache),
            ..OracleSession::new(graph, params)
        }
    }

    pub fn cache(&self) -> Option<&Arc<CoverCache>> {
        self.cache.as_ref()
    }

    pub fn params(&self) -> &OracleParams {
        &self.params
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Totals across calls, with one snapshot per call.
    pub fn ledger(&self) -> QueryLedger {
        self.ledger.lock().expect("ledger lock").clone()
    }

    /// `f(q)`. Safe to call concurrently.
    pub fn query(&self, q: Vertex) -> Result<VertexSet, OracleError> {
        let n = self.graph.n();
        if q >= n {
            return Err(OracleError::OutOfRange { q, n });
        }
        let mut local = QueryLedger::new();
        let answer = {
            let mut call = Call {
                session: self,
                probe: Probe::new(self.graph, &mut local),
                found: HashMap::new(),
                leader: HashMap::new(),
            };
            call.answer(q)
        };
        let id = self.calls.fetch_add(1, Ordering::Relaxed);
        self.ledger.lock().expect("ledger lock").absorb(id, &local);
        Ok(answer)
    }
}

pub fn oracle_query(session: &OracleSession<'_>, q: Vertex) -> Result<VertexSet, OracleError> {
    session.query(q)
}

/// State of one oracle call: the query probe plus call-local memos.
struct Call<'s, 'g> {
    session: &'s OracleSession<'g>,
    probe: Probe<'s>,
    found: HashMap<Vertex, VertexSet>,
    leader: HashMap<Vertex, Vertex>,
}

fn search(
    probe: &mut Probe<'_>,
    found: &mut HashMap<Vertex, VertexSet>,
    cache: Option<&CoverCache>,
    budget: &SearchBudget,
    u: Vertex,
) -> VertexSet {
    if let Some(s) = found.get(&u) {
        return s.clone();
    }
    let shared = cache.and_then(|c| c.found.lock().expect("cache lock").get(&u).cloned());
    let s = shared.unwrap_or_else(|| {
        let s = find_neighborhood_with(probe, u, budget);
        if let Some(c) = cache {
            c.found.lock().expect("cache lock").insert(u, s.clone());
        }
        s
    });
    found.insert(u, s.clone());
    s
}

impl Call<'_, '_> {
    fn answer(&mut self, q: Vertex) -> VertexSet {
        let u = self.leader(q);
        let s_u = search(&mut self.probe, &mut self.found, self.session.cache.as_deref(), &self.session.budget, u);
        s_u.iter().filter(|&w| self.leader(w) == u).collect()
    }

    fn coverers(&mut self, w: Vertex) -> Vec<Vertex> {
        let cache = self.session.cache.as_deref();
        if let Some(list) = cache.and_then(|c| c.coverers.lock().expect("cache lock").get(&w).cloned()) {
            return list;
        }
        let budget = &self.session.budget;
        let found = &mut self.found;
        let list = find_coverers_with(&mut self.probe, w, budget, &mut |probe, u| search(probe, found, cache, budget, u));
        if let Some(c) = cache {
            c.coverers.lock().expect("cache lock").insert(w, list.clone());
        }
        list
    }

    /// Rank-minimal coverer of `w`.
    fn leader(&mut self, w: Vertex) -> Vertex {
        if let Some(&u) = self.leader.get(&w) {
            return u;
        }
        let seed = self.session.params.seed;
        let u = self
            .coverers(w)
            .into_iter()
            .min_by_key(|&u| rank(seed, u))
            .expect("every vertex covers itself");
        self.leader.insert(w, u);
        u
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutStats {
    pub cut_edges: usize,
    /// `cut_edges / n`, the quantity bounded by ε.
    pub cut_fraction: f64,
    /// Component size -> number of components.
    pub histogram: BTreeMap<usize, usize>,
    pub max_component: usize,
}

/// Exact statistics from per-vertex access to `f`.
pub fn cut_stats<F: FnMut(Vertex) -> VertexSet>(g: &Graph, mut f: F) -> CutStats {
    let answers: Vec<VertexSet> = (0..g.n()).map(&mut f).collect();
    let cut_edges = g.edges().filter(|&(u, v)| answers[u] != answers[v]).count();
    let mut histogram = BTreeMap::new();
    for (v, s) in answers.iter().enumerate() {
        if s.smallest() == Some(v) {
            *histogram.entry(s.len()).or_insert(0) += 1;
        }
    }
    CutStats {
        cut_edges,
        cut_fraction: if g.n() == 0 { 0.0 } else { cut_edges as f64 / g.n() as f64 },
        max_component: answers.iter().map(VertexSet::len).max().unwrap_or(0),
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build;
    use num_rational::Ratio;

    fn params(k: u64, p: u64, q: u64, h: usize, seed: u64) -> OracleParams {
        OracleParams::practical(Ratio::new(1, 5), 3, h, k, Ratio::new(p, q), seed).unwrap()
    }

    #[test]
    fn rank_is_deterministic_and_total() {
        assert_eq!(rank(7, 3), rank(7, 3));
        assert_ne!(rank(7, 3), rank(8, 3));
        let a = Rank { value: 5, vertex: 1 };
        let b = Rank { value: 5, vertex: 2 };
        assert!(a < b);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let g = Graph::empty(4);
        let p = params(5, 1, 5, 1, 1);
        let part = global_partition(&g, &p);
        assert_eq!(part.cut_edges(), 0);
        let s = OracleSession::new(&g, p);
        for v in 0..4 {
            assert_eq!(s.query(v).unwrap(), VertexSet::singleton(v));
        }
        let st = cut_stats(&g, |v| s.query(v).unwrap());
        assert_eq!((st.cut_edges, st.histogram), (0, BTreeMap::from([(1, 4)])));
    }

    #[test]
    fn single_edge_is_one_component() {
        let g = build::path(2);
        let p = params(2, 1, 2, 0, 3);
        let part = global_partition(&g, &p);
        assert_eq!(part.components(), &[VertexSet::from([0, 1])]);
        let s = OracleSession::new(&g, p);
        assert_eq!(s.query(0).unwrap(), VertexSet::from([0, 1]));
        assert_eq!(s.query(1).unwrap(), VertexSet::from([0, 1]));
        assert_eq!(s.query(2), Err(OracleError::OutOfRange { q: 2, n: 2 }));
    }

    #[test]
    fn local_matches_global_on_a_path() {
        let g = build::path(10);
        for seed in 0..5 {
            let p = params(5, 1, 5, 1, seed);
            let part = global_partition(&g, &p);
            assert_eq!(global_partition(&g, &p), part);
            let plain = OracleSession::new(&g, p.clone());
            let cached = OracleSession::cached(&g, p);
            for v in 0..10 {
                assert_eq!(&plain.query(v).unwrap(), part.component(v));
                assert_eq!(&cached.query(v).unwrap(), part.component(v));
            }
            assert_eq!(plain.ledger().snapshots().len(), 10);
        }
    }

    #[test]
    fn shared_cache_serves_every_seed() {
        let g = build::path(12);
        let cache = Arc::new(CoverCache::new(params(5, 1, 5, 1, 0).budget()));
        for seed in 0..4 {
            let p = params(5, 1, 5, 1, seed);
            let part = global_partition(&g, &p);
            let s = OracleSession::sharing(&g, p, cache.clone());
            for v in 0..12 {
                assert_eq!(&s.query(v).unwrap(), part.component(v));
            }
            if seed > 0 {
                assert_eq!(s.ledger().total(), 0);
            }
        }
    }

    #[test]
    #[should_panic(expected = "another budget")]
    fn cache_budget_must_match() {
        let g = build::path(3);
        let cache = Arc::new(CoverCache::new(params(5, 1, 5, 1, 0).budget()));
        let _ = OracleSession::sharing(&g, params(6, 1, 5, 1, 0), cache);
    }

    #[test]
    fn ten_path_cut_stats() {
        let g = build::path(10);
        let st = cut_stats(&g, |v| if v < 5 { (0..5).collect() } else { (5..10).collect() });
        assert_eq!(st.cut_edges, 1);
        assert_eq!(st.max_component, 5);
    }
}
