//! Local search for isolated neighborhoods, enumeration of all of them, and
//! discovery of the vertices whose search result covers a given vertex.
//!
//! The search runs BFS from `v` in the graph minus a set `R` of removed
//! vertices, keeping the first `k` vertices discovered. If that set is a
//! `(k, δ, c)`-isolated neighborhood in the original graph it is returned.
//! Otherwise the search branches on which vertex of the BFS set to remove
//! next.
//!
//! Branching follows the BFS discovery order. Removing the `i`-th discovered
//! vertex `w` means guessing that `w` is the first discovered vertex outside
//! the target set, so the `i - 1` vertices discovered before it are forced
//! into the target and are never removed deeper in that branch. Every target
//! `T` is reached along exactly one branch, in which `R ⊆ N(T)` holds, which
//! gives three prunes that never lose a target:
//!
//! * depth: `|R| <= |N(T)| <= min(c, ⌊δk⌋)`;
//! * exhausted component: when BFS exhausts the component `C` of `v`, then
//!   `T ⊆ C`, so `|R| <= δ|C|`, and every forced vertex must lie in `C`;
//! * forced vertices are never removed.
//!
//! So the search succeeds exactly when some isolated neighborhood exists.
//!
//! Enumeration does not use this search. It grows connected sets from `v`,
//! sending each frontier vertex either into the set or into its boundary, so
//! every connected set with a small boundary appears at exactly one leaf.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::isolation::is_isolated_with;
use crate::query::{Adjacency, Probe, QueryLedger};
use crate::rational::{self, Rational};

/// Constant `C` in the per-call query bound `C · max(d, 1) · k^(c+1)`.
pub const QUERY_BOUND_CONSTANT: u64 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    pub k: usize,
    pub delta: Rational,
    pub c: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BudgetError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("delta must be positive")]
    NonPositiveDelta,
}

impl SearchBudget {
    /// δ may exceed 1; callers wanting the strict range check it themselves.
    pub fn new(k: usize, delta: Rational, c: usize) -> Result<Self, BudgetError> {
        if k == 0 {
            return Err(BudgetError::ZeroK);
        }
        if *delta.numer() == 0 {
            return Err(BudgetError::NonPositiveDelta);
        }
        Ok(SearchBudget { k, delta, c })
    }

    /// Largest number of removals a successful branch can need.
    fn depth_cap(&self) -> usize {
        let by_conductance = rational::floor_u64(&(self.delta * Ratio::from_integer(self.k as u64)));
        self.c.min(usize::try_from(by_conductance).unwrap_or(usize::MAX))
    }

    /// `C · max(d, 1) · k^(c+1)`, saturating.
    pub fn query_bound(&self, d: usize) -> u64 {
        let pow = (self.k as u64).saturating_pow(self.c as u32 + 1);
        QUERY_BOUND_CONSTANT
            .saturating_mul(d.max(1) as u64)
            .saturating_mul(pow)
    }
}

/// An isolated neighborhood of `v` if one exists, else `{v}`.
pub fn find_neighborhood(
    g: &Graph,
    ledger: &mut QueryLedger,
    v: Vertex,
    budget: &SearchBudget,
) -> VertexSet {
    find_neighborhood_with(&mut Probe::new(g, ledger), v, budget)
}

pub fn find_neighborhood_with<A: Adjacency>(adj: &mut A, v: Vertex, budget: &SearchBudget) -> VertexSet {
    // the branching search is slow to exhaust, so settle existence first
    let mut exists = false;
    Grow::new(adj, v, budget).run(&mut |_| {
        exists = true;
        true
    });
    if !exists {
        return VertexSet::singleton(v);
    }
    let mut found = None;
    Search::new(adj, v, budget).run(&mut |s| {
        found = Some(s);
        true
    });
    found.unwrap_or_else(|| VertexSet::singleton(v))
}

/// Every isolated neighborhood of `v`, sorted lexicographically.
pub fn enumerate_neighborhoods(
    g: &Graph,
    ledger: &mut QueryLedger,
    v: Vertex,
    budget: &SearchBudget,
) -> Vec<VertexSet> {
    enumerate_neighborhoods_with(&mut Probe::new(g, ledger), v, budget)
}

pub fn enumerate_neighborhoods_with<A: Adjacency>(
    adj: &mut A,
    v: Vertex,
    budget: &SearchBudget,
) -> Vec<VertexSet> {
    let mut all = Vec::new();
    Grow::new(adj, v, budget).run(&mut |inside| {
        all.push(VertexSet::from(inside.to_vec()));
        false
    });
    all.sort_unstable();
    all
}

/// Union of all isolated neighborhoods of `v` (empty if there are none).
pub fn neighborhood_union_with<A: Adjacency>(adj: &mut A, v: Vertex, budget: &SearchBudget) -> VertexSet {
    let mut union = BTreeSet::new();
    Grow::new(adj, v, budget).run(&mut |inside| {
        union.extend(inside.iter().copied());
        false
    });
    union.into_iter().collect()
}

pub fn neighborhood_union(g: &Graph, ledger: &mut QueryLedger, v: Vertex, budget: &SearchBudget) -> VertexSet {
    neighborhood_union_with(&mut Probe::new(g, ledger), v, budget)
}

/// Vertices `u` with `v ∈ find_neighborhood(u)`, ascending. Always contains `v`.
pub fn find_coverers(g: &Graph, ledger: &mut QueryLedger, v: Vertex, budget: &SearchBudget) -> Vec<Vertex> {
    let mut probe = Probe::new(g, ledger);
    let mut memo = HashMap::new();
    find_coverers_with(&mut probe, v, budget, &mut |adj, u| {
        memo.entry(u)
            .or_insert_with(|| find_neighborhood_with(adj, u, budget))
            .clone()
    })
}

/// Like [`find_coverers`], with the per-vertex search supplied by the caller
/// (so sessions can cache it). `search(adj, u)` must equal
/// `find_neighborhood_with(adj, u, budget)`.
pub fn find_coverers_with<A, F>(adj: &mut A, v: Vertex, budget: &SearchBudget, search: &mut F) -> Vec<Vertex>
where
    A: Adjacency,
    F: FnMut(&mut A, Vertex) -> VertexSet,
{
    // u covers v only through an isolated neighborhood containing both
    let mut candidates: BTreeSet<Vertex> = neighborhood_union_with(adj, v, budget).iter().collect();
    candidates.insert(v);
    candidates
        .into_iter()
        .filter(|&u| search(adj, u).contains(v))
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("family has {0} sets, above the limit of {MAX_COVER_FAMILY}")]
pub struct CoverFamilyTooLarge(pub usize);

pub const MAX_COVER_FAMILY: usize = 20;

/// Size of the smallest subfamily with the same union, by exhaustive search.
pub fn min_cover_bruteforce(family: &[VertexSet]) -> Result<usize, CoverFamilyTooLarge> {
    let f = family.len();
    if f > MAX_COVER_FAMILY {
        return Err(CoverFamilyTooLarge(f));
    }
    let universe: Vec<Vertex> = family
        .iter()
        .flat_map(|s| s.iter())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let words = universe.len().div_ceil(64).max(1);
    let index: HashMap<Vertex, usize> = universe.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let masks: Vec<Vec<u64>> = family
        .iter()
        .map(|s| {
            let mut m = vec![0u64; words];
            for x in s.iter() {
                let i = index[&x];
                m[i / 64] |= 1 << (i % 64);
            }
            m
        })
        .collect();
    let mut full = vec![0u64; words];
    for m in &masks {
        for (a, b) in full.iter_mut().zip(m) {
            *a |= b;
        }
    }
    // union of each subfamily, built from the subfamily without its lowest set
    let mut unions = vec![0u64; words << f];
    let mut best = f;
    for sub in 1usize..1 << f {
        let low = sub.trailing_zeros() as usize;
        let rest = sub & (sub - 1);
        for w in 0..words {
            unions[sub * words + w] = unions[rest * words + w] | masks[low][w];
        }
        if (sub.count_ones() as usize) < best && unions[sub * words..(sub + 1) * words] == full[..] {
            best = sub.count_ones() as usize;
        }
    }
    Ok(if full.iter().all(|&w| w == 0) { 0 } else { best })
}

struct Search<'a, A> {
    adj: &'a mut A,
    v: Vertex,
    budget: &'a SearchBudget,
    depth_cap: usize,
    removed: Vec<Vertex>,
    forced: HashSet<Vertex>,
}

impl<'a, A: Adjacency> Search<'a, A> {
    fn new(adj: &'a mut A, v: Vertex, budget: &'a SearchBudget) -> Self {
        Search {
            adj,
            v,
            budget,
            depth_cap: budget.depth_cap(),
            removed: Vec::new(),
            forced: HashSet::new(),
        }
    }



    /// Calls `emit` on each isolated neighborhood met; stops when it returns true.
    fn run(mut self, emit: &mut dyn FnMut(VertexSet) -> bool) {
        self.node(emit);
    }

    fn bfs(&mut self) -> (Vec<Vertex>, bool) {
        let k = self.budget.k;
        let mut order = vec![self.v];
        let mut seen: HashSet<Vertex> = HashSet::from([self.v]);
        let mut head = 0;
        while head < order.len() && order.len() < k {
            let u = order[head];
            head += 1;
            let nbrs = self.adj.adjacent(u).to_vec();
            for w in nbrs {
                if !self.removed.contains(&w) && seen.insert(w) {
                    order.push(w);
                    if order.len() == k {
                        break;
                    }
                }
            }
        }
        let exhausted = order.len() < k;
        (order, exhausted)
    }

    fn node(&mut self, emit: &mut dyn FnMut(VertexSet) -> bool) -> bool {
        let (order, exhausted) = self.bfs();
        let set = VertexSet::from(order.clone());
        let b = self.budget;
        if is_isolated_with(self.adj, self.v, &set, b.k, b.delta, b.c) && emit(set) {
            return true;
        }
        let depth = self.removed.len();
        if depth >= self.depth_cap {
            return false;
        }
        if exhausted {
            let room = b.delta * Ratio::from_integer(order.len() as u64);
            if Ratio::from_integer(depth as u64 + 1) > room {
                return false;
            }
            if self.forced.len() > order.len() || !self.forced.iter().all(|f| order.contains(f)) {
                return false;
            }
        }
        let mut newly_forced = Vec::new();
        let mut stop = false;
        for i in 1..order.len() {
            let w = order[i];
            if !self.forced.contains(&w) {
                self.removed.push(w);
                stop = self.node(emit);
                self.removed.pop();
                if stop {
                    break;
                }
            }
            // later branches keep w in the target
            if self.forced.insert(w) {
                newly_forced.push(w);
            }
        }
        for w in newly_forced {
            self.forced.remove(&w);
        }
        stop
    }
}

/// Enumerates connected sets `T ∋ v` with `|T| <= k` and `|N(T)| <= min(c, ⌊δk⌋)`
/// by deciding, for one frontier vertex at a time, whether it joins `T` or
/// `N(T)`. Each such set is reached at exactly one leaf, where the undecided
/// frontier is empty and the excluded vertices are exactly `N(T)`.
struct Grow<'a, A> {
    adj: &'a mut A,
    budget: &'a SearchBudget,
    cap: usize,
    inside: Vec<Vertex>,
    outside: Vec<Vertex>,
    done: bool,
}

impl<'a, A: Adjacency> Grow<'a, A> {
    fn new(adj: &'a mut A, v: Vertex, budget: &'a SearchBudget) -> Self {
        Grow {
            adj,
            budget,
            cap: budget.depth_cap(),
            inside: vec![v],
            outside: Vec::new(),
            done: false,
        }
    }

    /// Calls `emit` with the members of every isolated neighborhood until it
    /// returns `true`.
    fn run(mut self, emit: &mut dyn FnMut(&[Vertex]) -> bool) {
        let v = self.inside[0];
        let mut pending: Vec<Vertex> = self.adj.adjacent(v).to_vec();
        self.node(&mut pending, emit);
    }

    /// Decides the top of `pending`; leaves it as it was on return.
    fn node(&mut self, pending: &mut Vec<Vertex>, emit: &mut dyn FnMut(&[Vertex]) -> bool) {
        let (k, cap) = (self.budget.k, self.cap);
        if self.done || self.outside.len() > cap {
            return;
        }
        if pending.len() > (k - self.inside.len()) + (cap - self.outside.len()) {
            return;
        }
        let Some(y) = pending.pop() else {
            let eta = self.outside.len() as u64;
            if eta <= self.budget.c as u64
                && Ratio::from_integer(eta) <= self.budget.delta * Ratio::from_integer(self.inside.len() as u64)
            {
                self.done = emit(&self.inside);
            }
            return;
        };
        // y joins the boundary
        self.outside.push(y);
        self.node(pending, emit);
        self.outside.pop();
        // y joins the set, its undecided neighbors become pending
        if self.inside.len() < k {
            let mark = pending.len();
            for &z in self.adj.adjacent(y) {
                if !self.inside.contains(&z) && !self.outside.contains(&z) && !pending.contains(&z) {
                    pending.push(z);
                }
            }
            self.inside.push(y);
            self.node(pending, emit);
            self.inside.pop();
            pending.truncate(mark);
        }
        pending.push(y);
    }
}
