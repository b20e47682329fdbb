//! Partitioning bounded-degree forests into components that are almost all
//! `(k, δ, 2)`-isolated.
//!
//! The procedure works on a shrinking copy of the forest. Every live vertex
//! `v` carries the set `s[v]` of original vertices contracted into it; here
//! `s[v]` is represented implicitly by the contraction children of `v`, so it
//! is only materialized when it becomes an output component.
//!
//! 1. Leaves lighter than `k' = 480d/(δε)` are contracted into their neighbor.
//! 2. Every vertex of degree above two becomes a singleton component and each
//!    branch contracted into it becomes a component of its own.
//! 3. The remaining paths are cut from their ends: an end vertex of weight at
//!    least `2/δ` becomes a component, a lighter one is contracted inward.
//! 4. Remaining isolated vertices become components.
//!
//! Whenever several vertices qualify, the smallest id goes first.

use std::collections::BTreeSet;

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::isolation::{cut_size, is_connected_set};
use crate::partition::Partition;
use crate::rational::{self, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestPartitionError {
    #[error("input graph contains a cycle")]
    Cyclic,
    #[error("vertex {vertex} has degree {degree}, above the bound {bound}")]
    DegreeOverBound { vertex: Vertex, degree: usize, bound: usize },
    #[error("degree bound must be at least 2, got {0}")]
    DegreeBoundTooSmall(usize),
    #[error("{0} must lie strictly between 0 and 1/2")]
    ParameterOutOfRange(&'static str),
    #[error("parameters produce a threshold that does not fit in 64-bit rationals")]
    Overflow,
}

/// Output of [`stronger_tree_partition`].
#[derive(Clone, Debug)]
pub struct ForestPartition {
    pub partition: Partition,
    /// Vertices whose component is a `(k, δ, 2)`-isolated neighborhood, verified.
    pub good: VertexSet,
    /// Per component (canonical order): whether it is isolated.
    pub good_components: Vec<bool>,
    /// Component size bound `481 d² / (δε)`.
    pub k: Rational,
    /// Leaf contraction threshold `480 d / (δε)`.
    pub k_prime: Rational,
}

pub(crate) fn check_open_half(r: &Rational, name: &'static str) -> Result<(), ForestPartitionError> {
    if *r.numer() == 0 || *r >= Ratio::new(1, 2) {
        return Err(ForestPartitionError::ParameterOutOfRange(name));
    }
    Ok(())
}

pub fn stronger_tree_partition(
    forest: &Graph,
    epsilon: Rational,
    delta: Rational,
    d: usize,
) -> Result<ForestPartition, ForestPartitionError> {
    check_open_half(&epsilon, "epsilon")?;
    check_open_half(&delta, "delta")?;
    if d < 2 {
        return Err(ForestPartitionError::DegreeBoundTooSmall(d));
    }
    if let Some(v) = (0..forest.n()).find(|&v| forest.degree(v) > d) {
        return Err(ForestPartitionError::DegreeOverBound {
            vertex: v,
            degree: forest.degree(v),
            bound: d,
        });
    }
    if !forest.is_forest() {
        return Err(ForestPartitionError::Cyclic);
    }

    let de = rational::mul(&delta, &epsilon).ok_or(ForestPartitionError::Overflow)?;
    let k_prime = rational::div(&Ratio::from_integer(480 * d as u64), &de)
        .ok_or(ForestPartitionError::Overflow)?;
    let k = rational::div(&Ratio::from_integer(481 * (d * d) as u64), &de)
        .ok_or(ForestPartitionError::Overflow)?;
    let path_cut = rational::div(&Ratio::from_integer(2), &delta).ok_or(ForestPartitionError::Overflow)?;

    let mut state = Contraction::new(forest, k_prime, path_cut);
    state.contract_light_leaves();
    state.split_high_degree();
    state.cut_paths();
    state.flush_isolated();

    let partition = Partition::from_components(forest, state.components)
        .expect("contraction assigns every vertex exactly once");
    let k_floor = rational::floor_u64(&k) as usize;
    let good_components: Vec<bool> = partition
        .components()
        .iter()
        .map(|c| {
            let eta = cut_size(forest, c);
            c.len() <= k_floor
                && eta <= 2
                && Ratio::new(eta as u64, c.len() as u64) <= delta
                && is_connected_set(forest, c)
        })
        .collect();
    let good = (0..forest.n())
        .filter(|&v| good_components[partition.component_of(v)])
        .collect();
    Ok(ForestPartition {
        partition,
        good,
        good_components,
        k,
        k_prime,
    })
}

struct Contraction<'a> {
    forest: &'a Graph,
    live: Vec<bool>,
    degree: Vec<usize>,
    weight: Vec<u64>,
    children: Vec<Vec<Vertex>>,
    components: Vec<VertexSet>,
    k_prime: Rational,
    path_cut: Rational,
}

impl<'a> Contraction<'a> {
    fn new(forest: &'a Graph, k_prime: Rational, path_cut: Rational) -> Self {
        let n = forest.n();
        Contraction {
            forest,
            live: vec![true; n],
            degree: (0..n).map(|v| forest.degree(v)).collect(),
            weight: vec![1; n],
            children: vec![Vec::new(); n],
            components: Vec::new(),
            k_prime,
            path_cut,
        }
    }

    fn live_neighbor(&self, v: Vertex) -> Vertex {
        *self
            .forest
            .neighbors(v)
            .iter()
            .find(|&&w| self.live[w])
            .expect("degree-1 vertex has a live neighbor")
    }

    fn light_leaf(&self, v: Vertex) -> bool {
        self.live[v] && self.degree[v] == 1 && Ratio::from_integer(self.weight[v]) < self.k_prime
    }

    fn contract_into(&mut self, v: Vertex, u: Vertex) {
        self.children[u].push(v);
        self.weight[u] += self.weight[v];
        self.remove(v);
    }

    fn remove(&mut self, v: Vertex) {
        self.live[v] = false;
        for &w in self.forest.neighbors(v) {
            if self.live[w] {
                self.degree[w] -= 1;
            }
        }
        self.degree[v] = 0;
    }

    /// `s[v]`: `v` plus everything contracted into it, transitively.
    fn materialize(&self, v: Vertex) -> VertexSet {
        let mut out = vec![v];
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &c in &self.children[u] {
                out.push(c);
                stack.push(c);
            }
        }
        out.into()
    }

    fn contract_light_leaves(&mut self) {
        let n = self.forest.n();
        let mut queue: BTreeSet<Vertex> = (0..n).filter(|&v| self.light_leaf(v)).collect();
        while let Some(v) = queue.pop_first() {
            if !self.light_leaf(v) {
                continue;
            }
            let u = self.live_neighbor(v);
            self.contract_into(v, u);
            if self.light_leaf(u) {
                queue.insert(u);
            } else {
                queue.remove(&u);
            }
        }
    }

    fn split_high_degree(&mut self) {
        // removals only lower degrees, so one ascending scan visits vertices
        // in the same order as repeatedly picking the smallest qualifying id
        for v in 0..self.forest.n() {
            if !self.live[v] || self.degree[v] <= 2 {
                continue;
            }
            let branches = std::mem::take(&mut self.children[v]);
            for c in branches {
                let comp = self.materialize(c);
                self.components.push(comp);
            }
            self.components.push(VertexSet::singleton(v));
            self.weight[v] = 1;
            self.remove(v);
        }
    }

    fn cut_paths(&mut self) {
        let n = self.forest.n();
        let mut queue: BTreeSet<Vertex> =
            (0..n).filter(|&v| self.live[v] && self.degree[v] == 1).collect();
        while let Some(v) = queue.pop_first() {
            if !self.live[v] || self.degree[v] != 1 {
                continue;
            }
            let u = self.live_neighbor(v);
            if Ratio::from_integer(self.weight[v]) >= self.path_cut {
                let comp = self.materialize(v);
                self.components.push(comp);
                self.remove(v);
            } else {
                self.contract_into(v, u);
            }
            if self.degree[u] == 1 {
                queue.insert(u);
            } else {
                queue.remove(&u);
            }
        }
    }

    fn flush_isolated(&mut self) {
        for v in 0..self.forest.n() {
            if self.live[v] {
                debug_assert_eq!(self.degree[v], 0);
                let comp = self.materialize(v);
                self.components.push(comp);
                self.live[v] = false;
            }
        }
    }
}
