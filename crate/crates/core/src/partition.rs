//! Vertex partitions and their text format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("vertex {0} is assigned to more than one component")]
    Overlap(Vertex),
    #[error("vertex {0} is not covered by any component")]
    Uncovered(Vertex),
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("line {line}: malformed partition line")]
    Malformed { line: usize },
}

/// A partition of `[0, n)` into disjoint components.
///
/// Components are stored in canonical order (by smallest member), so two
/// partitions describing the same function `v -> f(v)` compare equal no matter
/// how they were produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    component_of: Vec<usize>,
    components: Vec<VertexSet>,
    cut_edges: usize,
}

impl Partition {
    pub fn from_components(g: &Graph, sets: Vec<VertexSet>) -> Result<Self, PartitionError> {
        let n = g.n();
        let mut sets: Vec<VertexSet> = sets.into_iter().filter(|s| !s.is_empty()).collect();
        sets.sort_by_key(|s| s.smallest());
        let mut component_of = vec![usize::MAX; n];
        for (i, s) in sets.iter().enumerate() {
            for v in s.iter() {
                if v >= n {
                    return Err(PartitionError::OutOfRange { vertex: v, n });
                }
                if component_of[v] != usize::MAX {
                    return Err(PartitionError::Overlap(v));
                }
                component_of[v] = i;
            }
        }
        if let Some(v) = component_of.iter().position(|&c| c == usize::MAX) {
            return Err(PartitionError::Uncovered(v));
        }
        let cut_edges = g
            .edges()
            .filter(|&(u, v)| component_of[u] != component_of[v])
            .count();
        Ok(Partition {
            component_of,
            components: sets,
            cut_edges,
        })
    }

    /// Builds a partition from per-vertex answers `f(v)`, checking that the
    /// answers are mutually consistent.
    pub fn from_answers(g: &Graph, answers: &[VertexSet]) -> Result<Self, PartitionError> {
        let mut sets = Vec::new();
        for (v, s) in answers.iter().enumerate() {
            if !s.contains(v) {
                return Err(PartitionError::Uncovered(v));
            }
            if s.smallest() == Some(v) {
                sets.push(s.clone());
            }
        }
        let p = Partition::from_components(g, sets)?;
        for (v, s) in answers.iter().enumerate() {
            if p.component(v) != s {
                return Err(PartitionError::Overlap(v));
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.component_of.len()
    }

    pub fn component_of(&self, v: Vertex) -> usize {
        self.component_of[v]
    }

    pub fn component(&self, v: Vertex) -> &VertexSet {
        &self.components[self.component_of[v]]
    }

    pub fn components(&self) -> &[VertexSet] {
        &self.components
    }

    pub fn cut_edges(&self) -> usize {
        self.cut_edges
    }

    pub fn max_component(&self) -> usize {
        self.components.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Component size -> number of components of that size.
    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.components {
            *h.entry(c.len()).or_insert(0) += 1;
        }
        h
    }

    /// `n` lines `v rep`, where `rep` is the smallest member of `f(v)`.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.n() * 8);
        for v in 0..self.n() {
            let rep = self.component(v).smallest().expect("components are nonempty");
            let _ = writeln!(out, "{v} {rep}");
        }
        out
    }

    pub fn parse(g: &Graph, text: &str) -> Result<Self, PartitionError> {
        let mut reps: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            let (Some(Ok(v)), Some(Ok(rep)), None) = (it.next(), it.next(), it.next()) else {
                return Err(PartitionError::Malformed { line: i + 1 });
            };
            reps.entry(rep).or_default().push(v);
        }
        Partition::from_components(g, reps.into_values().map(VertexSet::from).collect())
    }
}
