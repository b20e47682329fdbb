//! Tree decompositions: representation, text format, validation and the
//! normalization conditions (edge-overlapping, minimal, non-repeated).

mod normalize;
mod partition;
mod structure;
mod treewidth;

pub use normalize::{normalize, normalize_traced};
pub use partition::{decomposition_partition, DecompositionPartition, DecompositionPartitionError};
pub use structure::{check_structural_lemmas, StructuralIssue, StructuralReport};
pub use treewidth::{
    elimination_decomposition, exact_treewidth, exact_treewidth_capped, TreewidthError,
    TreewidthResult, DEFAULT_TREEWIDTH_CAP,
};

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Bags plus a forest of links between bag indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<VertexSet>,
    links: Vec<(usize, usize)>,
}

/// First violated decomposition property, with a witness.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Violation {
    #[error("bag {bag} names vertex {vertex}, outside the graph")]
    BagVertexOutOfRange { bag: usize, vertex: Vertex },
    #[error("link ({0}, {1}) names a missing bag")]
    LinkOutOfRange(usize, usize),
    #[error("link from bag {0} to itself")]
    SelfLink(usize),
    #[error("link ({0}, {1}) appears twice")]
    DuplicateLink(usize, usize),
    #[error("vertex {0} is in no bag")]
    VertexUncovered(Vertex),
    #[error("edge ({0}, {1}) is in no bag")]
    EdgeUncovered(Vertex, Vertex),
    #[error("links contain a cycle through ({0}, {1})")]
    LinksNotForest(usize, usize),
    #[error("bags containing vertex {0} are not connected")]
    VertexBagsDisconnected(Vertex),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompParseError {
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: malformed header, expected \"b t\"")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed bag line")]
    MalformedBag { line: usize },
    #[error("line {line}: malformed link line")]
    MalformedLink { line: usize },
    #[error("line {line}: bag id {id} out of range or repeated")]
    BadBagId { line: usize, id: usize },
    #[error("expected {expected} lines, found {found}")]
    CountMismatch { expected: usize, found: usize },
}

impl TreeDecomposition {
    /// Links are stored as `(min, max)` in sorted order; no validation here.
    pub fn new(bags: Vec<VertexSet>, links: Vec<(usize, usize)>) -> Self {
        let mut links: Vec<_> = links.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        links.sort_unstable();
        TreeDecomposition { bags, links }
    }

    /// One bag holding every vertex.
    pub fn single_bag(n: usize) -> Self {
        TreeDecomposition::new(vec![(0..n).collect()], Vec::new())
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    /// `max |X_i| - 1`, or 0 when there are no nonempty bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// `|bags| + |links| + Σ|X_i|`, the quantity every normalization step lowers.
    pub fn size_metric(&self) -> usize {
        self.bags.len() + self.links.len() + self.bags.iter().map(VertexSet::len).sum::<usize>()
    }

    pub fn link_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.links {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    /// The link forest as a graph on bag indices.
    pub fn link_graph(&self) -> Graph {
        Graph::from_edges(self.bags.len(), self.links.iter().copied())
            .expect("links form a simple graph")
    }

    fn bags_of(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); n];
        for (i, b) in self.bags.iter().enumerate() {
            for v in b.iter() {
                out[v].push(i);
            }
        }
        out
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        self.validate(g).is_ok()
    }

    pub fn validate(&self, g: &Graph) -> Result<(), Violation> {
        let n = g.n();
        let b = self.bags.len();
        for (i, bag) in self.bags.iter().enumerate() {
            if let Some(v) = bag.iter().find(|&v| v >= n) {
                return Err(Violation::BagVertexOutOfRange { bag: i, vertex: v });
            }
        }
        let mut seen = HashSet::new();
        for &(a, c) in &self.links {
            if a >= b || c >= b {
                return Err(Violation::LinkOutOfRange(a, c));
            }
            if a == c {
                return Err(Violation::SelfLink(a));
            }
            if !seen.insert((a, c)) {
                return Err(Violation::DuplicateLink(a, c));
            }
        }
        let bags_of = self.bags_of(n);
        if let Some(v) = bags_of.iter().position(Vec::is_empty) {
            return Err(Violation::VertexUncovered(v));
        }
        for (u, v) in g.edges() {
            if !sorted_intersect(&bags_of[u], &bags_of[v]) {
                return Err(Violation::EdgeUncovered(u, v));
            }
        }
        let mut dsu = Dsu::new(b);
        for &(a, c) in &self.links {
            if !dsu.union(a, c) {
                return Err(Violation::LinksNotForest(a, c));
            }
        }
        // in a forest, a node set induces a connected subforest iff it spans
        // exactly (nodes - 1) links
        let mut inner_links = vec![0usize; n];
        for &(a, c) in &self.links {
            for v in intersection(&self.bags[a], &self.bags[c]) {
                inner_links[v] += 1;
            }
        }
        for v in 0..n {
            if inner_links[v] + 1 != bags_of[v].len() {
                return Err(Violation::VertexBagsDisconnected(v));
            }
        }
        Ok(())
    }

    /// Linked bags always share a vertex.
    pub fn is_edge_overlapping(&self) -> bool {
        self.links
            .iter()
            .all(|&(a, b)| intersection(&self.bags[a], &self.bags[b]).next().is_some())
    }

    /// No bag is empty and no bag is contained in a linked bag.
    pub fn is_non_repeated(&self) -> bool {
        self.bags.iter().all(|b| !b.is_empty())
            && self.links.iter().all(|&(a, b)| {
                !self.bags[a].is_subset(&self.bags[b]) && !self.bags[b].is_subset(&self.bags[a])
            })
    }

    /// No vertex can be dropped from any bag without breaking validity.
    /// Assumes `self` is valid for `g`.
    pub fn is_minimal(&self, g: &Graph) -> bool {
        let bags_of = self.bags_of(g.n());
        let adj = self.link_adjacency();
        self.bags.iter().enumerate().all(|(i, bag)| {
            bag.iter()
                .all(|x| !removable(g, &self.bags, &bags_of, &adj, i, x))
        })
    }

    pub fn parse(text: &str) -> Result<Self, DecompParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(DecompParseError::MissingHeader)?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| DecompParseError::MalformedHeader { line: hl })?;
        let [b, t] = nums[..] else {
            return Err(DecompParseError::MalformedHeader { line: hl });
        };
        let mut bags: Vec<Option<VertexSet>> = vec![None; b];
        let mut links = Vec::with_capacity(t.min(1 << 20));
        let mut found = 0;
        for (line, text) in lines {
            let nums: Vec<usize> = text
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| {
                    if found < b {
                        DecompParseError::MalformedBag { line }
                    } else {
                        DecompParseError::MalformedLink { line }
                    }
                })?;
            if found < b {
                if nums.len() < 2 || nums.len() != nums[1] + 2 {
                    return Err(DecompParseError::MalformedBag { line });
                }
                let id = nums[0];
                if id >= b || bags[id].is_some() {
                    return Err(DecompParseError::BadBagId { line, id });
                }
                bags[id] = Some(nums[2..].iter().copied().collect());
            } else if found < b + t {
                let [x, y] = nums[..] else {
                    return Err(DecompParseError::MalformedLink { line });
                };
                links.push((x, y));
            } else {
                return Err(DecompParseError::CountMismatch {
                    expected: b + t,
                    found: found + 1,
                });
            }
            found += 1;
        }
        if found != b + t {
            return Err(DecompParseError::CountMismatch { expected: b + t, found });
        }
        let bags = bags.into_iter().map(|b| b.expect("all ids seen")).collect();
        Ok(TreeDecomposition::new(bags, links))
    }

    /// Header `b t`, then `id size v1 .. v_size` per bag, then `a b` per link.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.bags.len(), self.links.len());
        for (i, bag) in self.bags.iter().enumerate() {
            let _ = write!(out, "{i} {}", bag.len());
            for v in bag.iter() {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        for &(a, b) in &self.links {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }
}

/// Whether `x` can leave bag `i` with the decomposition staying valid.
pub(crate) fn removable(
    g: &Graph,
    bags: &[VertexSet],
    bags_of: &[Vec<usize>],
    adj: &[Vec<usize>],
    i: usize,
    x: Vertex,
) -> bool {
    if bags_of[x].len() < 2 {
        return false;
    }
    if adj[i].iter().filter(|&&j| bags[j].contains(x)).count() > 1 {
        return false;
    }
    g.neighbors(x)
        .iter()
        .all(|&y| bags_of[x].iter().any(|&j| j != i && bags[j].contains(y)))
}

fn intersection<'a>(a: &'a VertexSet, b: &'a VertexSet) -> impl Iterator<Item = Vertex> + 'a {
    a.iter().filter(move |&v| b.contains(v))
}

fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// false if already joined
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build;

    fn td(bags: &[&[usize]], links: &[(usize, usize)]) -> TreeDecomposition {
        TreeDecomposition::new(
            bags.iter().map(|b| b.iter().copied().collect()).collect(),
            links.to_vec(),
        )
    }

    #[test]
    fn single_bag_is_valid() {
        let g = build::complete(4);
        assert_eq!(TreeDecomposition::single_bag(4).validate(&g), Ok(()));
        assert_eq!(TreeDecomposition::single_bag(4).width(), 3);
    }

    #[test]
    fn path_decomposition_of_path() {
        let g = build::path(3);
        let d = td(&[&[0, 1], &[1, 2]], &[(0, 1)]);
        assert_eq!(d.validate(&g), Ok(()));
        assert_eq!(d.width(), 1);
        let unlinked = td(&[&[0, 1], &[1, 2]], &[]);
        assert_eq!(unlinked.validate(&g), Err(Violation::VertexBagsDisconnected(1)));
    }

    #[test]
    fn violations_have_witnesses() {
        let g = build::path(3);
        assert_eq!(
            td(&[&[0, 1]], &[]).validate(&g),
            Err(Violation::VertexUncovered(2))
        );
        assert_eq!(
            td(&[&[0, 1], &[2]], &[(0, 1)]).validate(&g),
            Err(Violation::EdgeUncovered(1, 2))
        );
        assert_eq!(
            td(&[&[0, 1, 2], &[1], &[2]], &[(0, 1), (1, 2), (0, 2)]).validate(&g),
            Err(Violation::LinksNotForest(1, 2))
        );
        assert_eq!(
            td(&[&[0, 1, 2]], &[(0, 0)]).validate(&g),
            Err(Violation::SelfLink(0))
        );
        assert_eq!(
            td(&[&[0, 1, 5]], &[]).validate(&g),
            Err(Violation::BagVertexOutOfRange { bag: 0, vertex: 5 })
        );
        assert_eq!(
            td(&[&[0, 1, 2]], &[(0, 3)]).validate(&g),
            Err(Violation::LinkOutOfRange(0, 3))
        );
    }

    #[test]
    fn text_round_trip() {
        let d = td(&[&[0, 1], &[1, 2], &[]], &[(1, 0)]);
        let text = d.to_text();
        assert_eq!(text, "3 1\n0 2 0 1\n1 2 1 2\n2 0\n0 1\n");
        assert_eq!(TreeDecomposition::parse(&text).unwrap(), d);
    }

    #[test]
    fn parse_accepts_any_bag_order_and_rejects_garbage() {
        let d = TreeDecomposition::parse("2 1\n1 1 2\n0 2 0 1\n0 1\n").unwrap();
        assert_eq!(d.bags()[1], VertexSet::from([2]));
        assert_eq!(
            TreeDecomposition::parse("2 0\n0 1 0\n0 1 1\n"),
            Err(DecompParseError::BadBagId { line: 3, id: 0 })
        );
        assert_eq!(
            TreeDecomposition::parse("1 0\n0 2 1\n"),
            Err(DecompParseError::MalformedBag { line: 2 })
        );
        assert_eq!(
            TreeDecomposition::parse("1 1\n0 1 0\n"),
            Err(DecompParseError::CountMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn normalization_conditions() {
        let g = build::path(3);
        let d = td(&[&[0, 1], &[1, 2]], &[(0, 1)]);
        assert!(d.is_edge_overlapping() && d.is_non_repeated() && d.is_minimal(&g));
        let padded = td(&[&[0, 1, 2], &[1, 2]], &[(0, 1)]);
        assert!(!padded.is_non_repeated());
        assert!(!padded.is_minimal(&g));
    }
}
