//! Seeded instance generators, with witness decompositions.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{build, Graph, Vertex, VertexSet};
use crate::tree_decomp::TreeDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Forest,
    Cactus,
    PartialKtree,
    Grid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    /// Degree bound.
    pub d: usize,
    /// Treewidth target, used by partial k-trees.
    pub h: usize,
    pub seed: u64,
    /// Random edges added after generation; the witness is dropped if nonzero.
    pub noise_edges: usize,
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    pub witness: Option<TreeDecomposition>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("degree bound {d} too small: need at least {need}")]
    DegreeTooSmall { d: usize, need: usize },
    #[error("grid size {0} is not a perfect square")]
    NotSquare(usize),
    #[error("cannot add {wanted} edges under the degree bound (added {added})")]
    Infeasible { wanted: usize, added: usize },
}

pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (graph, witness) = match spec.family {
        Family::Forest => {
            let (edges, parent) = random_forest(spec.n, spec.d, &mut rng);
            let g = Graph::from_edges(spec.n, edges).expect("forest edges are simple");
            (g, forest_witness(&parent))
        }
        Family::Cactus => cactus(spec.n, spec.d, &mut rng)?,
        Family::PartialKtree => partial_ktree(spec.n, spec.d, spec.h, &mut rng)?,
        Family::Grid => grid(spec.n, spec.d)?,
    };
    if spec.noise_edges == 0 {
        return Ok(Generated {
            graph,
            witness: Some(witness),
        });
    }
    let seed = rng.gen();
    Ok(Generated {
        graph: perturb_far(&graph, spec.noise_edges, spec.d, seed)?,
        witness: None,
    })
}

/// Adds `noise_edges` random non-edges between vertices of degree below `d`.
pub fn perturb_far(g: &Graph, noise_edges: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let slots: usize = degree.iter().map(|&x| d.saturating_sub(x)).sum();
    if slots < 2 * noise_edges {
        return Err(GenError::Infeasible {
            wanted: noise_edges,
            added: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut open: Vec<Vertex> = (0..n).filter(|&v| degree[v] < d).collect();
    let mut added: HashSet<(Vertex, Vertex)> = HashSet::new();
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let mut attempts = 0usize;
    let max_attempts = 100 * (noise_edges + n) + 1000;
    while added.len() < noise_edges {
        attempts += 1;
        if attempts > max_attempts || open.len() < 2 {
            return Err(GenError::Infeasible {
                wanted: noise_edges,
                added: added.len(),
            });
        }
        let i = rng.gen_range(0..open.len());
        let j = rng.gen_range(0..open.len());
        let (u, v) = (open[i].min(open[j]), open[i].max(open[j]));
        if u == v || g.has_edge(u, v) || added.contains(&(u, v)) {
            continue;
        }
        added.insert((u, v));
        edges.push((u, v));
        degree[u] += 1;
        degree[v] += 1;
        open.retain(|&x| degree[x] < d);
    }
    Ok(Graph::from_edges(n, edges).expect("added edges are new and simple"))
}

/// Random attachment: each vertex joins a uniformly random earlier vertex
/// with spare degree, or starts a new tree with probability `1/n`.
/// Returns the edges and the parent of every vertex.
fn random_forest(n: usize, d: usize, rng: &mut ChaCha8Rng) -> (Vec<(Vertex, Vertex)>, Vec<Option<Vertex>>) {
    let mut parent = vec![None; n];
    let mut degree = vec![0usize; n];
    let mut live: Vec<Vertex> = Vec::new();
    let mut edges = Vec::with_capacity(n);
    for v in 0..n {
        let new_tree = live.is_empty() || rng.gen_range(0..n) == 0;
        if !new_tree {
            let i = rng.gen_range(0..live.len());
            let p = live[i];
            parent[v] = Some(p);
            edges.push((p, v));
            degree[p] += 1;
            degree[v] += 1;
            if degree[p] >= d {
                live.swap_remove(i);
            }
        }
        if degree[v] < d {
            live.push(v);
        }
    }
    (edges, parent)
}

/// Bag `v` is `{v, parent(v)}`, linked to the parent's bag.
fn forest_witness(parent: &[Option<Vertex>]) -> TreeDecomposition {
    let bags = parent
        .iter()
        .enumerate()
        .map(|(v, p)| match p {
            Some(p) => VertexSet::from([v, *p]),
            None => VertexSet::singleton(v),
        })
        .collect();
    let links = parent
        .iter()
        .enumerate()
        .filter_map(|(v, p)| p.map(|p| (v, p)))
        .collect();
    TreeDecomposition::new(bags, links)
}

const MAX_CYCLE: usize = 8;

/// Random forest plus edges from a vertex to an ancestor 2..=8 levels up,
/// each closing a cycle on vertices no other cycle uses.
fn cactus(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<(Graph, TreeDecomposition), GenError> {
    if n >= 3 && d < 3 {
        return Err(GenError::DegreeTooSmall { d, need: 3 });
    }
    // leave one slot per vertex for a closing edge
    let (mut edges, parent) = random_forest(n, d.saturating_sub(1).max(1), rng);
    let mut degree = vec![0usize; n];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let mut bags: Vec<Vec<Vertex>> = parent
        .iter()
        .enumerate()
        .map(|(v, p)| p.map_or(vec![v], |p| vec![v, p]))
        .collect();
    let mut used = vec![false; n];
    for _ in 0..n {
        let u = rng.gen_range(0..n);
        let len = rng.gen_range(2..=MAX_CYCLE);
        let mut path = vec![u];
        let mut x = u;
        for _ in 0..len {
            match parent[x] {
                Some(p) => {
                    path.push(p);
                    x = p;
                }
                None => break,
            }
        }
        if path.len() < 3 || path.iter().any(|&y| used[y]) {
            continue;
        }
        let w = *path.last().expect("nonempty");
        if degree[u] >= d || degree[w] >= d {
            continue;
        }
        for &y in &path {
            used[y] = true;
        }
        edges.push((u, w));
        degree[u] += 1;
        degree[w] += 1;
        // bags of the path below w's child gain w
        for &y in &path[..path.len() - 2] {
            bags[y].push(w);
        }
    }
    let g = Graph::from_edges(n, edges).expect("cycle edges are new");
    let links = parent
        .iter()
        .enumerate()
        .filter_map(|(v, p)| p.map(|p| (v, p)))
        .collect();
    Ok((g, TreeDecomposition::new(bags.into_iter().map(VertexSet::from).collect(), links)))
}

/// Grows a width-`h` decomposition: each new vertex picks a bag and joins up
/// to `h` of its members that still have spare degree, preferring the lowest
/// degrees. The first edge of each vertex is kept, every other new edge is
/// dropped with probability 1/2.
fn partial_ktree(n: usize, d: usize, h: usize, rng: &mut ChaCha8Rng) -> Result<(Graph, TreeDecomposition), GenError> {
    if d < h + 1 {
        return Err(GenError::DegreeTooSmall { d, need: h + 1 });
    }
    let base = n.min(h + 1);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut degree = vec![0usize; n];
    for a in 0..base {
        for b in a + 1..base {
            edges.push((a, b));
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    let mut bags: Vec<Vec<Vertex>> = vec![(0..base).collect()];
    let mut links = Vec::new();
    let mut open: Vec<usize> = vec![0];
    for v in base..n {
        // sample open bags until one has a member with spare degree
        let mut choice = None;
        while !open.is_empty() {
            let i = rng.gen_range(0..open.len());
            let b = open[i];
            if bags[b].iter().any(|&x| degree[x] < d) {
                choice = Some(b);
                break;
            }
            open.swap_remove(i);
        }
        let Some(b) = choice else {
            // everything is saturated: start a new tree
            bags.push(vec![v]);
            open.push(bags.len() - 1);
            continue;
        };
        let mut members: Vec<Vertex> = bags[b].iter().copied().filter(|&x| degree[x] < d).collect();
        members.shuffle(rng);
        members.sort_by_key(|&x| degree[x]);
        members.truncate(h);
        for (i, &x) in members.iter().enumerate() {
            if i == 0 || rng.gen_bool(0.5) {
                edges.push((x, v));
                degree[x] += 1;
                degree[v] += 1;
            }
        }
        members.push(v);
        bags.push(members);
        links.push((b, bags.len() - 1));
        open.push(bags.len() - 1);
    }
    let g = Graph::from_edges(n, edges).expect("construction edges are simple");
    Ok((g, TreeDecomposition::new(bags.into_iter().map(VertexSet::from).collect(), links)))
}

/// `√n × √n` grid with a path decomposition of width `√n`.
fn grid(n: usize, d: usize) -> Result<(Graph, TreeDecomposition), GenError> {
    let s = (n as f64).sqrt().round() as usize;
    if s * s != n {
        return Err(GenError::NotSquare(n));
    }
    let g = build::grid(s, s);
    if d < g.max_degree() {
        return Err(GenError::DegreeTooSmall { d, need: g.max_degree() });
    }
    if s <= 1 {
        return Ok((g, TreeDecomposition::single_bag(n)));
    }
    let bags: Vec<VertexSet> = (0..n - s).map(|i| (i..=i + s).collect()).collect();
    let links = (1..bags.len()).map(|i| (i - 1, i)).collect();
    Ok((g, TreeDecomposition::new(bags, links)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, n: usize, d: usize, h: usize, seed: u64) -> GenSpec {
        GenSpec {
            family,
            n,
            d,
            h,
            seed,
            noise_edges: 0,
        }
    }

    fn check(s: &GenSpec, width: usize) -> Graph {
        let out = generate(s).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w.validate(&out.graph), Ok(()), "{s:?}");
        assert!(w.width() <= width, "{s:?}");
        assert!(out.graph.max_degree() <= s.d, "{s:?}");
        out.graph
    }

    #[test]
    fn single_vertex_forest() {
        let out = generate(&spec(Family::Forest, 1, 3, 1, 0)).unwrap();
        assert_eq!(out.graph.n(), 1);
        assert_eq!(out.witness.unwrap().bags(), &[VertexSet::singleton(0)]);
    }

    #[test]
    fn families_emit_valid_witnesses() {
        for seed in 0..5 {
            assert!(check(&spec(Family::Forest, 300, 3, 1, seed), 1).is_forest());
            check(&spec(Family::Cactus, 300, 4, 2, seed), 2);
            check(&spec(Family::PartialKtree, 200, 6, 2, seed), 2);
            check(&spec(Family::PartialKtree, 200, 5, 3, seed), 3);
            assert!(check(&spec(Family::PartialKtree, 100, 3, 1, seed), 1).is_forest());
        }
        check(&spec(Family::Grid, 49, 4, 0, 0), 7);
    }

    #[test]
    fn cactus_closes_some_cycles() {
        let g = check(&spec(Family::Cactus, 500, 4, 2, 1), 2);
        let comps = g.components().len();
        assert!(g.m() > g.n() - comps);
    }

    #[test]
    fn reproducible() {
        let s = spec(Family::PartialKtree, 150, 5, 2, 9);
        assert_eq!(generate(&s).unwrap().graph, generate(&s).unwrap().graph);
    }

    #[test]
    fn spec_errors() {
        assert_eq!(
            generate(&spec(Family::PartialKtree, 10, 2, 2, 0)).unwrap_err(),
            GenError::DegreeTooSmall { d: 2, need: 3 }
        );
        assert_eq!(generate(&spec(Family::Grid, 10, 4, 0, 0)).unwrap_err(), GenError::NotSquare(10));
        assert!(perturb_far(&build::path(3), 5, 2, 0).is_err());
    }

    #[test]
    fn perturbation_adds_cycles() {
        let g = generate(&spec(Family::Forest, 200, 3, 1, 4)).unwrap().graph;
        assert_eq!(perturb_far(&g, 0, 3, 1).unwrap(), g);
        let one = perturb_far(&g, 1, 3, 1).unwrap();
        assert_eq!(one.m(), one.n() - one.components().len() + 1);
        let noisy = perturb_far(&g, 40, 3, 2).unwrap();
        assert_eq!(noisy.m(), g.m() + 40);
        assert!(noisy.max_degree() <= 3);
    }
}
