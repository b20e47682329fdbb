//! Sanity checks of the reference implementations themselves.

mod common;

use common::*;
use twpart::apps::{exact_component_optimum, Problem};
use twpart::generators::{generate, Family, GenSpec};
use twpart::graph::build;

#[test]
fn elimination_optimum_matches_small_solvers() {
    for seed in 0..20 {
        let g = random_connected(12, 6, 4, seed);
        for p in Problem::ALL {
            assert_eq!(whole_graph_optimum(&g, p), exact_component_optimum(p, &g).unwrap(), "{p:?} seed {seed}");
        }
    }
}

#[test]
fn elimination_optimum_on_known_graphs() {
    let p7 = build::path(7);
    assert_eq!(whole_graph_optimum(&p7, Problem::Matching), 3);
    assert_eq!(whole_graph_optimum(&p7, Problem::VertexCover), 3);
    assert_eq!(whole_graph_optimum(&p7, Problem::DominatingSet), 3);
    let c9 = build::cycle(9);
    assert_eq!(whole_graph_optimum(&c9, Problem::DominatingSet), 3);
    assert_eq!(whole_graph_optimum(&c9, Problem::VertexCover), 5);
}

#[test]
fn elimination_scales_to_partial_two_trees() {
    let g = generate(&GenSpec { family: Family::PartialKtree, n: 300, d: 4, h: 2, seed: 9, noise_edges: 0 })
        .unwrap()
        .graph;
    let mm = whole_graph_optimum(&g, Problem::Matching);
    let vc = whole_graph_optimum(&g, Problem::VertexCover);
    assert!(mm <= vc && vc <= 2 * mm);
}

#[test]
fn literal_search_agrees_with_brute_force_on_existence() {
    let half = num_rational::Ratio::new(1, 2);
    for seed in 0..30 {
        let g = random_connected(9, 3, 4, seed);
        for v in 0..9 {
            for c in 0..=2 {
                let found = literal_search(&g, v, 5, half, c);
                let all = brute_neighborhoods(&g, v, 5, half, c);
                assert_eq!(found.is_some(), !all.is_empty());
                if let Some(s) = found {
                    assert!(all.contains(&s));
                }
            }
        }
    }
}
