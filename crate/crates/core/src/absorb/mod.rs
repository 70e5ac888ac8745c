//! Tripartite absorber constructions: triangle-divisibility, the path-cover
//! with its cycle-shortening pipeline, sphere-covers, cycle gadgets `A(H)`,
//! and a lazily instantiated end-to-end absorption demo.

mod cycles;
mod demo;
mod gadget;
mod path_cover;
mod sphere;

use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::Rng as _;

use crate::graph::{next_part, prev_part, TripartiteGraph, Vertex};
use crate::rng::Rng;

pub use cycles::{decompose_into_tripartite_cycles, is_tripartite_cycle, verify_cycle_partition};
pub use demo::{absorb_graph, absorber_demo, divisible_masks, Absorption, DemoReport};
pub use gadget::{construct_cycle_gadget, gadget_search, RootedGadget};
pub use path_cover::{absorb_cycles, path_cover, shorten_cycles, smallest_mu, CycleAbsorption, PathCover, Shortened};
pub use sphere::{sphere_cover, standalone_sphere, SphereCover};

/// A triangle, one vertex per part in any order.
pub type Tri = [Vertex; 3];

/// Every vertex has the same degree to both other parts.
pub fn is_triangle_divisible(g: &TripartiteGraph) -> bool {
    g.vertices().all(|v| g.degree_to(v, next_part(v.part)) == g.degree_to(v, prev_part(v.part)))
}

pub(crate) fn edge_key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Whether `tris` are edge-disjoint triangles of `g` whose union is `E(g)`.
pub fn verify_triangle_decomposition(g: &TripartiteGraph, tris: &[Tri]) -> bool {
    let mut used = HashSet::with_capacity(3 * tris.len());
    for t in tris {
        let mut parts = t.map(|v| v.part);
        parts.sort_unstable();
        if parts != [0, 1, 2] {
            return false;
        }
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            if !g.has_edge(a, b) || !used.insert(edge_key(a, b)) {
                return false;
            }
        }
    }
    used.len() == g.edge_count()
}

/// Edge-disjoint union of random tripartite closed walks, so divisible by
/// construction. Each walk has length `3k` with `k` uniform in `1..=max_k`
/// and is rejected if it reuses an edge.
pub fn random_divisible_graph(sizes: [usize; 3], walks: usize, max_k: usize, rng: &mut Rng) -> TripartiteGraph {
    let mut g = TripartiteGraph::new(sizes);
    if sizes.contains(&0) {
        return g;
    }
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < walks && attempts < 100 * walks.max(1) {
        attempts += 1;
        let k = rng.random_range(1..=max_k.max(1));
        let start = rng.random_range(0..3u8);
        let forward = rng.random::<bool>();
        let walk: Vec<Vertex> = (0..3 * k)
            .map(|i| {
                let step = if forward { i % 3 } else { (3 - i % 3) % 3 };
                let part = (start + step as u8) % 3;
                let choices: Vec<u32> = (0..sizes[part as usize] as u32).collect();
                Vertex::new(part, *choices.choose(rng).unwrap())
            })
            .collect();
        let mut edges = HashSet::new();
        let ok = (0..walk.len()).all(|i| {
            let (a, b) = (walk[i], walk[(i + 1) % walk.len()]);
            !g.has_edge(a, b) && edges.insert(edge_key(a, b))
        });
        if ok {
            for (a, b) in edges {
                g.add_edge(a, b).expect("walk edges join distinct parts");
            }
            accepted += 1;
        }
    }
    g
}
