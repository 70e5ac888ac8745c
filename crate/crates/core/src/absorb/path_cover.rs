use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{next_part, prev_part, TripartiteGraph, Vertex};

use super::cycles::{decompose_into_tripartite_cycles, is_tripartite_cycle};

/// `∧X`: for every same-part pair of `X`, `μ` internally disjoint paths of
/// length 3, half of each proper colouring.
#[derive(Clone, Debug)]
pub struct PathCover {
    graph: TripartiteGraph,
    x_sizes: [usize; 3],
    mu: usize,
    /// `(u, v)` with `u < v` to unused paths `[u, a, b, v]`; slot 0 holds
    /// paths with `a` in the part after `u`'s, slot 1 the others.
    registry: BTreeMap<(Vertex, Vertex), [Vec<[Vertex; 4]>; 2]>,
}

/// Builds `∧X` on `X` with parts of the given sizes; `X` occupies the first
/// indices of each part of the returned graph.
pub fn path_cover(x_sizes: [usize; 3], mu: usize) -> Result<PathCover> {
    if mu == 0 || mu % 2 == 1 {
        return Err(Error::Precondition(format!("multiplicity {mu} must be positive and even")));
    }
    let mut graph = TripartiteGraph::new(x_sizes);
    let mut registry = BTreeMap::new();
    for j in 0..3u8 {
        for u in 0..x_sizes[j as usize] as u32 {
            for v in u + 1..x_sizes[j as usize] as u32 {
                let (u, v) = (Vertex::new(j, u), Vertex::new(j, v));
                let mut slots: [Vec<[Vertex; 4]>; 2] = [Vec::new(), Vec::new()];
                for (t, slot) in slots.iter_mut().enumerate() {
                    let (pa, pb) = if t == 0 { (next_part(j), prev_part(j)) } else { (prev_part(j), next_part(j)) };
                    for _ in 0..mu / 2 {
                        let a = graph.add_vertex(pa);
                        let b = graph.add_vertex(pb);
                        for (x, y) in [(u, a), (a, b), (b, v)] {
                            graph.add_edge(x, y).expect("path edges join distinct parts");
                        }
                        slot.push([u, a, b, v]);
                    }
                }
                registry.insert((u, v), slots);
            }
        }
    }
    Ok(PathCover { graph, x_sizes, mu, registry })
}

impl PathCover {
    pub fn graph(&self) -> &TripartiteGraph {
        &self.graph
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn x_sizes(&self) -> [usize; 3] {
        self.x_sizes
    }

    pub fn is_x(&self, v: Vertex) -> bool {
        (v.index as usize) < self.x_sizes[v.part as usize]
    }

    /// Vertices added on top of `X`.
    pub fn new_vertex_count(&self) -> usize {
        self.graph.vertex_count() - self.x_sizes.iter().sum::<usize>()
    }

    /// Unused paths between `u` and `v`, per slot.
    pub fn unused(&self, u: Vertex, v: Vertex) -> [usize; 2] {
        let key = if u < v { (u, v) } else { (v, u) };
        self.registry.get(&key).map_or([0, 0], |s| [s[0].len(), s[1].len()])
    }

    /// Takes an unused path from `from` to `to` whose first inner vertex
    /// lies in `first_part`, oriented from `from`.
    pub fn take(&mut self, from: Vertex, to: Vertex, first_part: u8) -> Option<[Vertex; 4]> {
        if from.part != to.part || from == to {
            return None;
        }
        let j = from.part;
        let (key, slot) = if from < to {
            ((from, to), if first_part == next_part(j) { 0 } else { 1 })
        } else {
            // seen from the larger end, the first inner vertex is `b`
            ((to, from), if first_part == prev_part(j) { 0 } else { 1 })
        };
        let p = self.registry.get_mut(&key)?[slot].pop()?;
        Some(if from < to { p } else { [p[3], p[2], p[1], p[0]] })
    }

    /// Pairs every remaining path with one of the opposite colouring into a
    /// tripartite 6-cycle, consuming the registry.
    pub fn pair_unused(&mut self) -> Result<Vec<Vec<Vertex>>> {
        let mut out = Vec::new();
        for ((u, v), [a, b]) in std::mem::take(&mut self.registry) {
            if a.len() != b.len() {
                return Err(Error::Precondition(format!(
                    "unbalanced augmenting paths between {u} and {v}: {} vs {}",
                    a.len(),
                    b.len()
                )));
            }
            for (p, q) in a.into_iter().zip(b) {
                out.push(vec![p[0], p[1], p[2], p[3], q[2], q[1]]);
            }
        }
        Ok(out)
    }
}

/// Output of [`shorten_cycles`].
#[derive(Clone, Debug, Default)]
pub struct Shortened {
    /// Cycles of length at most 9 covering the input cycles and the spliced paths.
    pub cycles: Vec<Vec<Vertex>>,
    /// Number of splices performed (each consumes two paths).
    pub splices: usize,
}

/// Cuts every cycle longer than 9: pick `c_i`, `c_{i+6}` in `X`, close the
/// segment `c_i..c_{i+6}` with a fresh path into a 9-cycle, and close the
/// rest with the opposite-coloured path between the same two vertices into
/// a cycle three shorter.
pub fn shorten_cycles(cycles: Vec<Vec<Vertex>>, cover: &mut PathCover) -> Result<Shortened> {
    let mut out = Shortened::default();
    for c in cycles {
        if !is_tripartite_cycle(&c) {
            return Err(Error::Precondition("input is not a tripartite cycle".into()));
        }
        let mut c = c;
        while c.len() > 9 {
            let l = c.len();
            // prefer segments swallowing non-X vertices so X stays plentiful
            let best = (0..l)
                .filter(|&i| cover.is_x(c[i]) && cover.is_x(c[(i + 6) % l]))
                .max_by_key(|&i| ((1..6).filter(|&k| !cover.is_x(c[(i + k) % l])).count(), std::cmp::Reverse(i)));
            let Some(i) = best else {
                return Err(Error::SearchFailed(format!("no splice point on a cycle of length {l}")));
            };
            c.rotate_left(i);
            let (s, t) = (c[0], c[6]);
            let dir = c[1].part;
            let exhausted = || Error::SearchFailed(format!("augmenting paths between {s} and {t} exhausted"));
            let p = cover.take(t, s, dir).ok_or_else(exhausted)?;
            let q = cover.take(s, t, dir).ok_or_else(exhausted)?;
            let mut nine = c[..=6].to_vec();
            nine.extend([p[1], p[2]]);
            let mut rest = c[6..].to_vec();
            rest.extend([s, q[1], q[2]]);
            debug_assert!(is_tripartite_cycle(&nine) && is_tripartite_cycle(&rest));
            out.cycles.push(nine);
            out.splices += 1;
            c = rest;
        }
        out.cycles.push(c);
    }
    Ok(out)
}

/// `L ∪ ∧X` cut into tripartite cycles of length at most 9.
#[derive(Clone, Debug)]
pub struct CycleAbsorption {
    /// `L ∪ ∧X`.
    pub union: TripartiteGraph,
    pub cover: PathCover,
    /// Cycles from `L`, shortened.
    pub cycles: Vec<Vec<Vertex>>,
    /// 6-cycles formed by pairing the unused paths.
    pub pairings: Vec<Vec<Vertex>>,
    pub splices: usize,
}

impl CycleAbsorption {
    pub fn all_cycles(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.cycles.iter().chain(&self.pairings)
    }
}

/// Runs decomposition, shortening and pairing for a triangle-divisible `L`
/// on `X` (the graph's own vertex set).
pub fn absorb_cycles(l: &TripartiteGraph, mu: usize) -> Result<CycleAbsorption> {
    let sizes = l.sizes();
    let mut cover = path_cover(sizes, mu)?;
    let cycles = decompose_into_tripartite_cycles(l)?;
    let short = shorten_cycles(cycles, &mut cover)?;
    let pairings = cover.pair_unused()?;
    let mut union = cover.graph().clone();
    for (a, b) in l.edges() {
        union.add_edge(a, b)?;
    }
    Ok(CycleAbsorption { union, cover, cycles: short.cycles, pairings, splices: short.splices })
}

/// Smallest even `μ ≤ max_mu` for which [`absorb_cycles`] succeeds.
pub fn smallest_mu(l: &TripartiteGraph, max_mu: usize) -> Option<usize> {
    (2..=max_mu).step_by(2).find(|&mu| absorb_cycles(l, mu).is_ok())
}
