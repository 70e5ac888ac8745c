use std::collections::HashMap;

use serde::Serialize;

use crate::count::{hypergraph_girth, Girth, Hypergraph3};
use crate::error::{Error, Result};
use crate::graph::{TripartiteGraph, Vertex};

use super::gadget::{construct_cycle_gadget, RootedGadget};
use super::path_cover::absorb_cycles;
use super::sphere::sphere_cover;
use super::{is_triangle_divisible, verify_triangle_decomposition, Tri};

/// A certified triangle decomposition of `L ∪ H` for one `L`.
#[derive(Clone, Debug)]
pub struct Absorption {
    pub host: TripartiteGraph,
    pub triangles: Vec<Tri>,
    /// Cycles of length 3, 6, 9 fed to the gadgets.
    pub cycles_by_len: [usize; 3],
    pub spheres: usize,
    pub girth: Girth,
    pub verified: bool,
}

/// Rotates and possibly reverses a tripartite cycle so that it starts
/// `V¹ → V²`, the orientation the gadgets are rooted on.
fn normalise(c: &[Vertex]) -> Vec<Vertex> {
    let l = c.len();
    let i = c.iter().position(|v| v.part == 0).expect("tripartite cycles meet every part");
    let fwd = c[(i + 1) % l].part == 1;
    (0..l).map(|k| if fwd { c[(i + k) % l] } else { c[(i + l - k) % l] }).collect()
}

/// Places `gadget` on `cycle` inside `host`, returning the images of its
/// `A ∪ H` decomposition.
fn instantiate(host: &mut TripartiteGraph, gadget: &RootedGadget, cycle: &[Vertex]) -> Result<Vec<Tri>> {
    let cycle = normalise(cycle);
    let m = gadget.cycle_len / 3;
    let aux_images: Vec<Vertex> = gadget.aux.iter().map(|a| host.add_vertex(a.part)).collect();
    let image = |v: Vertex| -> Vertex {
        if (v.index as usize) < m {
            cycle[3 * v.index as usize + v.part as usize]
        } else {
            let k = gadget.aux.iter().position(|&a| a == v).expect("gadget vertex");
            aux_images[k]
        }
    };
    for (u, v) in gadget.graph.edges() {
        host.add_edge(image(u), image(v))?;
    }
    Ok(gadget.with_rooted.iter().map(|t| t.map(image)).collect())
}

fn girth_of(host: &TripartiteGraph, tris: &[Tri], g: usize) -> Girth {
    let sizes = host.sizes();
    let offset = [0, sizes[0] as u32, (sizes[0] + sizes[1]) as u32];
    let mut h = Hypergraph3::new(host.vertex_count());
    for t in tris {
        h.push(t.map(|v| offset[v.part as usize] + v.index));
    }
    hypergraph_girth(&h, g)
}

/// Absorbs a triangle-divisible `L` on `X = V(L)`: cut `L ∪ ∧X` into short
/// tripartite cycles, decompose each cycle together with a gadget rooted on
/// it, and hang a `g`-sphere on every resulting triangle. Only the gadgets
/// and spheres this `L` actually uses are built.
pub fn absorb_graph(l: &TripartiteGraph, mu: usize, g: usize) -> Result<Absorption> {
    if !is_triangle_divisible(l) {
        return Err(Error::Precondition("graph is not triangle-divisible".into()));
    }
    let gadgets = [3, 6, 9].map(|len| construct_cycle_gadget(len).expect("hand gadgets exist"));
    let cyc = absorb_cycles(l, mu)?;
    let mut host = cyc.union.clone();
    let mut first = Vec::new();
    let mut cycles_by_len = [0; 3];
    for c in cyc.all_cycles() {
        let k = c.len() / 3 - 1;
        if k > 2 {
            return Err(Error::Precondition(format!("cycle of length {} left after shortening", c.len())));
        }
        cycles_by_len[k] += 1;
        first.extend(instantiate(&mut host, &gadgets[k], c)?);
    }
    let mut triangles = Vec::with_capacity(2 * g * first.len());
    for &t in &first {
        triangles.extend(sphere_cover(&mut host, t, g)?.in_decomposition);
    }
    let verified = verify_triangle_decomposition(&host, &triangles);
    let girth = girth_of(&host, &triangles, g);
    Ok(Absorption { host, triangles, cycles_by_len, spheres: first.len(), girth, verified })
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub x_size: usize,
    pub g: usize,
    pub mu: usize,
    pub divisible: usize,
    pub absorbed: usize,
    pub girth_ok: usize,
    pub failures: Vec<String>,
    pub max_host_vertices: usize,
    pub max_triangles: usize,
}

impl DemoReport {
    pub fn passes(&self) -> bool {
        self.divisible > 0 && self.absorbed == self.divisible && self.girth_ok == self.divisible && self.failures.is_empty()
    }
}

fn subgraph(x: usize, mask: u64) -> TripartiteGraph {
    let mut l = TripartiteGraph::new([x; 3]);
    let mut bit = 0;
    for j in 0..3u8 {
        for a in 0..x as u32 {
            for b in 0..x as u32 {
                if mask >> bit & 1 == 1 {
                    l.add_edge(Vertex::new(j, a), Vertex::new((j + 1) % 3, b)).expect("valid edge");
                }
                bit += 1;
            }
        }
    }
    l
}

fn line_sums(x: usize, m: u64) -> (Vec<u32>, Vec<u32>) {
    let bit = |a: usize, b: usize| (m >> (a * x + b) & 1) as u32;
    ((0..x).map(|a| (0..x).map(|b| bit(a, b)).sum()).collect(), (0..x).map(|b| (0..x).map(|a| bit(a, b)).sum()).collect())
}

/// Edge masks of every triangle-divisible subgraph of `K_{x,x,x}`, bit
/// `j x² + a x + b` standing for the edge from `a ∈ V^j` to `b ∈ V^{j+1}`.
/// Each part pair is an `x × x` 0/1 matrix; divisibility says the column
/// sums of one matrix are the row sums of the next.
pub fn divisible_masks(x: usize) -> Vec<u64> {
    let sq = x * x;
    let all: Vec<(Vec<u32>, Vec<u32>)> = (0..1u64 << sq).map(|m| line_sums(x, m)).collect();
    let mut by_rows: HashMap<&[u32], Vec<u64>> = HashMap::new();
    let mut by_both: HashMap<(&[u32], &[u32]), Vec<u64>> = HashMap::new();
    for (m, (r, c)) in all.iter().enumerate() {
        by_rows.entry(r).or_default().push(m as u64);
        by_both.entry((r, c)).or_default().push(m as u64);
    }
    let mut out = Vec::new();
    for (m01, (r01, c01)) in all.iter().enumerate() {
        for &m12 in by_rows.get(c01.as_slice()).into_iter().flatten() {
            let c12 = &all[m12 as usize].1;
            for &m20 in by_both.get(&(c12.as_slice(), r01.as_slice())).into_iter().flatten() {
                out.push(m01 as u64 | m12 << sq | m20 << (2 * sq));
            }
        }
    }
    out
}

/// Runs [`absorb_graph`] on every triangle-divisible `L ⊆ K_{x,x,x}`.
pub fn absorber_demo(x: usize, g: usize, mu: usize) -> Result<DemoReport> {
    if x == 0 || x > 3 {
        return Err(Error::Precondition(format!("demo supports parts of size 1..=3, got {x}")));
    }
    if !(2..=4).contains(&g) {
        return Err(Error::Precondition(format!("demo supports g <= 4, got {g}")));
    }
    let masks = divisible_masks(x);
    let mut rep = DemoReport {
        x_size: x,
        g,
        mu,
        divisible: 0,
        absorbed: 0,
        girth_ok: 0,
        failures: Vec::new(),
        max_host_vertices: 0,
        max_triangles: 0,
    };
    for mask in masks {
        let l = subgraph(x, mask);
        debug_assert!(is_triangle_divisible(&l));
        rep.divisible += 1;
        match absorb_graph(&l, mu, g) {
            Ok(a) => {
                if a.verified {
                    rep.absorbed += 1;
                } else {
                    rep.failures.push(format!("mask {mask:#x}: decomposition check failed"));
                }
                if a.girth.exceeds(g) {
                    rep.girth_ok += 1;
                } else {
                    rep.failures.push(format!("mask {mask:#x}: girth {}", a.girth));
                }
                rep.max_host_vertices = rep.max_host_vertices.max(a.host.vertex_count());
                rep.max_triangles = rep.max_triangles.max(a.triangles.len());
            }
            Err(e) => rep.failures.push(format!("mask {mask:#x}: {e}")),
        }
    }
    Ok(rep)
}
