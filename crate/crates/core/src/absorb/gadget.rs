use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{TripartiteGraph, Vertex};

use super::{edge_key, verify_triangle_decomposition, Tri};

/// A gadget `A` rooted on the tripartite cycle `H = v₀ v₁ … v_{L−1}` with
/// `v_i = (i mod 3, i / 3)`; auxiliary vertices follow the roots in every
/// part.
#[derive(Clone, Debug, Serialize)]
pub struct RootedGadget {
    pub cycle_len: usize,
    /// Edges of `A` only.
    #[serde(skip)]
    pub graph: TripartiteGraph,
    pub roots: Vec<Vertex>,
    pub aux: Vec<Vertex>,
    /// Decomposes `A`.
    pub alone: Vec<Tri>,
    /// Decomposes `A ∪ H`.
    pub with_rooted: Vec<Tri>,
}

fn root(i: usize) -> Vertex {
    Vertex::new((i % 3) as u8, (i / 3) as u32)
}

impl RootedGadget {
    pub fn cycle_edges(&self) -> Vec<(Vertex, Vertex)> {
        let l = self.roots.len();
        (0..l).map(|i| (self.roots[i], self.roots[(i + 1) % l])).collect()
    }

    pub fn roots_independent(&self) -> bool {
        self.roots.iter().all(|&u| self.roots.iter().all(|&v| !self.graph.has_edge(u, v)))
    }

    pub fn verify(&self) -> bool {
        let mut with_h = self.graph.clone();
        for (u, v) in self.cycle_edges() {
            if with_h.add_edge(u, v).is_err() {
                return false;
            }
        }
        self.roots_independent()
            && verify_triangle_decomposition(&self.graph, &self.alone)
            && verify_triangle_decomposition(&with_h, &self.with_rooted)
    }

    fn from_parts(cycle_len: usize, aux_parts: &[u8], alone: Vec<Tri>, with_rooted: Vec<Tri>) -> Self {
        let m = cycle_len / 3;
        let roots: Vec<Vertex> = (0..cycle_len).map(root).collect();
        let mut graph = TripartiteGraph::new([m; 3]);
        let aux: Vec<Vertex> = aux_parts.iter().map(|&p| graph.add_vertex(p)).collect();
        let h: Vec<_> = (0..cycle_len).map(|i| edge_key(roots[i], roots[(i + 1) % cycle_len])).collect();
        for t in &with_rooted {
            for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if !h.contains(&edge_key(u, v)) {
                    graph.add_edge(u, v).expect("gadget triangles are tripartite");
                }
            }
        }
        RootedGadget { cycle_len, graph, roots, aux, alone, with_rooted }
    }
}

/// Hand-built gadgets for `C₃`, `C₆`, `C₉`: a band of `L` auxiliary
/// vertices `w_i ∈ V^{i+2}` parallel to `H`, closed by a cap on the `w`.
pub fn construct_cycle_gadget(len: usize) -> Result<RootedGadget> {
    let caps: (&[[usize; 3]], &[[usize; 3]]) = match len {
        3 => (&[[0, 1, 2]], &[]),
        6 => (&[[0, 1, 2], [2, 3, 4], [4, 5, 0]], &[[0, 2, 4]]),
        9 => (&[[0, 1, 2], [2, 3, 4], [4, 5, 6], [6, 7, 8], [0, 4, 8]], &[[0, 2, 4], [4, 6, 8]]),
        _ => return Err(Error::Precondition(format!("no hand-built gadget for C{len}"))),
    };
    let m = len / 3;
    let w = |i: usize| Vertex::new(((i + 2) % 3) as u8, (m + i / 3) as u32);
    let mut black = Vec::new();
    let mut white = Vec::new();
    for i in 0..len {
        let j = (i + 1) % len;
        black.push([root(i), root(j), w(i)]);
        white.push([w(i), w(j), root(j)]);
    }
    black.extend(caps.0.iter().map(|t| t.map(w)));
    white.extend(caps.1.iter().map(|t| t.map(w)));
    let aux_parts: Vec<u8> = (0..3).flat_map(|p| std::iter::repeat_n(p, m)).collect();
    let g = RootedGadget::from_parts(len, &aux_parts, white, black);
    debug_assert!(g.verify());
    Ok(g)
}

struct Search {
    len: usize,
    /// Vertices: roots first, then `budget` aux slots per part.
    verts: Vec<Vertex>,
    is_root: Vec<bool>,
    /// `cnt[side][u][v]` over vertex ids.
    cnt: [Vec<Vec<u8>>; 2],
    h: Vec<Vec<bool>>,
    touched: Vec<bool>,
    used_aux: usize,
    max_aux: usize,
    tris: [Vec<[usize; 3]>; 2],
    nodes: u64,
    node_limit: u64,
}

impl Search {
    fn new(len: usize, max_aux: usize, node_limit: u64) -> Self {
        let m = len / 3;
        let mut verts: Vec<Vertex> = (0..len).map(root).collect();
        for p in 0..3u8 {
            verts.extend((0..max_aux).map(|k| Vertex::new(p, (m + k) as u32)));
        }
        let n = verts.len();
        let mut h = vec![vec![false; n]; n];
        for i in 0..len {
            let j = (i + 1) % len;
            h[i][j] = true;
            h[j][i] = true;
        }
        Search {
            len,
            is_root: (0..n).map(|i| i < len).collect(),
            verts,
            cnt: [vec![vec![0; n]; n], vec![vec![0; n]; n]],
            h,
            touched: vec![false; n],
            used_aux: 0,
            max_aux,
            tris: [Vec::new(), Vec::new()],
            nodes: 0,
            node_limit,
        }
    }

    fn allowed(&self, u: usize, v: usize) -> bool {
        self.verts[u].part != self.verts[v].part && (!(self.is_root[u] && self.is_root[v]) || self.h[u][v])
    }

    /// First edge whose two counts disagree with the target, and the side
    /// that must grow.
    fn unbalanced(&self) -> Option<(usize, usize, usize)> {
        let n = self.verts.len();
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = (self.cnt[0][u][v], self.cnt[1][u][v]);
                if self.h[u][v] {
                    if b == 0 {
                        return Some((u, v, 1));
                    }
                } else if a != b {
                    return Some((u, v, if a < b { 0 } else { 1 }));
                }
            }
        }
        None
    }

    /// Third-vertex candidates: roots, touched aux and the lowest untouched
    /// aux slot of the part.
    fn thirds(&self, part: u8) -> Vec<usize> {
        let mut out = Vec::new();
        let mut fresh = false;
        for (i, v) in self.verts.iter().enumerate() {
            if v.part != part {
                continue;
            }
            if self.is_root[i] || self.touched[i] {
                out.push(i);
            } else if !fresh && self.used_aux < self.max_aux {
                out.push(i);
                fresh = true;
            }
        }
        out
    }

    fn fits(&self, side: usize, t: [usize; 3]) -> bool {
        [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])].iter().all(|&(u, v)| {
            self.allowed(u, v) && self.cnt[side][u][v] == 0 && !(side == 0 && self.h[u][v])
        })
    }

    fn apply(&mut self, side: usize, t: [usize; 3], delta: i8) {
        for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            let c = &mut self.cnt[side];
            c[u][v] = (c[u][v] as i8 + delta) as u8;
            c[v][u] = c[u][v];
        }
    }

    fn dfs(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::SearchFailed(format!("node limit {} reached for C{}", self.node_limit, self.len)));
        }
        let Some((u, v, side)) = self.unbalanced() else {
            return Ok(true);
        };
        let part = crate::graph::third_part(self.verts[u].part, self.verts[v].part);
        for z in self.thirds(part) {
            let t = [u, v, z];
            // an all-root triangle would be H itself, giving the empty gadget
            if self.is_root[u] && self.is_root[v] && self.is_root[z] || !self.fits(side, t) {
                continue;
            }
            let fresh = !self.is_root[z] && !self.touched[z];
            if fresh {
                self.touched[z] = true;
                self.used_aux += 1;
            }
            self.apply(side, t, 1);
            self.tris[side].push(t);
            if self.dfs()? {
                return Ok(true);
            }
            self.tris[side].pop();
            self.apply(side, t, -1);
            if fresh {
                self.touched[z] = false;
                self.used_aux -= 1;
            }
        }
        Ok(false)
    }
}

/// Backtracking search for a gadget on `C_len` with at most `aux_budget`
/// auxiliary vertices, trying budgets in increasing order. A decomposition
/// of `A` and one of `A ∪ H` are grown together, always extending the side
/// that is short on the first unbalanced edge.
pub fn gadget_search(len: usize, aux_budget: usize, node_limit: u64) -> Result<RootedGadget> {
    if len == 0 || !len.is_multiple_of(3) {
        return Err(Error::Precondition(format!("C{len} is not a tripartite cycle")));
    }
    if aux_budget > 12 {
        return Err(Error::Precondition(format!("aux budget {aux_budget} above 12")));
    }
    let mut spent = 0;
    for k in 0..=aux_budget {
        let mut s = Search::new(len, k, node_limit.saturating_sub(spent));
        let found = s.dfs();
        spent += s.nodes;
        match found {
            Ok(true) => return Ok(s.into_gadget()),
            Ok(false) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::SearchFailed(format!("no gadget for C{len} with at most {aux_budget} auxiliary vertices")))
}

impl Search {
    fn into_gadget(self) -> RootedGadget {
        let m = self.len / 3;
        // compact the touched aux slots, keeping part order
        let mut remap: HashMap<usize, Vertex> = HashMap::new();
        let mut aux_parts = Vec::new();
        let mut next = [m as u32; 3];
        for (i, v) in self.verts.iter().enumerate() {
            if self.is_root[i] {
                remap.insert(i, *v);
            } else if self.touched[i] {
                let p = v.part as usize;
                remap.insert(i, Vertex::new(v.part, next[p]));
                next[p] += 1;
                aux_parts.push(v.part);
            }
        }
        let conv = |ts: &[[usize; 3]]| ts.iter().map(|t| t.map(|i| remap[&i])).collect::<Vec<Tri>>();
        RootedGadget::from_parts(self.len, &aux_parts, conv(&self.tris[0]), conv(&self.tris[1]))
    }
}
