use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{TripartiteGraph, Vertex};

use super::{verify_triangle_decomposition, Tri};

/// A `g`-sphere hung on the triangle `T = (a, b₁, b₂)`.
#[derive(Clone, Debug, Serialize)]
pub struct SphereCover {
    pub g: usize,
    pub base: Tri,
    /// `b₁, …, b_{2g}`; the first two are the base vertices.
    pub b: Vec<Vertex>,
    pub c: Vertex,
    pub edges: Vec<(Vertex, Vertex)>,
    /// Decomposes the sphere edges alone.
    pub out_decomposition: Vec<Tri>,
    /// Decomposes the sphere edges together with `T`.
    pub in_decomposition: Vec<Tri>,
}

/// Adds the sphere on `t` to `host`. The base triangle itself need not be
/// present in `host`.
pub fn sphere_cover(host: &mut TripartiteGraph, t: Tri, g: usize) -> Result<SphereCover> {
    if g < 2 {
        return Err(Error::Precondition(format!("sphere needs g >= 2, got {g}")));
    }
    let [a, b1, b2] = t;
    if a.part == b1.part || a.part == b2.part || b1.part == b2.part {
        return Err(Error::Precondition("base is not a tripartite triangle".into()));
    }
    let mut b = vec![b1, b2];
    for j in 3..=2 * g {
        b.push(host.add_vertex(if j % 2 == 1 { b1.part } else { b2.part }));
    }
    let c = host.add_vertex(a.part);
    // b[j - 1] is b_j
    let bj = |j: usize| b[(j - 1) % (2 * g)];
    let mut edges = Vec::with_capacity(6 * g - 3);
    edges.extend((3..=2 * g).map(|j| (a, bj(j))));
    edges.extend((1..=2 * g).map(|j| (c, bj(j))));
    edges.extend((2..2 * g).map(|j| (bj(j), bj(j + 1))));
    edges.push((bj(2 * g), bj(1)));
    for &(u, v) in &edges {
        host.add_edge(u, v)?;
    }
    let mut out = Vec::with_capacity(2 * g - 1);
    for i in 1..g {
        out.push([c, bj(2 * i), bj(2 * i + 1)]);
        out.push([a, bj(2 * i + 1), bj(2 * i + 2)]);
    }
    out.push([c, bj(2 * g), bj(1)]);
    let mut inn = Vec::with_capacity(2 * g);
    for i in 1..=g {
        inn.push([c, bj(2 * i - 1), bj(2 * i)]);
        inn.push([a, bj(2 * i), bj(2 * i + 1)]);
    }
    Ok(SphereCover { g, base: t, b, c, edges, out_decomposition: out, in_decomposition: inn })
}

/// The sphere on the triangle `(1:0, 2:0, 3:0)`, in a graph holding only
/// the sphere and that triangle.
pub fn standalone_sphere(g: usize) -> Result<(TripartiteGraph, SphereCover)> {
    let mut host = TripartiteGraph::new([1, 1, 1]);
    let t = [Vertex::new(0, 0), Vertex::new(1, 0), Vertex::new(2, 0)];
    let s = sphere_cover(&mut host, t, g)?;
    for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
        host.add_edge(u, v)?;
    }
    Ok((host, s))
}

impl SphereCover {
    fn sizes(&self) -> [usize; 3] {
        let mut sizes = [0; 3];
        for v in self.b.iter().chain([&self.base[0], &self.c]) {
            let p = v.part as usize;
            sizes[p] = sizes[p].max(v.index as usize + 1);
        }
        sizes
    }

    /// The sphere edges as a graph on a vertex set large enough for them.
    pub fn sphere_graph(&self) -> TripartiteGraph {
        let mut g = TripartiteGraph::new(self.sizes());
        for &(u, v) in &self.edges {
            g.add_edge(u, v).expect("sphere edges are tripartite");
        }
        g
    }

    /// Checks both decompositions exactly, their sizes and that the base
    /// triangle is not among the out-triangles.
    pub fn verify(&self) -> bool {
        let q = self.sphere_graph();
        let mut qt = q.clone();
        let t = self.base;
        for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            qt.add_edge(u, v).expect("base is tripartite");
        }
        let same = |x: &Tri| {
            let mut x = *x;
            let mut y = t;
            x.sort();
            y.sort();
            x == y
        };
        self.edges.len() == 6 * self.g - 3
            && self.out_decomposition.len() == 2 * self.g - 1
            && self.in_decomposition.len() == 2 * self.g
            && verify_triangle_decomposition(&q, &self.out_decomposition)
            && verify_triangle_decomposition(&qt, &self.in_decomposition)
            && !self.out_decomposition.iter().any(same)
    }
}
