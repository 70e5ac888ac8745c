use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{next_part, TripartiteGraph, Vertex};
use crate::rng::Rng;

pub(crate) const ABSENT: u32 = u32::MAX;

/// Dense edge id: `j * n^2 + x * n + y` for `x` in part `j`, `y` in part `j + 1`.
pub type EdgeId = usize;

/// Triangle coordinates `(a, b, c)` from an edge `(x, y)` of pair `j` and
/// an apex `z` in part `j + 2`.
#[inline]
pub(crate) fn coords(j: u8, x: u32, y: u32, z: u32) -> [u32; 3] {
    match j {
        0 => [x, y, z],
        1 => [z, x, y],
        _ => [y, z, x],
    }
}

/// A collection of triangles of a balanced tripartite graph, indexed by
/// vertex and by edge.
#[derive(Clone, Debug)]
pub struct TriangleSet {
    graph: TripartiteGraph,
    n: usize,
    triangles: Vec<[u32; 3]>,
    index: Vec<u32>,
    edge_present: Vec<bool>,
    edge_list: Vec<EdgeId>,
    by_edge: Vec<Vec<u32>>,
    by_vertex: Vec<Vec<u32>>,
    words: usize,
    /// Apex bitsets per edge id, `words` u64s each.
    apex: Vec<u64>,
}

impl TriangleSet {
    /// Triangles are given as `[a, b, c]` with one vertex index per part.
    pub fn new(graph: TripartiteGraph, mut triangles: Vec<[u32; 3]>) -> Result<Self> {
        let [n0, n1, n2] = graph.sizes();
        if n0 != n1 || n1 != n2 {
            return Err(Error::Precondition(format!("parts {:?} are not balanced", graph.sizes())));
        }
        let n = n0;
        triangles.sort_unstable();
        let before = triangles.len();
        triangles.dedup();
        if triangles.len() != before {
            return Err(Error::Precondition("duplicate triangle".into()));
        }
        let mut edge_present = vec![false; 3 * n * n];
        for j in 0..3u8 {
            for (u, v) in graph.edges_from(j) {
                edge_present[j as usize * n * n + u.index as usize * n + v.index as usize] = true;
            }
        }
        let words = n.div_ceil(64).max(1);
        let mut ts = TriangleSet {
            n,
            index: vec![ABSENT; n * n * n],
            edge_list: (0..3 * n * n).filter(|&e| edge_present[e]).collect(),
            edge_present,
            by_edge: vec![Vec::new(); 3 * n * n],
            by_vertex: vec![Vec::new(); 3 * n],
            words,
            apex: vec![0; 3 * n * n * words],
            triangles: Vec::with_capacity(triangles.len()),
            graph,
        };
        for t in triangles {
            if t.iter().any(|&x| x as usize >= n) {
                return Err(Error::OutOfRange(format!("triangle {t:?} out of range for parts of size {n}")));
            }
            let id = ts.triangles.len() as u32;
            let edges = ts.triangle_edges(t);
            if let Some(&e) = edges.iter().find(|&&e| !ts.edge_present[e]) {
                let (u, v) = ts.edge_endpoints(e);
                return Err(Error::Precondition(format!("triangle {t:?} uses missing edge {u}-{v}")));
            }
            ts.index[(t[0] as usize * n + t[1] as usize) * n + t[2] as usize] = id;
            for (j, &e) in edges.iter().enumerate() {
                ts.by_edge[e].push(id);
                let apex = t[(j + 2) % 3] as usize;
                ts.apex[e * words + apex / 64] |= 1 << (apex % 64);
            }
            for (j, &x) in t.iter().enumerate() {
                ts.by_vertex[j * n + x as usize].push(id);
            }
            ts.triangles.push(t);
        }
        Ok(ts)
    }

    /// Every triangle of `graph`.
    pub fn all_triangles(graph: TripartiteGraph) -> Result<Self> {
        Self::thinned(graph, 1.0, &mut crate::rng::rng(0))
    }

    /// Every triangle of `graph`, each kept independently with probability `q`.
    pub fn thinned(graph: TripartiteGraph, q: f64, rng: &mut Rng) -> Result<Self> {
        let n = graph.sizes()[0];
        let mut tris = Vec::new();
        for (a, b) in graph.edges_from(0) {
            let c_row = graph.neighbor_row(b, 2);
            let a_row = graph.neighbor_row(a, 2);
            for c in 0..n {
                if c_row.get(c) && a_row.get(c) && (q >= 1.0 || rng.random::<f64>() < q) {
                    tris.push([a.index, b.index, c as u32]);
                }
            }
        }
        Self::new(graph, tris)
    }

    /// Every triangle `(a, b, c)` of `graph` with `a + b + c ≢ 0 (mod m)`.
    /// On `K_{n,n,n}` with `m | n` each edge keeps exactly `n − n/m`
    /// triangles, a perfectly regular thinning with `q = 1 − 1/m`.
    pub fn residue_thinned(graph: TripartiteGraph, m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::OutOfRange(format!("modulus {m} below 2")));
        }
        let all = Self::all_triangles(graph)?;
        let tris = all.triangles.iter().copied().filter(|t| (t[0] + t[1] + t[2]) % m != 0).collect();
        Self::new(all.graph, tris)
    }

    pub fn graph(&self) -> &TripartiteGraph {
        &self.graph
    }

    /// Part size.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, id: usize) -> [u32; 3] {
        self.triangles[id]
    }

    pub fn find(&self, t: [u32; 3]) -> Option<usize> {
        let n = self.n;
        if t.iter().any(|&x| x as usize >= n) {
            return None;
        }
        let id = self.index[(t[0] as usize * n + t[1] as usize) * n + t[2] as usize];
        (id != ABSENT).then_some(id as usize)
    }

    #[inline]
    pub(crate) fn find_raw(&self, t: [u32; 3]) -> u32 {
        let n = self.n;
        self.index[(t[0] as usize * n + t[1] as usize) * n + t[2] as usize]
    }

    /// Edge ids of a triangle: pairs 0 (ab), 1 (bc), 2 (ca).
    #[inline]
    pub fn triangle_edges(&self, t: [u32; 3]) -> [EdgeId; 3] {
        let n = self.n;
        let [a, b, c] = t.map(|x| x as usize);
        [a * n + b, n * n + b * n + c, 2 * n * n + c * n + a]
    }

    /// Number of edges of the host graph.
    pub fn edge_count(&self) -> usize {
        self.edge_list.len()
    }

    /// Ids of the host graph's edges, ascending.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edge_list
    }

    pub fn has_edge_id(&self, e: EdgeId) -> bool {
        e < self.edge_present.len() && self.edge_present[e]
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        if u.part > 2 || v.part > 2 || u.part == v.part {
            return None;
        }
        let (a, b) = if next_part(u.part) == v.part { (u, v) } else { (v, u) };
        let n = self.n;
        if a.index as usize >= n || b.index as usize >= n {
            return None;
        }
        let e = a.part as usize * n * n + a.index as usize * n + b.index as usize;
        self.edge_present[e].then_some(e)
    }

    /// Endpoints `(x in part j, y in part j + 1)` of an edge id.
    pub fn edge_endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        let n = self.n;
        let j = (e / (n * n)) as u8;
        let r = e % (n * n);
        (Vertex::new(j, (r / n) as u32), Vertex::new(next_part(j), (r % n) as u32))
    }

    /// Ids of triangles containing the edge.
    pub fn triangles_on(&self, e: EdgeId) -> &[u32] {
        &self.by_edge[e]
    }

    /// Ids of triangles containing the vertex.
    pub fn triangles_at(&self, v: Vertex) -> &[u32] {
        &self.by_vertex[v.part as usize * self.n + v.index as usize]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    /// Apex bitset of an edge: vertices of the third part completing it to a
    /// triangle of the set.
    #[inline]
    pub(crate) fn apex_words(&self, e: EdgeId) -> &[u64] {
        &self.apex[e * self.words..(e + 1) * self.words]
    }

    /// Degree of a vertex in the host graph.
    pub fn degree(&self, v: Vertex) -> usize {
        self.graph.degree(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_indexes() {
        let ts = TriangleSet::all_triangles(TripartiteGraph::complete(4)).unwrap();
        assert_eq!(ts.len(), 64);
        assert_eq!(ts.edge_count(), 48);
        for &e in ts.edges() {
            assert_eq!(ts.triangles_on(e).len(), 4);
            let (u, v) = ts.edge_endpoints(e);
            assert_eq!(ts.edge_id(u, v), Some(e));
            assert_eq!(ts.edge_id(v, u), Some(e));
            assert_eq!(ts.apex_words(e)[0], 0b1111);
        }
        for v in ts.graph().vertices() {
            assert_eq!(ts.triangles_at(v).len(), 16);
        }
        for (id, &t) in ts.triangles().iter().enumerate() {
            assert_eq!(ts.find(t), Some(id));
            for e in ts.triangle_edges(t) {
                assert!(ts.triangles_on(e).contains(&(id as u32)));
            }
        }
    }

    #[test]
    fn rejects_missing_edge() {
        let mut g = TripartiteGraph::complete(2);
        g.remove_edge(Vertex::new(0, 0), Vertex::new(1, 0));
        assert!(TriangleSet::new(g.clone(), vec![[0, 0, 0]]).is_err());
        assert!(TriangleSet::new(g, vec![[0, 1, 0]]).is_ok());
    }

    #[test]
    fn coords_roundtrip() {
        let ts = TriangleSet::all_triangles(TripartiteGraph::complete(3)).unwrap();
        for &t in ts.triangles() {
            let edges = ts.triangle_edges(t);
            for (j, &e) in edges.iter().enumerate() {
                let (x, y) = ts.edge_endpoints(e);
                let z = t[(j + 2) % 3];
                assert_eq!(coords(j as u8, x.index, y.index, z), t);
            }
        }
    }
}
