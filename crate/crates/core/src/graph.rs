use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of a tripartite graph: part `0..3` and an index inside the part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub part: u8,
    pub index: u32,
}

impl Vertex {
    pub const fn new(part: u8, index: u32) -> Self {
        Vertex { part, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.part + 1, self.index)
    }
}

#[inline]
pub(crate) fn next_part(p: u8) -> u8 {
    (p + 1) % 3
}

#[inline]
pub(crate) fn prev_part(p: u8) -> u8 {
    (p + 2) % 3
}

/// The part different from both `a` and `b` (which must differ).
#[inline]
pub fn third_part(a: u8, b: u8) -> u8 {
    3 - a - b
}

/// Growable bitset.
#[derive(Clone, Debug, Default)]
pub struct BitRow(Vec<u64>);

impl PartialEq for BitRow {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = if self.0.len() <= other.0.len() { (&self.0, &other.0) } else { (&other.0, &self.0) };
        a[..] == b[..a.len()] && b[a.len()..].iter().all(|&w| w == 0)
    }
}

impl Eq for BitRow {}

impl BitRow {
    pub fn with_len(bits: usize) -> Self {
        BitRow(vec![0; bits.div_ceil(64)])
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    /// Returns whether the bit changed.
    pub fn set(&mut self, i: usize, value: bool) -> bool {
        if i / 64 >= self.0.len() {
            if !value {
                return false;
            }
            self.0.resize(i / 64 + 1, 0);
        }
        let w = &mut self.0[i / 64];
        let old = *w >> (i % 64) & 1 == 1;
        if value {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
        old != value
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn intersection_count(&self, other: &BitRow) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }
}

/// A simple graph on three vertex classes with edges only between classes.
///
/// Every edge is stored in both directions, so degree and neighbourhood
/// queries towards either other part are bitset reads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripartiteGraph {
    sizes: [usize; 3],
    /// `fwd[j][u]`: neighbours of `u` in part `j + 1`.
    fwd: [Vec<BitRow>; 3],
    /// `bwd[j][u]`: neighbours of `u` in part `j - 1`.
    bwd: [Vec<BitRow>; 3],
    edges: usize,
}

impl TripartiteGraph {
    pub fn new(sizes: [usize; 3]) -> Self {
        let rows = |j: usize, other: usize| vec![BitRow::with_len(sizes[other]); sizes[j]];
        TripartiteGraph {
            sizes,
            fwd: [rows(0, 1), rows(1, 2), rows(2, 0)],
            bwd: [rows(0, 2), rows(1, 0), rows(2, 1)],
            edges: 0,
        }
    }

    /// The complete tripartite graph `K_{n,n,n}`.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::new([n; 3]);
        for j in 0..3u8 {
            for u in 0..n {
                for v in 0..n {
                    g.add_edge(Vertex::new(j, u as u32), Vertex::new(next_part(j), v as u32)).unwrap();
                }
            }
        }
        g
    }

    pub fn sizes(&self) -> [usize; 3] {
        self.sizes
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..3u8).flat_map(move |j| (0..self.sizes[j as usize]).map(move |i| Vertex::new(j, i as u32)))
    }

    pub fn add_vertex(&mut self, part: u8) -> Vertex {
        let j = part as usize;
        let idx = self.sizes[j];
        self.sizes[j] += 1;
        self.fwd[j].push(BitRow::default());
        self.bwd[j].push(BitRow::default());
        Vertex::new(part, idx as u32)
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if v.part > 2 || v.index as usize >= self.sizes[v.part as usize] {
            return Err(Error::OutOfRange(format!("vertex {v} not in graph with parts {:?}", self.sizes)));
        }
        Ok(())
    }

    /// Orders an edge as `(u in part j, v in part j + 1)`.
    fn orient(u: Vertex, v: Vertex) -> Result<(Vertex, Vertex)> {
        if u.part == v.part {
            return Err(Error::Precondition(format!("edge {u}-{v} inside one part")));
        }
        Ok(if next_part(u.part) == v.part { (u, v) } else { (v, u) })
    }

    /// Returns whether the edge was new.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        let (a, b) = Self::orient(u, v)?;
        let added = self.fwd[a.part as usize][a.index as usize].set(b.index as usize, true);
        self.bwd[b.part as usize][b.index as usize].set(a.index as usize, true);
        self.edges += added as usize;
        Ok(added)
    }

    /// Returns whether the edge was present.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if self.check(u).is_err() || self.check(v).is_err() {
            return false;
        }
        let Ok((a, b)) = Self::orient(u, v) else { return false };
        let removed = self.fwd[a.part as usize][a.index as usize].set(b.index as usize, false);
        self.bwd[b.part as usize][b.index as usize].set(a.index as usize, false);
        self.edges -= removed as usize;
        removed
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if self.check(u).is_err() || self.check(v).is_err() {
            return false;
        }
        match Self::orient(u, v) {
            Ok((a, b)) => self.fwd[a.part as usize][a.index as usize].get(b.index as usize),
            Err(_) => false,
        }
    }

    /// Neighbours of `v` inside part `part`, as a bitset over that part.
    pub fn neighbor_row(&self, v: Vertex, part: u8) -> &BitRow {
        let j = v.part as usize;
        if part == next_part(v.part) {
            &self.fwd[j][v.index as usize]
        } else {
            assert_eq!(part, prev_part(v.part), "no edges inside a part");
            &self.bwd[j][v.index as usize]
        }
    }

    pub fn neighbors_in(&self, v: Vertex, part: u8) -> impl Iterator<Item = Vertex> + '_ {
        self.neighbor_row(v, part).iter().map(move |i| Vertex::new(part, i as u32))
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.neighbors_in(v, next_part(v.part)).chain(self.neighbors_in(v, prev_part(v.part)))
    }

    pub fn degree_to(&self, v: Vertex, part: u8) -> usize {
        self.neighbor_row(v, part).count()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.degree_to(v, next_part(v.part)) + self.degree_to(v, prev_part(v.part))
    }

    /// Edges oriented from part `j` to part `j + 1`.
    pub fn edges_from(&self, j: u8) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let nj = next_part(j);
        self.fwd[j as usize].iter().enumerate().flat_map(move |(u, row)| {
            row.iter().map(move |v| (Vertex::new(j, u as u32), Vertex::new(nj, v as u32)))
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..3u8).flat_map(|j| self.edges_from(j))
    }

    pub fn edge_count_from(&self, j: u8) -> usize {
        self.fwd[j as usize].iter().map(BitRow::count).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph JSON serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

/// On-disk JSON shape of a tripartite graph.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    parts: [usize; 3],
    edges_12: Vec<[u32; 2]>,
    edges_23: Vec<[u32; 2]>,
    edges_31: Vec<[u32; 2]>,
}

impl From<&TripartiteGraph> for GraphJson {
    fn from(g: &TripartiteGraph) -> Self {
        let list = |j: u8| g.edges_from(j).map(|(u, v)| [u.index, v.index]).collect();
        GraphJson { parts: g.sizes, edges_12: list(0), edges_23: list(1), edges_31: list(2) }
    }
}

impl TryFrom<GraphJson> for TripartiteGraph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Self> {
        let mut g = TripartiteGraph::new(raw.parts);
        for (j, list) in [raw.edges_12, raw.edges_23, raw.edges_31].into_iter().enumerate() {
            for [u, v] in list {
                g.add_edge(Vertex::new(j as u8, u), Vertex::new(next_part(j as u8), v))?;
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_counts() {
        let g = TripartiteGraph::complete(4);
        assert_eq!(g.edge_count(), 48);
        for v in g.vertices() {
            assert_eq!(g.degree(v), 8);
        }
    }

    #[test]
    fn json_round_trip() {
        let mut g = TripartiteGraph::new([2, 3, 1]);
        g.add_edge(Vertex::new(0, 1), Vertex::new(1, 2)).unwrap();
        g.add_edge(Vertex::new(0, 0), Vertex::new(2, 0)).unwrap();
        g.add_edge(Vertex::new(2, 0), Vertex::new(1, 0)).unwrap();
        let back = TripartiteGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert!(back.has_edge(Vertex::new(2, 0), Vertex::new(0, 0)));
    }

    #[test]
    fn same_part_edges_rejected() {
        let mut g = TripartiteGraph::new([2, 2, 2]);
        assert!(g.add_edge(Vertex::new(0, 0), Vertex::new(0, 1)).is_err());
        assert!(g.add_edge(Vertex::new(0, 0), Vertex::new(1, 5)).is_err());
    }

    #[test]
    fn grows_parts() {
        let mut g = TripartiteGraph::new([1, 1, 1]);
        let v = g.add_vertex(1);
        assert_eq!(v, Vertex::new(1, 1));
        assert!(g.add_edge(Vertex::new(0, 0), v).unwrap());
        assert_eq!(g.degree_to(Vertex::new(0, 0), 1), 1);
    }
}
