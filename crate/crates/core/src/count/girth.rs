//! Girth of a 3-uniform tripartite hypergraph: the least `v >= 4` such that
//! some `v` vertices span at least `v - 2` triples.
//!
//! A minimal such set always spans a connected triple set (a disconnected
//! one has a component that is already a smaller witness), so the search
//! grows connected triple sets one triple at a time and bounds only the
//! number of spanned vertices.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triples::{Triple, TripleSystem};

/// Vertex-labelled list of triples with incidence lists.
#[derive(Clone, Debug, Default)]
pub struct Hypergraph3 {
    triples: Vec<[u32; 3]>,
    incident: Vec<Vec<u32>>,
}

impl Hypergraph3 {
    pub fn new(vertex_count: usize) -> Self {
        Hypergraph3 { triples: Vec::new(), incident: vec![Vec::new(); vertex_count] }
    }

    /// Rows, columns and symbols become vertices `r`, `n + c`, `2n + s`.
    pub fn from_triple_system(ts: &TripleSystem) -> Self {
        let mut h = Self::new(3 * ts.order());
        for t in ts.iter() {
            h.push_triple(ts.order(), t);
        }
        h
    }

    pub fn push_triple(&mut self, n: usize, t: Triple) -> u32 {
        self.push([t.r as u32, n as u32 + t.c as u32, 2 * n as u32 + t.s as u32])
    }

    pub fn push(&mut self, e: [u32; 3]) -> u32 {
        let id = self.triples.len() as u32;
        for &v in &e {
            let v = v as usize;
            if v >= self.incident.len() {
                self.incident.resize(v + 1, Vec::new());
            }
            self.incident[v].push(id);
        }
        self.triples.push(e);
        id
    }

    /// Removes the most recently pushed triple.
    pub fn pop(&mut self) -> Option<[u32; 3]> {
        let e = self.triples.pop()?;
        for &v in &e {
            self.incident[v as usize].pop();
        }
        Some(e)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Girth {
    Exactly(usize),
    /// No configuration with at most this many vertices.
    GreaterThan(usize),
}

impl Girth {
    pub fn exceeds(&self, g: usize) -> bool {
        match *self {
            Girth::Exactly(v) => v > g,
            Girth::GreaterThan(m) => m >= g,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Exactly(g) => write!(f, "{g}"),
            Girth::GreaterThan(m) => write!(f, ">{m}"),
        }
    }
}

struct Search<'a> {
    h: &'a Hypergraph3,
    limit: usize,
    best: Option<usize>,
    min_id: Option<u32>,
    seen: HashSet<Vec<u32>>,
    budget: u64,
}

impl Search<'_> {
    fn dfs(&mut self, edges: &mut Vec<u32>, verts: &mut Vec<u32>) {
        if verts.len() >= 4 && edges.len() + 2 >= verts.len() {
            self.best = Some(verts.len());
            self.limit = verts.len() - 1;
            return;
        }
        if self.budget == 0 {
            return;
        }
        self.budget -= 1;
        let mut cands: Vec<u32> = Vec::new();
        for &v in verts.iter() {
            for &t in &self.h.incident[v as usize] {
                if self.min_id.is_some_and(|m| t <= m) || edges.contains(&t) || cands.contains(&t) {
                    continue;
                }
                cands.push(t);
            }
        }
        for t in cands {
            let e = self.h.triples[t as usize];
            let fresh: Vec<u32> = e.iter().copied().filter(|x| !verts.contains(x)).collect();
            if verts.len() + fresh.len() > self.limit {
                continue;
            }
            let mut key = edges.clone();
            let pos = key.binary_search(&t).unwrap_err();
            key.insert(pos, t);
            if !self.seen.insert(key) {
                continue;
            }
            edges.insert(pos, t);
            let before = verts.len();
            verts.extend(&fresh);
            self.dfs(edges, verts);
            verts.truncate(before);
            edges.remove(pos);
            if verts.len() > self.limit {
                break;
            }
        }
    }
}

const SEARCH_BUDGET: u64 = u64::MAX;

/// Smallest configuration size `<= limit` among triple sets containing
/// triple `t`; with `only_later` the other triples must have larger ids.
fn smallest_through(h: &Hypergraph3, t: u32, limit: usize, only_later: bool) -> Option<usize> {
    let mut s = Search {
        h,
        limit,
        best: None,
        min_id: only_later.then_some(t),
        seen: HashSet::new(),
        budget: SEARCH_BUDGET,
    };
    let mut edges = vec![t];
    let mut verts = h.triples[t as usize].to_vec();
    s.dfs(&mut edges, &mut verts);
    s.best
}

pub fn hypergraph_girth(h: &Hypergraph3, g_max: usize) -> Girth {
    let mut limit = g_max;
    let mut best = None;
    for t in 0..h.len() as u32 {
        if limit < 4 {
            break;
        }
        if let Some(v) = smallest_through(h, t, limit, true) {
            best = Some(v);
            limit = v - 1;
        }
    }
    best.map_or(Girth::GreaterThan(g_max), Girth::Exactly)
}

fn check_gmax(g_max: usize) -> Result<()> {
    if !(4..=12).contains(&g_max) {
        return Err(Error::OutOfRange(format!("g_max {g_max} not in 4..=12")));
    }
    Ok(())
}

pub fn girth(ts: &TripleSystem, g_max: usize) -> Result<Girth> {
    check_gmax(g_max)?;
    Ok(hypergraph_girth(&Hypergraph3::from_triple_system(ts), g_max))
}

/// Whether triple `t` (already pushed into `h`) lies in no configuration on
/// at most `g` vertices.
pub fn is_free_through(h: &Hypergraph3, t: u32, g: usize) -> bool {
    smallest_through(h, t, g, false).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::LatinSquare;

    #[test]
    fn empty_system() {
        assert_eq!(girth(&TripleSystem::empty(5), 6).unwrap(), Girth::GreaterThan(6));
    }

    #[test]
    fn known_values() {
        let z2 = LatinSquare::elementary_abelian(2).unwrap().to_triples();
        assert_eq!(girth(&z2, 6).unwrap(), Girth::Exactly(6));
        let c3 = LatinSquare::cyclic(3).to_triples();
        assert_eq!(girth(&c3, 6).unwrap(), Girth::GreaterThan(6));
    }

    #[test]
    fn rejects_bad_gmax() {
        assert!(girth(&TripleSystem::empty(2), 3).is_err());
        assert!(girth(&TripleSystem::empty(2), 13).is_err());
    }
}
