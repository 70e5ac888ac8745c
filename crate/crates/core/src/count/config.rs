use crate::error::{Error, Result};
use crate::triples::TripleSystem;

/// A small 3-coloured 3-uniform hypergraph; classes are rows, columns and
/// symbols, and each hyperedge lists one local vertex of each class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredTripleSystem {
    /// Number of vertices in the row, column and symbol classes.
    pub classes: [usize; 3],
    pub edges: Vec<[usize; 3]>,
}

impl ColoredTripleSystem {
    pub fn new(classes: [usize; 3], edges: Vec<[usize; 3]>) -> Result<Self> {
        for e in &edges {
            if (0..3).any(|k| e[k] >= classes[k]) {
                return Err(Error::Precondition(format!("hyperedge {e:?} leaves its colour classes {classes:?}")));
            }
        }
        Ok(ColoredTripleSystem { classes, edges })
    }

    pub fn single_edge() -> Self {
        ColoredTripleSystem { classes: [1, 1, 1], edges: vec![[0, 0, 0]] }
    }

    /// Rows `r0, r1`, columns `c0, c1`, symbols `s0, s1` with
    /// `(r0,c0,s0) (r0,c1,s1) (r1,c0,s1) (r1,c1,s0)`.
    pub fn intercalate() -> Self {
        ColoredTripleSystem { classes: [2, 2, 2], edges: vec![[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]] }
    }

    /// Two copies of a 2x2 pattern with disjoint rows and columns sharing
    /// all four symbols.
    pub fn cuboctahedron() -> Self {
        let mut edges = Vec::new();
        for copy in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    edges.push([2 * copy + i, 2 * copy + j, 2 * i + j]);
                }
            }
        }
        ColoredTripleSystem { classes: [4, 4, 4], edges }
    }

    /// Whether no two hyperedges share two vertices.
    pub fn is_latin(&self) -> bool {
        self.edges.iter().enumerate().all(|(i, a)| {
            self.edges[i + 1..].iter().all(|b| (0..3).filter(|&k| a[k] == b[k]).count() < 2)
        })
    }

    pub fn to_triple_system(&self) -> Result<TripleSystem> {
        let n = *self.classes.iter().max().unwrap_or(&0);
        let triples =
            self.edges.iter().map(|e| crate::Triple::new(e[0] as u16, e[1] as u16, e[2] as u16)).collect();
        TripleSystem::new(n, triples)
    }
}

struct Embed<'a> {
    h: &'a ColoredTripleSystem,
    l: &'a TripleSystem,
    map: [Vec<Option<u16>>; 3],
    used: [Vec<bool>; 3],
    order: Vec<usize>,
}

impl Embed<'_> {
    fn run(&mut self, depth: usize) -> u64 {
        if depth == self.order.len() {
            return 1;
        }
        let e = self.h.edges[self.order[depth]];
        let known: [Option<u16>; 3] = [0, 1, 2].map(|k| self.map[k][e[k]]);
        let n = self.l.order();
        let mut total = 0;
        let try_triple = |this: &mut Self, t: [u16; 3]| -> u64 {
            let mut fresh = [false; 3];
            for k in 0..3 {
                match known[k] {
                    Some(x) if x != t[k] => return 0,
                    Some(_) => {}
                    None => {
                        // two new local vertices of a class may not share an image
                        if this.used[k][t[k] as usize] {
                            for f in 0..k {
                                if fresh[f] {
                                    this.used[f][this.map[f][e[f]].unwrap() as usize] = false;
                                    this.map[f][e[f]] = None;
                                }
                            }
                            return 0;
                        }
                        this.used[k][t[k] as usize] = true;
                        this.map[k][e[k]] = Some(t[k]);
                        fresh[k] = true;
                    }
                }
            }
            let c = this.run(depth + 1);
            for k in 0..3 {
                if fresh[k] {
                    this.used[k][t[k] as usize] = false;
                    this.map[k][e[k]] = None;
                }
            }
            c
        };
        match known {
            [Some(r), Some(c), _] => {
                if let Some(s) = self.l.symbol_at(r as usize, c as usize) {
                    total += try_triple(self, [r, c, s]);
                }
            }
            [Some(r), None, Some(s)] => {
                if let Some(c) = self.l.column_of(r as usize, s as usize) {
                    total += try_triple(self, [r, c, s]);
                }
            }
            [None, Some(c), Some(s)] => {
                if let Some(r) = self.l.row_of(c as usize, s as usize) {
                    total += try_triple(self, [r, c, s]);
                }
            }
            [Some(r), None, None] => {
                let row: Vec<_> = self.l.row(r as usize).to_vec();
                for t in row {
                    total += try_triple(self, [t.r, t.c, t.s]);
                }
            }
            [None, Some(c), None] => {
                for s in 0..n {
                    if let Some(r) = self.l.row_of(c as usize, s) {
                        total += try_triple(self, [r, c, s as u16]);
                    }
                }
            }
            [None, None, Some(s)] => {
                for c in 0..n {
                    if let Some(r) = self.l.row_of(c, s as usize) {
                        total += try_triple(self, [r, c as u16, s]);
                    }
                }
            }
            [None, None, None] => {
                let all: Vec<_> = self.l.triples().to_vec();
                for t in all {
                    total += try_triple(self, [t.r, t.c, t.s]);
                }
            }
        }
        total
    }
}

fn falling(n: u64, k: u64) -> u64 {
    (0..k).map(|i| n.saturating_sub(i)).product()
}

/// Labelled colour-preserving embeddings of `h` into `l`: injective maps on
/// each class sending every hyperedge to a triple of `l`.
pub fn count_configuration(h: &ColoredTripleSystem, l: &TripleSystem) -> Result<u64> {
    let v: usize = h.classes.iter().sum();
    if v > 14 || h.edges.len() > 10 {
        return Err(Error::OutOfRange(format!("configuration too large: {v} vertices, {} edges", h.edges.len())));
    }
    let h = &ColoredTripleSystem::new(h.classes, h.edges.clone())?;
    // order hyperedges so each one after the first shares as much as possible
    let mut order: Vec<usize> = Vec::new();
    let mut placed = [vec![false; h.classes[0]], vec![false; h.classes[1]], vec![false; h.classes[2]]];
    while order.len() < h.edges.len() {
        let next = (0..h.edges.len())
            .filter(|i| !order.contains(i))
            .max_by_key(|&i| {
                let e = h.edges[i];
                let shared = (0..3).filter(|&k| placed[k][e[k]]).count();
                (shared, std::cmp::Reverse(i))
            })
            .unwrap();
        for k in 0..3 {
            placed[k][h.edges[next][k]] = true;
        }
        order.push(next);
    }
    let n = l.order();
    let mut e = Embed {
        h,
        l,
        map: [vec![None; h.classes[0]], vec![None; h.classes[1]], vec![None; h.classes[2]]],
        used: [vec![false; n], vec![false; n], vec![false; n]],
        order,
    };
    let core = e.run(0);
    // vertices in no hyperedge may go anywhere unused
    let mut extra = 1u64;
    for k in 0..3 {
        let covered = placed[k].iter().filter(|&&b| b).count() as u64;
        let isolated = h.classes[k] as u64 - covered;
        extra *= falling(n as u64 - covered, isolated);
    }
    Ok(core * extra)
}
