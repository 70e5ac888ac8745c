//! The adjustment map `A(φ) = φ − Σ_e φ^disc(e) ψ_e`.
//!
//! Expanding the gadgets, a 6-cycle `J` with edges `e_0..e_5` and apex set
//! `a_J` moves `(−1)^k W_J / |a_J|` off every triangle `e_k ∪ {v}`, `v ∈ a_J`,
//! where `W_J = Σ_i (−1)^i φ^disc(e_i) / |G(e_i)|`. The exact pass walks each
//! unoriented 6-cycle once, in the canonical form `x1 y1 x2 y2 x3 y3` with
//! `x1 < x2, x3` and `y1 < y3`, and batches the updates of edges that stay
//! fixed while the inner loops run.

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::sub_rng;

use super::gadgets::{apex_set, SixCycle};
use super::triangles::{coords, EdgeId, TriangleSet};
use super::weights::WeightFunction;

/// How `ψ_e` averages over the 6-cycles through `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleMode {
    /// Every 6-cycle, enumerated (part size at most 64).
    Exact,
    /// `per_edge` uniform samples of 6-cycles through each edge; `ψ_e` is
    /// replaced by the sample mean of `ψ_{J,e}`.
    Sampled { per_edge: usize, seed: u64 },
}

impl CycleMode {
    /// Exact up to part size 60, sampled beyond.
    pub fn for_order(n: usize, seed: u64) -> Self {
        if n <= 60 {
            CycleMode::Exact
        } else {
            CycleMode::Sampled { per_edge: 256, seed }
        }
    }
}

/// Relative tolerance for the vertex-balance precondition, in units of `φ^sum / |E|`.
pub const BALANCE_TOLERANCE: f64 = 1e-9;

/// Adjacency of one pair of parts, as seen by the exact pass.
struct PairView {
    n: usize,
    /// `x -> sorted y` neighbours.
    adj_x: Vec<Vec<u32>>,
    /// `y -> sorted x` neighbours.
    adj_y: Vec<Vec<u32>>,
    /// `y -> bitset of x` neighbours.
    ymask: Vec<u64>,
    /// Apex bitset per local edge `x * n + y`.
    mask: Vec<u64>,
    /// Triangle id per `(x * n + y) * n + z` (only meaningful inside `mask`).
    tri: Vec<u32>,
}

impl PairView {
    fn new(ts: &TriangleSet, j: u8) -> Self {
        let n = ts.order();
        let base = j as usize * n * n;
        let mut adj_x = vec![Vec::new(); n];
        let mut adj_y = vec![Vec::new(); n];
        let mut ymask = vec![0u64; n];
        let mut mask = vec![0u64; n * n];
        let mut tri = vec![u32::MAX; n * n * n];
        for x in 0..n {
            for y in 0..n {
                let e = base + x * n + y;
                if !ts.has_edge_id(e) {
                    continue;
                }
                adj_x[x].push(y as u32);
                adj_y[y].push(x as u32);
                if n <= 64 {
                    ymask[y] |= 1 << x;
                    mask[x * n + y] = ts.apex_words(e)[0];
                }
                for z in 0..n {
                    tri[(x * n + y) * n + z] = ts.find_raw(coords(j, x as u32, y as u32, z as u32));
                }
            }
        }
        PairView { n, adj_x, adj_y, ymask, mask, tri }
    }

    /// Calls `leaf(e0, e1, e2, e3, e4, e5, apex)` for every 6-cycle (local
    /// edge ids), including those with an empty apex set.
    fn for_each_cycle(&self, mut leaf: impl FnMut([usize; 6], u64)) {
        let n = self.n;
        for x1 in 0..n {
            let nx1 = &self.adj_x[x1];
            let above = if x1 + 1 >= 64 { 0 } else { !((1u64 << (x1 + 1)) - 1) };
            for (i1, &y1) in nx1.iter().enumerate() {
                let e0 = x1 * n + y1 as usize;
                for &y3 in &nx1[i1 + 1..] {
                    let e5 = x1 * n + y3 as usize;
                    let m05 = self.mask[e0] & self.mask[e5];
                    for &x2 in self.adj_y[y1 as usize].iter().filter(|&&x| x as usize > x1) {
                        let e1 = x2 as usize * n + y1 as usize;
                        let m1 = m05 & self.mask[e1];
                        for &y2 in self.adj_x[x2 as usize].iter().filter(|&&y| y != y1 && y != y3) {
                            let e2 = x2 as usize * n + y2 as usize;
                            let m2 = m1 & self.mask[e2];
                            let mut cand = self.ymask[y2 as usize] & self.ymask[y3 as usize] & above & !(1u64 << x2);
                            while cand != 0 {
                                let x3 = cand.trailing_zeros() as usize;
                                cand &= cand - 1;
                                let e3 = x3 * n + y2 as usize;
                                let e4 = x3 * n + y3 as usize;
                                leaf([e0, e1, e2, e3, e4, e5], m2 & self.mask[e3] & self.mask[e4]);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Accumulates `Σ_J (−1)^k W_J / |a_J|` into `acc[(e_k) * n + v]`.
    fn exact_pass(&self, w: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut acc = vec![0.0; n * n * n];
        let mut s = vec![0.0; n];
        let mut tx2 = vec![0.0; n];
        let mut ty3 = vec![0.0; n];
        let mut e4buf = vec![0.0; n * n];
        for x1 in 0..n {
            let nx1 = &self.adj_x[x1];
            let above = if x1 + 1 >= 64 { 0 } else { !((1u64 << (x1 + 1)) - 1) };
            for (i1, &y1) in nx1.iter().enumerate() {
                let e0 = x1 * n + y1 as usize;
                let m0 = self.mask[e0];
                if m0 == 0 {
                    continue;
                }
                for &y3 in &nx1[i1 + 1..] {
                    let e5 = x1 * n + y3 as usize;
                    let m05 = m0 & self.mask[e5];
                    if m05 == 0 {
                        continue;
                    }
                    let wbase = w[e0] - w[e5];
                    let mut touched4 = 0u64;
                    let mut hit_y3 = false;
                    for &x2 in self.adj_y[y1 as usize].iter().filter(|&&x| x as usize > x1) {
                        let e1 = x2 as usize * n + y1 as usize;
                        let m1 = m05 & self.mask[e1];
                        if m1 == 0 {
                            continue;
                        }
                        let mut hit_x2 = false;
                        for &y2 in self.adj_x[x2 as usize].iter().filter(|&&y| y != y1 && y != y3) {
                            let e2 = x2 as usize * n + y2 as usize;
                            let m2 = m1 & self.mask[e2];
                            if m2 == 0 {
                                continue;
                            }
                            let p = wbase - w[e1] + w[e2];
                            let mut hit = false;
                            let mut cand = self.ymask[y2 as usize] & self.ymask[y3 as usize] & above & !(1u64 << x2);
                            while cand != 0 {
                                let x3 = cand.trailing_zeros() as usize;
                                cand &= cand - 1;
                                let e3 = x3 * n + y2 as usize;
                                let e4 = x3 * n + y3 as usize;
                                let mm = m2 & self.mask[e3] & self.mask[e4];
                                if mm == 0 {
                                    continue;
                                }
                                let c = (p - w[e3] + w[e4]) / mm.count_ones() as f64;
                                let mut m = mm;
                                let row3 = &mut acc[e3 * n..e3 * n + n];
                                let row4 = &mut e4buf[x3 * n..x3 * n + n];
                                while m != 0 {
                                    let v = m.trailing_zeros() as usize;
                                    m &= m - 1;
                                    s[v] += c;
                                    row4[v] += c;
                                    row3[v] -= c;
                                }
                                touched4 |= 1 << x3;
                                hit = true;
                            }
                            if hit {
                                let row2 = &mut acc[e2 * n..e2 * n + n];
                                for v in 0..n {
                                    row2[v] += s[v];
                                    tx2[v] += s[v];
                                    s[v] = 0.0;
                                }
                                hit_x2 = true;
                            }
                        }
                        if hit_x2 {
                            let row1 = &mut acc[e1 * n..e1 * n + n];
                            for v in 0..n {
                                row1[v] -= tx2[v];
                                ty3[v] += tx2[v];
                                tx2[v] = 0.0;
                            }
                            hit_y3 = true;
                        }
                    }
                    if hit_y3 {
                        for v in 0..n {
                            acc[e0 * n + v] += ty3[v];
                            acc[e5 * n + v] -= ty3[v];
                            ty3[v] = 0.0;
                        }
                    }
                    while touched4 != 0 {
                        let x3 = touched4.trailing_zeros() as usize;
                        touched4 &= touched4 - 1;
                        let e4 = x3 * n + y3 as usize;
                        for v in 0..n {
                            acc[e4 * n + v] += e4buf[x3 * n + v];
                            e4buf[x3 * n + v] = 0.0;
                        }
                    }
                }
            }
        }
        acc
    }
}

/// Per-edge 6-cycle statistics of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCensus {
    /// `|G(e)|` per edge id: 6-cycles through `e` with a nonempty apex set.
    pub through: Vec<u64>,
    /// 6-cycles (over all pairs) whose apex set is empty; these carry no
    /// gadget and are left out of every `G(e)`.
    pub empty_apex: u64,
    pub total: u64,
}

/// Precomputed structure for repeated adjustment of one instance.
pub struct Adjuster<'a> {
    ts: &'a TriangleSet,
    mode: CycleMode,
    pairs: Vec<PairView>,
    census: Option<CycleCensus>,
    calls: u64,
}

impl<'a> Adjuster<'a> {
    pub fn new(ts: &'a TriangleSet, mode: CycleMode) -> Result<Self> {
        let n = ts.order();
        let mut adj = Adjuster { ts, mode, pairs: Vec::new(), census: None, calls: 0 };
        if mode == CycleMode::Exact {
            if n > 64 {
                return Err(Error::Precondition(format!("exact 6-cycle enumeration needs part size <= 64, got {n}")));
            }
            adj.pairs = (0..3u8).into_par_iter().map(|j| PairView::new(ts, j)).collect();
            let counts: Vec<(Vec<u64>, u64, u64)> = adj
                .pairs
                .par_iter()
                .map(|pv| {
                    let mut through = vec![0u64; n * n];
                    let (mut empty, mut total) = (0u64, 0u64);
                    pv.for_each_cycle(|es, m| {
                        total += 1;
                        if m == 0 {
                            empty += 1;
                        } else {
                            es.iter().for_each(|&e| through[e] += 1);
                        }
                    });
                    (through, empty, total)
                })
                .collect();
            let mut census = CycleCensus { through: vec![0; 3 * n * n], empty_apex: 0, total: 0 };
            for (j, (through, empty, total)) in counts.into_iter().enumerate() {
                census.through[j * n * n..(j + 1) * n * n].copy_from_slice(&through);
                census.empty_apex += empty;
                census.total += total;
            }
            if let Some(&e) = ts.edges().iter().find(|&&e| census.through[e] == 0) {
                let (u, v) = ts.edge_endpoints(e);
                return Err(Error::Precondition(format!("no 6-cycle with a nonempty apex set through {u}-{v}")));
            }
            adj.census = Some(census);
        }
        Ok(adj)
    }

    pub fn census(&self) -> Option<&CycleCensus> {
        self.census.as_ref()
    }

    pub fn mode(&self) -> CycleMode {
        self.mode
    }

    /// `A(φ)` for a vertex-balanced `φ`.
    pub fn adjust(&mut self, phi: &WeightFunction) -> Result<WeightFunction> {
        let ts = self.ts;
        if !phi.is_vertex_balanced(ts, BALANCE_TOLERANCE) {
            return Err(Error::Precondition(format!(
                "weight function is not vertex-balanced (imbalance {:.3e})",
                phi.vertex_imbalance(ts)
            )));
        }
        let disc = phi.discrepancy(ts);
        let mut values = phi.values().to_vec();
        match self.mode {
            CycleMode::Exact => {
                let n = ts.order();
                let census = self.census.as_ref().expect("census built for exact mode");
                let accs: Vec<Vec<f64>> = self
                    .pairs
                    .par_iter()
                    .enumerate()
                    .map(|(j, pv)| {
                        let base = j * n * n;
                        let w: Vec<f64> = (0..n * n)
                            .map(|l| {
                                let t = census.through[base + l];
                                if t == 0 { 0.0 } else { disc[base + l] / t as f64 }
                            })
                            .collect();
                        pv.exact_pass(&w)
                    })
                    .collect();
                for (pv, acc) in self.pairs.iter().zip(&accs) {
                    for (slot, &a) in acc.iter().enumerate() {
                        if a != 0.0 {
                            values[pv.tri[slot] as usize] -= a;
                        }
                    }
                }
            }
            CycleMode::Sampled { per_edge, seed } => {
                let call = self.calls;
                let m = ts.edge_count() as u64;
                let parts: Vec<Result<Vec<(u32, f64)>>> = ts
                    .edges()
                    .par_iter()
                    .enumerate()
                    .map(|(i, &e)| sampled_edge(ts, e, per_edge, -disc[e], sub_rng(seed, call * m + i as u64)))
                    .collect();
                for part in parts {
                    for (t, d) in part? {
                        values[t as usize] += d;
                    }
                }
            }
        }
        self.calls += 1;
        Ok(WeightFunction::new(ts, values))
    }
}

/// Sparse `scale · ψ̂_e` from uniformly sampled 6-cycles through `e`.
fn sampled_edge(ts: &TriangleSet, e: EdgeId, per_edge: usize, scale: f64, mut rng: crate::rng::Rng) -> Result<Vec<(u32, f64)>> {
    let n = ts.order() as u32;
    let g = ts.graph();
    let (x0, y0) = ts.edge_endpoints(e);
    let mut picked = Vec::with_capacity(per_edge);
    let mut attempts = 0usize;
    let limit = 64 * per_edge.max(1);
    while picked.len() < per_edge && attempts < limit && n >= 3 {
        attempts += 1;
        let x1 = rng.random_range(0..n);
        let x2 = rng.random_range(0..n);
        let y1 = rng.random_range(0..n);
        let y2 = rng.random_range(0..n);
        if x1 == x0.index || x2 == x0.index || x1 == x2 || y1 == y0.index || y2 == y0.index || y1 == y2 {
            continue;
        }
        let c = SixCycle { pair: x0.part, xs: [x0.index, x1, x2], ys: [y0.index, y1, y2] };
        let present = (0..6).all(|k| {
            let (x, y) = c.edge(k);
            g.has_edge(crate::graph::Vertex::new(x0.part, x), crate::graph::Vertex::new(y0.part, y))
        });
        if !present {
            continue;
        }
        let apex = apex_set(ts, &c);
        if !apex.is_empty() {
            picked.push((c, apex));
        }
    }
    if picked.is_empty() {
        return Err(Error::Precondition(format!("no 6-cycle with a nonempty apex set found through {x0}-{y0}")));
    }
    let k = scale / picked.len() as f64;
    let mut out = Vec::new();
    for (c, apex) in &picked {
        let share = k / apex.len() as f64;
        for i in 0..6 {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let (x, y) = c.edge(i);
            for &v in apex {
                out.push((ts.find_raw(coords(c.pair, x, y, v)), sign * share));
            }
        }
    }
    Ok(out)
}

/// One adjustment step with fresh precomputation.
pub fn adjust(ts: &TriangleSet, phi: &WeightFunction, mode: CycleMode) -> Result<WeightFunction> {
    Adjuster::new(ts, mode)?.adjust(phi)
}
