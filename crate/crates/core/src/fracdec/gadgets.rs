//! The two families of weight-shifting gadgets: `χ_{u,v}` moves vertex weight
//! from `v` to `u` through copies of `K_{2,1,1}`, and `ψ_{J,e}` shifts edge
//! weight around a 6-cycle `J` without touching any vertex weight.

use crate::error::{Error, Result};
use crate::graph::{next_part, Vertex};

use super::triangles::{coords, EdgeId, TriangleSet, ABSENT};
use super::weights::WeightFunction;

/// `f_u = |T_u| − 3 deg(u) |T| / 2|E|`, indexed `part * n + index`.
pub fn f_values(ts: &TriangleSet) -> Vec<f64> {
    let e2 = 2.0 * ts.edge_count() as f64;
    let total = ts.len() as f64;
    ts.graph()
        .vertices()
        .map(|v| ts.triangles_at(v).len() as f64 - 3.0 * ts.degree(v) as f64 * total / e2)
        .collect()
}

/// `(H(u), H(v))` triangle ids for every copy `H` of `K_{2,1,1}` through
/// `u, v` whose two triangles are both in the set.
fn k211_copies(ts: &TriangleSet, u: u32, v: u32, part: u8) -> Vec<(u32, u32)> {
    let opp = next_part(part);
    let n = ts.order();
    let (wu, bu) = (u as usize / 64, 1u64 << (u % 64));
    let (wv, bv) = (v as usize / 64, 1u64 << (v % 64));
    let base = opp as usize * n * n;
    let mut out = Vec::new();
    for e in base..base + n * n {
        if !ts.has_edge_id(e) {
            continue;
        }
        let a = ts.apex_words(e);
        if a[wu] & bu != 0 && a[wv] & bv != 0 {
            let (w, x) = ts.edge_endpoints(e);
            let tu = ts.find_raw(coords(opp, w.index, x.index, u));
            let tv = ts.find_raw(coords(opp, w.index, x.index, v));
            out.push((tu, tv));
        }
    }
    out
}

/// `χ_{u,v}` for distinct `u, v` in one part.
pub fn chi_uv(ts: &TriangleSet, u: Vertex, v: Vertex) -> Result<WeightFunction> {
    if u.part != v.part || u == v {
        return Err(Error::Precondition(format!("{u} and {v} must be distinct vertices of one part")));
    }
    let copies = k211_copies(ts, u.index, v.index, u.part);
    if copies.is_empty() {
        return Err(Error::Precondition(format!("no K211 with both triangles present through {u}, {v}")));
    }
    let k = 1.0 / copies.len() as f64;
    let mut values = vec![0.0; ts.len()];
    for (tu, tv) in copies {
        values[tu as usize] += k;
        values[tv as usize] -= k;
    }
    Ok(WeightFunction::new(ts, values))
}

fn chi_part_values(ts: &TriangleSet, part: u8, f: &[f64], values: &mut [f64]) -> Result<()> {
    let n = ts.order();
    let off = part as usize * n;
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            let fu = f[off + u as usize];
            let fv = f[off + v as usize];
            if fu == fv {
                continue;
            }
            let copies = k211_copies(ts, u, v, part);
            if copies.is_empty() {
                return Err(Error::Precondition(format!(
                    "no K211 with both triangles present through {}, {}",
                    Vertex::new(part, u),
                    Vertex::new(part, v)
                )));
            }
            // ordered pairs (u, v) and (v, u) contribute equally
            let coef = -(fu - fv) / (n as f64 * copies.len() as f64);
            for (tu, tv) in copies {
                values[tu as usize] += coef;
                values[tv as usize] -= coef;
            }
        }
    }
    Ok(())
}

/// `χ_{V^j} = −(1/2n) Σ_{u≠v} (f_u − f_v) χ_{u,v}`.
pub fn chi_part(ts: &TriangleSet, part: u8) -> Result<WeightFunction> {
    let mut values = vec![0.0; ts.len()];
    chi_part_values(ts, part, &f_values(ts), &mut values)?;
    Ok(WeightFunction::new(ts, values))
}

/// `φ₀ = 1 + χ_{V¹} + χ_{V²} + χ_{V³}`, vertex-balanced.
pub fn phi0(ts: &TriangleSet) -> Result<WeightFunction> {
    let f = f_values(ts);
    let mut values = vec![1.0; ts.len()];
    for part in 0..3 {
        chi_part_values(ts, part, &f, &mut values)?;
    }
    Ok(WeightFunction::new(ts, values))
}

/// A 6-cycle `x0 y0 x1 y1 x2 y2` alternating between parts `pair` and
/// `pair + 1`. Edge `k` is `x_{k/2} y_{k/2}` for even `k` and
/// `y_{(k-1)/2} x_{(k+1)/2}` for odd `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SixCycle {
    pub pair: u8,
    pub xs: [u32; 3],
    pub ys: [u32; 3],
}

impl SixCycle {
    pub fn edge(&self, k: usize) -> (u32, u32) {
        if k.is_multiple_of(2) {
            (self.xs[k / 2], self.ys[k / 2])
        } else {
            (self.xs[k.div_ceil(2) % 3], self.ys[(k - 1) / 2])
        }
    }

    pub fn edge_ids(&self, n: usize) -> [EdgeId; 6] {
        let base = self.pair as usize * n * n;
        std::array::from_fn(|k| {
            let (x, y) = self.edge(k);
            base + x as usize * n + y as usize
        })
    }

    /// Rotation distance between edges `a` and `b` around the cycle.
    pub fn distance(a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        d.min(6 - d)
    }
}

/// Every 6-cycle of the host graph through `e`, each once, with `e` as edge 0.
pub fn cycles_through(ts: &TriangleSet, e: EdgeId) -> Vec<SixCycle> {
    let g = ts.graph();
    let (x0, y0) = ts.edge_endpoints(e);
    let (px, py) = (x0.part, y0.part);
    let mut out = Vec::new();
    for x1 in g.neighbors_in(y0, px).filter(|&x| x != x0) {
        for y1 in g.neighbors_in(x1, py).filter(|&y| y != y0) {
            for x2 in g.neighbors_in(y1, px).filter(|&x| x != x0 && x != x1) {
                for y2 in g.neighbors_in(x2, py).filter(|&y| y != y0 && y != y1) {
                    if g.has_edge(x0, y2) {
                        out.push(SixCycle {
                            pair: px,
                            xs: [x0.index, x1.index, x2.index],
                            ys: [y0.index, y1.index, y2.index],
                        });
                    }
                }
            }
        }
    }
    out
}

/// Apex set `T_{3,3,1}(J)`: vertices of the third part completing every
/// edge of `J` to a triangle of the set.
pub fn apex_set(ts: &TriangleSet, cycle: &SixCycle) -> Vec<u32> {
    let ids = cycle.edge_ids(ts.order());
    let mut out = Vec::new();
    for w in 0..ts.words() {
        let mut m = ids.iter().fold(u64::MAX, |m, &e| m & ts.apex_words(e)[w]);
        while m != 0 {
            out.push((w * 64) as u32 + m.trailing_zeros());
            m &= m - 1;
        }
    }
    out.retain(|&v| (v as usize) < ts.order());
    out
}

fn add_psi_cycle(ts: &TriangleSet, cycle: &SixCycle, pos: usize, apex: &[u32], scale: f64, values: &mut [f64]) {
    let k = scale / apex.len() as f64;
    for i in 0..6 {
        let sign = if SixCycle::distance(i, pos).is_multiple_of(2) { 1.0 } else { -1.0 };
        let (x, y) = cycle.edge(i);
        for &v in apex {
            let t = ts.find_raw(coords(cycle.pair, x, y, v));
            debug_assert_ne!(t, ABSENT);
            values[t as usize] += sign * k;
        }
    }
}

/// `ψ_{J,e}` where `e` is edge `pos` of `J`.
pub fn psi_cycle(ts: &TriangleSet, cycle: &SixCycle, pos: usize) -> Result<WeightFunction> {
    let apex = apex_set(ts, cycle);
    if apex.is_empty() {
        return Err(Error::Precondition("6-cycle has an empty apex set".into()));
    }
    let mut values = vec![0.0; ts.len()];
    add_psi_cycle(ts, cycle, pos, &apex, 1.0, &mut values);
    Ok(WeightFunction::new(ts, values))
}

/// `ψ_e`: the average of `ψ_{J,e}` over 6-cycles `J ∋ e` with a nonempty
/// apex set. Also returns the number of cycles through `e` left out because
/// their apex set is empty.
pub fn psi_edge(ts: &TriangleSet, e: EdgeId) -> Result<(WeightFunction, usize)> {
    let mut values = vec![0.0; ts.len()];
    let (kept, skipped) = psi_edge_into(ts, e, 1.0, &mut values);
    if kept == 0 {
        let (u, v) = ts.edge_endpoints(e);
        return Err(Error::Precondition(format!("no 6-cycle with a nonempty apex set through {u}-{v}")));
    }
    Ok((WeightFunction::new(ts, values), skipped))
}

/// Adds `scale · ψ_e` into `values`; returns (cycles used, cycles skipped).
pub(crate) fn psi_edge_into(ts: &TriangleSet, e: EdgeId, scale: f64, values: &mut [f64]) -> (usize, usize) {
    let cycles: Vec<_> = cycles_through(ts, e).into_iter().map(|c| (apex_set(ts, &c), c)).collect();
    let kept = cycles.iter().filter(|(a, _)| !a.is_empty()).count();
    if kept > 0 {
        for (apex, c) in cycles.iter().filter(|(a, _)| !a.is_empty()) {
            add_psi_cycle(ts, c, 0, apex, scale / kept as f64, values);
        }
    }
    (kept, cycles.len() - kept)
}

/// `A(φ) = φ − Σ_e φ^disc(e) ψ_e`, built edge by edge from the explicit
/// gadgets. Quadratic in the number of cycles; meant for small instances
/// and as a reference for the fast pass.
pub fn adjust_reference(ts: &TriangleSet, phi: &WeightFunction) -> Result<WeightFunction> {
    let disc = phi.discrepancy(ts);
    let mut values = phi.values().to_vec();
    for &e in ts.edges() {
        let (kept, _) = psi_edge_into(ts, e, -disc[e], &mut values);
        if kept == 0 {
            let (u, v) = ts.edge_endpoints(e);
            return Err(Error::Precondition(format!("no 6-cycle with a nonempty apex set through {u}-{v}")));
        }
    }
    Ok(WeightFunction::new(ts, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TripartiteGraph;
    use crate::rng::rng;

    fn thinned(n: usize, q: f64, seed: u64) -> TriangleSet {
        TriangleSet::thinned(TripartiteGraph::complete(n), q, &mut rng(seed)).unwrap()
    }

    #[test]
    fn chi_vertex_weights() {
        let ts = thinned(6, 0.8, 1);
        let (u, v) = (Vertex::new(1, 0), Vertex::new(1, 3));
        let chi = chi_uv(&ts, u, v).unwrap();
        for w in ts.graph().vertices() {
            let want = if w == u { 1.0 } else if w == v { -1.0 } else { 0.0 };
            assert!((chi.vertex_weight(w) - want).abs() < 1e-12, "{w}");
        }
    }

    #[test]
    fn f_sums_to_zero_per_part() {
        let ts = thinned(7, 0.7, 2);
        let f = f_values(&ts);
        for j in 0..3 {
            let s: f64 = f[j * 7..(j + 1) * 7].iter().sum();
            assert!(s.abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn phi0_vertex_balanced() {
        let ts = thinned(7, 0.7, 3);
        let phi = phi0(&ts).unwrap();
        assert!(phi.vertex_residual(&ts) < 1e-12);
        let full = TriangleSet::all_triangles(TripartiteGraph::complete(4)).unwrap();
        assert_eq!(phi0(&full).unwrap(), WeightFunction::constant(&full, 1.0));
    }

    #[test]
    fn cycle_counts_complete() {
        // K_{n,n}: (n-1)^2 (n-2)^2 six-cycles through a fixed edge
        let ts = TriangleSet::all_triangles(TripartiteGraph::complete(5)).unwrap();
        for &e in &ts.edges()[..3] {
            let cs = cycles_through(&ts, e);
            assert_eq!(cs.len(), 16 * 9);
            let mut uniq: Vec<_> = cs.iter().map(|c| {
                let mut ids = c.edge_ids(5);
                ids.sort();
                ids
            }).collect();
            uniq.sort();
            uniq.dedup();
            assert_eq!(uniq.len(), cs.len());
        }
    }

    #[test]
    fn psi_exact_identities() {
        let ts = thinned(6, 0.85, 4);
        let n = ts.order();
        let e = ts.edges()[7];
        let cycles = cycles_through(&ts, e);
        let c = cycles.iter().find(|c| !apex_set(&ts, c).is_empty()).unwrap();
        let psi = psi_cycle(&ts, c, 0).unwrap();
        let ids = c.edge_ids(n);
        for &f in ts.edges() {
            let want = match ids.iter().position(|&x| x == f) {
                Some(k) => if SixCycle::distance(k, 0).is_multiple_of(2) { 1.0 } else { -1.0 },
                None => 0.0,
            };
            assert!((psi.edge_weight(f) - want).abs() < 1e-12);
        }
        let (pe, _) = psi_edge(&ts, e).unwrap();
        for w in ts.graph().vertices() {
            assert!(psi.vertex_weight(w).abs() < 1e-12);
            assert!(pe.vertex_weight(w).abs() < 1e-12);
        }
        assert!((pe.edge_weight(e) - 1.0).abs() < 1e-12);
        assert!(pe.sum().abs() < 1e-12);
    }
}
