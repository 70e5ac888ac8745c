use rand::seq::index::sample;
use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{next_part, prev_part, Vertex};
use crate::rng::{rng, sub_rng, Rng};

use super::adjust::{Adjuster, CycleCensus, CycleMode};
use super::gadgets::phi0;
use super::triangles::{EdgeId, TriangleSet};
use super::weights::WeightFunction;

/// Parameters of the regularity booster.
#[derive(Clone, Debug, PartialEq)]
pub struct RegParams {
    /// Edge density of the host graph.
    pub p: f64,
    /// Triangle retention rate.
    pub q: f64,
    /// Extension constant `C`.
    pub c: f64,
    /// Regularity slack, `C^-8` unless overridden.
    pub xi: f64,
    /// Iteration count; `⌈(ln n)²⌉` when `None`.
    pub iterations: Option<usize>,
    /// Cycle averaging; exact up to part size 60 when `None`.
    pub mode: Option<CycleMode>,
    /// Iteration stops once `‖φ^disc‖∞` drops below `tolerance` times the
    /// mean edge weight.
    pub tolerance: f64,
    /// Boost even when the condition check reports violations.
    pub force: bool,
    pub seed: u64,
    /// Random subsets tried per size in the extension checks.
    pub samples: usize,
}

impl RegParams {
    pub fn new(p: f64, q: f64) -> Self {
        RegParams {
            p,
            q,
            c: 4.0,
            xi: 4f64.powi(-8),
            iterations: None,
            mode: None,
            tolerance: 1e-9,
            force: false,
            seed: 0,
            samples: 500,
        }
    }

    /// Sets `C` and `ξ = C^-8`.
    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self.xi = c.powi(-8);
        self
    }

    pub fn iterations_for(&self, n: usize) -> usize {
        self.iterations.unwrap_or_else(|| {
            let l = (n.max(2) as f64).ln();
            (l * l).ceil() as usize
        })
    }

    pub fn mode_for(&self, n: usize) -> CycleMode {
        self.mode.unwrap_or_else(|| CycleMode::for_order(n, self.seed))
    }

    /// `p² q n / 4`, the per-edge target of the rounded subset.
    pub fn target(&self, n: usize) -> f64 {
        self.p * self.p * self.q * n as f64 / 4.0
    }
}

/// Outcome of one family of checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub checked: u64,
    pub violations: u64,
    /// Largest relative deviation from the expected count.
    pub worst: f64,
    /// Whether every instance was checked (as opposed to a random sample).
    pub exhaustive: bool,
}

impl ConditionCheck {
    fn record(&mut self, ok: bool, dev: f64) {
        self.checked += 1;
        self.violations += (!ok) as u64;
        self.worst = self.worst.max(dev);
    }

    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConditionReport {
    /// Per-edge triangle counts within `(1 ± ξ) p² q n`.
    pub edge_triangles: ConditionCheck,
    /// Common neighbourhoods of vertex sets of size at most 6.
    pub common_neighbors: ConditionCheck,
    /// Joint triangle extensions of edge sets of size at most 6.
    pub triangle_extensions: ConditionCheck,
    /// Edge counts between the pairs `(1,2)`, `(2,3)`, `(3,1)`.
    pub pair_edges: [usize; 3],
    /// Every vertex whose degrees to the two other parts differ, with the gap.
    pub degree_gaps: Vec<(Vertex, usize)>,
    /// Gaps above `n^{2/3}`.
    pub gap_violations: usize,
}

impl ConditionReport {
    pub fn divisibility_passes(&self) -> bool {
        self.pair_edges[0] == self.pair_edges[1] && self.pair_edges[1] == self.pair_edges[2] && self.gap_violations == 0
    }

    pub fn passes(&self) -> bool {
        self.edge_triangles.passes()
            && self.common_neighbors.passes()
            && self.triangle_extensions.passes()
            && self.divisibility_passes()
    }

    pub fn summary(&self) -> String {
        format!(
            "edge-triangles {}/{} bad, common-neighbours {}/{} bad, extensions {}/{} bad, pair edges {:?}, {} degree gaps above n^(2/3)",
            self.edge_triangles.violations,
            self.edge_triangles.checked,
            self.common_neighbors.violations,
            self.common_neighbors.checked,
            self.triangle_extensions.violations,
            self.triangle_extensions.checked,
            self.pair_edges,
            self.gap_violations
        )
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Every `k`-subset of `0..n` when there are at most `limit` of them,
/// otherwise `limit` random ones.
fn subsets(n: usize, k: usize, limit: usize, rng: &mut Rng) -> (Vec<Vec<usize>>, bool) {
    if k > n {
        return (Vec::new(), true);
    }
    if binom(n, k) <= limit as f64 {
        let mut out = Vec::new();
        let mut c: Vec<usize> = (0..k).collect();
        loop {
            out.push(c.clone());
            let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else { break };
            c[i] += 1;
            for t in i + 1..k {
                c[t] = c[t - 1] + 1;
            }
        }
        (out, true)
    } else {
        ((0..limit).map(|_| sample(rng, n, k).into_vec()).collect(), false)
    }
}

/// Checks the regularity, extension and near-divisibility hypotheses of the
/// booster. Never fails; violations are counted in the report.
pub fn check_conditions(ts: &TriangleSet, params: &RegParams) -> ConditionReport {
    let n = ts.order();
    let g = ts.graph();
    let mut rng = sub_rng(params.seed, u64::MAX - 1);
    let mut report = ConditionReport::default();
    let (p, q, xi, c) = (params.p, params.q, params.xi, params.c);

    let want = p * p * q * n as f64;
    report.edge_triangles.exhaustive = true;
    for &e in ts.edges() {
        let dev = (ts.triangles_on(e).len() as f64 / want - 1.0).abs();
        report.edge_triangles.record(dev <= xi * (1.0 + 1e-12), dev);
    }

    report.common_neighbors.exhaustive = true;
    report.triangle_extensions.exhaustive = true;
    for j in 0..3u8 {
        let i = next_part(j);
        let apex = prev_part(j);
        let pool: Vec<Vertex> = (0..n as u32).map(|x| Vertex::new(j, x)).chain((0..n as u32).map(|y| Vertex::new(i, y))).collect();
        for s in 1..=6 {
            let (sets, exhaustive) = subsets(pool.len(), s, params.samples, &mut rng);
            report.common_neighbors.exhaustive &= exhaustive;
            let want = p.powi(s as i32) * n as f64;
            for set in sets {
                let common = (0..n).filter(|&z| set.iter().all(|&k| g.neighbor_row(pool[k], apex).get(z))).count();
                let dev = (common as f64 / want - 1.0).abs();
                report.common_neighbors.record(dev <= xi * (1.0 + 1e-12), dev);
            }
        }
        let edges: Vec<EdgeId> = ts.edges().iter().copied().filter(|&e| e / (n * n) == j as usize).collect();
        for s in 1..=6 {
            let (sets, exhaustive) = subsets(edges.len(), s, params.samples, &mut rng);
            report.triangle_extensions.exhaustive &= exhaustive;
            for set in sets {
                let mut verts: Vec<Vertex> = set
                    .iter()
                    .flat_map(|&k| {
                        let (u, v) = ts.edge_endpoints(edges[k]);
                        [u, v]
                    })
                    .collect();
                verts.sort();
                verts.dedup();
                let mut count = 0;
                for w in 0..ts.words() {
                    count += set.iter().fold(u64::MAX, |m, &k| m & ts.apex_words(edges[k])[w]).count_ones();
                }
                let base = p.powi(verts.len() as i32) * n as f64;
                let count = count as f64;
                let ok = count >= base / c && count <= c * base;
                let dev = if count > base { count / base } else { base / count.max(f64::MIN_POSITIVE) };
                report.triangle_extensions.record(ok, dev);
            }
        }
    }

    for j in 0..3u8 {
        report.pair_edges[j as usize] = g.edge_count_from(j);
    }
    let limit = (n as f64).powf(2.0 / 3.0);
    for v in g.vertices() {
        let gap = g.degree_to(v, next_part(v.part)).abs_diff(g.degree_to(v, prev_part(v.part)));
        if gap > 0 {
            report.degree_gaps.push((v, gap));
            report.gap_violations += (gap as f64 > limit) as usize;
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub max_disc: f64,
    pub vertex_residual: f64,
}

#[derive(Clone, Debug)]
pub struct BoostOutcome {
    /// Last iterate `φ_k`, before normalisation.
    pub phi: WeightFunction,
    /// `φ_k / β` clamped to `[0, 1]`, per triangle id.
    pub phi_star: Vec<f64>,
    pub beta: f64,
    pub trace: Vec<TraceRow>,
    /// Triangle ids of the rounded subset.
    pub selected: Vec<usize>,
    pub conditions: ConditionReport,
    /// Triangles whose normalised weight left `[0, 1]`.
    pub clamped: usize,
    /// Iteration at which the discrepancy fell below tolerance, if it did.
    pub converged_at: Option<usize>,
    pub census: Option<CycleCensus>,
}

impl BoostOutcome {
    /// Number of selected triangles on every edge, in `ts.edges()` order.
    pub fn edge_counts(&self, ts: &TriangleSet) -> Vec<usize> {
        edge_counts(ts, &self.selected)
    }

    /// Whether the discrepancy trace never increases.
    pub fn trace_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[1].max_disc <= w[0].max_disc)
    }
}

pub fn edge_counts(ts: &TriangleSet, selected: &[usize]) -> Vec<usize> {
    let mut per = vec![0usize; 3 * ts.order() * ts.order()];
    for &t in selected {
        for e in ts.triangle_edges(ts.triangle(t)) {
            per[e] += 1;
        }
    }
    ts.edges().iter().map(|&e| per[e]).collect()
}

/// Keeps triangle `i` independently with probability `weights[i]`.
pub fn round_weights(weights: &[f64], rng: &mut Rng) -> Vec<usize> {
    weights
        .iter()
        .enumerate()
        .filter(|&(_, &w)| rng.random::<f64>() < w)
        .map(|(i, _)| i)
        .collect()
}

/// Iterates the adjustment map from `φ₀`, normalises, and rounds.
pub fn boost(ts: &TriangleSet, params: &RegParams) -> Result<BoostOutcome> {
    if ts.edge_count() == 0 {
        return Err(Error::Precondition("host graph has no edges".into()));
    }
    let n = ts.order();
    let conditions = check_conditions(ts, params);
    if !conditions.passes() && !params.force {
        return Err(Error::Precondition(format!("booster hypotheses fail: {}", conditions.summary())));
    }
    let mut phi = phi0(ts)?;
    // the census is the expensive part, so skip it when φ₀ is already flat
    let mut adjuster: Option<Adjuster> = None;
    let row = |i: usize, phi: &WeightFunction| TraceRow {
        iter: i,
        max_disc: phi.max_discrepancy(ts),
        vertex_residual: phi.vertex_residual(ts),
    };
    let mut trace = vec![row(0, &phi)];
    let mut converged_at = None;
    let mut growth = 0;
    for i in 1..=params.iterations_for(n) {
        let prev = trace[trace.len() - 1];
        let mean_edge = 3.0 * phi.sum() / ts.edge_count() as f64;
        if prev.max_disc <= params.tolerance * mean_edge.abs() {
            converged_at = Some(i - 1);
            break;
        }
        if adjuster.is_none() {
            adjuster = Some(Adjuster::new(ts, params.mode_for(n))?);
        }
        phi = adjuster.as_mut().expect("built above").adjust(&phi)?;
        debug_assert!(phi.caches_consistent(ts, 1e-9));
        let r = row(i, &phi);
        growth = if r.max_disc > prev.max_disc { growth + 1 } else { 0 };
        trace.push(r);
        if growth >= 2 {
            return Err(Error::Diverged(i));
        }
    }
    let mean_edge = 3.0 * phi.sum() / ts.edge_count() as f64;
    let beta = 4.0 * mean_edge / (params.p * params.p * params.q * n as f64);
    let mut clamped = 0;
    let phi_star: Vec<f64> = phi
        .values()
        .iter()
        .map(|&x| {
            let y = x / beta;
            if !(0.0..=1.0).contains(&y) {
                clamped += 1;
            }
            y.clamp(0.0, 1.0)
        })
        .collect();
    let selected = round_weights(&phi_star, &mut rng(params.seed));
    Ok(BoostOutcome {
        phi,
        phi_star,
        beta,
        trace,
        selected,
        conditions,
        clamped,
        converged_at,
        census: adjuster.as_ref().and_then(|a| a.census().cloned()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TripartiteGraph;

    #[test]
    fn complete_is_fixed_point() {
        let ts = TriangleSet::all_triangles(TripartiteGraph::complete(6)).unwrap();
        let params = RegParams::new(1.0, 1.0);
        let out = boost(&ts, &params).unwrap();
        assert!(out.conditions.passes());
        assert!(out.trace.iter().all(|r| r.max_disc == 0.0));
        assert!(out.phi.values().iter().all(|&x| x == 1.0));
        assert!((out.beta - 4.0).abs() < 1e-12);
        assert!(out.phi_star.iter().all(|&x| (x - 0.25).abs() < 1e-12));
    }

    #[test]
    fn missing_edge_flags_gaps() {
        let mut g = TripartiteGraph::complete(5);
        g.remove_edge(Vertex::new(0, 1), Vertex::new(1, 2));
        let ts = TriangleSet::all_triangles(g).unwrap();
        let r = check_conditions(&ts, &RegParams::new(1.0, 1.0));
        assert!(!r.divisibility_passes());
        assert_eq!(r.pair_edges, [24, 25, 25]);
        let mut gaps = r.degree_gaps.clone();
        gaps.sort();
        assert_eq!(gaps, vec![(Vertex::new(0, 1), 1), (Vertex::new(1, 2), 1)]);
    }

    #[test]
    fn thinned_boost_converges() {
        let ts = TriangleSet::thinned(TripartiteGraph::complete(10), 0.9, &mut rng(11)).unwrap();
        let mut params = RegParams::new(1.0, 0.9);
        params.force = true;
        let out = boost(&ts, &params).unwrap();
        assert!(out.trace_monotone());
        assert!(out.trace.iter().all(|r| r.vertex_residual < 1e-10));
        let last = out.trace.last().unwrap();
        assert_eq!(out.trace.len(), 7);
        assert!(last.max_disc < 1e-3 * out.trace[0].max_disc);
        assert_eq!(out.clamped, 0);
    }

    #[test]
    fn subsets_exhaustive_small() {
        let (s, ex) = subsets(5, 2, 100, &mut rng(0));
        assert!(ex);
        assert_eq!(s.len(), 10);
        let (s, ex) = subsets(50, 3, 100, &mut rng(0));
        assert!(!ex);
        assert_eq!(s.len(), 100);
    }
}
