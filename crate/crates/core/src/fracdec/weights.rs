use crate::graph::Vertex;

use super::triangles::{EdgeId, TriangleSet};

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Compensated::default();
    xs.into_iter().for_each(|x| acc.add(x));
    acc.value()
}

/// A real weight on every triangle of a [`TriangleSet`], with its vertex,
/// edge and total weights cached.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFunction {
    values: Vec<f64>,
    vtx: Vec<f64>,
    edge: Vec<f64>,
    sum: f64,
}

impl WeightFunction {
    /// `values[i]` is the weight of triangle `i`.
    pub fn new(ts: &TriangleSet, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), ts.len(), "one weight per triangle");
        let n = ts.order();
        let mut vtx = vec![Compensated::default(); 3 * n];
        let mut edge = vec![Compensated::default(); 3 * n * n];
        let mut sum = Compensated::default();
        for (&t, &w) in ts.triangles().iter().zip(&values) {
            sum.add(w);
            for (j, &x) in t.iter().enumerate() {
                vtx[j * n + x as usize].add(w);
            }
            for e in ts.triangle_edges(t) {
                edge[e].add(w);
            }
        }
        WeightFunction {
            values,
            vtx: vtx.iter().map(Compensated::value).collect(),
            edge: edge.iter().map(Compensated::value).collect(),
            sum: sum.value(),
        }
    }

    pub fn constant(ts: &TriangleSet, c: f64) -> Self {
        Self::new(ts, vec![c; ts.len()])
    }

    pub fn zero(ts: &TriangleSet) -> Self {
        Self::constant(ts, 0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value(&self, t: usize) -> f64 {
        self.values[t]
    }

    pub fn vertex_weight(&self, v: Vertex) -> f64 {
        self.vtx[v.part as usize * (self.vtx.len() / 3) + v.index as usize]
    }

    pub fn edge_weight(&self, e: EdgeId) -> f64 {
        self.edge[e]
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `φ^edge(e) − 3 φ^sum / |E|` for every edge id (zero off the graph).
    pub fn discrepancy(&self, ts: &TriangleSet) -> Vec<f64> {
        let mean = 3.0 * self.sum / ts.edge_count() as f64;
        let mut d = vec![0.0; self.edge.len()];
        for &e in ts.edges() {
            d[e] = self.edge[e] - mean;
        }
        d
    }

    pub fn max_discrepancy(&self, ts: &TriangleSet) -> f64 {
        self.discrepancy(ts).iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest `|φ^vtx(v) − 3 deg(v) φ^sum / 2|E||` over vertices.
    pub fn vertex_imbalance(&self, ts: &TriangleSet) -> f64 {
        let e2 = 2.0 * ts.edge_count() as f64;
        ts.graph()
            .vertices()
            .map(|v| (self.vertex_weight(v) - 3.0 * ts.degree(v) as f64 * self.sum / e2).abs())
            .fold(0.0, f64::max)
    }

    /// Vertex imbalance relative to the largest vertex target.
    pub fn vertex_residual(&self, ts: &TriangleSet) -> f64 {
        let e2 = 2.0 * ts.edge_count() as f64;
        let top = ts
            .graph()
            .vertices()
            .map(|v| (3.0 * ts.degree(v) as f64 * self.sum / e2).abs())
            .fold(0.0, f64::max);
        if top == 0.0 {
            return self.vertex_imbalance(ts);
        }
        self.vertex_imbalance(ts) / top
    }

    /// Vertex-balanced up to `tol · φ^sum / |E|`.
    pub fn is_vertex_balanced(&self, ts: &TriangleSet, tol: f64) -> bool {
        let scale = (self.sum / ts.edge_count() as f64).abs().max(f64::MIN_POSITIVE);
        self.vertex_imbalance(ts) <= tol * scale
    }

    /// Whether the caches agree with a from-scratch recomputation.
    pub fn caches_consistent(&self, ts: &TriangleSet, tol: f64) -> bool {
        let fresh = WeightFunction::new(ts, self.values.clone());
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()));
        close(&self.vtx, &fresh.vtx) && close(&self.edge, &fresh.edge) && (self.sum - fresh.sum).abs() <= tol * (1.0 + fresh.sum.abs())
    }

    /// `self + k · other`.
    pub fn add_scaled(&self, ts: &TriangleSet, other: &WeightFunction, k: f64) -> WeightFunction {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + k * b).collect();
        WeightFunction::new(ts, values)
    }
}
