//! Random shortest path metrics.
//!
//! Each edge of the complete graph on `n` vertices receives an independent
//! `Exp(1)` weight; the distance between two vertices is the length of the
//! lightest path between them.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::sample_exp;

/// Default relative tolerance for the triangle inequality.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// Position of the unordered pair `{u, v}` (`u != v`) in the upper-triangular
/// layout `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(a != b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

#[inline]
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Edge weights of the complete graph, stored upper-triangular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEdgeWeights")]
pub struct EdgeWeights {
    n: usize,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawEdgeWeights {
    n: usize,
    weights: Vec<f64>,
}

impl TryFrom<RawEdgeWeights> for EdgeWeights {
    type Error = Error;

    fn try_from(raw: RawEdgeWeights) -> Result<Self> {
        EdgeWeights::new(raw.n, raw.weights)
    }
}

impl EdgeWeights {
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("need n >= 2 vertices, got {n}")));
        }
        if weights.len() != pair_count(n) {
            return Err(Error::invalid(format!(
                "weights: expected {} entries for n={n}, got {}",
                pair_count(n),
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::invalid(format!(
                "weights[{i}] = {} is not a positive finite number",
                weights[i]
            )));
        }
        Ok(EdgeWeights { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[pair_index(self.n, u, v)]
    }
}

/// Draws `n(n-1)/2` i.i.d. `Exp(1)` weights in pair-index order.
pub fn sample_edge_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<EdgeWeights> {
    if n < 2 {
        return Err(Error::invalid(format!("need n >= 2 vertices, got {n}")));
    }
    let weights = (0..pair_count(n)).map(|_| sample_exp(1.0, rng)).collect();
    Ok(EdgeWeights { n, weights })
}

/// A finite metric given by its full distance matrix (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    n: usize,
    d: Vec<f64>,
}

impl Metric {
    /// Wraps a distance matrix after checking shape, finiteness, and the
    /// metric axioms (triangle inequality within [`TRIANGLE_TOL`]).
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::invalid(format!("distances: need n >= 2 rows, got {n}")));
        }
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "distances[{i}]: expected {n} columns, got {}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if !(x.is_finite() && x >= 0.0) {
                    return Err(Error::invalid(format!(
                        "distances[{i}][{j}] = {x} is not a nonnegative finite number"
                    )));
                }
            }
            d.extend_from_slice(row);
        }
        let m = Metric { n, d };
        if let Some(v) = validate_metric(&m, TRIANGLE_TOL).first() {
            return Err(Error::invalid(format!("distances: {v}")));
        }
        Ok(m)
    }

    /// Wraps a matrix without validation. Intended for tests and for
    /// constructing deliberately broken inputs.
    pub fn from_matrix_unchecked(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        Metric { n, d: rows.into_iter().flatten().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[f64] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// Array-scan Dijkstra, `O(n^2)` per source; on a complete graph this beats
/// a binary heap. `w` is the dense weight matrix.
fn dijkstra(w: &[f64], n: usize, source: usize, dist: &mut [f64], settled: &mut [bool]) {
    dist.fill(f64::INFINITY);
    settled.fill(false);
    dist[source] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        let mut best = f64::INFINITY;
        for v in 0..n {
            if !settled[v] && dist[v] < best {
                best = dist[v];
                u = v;
            }
        }
        if u == usize::MAX {
            break;
        }
        settled[u] = true;
        let row = &w[u * n..(u + 1) * n];
        for v in 0..n {
            let cand = best + row[v];
            if !settled[v] && cand < dist[v] {
                dist[v] = cand;
            }
        }
    }
}

/// All-pairs shortest-path distances, one Dijkstra search per source.
///
/// The entry `d(u, v)` with `u < v` is taken from the search rooted at `u` and
/// mirrored, so the matrix is exactly symmetric.
pub fn build_metric(weights: &EdgeWeights) -> Metric {
    let n = weights.n;
    let mut w = vec![0.0; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let x = weights.weight(u, v);
            w[u * n + v] = x;
            w[v * n + u] = x;
        }
    }
    let mut d = vec![0.0; n * n];
    let mut dist = vec![0.0; n];
    let mut settled = vec![false; n];
    for u in 0..n {
        dijkstra(&w, n, u, &mut dist, &mut settled);
        for v in u + 1..n {
            d[u * n + v] = dist[v];
            d[v * n + u] = dist[v];
        }
    }
    Metric { n, d }
}

/// A failed metric axiom. Vertex indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Diagonal { v: usize, value: f64 },
    Asymmetry { u: usize, v: usize, forward: f64, backward: f64 },
    Triangle { u: usize, via: usize, v: usize, direct: f64, detour: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Diagonal { v, value } => write!(f, "d[{v}][{v}] = {value}, expected 0"),
            Violation::Asymmetry { u, v, forward, backward } => {
                write!(f, "d[{u}][{v}] = {forward} but d[{v}][{u}] = {backward} (not symmetric)")
            }
            Violation::Triangle { u, via, v, direct, detour } => write!(
                f,
                "d[{u}][{v}] = {direct} exceeds d[{u}][{via}] + d[{via}][{v}] = {detour}"
            ),
        }
    }
}

/// Checks zero diagonal, exact symmetry, and the triangle inequality
/// `d(u,v) <= d(u,s) + d(s,v)` up to relative tolerance `tol`.
pub fn validate_metric(m: &Metric, tol: f64) -> Vec<Violation> {
    let n = m.n;
    let mut out = Vec::new();
    for v in 0..n {
        let value = m.dist(v, v);
        if value != 0.0 {
            out.push(Violation::Diagonal { v, value });
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let (forward, backward) = (m.dist(u, v), m.dist(v, u));
            if forward != backward {
                out.push(Violation::Asymmetry { u, v, forward, backward });
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let direct = m.dist(u, v);
            for s in 0..n {
                if s == u || s == v {
                    continue;
                }
                let detour = m.dist(u, s) + m.dist(s, v);
                if direct - detour > tol * detour {
                    out.push(Violation::Triangle { u, via: s, v, direct, detour });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deserialization_validates() {
        let ok: EdgeWeights = serde_json::from_str(r#"{"n": 2, "weights": [0.5]}"#).unwrap();
        assert_eq!(ok.weight(0, 1), 0.5);
        assert!(serde_json::from_str::<EdgeWeights>(r#"{"n": 3, "weights": [0.5]}"#).is_err());
        assert!(serde_json::from_str::<EdgeWeights>(r#"{"n": 2, "weights": [-1.0]}"#).is_err());
    }
    use crate::rng::stream_from_seed;

    fn three(w12: f64, w13: f64, w23: f64) -> EdgeWeights {
        EdgeWeights::new(3, vec![w12, w13, w23]).unwrap()
    }

    #[test]
    fn pair_index_layout() {
        let n = 5;
        let mut expect = 0;
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(pair_index(n, u, v), expect);
                assert_eq!(pair_index(n, v, u), expect);
                expect += 1;
            }
        }
        assert_eq!(expect, pair_count(n));
    }

    #[test]
    fn sample_counts() {
        let mut rng = stream_from_seed(1);
        let w = sample_edge_weights(2, &mut rng).unwrap();
        assert_eq!(w.as_slice().len(), 1);
        assert!(w.as_slice()[0] > 0.0);
        let w = sample_edge_weights(5, &mut rng).unwrap();
        assert_eq!(w.as_slice().len(), 10);
        assert!(w.as_slice().iter().all(|&x| x > 0.0));
        assert!(sample_edge_weights(1, &mut rng).is_err());
    }

    #[test]
    fn edge_weights_validation() {
        assert!(EdgeWeights::new(3, vec![1.0, 2.0]).is_err());
        assert!(EdgeWeights::new(3, vec![1.0, 0.0, 2.0]).is_err());
        assert!(EdgeWeights::new(3, vec![1.0, f64::NAN, 2.0]).is_err());
    }

    #[test]
    fn detour_beats_direct_edge() {
        let m = build_metric(&three(1.0, 5.0, 1.0));
        assert_eq!(m.dist(0, 2), 2.0);
        assert_eq!(m.dist(2, 0), 2.0);
    }

    #[test]
    fn direct_edge_kept() {
        let m = build_metric(&three(1.0, 1.5, 1.0));
        assert_eq!(m.dist(0, 2), 1.5);
    }

    #[test]
    fn two_point_metric_is_valid() {
        let m = Metric::from_matrix_unchecked(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(validate_metric(&m, TRIANGLE_TOL).is_empty());
    }

    #[test]
    fn constructed_triangle_violation() {
        let m = Metric::from_matrix_unchecked(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ]);
        let v = validate_metric(&m, TRIANGLE_TOL);
        assert_eq!(v.len(), 2, "{v:?}");
        assert!(v.contains(&Violation::Triangle { u: 0, via: 1, v: 2, direct: 3.0, detour: 2.0 }));
        assert!(Metric::from_matrix(m.to_rows()).is_err());
    }

    #[test]
    fn asymmetry_and_diagonal_reported() {
        let m = Metric::from_matrix_unchecked(vec![vec![0.5, 1.0], vec![1.1, 0.0]]);
        let v = validate_metric(&m, TRIANGLE_TOL);
        assert!(matches!(v[0], Violation::Diagonal { v: 0, .. }));
        assert!(matches!(v[1], Violation::Asymmetry { u: 0, v: 1, .. }));
    }

    #[test]
    fn deterministic_given_seed() {
        let a = sample_edge_weights(9, &mut stream_from_seed(77)).unwrap();
        let b = sample_edge_weights(9, &mut stream_from_seed(77)).unwrap();
        assert_eq!(a, b);
        assert_eq!(build_metric(&a), build_metric(&b));
    }
}
