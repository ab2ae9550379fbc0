//! Constant left-hand metric `G_ab` on the algebra and its exact inverse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    g: RatMatrix,
    ginv: RatMatrix,
    ginv_f64: Vec<f64>,
}

impl Metric {
    /// Accepts any symmetric nondegenerate matrix; no positivity is required.
    pub fn new(g: RatMatrix) -> Result<Self> {
        if g.nrows() != g.ncols() {
            return Err(Error::DimensionMismatch {
                expected: g.nrows(),
                found: g.ncols(),
            });
        }
        if !g.is_symmetric() {
            return Err(Error::InvalidArgument("metric must be symmetric".into()));
        }
        let ginv = g.inverse().ok_or(Error::DegenerateMetric)?;
        let n = g.nrows();
        let ginv_f64 = (0..n * n)
            .map(|k| rational::to_f64(&ginv[(k / n, k % n)]))
            .collect();
        Ok(Self { g, ginv, ginv_f64 })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(RatMatrix::identity(n)).expect("identity is nondegenerate")
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &RatMatrix {
        &self.g
    }

    pub fn ginv(&self) -> &RatMatrix {
        &self.ginv
    }

    /// `G^ab` as a float.
    pub fn inv(&self, a: usize, b: usize) -> f64 {
        self.ginv_f64[a * self.dim() + b]
    }

    /// `(G⁻¹ v)_a`.
    pub fn raise(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|a| (0..n).map(|b| self.ginv_f64[a * n + b] * v[b]).sum())
            .collect()
    }

    /// `½ G^ab v_a v_b`.
    pub fn energy(&self, v: &[f64]) -> f64 {
        0.5 * v.iter().zip(self.raise(v)).map(|(x, y)| x * y).sum::<f64>()
    }

    pub fn to_json(&self) -> MetricJson {
        let n = self.dim();
        MetricJson {
            dim: n,
            rows: (0..n)
                .map(|i| (0..n).map(|j| rational::format(&self.g[(i, j)])).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &MetricJson) -> Result<Self> {
        if json.rows.len() != json.dim || json.rows.iter().any(|r| r.len() != json.dim) {
            return Err(Error::Parse(format!("metric must be {0} x {0}", json.dim)));
        }
        let rows = json
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| rational::parse(s))
                    .collect::<Result<Vec<Rational>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(RatMatrix::from_rows(&rows))
    }
}

/// `{ "dim": n, "rows": [["p/q", ...], ...] }`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MetricJson {
    pub dim: usize,
    pub rows: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn inverse_is_exact() {
        let g = RatMatrix::from_rows(&[vec![int(2), int(1)], vec![int(1), int(-1)]]);
        let m = Metric::new(g.clone()).unwrap();
        assert_eq!(g.mul(m.ginv()), RatMatrix::identity(2));
        assert_eq!(Metric::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn rejects_bad_metrics() {
        let asym = RatMatrix::from_rows(&[vec![int(1), int(2)], vec![int(0), int(1)]]);
        assert!(Metric::new(asym).is_err());
        let sing = RatMatrix::from_rows(&[vec![int(1), int(1)], vec![int(1), int(1)]]);
        assert_eq!(Metric::new(sing), Err(Error::DegenerateMetric));
    }
}
