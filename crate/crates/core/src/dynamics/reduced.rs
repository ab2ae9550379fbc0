//! Lie–Poisson flow on the dual of the central extension.
//!
//! With `H(f) = ½ G^ab f_a f_b` (base indices only) the flow is
//! `ḟ_A = C̃^c_AB (∂H/∂f_B) f_c`, which expands to
//! `ḟ_a = C^c_ab (G⁻¹f)_b f_c − e F_ab (G⁻¹f)_b` and `ḟ₀ = 0`
//! once `f₀ = −e` is substituted.

use crate::error::{Error, Result};
use crate::extension::CentralExtension;
use crate::rational;

use super::metric::Metric;

/// A point `f = (f₀, f₁, …, f_n)` of `g̃*`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoadjointState {
    pub f: Vec<f64>,
}

impl CoadjointState {
    /// Places `-e` in the central slot.
    pub fn new(charge: f64, base: &[f64]) -> Self {
        let mut f = Vec::with_capacity(base.len() + 1);
        f.push(-charge);
        f.extend_from_slice(base);
        Self { f }
    }

    pub fn charge(&self) -> f64 {
        -self.f[0]
    }
}

#[derive(Clone, Debug)]
pub struct ReducedSystem {
    m: usize,
    /// Extended constants `C̃^c_AB` at `(A * m + B) * m + c`.
    c: Vec<f64>,
    metric: Metric,
}

impl ReducedSystem {
    pub fn new(ext: &CentralExtension, metric: &Metric) -> Result<Self> {
        let n = ext.base.dim();
        if metric.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: metric.dim(),
            });
        }
        let m = n + 1;
        let c = (0..m * m * m)
            .map(|i| rational::to_f64(ext.extended.c(i / (m * m), (i / m) % m, i % m)))
            .collect();
        Ok(Self {
            m,
            c,
            metric: metric.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn hamiltonian(&self, f: &[f64]) -> f64 {
        self.metric.energy(&f[1..])
    }

    /// `∂H/∂f_A`, zero in the central slot.
    pub fn grad_h(&self, f: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0];
        g.extend(self.metric.raise(&f[1..]));
        g
    }

    /// `{f_A, K} = C̃^c_AB f_c ∂K/∂f_B` for a given gradient of `K`.
    pub fn poisson_with(&self, f: &[f64], grad: &[f64]) -> Vec<f64> {
        let m = self.m;
        (0..m)
            .map(|a| {
                let mut s = 0.0;
                for (b, gb) in grad.iter().enumerate() {
                    if *gb == 0.0 {
                        continue;
                    }
                    for (cc, fc) in f.iter().enumerate() {
                        s += self.c[(a * m + b) * m + cc] * fc * gb;
                    }
                }
                s
            })
            .collect()
    }

    pub fn rhs(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: f.len(),
            });
        }
        Ok(self.poisson_with(f, &self.grad_h(f)))
    }
}

pub fn reduced_rhs(
    ext: &CentralExtension,
    metric: &Metric,
    state: &CoadjointState,
) -> Result<Vec<f64>> {
    ReducedSystem::new(ext, metric)?.rhs(&state.f)
}
