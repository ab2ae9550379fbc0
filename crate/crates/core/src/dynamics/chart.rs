//! Coordinate charts on groups and their central extensions.
//!
//! A chart supplies, at each point `g`, the right-invariant fields
//! `η_a = η_a^i ∂_i`, the left-invariant fields `ξ_a`, the right-invariant
//! coframe `σ^a = σ^a_i dg^i` and, for a chosen cocycle `F`, the central
//! components `η̃_a⁰`, `ξ̃_a⁰` of the lifted fields on the extension and the
//! matrix `(Ad_g)_a^b`. Conventions pinned by the audits in this module:
//!
//! * `[η_a, η_b] = C^c_ab η_c` and `[ξ_a, ξ_b] = C^c_ab ξ_c`;
//! * `η̃₀ = −∂₀`, `ξ̃₀ = +∂₀`, so the central parts obey
//!   `η_a(η̃_b⁰) − η_b(η̃_a⁰) = C^c_ab η̃_c⁰ − F_ab` and
//!   `ξ_a(ξ̃_b⁰) − ξ_b(ξ̃_a⁰) = C^c_ab ξ̃_c⁰ + F_ab`;
//! * `ξ_a^i = −(Ad_g)_a^b η_b^i`.
//!
//! Derivatives default to central differences with one Richardson level;
//! charts with closed forms override them.

use crate::cohomology::TwoCochain;
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::rational;

/// `m[a][i]` layout for field components and `d[k][a][i] = ∂_k m[a][i]`.
pub type Field = Vec<Vec<f64>>;
pub type FieldDeriv = Vec<Vec<Vec<f64>>>;

/// Step for the finite-difference fallback at coordinate value `x`.
pub fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// `out[k][j] = ∂_k f_j(g)` by central differences plus one Richardson level.
pub fn jacobian_fd(f: impl Fn(&[f64]) -> Vec<f64>, g: &[f64]) -> Vec<Vec<f64>> {
    (0..g.len())
        .map(|k| {
            let h = fd_step(g[k]);
            let central = |h: f64| {
                let mut p = g.to_vec();
                let mut m = g.to_vec();
                p[k] += h;
                m[k] -= h;
                let (fp, fm) = (f(&p), f(&m));
                fp.iter()
                    .zip(&fm)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect::<Vec<f64>>()
            };
            let d1 = central(h);
            let d2 = central(h / 2.0);
            d1.iter()
                .zip(&d2)
                .map(|(a, b)| (4.0 * b - a) / 3.0)
                .collect()
        })
        .collect()
}

fn unflatten_field(j: Vec<Vec<f64>>, rows: usize, cols: usize) -> FieldDeriv {
    j.into_iter()
        .map(|flat| {
            (0..rows)
                .map(|a| flat[a * cols..(a + 1) * cols].to_vec())
                .collect()
        })
        .collect()
}

fn flatten(m: Field) -> Vec<f64> {
    m.into_iter().flatten().collect()
}

pub trait GroupChart: Send + Sync {
    fn name(&self) -> &str;
    fn algebra(&self) -> &LieAlgebra;
    /// The cocycle the central data refers to.
    fn cocycle(&self) -> &TwoCochain;
    /// Per-coordinate validity range.
    fn bounds(&self) -> Vec<(f64, f64)>;

    fn eta(&self, g: &[f64]) -> Field;
    fn xi(&self, g: &[f64]) -> Field;
    /// `sigma[a][i] = σ^a_i`.
    fn sigma(&self, g: &[f64]) -> Field;
    fn eta0(&self, _g: &[f64]) -> Option<Vec<f64>> {
        None
    }
    fn xi0(&self, _g: &[f64]) -> Option<Vec<f64>> {
        None
    }
    /// `ad[a][b] = (Ad_g)_a^b`.
    fn ad(&self, _g: &[f64]) -> Option<Field> {
        None
    }
    /// Why the chart-local potential fails to extend globally, if it does.
    fn potential_note(&self) -> Option<String> {
        None
    }

    fn dim(&self) -> usize {
        self.algebra().dim()
    }

    fn d_eta(&self, g: &[f64]) -> FieldDeriv {
        let n = self.dim();
        unflatten_field(jacobian_fd(|x| flatten(self.eta(x)), g), n, n)
    }
    fn d_xi(&self, g: &[f64]) -> FieldDeriv {
        let n = self.dim();
        unflatten_field(jacobian_fd(|x| flatten(self.xi(x)), g), n, n)
    }
    fn d_sigma(&self, g: &[f64]) -> FieldDeriv {
        let n = self.dim();
        unflatten_field(jacobian_fd(|x| flatten(self.sigma(x)), g), n, n)
    }
    /// `out[k][a] = ∂_k η̃_a⁰`.
    fn d_eta0(&self, g: &[f64]) -> Option<Field> {
        self.eta0(g)?;
        Some(jacobian_fd(|x| self.eta0(x).unwrap(), g))
    }
    fn d_xi0(&self, g: &[f64]) -> Option<Field> {
        self.xi0(g)?;
        Some(jacobian_fd(|x| self.xi0(x).unwrap(), g))
    }
    fn d_ad(&self, g: &[f64]) -> Option<FieldDeriv> {
        self.ad(g)?;
        let n = self.dim();
        Some(unflatten_field(
            jacobian_fd(|x| flatten(self.ad(x).unwrap()), g),
            n,
            n,
        ))
    }

    fn check_in_chart(&self, g: &[f64]) -> Result<()> {
        for (i, ((lo, hi), x)) in self.bounds().iter().zip(g).enumerate() {
            if !(x.is_finite() && *lo <= *x && *x <= *hi) {
                return Err(Error::OutOfChart {
                    chart: self.name().to_string(),
                    index: i,
                    value: *x,
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn require<T>(chart: &dyn GroupChart, v: Option<T>, what: &'static str) -> Result<T> {
    v.ok_or_else(|| Error::MissingChartData {
        chart: chart.name().to_string(),
        what,
    })
}

pub(crate) fn constants(alg: &LieAlgebra) -> Vec<f64> {
    let n = alg.dim();
    (0..n * n * n)
        .map(|i| rational::to_f64(alg.c(i / (n * n), (i / n) % n, i % n)))
        .collect()
}

pub(crate) fn cochain_f64(f: &TwoCochain) -> Vec<f64> {
    let n = f.dim();
    (0..n * n)
        .map(|i| rational::to_f64(f.get(i / n, i % n)))
        .collect()
}

/// Maximum residuals of the structural identities at the sampled points.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct ChartAudit {
    pub coframe_duality: f64,
    pub eta_commutation: f64,
    pub xi_commutation: f64,
    pub left_right_commute: f64,
    pub adjoint: f64,
    pub eta_central: Option<f64>,
    pub xi_central: Option<f64>,
    pub left_right_central: Option<f64>,
}

impl ChartAudit {
    pub fn max(&self) -> f64 {
        [
            Some(self.coframe_duality),
            Some(self.eta_commutation),
            Some(self.xi_commutation),
            Some(self.left_right_commute),
            Some(self.adjoint),
            self.eta_central,
            self.xi_central,
            self.left_right_central,
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

/// `[X, Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i`.
fn lie_bracket(x: &[f64], dx: &[Vec<f64>], y: &[f64], dy: &[Vec<f64>]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| (0..n).map(|j| x[j] * dy[j][i] - y[j] * dx[j][i]).sum())
        .collect()
}

/// Derivative `X(φ) = X^j ∂_j φ` with `dphi[j] = ∂_j φ`.
fn apply(x: &[f64], dphi: impl Fn(usize) -> f64) -> f64 {
    x.iter().enumerate().map(|(j, xj)| xj * dphi(j)).sum()
}

fn slice_field(d: &FieldDeriv, a: usize) -> Vec<Vec<f64>> {
    d.iter().map(|dk| dk[a].clone()).collect()
}

pub fn audit_chart(chart: &dyn GroupChart, points: &[Vec<f64>]) -> ChartAudit {
    let n = chart.dim();
    let c = constants(chart.algebra());
    let fm = cochain_f64(chart.cocycle());
    let mut out = ChartAudit::default();
    let upd = |slot: &mut f64, v: f64| *slot = slot.max(v.abs());
    let upd_opt = |slot: &mut Option<f64>, v: f64| *slot = Some(slot.unwrap_or(0.0).max(v.abs()));
    for g in points {
        let (eta, xi, sigma) = (chart.eta(g), chart.xi(g), chart.sigma(g));
        let (deta, dxi) = (chart.d_eta(g), chart.d_xi(g));
        for a in 0..n {
            for b in 0..n {
                let dual: f64 = (0..n).map(|i| sigma[a][i] * eta[b][i]).sum();
                upd(
                    &mut out.coframe_duality,
                    dual - if a == b { 1.0 } else { 0.0 },
                );
            }
        }
        let dfield = |d: &FieldDeriv, a: usize| -> Vec<Vec<f64>> { slice_field(d, a) };
        for a in 0..n {
            for b in 0..n {
                let be = lie_bracket(&eta[a], &dfield(&deta, a), &eta[b], &dfield(&deta, b));
                let bx = lie_bracket(&xi[a], &dfield(&dxi, a), &xi[b], &dfield(&dxi, b));
                let lr = lie_bracket(&eta[a], &dfield(&deta, a), &xi[b], &dfield(&dxi, b));
                for i in 0..n {
                    let ce: f64 = (0..n).map(|k| c[(a * n + b) * n + k] * eta[k][i]).sum();
                    let cx: f64 = (0..n).map(|k| c[(a * n + b) * n + k] * xi[k][i]).sum();
                    upd(&mut out.eta_commutation, be[i] - ce);
                    upd(&mut out.xi_commutation, bx[i] - cx);
                    upd(&mut out.left_right_commute, lr[i]);
                }
            }
        }
        if let Some(ad) = chart.ad(g) {
            for a in 0..n {
                for i in 0..n {
                    let r: f64 = (0..n).map(|b| ad[a][b] * eta[b][i]).sum();
                    upd(&mut out.adjoint, xi[a][i] + r);
                }
            }
        }
        if let (Some(e0), Some(de0)) = (chart.eta0(g), chart.d_eta0(g)) {
            for a in 0..n {
                for b in 0..n {
                    let lhs = apply(&eta[a], |j| de0[j][b]) - apply(&eta[b], |j| de0[j][a]);
                    let rhs: f64 =
                        (0..n).map(|k| c[(a * n + b) * n + k] * e0[k]).sum::<f64>() - fm[a * n + b];
                    upd_opt(&mut out.eta_central, lhs - rhs);
                }
            }
            if let (Some(_), Some(dx0)) = (chart.xi0(g), chart.d_xi0(g)) {
                for a in 0..n {
                    for b in 0..n {
                        let lhs = apply(&eta[a], |j| dx0[j][b]) - apply(&xi[b], |j| de0[j][a]);
                        upd_opt(&mut out.left_right_central, lhs);
                    }
                }
            }
        }
        if let (Some(x0), Some(dx0)) = (chart.xi0(g), chart.d_xi0(g)) {
            for a in 0..n {
                for b in 0..n {
                    let lhs = apply(&xi[a], |j| dx0[j][b]) - apply(&xi[b], |j| dx0[j][a]);
                    let rhs: f64 =
                        (0..n).map(|k| c[(a * n + b) * n + k] * x0[k]).sum::<f64>() + fm[a * n + b];
                    upd_opt(&mut out.xi_central, lhs - rhs);
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
    fn fd_jacobian_of_polynomial() {
        let j = jacobian_fd(|x| vec![x[0] * x[0] * x[1], x[1].exp()], &[1.5, -0.5]);
        assert!((j[0][0] - 2.0 * 1.5 * -0.5).abs() < 1e-8);
        assert!((j[1][0] - 1.5 * 1.5).abs() < 1e-8);
        assert!((j[1][1] - (-0.5f64).exp()).abs() < 1e-8);
        assert_eq!(j[0][1], 0.0);
    }
}
