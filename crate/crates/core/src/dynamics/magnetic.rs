//! Coordinate-level magnetic geodesic flow on a charted group.
//!
//! Phase points are `(g, p)` with the deformed bracket
//! `{φ, ψ} = ∂φ/∂p_i ∂ψ/∂g^i − ∂φ/∂g^i ∂ψ/∂p_i + e F_ij ∂φ/∂p_i ∂ψ/∂p_j`,
//! so `{p_i, p_j} = e F_ij(g)` and `ẋ = {H, x}`. The Hamiltonian is
//! `H = ½ G^ab v_a v_b` with `v_a = η_a^i p_i`.

use crate::cohomology::TwoCochain;
use crate::error::{Error, Result};

use super::chart::{cochain_f64, constants, require, GroupChart};
use super::metric::Metric;

/// A point of `T*G` in chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState {
    pub g: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhaseState {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.g.clone();
        v.extend_from_slice(&self.p);
        v
    }

    pub fn from_slice(x: &[f64]) -> Self {
        let n = x.len() / 2;
        Self {
            g: x[..n].to_vec(),
            p: x[n..].to_vec(),
        }
    }
}

/// Value and gradient of a phase-space function.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub dg: Vec<f64>,
    pub dp: Vec<f64>,
}

fn check_metric(chart: &dyn GroupChart, metric: &Metric) -> Result<()> {
    if metric.dim() != chart.dim() {
        return Err(Error::DimensionMismatch {
            expected: chart.dim(),
            found: metric.dim(),
        });
    }
    Ok(())
}

/// `F_ij = F_ab σ^a_i σ^b_j`.
pub fn coordinate_field(chart: &dyn GroupChart, f: &TwoCochain, g: &[f64]) -> Vec<Vec<f64>> {
    let n = chart.dim();
    let fm = cochain_f64(f);
    let s = chart.sigma(g);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            acc += fm[a * n + b] * s[a][i] * s[b][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn poisson(x: &Jet, y: &Jet, fij: &[Vec<f64>], e: f64) -> f64 {
    let n = x.dg.len();
    let mut s = 0.0;
    for i in 0..n {
        s += x.dp[i] * y.dg[i] - x.dg[i] * y.dp[i];
        for j in 0..n {
            s += e * fij[i][j] * x.dp[i] * y.dp[j];
        }
    }
    s
}

/// `H` with its gradient.
pub fn hamiltonian_jet(chart: &dyn GroupChart, metric: &Metric, state: &PhaseState) -> Jet {
    let n = chart.dim();
    let eta = chart.eta(&state.g);
    let deta = chart.d_eta(&state.g);
    let v: Vec<f64> = (0..n)
        .map(|a| (0..n).map(|i| eta[a][i] * state.p[i]).sum())
        .collect();
    let w = metric.raise(&v);
    let dp = (0..n)
        .map(|i| (0..n).map(|a| w[a] * eta[a][i]).sum())
        .collect();
    let dg = (0..n)
        .map(|k| {
            (0..n)
                .map(|a| w[a] * (0..n).map(|i| deta[k][a][i] * state.p[i]).sum::<f64>())
                .sum()
        })
        .collect();
    Jet {
        value: 0.5 * v.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>(),
        dg,
        dp,
    }
}

/// `(ġ, ṗ)` with `ġ^i = ∂H/∂p_i`, `ṗ_i = −∂H/∂g^i − e F_ij ġ^j`.
pub fn magnetic_flow_rhs(
    chart: &dyn GroupChart,
    metric: &Metric,
    f: &TwoCochain,
    e: f64,
    state: &PhaseState,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_metric(chart, metric)?;
    chart.check_in_chart(&state.g)?;
    let n = chart.dim();
    let h = hamiltonian_jet(chart, metric, state);
    let fij = coordinate_field(chart, f, &state.g);
    let gdot = h.dp;
    let pdot = (0..n)
        .map(|i| -h.dg[i] - e * (0..n).map(|j| fij[i][j] * gdot[j]).sum::<f64>())
        .collect();
    Ok((gdot, pdot))
}

/// Components of the chart-local potential at `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    /// `A_a = −η̃_a⁰`.
    pub algebra: Vec<f64>,
    /// `𝒜_i = A_a σ^a_i`.
    pub coordinate: Vec<f64>,
}

pub fn vector_potential(chart: &dyn GroupChart, g: &[f64]) -> Result<Potential> {
    let e0 = require(chart, chart.eta0(g), "eta0")?;
    let n = chart.dim();
    let s = chart.sigma(g);
    let algebra: Vec<f64> = e0.iter().map(|x| -x).collect();
    let coordinate = (0..n)
        .map(|i| (0..n).map(|a| algebra[a] * s[a][i]).sum())
        .collect();
    Ok(Potential {
        algebra,
        coordinate,
    })
}

/// `max |η_a(A_b) − η_b(A_a) − C^c_ab A_c − F_ab|` over the points.
pub fn potential_residual(chart: &dyn GroupChart, points: &[Vec<f64>]) -> Result<f64> {
    let n = chart.dim();
    let c = constants(chart.algebra());
    let fm = cochain_f64(chart.cocycle());
    let mut worst = 0.0f64;
    for g in points {
        let a_vec = vector_potential(chart, g)?.algebra;
        let de0 = require(chart, chart.d_eta0(g), "eta0")?;
        let eta = chart.eta(g);
        let eta_of =
            |a: usize, b: usize| -> f64 { -(0..n).map(|j| eta[a][j] * de0[j][b]).sum::<f64>() };
        for a in 0..n {
            for b in 0..n {
                let ca: f64 = (0..n).map(|k| c[(a * n + b) * n + k] * a_vec[k]).sum();
                let r = eta_of(a, b) - eta_of(b, a) - ca - fm[a * n + b];
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(worst)
}

/// The deformed left-invariant momenta `ξ^(e)_a = ξ_a^i p_i + e f_a(g)`
/// with `f_a = −ξ̃_a⁰ − (Ad_g)_a^b η̃_b⁰`.
pub struct Integrals<'a> {
    chart: &'a dyn GroupChart,
    e: f64,
}

pub fn integrals_of_motion<'a>(
    chart: &'a dyn GroupChart,
    f: &TwoCochain,
    e: f64,
) -> Result<Integrals<'a>> {
    if f != chart.cocycle() {
        return Err(Error::CocycleMismatch {
            chart: chart.name().to_string(),
        });
    }
    let probe = vec![0.0; chart.dim()];
    require(chart, chart.xi0(&probe), "xi0")?;
    require(chart, chart.eta0(&probe), "eta0")?;
    require(chart, chart.ad(&probe), "Ad")?;
    Ok(Integrals { chart, e })
}

impl Integrals<'_> {
    pub fn charge(&self) -> f64 {
        self.e
    }

    /// `f_a(g)`.
    pub fn shift(&self, g: &[f64]) -> Vec<f64> {
        let n = self.chart.dim();
        let x0 = self.chart.xi0(g).unwrap();
        let e0 = self.chart.eta0(g).unwrap();
        let ad = self.chart.ad(g).unwrap();
        (0..n)
            .map(|a| -x0[a] - (0..n).map(|b| ad[a][b] * e0[b]).sum::<f64>())
            .collect()
    }

    pub fn values(&self, state: &PhaseState) -> Vec<f64> {
        self.jets(state).into_iter().map(|j| j.value).collect()
    }

    pub fn jets(&self, state: &PhaseState) -> Vec<Jet> {
        let ch = self.chart;
        let n = ch.dim();
        let g = &state.g;
        let (xi, dxi) = (ch.xi(g), ch.d_xi(g));
        let (e0, de0) = (ch.eta0(g).unwrap(), ch.d_eta0(g).unwrap());
        let dx0 = ch.d_xi0(g).unwrap();
        let (ad, dad) = (ch.ad(g).unwrap(), ch.d_ad(g).unwrap());
        let shift = self.shift(g);
        (0..n)
            .map(|a| {
                let value = (0..n).map(|i| xi[a][i] * state.p[i]).sum::<f64>() + self.e * shift[a];
                let dg = (0..n)
                    .map(|k| {
                        let dshift = -dx0[k][a]
                            - (0..n)
                                .map(|b| dad[k][a][b] * e0[b] + ad[a][b] * de0[k][b])
                                .sum::<f64>();
                        (0..n).map(|i| dxi[k][a][i] * state.p[i]).sum::<f64>() + self.e * dshift
                    })
                    .collect();
                Jet {
                    value,
                    dg,
                    dp: xi[a].clone(),
                }
            })
            .collect()
    }
}

/// `max |{ξ^(e)_a, ξ^(e)_b} − C^c_ab ξ^(e)_c + e F_ab|` over the points.
pub fn bracket_audit(
    chart: &dyn GroupChart,
    f: &TwoCochain,
    e: f64,
    points: &[PhaseState],
) -> Result<f64> {
    let ints = integrals_of_motion(chart, f, e)?;
    let n = chart.dim();
    let c = constants(chart.algebra());
    let fm = cochain_f64(f);
    let mut worst = 0.0f64;
    for s in points {
        let jets = ints.jets(s);
        let fij = coordinate_field(chart, f, &s.g);
        for a in 0..n {
            for b in 0..n {
                let lhs = poisson(&jets[a], &jets[b], &fij, e);
                let rhs: f64 = (0..n)
                    .map(|k| c[(a * n + b) * n + k] * jets[k].value)
                    .sum::<f64>()
                    - e * fm[a * n + b];
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Ok(worst)
}

/// Jacobiator of the deformed bracket on momenta,
/// `e (∂_i F_jk + ∂_j F_ki + ∂_k F_ij)`, maximised over points and triples.
/// Brackets involving a coordinate function satisfy Jacobi identically.
pub fn jacobiator(chart: &dyn GroupChart, f: &TwoCochain, e: f64, points: &[Vec<f64>]) -> f64 {
    let n = chart.dim();
    let fm = cochain_f64(f);
    let mut worst = 0.0f64;
    for g in points {
        let s = chart.sigma(g);
        let ds = chart.d_sigma(g);
        // dfij[k][i][j] = ∂_k F_ij
        let dfij: Vec<Vec<Vec<f64>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let mut acc = 0.0;
                                for a in 0..n {
                                    for b in 0..n {
                                        acc += fm[a * n + b]
                                            * (ds[k][a][i] * s[b][j] + s[a][i] * ds[k][b][j]);
                                    }
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let r = e * (dfij[i][j][k] + dfij[j][k][i] + dfij[k][i][j]);
                    worst = worst.max(r.abs());
                }
            }
        }
    }
    worst
}

/// The canonical flow on the extended group with `p₀ = −e` frozen:
/// `H̃ = ½ G^ab M_a M_b`, `M_a = η_a^i p_i + η̃_a⁰ p₀`. The cyclic
/// coordinate `g⁰` is dropped, so states are `(g, p)` as for [`PhaseState`].
pub struct ExtendedSystem<'a> {
    chart: &'a dyn GroupChart,
    metric: Metric,
    e: f64,
}

impl<'a> ExtendedSystem<'a> {
    pub fn new(chart: &'a dyn GroupChart, metric: &Metric, e: f64) -> Result<Self> {
        check_metric(chart, metric)?;
        require(chart, chart.eta0(&vec![0.0; chart.dim()]), "eta0")?;
        Ok(Self {
            chart,
            metric: metric.clone(),
            e,
        })
    }

    fn moments(&self, s: &PhaseState) -> Vec<f64> {
        let n = self.chart.dim();
        let eta = self.chart.eta(&s.g);
        let e0 = self.chart.eta0(&s.g).unwrap();
        (0..n)
            .map(|a| (0..n).map(|i| eta[a][i] * s.p[i]).sum::<f64>() - self.e * e0[a])
            .collect()
    }

    /// Reduced coordinates `f = −M^R`, with `f₀ = p₀ = −e`.
    pub fn moment_map(&self, s: &PhaseState) -> Vec<f64> {
        let mut f = vec![-self.e];
        f.extend(self.moments(s).into_iter().map(|m| -m));
        f
    }

    pub fn hamiltonian(&self, s: &PhaseState) -> f64 {
        self.metric.energy(&self.moments(s))
    }

    pub fn rhs(&self, s: &PhaseState) -> Result<(Vec<f64>, Vec<f64>)> {
        self.chart.check_in_chart(&s.g)?;
        let n = self.chart.dim();
        let eta = self.chart.eta(&s.g);
        let deta = self.chart.d_eta(&s.g);
        let de0 = self.chart.d_eta0(&s.g).unwrap();
        let w = self.metric.raise(&self.moments(s));
        let gdot = (0..n)
            .map(|i| (0..n).map(|a| w[a] * eta[a][i]).sum())
            .collect();
        let pdot = (0..n)
            .map(|k| {
                -(0..n)
                    .map(|a| {
                        w[a] * ((0..n).map(|i| deta[k][a][i] * s.p[i]).sum::<f64>()
                            - self.e * de0[k][a])
                    })
                    .sum::<f64>()
            })
            .collect();
        Ok((gdot, pdot))
    }
}
