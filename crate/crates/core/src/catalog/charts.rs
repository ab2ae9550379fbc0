//! Charted groups with closed-form invariant fields.

use crate::cohomology::TwoCochain;
use crate::dynamics::chart::{Field, FieldDeriv, GroupChart};
use crate::error::Result;
use crate::extension::CasimirCandidate;
use crate::lie::{validate_algebra, LieAlgebra, StructureTable};
use crate::rational::{self, int, Rational};

fn zeros3(n: usize) -> FieldDeriv {
    vec![vec![vec![0.0; n]; n]; n]
}

/// The solvable group of `[e1,e4] = e4`, `[e2,e4] = e4` in coordinates
/// `g = exp(g1 e1) exp(g2 e2) exp(g3 e3) exp(g4 e4)`, carrying the cocycle
/// `α e¹∧e² + β e¹∧e³ + γ e²∧e³`.
#[derive(Clone, Debug)]
pub struct G7Chart {
    alg: LieAlgebra,
    f: TwoCochain,
    al: f64,
    be: f64,
    ga: f64,
}

impl G7Chart {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational) -> Result<Self> {
        let alg = g7_algebra();
        let f = TwoCochain::from_labeled(
            4,
            &[
                (1, 2, alpha.clone()),
                (1, 3, beta.clone()),
                (2, 3, gamma.clone()),
            ],
        )?;
        Ok(Self {
            alg,
            f,
            al: rational::to_f64(&alpha),
            be: rational::to_f64(&beta),
            ga: rational::to_f64(&gamma),
        })
    }

    pub fn from_ints(alpha: i64, beta: i64, gamma: i64) -> Self {
        Self::new(int(alpha), int(beta), int(gamma)).expect("g7 cocycle entries are in range")
    }

    /// Printed potential `α g¹ dg² + (β g¹ + γ g²) dg³`.
    pub fn printed_potential(&self, g: &[f64]) -> Vec<f64> {
        vec![0.0, self.al * g[0], self.be * g[0] + self.ga * g[1], 0.0]
    }

    /// Printed integrals `ξ^(e)_a`.
    pub fn printed_integrals(&self, e: f64, g: &[f64], p: &[f64]) -> Vec<f64> {
        let (al, be, ga) = (self.al, self.be, self.ga);
        vec![
            p[0] - g[3] * p[3] + e * (al * g[1] + be * g[2]),
            p[1] - g[3] * p[3] - e * (al * g[0] - ga * g[2]),
            p[2] - e * (be * g[0] + ga * g[1]),
            p[3],
        ]
    }
}

pub fn g7_algebra() -> LieAlgebra {
    validate_algebra(
        &StructureTable::new("g7", 4)
            .bracket(0, 3, &[(3, int(1))])
            .bracket(1, 3, &[(3, int(1))]),
    )
    .expect("g7 satisfies Jacobi")
}

impl GroupChart for G7Chart {
    fn name(&self) -> &str {
        "g7-chart"
    }
    fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }
    fn cocycle(&self) -> &TwoCochain {
        &self.f
    }
    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(-30.0, 30.0); 4]
    }

    fn eta(&self, g: &[f64]) -> Field {
        let ei = (-(g[0] + g[1])).exp();
        vec![
            vec![-1.0, 0.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0, 0.0],
            vec![0.0, 0.0, -1.0, 0.0],
            vec![0.0, 0.0, 0.0, -ei],
        ]
    }
    fn xi(&self, g: &[f64]) -> Field {
        vec![
            vec![1.0, 0.0, 0.0, -g[3]],
            vec![0.0, 1.0, 0.0, -g[3]],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ]
    }
    fn sigma(&self, g: &[f64]) -> Field {
        let e = (g[0] + g[1]).exp();
        vec![
            vec![-1.0, 0.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0, 0.0],
            vec![0.0, 0.0, -1.0, 0.0],
            vec![0.0, 0.0, 0.0, -e],
        ]
    }
    fn eta0(&self, g: &[f64]) -> Option<Vec<f64>> {
        Some(vec![
            0.0,
            self.al * g[0],
            self.be * g[0] + self.ga * g[1],
            0.0,
        ])
    }
    fn xi0(&self, g: &[f64]) -> Option<Vec<f64>> {
        Some(vec![
            -(self.al * g[1] + self.be * g[2]),
            -self.ga * g[2],
            0.0,
            0.0,
        ])
    }
    fn ad(&self, g: &[f64]) -> Option<Field> {
        let e = (g[0] + g[1]).exp();
        Some(vec![
            vec![1.0, 0.0, 0.0, -g[3] * e],
            vec![0.0, 1.0, 0.0, -g[3] * e],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, e],
        ])
    }

    fn d_eta(&self, g: &[f64]) -> FieldDeriv {
        let ei = (-(g[0] + g[1])).exp();
        let mut d = zeros3(4);
        d[0][3][3] = ei;
        d[1][3][3] = ei;
        d
    }
    fn d_xi(&self, _g: &[f64]) -> FieldDeriv {
        let mut d = zeros3(4);
        d[3][0][3] = -1.0;
        d[3][1][3] = -1.0;
        d
    }
    fn d_sigma(&self, g: &[f64]) -> FieldDeriv {
        let e = (g[0] + g[1]).exp();
        let mut d = zeros3(4);
        d[0][3][3] = -e;
        d[1][3][3] = -e;
        d
    }
    fn d_eta0(&self, _g: &[f64]) -> Option<Field> {
        let mut d = vec![vec![0.0; 4]; 4];
        d[0][1] = self.al;
        d[0][2] = self.be;
        d[1][2] = self.ga;
        Some(d)
    }
    fn d_xi0(&self, _g: &[f64]) -> Option<Field> {
        let mut d = vec![vec![0.0; 4]; 4];
        d[1][0] = -self.al;
        d[2][0] = -self.be;
        d[2][1] = -self.ga;
        Some(d)
    }
    fn d_ad(&self, g: &[f64]) -> Option<FieldDeriv> {
        let e = (g[0] + g[1]).exp();
        let mut d = zeros3(4);
        for k in 0..2 {
            d[k][0][3] = -g[3] * e;
            d[k][1][3] = -g[3] * e;
            d[k][3][3] = e;
        }
        d[3][0][3] = -e;
        d[3][1][3] = -e;
        Some(d)
    }
}

/// The flat torus `T² = S¹ × S¹` with angles `(φ, ψ)` and the cocycle
/// `c e¹∧e²`. Coordinates live on the universal cover; the potential
/// `c φ dψ` is only defined on a cut of the torus.
#[derive(Clone, Debug)]
pub struct TorusChart {
    alg: LieAlgebra,
    f: TwoCochain,
    c: f64,
}

impl TorusChart {
    pub fn new(c: Rational) -> Self {
        let f = TwoCochain::from_labeled(2, &[(1, 2, c.clone())]).expect("in range");
        Self {
            alg: LieAlgebra::abelian(2),
            f,
            c: rational::to_f64(&c),
        }
    }

    pub fn unit() -> Self {
        Self::new(int(1))
    }
}

impl GroupChart for TorusChart {
    fn name(&self) -> &str {
        "torus"
    }
    fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }
    fn cocycle(&self) -> &TwoCochain {
        &self.f
    }
    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(-1e6, 1e6); 2]
    }
    fn eta(&self, _g: &[f64]) -> Field {
        vec![vec![-1.0, 0.0], vec![0.0, -1.0]]
    }
    fn xi(&self, _g: &[f64]) -> Field {
        vec![vec![1.0, 0.0], vec![0.0, 1.0]]
    }
    fn sigma(&self, _g: &[f64]) -> Field {
        vec![vec![-1.0, 0.0], vec![0.0, -1.0]]
    }
    fn eta0(&self, g: &[f64]) -> Option<Vec<f64>> {
        Some(vec![0.0, self.c * g[0]])
    }
    fn xi0(&self, g: &[f64]) -> Option<Vec<f64>> {
        Some(vec![-self.c * g[1], 0.0])
    }
    fn ad(&self, _g: &[f64]) -> Option<Field> {
        Some(vec![vec![1.0, 0.0], vec![0.0, 1.0]])
    }
    fn potential_note(&self) -> Option<String> {
        Some(format!(
            "A = {} φ dψ is not invariant under φ → φ + 2π; it is valid on the cut torus only and no global potential exists",
            self.c
        ))
    }
    fn d_eta(&self, _g: &[f64]) -> FieldDeriv {
        zeros3(2)
    }
    fn d_xi(&self, _g: &[f64]) -> FieldDeriv {
        zeros3(2)
    }
    fn d_sigma(&self, _g: &[f64]) -> FieldDeriv {
        zeros3(2)
    }
    fn d_eta0(&self, _g: &[f64]) -> Option<Field> {
        Some(vec![vec![0.0, self.c], vec![0.0, 0.0]])
    }
    fn d_xi0(&self, _g: &[f64]) -> Option<Field> {
        Some(vec![vec![0.0, 0.0], vec![-self.c, 0.0]])
    }
    fn d_ad(&self, _g: &[f64]) -> Option<FieldDeriv> {
        Some(zeros3(2))
    }
}

/// Casimirs of `g̃*` for `g7` with `β = γ`, in `f = (f0, …, f4)`:
/// `K0 = f0`, `K1 = β(f1 − f2) + α f3`, `K2 = f4^β exp(−f3/f0)`, and the
/// printed `K2 = f4^β e^(−f3)`, which agrees with the general form on the
/// leaf `f0 = 1` only.
pub fn g7_casimirs(alpha: f64, beta: f64) -> Vec<CasimirCandidate> {
    let positive_f4 = |f: &[f64]| (f[4] <= 0.0).then(|| format!("f4 = {} is not positive", f[4]));
    let k2 = move |f: &[f64]| f[4].powf(beta) * (-f[3] / f[0]).exp();
    let k2p = move |f: &[f64]| f[4].powf(beta) * (-f[3]).exp();
    vec![
        CasimirCandidate::new("K0", |f| f[0], |_| vec![1.0, 0.0, 0.0, 0.0, 0.0]),
        CasimirCandidate::new(
            "K1",
            move |f| beta * (f[1] - f[2]) + alpha * f[3],
            move |_| vec![0.0, beta, -beta, alpha, 0.0],
        ),
        CasimirCandidate::new("K2", k2, move |f| {
            let k = k2(f);
            vec![
                k * f[3] / (f[0] * f[0]),
                0.0,
                0.0,
                -k / f[0],
                beta * k / f[4],
            ]
        })
        .with_domain("requires f4 > 0 and f0 ≠ 0", move |f| {
            positive_f4(f).or_else(|| (f[0] == 0.0).then(|| "f0 = 0".to_string()))
        }),
        CasimirCandidate::new("K2-printed", k2p, move |f| {
            let k = k2p(f);
            vec![0.0, 0.0, 0.0, -k, beta * k / f[4]]
        })
        .with_domain("requires f4 > 0; Casimir on the leaf f0 = 1", positive_f4),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::chart::audit_chart;

    fn points() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.3, -0.7, 1.1, 0.4],
            vec![-1.2, 0.5, -0.3, -2.0],
        ]
    }

    #[test]
    fn g7_chart_audits() {
        let a = audit_chart(&G7Chart::from_ints(2, -1, 3), &points());
        assert!(a.max() < 1e-12, "{a:?}");
        assert!(
            a.eta_central.is_some() && a.xi_central.is_some() && a.left_right_central.is_some()
        );
    }

    #[test]
    fn torus_chart_audits() {
        let a = audit_chart(&TorusChart::new(int(3)), &[vec![0.2, -0.4], vec![1.0, 2.0]]);
        assert!(a.max() < 1e-12, "{a:?}");
    }

    #[test]
    fn analytic_derivatives_match_fallback() {
        use crate::dynamics::chart::jacobian_fd;
        let ch = G7Chart::from_ints(1, 2, 3);
        let g = [0.3, -0.2, 0.5, 0.7];
        let fd = jacobian_fd(|x| ch.ad(x).unwrap().into_iter().flatten().collect(), &g);
        let an = ch.d_ad(&g).unwrap();
        for k in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    assert!((fd[k][a * 4 + b] - an[k][a][b]).abs() < 1e-8);
                }
            }
        }
    }
}
