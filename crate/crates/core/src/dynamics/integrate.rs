//! Explicit Runge–Kutta integration with conservation audits.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Classical fourth-order scheme with uniform steps.
    Rk4,
    /// Dormand–Prince 5(4) with step control; `dt` is the initial step.
    Rk45 { rtol: f64, atol: f64 },
}

impl Method {
    pub fn rk45() -> Self {
        Method::Rk45 {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

/// A named scalar whose relative drift `|Q − Q₀| / max(1, |Q₀|)` is tracked.
pub struct Audit<'a> {
    pub name: String,
    pub f: Box<dyn Fn(&[f64]) -> f64 + 'a>,
}

impl<'a> Audit<'a> {
    pub fn new(name: impl Into<String>, f: impl Fn(&[f64]) -> f64 + 'a) -> Self {
        Self {
            name: name.into(),
            f: Box::new(f),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub audits: BTreeMap<String, Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states
            .last()
            .expect("trajectory has at least the initial state")
    }

    pub fn max_drift(&self, name: &str) -> Option<f64> {
        self.audits
            .get(name)
            .map(|v| v.iter().copied().fold(0.0, f64::max))
    }

    fn record(&mut self, t: f64, x: &[f64], audits: &[Audit], base: &[f64]) {
        self.times.push(t);
        self.states.push(x.to_vec());
        for (a, q0) in audits.iter().zip(base) {
            let q = (a.f)(x);
            let drift = (q - q0).abs() / q0.abs().max(1.0);
            self.audits.get_mut(&a.name).unwrap().push(drift);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub dt: f64,
    pub method: Method,
    /// Record every `stride`-th accepted step (the final state is always kept).
    pub stride: usize,
}

impl IntegrateOptions {
    pub fn rk4(t_end: f64, dt: f64) -> Self {
        Self {
            t_end,
            dt,
            method: Method::Rk4,
            stride: 1,
        }
    }
}

fn axpy(x: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn combo(x: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = x.to_vec();
    for (c, k) in terms {
        if *c == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(k.iter()) {
            *o += h * c * v;
        }
    }
    out
}

fn rk4_step<F>(rhs: &F, t: f64, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let k1 = rhs(t, x)?;
    let k2 = rhs(t + h / 2.0, &axpy(x, h / 2.0, &k1))?;
    let k3 = rhs(t + h / 2.0, &axpy(x, h / 2.0, &k2))?;
    let k4 = rhs(t + h, &axpy(x, h, &k3))?;
    Ok((0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

// Dormand–Prince tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One embedded step: the fifth-order solution and the scaled error norm.
fn dopri_step<F>(
    rhs: &F,
    t: f64,
    x: &[f64],
    h: f64,
    rtol: f64,
    atol: f64,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let terms: Vec<(f64, &[f64])> = (0..s).map(|j| (A[s][j], k[j].as_slice())).collect();
        let xs = combo(x, h, &terms);
        k.push(rhs(t + C[s] * h, &xs)?);
    }
    let t5: Vec<(f64, &[f64])> = (0..7).map(|j| (B5[j], k[j].as_slice())).collect();
    let t4: Vec<(f64, &[f64])> = (0..7).map(|j| (B4[j], k[j].as_slice())).collect();
    let y5 = combo(x, h, &t5);
    let y4 = combo(x, h, &t4);
    let err = (0..x.len())
        .map(|i| {
            let sc = atol + rtol * x[i].abs().max(y5[i].abs());
            ((y5[i] - y4[i]) / sc).powi(2)
        })
        .sum::<f64>()
        / x.len().max(1) as f64;
    Ok((y5, err.sqrt()))
}

pub fn integrate<F>(
    rhs: F,
    x0: &[f64],
    opts: &IntegrateOptions,
    audits: &[Audit],
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    if !(opts.dt > 0.0) || !(opts.t_end >= 0.0) {
        return Err(Error::InvalidArgument(
            "dt must be positive and t_end non-negative".into(),
        ));
    }
    let stride = opts.stride.max(1);
    let base: Vec<f64> = audits.iter().map(|a| (a.f)(x0)).collect();
    let mut traj = Trajectory {
        audits: audits
            .iter()
            .map(|a| (a.name.clone(), Vec::new()))
            .collect(),
        ..Default::default()
    };
    traj.record(0.0, x0, audits, &base);
    let mut x = x0.to_vec();
    match opts.method {
        Method::Rk4 => {
            let steps = ((opts.t_end / opts.dt) - 1e-9).ceil().max(0.0) as usize;
            let h = if steps == 0 {
                0.0
            } else {
                opts.t_end / steps as f64
            };
            for s in 1..=steps {
                x = rk4_step(&rhs, (s - 1) as f64 * h, &x, h)?;
                if s % stride == 0 || s == steps {
                    traj.record(s as f64 * h, &x, audits, &base);
                }
            }
        }
        Method::Rk45 { rtol, atol } => {
            let mut t = 0.0;
            let mut h = opts.dt.min(opts.t_end.max(f64::MIN_POSITIVE));
            let mut accepted = 0usize;
            while t < opts.t_end {
                let step = h.min(opts.t_end - t);
                if step < 1e-14 * opts.t_end.max(1.0) {
                    if opts.t_end - t < 1e-12 * opts.t_end.max(1.0) {
                        break;
                    }
                    return Err(Error::StepRejection { t, dt: step });
                }
                let (y, err) = dopri_step(&rhs, t, &x, step, rtol, atol)?;
                if err <= 1.0 {
                    t += step;
                    x = y;
                    accepted += 1;
                    if accepted % stride == 0 || t >= opts.t_end {
                        traj.record(t, &x, audits, &base);
                    }
                }
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = step * factor;
            }
            if *traj.times.last().unwrap() < t {
                traj.record(t, &x, audits, &base);
            }
        }
    }
    Ok(traj)
}
