//! Closed-form magnetic flow on the flat torus with `F = dφ∧dψ`.

use super::magnetic::PhaseState;

/// State at time `t` from `(φ, ψ, p_φ, p_ψ)(0)` for charge `e` and the
/// identity metric. `e = 0` falls back to free straight-line motion.
pub fn closed_form_torus(e: f64, initial: &PhaseState, t: f64) -> PhaseState {
    let (phi0, psi0) = (initial.g[0], initial.g[1]);
    let (pp, ps) = (initial.p[0], initial.p[1]);
    if e == 0.0 {
        return PhaseState {
            g: vec![phi0 + pp * t, psi0 + ps * t],
            p: vec![pp, ps],
        };
    }
    let (s, c) = (e * t).sin_cos();
    PhaseState {
        g: vec![
            pp * s / e + ps * (c - 1.0) / e + phi0,
            -pp * (c - 1.0) / e + ps * s / e + psi0,
        ],
        p: vec![pp * c - ps * s, pp * s + ps * c],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn st(v: [f64; 4]) -> PhaseState {
        PhaseState::from_slice(&v)
    }

    #[test]
    fn identity_at_zero_and_period() {
        let x0 = st([0.3, -0.2, 0.7, 1.1]);
        assert_eq!(closed_form_torus(1.0, &x0, 0.0), x0);
        let back = closed_form_torus(1.0, &x0, 2.0 * PI).to_vec();
        for (a, b) in back.iter().zip(x0.to_vec()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn quarter_period() {
        let s = closed_form_torus(1.0, &st([0.0, 0.0, 1.0, 0.0]), PI / 2.0).to_vec();
        let want = [1.0, 1.0, 0.0, 1.0];
        for (a, b) in s.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_charge_is_straight_line() {
        let s = closed_form_torus(0.0, &st([0.0, 1.0, 2.0, -1.0]), 3.0);
        assert_eq!(s.to_vec(), vec![6.0, -2.0, 2.0, -1.0]);
    }
}
