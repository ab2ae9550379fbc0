//! Floating-point dynamics: the reduced Lie–Poisson flow on `g̃*`, the
//! magnetic flow on charted groups, vector potentials, integrals of motion
//! and Runge–Kutta integration with drift audits.

pub mod chart;
pub mod integrate;
pub mod magnetic;
pub mod metric;
pub mod reduced;
pub mod torus;

pub use chart::{audit_chart, ChartAudit, GroupChart};
pub use integrate::{integrate, Audit, IntegrateOptions, Method, Trajectory};
pub use magnetic::{
    bracket_audit, hamiltonian_jet, integrals_of_motion, jacobiator, magnetic_flow_rhs,
    potential_residual, vector_potential, ExtendedSystem, Integrals, Jet, PhaseState, Potential,
};
pub use metric::Metric;
pub use reduced::{reduced_rhs, CoadjointState, ReducedSystem};
pub use torus::closed_form_torus;
