//! Integrability of magnetic geodesic flows on Lie groups.
//!
//! A right-invariant magnetic field on a Lie group `G` is a constant
//! 2-cocycle `F` on its Lie algebra. This crate decides integrability of the
//! resulting flow through the cohomology index of `F`, builds the central
//! extension `g̃` defined by `F`, and simulates both the reduced Lie–Poisson
//! flow on `g̃*` and the coordinate-level flow on charted groups.
//!
//! Exact work (structure constants, cohomology, indices) runs over big
//! rationals; only [`dynamics`] uses floating point.

pub mod catalog;
pub mod cohomology;
pub mod dynamics;
pub mod error;
pub mod extension;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod rank;
pub mod rational;

pub use cohomology::{TwoCochain, Verdict};
pub use error::{Error, Result};
pub use extension::CentralExtension;
pub use lie::{Covector, LieAlgebra, StructureTable};
pub use linalg::Subspace;
pub use rank::RankOptions;
pub use rational::Rational;
