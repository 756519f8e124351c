//! Multiprecision construction, certified zero computation, and asymptotic
//! verification for the non-classical Jacobi family
//! `P_m^{(m+1/2, -m-1/2)}` and its monic normalization `pi_m`.
//!
//! The crate is organized around the quantities those polynomials are known
//! to obey:
//!
//! * [`numerics`] — configurable-precision complex kernel and the specific
//!   branch-cut square roots everything else is written in terms of;
//! * [`jacobi`] — exact rational coefficient construction plus a terminating
//!   hypergeometric sum as an independent evaluation oracle;
//! * [`geometry`] — lemniscate level curves `|1 - z^2| = rho`, region
//!   classification and the circular quadrature contour;
//! * [`orthogonality`] — the non-Hermitian contour orthogonality relation,
//!   checked against closed-form constants built from an exact half-integer
//!   Gamma algebra;
//! * [`asymptotics`] — outer and local (parabolic-cylinder) asymptotic
//!   approximations of `pi_m`, with the conformal map between them;
//! * [`zeros`] — certified simultaneous root finding, explicitly predicted
//!   zeros, pairing, and convergence-rate measurements.

pub mod asymptotics;
pub mod geometry;
pub mod jacobi;
pub mod numerics;
pub mod orthogonality;
pub mod zeros;

pub use numerics::{BranchEvaluator, PrecisionConfig};
pub use rug::{Complex, Float, Integer, Rational};
