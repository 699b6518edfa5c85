//! Singular perturbation theory for finite non-Hermitian matrices whose
//! unperturbed part sits at an exceptional point (a single Jordan block).
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! * [`numerics`]: dense complex matrices, linear solves, characteristic
//!   polynomials, polynomial roots, eigenpairs and singular values;
//! * [`hamiltonians`]: the tridiagonal "discrete anharmonic" benchmark family,
//!   its exceptional-point limits and the `t`-path between the strong- and
//!   weak-coupling regimes;
//! * [`jordan`]: Jordan chains, transition matrices `Q` with `HQ = QS`, and
//!   the perturbation `W = Q⁻¹HQ − S` seen from the Jordan frame;
//! * [`puiseux`]: the `(L + Z) y = r` formulation of the perturbed Jordan
//!   block, its secular equation, Newton-polygon leading-order roots and the
//!   hierarchical wave functions;
//! * [`domain`]: reality-of-spectrum classification, parameter scans,
//!   boundary bisection, metric operators and pseudospectra.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod domain;
pub mod error;
pub mod hamiltonians;
pub mod jordan;
pub(crate) mod math;
pub mod numerics;
pub mod puiseux;

pub use error::{Error, Result};
pub use numerics::{DenseMatrix, Polynomial, Scalar};

/// Default absolute tolerance on unit-scaled matrices.
pub const DEFAULT_TOL: f64 = 1e-10;
