//! Numerical toolkit for gauge-invariant quantum Rabi models.
//!
//! The crate reduces a 1D particle in a (possibly asymmetric) double-well
//! potential to a two-level system, builds the coupled light-matter
//! Hamiltonians in the Coulomb gauge (gauge-invariant form), the dipole
//! gauge, and a linearized comparison baseline, and verifies gauge
//! invariance, Fock-truncation convergence, and the beyond-dipole
//! high-frequency coupling cutoff by exact diagonalization.
//!
//! Everything works in natural units (ħ = 1). All operators are dense
//! complex matrices; spectra come from a cyclic Jacobi eigensolver.

pub mod analysis;
pub mod error;
pub mod gauge_models;
pub mod multimode;
pub mod numal;
pub mod quantum_ops;
pub mod schrodinger1d;

pub use error::{Error, Result};
pub use numal::ComplexMatrix;
