//! Numerical laboratory for slowly driven disordered lattice models.
//!
//! The crate builds finite-volume disordered Hamiltonians H(s) = H + β·f(s)·W
//! on discrete tori, and provides the machinery to stress-test their spectral
//! and dynamical behavior at desk scale:
//!
//! - `lattice`: torus geometry, regions, suitable ℓ-covers, distance weights.
//! - `operators`: Anderson-type kernels, driving protocols, restrictions,
//!   periodization, the time-dependent family H(s).
//! - `spectral`: dense eigensolving, spectral projections, resolvents, the
//!   Kato commutator operator, quasi-locality norms, localization and
//!   disorder statistics (Wegner/Minami/level spacing/IDOS, eigenfunction
//!   correlators, fractional moments).
//! - `local_structure`: cluster detection over box covers, local-gap search,
//!   support and decay-of-correlation diagnostics.
//! - `adiabatic`: unitary propagation (Magnus schemes, dense and sparse
//!   paths), super-adiabatic expansions, spectral patches, compression,
//!   parallel transport, distorted Fermi projections, patch-following
//!   experiments, light-cone and projector-comparison checks.
//! - `linear_response`: Hall conductance on a 2D torus — driven charge
//!   transport σ_m, the Kubo/index value, and the clean Hofstadter
//!   comparator with a TKNN oracle.
//! - `hybridization`: 1D avoided-crossing pipeline — region splitting,
//!   decoupling, two-level reduction, β-sweeps, Schur-complement overlap.
//! - `wannier`: generalized Wannier decomposition of finite-rank
//!   quasi-local projections.
//! - `harness`: experiment configs, deterministic ensemble orchestration,
//!   sweeps, and JSON/CSV emission.

pub mod adiabatic;
pub mod error;
pub mod harness;
pub mod hybridization;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod linear_response;
pub mod local_structure;
pub mod numerics;
pub mod operators;
pub mod rng;
pub mod spectral;
pub mod wannier;

pub use error::{LabError, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix (row-major).
pub type CMat = ndarray::Array2<C64>;

/// Dense complex vector.
pub type CVec = ndarray::Array1<C64>;
