//! Scalar numerics shared by the physics modules: truncated Taylor jets,
//! Bessel functions, resolvent-chain integrals, and statistics helpers.

pub mod bessel;
pub mod fit;
pub mod jets;
pub mod resolvent_integrals;

pub use fit::{linear_fit, loglog_fit, wilson_interval, FitResult};
pub use jets::Jet;
