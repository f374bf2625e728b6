//! Shared numerical services: adaptive quadrature and limit extrapolation.

mod extrapolate;
mod quad;

pub use extrapolate::{decay_exponent, extrapolate, Divergence, LimitEstimate, Schedule, TailFit};
pub use quad::{adaptive_quad, QuadConfig, QuadResult};
