//! The mollifier family `Φ_m(x) = x^m · B(x) / F` supported on `[-1, 1]`,
//! its derivatives, and the inverse moments `A_j = ∫ Φ(t) / t^j dt`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::bump::{binomial, bump, bump_deriv, power_deriv, MAX_BUMP_DERIV};
use crate::error::{Error, Result};
use crate::numerics::QuadConfig;

/// Largest supported exponent `m`.
pub const MAX_M: u32 = 16;
/// Derivative orders `Φ^(r)` available from every mollifier.
pub const MAX_PHI_DERIV: usize = 8;

const NORM_CHECK_TOL: f64 = 1e-10;

/// A normalized member of the `x^m·B(x)` family.
#[derive(Debug, Clone)]
pub struct Mollifier {
    m: u32,
    norm: f64,
    moments: [OnceLock<f64>; MAX_M as usize + 1],
}

/// An inverse moment `A_j` of a mollifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moment {
    pub j: u32,
    pub value: f64,
}

impl Mollifier {
    /// Builds `Φ_m`; `m` must be even and at most [`MAX_M`].
    pub fn new(m: u32) -> Result<Self> {
        if !m.is_multiple_of(2) {
            return Err(Error::OddExponent(m));
        }
        if m > MAX_M {
            return Err(Error::ExponentOutOfRange(m));
        }
        // F itself shrinks quickly with m, so ask for relative accuracy.
        let norm = QuadConfig::with_tols(1e-300, 1e-13)
            .integrate(|x| x.powi(m as i32) * bump(x), -1.0, 1.0, &[0.0])?
            .value;
        let phi = Self {
            m,
            norm,
            moments: Default::default(),
        };
        let total = QuadConfig::with_abs_tol(NORM_CHECK_TOL)
            .integrate(|x| phi.value(x), -1.0, 1.0, &[0.0])?
            .value;
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Numeric {
                message: format!("mollifier m = {m} failed its normalization check"),
                partial_value: total,
                error_estimate: (total - 1.0).abs(),
                evaluations: 0,
            });
        }
        Ok(phi)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Normalization constant `F = ∫ x^m B(x) dx`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn max_deriv(&self) -> usize {
        MAX_PHI_DERIV
    }

    /// `Φ(x)`.
    pub fn value(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        x.powi(self.m as i32) * bump(x) / self.norm
    }

    /// `Φ^(r)(x)`, exactly zero for `|x| >= 1`.
    pub fn eval(&self, x: f64, r: usize) -> Result<f64> {
        if r > MAX_PHI_DERIV {
            return Err(Error::UnsupportedOrder {
                order: r,
                max: MAX_PHI_DERIV,
            });
        }
        Ok(self.deriv(x, r))
    }

    /// Unchecked `Φ^(r)`; `r` must not exceed [`MAX_PHI_DERIV`].
    pub(crate) fn deriv(&self, x: f64, r: usize) -> f64 {
        debug_assert!(r <= MAX_PHI_DERIV && MAX_PHI_DERIV <= MAX_BUMP_DERIV);
        if x.abs() >= 1.0 {
            return 0.0;
        }
        if r == 0 {
            return self.value(x);
        }
        let mut sum = 0.0;
        for i in 0..=r {
            let p = power_deriv(x, self.m, r - i);
            if p != 0.0 {
                sum += binomial(r, i) * p * bump_deriv(x, i);
            }
        }
        sum / self.norm
    }

    /// `A_j = ∫ Φ(t)/t^j dt`, memoized per `j`.
    pub fn moment(&self, j: u32) -> Result<Moment> {
        if j == 0 {
            return Err(Error::domain("moment index j must be positive"));
        }
        if self.m < j {
            return Err(Error::DivergentMoment { m: self.m, j });
        }
        if j % 2 == 1 {
            return Ok(Moment { j, value: 0.0 });
        }
        if let Some(v) = self.moments[j as usize].get() {
            return Ok(Moment { j, value: *v });
        }
        let pow = (self.m - j) as i32;
        let value = QuadConfig::with_tols(1e-300, 1e-13)
            .integrate(|t| t.powi(pow) * bump(t), -1.0, 1.0, &[0.0])?
            .value
            / self.norm;
        let value = *self.moments[j as usize].get_or_init(|| value);
        Ok(Moment { j, value })
    }
}
