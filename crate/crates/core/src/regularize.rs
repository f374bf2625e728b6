//! Convolution with the δ-sequence `δ_n(x) = n^β Φ(n^β x)`.

use serde::{Deserialize, Serialize};

use crate::distribution::ContinuousFn;
use crate::error::{Error, Result};
use crate::mollifier::Mollifier;
use crate::numerics::QuadConfig;

const CONV_TOL: f64 = 1e-9;

/// Rate `β` and index `n` of a δ-sequence member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeqParams {
    beta: f64,
    n: u64,
}

impl SeqParams {
    pub fn new(beta: f64, n: u64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("β must be positive, got {beta}")));
        }
        if n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        Ok(Self { beta, n })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Spatial scale `n^β`.
    pub fn scale(&self) -> f64 {
        (self.n as f64).powf(self.beta)
    }

    /// Half-width `n^-β` of the support of `δ_n`.
    pub fn half_width(&self) -> f64 {
        1.0 / self.scale()
    }
}

/// `δ_n^(β)(x) = n^β Φ(n^β x)`.
pub fn delta_seq(phi: &Mollifier, p: SeqParams, x: f64) -> f64 {
    let s = p.scale();
    s * phi.value(s * x)
}

/// `(δ^(k) * δ_n)(x) = n^((k+1)β) Φ^(k)(n^β x)`.
pub fn conv_delta_deriv(k: u32, phi: &Mollifier, p: SeqParams, x: f64) -> Result<f64> {
    let s = p.scale();
    Ok(s.powi(k as i32 + 1) * phi.eval(s * x, k as usize)?)
}

/// `(f * δ_n)(x) = ∫ f(x - y) δ_n(y) dy` over `y ∈ [-n^-β, n^-β]`.
pub fn conv_function(f: &ContinuousFn, phi: &Mollifier, p: SeqParams, x: f64) -> Result<f64> {
    conv_function_tol(f, phi, p, x, CONV_TOL)
}

pub(crate) fn conv_function_tol(
    f: &ContinuousFn,
    phi: &Mollifier,
    p: SeqParams,
    x: f64,
    tol: f64,
) -> Result<f64> {
    let h = p.half_width();
    let (a, b) = f.support();
    // f(x - y) vanishes unless y ∈ [x - b, x - a].
    let (lo, hi) = ((x - b).max(-h), (x - a).min(h));
    if lo >= hi {
        return Ok(0.0);
    }
    let mut splits: Vec<f64> = f.kinks().iter().map(|k| x - k).collect();
    splits.push(0.0);
    let res = QuadConfig::with_abs_tol(tol).integrate(
        |y| f.eval(x - y) * delta_seq(phi, p, y),
        lo,
        hi,
        &splits,
    )?;
    Ok(res.value)
}
