//! Analytic (boundary-value) representation of compactly supported
//! distributions.
//!
//! For `δ^(k)` the Cauchy transform is `T⁰(z) = k!/(2πi) · (-z)^-(k+1)` and
//! `T_red(x, ε) = T⁰(x+iε) - T⁰(x-iε)` is the rational kernel
//! `N_k(x, ε) / (π (x²+ε²)^(k+1))`, obtained by differentiating the Poisson
//! kernel `ε / (π(x²+ε²))` symbolically. For continuous `T` the same
//! difference is the Poisson integral of `T`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::LazyLock;

use num_complex::Complex64;

use crate::distribution::ContinuousFn;
use crate::error::{Error, Result};
use crate::numerics::QuadConfig;
use crate::poly::HomogeneousPoly;
use crate::test_function::TestFunction;

/// Highest δ-derivative order with a tabulated kernel.
pub const MAX_KERNEL_ORDER: u32 = 8;

/// `N(x, ε) / (π (x² + ε²)^p)` with exact integer coefficients in `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalKernel {
    pub numerator: HomogeneousPoly,
    pub power: u32,
    pub order: u32,
}

impl RationalKernel {
    fn poisson() -> Self {
        Self {
            numerator: HomogeneousPoly::new(1, vec![1, 0]),
            power: 1,
            order: 0,
        }
    }

    /// Formal `∂/∂x`: `(N_x (x²+ε²) - 2p x N) / (x²+ε²)^(p+1)`.
    pub fn derivative(&self) -> Self {
        let a = self.numerator.dx().mul_norm_sq();
        let b = self.numerator.mul_x(2 * i128::from(self.power));
        Self {
            numerator: a.sub(&b),
            power: self.power + 1,
            order: self.order + 1,
        }
    }

    /// Evaluates the kernel; `eps` must be positive.
    ///
    /// The numerator is homogeneous of degree `k + 1` and the denominator of
    /// degree `2k + 2`, so both are evaluated on the unit circle and the
    /// radius is applied once, avoiding overflow for tiny `ε`.
    pub fn eval(&self, x: f64, eps: f64) -> f64 {
        let r = x.hypot(eps);
        let num = self.numerator.eval(x / r, eps / r);
        let excess = 2 * self.power as i32 - self.numerator.degree() as i32;
        num / (PI * r.powi(excess))
    }
}

static KERNELS: LazyLock<Vec<RationalKernel>> = LazyLock::new(|| {
    let mut out = vec![RationalKernel::poisson()];
    for k in 0..MAX_KERNEL_ORDER as usize {
        let next = out[k].derivative();
        out.push(next);
    }
    out
});

/// Exact kernel representing `δ^(k)_red`.
pub fn kernel_for(k: u32) -> Result<&'static RationalKernel> {
    KERNELS.get(k as usize).ok_or(Error::UnsupportedOrder {
        order: k as usize,
        max: MAX_KERNEL_ORDER as usize,
    })
}

/// `δ^(k)_red(x, ε)`.
pub fn delta_red(k: u32, x: f64, eps: f64) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::domain(format!("ε must be positive, got {eps}")));
    }
    Ok(kernel_for(k)?.eval(x, eps))
}

/// Cauchy transform `T⁰(z) = (1/2πi) ⟨δ^(k), (x - z)^-1⟩`.
pub fn cauchy(k: u32, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::OnSupport);
    }
    let factorial: f64 = (1..=k).map(f64::from).product();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    Ok(factorial * (-z).powi(-(k as i32) - 1) / two_pi_i)
}

/// Difference of boundary values `T⁰(x+iε) - T⁰(x-iε)`, returned with the
/// imaginary residue so callers can check it.
pub fn red_from_cauchy_complex(k: u32, x: f64, eps: f64) -> Result<Complex64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::domain(format!("ε must be positive, got {eps}")));
    }
    Ok(cauchy(k, Complex64::new(x, eps))? - cauchy(k, Complex64::new(x, -eps))?)
}

/// Real part of [`red_from_cauchy_complex`].
pub fn red_from_cauchy(k: u32, x: f64, eps: f64) -> Result<f64> {
    Ok(red_from_cauchy_complex(k, x, eps)?.re)
}

/// `T_red(x, ε)` for a continuous compactly supported `T`, i.e. the Poisson
/// integral `∫ T(y) ε / (π((x-y)² + ε²)) dy`.
///
/// Integrated in `θ` with `y = x + ε tan θ`, which turns the width-`ε` peak
/// into the bounded integrand `T(x + ε tan θ)/π`.
pub fn red_continuous(f: &ContinuousFn, x: f64, eps: f64, tol: f64) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::domain(format!("ε must be positive, got {eps}")));
    }
    let (a, b) = f.support();
    let to_theta = |y: f64| ((y - x) / eps).atan();
    let (ta, tb) = (to_theta(a), to_theta(b));
    if tb <= ta {
        return Ok(0.0);
    }
    let splits: Vec<f64> = f.breakpoints().iter().map(|&p| to_theta(p)).collect();
    let res = QuadConfig::with_abs_tol(tol).integrate(
        |theta| {
            // Guard the image of θ = ±π/2 (only reached through rounding).
            if theta.abs() >= FRAC_PI_2 {
                return 0.0;
            }
            f.eval(x + eps * theta.tan())
        },
        ta,
        tb,
        &splits,
    )?;
    Ok(res.value / PI)
}

/// `∫ δ^(k)_red(x, ε) Ψ(x) dx` over supp Ψ.
pub fn pair_delta_red(k: u32, psi: &TestFunction, eps: f64) -> Result<f64> {
    let kern = kernel_for(k)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("ε must be positive, got {eps}")));
    }
    let (a, b) = psi.support();
    let splits = [0.0, eps, -eps, 10.0 * eps, -10.0 * eps];
    let res = QuadConfig::with_tols(1e-14, 1e-12)
        .relative_to_magnitude()
        .integrate(|x| kern.eval(x, eps) * psi.value(x), a, b, &splits)?;
    Ok(res.value)
}
