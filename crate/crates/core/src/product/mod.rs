//! The merged product `(S ⊗ T)_(α,β)`.
//!
//! For each `n` the symmetrized term is
//!
//! ```text
//! ½ ∫ [S_n(x) T_red(x, n^-α) + T_n(x) S_red(x, n^-α)] Ψ(x) dx
//! ```
//!
//! with `S_n = S * δ_n^(β)`. The product is the `n → ∞` limit of these terms.

mod closed_form;
mod verify;

use std::sync::Arc;

use rayon::prelude::*;

pub use closed_form::{closed_form, critical_alpha, ClosedForm, Coverage, Regime, Source};
pub use verify::{
    certified, continuous_consistency, direct_product_integral, sequential_only_divergence,
    verify_entry, verify_table, ConsistencyReport, CrossCheck, TableReport, TableRow,
    SUPERCRITICAL_OFFSET, ZERO_TOL,
};

use crate::analytic::{delta_red, kernel_for, red_continuous, MAX_KERNEL_ORDER};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::mollifier::Mollifier;
use crate::numerics::{extrapolate, LimitEstimate, QuadConfig, Schedule};
use crate::regularize::{conv_delta_deriv, conv_function_tol, SeqParams};
use crate::test_function::TestFunction;

/// Inner quadratures (convolution, Poisson integral) run at this tolerance.
const INNER_TOL: f64 = 1e-11;

/// Everything needed to evaluate `(S ⊗ T)_n^(α,β)(Ψ)`.
#[derive(Debug, Clone)]
pub struct ProductQuery {
    s: Distribution,
    t: Distribution,
    alpha: f64,
    beta: f64,
    phi: Arc<Mollifier>,
    psi: TestFunction,
    allow_small_m: bool,
}

impl ProductQuery {
    pub fn new(
        s: Distribution,
        t: Distribution,
        alpha: f64,
        beta: f64,
        phi: Arc<Mollifier>,
        psi: TestFunction,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("α must be positive, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("β must be positive, got {beta}")));
        }
        for d in [&s, &t] {
            if let Some(k) = d.delta_order() {
                if k as usize > phi.max_deriv() || k > MAX_KERNEL_ORDER {
                    return Err(Error::UnsupportedOrder {
                        order: k as usize,
                        max: phi.max_deriv().min(MAX_KERNEL_ORDER as usize),
                    });
                }
            }
        }
        Ok(Self {
            s,
            t,
            alpha,
            beta,
            phi,
            psi,
            allow_small_m: false,
        })
    }

    /// Shorthand for `δ^(l) ⊗ δ^(k)`.
    pub fn deltas(
        l: u32,
        k: u32,
        alpha: f64,
        beta: f64,
        phi: Arc<Mollifier>,
        psi: TestFunction,
    ) -> Result<Self> {
        Self::new(
            Distribution::delta(l),
            Distribution::delta(k),
            alpha,
            beta,
            phi,
            psi,
        )
    }

    /// Skip the `m > l + k + 1` check for exploratory limits.
    pub fn allow_small_m(mut self, allow: bool) -> Self {
        self.allow_small_m = allow;
        self
    }

    /// The same query with the factors exchanged.
    pub fn swapped(&self) -> Self {
        let mut q = self.clone();
        std::mem::swap(&mut q.s, &mut q.t);
        q
    }

    pub fn with_test_function(&self, psi: TestFunction) -> Self {
        Self {
            psi,
            ..self.clone()
        }
    }

    pub fn s(&self) -> &Distribution {
        &self.s
    }
    pub fn t(&self) -> &Distribution {
        &self.t
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn phi(&self) -> &Mollifier {
        &self.phi
    }
    pub fn psi(&self) -> &TestFunction {
        &self.psi
    }

    fn delta_pair(&self) -> Option<(u32, u32)> {
        Some((self.s.delta_order()?, self.t.delta_order()?))
    }
}

/// `(S ⊗ T)_n^(α,β)(Ψ)` for one `n`.
pub fn product_term(q: &ProductQuery, n: u64) -> Result<f64> {
    let p = SeqParams::new(q.beta, n)?;
    match q.delta_pair() {
        Some((l, k)) => delta_pair_term(q, l, k, p),
        None => mixed_term(q, p),
    }
}

/// δ-pairs are integrated in `t = n^β x` over the mollifier support. With
/// `ε' = n^(β-α)` the kernel homogeneity gives
/// `½ n^((l+k+1)β) ∫ [Φ_l(t) K_k(t, ε') + Φ_k(t) K_l(t, ε')] Ψ(t/n^β) dt`.
fn delta_pair_term(q: &ProductQuery, l: u32, k: u32, p: SeqParams) -> Result<f64> {
    let s = p.scale();
    let eps = (p.n() as f64).powf(q.beta - q.alpha);
    let (kl, kk) = (kernel_for(l)?, kernel_for(k)?);
    let (l_ord, k_ord) = (l as usize, k as usize);
    let phi = &*q.phi;
    let psi = &q.psi;
    let pre = 0.5 * s.powi((l + k + 1) as i32);
    let integrand = |t: f64| {
        let a = phi.deriv(t, l_ord) * kk.eval(t, eps);
        let b = phi.deriv(t, k_ord) * kl.eval(t, eps);
        pre * (a + b) * psi.value(t / s)
    };
    let (pa, pb) = psi.support();
    let mut splits = vec![0.0, s * pa, s * pb];
    for mult in [1.0, 10.0] {
        splits.extend([mult * eps, -mult * eps]);
    }
    let res = QuadConfig::with_tols(1e-13, 1e-11)
        .relative_to_magnitude()
        .integrate(integrand, -1.0, 1.0, &splits)?;
    Ok(res.value)
}

fn seq_value(d: &Distribution, phi: &Mollifier, p: SeqParams, x: f64) -> Result<f64> {
    match d {
        Distribution::DeltaDerivative { order } => conv_delta_deriv(*order, phi, p, x),
        Distribution::CompactContinuous(f) => conv_function_tol(f, phi, p, x, INNER_TOL),
    }
}

fn red_value(d: &Distribution, x: f64, eps: f64) -> Result<f64> {
    match d {
        Distribution::DeltaDerivative { order } => delta_red(*order, x, eps),
        Distribution::CompactContinuous(f) => red_continuous(f, x, eps, INNER_TOL),
    }
}

/// Anything involving a continuous factor is integrated in `x` over supp Ψ.
fn mixed_term(q: &ProductQuery, p: SeqParams) -> Result<f64> {
    let eps = (p.n() as f64).powf(-q.alpha);
    let h = p.half_width();
    let phi = &*q.phi;
    let integrand = |x: f64| -> Result<f64> {
        let psi = q.psi.value(x);
        if psi == 0.0 {
            return Ok(0.0);
        }
        let a = seq_value(&q.s, phi, p, x)? * red_value(&q.t, x, eps)?;
        let b = seq_value(&q.t, phi, p, x)? * red_value(&q.s, x, eps)?;
        Ok(0.5 * (a + b) * psi)
    };
    let mut splits = vec![0.0, h, -h];
    for d in [&q.s, &q.t] {
        match d {
            Distribution::DeltaDerivative { .. } => {
                for mult in [1.0, 10.0, 100.0] {
                    splits.extend([mult * eps, -mult * eps]);
                }
            }
            Distribution::CompactContinuous(f) => {
                for b in f.breakpoints() {
                    splits.extend([b - h, b, b + h]);
                }
            }
        }
    }
    let (a, b) = q.psi.support();
    Ok(QuadConfig::with_tols(1e-12, 1e-10)
        .try_integrate(integrand, a, b, &splits)?
        .value)
}

/// Evaluates the terms on `schedule` (concurrently) and extrapolates them.
pub fn product_limit(q: &ProductQuery, schedule: Schedule, tol: f64) -> Result<LimitEstimate> {
    if schedule.steps < 4 {
        return Err(Error::domain(
            "product limits need at least four schedule points",
        ));
    }
    if let Some((l, k)) = q.delta_pair() {
        let m = q.phi.m();
        if !q.allow_small_m && m <= l + k + 1 {
            return Err(Error::precondition(format!(
                "δ^({l})⊗δ^({k}) needs an even m > {} (got m = {m})",
                l + k + 1
            )));
        }
    }
    let terms = schedule
        .points()
        .into_par_iter()
        .map(|n| product_term(q, n).map(|v| (n, v)))
        .collect::<Result<Vec<_>>>()?;
    extrapolate(&terms, tol)
}
