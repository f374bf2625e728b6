//! Verification runs: the closed-form table, continuous consistency, and the
//! failure of pure sequential completion for `δ²`.

use std::sync::Arc;

use serde::Serialize;

use super::{closed_form, critical_alpha, product_limit, ProductQuery, Regime};
use crate::distribution::{ContinuousFn, Distribution};
use crate::error::{Error, Result};
use crate::mollifier::Mollifier;
use crate::numerics::{extrapolate, LimitEstimate, QuadConfig, Schedule};
use crate::test_function::TestFunction;

/// Absolute tolerance for products whose closed form is zero.
pub const ZERO_TOL: f64 = 1e-6;

/// Pairs covered by the closed-form table.
pub const TABLE_PAIRS: [(u32, u32); 6] = [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)];

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub l: u32,
    pub k: u32,
    pub alpha: f64,
    pub beta: f64,
    pub regime: Regime,
    pub expected: f64,
    pub measured: f64,
    pub error_estimate: f64,
    pub converged: bool,
    /// Absolute deviation allowed between `measured` and `expected`.
    pub allowed: f64,
    pub passed: bool,
    pub terms: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    /// `(δ ⊗ δ'') + (δ' ⊗ δ')` at `α = 4β`.
    pub sum: f64,
    pub allowed: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub m: u32,
    pub beta: f64,
    pub tol: f64,
    pub rows: Vec<TableRow>,
    pub cross: CrossCheck,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed) && self.cross.passed
    }
}

/// Measures `(δ^(l) ⊗ δ^(k))_(α,β)(Ψ)` and compares it with the closed form.
///
/// Nonzero references are matched to relative `tol`; zero references to
/// [`ZERO_TOL`] absolute.
#[allow(clippy::too_many_arguments)]
pub fn verify_entry(
    l: u32,
    k: u32,
    alpha: f64,
    beta: f64,
    phi: &Arc<Mollifier>,
    psi: &TestFunction,
    tol: f64,
    schedule: Schedule,
) -> Result<TableRow> {
    let cf = closed_form(l, k, alpha, beta, phi)?;
    let cf = *cf.closed_form().ok_or_else(|| {
        Error::precondition(format!(
            "δ^({l})⊗δ^({k}) at α = {alpha} has no closed form to verify"
        ))
    })?;
    let expected = cf.coefficient * psi.value(0.0);
    let q = ProductQuery::deltas(l, k, alpha, beta, phi.clone(), psi.clone())?;
    let est = product_limit(&q, schedule, tol)?;
    let allowed = if expected == 0.0 {
        ZERO_TOL
    } else {
        tol * expected.abs()
    };
    let passed = certified(&est, expected, allowed);
    Ok(TableRow {
        l,
        k,
        alpha,
        beta,
        regime: cf.regime,
        expected,
        measured: est.value,
        error_estimate: est.error_estimate,
        converged: est.converged,
        allowed,
        passed,
        terms: est.terms,
    })
}

/// Runs all six table products at their critical `α` and one supercritical
/// `α`, plus the `δ⊗δ'' = -(δ'⊗δ')` cross-relation.
pub fn verify_table(
    m: u32,
    beta: f64,
    psi: &TestFunction,
    tol: f64,
    schedule: Schedule,
) -> Result<TableReport> {
    if m < 6 {
        return Err(Error::precondition(format!(
            "the full table needs m >= 6 (δ''⊗δ'' requires m > 5), got m = {m}"
        )));
    }
    let phi = Arc::new(Mollifier::new(m)?);
    let mut rows = Vec::with_capacity(2 * TABLE_PAIRS.len());
    for (l, k) in TABLE_PAIRS {
        let crit = critical_alpha(l, k, beta);
        rows.push(verify_entry(l, k, crit, beta, &phi, psi, tol, schedule)?);
        rows.push(verify_entry(
            l,
            k,
            crit + SUPERCRITICAL_OFFSET * beta,
            beta,
            &phi,
            psi,
            tol,
            schedule,
        )?);
    }
    let find = |l, k| {
        rows.iter()
            .find(|r| r.l == l && r.k == k && r.regime == Regime::Critical)
            .expect("critical row present")
    };
    let (d02, d11) = (find(0, 2), find(1, 1));
    let sum = d02.measured + d11.measured;
    let allowed = d02.allowed + d11.allowed;
    let cross = CrossCheck {
        sum,
        allowed,
        passed: sum.abs() <= allowed,
    };
    Ok(TableReport {
        m,
        beta,
        tol,
        rows,
        cross,
    })
}

/// The estimate is within `allowed` of `expected` and its own error
/// estimate is inside the same band.
///
/// The error estimate is the agreement of successive tail fits when the
/// extrapolation accepted one, otherwise the last raw difference, so a slowly
/// settling sequence can pass once its extrapolated value is pinned down.
pub fn certified(est: &LimitEstimate, expected: f64, allowed: f64) -> bool {
    (est.value - expected).abs() <= allowed && est.error_estimate <= allowed
}

/// Supercritical rows sit this many multiples of β above the critical value.
pub const SUPERCRITICAL_OFFSET: f64 = 2.0;

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub alpha: f64,
    pub beta: f64,
    pub limit: LimitEstimate,
    pub direct: f64,
    pub difference: f64,
}

/// Compares `(f ⊗ g)_(α,β)(Ψ)` with the ordinary integral `∫ f g Ψ`.
#[allow(clippy::too_many_arguments)]
pub fn continuous_consistency(
    f: &ContinuousFn,
    g: &ContinuousFn,
    alpha: f64,
    beta: f64,
    phi: &Arc<Mollifier>,
    psi: &TestFunction,
    schedule: Schedule,
    tol: f64,
) -> Result<ConsistencyReport> {
    let q = ProductQuery::new(
        Distribution::CompactContinuous(f.clone()),
        Distribution::CompactContinuous(g.clone()),
        alpha,
        beta,
        phi.clone(),
        psi.clone(),
    )?;
    let limit = product_limit(&q, schedule, tol)?;
    let direct = direct_product_integral(f, g, psi)?;
    Ok(ConsistencyReport {
        alpha,
        beta,
        difference: limit.value - direct,
        limit,
        direct,
    })
}

/// `∫ f g Ψ dx` by quadrature over the common support.
pub fn direct_product_integral(
    f: &ContinuousFn,
    g: &ContinuousFn,
    psi: &TestFunction,
) -> Result<f64> {
    let (pa, pb) = psi.support();
    let (fa, fb) = f.support();
    let (ga, gb) = g.support();
    let (a, b) = (pa.max(fa).max(ga), pb.min(fb).min(gb));
    if a >= b {
        return Ok(0.0);
    }
    let mut splits = f.kinks().to_vec();
    splits.extend_from_slice(g.kinks());
    Ok(QuadConfig::with_tols(1e-14, 1e-13)
        .integrate(|x| f.eval(x) * g.eval(x) * psi.value(x), a, b, &splits)?
        .value)
}

/// The pure sequential-completion sequence `n^β ∫ Φ(t) Ψ(t/n^β) dt`.
///
/// For `Ψ(0) ≠ 0` the terms grow like `n^β Ψ(0)` and the estimate comes back
/// unconverged and tagged divergent.
pub fn sequential_only_divergence(
    phi: &Mollifier,
    beta: f64,
    psi: &TestFunction,
    schedule: Schedule,
    tol: f64,
) -> Result<LimitEstimate> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::domain(format!("β must be positive, got {beta}")));
    }
    let terms = schedule
        .points()
        .into_iter()
        .map(|n| {
            let s = (n as f64).powf(beta);
            let (pa, pb) = psi.support();
            let v = QuadConfig::with_tols(1e-14, 1e-12)
                .integrate(
                    |t| phi.value(t) * psi.value(t / s),
                    -1.0,
                    1.0,
                    &[0.0, s * pa, s * pb],
                )?
                .value;
            Ok((n, s * v))
        })
        .collect::<Result<Vec<_>>>()?;
    extrapolate(&terms, tol)
}
