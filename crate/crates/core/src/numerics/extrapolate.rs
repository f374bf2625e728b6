//! Estimating `lim_{n→∞} a_n` from a geometric schedule of terms.
//!
//! Convergence is judged on the raw successive differences. When the last
//! differences decay like a geometric series (which is what a power-law
//! tail `c·n^-q` looks like on a geometric schedule) the remaining tail is
//! summed in closed form to refine the reported value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric schedule `n_i = n0 · 2^i`, `i = 0..steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub n0: u64,
    pub steps: u32,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { n0: 4, steps: 10 }
    }
}

impl Schedule {
    pub fn new(n0: u64, steps: u32) -> Result<Self> {
        if n0 == 0 {
            return Err(Error::domain("schedule start n0 must be positive"));
        }
        if steps == 0 || steps > 40 {
            return Err(Error::domain("schedule steps must be in 1..=40"));
        }
        n0.checked_mul(1u64 << (steps - 1))
            .ok_or_else(|| Error::domain("schedule overflows u64"))?;
        Ok(Self { n0, steps })
    }

    pub fn points(&self) -> Vec<u64> {
        (0..self.steps).map(|i| self.n0 << i).collect()
    }
}

/// Why a sequence was not declared convergent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Divergence {
    /// Differences do not shrink and keep their sign.
    Divergent,
    /// Differences alternate in sign without shrinking.
    Oscillating,
    /// Differences shrink but are still above tolerance.
    Slow,
}

/// Power-law tail `a_n ≈ L + c·n^-q` fitted to the last three terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub exponent: f64,
    pub correction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub tag: Option<Divergence>,
    pub fit: Option<TailFit>,
    pub terms: Vec<(u64, f64)>,
}

impl LimitEstimate {
    pub fn last_term(&self) -> f64 {
        self.terms.last().map(|t| t.1).unwrap_or(f64::NAN)
    }
}

/// Aitken-style tail sum from three consecutive terms, when the differences
/// shrink monotonically with a common sign.
fn tail(v0: f64, v1: f64, v2: f64, n1: u64, n2: u64) -> Option<(f64, f64)> {
    let d1 = v1 - v0;
    let d2 = v2 - v1;
    if d1 == 0.0 || d2 == 0.0 {
        return None;
    }
    let rho = d2 / d1;
    if !(rho > 0.0 && rho < 0.95) {
        return None;
    }
    let q = -rho.ln() / (n2 as f64 / n1 as f64).ln();
    Some((v2 + d2 * rho / (1.0 - rho), q))
}

/// Extrapolates `(n, a_n)` pairs to `n → ∞`.
///
/// `converged` is set when the last two successive differences are both at
/// most `tol · max(1, |a_last|)`.
pub fn extrapolate(terms: &[(u64, f64)], tol: f64) -> Result<LimitEstimate> {
    if terms.len() < 3 {
        return Err(Error::domain("extrapolation needs at least three terms"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("extrapolation tolerance must be positive"));
    }
    if terms.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::domain("schedule must be strictly increasing in n"));
    }
    if terms.iter().any(|t| !t.1.is_finite()) {
        return Err(Error::Numeric {
            message: "non-finite term in sequence".into(),
            partial_value: f64::NAN,
            error_estimate: f64::INFINITY,
            evaluations: terms.len(),
        });
    }

    let k = terms.len();
    let (v0, v1, v2) = (terms[k - 3].1, terms[k - 2].1, terms[k - 1].1);
    let d1 = v1 - v0;
    let d2 = v2 - v1;
    let scale = tol * v2.abs().max(1.0);
    let converged = d1.abs() <= scale && d2.abs() <= scale;

    let latest = tail(v0, v1, v2, terms[k - 2].0, terms[k - 1].0);
    let previous = if k >= 4 {
        tail(terms[k - 4].1, v0, v1, terms[k - 3].0, terms[k - 2].0)
    } else {
        None
    };

    // The refined value is accepted only when two successive tail fits agree
    // better than the raw last difference.
    let (value, error_estimate, fit) = match (latest, previous) {
        (Some((l2, q2)), Some((l1, q1)))
            if (l2 - l1).abs() <= d2.abs() && (q2 - q1).abs() <= 0.25 * q2.abs().max(0.1) =>
        {
            (
                l2,
                (l2 - l1).abs(),
                Some(TailFit {
                    exponent: q2,
                    correction: l2 - v2,
                }),
            )
        }
        _ => (v2, d2.abs(), None),
    };

    let tag = if converged {
        None
    } else if d1 * d2 < 0.0 && d2.abs() >= 0.5 * d1.abs() {
        Some(Divergence::Oscillating)
    } else if d2.abs() >= d1.abs() {
        Some(Divergence::Divergent)
    } else {
        Some(Divergence::Slow)
    };

    Ok(LimitEstimate {
        value,
        error_estimate,
        converged,
        tag,
        fit,
        terms: terms.to_vec(),
    })
}

/// Least-squares decay exponent `q` in `|a_n| ≈ C n^-q`.
///
/// Terms that are exactly zero are skipped; returns `None` with fewer than two
/// usable terms.
pub fn decay_exponent(terms: &[(u64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = terms
        .iter()
        .filter(|t| t.1 != 0.0 && t.1.is_finite())
        .map(|t| ((t.0 as f64).ln(), t.1.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(-sxy / sxx)
}
