//! Scattering off the point interaction induced by `V₀ (δ⊗δ)_(α,β)`.
//!
//! Units are `ħ = mass = 1`, so `H = -½ d²/dx² + g δ(x)` and `E = k²/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mollifier::Mollifier;
use crate::product::{closed_form, critical_alpha};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingSource {
    /// `α = 2β`: `g = V₀ A₂ / π`.
    Critical,
    /// `α > 2β`: the product vanishes.
    Supercritical,
    /// `d ≠ 0`: the two deltas never overlap; free particle.
    Separated,
}

/// `g δ(x)` point interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointInteraction {
    pub g: f64,
    pub source: CouplingSource,
}

impl PointInteraction {
    pub fn new(g: f64) -> Self {
        let source = if g == 0.0 {
            CouplingSource::Supercritical
        } else {
            CouplingSource::Critical
        };
        Self { g, source }
    }

    /// Bound-state energy `-g²/2` for attractive couplings.
    pub fn bound_state_energy(&self) -> Option<f64> {
        (self.g < 0.0).then(|| -0.5 * self.g * self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringSolution {
    pub k: f64,
    pub amplitude: Complex64,
    pub r: Complex64,
    pub t: Complex64,
    pub energy: f64,
}

/// Coupling of `V₀ δ(x) δ(x - d)` under the `(α, β)` regularization.
pub fn effective_coupling(
    v0: f64,
    alpha: f64,
    beta: f64,
    phi: &Mollifier,
    d: f64,
) -> Result<PointInteraction> {
    if phi.m() <= 1 {
        return Err(Error::precondition(format!(
            "needs an even m > 1, got m = {}",
            phi.m()
        )));
    }
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::domain(format!("β must be positive, got {beta}")));
    }
    let crit = critical_alpha(0, 0, beta);
    if alpha < crit && (crit - alpha) > 1e-12 * crit {
        return Err(Error::outside_validity(format!(
            "α must be at least 2β = {crit}, got {alpha}"
        )));
    }
    if d != 0.0 {
        return Ok(PointInteraction {
            g: 0.0,
            source: CouplingSource::Separated,
        });
    }
    if (alpha - crit).abs() <= 1e-12 * crit {
        let a2 = phi.moment(2)?.value;
        Ok(PointInteraction {
            g: v0 / PI * a2,
            source: CouplingSource::Critical,
        })
    } else {
        Ok(PointInteraction {
            g: 0.0,
            source: CouplingSource::Supercritical,
        })
    }
}

/// Coupling of `V₀ δ^(l)(x) δ^(k)(x)` from the closed-form table, when known.
pub fn generalized_coupling(
    v0: f64,
    l: u32,
    k: u32,
    alpha: f64,
    beta: f64,
    phi: &Mollifier,
) -> Result<Option<PointInteraction>> {
    let cov = closed_form(l, k, alpha, beta, phi)?;
    Ok(cov.closed_form().map(|cf| {
        let g = cf.coefficient * v0;
        PointInteraction {
            g,
            source: if g == 0.0 {
                CouplingSource::Supercritical
            } else {
                CouplingSource::Critical
            },
        }
    }))
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "wavenumber k must be positive, got {k}"
        )))
    }
}

/// `(r, t) = (g/(ik - g), ik/(ik - g))`.
pub fn scattering_coefficients(pi: &PointInteraction, k: f64) -> Result<(Complex64, Complex64)> {
    check_k(k)?;
    let ik = Complex64::new(0.0, k);
    let denom = ik - pi.g;
    Ok((pi.g / denom, ik / denom))
}

pub fn solve(pi: &PointInteraction, k: f64, amplitude: Complex64) -> Result<ScatteringSolution> {
    let (r, t) = scattering_coefficients(pi, k)?;
    Ok(ScatteringSolution {
        k,
        amplitude,
        r,
        t,
        energy: 0.5 * k * k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl ScatteringSolution {
    /// `d^j Ψ/dx^j` of the left (`x < 0`) or right (`x > 0`) branch, continued
    /// to any `x`.
    pub fn branch(&self, side: Side, x: f64, order: u32) -> Complex64 {
        let ik = Complex64::new(0.0, self.k);
        let fwd = ik.powu(order) * (ik * x).exp();
        match side {
            Side::Left => {
                let back = (-ik).powu(order) * (-ik * x).exp();
                self.amplitude * (fwd + self.r * back)
            }
            Side::Right => self.amplitude * self.t * fwd,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if x < 0.0 {
            self.branch(Side::Left, x, 0)
        } else {
            self.branch(Side::Right, x, 0)
        }
    }
}

/// `Ψ(x)`: incident plus reflected wave for `x < 0`, transmitted for `x > 0`.
pub fn scattering_state(
    pi: &PointInteraction,
    k: f64,
    amplitude: Complex64,
    x: f64,
) -> Result<Complex64> {
    Ok(solve(pi, k, amplitude)?.eval(x))
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingReport {
    pub g: f64,
    pub k: f64,
    pub continuity_gap: f64,
    pub jump_residual: f64,
    pub free_equation_residual: f64,
    pub probability_defect: f64,
    pub bound_state_energy: Option<f64>,
    pub passed: bool,
}

const CONTINUITY_TOL: f64 = 1e-12;
const JUMP_TOL: f64 = 1e-10;
const FREE_EQ_TOL: f64 = 1e-12;

/// Checks continuity at 0, the derivative jump `Ψ'(0+) - Ψ'(0-) = 2gΨ(0)`,
/// and `-½Ψ'' = EΨ` on both branches.
pub fn verify_matching(pi: &PointInteraction, k: f64) -> Result<MatchingReport> {
    if pi.g == 0.0 {
        return Err(Error::precondition(
            "matching conditions need a nonzero coupling",
        ));
    }
    let sol = solve(pi, k, Complex64::new(1.0, 0.0))?;
    let left0 = sol.branch(Side::Left, 0.0, 0);
    let right0 = sol.branch(Side::Right, 0.0, 0);
    let continuity_gap = (left0 - right0).norm();
    let jump = sol.branch(Side::Right, 0.0, 1) - sol.branch(Side::Left, 0.0, 1);
    let jump_residual = (jump - 2.0 * pi.g * right0).norm() / (1.0 + (2.0 * pi.g * right0).norm());

    let mut free_equation_residual: f64 = 0.0;
    for i in 1..=10 {
        let x = 0.37 * f64::from(i);
        for (side, xs) in [(Side::Left, -x), (Side::Right, x)] {
            let lhs = -0.5 * sol.branch(side, xs, 2);
            let rhs = sol.energy * sol.branch(side, xs, 0);
            let scale = 1.0 + rhs.norm();
            free_equation_residual = free_equation_residual.max((lhs - rhs).norm() / scale);
        }
    }
    let probability_defect = (sol.r.norm_sqr() + sol.t.norm_sqr() - 1.0).abs();
    let passed = continuity_gap <= CONTINUITY_TOL
        && jump_residual <= JUMP_TOL
        && free_equation_residual <= FREE_EQ_TOL
        && probability_defect <= CONTINUITY_TOL;
    Ok(MatchingReport {
        g: pi.g,
        k,
        continuity_gap,
        jump_residual,
        free_equation_residual,
        probability_defect,
        bound_state_energy: pi.bound_state_energy(),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_regimes() {
        let phi = Mollifier::new(6).unwrap();
        let a2 = phi.moment(2).unwrap().value;
        let c = effective_coupling(1.0, 2.0, 1.0, &phi, 0.0).unwrap();
        assert_eq!(c.source, CouplingSource::Critical);
        assert_eq!(c.g, 1.0 / PI * a2);
        let c = effective_coupling(1.0, 3.0, 1.0, &phi, 0.0).unwrap();
        assert_eq!((c.g, c.source), (0.0, CouplingSource::Supercritical));
        let c = effective_coupling(5.0, 2.0, 1.0, &phi, 0.7).unwrap();
        assert_eq!((c.g, c.source), (0.0, CouplingSource::Separated));
        assert!(matches!(
            effective_coupling(1.0, 1.0, 1.0, &phi, 0.0),
            Err(Error::OutsideValidity(_))
        ));
        let phi0 = Mollifier::new(0).unwrap();
        assert!(effective_coupling(1.0, 2.0, 1.0, &phi0, 0.0).is_err());
    }

    #[test]
    fn free_particle() {
        let free = PointInteraction::new(0.0);
        let (r, t) = scattering_coefficients(&free, 1.3).unwrap();
        assert_eq!(r, Complex64::new(0.0, 0.0));
        assert_eq!(t, Complex64::new(1.0, 0.0));
        for x in [-2.0, -0.1, 0.0, 0.5, 3.0] {
            let v = scattering_state(&free, 1.3, Complex64::new(2.0, 0.0), x).unwrap();
            assert!((v.norm() - 2.0).abs() < 1e-15);
        }
        assert!(scattering_coefficients(&free, 0.0).is_err());
        assert!(scattering_coefficients(&free, -1.0).is_err());
    }

    #[test]
    fn transmitted_value_at_one() {
        let phi = Mollifier::new(6).unwrap();
        let pi = effective_coupling(1.0, 2.0, 1.0, &phi, 0.0).unwrap();
        let a = Complex64::new(0.5, -0.25);
        let (_, t) = scattering_coefficients(&pi, 1.0).unwrap();
        let v = scattering_state(&pi, 1.0, a, 1.0).unwrap();
        let expected = t * Complex64::new(0.0, 1.0).exp() * a;
        assert!((v - expected).norm() < 1e-15);
        let left = scattering_state(&pi, 1.0, a, -1e-300).unwrap();
        let right = scattering_state(&pi, 1.0, a, 1e-300).unwrap();
        assert!((left - right).norm() < 1e-15);
    }

    #[test]
    fn matching_checks() {
        let phi = Mollifier::new(6).unwrap();
        let pi = effective_coupling(1.0, 2.0, 1.0, &phi, 0.0).unwrap();
        assert!(verify_matching(&pi, 2.0).unwrap().passed);
        let attractive = PointInteraction::new(-1.0);
        let rep = verify_matching(&attractive, 1.0).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.bound_state_energy, Some(-0.5));
        assert!(matches!(
            verify_matching(&PointInteraction::new(0.0), 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn transmission_rises_with_k() {
        let pi = PointInteraction::new(0.8);
        let mut last = 0.0;
        for i in 1..=50 {
            let (_, t) = scattering_coefficients(&pi, 0.2 * f64::from(i)).unwrap();
            assert!(t.norm_sqr() > last);
            last = t.norm_sqr();
        }
    }

    #[test]
    fn generalized_couplings_follow_the_table() {
        let phi = Mollifier::new(6).unwrap();
        let g = generalized_coupling(2.0, 2, 2, 6.0, 1.0, &phi)
            .unwrap()
            .unwrap();
        assert_eq!(g.g, 2.0 * 120.0 * phi.moment(6).unwrap().value / PI);
        let z = generalized_coupling(2.0, 0, 1, 3.0, 1.0, &phi)
            .unwrap()
            .unwrap();
        assert_eq!(z.g, 0.0);
        let g00 = generalized_coupling(1.5, 0, 0, 2.0, 1.0, &phi)
            .unwrap()
            .unwrap();
        let direct = effective_coupling(1.5, 2.0, 1.0, &phi, 0.0).unwrap();
        assert!((g00.g - direct.g).abs() <= 1e-15 * direct.g.abs());
    }
}
