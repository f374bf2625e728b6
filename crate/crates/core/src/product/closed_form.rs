use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mollifier::Mollifier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Critical,
    Supercritical,
}

/// Where a closed-form value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// One of the six tabulated products of `δ`, `δ'`, `δ''`.
    Table,
    /// `α` is the critical exponent of a higher-order pair, which kills
    /// every lower-order product.
    Parity,
    /// `α > (l + k + 2)β`.
    GeneralRule,
}

/// `(δ^(l) ⊗ δ^(k))_(α,β) = coefficient · δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub coefficient: f64,
    pub regime: Regime,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Coverage {
    Covered(ClosedForm),
    /// Critical value for a pair outside the table: measurable, not known.
    NotCovered {
        critical_alpha: f64,
    },
}

impl Coverage {
    pub fn closed_form(&self) -> Option<&ClosedForm> {
        match self {
            Coverage::Covered(c) => Some(c),
            Coverage::NotCovered { .. } => None,
        }
    }
}

/// Critical exponent `(l + k + 2)β`.
pub fn critical_alpha(l: u32, k: u32, beta: f64) -> f64 {
    f64::from(l + k + 2) * beta
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Known value of `(δ^(l) ⊗ δ^(k))_(α,β)` as a multiple of `δ`.
pub fn closed_form(l: u32, k: u32, alpha: f64, beta: f64, phi: &Mollifier) -> Result<Coverage> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::domain("α and β must be positive"));
    }
    let m = phi.m();
    if m <= l + k + 1 {
        return Err(Error::precondition(format!(
            "δ^({l})⊗δ^({k}) needs an even m > {} (got m = {m})",
            l + k + 1
        )));
    }
    let critical = critical_alpha(l, k, beta);
    if same(alpha, critical) {
        let (lo, hi) = (l.min(k), l.max(k));
        let a = |j| phi.moment(j).map(|mo| mo.value);
        let coefficient = match (lo, hi) {
            (0, 0) => a(2)? / PI,
            (0, 1) | (1, 2) => 0.0,
            (1, 1) => -6.0 * a(4)? / PI,
            (0, 2) => 6.0 * a(4)? / PI,
            (2, 2) => 120.0 * a(6)? / PI,
            _ => {
                return Ok(Coverage::NotCovered {
                    critical_alpha: critical,
                })
            }
        };
        return Ok(Coverage::Covered(ClosedForm {
            coefficient,
            regime: Regime::Critical,
            source: Source::Table,
        }));
    }
    if alpha < critical {
        return Err(Error::outside_validity(format!(
            "δ^({l})⊗δ^({k}) requires α >= {critical} (= {}β), got α = {alpha}",
            l + k + 2
        )));
    }
    let ratio = alpha / beta - 2.0;
    let source = if same(ratio, ratio.round()) && ratio.round() as u32 > l + k {
        Source::Parity
    } else {
        Source::GeneralRule
    };
    Ok(Coverage::Covered(ClosedForm {
        coefficient: 0.0,
        regime: Regime::Supercritical,
        source,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries() {
        let phi = Mollifier::new(6).unwrap();
        let a2 = phi.moment(2).unwrap().value;
        let a6 = phi.moment(6).unwrap().value;
        let c = closed_form(0, 0, 2.0, 1.0, &phi).unwrap();
        assert_eq!(
            c,
            Coverage::Covered(ClosedForm {
                coefficient: a2 / PI,
                regime: Regime::Critical,
                source: Source::Table
            })
        );
        let c = closed_form(2, 2, 6.0, 1.0, &phi).unwrap();
        assert_eq!(c.closed_form().unwrap().coefficient, 120.0 * a6 / PI);
        // order of the factors is irrelevant
        assert_eq!(
            closed_form(2, 0, 2.0, 0.5, &phi).unwrap(),
            closed_form(0, 2, 2.0, 0.5, &phi).unwrap()
        );
        let c11 = closed_form(1, 1, 4.0, 1.0, &phi)
            .unwrap()
            .closed_form()
            .unwrap()
            .coefficient;
        let c02 = closed_form(0, 2, 4.0, 1.0, &phi)
            .unwrap()
            .closed_form()
            .unwrap()
            .coefficient;
        assert_eq!(c11, -c02);
    }

    #[test]
    fn below_critical_is_outside_validity() {
        let phi = Mollifier::new(6).unwrap();
        assert!(matches!(
            closed_form(0, 0, 1.5, 1.0, &phi),
            Err(Error::OutsideValidity(_))
        ));
    }

    #[test]
    fn supercritical_and_parity() {
        let phi = Mollifier::new(6).unwrap();
        let c = closed_form(0, 0, 3.0, 1.0, &phi).unwrap();
        let cf = c.closed_form().unwrap();
        assert_eq!(cf.coefficient, 0.0);
        assert_eq!(cf.regime, Regime::Supercritical);
        assert_eq!(cf.source, Source::Parity);
        let c = closed_form(0, 0, 2.5, 1.0, &phi).unwrap();
        assert_eq!(c.closed_form().unwrap().source, Source::GeneralRule);
    }

    #[test]
    fn pairs_outside_table() {
        let phi = Mollifier::new(8).unwrap();
        assert_eq!(
            closed_form(0, 3, 5.0, 1.0, &phi).unwrap(),
            Coverage::NotCovered {
                critical_alpha: 5.0
            }
        );
        assert_eq!(
            closed_form(0, 3, 6.0, 1.0, &phi)
                .unwrap()
                .closed_form()
                .unwrap()
                .coefficient,
            0.0
        );
    }

    #[test]
    fn needs_large_enough_m() {
        let phi = Mollifier::new(4).unwrap();
        assert!(matches!(
            closed_form(2, 2, 6.0, 1.0, &phi),
            Err(Error::Precondition(_))
        ));
    }
}
