//! Smooth compactly supported test functions `Ψ(x) = p(x)·B((x-c)/w)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bump::{binomial, bump_deriv};
use crate::error::{Error, Result};

/// Highest derivative order `eval` supports.
pub const MAX_TESTFN_DERIV: usize = 8;
/// Highest polynomial degree accepted for the prefactor `p`.
pub const MAX_POLY_DEGREE: usize = 8;

/// A test function in 𝒟 built from a polynomial times a scaled bump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    center: f64,
    width: f64,
    poly: Vec<f64>,
}

impl TestFunction {
    pub fn new(center: f64, width: f64, poly: Vec<f64>) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::domain("test function center must be finite"));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::domain(
                "test function width must be positive and finite",
            ));
        }
        if poly.is_empty() {
            return Err(Error::domain(
                "test function polynomial needs at least one coefficient",
            ));
        }
        if poly.len() > MAX_POLY_DEGREE + 1 {
            return Err(Error::domain(format!(
                "test function polynomial degree {} exceeds {MAX_POLY_DEGREE}",
                poly.len() - 1
            )));
        }
        if poly.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("test function coefficients must be finite"));
        }
        Ok(Self {
            center,
            width,
            poly,
        })
    }

    /// The plain bump `B(x)` on `[-1, 1]`, with `Ψ(0) = e⁻¹`.
    pub fn standard() -> Self {
        Self {
            center: 0.0,
            width: 1.0,
            poly: vec![1.0],
        }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn poly(&self) -> &[f64] {
        &self.poly
    }

    /// Closed support `[center - width, center + width]`.
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }

    /// `Ψ^(r)(x)`.
    pub fn eval(&self, x: f64, deriv_order: usize) -> Result<f64> {
        if deriv_order > MAX_TESTFN_DERIV {
            return Err(Error::UnsupportedOrder {
                order: deriv_order,
                max: MAX_TESTFN_DERIV,
            });
        }
        Ok(self.eval_unchecked(x, deriv_order))
    }

    /// `Ψ(x)`; infallible shorthand used inside integrands.
    pub fn value(&self, x: f64) -> f64 {
        self.eval_unchecked(x, 0)
    }

    fn eval_unchecked(&self, x: f64, r: usize) -> f64 {
        let u = (x - self.center) / self.width;
        if u.abs() >= 1.0 {
            return 0.0;
        }
        let inv_w = 1.0 / self.width;
        // Leibniz: Ψ^(r) = Σ C(r,i) p^(r-i)(x) w^-i B^(i)(u)
        let mut sum = 0.0;
        for i in 0..=r {
            let p = poly_deriv(&self.poly, x, r - i);
            if p == 0.0 {
                continue;
            }
            sum += binomial(r, i) * p * inv_w.powi(i as i32) * bump_deriv(u, i);
        }
        sum
    }

    /// `aΨ₁ + bΨ₂` when both share center and width.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.center != other.center || self.width != other.width {
            return Err(Error::domain(
                "linear combination needs test functions with the same center and width",
            ));
        }
        let n = self.poly.len().max(other.poly.len());
        let poly = (0..n)
            .map(|i| {
                a * self.poly.get(i).copied().unwrap_or(0.0)
                    + b * other.poly.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        Self::new(self.center, self.width, poly)
    }
}

fn poly_deriv(coeffs: &[f64], x: f64, order: usize) -> f64 {
    let mut acc = 0.0;
    for (i, &c) in coeffs.iter().enumerate().skip(order).rev() {
        let falling: f64 = (0..order).map(|j| (i - j) as f64).product();
        acc = acc * x + c * falling;
    }
    acc
}

impl Default for TestFunction {
    fn default() -> Self {
        Self::standard()
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly: Vec<String> = self.poly.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "bump:c={},w={},p={}",
            self.center,
            self.width,
            poly.join(";")
        )
    }
}

/// Parses `bump:c=<real>,w=<real>,p=<c0;c1;...>`.
impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().strip_prefix("bump:").ok_or_else(|| {
            Error::Parse(format!(
                "test function literal must start with `bump:`: {s}"
            ))
        })?;
        let (mut center, mut width, mut poly) = (None, None, None);
        for field in body.split(',') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{field}`")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad number `{v}`: {e}")))
            };
            match key.trim() {
                "c" => center = Some(parse(value)?),
                "w" => width = Some(parse(value)?),
                "p" => poly = Some(value.split(';').map(parse).collect::<Result<Vec<_>>>()?),
                other => {
                    return Err(Error::Parse(format!(
                        "unknown test function field `{other}`"
                    )))
                }
            }
        }
        let center = center.ok_or_else(|| Error::Parse("missing field c".into()))?;
        let width = width.ok_or_else(|| Error::Parse("missing field w".into()))?;
        let poly = poly.ok_or_else(|| Error::Parse("missing field p".into()))?;
        Self::new(center, width, poly).map_err(|e| Error::Parse(e.to_string()))
    }
}
