//! Distributions handled by the engine and their exact pairing with test
//! functions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::QuadConfig;
use crate::test_function::TestFunction;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A continuous function with compact support `[a, b]`.
///
/// The evaluator is clamped to zero outside the support. Interior points
/// where the function is not smooth (kinks) can be declared so quadratures
/// split there.
#[derive(Clone)]
pub struct ContinuousFn {
    f: Evaluator,
    support: (f64, f64),
    kinks: Vec<f64>,
    label: String,
}

impl fmt::Debug for ContinuousFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuousFn")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("kinks", &self.kinks)
            .finish()
    }
}

impl ContinuousFn {
    pub fn new<F>(a: f64, b: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::domain(format!(
                "support [{a}, {b}] must be a finite interval with a < b"
            )));
        }
        Ok(Self {
            f: Arc::new(f),
            support: (a, b),
            kinks: Vec::new(),
            label: "custom".into(),
        })
    }

    pub fn with_kinks(mut self, kinks: impl IntoIterator<Item = f64>) -> Self {
        let (a, b) = self.support;
        self.kinks = kinks.into_iter().filter(|k| *k > a && *k < b).collect();
        self.kinks.sort_by(f64::total_cmp);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Triangular hat of height `h` peaking at `c`, support `[c - w, c + w]`.
    pub fn hat(c: f64, w: f64, h: f64) -> Result<Self> {
        Ok(
            Self::new(c - w, c + w, move |x| h * (1.0 - (x - c).abs() / w))?
                .with_kinks([c])
                .with_label(format!("hat:c={c},w={w},h={h}")),
        )
    }

    /// Clamped parabola `h (1 - ((x - c)/w)²)` on `[c - w, c + w]`.
    pub fn parabola(c: f64, w: f64, h: f64) -> Result<Self> {
        Ok(Self::new(c - w, c + w, move |x| {
            let u = (x - c) / w;
            h * (1.0 - u * u)
        })?
        .with_label(format!("parab:c={c},w={w},h={h}")))
    }

    /// Identically zero on `[a, b]`.
    pub fn zero(a: f64, b: f64) -> Result<Self> {
        Ok(Self::new(a, b, |_| 0.0)?.with_label(format!("zero:a={a},b={b}")))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.support;
        if x < a || x > b {
            0.0
        } else {
            (self.f)(x)
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    /// Support endpoints followed by interior kinks.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = vec![self.support.0, self.support.1];
        out.extend_from_slice(&self.kinks);
        out
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// The distributions the product machinery accepts.
#[derive(Debug, Clone)]
pub enum Distribution {
    /// `δ^(order)` at the origin.
    DeltaDerivative { order: u32 },
    /// A compactly supported continuous function.
    CompactContinuous(ContinuousFn),
}

impl Distribution {
    pub fn delta(order: u32) -> Self {
        Distribution::DeltaDerivative { order }
    }

    pub fn delta_order(&self) -> Option<u32> {
        match self {
            Distribution::DeltaDerivative { order } => Some(*order),
            Distribution::CompactContinuous(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Distribution::DeltaDerivative { order: 0 } => "delta".into(),
            Distribution::DeltaDerivative { order } => format!("delta^({order})"),
            Distribution::CompactContinuous(f) => f.label().to_string(),
        }
    }
}

impl From<ContinuousFn> for Distribution {
    fn from(f: ContinuousFn) -> Self {
        Distribution::CompactContinuous(f)
    }
}

/// Parses `delta`, `delta:k=<int>`, `hat:c=..,w=..,h=..`,
/// `parab:c=..,w=..,h=..` or `zero:a=..,b=..`.
impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let mut fields = HashMap::new();
        for field in body.split(',').filter(|f| !f.trim().is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{field}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad number `{value}`: {e}")))?;
            fields.insert(key.trim().to_string(), value);
        }
        let allowed: &[&str] = match kind {
            "delta" => &["k"],
            "hat" | "parab" => &["c", "w", "h"],
            "zero" => &["a", "b"],
            other => return Err(Error::Parse(format!("unknown distribution kind `{other}`"))),
        };
        if let Some(key) = fields.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown field `{key}` for `{kind}`")));
        }
        let get = |key: &str| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| Error::Parse(format!("missing field `{key}` in `{s}`")))
        };
        let parsed = match kind {
            "delta" => {
                let k = fields.get("k").copied().unwrap_or(0.0);
                if k < 0.0 || k.fract() != 0.0 || k > f64::from(u32::MAX) {
                    return Err(Error::Parse(format!(
                        "δ order must be a non-negative integer, got {k}"
                    )));
                }
                return Ok(Distribution::delta(k as u32));
            }
            "hat" => ContinuousFn::hat(get("c")?, get("w")?, get("h")?),
            "parab" => ContinuousFn::parabola(get("c")?, get("w")?, get("h")?),
            _ => ContinuousFn::zero(get("a")?, get("b")?),
        };
        parsed
            .map(Distribution::CompactContinuous)
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Reference value `T(Ψ)`.
///
/// `δ^(k)` gives `(-1)^k Ψ^(k)(0)`; a continuous `T` is integrated against
/// `Ψ` over the intersection of the supports.
pub fn exact_pairing(t: &Distribution, psi: &TestFunction) -> Result<f64> {
    match t {
        Distribution::DeltaDerivative { order } => {
            let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * psi.eval(0.0, *order as usize)?)
        }
        Distribution::CompactContinuous(f) => {
            let (fa, fb) = f.support();
            let (pa, pb) = psi.support();
            let (a, b) = (fa.max(pa), fb.min(pb));
            if a >= b {
                return Ok(0.0);
            }
            let mut splits = f.kinks().to_vec();
            splits.push(psi.center());
            Ok(QuadConfig::with_tols(1e-13, 1e-12)
                .integrate(|x| f.eval(x) * psi.value(x), a, b, &splits)?
                .value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E_INV: f64 = 0.36787944117144233;

    #[test]
    fn literals() {
        assert_eq!(
            Distribution::from_str("delta").unwrap().delta_order(),
            Some(0)
        );
        assert_eq!(
            Distribution::from_str("delta:k=2").unwrap().delta_order(),
            Some(2)
        );
        let hat: Distribution = "hat:c=0.25,w=1.5,h=2".parse().unwrap();
        assert_eq!(hat.label(), "hat:c=0.25,w=1.5,h=2");
        let Distribution::CompactContinuous(f) = hat else {
            panic!()
        };
        assert_eq!(f.eval(0.25), 2.0);
        assert!("parab:c=0,w=2".parse::<Distribution>().is_err());
        assert!("delta:k=1.5".parse::<Distribution>().is_err());
        assert!("hat:c=0,w=-1,h=1".parse::<Distribution>().is_err());
        assert!("gauss:s=1".parse::<Distribution>().is_err());
        assert!("zero:a=0,b=1,q=3".parse::<Distribution>().is_err());
    }

    #[test]
    fn delta_pairings() {
        let psi = TestFunction::standard();
        assert_eq!(exact_pairing(&Distribution::delta(0), &psi).unwrap(), E_INV);
        let x_bump = TestFunction::new(0.0, 1.0, vec![0.0, 1.0]).unwrap();
        let v = exact_pairing(&Distribution::delta(1), &x_bump).unwrap();
        assert!((v + E_INV).abs() < 1e-15);
    }

    #[test]
    fn pairing_agrees_with_finite_differences() {
        let psi = TestFunction::new(0.1, 1.2, vec![1.0, 0.5, -0.3]).unwrap();
        let h: f64 = 1e-4;
        // central differences of order k with step h
        let fd = |k: u32| -> f64 {
            let coeffs: &[f64] = match k {
                0 => &[1.0],
                1 => &[-0.5, 0.0, 0.5],
                2 => &[1.0, -2.0, 1.0],
                _ => unreachable!(),
            };
            let half = (coeffs.len() / 2) as f64;
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * psi.value((i as f64 - half) * h))
                .sum::<f64>()
                / h.powi(k as i32)
        };
        for k in 0..3u32 {
            let exact = exact_pairing(&Distribution::delta(k), &psi).unwrap();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let reference = sign * fd(k);
            assert!(
                ((exact - reference) / exact).abs() < 1e-6,
                "k={k}: {exact} vs {reference}"
            );
        }
    }

    #[test]
    fn continuous_pairing_is_integral_of_test_function() {
        let one = ContinuousFn::new(-1.0, 1.0, |_| 1.0).unwrap();
        let psi = TestFunction::standard();
        let v = exact_pairing(&one.into(), &psi).unwrap();
        // ∫ B over [-1, 1]
        assert!((v - 0.443993816168079).abs() < 1e-12);
    }

    #[test]
    fn evaluator_is_clamped() {
        let f = ContinuousFn::new(-1.0, 1.0, |x| x + 5.0).unwrap();
        assert_eq!(f.eval(1.5), 0.0);
        assert_eq!(f.eval(0.0), 5.0);
        assert!(ContinuousFn::new(1.0, 1.0, |x| x).is_err());
    }
}
