//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature with
//! caller-supplied breakpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

// Abscissae of the 21-point Kronrod rule (non-negative half, descending).
// Odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208643074341,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Outcome of a successful quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Tolerances and subdivision budget for [`QuadConfig::integrate`].
///
/// Success means `error_estimate <= max(abs_tol, rel_tol * |value|)`.
/// With `rel_to_magnitude`, `|value|` is replaced by the estimate of `∫|f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    pub rel_to_magnitude: bool,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            rel_to_magnitude: false,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    magnitude: f64,
    /// The error estimate sits at the rounding floor of the rule.
    at_floor: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> (f64, bool) {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        if floor >= scaled {
            return (floor, true);
        }
    }
    (scaled, false)
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center)?;
    let mut res_k = WGK[10] * f_center;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        if !(f1.is_finite() && f2.is_finite()) {
            return Err(non_finite(center - dx));
        }
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !f_center.is_finite() {
        return Err(non_finite(center));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let err = (res_k - res_g) * half;
    let (error, at_floor) = rescale_error(err, res_abs * half.abs(), res_asc * half.abs());
    Ok(Segment {
        a,
        b,
        value,
        error,
        magnitude: res_abs * half.abs(),
        at_floor,
    })
}

fn non_finite(x: f64) -> Error {
    Error::Numeric {
        message: format!("integrand is not finite at x = {x:e}"),
        partial_value: f64::NAN,
        error_estimate: f64::INFINITY,
        evaluations: 0,
    }
}

impl QuadConfig {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn relative_to_magnitude(self) -> Self {
        Self {
            rel_to_magnitude: true,
            ..self
        }
    }

    /// Integrates an infallible integrand over `[a, b]`.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64, split_points: &[f64]) -> Result<QuadResult>
    where
        F: FnMut(f64) -> f64,
    {
        self.try_integrate(|x| Ok(f(x)), a, b, split_points)
    }

    /// Integrates an integrand that may itself fail (e.g. nested quadrature).
    pub fn try_integrate<F>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        split_points: &[f64],
    ) -> Result<QuadResult>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::domain(format!(
                "quadrature interval [{a}, {b}] is empty or infinite"
            )));
        }
        if !(self.abs_tol > 0.0 || self.rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerance must be positive"));
        }

        let mut breaks: Vec<f64> = split_points
            .iter()
            .copied()
            .filter(|p| p.is_finite() && *p > a && *p < b)
            .collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut nodes = Vec::with_capacity(breaks.len() + 2);
        nodes.push(a);
        nodes.extend(breaks);
        nodes.push(b);

        let mut heap = BinaryHeap::new();
        let mut done = Vec::new();
        let mut evaluations = 0usize;
        let (mut total, mut total_err, mut total_mag) = (0.0, 0.0, 0.0);
        for w in nodes.windows(2) {
            if w[1] - w[0] <= 0.0 {
                continue;
            }
            let seg = gk21(&mut f, w[0], w[1])?;
            evaluations += 21;
            total += seg.value;
            total_err += seg.error;
            total_mag += seg.magnitude;
            heap.push(seg);
        }

        let target = |value: f64, mag: f64| {
            let scale = if self.rel_to_magnitude {
                mag.max(value.abs())
            } else {
                value.abs()
            };
            self.abs_tol.max(self.rel_tol * scale)
        };
        while total_err > target(total, total_mag) {
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            // Rounding-limited or too small to split further: freeze it.
            if worst.at_floor
                || mid <= worst.a
                || mid >= worst.b
                || (worst.b - worst.a) < 1e3 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
            {
                done.push(worst);
                if heap.is_empty() {
                    break;
                }
                continue;
            }
            if heap.len() + done.len() + 1 >= self.max_intervals {
                heap.push(worst);
                return Err(Error::Numeric {
                    message: format!(
                        "subdivision budget of {} intervals exhausted on [{a}, {b}]",
                        self.max_intervals
                    ),
                    partial_value: total,
                    error_estimate: total_err,
                    evaluations,
                });
            }
            let left = gk21(&mut f, worst.a, mid)?;
            let right = gk21(&mut f, mid, worst.b)?;
            evaluations += 42;
            total += left.value + right.value - worst.value;
            total_err += left.error + right.error - worst.error;
            total_mag += left.magnitude + right.magnitude - worst.magnitude;
            heap.push(left);
            heap.push(right);
        }

        // Resum to shed the drift of the running updates.
        let segments: Vec<Segment> = heap.into_iter().chain(done).collect();
        let value: f64 = {
            let mut vals: Vec<(f64, f64)> = segments.iter().map(|s| (s.a, s.value)).collect();
            vals.sort_by(|x, y| x.0.total_cmp(&y.0));
            vals.iter().map(|v| v.1).sum()
        };
        let error_estimate: f64 = segments.iter().map(|s| s.error).sum();
        let magnitude: f64 = segments.iter().map(|s| s.magnitude).sum();
        if error_estimate > target(value, magnitude) {
            return Err(Error::Numeric {
                message: format!("could not reach tolerance on [{a}, {b}] (roundoff limited)"),
                partial_value: value,
                error_estimate,
                evaluations,
            });
        }
        Ok(QuadResult {
            value,
            error_estimate,
            evaluations,
        })
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, splitting the
/// interval at every point of `split_points` that falls inside it.
pub fn adaptive_quad<F>(f: F, a: f64, b: f64, tol: f64, split_points: &[f64]) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    QuadConfig::with_abs_tol(tol).integrate(f, a, b, split_points)
}
