use std::io::Write;
use std::sync::Arc;

use distmul::{
    closed_form, critical_alpha, delta_red, effective_coupling, product_limit, red_continuous,
    red_from_cauchy, scattering_coefficients, scattering_state, sequential_only_divergence,
    verify_matching, verify_table as run_table, ContinuousFn, Coverage, Distribution,
    LimitEstimate, Mollifier, ProductQuery, Schedule, SeqParams, TableRow, TestFunction,
};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::failure::Failure;
use crate::output::{Emitter, Format};
use crate::record;
use crate::settings::*;
use crate::{
    ConsistencyArgs, DivergeArgs, LimitArgs, MomentsArgs, ProductArgs, RedArgs, ScatterArgs,
    SeqArgs, VerifyArgs,
};

const DEFAULT_F: &str = "parab:c=0,w=2,h=1";
const DEFAULT_G: &str = "hat:c=0.25,w=1.5,h=1";
const RED_CONTINUOUS_TOL: f64 = 1e-12;

fn to_value<T: serde::Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn parse_psi(literal: &str) -> Result<TestFunction, Failure> {
    Ok(literal.parse::<TestFunction>()?)
}

fn parse_dist(literal: &str) -> Result<Distribution, Failure> {
    Ok(literal.parse::<Distribution>()?)
}

fn continuous(literal: &str) -> Result<ContinuousFn, Failure> {
    match parse_dist(literal)? {
        Distribution::CompactContinuous(f) => Ok(f),
        Distribution::DeltaDerivative { .. } => Err(Failure::Usage(format!(
            "`{literal}` is not a continuous function"
        ))),
    }
}

/// `--k` or a `--t` literal, never both.
fn dist_or_delta(
    r: &mut Resolver,
    k: Option<u32>,
    t: Option<String>,
) -> Result<Distribution, Failure> {
    let k = r.optional("k", k)?;
    let t = r.optional("t", t)?;
    match (k, t) {
        (Some(_), Some(_)) => Err(Failure::Usage("give either --k or --t, not both".into())),
        (_, Some(lit)) => parse_dist(&lit),
        (k, None) => Ok(Distribution::delta(k.unwrap_or(0))),
    }
}

struct LimitSettings {
    schedule: Schedule,
    tol: f64,
}

fn limit_settings(r: &mut Resolver, a: LimitArgs) -> Result<LimitSettings, Failure> {
    let n0 = r.get("n0", a.n0, DEFAULT_N0)?;
    let steps = r.get("steps", a.steps, DEFAULT_STEPS)?;
    let tol = r.get("tol", a.tol, DEFAULT_TOL)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let schedule = Schedule::new(n0, steps)?;
    if steps < 4 {
        return Err(Failure::Usage("limits need --steps >= 4".into()));
    }
    Ok(LimitSettings { schedule, tol })
}

fn limit_record(est: &LimitEstimate) -> Map<String, Value> {
    let terms: Vec<Value> = est
        .terms
        .iter()
        .map(|(n, v)| json!({"n": n, "term": v}))
        .collect();
    record! {
        "terms" => terms,
        "value" => est.value,
        "error_estimate" => est.error_estimate,
        "converged" => est.converged,
        "tag" => to_value(est.tag),
        "fit_exponent" => est.fit.map(|f| f.exponent),
    }
}

pub fn moments<W: Write>(
    a: MomentsArgs,
    config: ConfigFile,
    format: Format,
    out: W,
) -> Result<(), Failure> {
    let mut r = Resolver::new("moments", config);
    let m = r.get("m", a.m, DEFAULT_M)?;
    let j = r.optional("j", a.j)?;
    let echo = r.finish(format.name())?;
    let phi = Mollifier::new(m)?;
    let js: Vec<u32> = match j {
        Some(j) => vec![j],
        None => (1..=m).collect(),
    };
    let values = js
        .iter()
        .map(|&j| phi.moment(j).map(|mo| (j, mo.value)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut e = Emitter::new(format, echo, &["m", "j", "A_j", "F"], out);
    if values.is_empty() {
        e.emit(record! {"m" => m, "j" => Value::Null, "A_j" => Value::Null, "F" => phi.norm()})?;
    }
    for (j, v) in values {
        e.emit(record! {"m" => m, "j" => j, "A_j" => v, "F" => phi.norm()})?;
    }
    e.finish()?;
    Ok(())
}

pub fn red<W: Write>(
    a: RedArgs,
    config: ConfigFile,
    format: Format,
    out: W,
) -> Result<(), Failure> {
    let mut r = Resolver::new("red", config);
    let t = dist_or_delta(&mut r, a.k, a.t)?;
    let eps = r.require("eps", a.eps)?;
    let grid = r.require("grid", a.grid)?;
    let echo = r.finish(format.name())?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Failure::Usage(format!("--eps must be positive, got {eps}")));
    }
    let rows = grid
        .points()
        .into_iter()
        .map(|x| -> Result<(f64, f64, Option<f64>), Failure> {
            Ok(match &t {
                Distribution::DeltaDerivative { order } => (
                    x,
                    delta_red(*order, x, eps)?,
                    Some(red_from_cauchy(*order, x, eps)?),
                ),
                Distribution::CompactContinuous(f) => {
                    (x, red_continuous(f, x, eps, RED_CONTINUOUS_TOL)?, None)
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let label = t.label();
    let mut e = Emitter::new(format, echo, &["x", "value", "from_cauchy"], out);
    for (x, v, c) in rows {
        e.emit(record! {"t" => label, "eps" => eps, "x" => x, "value" => v, "from_cauchy" => c})?;
    }
    e.finish()?;
    Ok(())
}

pub fn seq<W: Write>(
    a: SeqArgs,
    config: ConfigFile,
    format: Format,
    out: W,
) -> Result<(), Failure> {
    let mut r = Resolver::new("seq", config);
    let t = dist_or_delta(&mut r, a.k, a.t)?;
    let m = r.get("m", a.m, DEFAULT_M)?;
    let beta = r.get("beta", a.beta, DEFAULT_BETA)?;
    let n = r.require("n", a.n)?;
    let grid = r.require("grid", a.grid)?;
    let echo = r.finish(format.name())?;
    let phi = Mollifier::new(m)?;
    let p = SeqParams::new(beta, n)?;
    let rows = grid
        .points()
        .into_iter()
        .map(|x| -> Result<(f64, f64), Failure> {
            Ok(match &t {
                Distribution::DeltaDerivative { order } => {
                    (x, distmul::conv_delta_deriv(*order, &phi, p, x)?)
                }
                Distribution::CompactContinuous(f) => (x, distmul::conv_function(f, &phi, p, x)?),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let label = t.label();
    let mut e = Emitter::new(format, echo, &["x", "value"], out);
    for (x, v) in rows {
        e.emit(record! {"t" => label, "n" => n, "x" => x, "value" => v})?;
    }
    e.finish()?;
    Ok(())
}

fn factor(
    r: &mut Resolver,
    order_key: &str,
    order: Option<u32>,
    lit_key: &str,
    lit: Option<String>,
) -> Result<Distribution, Failure> {
    let order = r.optional(order_key, order)?;
    let lit = r.optional(lit_key, lit)?;
    match (order, lit) {
        (Some(_), Some(_)) => Err(Failure::Usage(format!(
            "give either --{order_key} or --{lit_key}, not both"
        ))),
        (Some(k), None) => Ok(Distribution::delta(k)),
        (None, Some(l)) => parse_dist(&l),
        (None, None) => Err(Failure::Usage(format!(
            "missing required parameter --{order_key} (or --{lit_key})"
        ))),
    }
}

pub fn product<W: Write>(
    a: ProductArgs,
    config: ConfigFile,
    format: Format,
    out: W,
) -> Result<(), Failure> {
    let mut r = Resolver::new("product", config);
    let s = factor(&mut r, "l", a.l, "s", a.s)?;
    let t = factor(&mut r, "k", a.k, "t", a.t)?;
    let alpha = r.require("alpha", a.alpha)?;
    let beta = r.get("beta", a.beta, DEFAULT_BETA)?;
    let m = r.get("m", a.m, DEFAULT_M)?;
    let psi_lit = r.get("psi", a.psi, DEFAULT_PSI.to_string())?;
    let lim = limit_settings(&mut r, a.limit)?;
    let explore = r.switch("explore", a.explore)?;
    let echo = r.finish(format.name())?;

    let phi = Arc::new(Mollifier::new(m)?);
    let psi = parse_psi(&psi_lit)?;
    let q = ProductQuery::new(s.clone(), t.clone(), alpha, beta, phi.clone(), psi.clone())?
        .allow_small_m(explore);
    let pair = s.delta_order().zip(t.delta_order());
    let mut reference = None;
    let mut note = Value::Null;
    if let Some((l, k)) = pair {
        match closed_form(l, k, alpha, beta, &phi) {
            Ok(Coverage::Covered(cf)) => reference = Some(cf),
            Ok(Coverage::NotCovered { .. }) => {
                note = json!("no closed form for this pair; measured only")
            }
            Err(e) if explore && e.is_usage() => note = json!(format!("exploratory run: {e}")),
            Err(e) => return Err(e.into()),
        }
    }
    let est = product_limit(&q, lim.schedule, lim.tol)?;

    let (expected, allowed, verdict) = match reference {
        Some(cf) => {
            let expected = cf.coefficient * psi.value(0.0);
            let allowed = if expected == 0.0 {
                distmul::product::ZERO_TOL
            } else {
                lim.tol * expected.abs()
            };
            let passed = distmul::product::certified(&est, expected, allowed);
            (Some(expected), Some(allowed), status(passed))
        }
        None => (None, None, "UNVERIFIED"),
    };
    let columns: &[&str] = &[
        "n",
        "term",
        "value",
        "error_estimate",
        "converged",
        "expected",
        "status",
    ];
    let mut e = Emitter::new(format, echo, columns, out);
    if format == Format::Csv {
        for (n, term) in &est.terms {
            e.emit(record! {
                "n" => n, "term" => term, "value" => est.value, "error_estimate" => est.error_estimate,
                "converged" => est.converged, "expected" => expected, "status" => verdict,
            })?;
        }
    } else {
        let mut rec = record! {
            "s" => s.label(),
            "t" => t.label(),
            "alpha" => alpha,
            "beta" => beta,
            "m" => m,
            "critical_alpha" => pair.map(|(l, k)| critical_alpha(l, k, beta)),
        };
        rec.extend(limit_record(&est));
        rec.extend(record! {
            "reference" => reference.map(to_value),
            "expected" => expected,
            "allowed" => allowed,
            "note" => note,
            "status" => verdict,
        });
        e.emit(rec)?;
    }
    e.finish()?;
    if verdict == "FAIL" {
        return Err(Failure::Verification(format!(
            "measured {} vs closed form {}",
            est.value,
            expected.unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

fn row_record(row: &TableRow) -> Map<String, Value> {
    record! {
        "alpha" => row.alpha,
        "regime" => to_value(row.regime),
        "expected" => row.expected,
        "measured" => row.measured,
        "error_estimate" => row.error_estimate,
        "converged" => row.converged,
        "allowed" => row.allowed,
        "status" => status(row.passed),
    }
}

pub fn verify_table<W: Write>(
    a: VerifyArgs,
    config: ConfigFile,
    format: Format,
    out: W,
) -> Result<(), Failure> {
    let mut r = Resolver::new("verify-table", config);
    let m = r.get("m", a.m, DEFAULT_M)?;
    let beta = r.get("beta", a.beta, DEFAULT_BETA)?;
    let psi_lit = r.get("psi", a.psi, DEFAULT_PSI.to_string())?;
    let lim = limit_settings(&mut r, a.limit)?;
    let echo = r.finish(format.name())?;
    let psi = parse_psi(&psi_lit)?;
    let report = run_table(m, beta, &psi, lim.tol, lim.schedule)?;

    let columns: &[&str] = &[
        "check",
        "l",
        "k",
        "alpha",
        "regime",
        "expected",
        "measured",
        "error_estimate",
        "converged",
        "allowed",
        "status",
    ];
    let mut e = Emitter::new(format, echo, columns, out);
    if format == Format::Csv {
        for row in &report.rows {
            let mut rec = record! {"check" => "entry", "l" => row.l, "k" => row.k};
            rec.extend(row_record(row));
            e.emit(rec)?;
        }
    } else {
        for pair in report.rows.chunks(2) {
            let (crit, sup) = (&pair[0], &pair[1]);
            e.emit(record! {
                "type" => "entry",
                "l" => crit.l,
                "k" => crit.k,
                "critical" => row_record(crit),
                "supercritical" => row_record(sup),
                "status" => status(crit.passed && sup.passed),
            })?;
        }
    }
    e.emit(record! {
        "type" => "cross",
        "check" => "cross",
        "measured" => report.cross.sum,
        "expected" => 0.0,
        "allowed" => report.cross.allowed,
        "status" => status(report.cross.passed),
    })?;
    let passed = report.passed();
    if format != Format::Csv {
        e.emit(record! {"type" => "summary", "m" => m, "beta" => beta, "tol" => lim.tol, "status" => status(passed)})?;
    }
    e.finish()?;
    if !passed {
        let failed =
            report.rows.iter().filter(|r| !r.passed).count() + usize::from(!report.cross.passed);
        return Err(Failure::Verification(format!("{failed} check(s) failed")));
    }
    Ok(())
}

pub fn consistency<W: Write>(
    a: ConsistencyArgs,
    config: ConfigFile,
    format: Format,
    out: W,
) -> Result<(), Failure> {
    let mut r = Resolver::new("consistency", config);
    let f_lit = r.get("f", a.f, DEFAULT_F.to_string())?;
    let g_lit = r.get("g", a.g, DEFAULT_G.to_string())?;
    let alphas = r.get("alpha", a.alpha, RealList(vec![1.0, 2.0, 3.0]))?;
    let beta = r.get("beta", a.beta, DEFAULT_BETA)?;
    let m = r.get("m", a.m, DEFAULT_M)?;
    let psi_lit = r.get("psi", a.psi, DEFAULT_PSI.to_string())?;
    let lim = limit_settings(&mut r, a.limit)?;
    let echo = r.finish(format.name())?;
    let (f, g) = (continuous(&f_lit)?, continuous(&g_lit)?);
    let psi = parse_psi(&psi_lit)?;
    let phi = Arc::new(Mollifier::new(m)?);
    for &alpha in &alphas.0 {
        ProductQuery::new(
            f.clone().into(),
            g.clone().into(),
            alpha,
            beta,
            phi.clone(),
            psi.clone(),
        )?;
    }
    let reports = alphas
        .0
        .iter()
        .map(|&alpha| {
            distmul::continuous_consistency(&f, &g, alpha, beta, &phi, &psi, lim.schedule, lim.tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let columns: &[&str] = &[
        "alpha",
        "beta",
        "limit",
        "direct",
        "difference",
        "error_estimate",
        "converged",
        "status",
    ];
    let mut e = Emitter::new(format, echo, columns, out);
    let mut failed = 0;
    for rep in &reports {
        let passed = rep.difference.abs() <= lim.tol && rep.limit.error_estimate <= lim.tol;
        failed += usize::from(!passed);
        let mut rec = record! {
            "f" => f.label(),
            "g" => g.label(),
            "alpha" => rep.alpha,
            "beta" => rep.beta,
            "limit" => rep.limit.value,
            "direct" => rep.direct,
            "difference" => rep.difference,
        };
        rec.extend(limit_record(&rep.limit));
        rec.remove("value");
        rec.insert("status".into(), json!(status(passed)));
        e.emit(rec)?;
    }
    e.finish()?;
    if failed > 0 {
        return Err(Failure::Verification(format!(
            "{failed} α value(s) disagree with ∫fgΨ"
        )));
    }
    Ok(())
}

pub fn scatter<W: Write>(
    a: ScatterArgs,
    config: ConfigFile,
    format: Format,
    out: W,
) -> Result<(), Failure> {
    let mut r = Resolver::new("scatter", config);
    let v0 = r.require("v0", a.v0)?;
    let beta = r.get("beta", a.beta, DEFAULT_BETA)?;
    let alpha = r.get("alpha", a.alpha, 2.0 * beta)?;
    let m = r.get("m", a.m, DEFAULT_M)?;
    let d = r.get("d", a.d, 0.0)?;
    let k = r.require("k", a.k)?;
    let grid = r.optional("grid", a.grid)?;
    let echo = r.finish(format.name())?;
    if !v0.is_finite() || !d.is_finite() {
        return Err(Failure::Usage("--V0 and --d must be finite".into()));
    }
    let phi = Mollifier::new(m)?;
    let pi = effective_coupling(v0, alpha, beta, &phi, d)?;
    let (rc, tc) = scattering_coefficients(&pi, k)?;
    let matching = if pi.g != 0.0 {
        Some(verify_matching(&pi, k)?)
    } else {
        None
    };
    let samples = match grid {
        Some(g) => g
            .points()
            .into_iter()
            .map(|x| scattering_state(&pi, k, Complex64::new(1.0, 0.0), x).map(|v| (x, v)))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };

    let summary = record! {
        "k" => k,
        "g" => pi.g,
        "source" => to_value(pi.source),
        "energy" => 0.5 * k * k,
        "r_re" => rc.re,
        "r_im" => rc.im,
        "t_re" => tc.re,
        "t_im" => tc.im,
        "R" => rc.norm_sqr(),
        "T" => tc.norm_sqr(),
    };
    let columns: &[&str] = &[
        "k", "g", "source", "energy", "r_re", "r_im", "t_re", "t_im", "R", "T", "x", "psi_re",
        "psi_im", "psi_abs2",
    ];
    let mut e = Emitter::new(format, echo, columns, out);
    if format == Format::Csv {
        if samples.is_empty() {
            e.emit(summary.clone())?;
        }
        for (x, v) in &samples {
            let mut rec = summary.clone();
            rec.extend(
                record! {"x" => x, "psi_re" => v.re, "psi_im" => v.im, "psi_abs2" => v.norm_sqr()},
            );
            e.emit(rec)?;
        }
    } else {
        let mut rec = record! {"type" => "coefficients"};
        rec.extend(summary);
        rec.extend(record! {
            "bound_state_energy" => pi.bound_state_energy(),
            "matching" => matching.as_ref().map(to_value),
        });
        e.emit(rec)?;
        for (x, v) in &samples {
            e.emit(record! {"type" => "sample", "x" => x, "psi_re" => v.re, "psi_im" => v.im, "psi_abs2" => v.norm_sqr()})?;
        }
    }
    e.finish()?;
    if let Some(rep) = matching.filter(|rep| !rep.passed) {
        return Err(Failure::Verification(format!(
            "matching conditions violated (continuity {:e}, jump {:e})",
            rep.continuity_gap, rep.jump_residual
        )));
    }
    Ok(())
}

pub fn diverge_demo<W: Write>(
    a: DivergeArgs,
    config: ConfigFile,
    format: Format,
    out: W,
) -> Result<(), Failure> {
    let mut r = Resolver::new("diverge-demo", config);
    let m = r.get("m", a.m, DEFAULT_M)?;
    let beta = r.get("beta", a.beta, DEFAULT_BETA)?;
    let psi_lit = r.get("psi", a.psi, DEFAULT_PSI.to_string())?;
    let lim = limit_settings(&mut r, a.limit)?;
    let echo = r.finish(format.name())?;
    let psi = parse_psi(&psi_lit)?;
    let phi = Arc::new(Mollifier::new(m)?);
    let q = ProductQuery::deltas(0, 0, 2.0 * beta, beta, phi.clone(), psi.clone())?;
    let seq = sequential_only_divergence(&phi, beta, &psi, lim.schedule, lim.tol)?;
    let merged = product_limit(&q, lim.schedule, lim.tol)?;

    let mut e = Emitter::new(format, echo, &["n", "sequential_term", "merged_term"], out);
    for ((n, s), (_, p)) in seq.terms.iter().zip(&merged.terms) {
        e.emit(record! {"type" => "term", "n" => n, "sequential_term" => s, "merged_term" => p})?;
    }
    let contrast = !seq.converged && merged.converged;
    if format != Format::Csv {
        e.emit(record! {
            "type" => "summary",
            "sequential_converged" => seq.converged,
            "sequential_tag" => to_value(seq.tag),
            "merged_value" => merged.value,
            "merged_error_estimate" => merged.error_estimate,
            "merged_converged" => merged.converged,
            "status" => status(contrast),
        })?;
    }
    e.finish()?;
    if !contrast {
        return Err(Failure::Verification(
            "expected a divergent sequential sequence next to a convergent merged product".into(),
        ));
    }
    Ok(())
}
