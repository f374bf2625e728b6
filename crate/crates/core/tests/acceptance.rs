//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use distmul::*;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn raw_bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 / (u * u - 1.0)).exp()
    }
}

/// `A_j` for `Φ_m` by composite Simpson, sharing nothing with the library.
fn oracle_moment(m: u32, j: u32) -> f64 {
    let f = simpson(|x| x.powi(m as i32) * raw_bump(x), -1.0, 1.0, 40_000);
    simpson(|t| t.powi((m - j) as i32) * raw_bump(t), -1.0, 1.0, 40_000) / f
}

fn five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn phi6() -> Arc<Mollifier> {
    Arc::new(Mollifier::new(6).expect("m = 6 mollifier"))
}

fn table_reproduction() -> Result<Outcome> {
    let start = Instant::now();
    let psi = TestFunction::standard();
    let psi0 = psi.value(0.0);
    let (a2, a4, a6) = (
        oracle_moment(6, 2),
        oracle_moment(6, 4),
        oracle_moment(6, 6),
    );
    let expected = [
        ((0, 0), a2 / PI),
        ((0, 1), 0.0),
        ((1, 1), -6.0 * a4 / PI),
        ((0, 2), 6.0 * a4 / PI),
        ((1, 2), 0.0),
        ((2, 2), 120.0 * a6 / PI),
    ];
    let report = verify_table(6, 1.0, &psi, 5e-3, Schedule::default())?;
    let mut ok = report.passed();
    let mut worst: f64 = 0.0;
    for ((l, k), coef) in expected {
        let row = report
            .rows
            .iter()
            .find(|r| r.l == l && r.k == k && r.regime == Regime::Critical)
            .expect("critical row");
        let want = coef * psi0;
        let good = if want == 0.0 {
            row.measured.abs() <= 1e-6
        } else {
            let rel = ((row.measured - want) / want).abs();
            worst = worst.max(rel);
            rel <= 5e-3
        };
        ok &= good && row.converged;
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < 60.0;
    Ok(Outcome::new(
        ok,
        format!(
            "{} rows, worst relative error vs oracle moments {worst:.2e}, {elapsed:.2} s",
            report.rows.len()
        ),
    ))
}

fn supercritical_vanishing() -> Result<Outcome> {
    let q = ProductQuery::deltas(0, 0, 3.0, 1.0, phi6(), TestFunction::standard())?;
    let est = product_limit(&q, Schedule::default(), 1e-4)?;
    let decay = decay_exponent(&est.terms).unwrap_or(f64::NAN);
    let ok = est.value.abs() < 1e-6 && est.error_estimate < 1e-6 && (decay - 1.0).abs() <= 0.2;
    Ok(Outcome::new(
        ok,
        format!(
            "limit {:.3e} (est {:.1e}, converged={}), decay exponent {decay:.4}",
            est.value, est.error_estimate, est.converged
        ),
    ))
}

fn cross_relation() -> Result<Outcome> {
    let phi = phi6();
    let psi = TestFunction::standard();
    let tol = 5e-3;
    let limit = |l, k| -> Result<LimitEstimate> {
        let q = ProductQuery::deltas(l, k, 4.0, 1.0, phi.clone(), psi.clone())?;
        product_limit(&q, Schedule::default(), tol)
    };
    let (d02, d11) = (limit(0, 2)?, limit(1, 1)?);
    let sum = d02.value + d11.value;
    let allowed =
        tol * (d02.value.abs() + d11.value.abs()) + d02.error_estimate + d11.error_estimate;
    Ok(Outcome::new(
        d02.converged && d11.converged && sum.abs() <= allowed,
        format!("sum {sum:.3e}, allowed {allowed:.3e}"),
    ))
}

fn continuous_consistency_check() -> Result<Outcome> {
    let phi = phi6();
    let psi = TestFunction::standard();
    let f = ContinuousFn::parabola(0.0, 2.0, 1.0)?;
    let g = ContinuousFn::hat(0.25, 1.5, 1.0)?;
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut flags = Vec::new();
    for alpha in [1.0, 2.0, 3.0] {
        let r = continuous_consistency(&f, &g, alpha, 1.0, &phi, &psi, Schedule::default(), 1e-4)?;
        worst = worst.max(r.difference.abs());
        ok &= r.difference.abs() <= 1e-4 && r.limit.error_estimate <= 1e-4;
        flags.push(format!(
            "α={alpha}: converged={} est={:.1e}",
            r.limit.converged, r.limit.error_estimate
        ));
    }
    Ok(Outcome::new(
        ok,
        format!("worst |limit - ∫fgΨ| {worst:.3e} ({})", flags.join(", ")),
    ))
}

fn reconstruction() -> Result<Outcome> {
    let psi = TestFunction::new(0.1, 1.0, vec![1.0, 0.5])?;
    let mut ok = true;
    let mut worst_rel: f64 = 0.0;
    for k in 0..3u32 {
        let terms = (3..=12)
            .map(|j| {
                let eps = 0.5f64.powi(j);
                pair_delta_red(k, &psi, eps).map(|v| (1u64 << j, v))
            })
            .collect::<Result<Vec<_>>>()?;
        let est = extrapolate(&terms, 1e-4)?;
        let exact = exact_pairing(&Distribution::delta(k), &psi)?;
        let rel = ((est.value - exact) / exact).abs();
        worst_rel = worst_rel.max(rel);
        ok &= rel <= 1e-4;
    }
    let mut worst_gap: f64 = 0.0;
    for k in 0..=4u32 {
        for eps in [1.0, 0.1, 0.01] {
            for i in 0..100 {
                let x = -2.0 + 4.0 * i as f64 / 99.0;
                let a = red_from_cauchy(k, x, eps)?;
                let b = delta_red(k, x, eps)?;
                let scale = cauchy(k, num_complex::Complex64::new(x, eps))?
                    .norm()
                    .max(1.0);
                worst_gap = worst_gap.max((a - b).abs() / scale);
            }
        }
    }
    ok &= worst_gap <= 1e-12;
    Ok(Outcome::new(
        ok,
        format!(
            "worst pairing relative error {worst_rel:.2e}, worst scaled Cauchy gap {worst_gap:.2e}"
        ),
    ))
}

fn sequential_failure() -> Result<Outcome> {
    let phi = phi6();
    let psi = TestFunction::standard();
    let seq = sequential_only_divergence(&phi, 1.0, &psi, Schedule::default(), 1e-4)?;
    let q = ProductQuery::deltas(0, 0, 2.0, 1.0, phi.clone(), psi)?;
    let merged = product_limit(&q, Schedule::default(), 1e-4)?;
    let ok = !seq.converged && seq.tag == Some(Divergence::Divergent) && merged.converged;
    Ok(Outcome::new(
        ok,
        format!(
            "sequential last term {:.3e} tagged {:?}; merged limit {:.10}",
            seq.last_term(),
            seq.tag,
            merged.value
        ),
    ))
}

fn quantum_matching() -> Result<Outcome> {
    let phi = Mollifier::new(6)?;
    let mut ok = true;
    let (mut gap, mut jump, mut prob): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..20 {
        let g = -10.0 + 20.0 * i as f64 / 19.0;
        for j in 0..20 {
            let k = 0.1 + 9.9 * j as f64 / 19.0;
            let rep = verify_matching(&PointInteraction::new(g), k)?;
            gap = gap.max(rep.continuity_gap);
            jump = jump.max(rep.jump_residual);
            prob = prob.max(rep.probability_defect);
            ok &= rep.passed;
        }
    }
    ok &= gap <= 1e-12 && jump <= 1e-10 && prob <= 1e-12;
    let v0 = 1.7;
    let c = effective_coupling(v0, 2.0, 1.0, &phi, 0.0)?;
    let exact = c.g == v0 / PI * phi.moment(2)?.value && c.source == CouplingSource::Critical;
    ok &= exact;
    Ok(Outcome::new(
        ok,
        format!("continuity {gap:.1e}, jump {jump:.1e}, |r|²+|t|²-1 {prob:.1e}, g exact: {exact}"),
    ))
}

fn mollifier_suite() -> Result<Outcome> {
    let mut ok = true;
    let mut worst_norm: f64 = 0.0;
    for m in [0, 2, 4, 6, 8] {
        let phi = Mollifier::new(m)?;
        let total = simpson(|x| phi.value(x), -1.0, 1.0, 40_000);
        worst_norm = worst_norm.max((total - 1.0).abs());
        ok &= (total - 1.0).abs() <= 1e-10;
        for j in (1..=m).step_by(2) {
            ok &= phi.moment(j)?.value == 0.0;
        }
    }
    let phi = Mollifier::new(6)?;
    for j in [2, 4, 6] {
        ok &= phi.moment(j)?.value > 0.0;
    }
    let mut worst_fd: f64 = 0.0;
    for i in 0..20 {
        let x = -0.95 + 1.9 * i as f64 / 19.0;
        for r in 0..4 {
            let fd = five_point(|y| phi.eval(y, r).unwrap(), x, 1e-4);
            let d = phi.eval(x, r + 1)?;
            let rel = (fd - d).abs() / d.abs().max(1e-8);
            worst_fd = worst_fd.max(rel);
        }
    }
    ok &= worst_fd <= 1e-5;
    Ok(Outcome::new(
        ok,
        format!("worst |∫Φ-1| {worst_norm:.1e}, worst derivative rel. error {worst_fd:.1e}"),
    ))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("table reproduction", table_reproduction),
        ("supercritical vanishing", supercritical_vanishing),
        ("cross-relation", cross_relation),
        ("continuous consistency", continuous_consistency_check),
        ("reconstruction", reconstruction),
        ("sequential-only failure", sequential_failure),
        ("quantum matching", quantum_matching),
        ("mollifier suite", mollifier_suite),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        if !outcome.passed {
            failures += 1;
        }
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{verdict} [{}] {name}: {}", i + 1, outcome.detail);
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
