//! The standard bump `B(u) = exp(1/(u²-1))` on `|u| < 1` and its derivatives.
//!
//! `B^(r) = g_r · B` where `g_0 = 1` and `g_{r+1} = g_r' - g_r · 2u/(u²-1)²`.
//! Writing `g_r = N_r(u) / (u²-1)^(2r)` gives the integer recurrence
//!
//! ```text
//! N_{r+1} = N_r' (u²-1)² - 4r u (u²-1) N_r - 2u N_r
//! ```
//!
//! which is evaluated once with exact coefficients.

use std::sync::LazyLock;

use crate::poly::Poly;

/// Highest derivative order tabulated for the bump.
pub const MAX_BUMP_DERIV: usize = 10;

/// Exponent below which `exp` is flushed to an exact zero.
const FLUSH_EXPONENT: f64 = -700.0;

static NUMERATORS: LazyLock<Vec<Poly>> = LazyLock::new(|| {
    let d = Poly::new(vec![-1, 0, 1]);
    let d_sq = &d * &d;
    let mut out = vec![Poly::constant(1)];
    for r in 0..MAX_BUMP_DERIV {
        let n = &out[r];
        let a = &n.derivative() * &d_sq;
        let b = &(&Poly::monomial(4 * r as i128, 1) * &d) * n;
        let c = &Poly::monomial(2, 1) * n;
        out.push(&(&a - &b) - &c);
    }
    out
});

/// Numerator polynomial `N_r` of the rational prefactor of `B^(r)`.
pub fn numerator(r: usize) -> &'static Poly {
    &NUMERATORS[r]
}

/// `B(u)`, exactly zero on `|u| >= 1` and where the exponent underflows.
pub fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        return 0.0;
    }
    let e = 1.0 / (u * u - 1.0);
    if e < FLUSH_EXPONENT {
        0.0
    } else {
        e.exp()
    }
}

/// `B^(r)(u)` for `r <= MAX_BUMP_DERIV`.
///
/// Panics when `r` exceeds the tabulated order; callers validate first.
pub fn bump_deriv(u: f64, r: usize) -> f64 {
    assert!(
        r <= MAX_BUMP_DERIV,
        "bump derivative order {r} not tabulated"
    );
    let b = bump(u);
    if b == 0.0 {
        return 0.0;
    }
    if r == 0 {
        return b;
    }
    let d = u * u - 1.0;
    b * NUMERATORS[r].eval(u) / d.powi(2 * r as i32)
}

/// `d^j/dx^j x^m` evaluated at `x`.
pub fn power_deriv(x: f64, m: u32, j: usize) -> f64 {
    if j as u32 > m {
        return 0.0;
    }
    let falling: f64 = (0..j as u32).map(|i| f64::from(m - i)).product();
    falling * x.powi((m - j as u32) as i32)
}

/// Binomial coefficient as f64 (small arguments only).
pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_numerators() {
        assert_eq!(numerator(0).coeffs(), &[1]);
        assert_eq!(numerator(1).coeffs(), &[0, -2]);
        // B'' = B·(6u⁴ - 2)/(u²-1)⁴
        assert_eq!(numerator(2).coeffs(), &[-2, 0, 0, 0, 6]);
    }

    #[test]
    fn bump_support_and_center() {
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(-1.0), 0.0);
        assert_eq!(bump(1.5), 0.0);
        assert!((bump(0.0) - (-1.0f64).exp()).abs() < 1e-16);
        for r in 0..=MAX_BUMP_DERIV {
            assert_eq!(bump_deriv(1.0, r), 0.0);
            assert_eq!(bump_deriv(-1.0, r), 0.0);
        }
    }

    #[test]
    fn flush_to_zero_near_edge() {
        // 1/(u²-1) < -700 close to the edge
        let u = (1.0f64 - 1.0 / 800.0).sqrt();
        assert_eq!(bump(u), 0.0);
        assert!(bump(0.99).is_finite());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for r in 0..6 {
            for &u in &[-0.7, -0.3, 0.1, 0.45, 0.8] {
                let fd = (bump_deriv(u + h, r) - bump_deriv(u - h, r)) / (2.0 * h);
                let exact = bump_deriv(u, r + 1);
                let scale = exact.abs().max(1e-3);
                assert!(
                    (fd - exact).abs() / scale < 1e-5,
                    "r={r} u={u} fd={fd} exact={exact}"
                );
            }
        }
    }

    #[test]
    fn power_derivatives() {
        assert_eq!(power_deriv(2.0, 3, 0), 8.0);
        assert_eq!(power_deriv(2.0, 3, 1), 12.0);
        assert_eq!(power_deriv(2.0, 3, 3), 6.0);
        assert_eq!(power_deriv(2.0, 3, 4), 0.0);
        assert_eq!(binomial(6, 2), 15.0);
    }
}
