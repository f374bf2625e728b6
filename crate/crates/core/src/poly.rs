//! Integer-coefficient polynomials used for exact symbolic differentiation.
//!
//! Coefficients are exact integers (rationals with unit denominator); all
//! common irrational factors such as `1/π` are kept outside the polynomial.

use std::ops::{Add, Mul, Neg, Sub};

/// Univariate polynomial with exact integer coefficients, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<i128>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: i128) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^deg`.
    pub fn monomial(c: i128, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c.checked_mul(i as i128).expect("coefficient overflow"))
                .collect(),
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or(0);
                    let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                    a.checked_add(b).expect("coefficient overflow")
                })
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::default();
        }
        let mut out = vec![0i128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let p = a.checked_mul(b).expect("coefficient overflow");
                out[i + j] = out[i + j].checked_add(p).expect("coefficient overflow");
            }
        }
        Poly::new(out)
    }
}

/// Homogeneous bivariate polynomial `Σ c_i x^i ε^(d-i)` of total degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPoly {
    degree: usize,
    /// `coeffs[i]` multiplies `x^i ε^(degree - i)`; length `degree + 1`.
    coeffs: Vec<i128>,
}

impl HomogeneousPoly {
    pub fn new(degree: usize, coeffs: Vec<i128>) -> Self {
        assert_eq!(coeffs.len(), degree + 1, "homogeneous coefficient count");
        Self { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `x^x_pow ε^(degree - x_pow)`.
    pub fn coeff(&self, x_pow: usize) -> i128 {
        self.coeffs.get(x_pow).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Partial derivative in `x`; total degree drops by one.
    pub fn dx(&self) -> Self {
        assert!(self.degree > 0, "derivative of a degree-0 form");
        let coeffs = (1..=self.degree)
            .map(|i| {
                self.coeffs[i]
                    .checked_mul(i as i128)
                    .expect("coefficient overflow")
            })
            .collect();
        Self::new(self.degree - 1, coeffs)
    }

    /// Multiply by `x² + ε²`.
    pub fn mul_norm_sq(&self) -> Self {
        let d = self.degree + 2;
        let mut out = vec![0i128; d + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 2] = out[i + 2].checked_add(c).expect("coefficient overflow");
            out[i] = out[i].checked_add(c).expect("coefficient overflow");
        }
        Self::new(d, out)
    }

    /// Multiply by `c * x`.
    pub fn mul_x(&self, c: i128) -> Self {
        let mut out = vec![0i128; self.degree + 2];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i + 1] = a.checked_mul(c).expect("coefficient overflow");
        }
        Self::new(self.degree + 1, out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.checked_sub(*b).expect("coefficient overflow"))
            .collect();
        Self::new(self.degree, coeffs)
    }

    pub fn eval(&self, x: f64, eps: f64) -> f64 {
        // Horner in x with ε powers accumulated from the top degree down.
        let mut acc = 0.0;
        let mut eps_pow = 1.0;
        for i in (0..=self.degree).rev() {
            acc += self.coeffs[i] as f64 * x.powi(i as i32) * eps_pow;
            eps_pow *= eps;
        }
        acc
    }
}
