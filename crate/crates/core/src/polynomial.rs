//! Real-coefficient polynomials in a single variable.
//!
//! Coefficients are stored constant term first and trimmed so that the
//! highest stored coefficient is nonzero. The zero polynomial has no stored
//! coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from coefficients ordered constant term first.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(vec![value])
    }

    /// `scale * s^power`.
    pub fn monomial(scale: f64, power: usize) -> Self {
        let mut coeffs = vec![0.0; power + 1];
        coeffs[power] = scale;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^power`, zero beyond the stored degree.
    pub fn coeff(&self, power: usize) -> f64 {
        self.coeffs.get(power).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation, highest coefficient first.
    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect::<Vec<_>>(),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect::<Vec<_>>())
    }

    /// Largest coefficient magnitude; the reference scale for relative tolerances.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Real roots on `(lo, hi)` located by dense sampling followed by
    /// bisection on every sampled sign change. Roots of even multiplicity are
    /// not reported.
    pub fn sign_change_roots(&self, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
        let samples = samples.max(2);
        let step = (hi - lo) / samples as f64;
        let mut roots = Vec::new();
        let mut x_prev = lo;
        let mut f_prev = self.eval(lo);
        // a sample landing exactly on a zero: (location, sign before it)
        let mut pending_zero: Option<(f64, f64)> = None;
        for i in 1..=samples {
            let x = lo + step * i as f64;
            let f = self.eval(x);
            if f == 0.0 {
                if f_prev != 0.0 && pending_zero.is_none() {
                    pending_zero = Some((x, f_prev.signum()));
                }
                continue;
            }
            if let Some((z, before)) = pending_zero.take() {
                if before != f.signum() {
                    roots.push(z);
                }
            } else if f_prev != 0.0 && f_prev.signum() != f.signum() {
                roots.push(self.bisect(x_prev, x));
            }
            x_prev = x;
            f_prev = f;
        }
        roots
    }

    fn bisect(&self, mut a: f64, mut b: f64) -> f64 {
        let fa_sign = self.eval(a).signum();
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid == a || mid == b {
                break;
            }
            if self.eval(mid).signum() == fa_sign {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·s")?,
                _ => write!(f, "{c}·s^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..len)
                .map(|k| self.coeff(k) + rhs.coeff(k))
                .collect::<Vec<_>>(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}
