use std::collections::BTreeMap;

use super::{HypergeometricEquation, NuBranch, NuError};
use crate::polynomial::Polynomial;

/// `f(s) = s^power · exp(inv_rate/s + lin_rate·s + quad_rate·s²)`.
///
/// This family contains every solution of `f′/f = N(s)/σ(s)` with `N` of
/// degree at most one and `σ` a monomial of degree at most two.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClosedFormFactor {
    pub power: f64,
    pub inv_rate: f64,
    pub lin_rate: f64,
    pub quad_rate: f64,
}

impl ClosedFormFactor {
    /// Integrates `f′/f = numerator/σ` for `σ = scale·s^degree`.
    fn integrate(numerator: &Polynomial, sigma_scale: f64, sigma_degree: usize) -> Self {
        let (n0, n1) = (numerator.coeff(0) / sigma_scale, numerator.coeff(1) / sigma_scale);
        match sigma_degree {
            0 => Self { lin_rate: n0, quad_rate: 0.5 * n1, ..Self::default() },
            1 => Self { power: n0, lin_rate: n1, ..Self::default() },
            _ => Self { power: n1, inv_rate: -n0, ..Self::default() },
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        s.powf(self.power) * self.exponent(s).exp()
    }

    pub fn exponent(&self, s: f64) -> f64 {
        let mut e = (self.quad_rate * s + self.lin_rate) * s;
        if self.inv_rate != 0.0 {
            e += self.inv_rate / s;
        }
        e
    }

    /// `f′(s)/f(s)`.
    pub fn log_derivative(&self, s: f64) -> f64 {
        let mut d = self.lin_rate + 2.0 * self.quad_rate * s;
        if self.power != 0.0 {
            d += self.power / s;
        }
        if self.inv_rate != 0.0 {
            d -= self.inv_rate / (s * s);
        }
        d
    }

    pub fn derivative(&self, s: f64) -> f64 {
        self.eval(s) * self.log_derivative(s)
    }
}

/// Closed-form solution factors for one level of a hypergeometric-type
/// equation: `ψ(s) = Φ(s)·χₙ(s)` with `χₙ = (Bₙ/ρ) dⁿ/dsⁿ [σⁿ ρ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RodriguesSpec {
    /// Numerator and denominator of `Φ′/Φ = π/σ`.
    pub phi_log_derivative: (Polynomial, Polynomial),
    pub phi: ClosedFormFactor,
    pub weight: ClosedFormFactor,
    pub tau: Polynomial,
    pub order: usize,
    /// `dⁿ/dsⁿ[σⁿρ]/ρ` with `Bₙ = 1`.
    pub chi: Polynomial,
    pub normalization: f64,
}

impl RodriguesSpec {
    fn sigma(&self) -> &Polynomial {
        &self.phi_log_derivative.1
    }

    pub fn with_normalization(mut self, b_n: f64) -> Self {
        self.normalization = b_n;
        self
    }

    pub fn chi_n(&self, s: f64) -> f64 {
        self.normalization * self.chi.eval(s)
    }

    /// `ψ(s) = Φ(s)·χₙ(s)`.
    pub fn solution(&self, s: f64) -> f64 {
        self.phi.eval(s) * self.chi_n(s)
    }

    /// Relative residual of `(σρ)′ = τρ` at `s`.
    pub fn weight_residual(&self, s: f64) -> f64 {
        let sigma = self.sigma();
        let rho = self.weight.eval(s);
        let d_omega = sigma.derivative().eval(s) * rho + sigma.eval(s) * self.weight.derivative(s);
        let rhs = self.tau.eval(s) * rho;
        (d_omega - rhs).abs() / d_omega.abs().max(rhs.abs()).max(f64::MIN_POSITIVE)
    }

    /// Relative residual of `σΦ′ = πΦ` at `s`.
    pub fn phi_residual(&self, s: f64) -> f64 {
        let (pi, sigma) = &self.phi_log_derivative;
        let lhs = sigma.eval(s) * self.phi.derivative(s);
        let rhs = pi.eval(s) * self.phi.eval(s);
        (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE)
    }
}

/// Builds `Φ`, `ρ` and `χₙ` in closed form for monomial `σ ∈ {c, c·s, c·s²}`.
pub fn solution_factors(
    eq: &HypergeometricEquation,
    branch: &NuBranch,
    n: usize,
) -> Result<RodriguesSpec, NuError> {
    let sigma = eq.sigma();
    let degree = sigma.degree().ok_or(NuError::ZeroSigma)?;
    if sigma.coeffs()[..degree].iter().any(|&c| c != 0.0) {
        return Err(NuError::UnsupportedSigma(sigma.to_string()));
    }
    let scale = sigma.coeff(degree);

    let phi = ClosedFormFactor::integrate(&branch.pi, scale, degree);
    let weight_numerator = &branch.tau - &sigma.derivative();
    let weight = ClosedFormFactor::integrate(&weight_numerator, scale, degree);
    let chi = rodrigues_polynomial(scale, degree, &weight, n);

    Ok(RodriguesSpec {
        phi_log_derivative: (branch.pi.clone(), sigma.clone()),
        phi,
        weight,
        tau: branch.tau.clone(),
        order: n,
        chi,
        normalization: 1.0,
    })
}

/// `dⁿ/dsⁿ[σⁿρ]/ρ`, tracked exactly as a Laurent sum `Σ cₖ s^(p+k)` times the
/// exponential part of `ρ = s^p e^E(s)`.
fn rodrigues_polynomial(
    sigma_scale: f64,
    sigma_degree: usize,
    weight: &ClosedFormFactor,
    n: usize,
) -> Polynomial {
    let mut terms: BTreeMap<i64, f64> = BTreeMap::new();
    terms.insert((sigma_degree * n) as i64, sigma_scale.powi(n as i32));

    for _ in 0..n {
        let mut next: BTreeMap<i64, f64> = BTreeMap::new();
        let mut add = |k: i64, c: f64| {
            if c != 0.0 {
                *next.entry(k).or_insert(0.0) += c;
            }
        };
        for (&k, &c) in &terms {
            add(k - 1, c * (weight.power + k as f64));
            add(k - 2, -c * weight.inv_rate);
            add(k, c * weight.lin_rate);
            add(k + 1, 2.0 * c * weight.quad_rate);
        }
        terms = next;
    }

    let max_k = terms.keys().next_back().copied().unwrap_or(0).max(0) as usize;
    let mut coeffs = vec![0.0; max_k + 1];
    for (k, c) in terms {
        debug_assert!(k >= 0 || c.abs() < 1e-12, "negative power {k} in Rodrigues polynomial");
        if k >= 0 {
            coeffs[k as usize] += c;
        }
    }
    Polynomial::new(coeffs)
}
