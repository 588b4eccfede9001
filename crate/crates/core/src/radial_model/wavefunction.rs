use statrs::function::gamma::ln_gamma;

use super::{
    expansion_coefficients, EnergyResult, ExpansionCoefficients, PotentialParams, QuantumNumbers,
    RadialError,
};
use crate::nu_engine::Sign;
use crate::polynomial::Polynomial;

/// `f(r) = Σᵢ cᵢ r^(γ+i) e^(−βr)`, i ≥ 0.
///
/// Closed under `d/dr`, multiplication by powers of `r`, and the Rodrigues
/// lowering operator `−r² d/dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolyFunction {
    pub gamma: f64,
    pub beta: f64,
    pub terms: Vec<f64>,
}

impl ExpPolyFunction {
    pub fn new(gamma: f64, beta: f64, terms: Vec<f64>) -> Self {
        Self { gamma, beta, terms }
    }

    pub fn eval(&self, r: f64) -> f64 {
        r.powf(self.gamma) * (-self.beta * r).exp() * self.polynomial_factor().eval(r)
    }

    /// `Σᵢ cᵢ rⁱ`.
    pub fn polynomial_factor(&self) -> Polynomial {
        Polynomial::new(self.terms.clone())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    /// Multiplies by `r^power · e^(rate·r)`.
    pub fn mul_power_exp(&self, power: f64, rate: f64) -> Self {
        Self {
            gamma: self.gamma + power,
            beta: self.beta - rate,
            terms: self.terms.clone(),
        }
    }

    /// Drops exactly-zero leading and trailing coefficients, absorbing the
    /// leading ones into `γ`.
    pub fn canonical(&self) -> Self {
        let lead = self.terms.iter().take_while(|&&c| c == 0.0).count();
        let mut terms = self.terms[lead..].to_vec();
        while terms.last() == Some(&0.0) {
            terms.pop();
        }
        Self { gamma: self.gamma + lead as f64, beta: self.beta, terms }
    }

    /// `d/dr`, represented with base exponent `γ − 1`.
    pub fn derivative(&self) -> Self {
        let mut terms = vec![0.0; self.terms.len() + 1];
        for (i, &c) in self.terms.iter().enumerate() {
            terms[i] += c * (self.gamma + i as f64);
            terms[i + 1] -= self.beta * c;
        }
        Self { gamma: self.gamma - 1.0, beta: self.beta, terms }
    }

    /// `−r² d/dr`, represented with the same `γ` (offsets shift by one and two).
    pub fn lowering(&self) -> Self {
        let mut terms = vec![0.0; self.terms.len() + 2];
        for (i, &c) in self.terms.iter().enumerate() {
            terms[i + 1] -= c * (self.gamma + i as f64);
            terms[i + 2] += self.beta * c;
        }
        Self { gamma: self.gamma, beta: self.beta, terms }
    }

    /// Sum of two functions sharing `β` whose base exponents differ by an integer.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.beta, other.beta);
        let (lo, hi) = if self.gamma <= other.gamma { (self, other) } else { (other, self) };
        let offset = (hi.gamma - lo.gamma).round() as usize;
        debug_assert!((hi.gamma - lo.gamma - offset as f64).abs() < 1e-12);
        let mut terms = lo.terms.clone();
        terms.resize(terms.len().max(hi.terms.len() + offset), 0.0);
        for (i, &c) in hi.terms.iter().enumerate() {
            terms[i + offset] += c;
        }
        Self { gamma: lo.gamma, beta: lo.beta, terms }
    }

    /// `∫₀^∞ f(r)² dr` from `∫₀^∞ r^p e^(−2βr) dr = Γ(p+1)/(2β)^(p+1)`.
    pub fn norm_squared(&self) -> Result<f64, RadialError> {
        let f = self.canonical();
        if f.terms.is_empty() {
            return Ok(0.0);
        }
        if !(f.beta > 0.0) || !(f.gamma > -0.5) {
            return Err(RadialError::DivergentNorm { gamma: f.gamma, beta: f.beta });
        }
        // Γ(p₀+k)/(2β)^(p₀+k) = Γ(p₀)/(2β)^p₀ · (p₀)ₖ/(2β)ᵏ: a single Γ
        // evaluation keeps its rounding out of the (often cancelling) sum.
        let p0 = 2.0 * f.gamma + 1.0;
        let two_beta = 2.0 * f.beta;
        let mut rising = vec![1.0; 2 * f.terms.len() - 1];
        for k in 1..rising.len() {
            rising[k] = rising[k - 1] * (p0 + (k - 1) as f64) / two_beta;
        }
        let mut sum = 0.0;
        for (i, &ci) in f.terms.iter().enumerate() {
            for (j, &cj) in f.terms.iter().enumerate() {
                sum += ci * cj * rising[i + j];
            }
        }
        Ok(sum * (ln_gamma(p0) - p0 * two_beta.ln()).exp())
    }

    /// Positive zeros of the polynomial factor, i.e. the nodes on `(0, ∞)`.
    pub fn nodes(&self) -> Vec<f64> {
        let poly = self.polynomial_factor();
        let Some(deg) = poly.degree() else { return Vec::new() };
        if deg == 0 {
            return Vec::new();
        }
        let lead = poly.coeff(deg);
        let bound = 1.0 + poly.coeffs()[..deg].iter().fold(0.0_f64, |m, c| m.max((c / lead).abs()));
        poly.sign_change_roots(0.0, bound, 20_000)
            .into_iter()
            .filter(|&r| r > 0.0)
            .collect()
    }

    pub fn node_count(&self) -> usize {
        self.nodes().len()
    }
}

/// Whether the Rodrigues form is read as the reduced function `u = rR` or as
/// `R` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    Reduced,
    Radial,
}

/// Unnormalized `u(r) = r^(−q) e^(βr) (−r² d/dr)ⁿ [r^(2q−2n) e^(−2βr)]` with
/// `β = √(2A)`, `q = B/β`.
///
/// `level_sign` selects which root of `q = [(2n+1) ± √(1+8C₁)]/2` the
/// coefficients must satisfy; `Sign::Plus` is the bound state. The result has
/// exactly `n + 1` terms.
pub fn build_wavefunction(
    coeffs: &ExpansionCoefficients,
    qn: QuantumNumbers,
    level_sign: Sign,
    convention: Convention,
) -> Result<ExpPolyFunction, RadialError> {
    if !(coeffs.a_coeff > 0.0) {
        return Err(RadialError::NotNormalizable(coeffs.a_coeff));
    }
    let beta = (2.0 * coeffs.a_coeff).sqrt();
    let q = coeffs.b_coeff / beta;
    let n = qn.n;
    let disc = 1.0 + 8.0 * coeffs.c1_coeff;
    let expected = 0.5 * ((2 * n + 1) as f64 + level_sign.factor() * disc.max(0.0).sqrt());
    if disc < 0.0 || (q - expected).abs() > 1e-8 * expected.abs().max(1.0) {
        return Err(RadialError::OffShell { q, expected });
    }

    let mut f = ExpPolyFunction::new(2.0 * q - 2.0 * n as f64, 2.0 * beta, vec![1.0]);
    for _ in 0..n {
        f = f.lowering();
    }
    let u = f.mul_power_exp(-q, beta).canonical();
    Ok(match convention {
        Convention::Reduced => u,
        Convention::Radial => u.mul_power_exp(-1.0, 0.0),
    })
}

/// Scales `u` so that `∫₀^∞ u² dr = 1` and `u > 0` as `r → 0⁺`.
///
/// Returns the normalized function and the positive constant `C = 1/√∫u²`.
pub fn normalize(u: &ExpPolyFunction) -> Result<(ExpPolyFunction, f64), RadialError> {
    let f = u.canonical();
    let norm2 = f.norm_squared()?;
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(RadialError::DivergentNorm { gamma: f.gamma, beta: f.beta });
    }
    let c = norm2.sqrt().recip();
    let sign = f.terms.first().map_or(1.0, |c0| c0.signum());
    Ok((f.scale(sign * c), c))
}

/// `v = (du/dr + κu/r)/(E + m)`.
pub fn lower_component(
    u: &ExpPolyFunction,
    energy: f64,
    mass: f64,
    kappa: i32,
) -> Result<ExpPolyFunction, RadialError> {
    let total = energy + mass;
    if total == 0.0 {
        return Err(RadialError::SingularMass);
    }
    let du = u.derivative();
    let ku = u.scale(f64::from(kappa)).mul_power_exp(-1.0, 0.0);
    Ok(du.add(&ku).scale(total.recip()))
}

/// A fully assembled closed-form state: energy, expansion coefficients and
/// the normalized upper and lower components.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub qn: QuantumNumbers,
    pub energy: EnergyResult,
    pub coeffs: ExpansionCoefficients,
    pub upper: ExpPolyFunction,
    pub lower: ExpPolyFunction,
    pub c_nk: f64,
}

impl BoundState {
    pub fn assemble(
        p: &PotentialParams,
        qn: QuantumNumbers,
        energy: EnergyResult,
        convention: Convention,
    ) -> Result<Self, RadialError> {
        let coeffs = expansion_coefficients(p, &energy.split, qn.kappa, energy.delta)?;
        let raw = build_wavefunction(&coeffs, qn, energy.branch_sign, convention)?;
        let (upper, c_nk) = normalize(&raw)?;
        let lower = lower_component(&upper, energy.split.energy, energy.split.mass, qn.kappa)?;
        Ok(Self { qn, energy, coeffs, upper, lower, c_nk })
    }
}
