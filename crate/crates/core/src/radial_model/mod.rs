//! Radial Dirac problem for the extended Cornell potential `V(r) = ar − b/r + cr²`.
//!
//! With equal scalar and vector coupling the upper radial component obeys
//!
//! ```text
//! u″ + 2ε₀ (ε₁ − V(r) − κ(κ+1)/(2ε₀r²)) u = 0,    ε₀ = (E+m)/2,  ε₁ = E − m.
//! ```
//!
//! Substituting `r = 1/x` and expanding `1/x` and `1/x²` to second order
//! around `x = δ` brings it to hypergeometric form with
//!
//! ```text
//! A  = −ε₀(ε₁ − 3a/δ − 6c/δ²)
//! B  =  ε₀(3a/δ² + b + 8c/δ³)
//! C₁ =  ε₀(a/δ³ + 3c/δ⁴) + κ(κ+1)/2
//! σ = x², τ̃ = 2x, σ̃ = −2A + 2Bx − 2C₁x².
//! ```
//!
//! Natural units throughout: energies in GeV, lengths in GeV⁻¹.

mod spectrum;
mod wavefunction;

pub use spectrum::{
    closed_form_eps1, eps1_via_engine, optimal_delta, radicand, solve_energy_selfconsistent,
    DeltaChoice, DeltaFlag, DeltaSearch, EnergyResult, EngineEigen, SolveOptions,
};
pub use wavefunction::{
    build_wavefunction, lower_component, normalize, BoundState, Convention, ExpPolyFunction,
};

use crate::nu_engine::{HypergeometricEquation, NuError};
use crate::polynomial::Polynomial;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("invalid parameter {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("invalid coupling: j = {j}, l = {l}, {coupling:?}")]
    InvalidCoupling { j: f64, l: u32, coupling: Coupling },
    #[error("state is not bound: eps0 = {0} must be positive")]
    NotBound(f64),
    #[error("negative radicand {0} in the closed-form spectrum")]
    NegativeRadicand(f64),
    #[error("zero denominator in the closed-form spectrum")]
    ZeroDenominator,
    #[error("no sign change of the self-consistency function on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("wavefunction is not normalizable: A = {0} must be positive")]
    NotNormalizable(f64),
    #[error("off-shell: B/sqrt(2A) = {q} but the level requires {expected}")]
    OffShell { q: f64, expected: f64 },
    #[error("divergent norm: gamma = {gamma}, beta = {beta}")]
    DivergentNorm { gamma: f64, beta: f64 },
    #[error("singular mass term: E + m = 0")]
    SingularMass,
    #[error("engine failure: {0}")]
    Engine(#[from] NuError),
}

impl RadialError {
    pub fn name(&self) -> &'static str {
        match self {
            RadialError::InvalidParameter { .. } => "InvalidParameter",
            RadialError::InvalidCoupling { .. } => "InvalidCoupling",
            RadialError::NotBound(_) => "NotBound",
            RadialError::NegativeRadicand(_) => "NegativeRadicand",
            RadialError::ZeroDenominator => "ZeroDenominator",
            RadialError::NoRoot { .. } => "NoRoot",
            RadialError::NoConvergence(_) => "NoConvergence",
            RadialError::NotNormalizable(_) => "NotNormalizable",
            RadialError::OffShell { .. } => "OffShell",
            RadialError::DivergentNorm { .. } => "DivergentNorm",
            RadialError::SingularMass => "SingularMass",
            RadialError::Engine(e) => e.name(),
        }
    }
}

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> RadialError {
    RadialError::InvalidParameter { field, reason: reason.into() }
}

/// Strengths of the linear (GeV²), Coulomb (dimensionless) and harmonic
/// (GeV³) terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PotentialParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, RadialError> {
        for (field, v) in [("a", a), ("b", b), ("c", c)] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(field, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn coulomb(b: f64) -> Self {
        Self { a: 0.0, b, c: 0.0 }
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.a * r - self.b / r + self.c * r * r
    }

    pub fn is_pure_coulomb(&self) -> bool {
        self.a == 0.0 && self.c == 0.0
    }

    pub fn is_free(&self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// `j = l + 1/2`
    Aligned,
    /// `j = l − 1/2`
    AntiAligned,
}

/// `κ = −(l+1)` for `j = l + 1/2`, `κ = l` for `j = l − 1/2`.
pub fn kappa_from_jl(j: f64, l: u32, coupling: Coupling) -> Result<i32, RadialError> {
    let lf = f64::from(l);
    let (expected_j, kappa) = match coupling {
        Coupling::Aligned => (lf + 0.5, -(l as i32) - 1),
        Coupling::AntiAligned => (lf - 0.5, l as i32),
    };
    if j != expected_j || (coupling == Coupling::AntiAligned && l == 0) {
        return Err(RadialError::InvalidCoupling { j, l, coupling });
    }
    Ok(kappa)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n: usize,
    pub kappa: i32,
}

impl QuantumNumbers {
    pub fn new(n: usize, kappa: i32) -> Result<Self, RadialError> {
        if kappa == 0 {
            return Err(invalid("kappa", "must be nonzero"));
        }
        Ok(Self { n, kappa })
    }

    pub fn from_jl(n: usize, j: f64, l: u32, coupling: Coupling) -> Result<Self, RadialError> {
        Self::new(n, kappa_from_jl(j, l, coupling)?)
    }

    pub fn l(&self) -> u32 {
        if self.kappa < 0 {
            (-self.kappa - 1) as u32
        } else {
            self.kappa as u32
        }
    }

    pub fn j(&self) -> f64 {
        f64::from(self.kappa.unsigned_abs()) - 0.5
    }

    /// `κ(κ+1)`, equal to `l(l+1)` for both couplings.
    pub fn centrifugal(&self) -> f64 {
        let k = f64::from(self.kappa);
        k * (k + 1.0)
    }
}

/// Both κ values belonging to each `l ≤ l_max`, ascending in κ.
pub fn kappas_up_to(l_max: u32) -> Vec<i32> {
    let mut out: Vec<i32> = (0..=l_max)
        .flat_map(|l| {
            let aligned = -(l as i32) - 1;
            if l == 0 { vec![aligned] } else { vec![aligned, l as i32] }
        })
        .collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit {
    pub eps0: f64,
    pub eps1: f64,
    pub energy: f64,
    pub mass: f64,
}

impl EnergySplit {
    /// Recovers `E` and `m` from a given `(ε₀, ε₁)` pair.
    pub fn from_eps(eps0: f64, eps1: f64) -> Self {
        Self {
            eps0,
            eps1,
            energy: eps0 + 0.5 * eps1,
            mass: eps0 - 0.5 * eps1,
        }
    }

    pub fn is_bound(&self) -> bool {
        self.eps0 > 0.0
    }
}

pub fn energy_split(energy: f64, mass: f64) -> EnergySplit {
    EnergySplit {
        eps0: 0.5 * (energy + mass),
        eps1: energy - mass,
        energy,
        mass,
    }
}

/// `A`, `B`, `C₁` of the expanded equation and the expansion point `δ = 1/r₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoefficients {
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub c1_coeff: f64,
    pub delta: f64,
}

impl ExpansionCoefficients {
    /// `B/√(2A)`, the power of `r` carried by the nodeless factor.
    pub fn q(&self) -> f64 {
        self.b_coeff / (2.0 * self.a_coeff).sqrt()
    }
}

/// Second-order Taylor coefficients `[c₀, c₁, c₂]` of `a/x + c/x²` about `x = δ`
/// in powers of `x`.
pub fn inverse_power_expansion(a: f64, c: f64, delta: f64) -> [f64; 3] {
    let d2 = delta * delta;
    [
        3.0 * a / delta + 6.0 * c / d2,
        -(3.0 * a / d2 + 8.0 * c / (d2 * delta)),
        a / (d2 * delta) + 3.0 * c / (d2 * d2),
    ]
}

pub fn expansion_coefficients(
    p: &PotentialParams,
    split: &EnergySplit,
    kappa: i32,
    delta: f64,
) -> Result<ExpansionCoefficients, RadialError> {
    check_delta(delta)?;
    let [shift, slope, curvature] = inverse_power_expansion(p.a, p.c, delta);
    let k = f64::from(kappa);
    let eps0 = split.eps0;
    Ok(ExpansionCoefficients {
        a_coeff: -eps0 * (split.eps1 - shift),
        b_coeff: eps0 * (p.b - slope),
        c1_coeff: eps0 * curvature + 0.5 * k * (k + 1.0),
        delta,
    })
}

pub(crate) fn check_delta(delta: f64) -> Result<(), RadialError> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(invalid("delta", format!("must be positive, got {delta}")))
    }
}

/// `σ = x²`, `τ̃ = 2x`, `σ̃ = −2A + 2Bx − 2C₁x²`.
pub fn to_nu_equation(coeffs: &ExpansionCoefficients) -> HypergeometricEquation {
    HypergeometricEquation::new(
        Polynomial::monomial(1.0, 2),
        Polynomial::monomial(2.0, 1),
        Polynomial::new(vec![
            -2.0 * coeffs.a_coeff,
            2.0 * coeffs.b_coeff,
            -2.0 * coeffs.c1_coeff,
        ]),
    )
    .expect("sigma, tau_tilde and sigma_tilde have fixed admissible degrees")
}
