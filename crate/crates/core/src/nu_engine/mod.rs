//! Generic Nikiforov-Uvarov machinery for hypergeometric-type equations
//!
//! ```text
//! ψ″(s) + (τ̃(s)/σ(s)) ψ′(s) + (σ̃(s)/σ²(s)) ψ(s) = 0,
//! ```
//!
//! with `deg σ, deg σ̃ ≤ 2` and `deg τ̃ ≤ 1`. The pipeline is
//!
//! 1. [`solve_k_candidates`]: the constants `K` for which the radicand
//!    `((σ′ − τ̃)/2)² − σ̃ + Kσ` is a perfect square,
//! 2. [`pi_branches`]: both signs of `π = (σ′ − τ̃)/2 ± √radicand` and the
//!    induced `τ = τ̃ + 2π`,
//! 3. [`select_physical_branch`]: the branch with `τ′ < 0`,
//! 4. [`quantization_residual`]: `(K + π′) − λₙ` with
//!    `λₙ = −nτ′ − n(n−1)σ″/2`,
//! 5. [`solution_factors`]: closed-form `Φ`, the weight `ρ` and the Rodrigues
//!    polynomial `χₙ`.
//!
//! Everything here is a pure function of its inputs.

mod factors;

pub use factors::{solution_factors, ClosedFormFactor, RodriguesSpec};

use crate::polynomial::Polynomial;
use thiserror::Error;

/// Relative tolerance for the perfect-square test on the radicand.
pub const PERFECT_SQUARE_TOL: f64 = 1e-10;

/// Relative tolerance under which a `τ′` is treated as exactly zero.
pub const SLOPE_ZERO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NuError {
    #[error("{name} has degree {degree}, at most {max} allowed")]
    DegreeViolation {
        name: &'static str,
        degree: usize,
        max: usize,
    },
    #[error("sigma is identically zero")]
    ZeroSigma,
    #[error("discriminant in K is a nonzero constant, no K makes the radicand a perfect square")]
    DiscriminantUnsolvable,
    #[error("K roots are complex: {re} ± {im}i")]
    ComplexK { re: f64, im: f64 },
    #[error("radicand is a perfect square for every K")]
    DegenerateFamily,
    #[error("radicand is not a perfect square at K = {k} (relative residual {residual:e})")]
    NotPerfectSquare { k: f64, residual: f64 },
    #[error("no branch satisfies tau' < 0 for n = {n} (slopes {slopes:?})")]
    NoPhysicalBranch { n: usize, slopes: Vec<f64> },
    #[error("sigma = {0} is not a monomial of degree 0, 1 or 2")]
    UnsupportedSigma(String),
}

impl NuError {
    /// Stable variant name, used in machine-readable error reports.
    pub fn name(&self) -> &'static str {
        match self {
            NuError::DegreeViolation { .. } => "DegreeViolation",
            NuError::ZeroSigma => "ZeroSigma",
            NuError::DiscriminantUnsolvable => "DiscriminantUnsolvable",
            NuError::ComplexK { .. } => "ComplexK",
            NuError::DegenerateFamily => "DegenerateFamily",
            NuError::NotPerfectSquare { .. } => "NotPerfectSquare",
            NuError::NoPhysicalBranch { .. } => "NoPhysicalBranch",
            NuError::UnsupportedSigma(_) => "UnsupportedSigma",
        }
    }
}

/// The `(σ, τ̃, σ̃)` triple of a hypergeometric-type equation.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricEquation {
    sigma: Polynomial,
    tau_tilde: Polynomial,
    sigma_tilde: Polynomial,
}

impl HypergeometricEquation {
    pub fn new(
        sigma: Polynomial,
        tau_tilde: Polynomial,
        sigma_tilde: Polynomial,
    ) -> Result<Self, NuError> {
        check_degree("sigma", &sigma, 2)?;
        check_degree("tau_tilde", &tau_tilde, 1)?;
        check_degree("sigma_tilde", &sigma_tilde, 2)?;
        if sigma.is_zero() {
            return Err(NuError::ZeroSigma);
        }
        Ok(Self { sigma, tau_tilde, sigma_tilde })
    }

    pub fn sigma(&self) -> &Polynomial {
        &self.sigma
    }

    pub fn tau_tilde(&self) -> &Polynomial {
        &self.tau_tilde
    }

    pub fn sigma_tilde(&self) -> &Polynomial {
        &self.sigma_tilde
    }

    /// `(σ′ − τ̃)/2`, the K-independent part of π.
    pub fn half_shift(&self) -> Polynomial {
        (&self.sigma.derivative() - &self.tau_tilde).scale(0.5)
    }

    /// `((σ′ − τ̃)/2)² − σ̃ + Kσ`.
    pub fn radicand(&self, k: f64) -> Polynomial {
        let p = self.half_shift();
        &(&(&p * &p) - &self.sigma_tilde) + &self.sigma.scale(k)
    }

    fn coefficient_scale(&self) -> f64 {
        let p = self.half_shift();
        [&self.sigma, &self.sigma_tilde, &(&p * &p)]
            .iter()
            .map(|q| q.max_abs_coeff())
            .fold(0.0, f64::max)
    }
}

fn check_degree(name: &'static str, p: &Polynomial, max: usize) -> Result<(), NuError> {
    match p.degree() {
        Some(degree) if degree > max => Err(NuError::DegreeViolation { name, degree, max }),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            other => Err(format!("expected plus or minus, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KCandidate {
    pub k: f64,
    /// 2 when the discriminant in K has a double root.
    pub multiplicity: u8,
}

/// Every real `K` for which the radicand is a perfect square.
///
/// The radicand `r₀ + r₁s + r₂s²` has coefficients affine in `K`; its
/// discriminant `r₁² − 4r₀r₂` is therefore a polynomial of degree at most two
/// in `K`, and the candidates are its roots.
pub fn solve_k_candidates(eq: &HypergeometricEquation) -> Result<Vec<KCandidate>, NuError> {
    let base = eq.radicand(0.0);
    let (u0, u1, u2) = (base.coeff(0), base.coeff(1), base.coeff(2));
    let sg = eq.sigma();
    let (s0, s1, s2) = (sg.coeff(0), sg.coeff(1), sg.coeff(2));

    let d2 = s1 * s1 - 4.0 * s0 * s2;
    let d1 = 2.0 * u1 * s1 - 4.0 * (u0 * s2 + u2 * s0);
    let d0 = u1 * u1 - 4.0 * u0 * u2;

    let scale = eq.coefficient_scale().max(f64::MIN_POSITIVE);
    let negligible = |x: f64| x.abs() <= 1e-14 * scale * scale;

    if negligible(d2) && negligible(d1) {
        return if negligible(d0) {
            Err(NuError::DegenerateFamily)
        } else {
            Err(NuError::DiscriminantUnsolvable)
        };
    }
    if negligible(d2) {
        return Ok(vec![KCandidate { k: -d0 / d1, multiplicity: 1 }]);
    }

    let disc = d1 * d1 - 4.0 * d2 * d0;
    let disc_scale = d1 * d1 + (4.0 * d2 * d0).abs();
    if disc.abs() <= 1e-14 * disc_scale {
        return Ok(vec![KCandidate { k: -d1 / (2.0 * d2), multiplicity: 2 }]);
    }
    if disc < 0.0 {
        return Err(NuError::ComplexK {
            re: -d1 / (2.0 * d2),
            im: (-disc).sqrt() / (2.0 * d2).abs(),
        });
    }
    // Cancellation-free pair of quadratic roots.
    let q = -0.5 * (d1 + d1.signum() * disc.sqrt());
    let (mut k1, mut k2) = (q / d2, d0 / q);
    if k1 > k2 {
        std::mem::swap(&mut k1, &mut k2);
    }
    Ok(vec![
        KCandidate { k: k1, multiplicity: 1 },
        KCandidate { k: k2, multiplicity: 1 },
    ])
}

/// One sign choice of `π` for a fixed `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuBranch {
    pub k: f64,
    pub sign: Sign,
    /// The factor `p·s + q` (with `p ≥ 0`) whose square is the radicand.
    pub sqrt_radicand: Polynomial,
    pub pi: Polynomial,
    pub tau: Polynomial,
    pub tau_slope: f64,
}

/// Factors the radicand at `K` as `(p·s + q)²` with `p ≥ 0` and returns one
/// branch per sign of the whole factor.
pub fn pi_branches(eq: &HypergeometricEquation, k: f64) -> Result<Vec<NuBranch>, NuError> {
    let root = perfect_square_root(&eq.radicand(k), k)?;
    let shift = eq.half_shift();
    Ok([Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|sign| {
            let pi = &shift + &root.scale(sign.factor());
            let tau = eq.tau_tilde() + &pi.scale(2.0);
            NuBranch {
                k,
                sign,
                sqrt_radicand: root.clone(),
                tau_slope: tau.coeff(1),
                pi,
                tau,
            }
        })
        .collect())
}

fn perfect_square_root(radicand: &Polynomial, k: f64) -> Result<Polynomial, NuError> {
    let (r0, r1, r2) = (radicand.coeff(0), radicand.coeff(1), radicand.coeff(2));
    let scale = radicand.max_abs_coeff();
    if scale == 0.0 {
        return Ok(Polynomial::zero());
    }
    let tol = PERFECT_SQUARE_TOL * scale;
    if r2 < -tol || r0 < -tol {
        return Err(NuError::NotPerfectSquare {
            k,
            residual: (r2.min(r0)).abs() / scale,
        });
    }
    let (r0c, r2c) = (r0.max(0.0), r2.max(0.0));
    let (p, q) = if r2c >= r0c {
        let p = r2c.sqrt();
        (p, r1 / (2.0 * p))
    } else {
        let q = if r1 < 0.0 { -r0c.sqrt() } else { r0c.sqrt() };
        (r1 / (2.0 * q), q)
    };
    let root = Polynomial::new(vec![q, p]);
    let residual = (&(&root * &root) - radicand).max_abs_coeff() / scale;
    if residual > PERFECT_SQUARE_TOL {
        return Err(NuError::NotPerfectSquare { k, residual });
    }
    Ok(root)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectedBranch {
    pub branch: NuBranch,
    /// Set when the chosen branch has `τ′ = 0`, admissible only for `n = 0`.
    pub boundary: bool,
}

/// True when `|τ′|` is zero relative to the coefficient scale of `τ`.
pub fn slope_is_zero(branch: &NuBranch) -> bool {
    branch.tau_slope.abs() <= SLOPE_ZERO_TOL * branch.tau.max_abs_coeff().max(1.0)
}

/// Picks the branch with the most negative `τ′`. A branch with `τ′ = 0` is
/// accepted only for `n = 0`, and is then flagged as a boundary case.
pub fn select_physical_branch(branches: &[NuBranch], n: usize) -> Result<SelectedBranch, NuError> {
    let no_branch = || NuError::NoPhysicalBranch {
        n,
        slopes: branches.iter().map(|b| b.tau_slope).collect(),
    };
    let best = branches
        .iter()
        .min_by(|a, b| a.tau_slope.total_cmp(&b.tau_slope))
        .ok_or_else(no_branch)?;
    if slope_is_zero(best) {
        return if n == 0 {
            Ok(SelectedBranch { branch: best.clone(), boundary: true })
        } else {
            Err(no_branch())
        };
    }
    if best.tau_slope < 0.0 {
        Ok(SelectedBranch { branch: best.clone(), boundary: false })
    } else {
        Err(no_branch())
    }
}

/// `λₙ = −nτ′ − n(n−1)σ″/2`.
pub fn lambda_n(eq: &HypergeometricEquation, branch: &NuBranch, n: usize) -> f64 {
    let n = n as f64;
    let sigma_second = 2.0 * eq.sigma().coeff(2);
    -n * branch.tau_slope - 0.5 * n * (n - 1.0) * sigma_second
}

/// `(K + π′) − λₙ`; zero exactly when `n` is an admissible level.
pub fn quantization_residual(eq: &HypergeometricEquation, branch: &NuBranch, n: usize) -> f64 {
    (branch.k + branch.pi.coeff(1)) - lambda_n(eq, branch, n)
}
