//! Independent numerical ground truth for the closed-form pipeline.
//!
//! The radial equation is solved directly in `r`, without the `1/x`
//! expansion, by second-order finite differences on a uniform grid. The
//! resulting symmetric tridiagonal eigenproblem is solved by Sturm-sequence
//! bisection, so every returned eigenvalue comes with a certified bracket.

mod fd;
mod quadrature;

pub use fd::{
    fd_eigen_fixed_mass, fd_eigenvalue, selfconsistent_oracle, sturm_count, OracleOptions,
    OracleResult, SelfConsistentOracle, SturmEigenvalue,
};
pub use quadrature::{quadrature, quadrature_samples, QuadratureResult};

use crate::radial_model::{EnergySplit, ExpPolyFunction, PotentialParams};
use thiserror::Error;

/// Environment variable overriding [`RadialGrid::DEFAULT_POINTS`].
pub const GRID_POINTS_ENV: &str = "NU_SPECTRA_GRID_POINTS";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("eigenvector has {found} nodes, expected {expected}")]
    GridTooCoarse { expected: usize, found: usize },
    #[error("eigenvector not decayed at r_max (relative tail amplitude {0:e})")]
    BoxTooSmall(f64),
    #[error("self-consistent iteration did not converge in {0} steps")]
    NoConvergence(usize),
    #[error("effective mass must be positive, got {0}")]
    NotBound(f64),
    #[error("Sturm bracket [{lo}, {hi}] does not isolate a single eigenvalue")]
    Uncertified { lo: f64, hi: f64 },
}

impl OracleError {
    pub fn name(&self) -> &'static str {
        match self {
            OracleError::InvalidGrid(_) => "InvalidGrid",
            OracleError::GridTooCoarse { .. } => "GridTooCoarse",
            OracleError::BoxTooSmall(_) => "BoxTooSmall",
            OracleError::NoConvergence(_) => "NoConvergence",
            OracleError::NotBound(_) => "NotBound",
            OracleError::Uncertified { .. } => "Uncertified",
        }
    }
}

/// Uniform grid on `[r_min, r_max]` (GeV⁻¹).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub num_points: usize,
}

impl RadialGrid {
    pub const DEFAULT_R_MIN: f64 = 1e-9;
    pub const DEFAULT_R_MAX: f64 = 40.0;
    pub const DEFAULT_POINTS: usize = 8000;

    pub fn new(r_min: f64, r_max: f64, num_points: usize) -> Result<Self, OracleError> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(OracleError::InvalidGrid(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if num_points < 3 {
            return Err(OracleError::InvalidGrid(format!(
                "need at least 3 points, got {num_points}"
            )));
        }
        Ok(Self { r_min, r_max, num_points })
    }

    /// Default oracle grid, with the point count taken from
    /// `NU_SPECTRA_GRID_POINTS` when set.
    pub fn oracle_default() -> Result<Self, OracleError> {
        let points = match std::env::var(GRID_POINTS_ENV) {
            Ok(v) => v.trim().parse::<usize>().map_err(|_| {
                OracleError::InvalidGrid(format!("{GRID_POINTS_ENV}={v:?} is not an integer"))
            })?,
            Err(_) => Self::DEFAULT_POINTS,
        };
        Self::new(Self::DEFAULT_R_MIN, Self::DEFAULT_R_MAX, points)
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.num_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.num_points {
            self.r_max
        } else {
            self.r_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_points).map(move |i| self.point(i))
    }

    /// Same interval with half the spacing.
    pub fn refined(&self) -> Self {
        Self { num_points: 2 * (self.num_points - 1) + 1, ..*self }
    }
}

/// Relative L² residual of `u″ + [2ε₀(ε₁ − V) − κ(κ+1)/r²] u` over the grid,
/// with `u″` taken exactly from the closed form.
pub fn ode_residual(
    u: &ExpPolyFunction,
    p: &PotentialParams,
    split: &EnergySplit,
    kappa: i32,
    grid: &RadialGrid,
) -> f64 {
    let u2 = u.derivative().derivative();
    let k = f64::from(kappa);
    let (mut res, mut kinetic, mut potential) = (0.0, 0.0, 0.0);
    for r in grid.points() {
        let q = 2.0 * split.eps0 * (split.eps1 - p.potential(r)) - k * (k + 1.0) / (r * r);
        let (a, b) = (u2.eval(r), q * u.eval(r));
        res += (a + b).powi(2);
        kinetic += a * a;
        potential += b * b;
    }
    relative(res, kinetic, potential)
}

/// Relative L² residual of the lower-component equation
/// `dv/dr − (κ/r)v + (E − m − V)u = 0`.
pub fn dirac_residual(
    u: &ExpPolyFunction,
    v: &ExpPolyFunction,
    p: &PotentialParams,
    energy: f64,
    mass: f64,
    kappa: i32,
    grid: &RadialGrid,
) -> f64 {
    let dv = v.derivative();
    let k = f64::from(kappa);
    let (mut res, mut lhs, mut rhs) = (0.0, 0.0, 0.0);
    for r in grid.points() {
        let a = dv.eval(r) - k / r * v.eval(r);
        let b = (energy - mass - p.potential(r)) * u.eval(r);
        res += (a + b).powi(2);
        lhs += a * a;
        rhs += b * b;
    }
    relative(res, lhs, rhs)
}

fn relative(res: f64, x: f64, y: f64) -> f64 {
    let scale = x.sqrt() + y.sqrt();
    if scale == 0.0 {
        0.0
    } else {
        res.sqrt() / scale
    }
}
