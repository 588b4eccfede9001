//! The four subcommands as pure functions returning structured reports.
//!
//! Rendering to CSV/JSON lives in [`super::render`]; keeping the two apart
//! lets tests inspect numbers without parsing text.

use super::config::{DeltaMode, NuSolveConfig, RunConfig, WavefunctionConfig};
use super::CliError;
use crate::nu_engine::{
    lambda_n, pi_branches, quantization_residual, select_physical_branch, solve_k_candidates,
    HypergeometricEquation, KCandidate, NuBranch, NuError, SelectedBranch,
};
use crate::oracle::{
    ode_residual, quadrature, selfconsistent_oracle, OracleError, OracleOptions, RadialGrid,
    SelfConsistentOracle,
};
use crate::radial_model::{
    optimal_delta, solve_energy_selfconsistent, BoundState, Convention, DeltaFlag, DeltaSearch,
    EnergyResult, ExpPolyFunction, QuantumNumbers, RadialError, SolveOptions,
};
use rayon::prelude::*;

/// Relative agreement demanded of the two pipelines when `a = c = 0`.
pub const EXACT_LIMIT_TOL: f64 = 1e-5;

/// Points of the fine grid used for the quadrature norm cross-check.
pub const NORM_CHECK_POINTS: usize = 200_001;

/// A per-state failure, kept as data so one bad cell does not abort a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct CellError {
    pub name: &'static str,
    pub message: String,
}

impl From<RadialError> for CellError {
    fn from(e: RadialError) -> Self {
        Self { name: e.name(), message: e.to_string() }
    }
}

impl From<OracleError> for CellError {
    fn from(e: OracleError) -> Self {
        Self { name: e.name(), message: e.to_string() }
    }
}

impl From<CellError> for CliError {
    fn from(e: CellError) -> Self {
        CliError::Compute(format!("{}: {}", e.name, e.message))
    }
}

/// The expansion point actually used for a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaUsed {
    pub delta: f64,
    /// Set when `δ` was chosen automatically.
    pub flag: Option<DeltaFlag>,
}

pub fn resolve_delta(cfg: &RunConfig, qn: QuantumNumbers) -> Result<DeltaUsed, RadialError> {
    match cfg.delta {
        DeltaMode::Fixed(delta) => Ok(DeltaUsed { delta, flag: None }),
        DeltaMode::Auto => {
            let search = DeltaSearch { sign: cfg.branch, ..DeltaSearch::default() };
            let choice = optimal_delta(&cfg.params, cfg.mass, qn, &search)?;
            Ok(DeltaUsed { delta: choice.delta, flag: Some(choice.flag) })
        }
    }
}

fn solve_options(cfg: &RunConfig) -> SolveOptions {
    SolveOptions { tol: cfg.tol, ..SolveOptions::default() }
}

fn closed_form_energy(cfg: &RunConfig, qn: QuantumNumbers) -> Result<(DeltaUsed, EnergyResult), RadialError> {
    let delta = resolve_delta(cfg, qn)?;
    let energy =
        solve_energy_selfconsistent(&cfg.params, cfg.mass, delta.delta, qn, cfg.branch, &solve_options(cfg))?;
    Ok((delta, energy))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCell {
    pub delta: DeltaUsed,
    pub energy: EnergyResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub qn: QuantumNumbers,
    pub outcome: Result<SpectrumCell, CellError>,
}

/// Closed-form self-consistent energies for every requested `(n, κ)`.
pub fn cmd_spectrum(cfg: &RunConfig) -> Vec<SpectrumRow> {
    cfg.states()
        .into_par_iter()
        .map(|qn| SpectrumRow {
            qn,
            outcome: closed_form_energy(cfg, qn)
                .map(|(delta, energy)| SpectrumCell { delta, energy })
                .map_err(CellError::from),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateCell {
    pub delta: DeltaUsed,
    pub closed_form: EnergyResult,
    pub oracle: SelfConsistentOracle,
    pub abs_diff: f64,
    pub rel_diff: f64,
    /// `ode_residual` of the closed-form state against the unexpanded potential.
    pub expansion_residual: f64,
    /// The `24ε₀c/δ⁴` radicand term, reported when `c > 0`.
    pub c_radicand_term: Option<f64>,
    /// For `a = c = 0`, whether `rel_diff < EXACT_LIMIT_TOL`.
    pub exact_limit_ok: Option<bool>,
}

impl ValidateCell {
    pub fn passed(&self) -> bool {
        self.exact_limit_ok != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateRow {
    pub qn: QuantumNumbers,
    pub outcome: Result<ValidateCell, CellError>,
}

impl ValidateRow {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(cell) if cell.passed())
    }
}

/// Closed form against the finite-difference oracle for every `(n, κ)`.
pub fn cmd_validate(cfg: &RunConfig) -> Vec<ValidateRow> {
    cfg.states()
        .into_par_iter()
        .map(|qn| ValidateRow { qn, outcome: validate_cell(cfg, qn) })
        .collect()
}

fn validate_cell(cfg: &RunConfig, qn: QuantumNumbers) -> Result<ValidateCell, CellError> {
    let p = &cfg.params;
    let (delta, closed_form) = closed_form_energy(cfg, qn)?;
    let opts = OracleOptions { tol: cfg.oracle_tol, ..OracleOptions::default() };
    let oracle = selfconsistent_oracle(p, cfg.mass, qn, &cfg.grid, &opts)?;

    let e_cf = closed_form.split.energy;
    let abs_diff = (e_cf - oracle.energy).abs();
    let rel_diff = abs_diff / oracle.energy.abs().max(f64::MIN_POSITIVE);
    let expansion_residual = if p.is_free() {
        // no normalizable state exists; the comparison is on energies alone
        0.0
    } else {
        let state = BoundState::assemble(p, qn, closed_form.clone(), Convention::Reduced)?;
        ode_residual(&state.upper, p, &closed_form.split, qn.kappa, &cfg.grid)
    };
    let d = delta.delta;
    Ok(ValidateCell {
        delta,
        abs_diff,
        rel_diff,
        expansion_residual,
        c_radicand_term: (p.c > 0.0).then(|| 24.0 * closed_form.split.eps0 * p.c / (d * d * d * d)),
        exact_limit_ok: (p.a == 0.0 && p.c == 0.0).then_some(rel_diff < EXACT_LIMIT_TOL),
        closed_form,
        oracle,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormCheck {
    /// `∫u² dr` of the normalized state from the Gamma-function formula.
    pub closed_form: f64,
    /// The same integral by composite Simpson on a fine grid.
    pub quadrature: f64,
    pub quadrature_error: f64,
    pub grid: RadialGrid,
}

impl NormCheck {
    pub fn abs_diff(&self) -> f64 {
        (self.closed_form - self.quadrature).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionReport {
    pub delta: DeltaUsed,
    pub state: BoundState,
    /// `(r, u(r), v(r))`.
    pub samples: Vec<(f64, f64, f64)>,
    pub node_count: usize,
    pub norm_check: NormCheck,
    pub ode_residual: f64,
}

/// Radius beyond which `u²` is below `e^(−90)` of its peak.
pub fn decay_radius(u: &ExpPolyFunction) -> f64 {
    let power = u.gamma + u.terms.len().saturating_sub(1) as f64;
    let beta = u.beta.max(f64::MIN_POSITIVE);
    let peak = (power / beta).max(1.0 / beta);
    let log_env = |r: f64| power * (r / peak).ln() - beta * (r - peak);
    let mut r = 2.0 * peak;
    while log_env(r) > -45.0 {
        r *= 1.25;
    }
    r
}

/// Closed-form normalized state sampled on the requested radii.
pub fn cmd_wavefunction(cfg: &RunConfig, wf: &WavefunctionConfig) -> Result<WavefunctionReport, CellError> {
    let p = &cfg.params;
    let qn = wf.state;
    let (delta, energy) = closed_form_energy(cfg, qn)?;
    let split = energy.split;
    let state = BoundState::assemble(p, qn, energy, Convention::Reduced)?;
    let samples = wf
        .radii()
        .into_iter()
        .map(|r| (r, state.upper.eval(r), state.lower.eval(r)))
        .collect();

    let grid = RadialGrid::new(1e-12, decay_radius(&state.upper), NORM_CHECK_POINTS)
        .map_err(CellError::from)?;
    let sq = quadrature(|r| state.upper.eval(r).powi(2), &grid);
    let norm_check = NormCheck {
        closed_form: state.upper.norm_squared()?,
        quadrature: sq.value,
        quadrature_error: sq.error_estimate,
        grid,
    };
    let residual_grid = RadialGrid::new(1e-6, grid.r_max, 20_001).map_err(CellError::from)?;
    let ode_residual = ode_residual(&state.upper, p, &split, qn.kappa, &residual_grid);
    Ok(WavefunctionReport {
        delta,
        node_count: state.upper.node_count(),
        samples,
        norm_check,
        ode_residual,
        state,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuSolveReport {
    pub equation: HypergeometricEquation,
    pub n: usize,
    pub candidates: Vec<(KCandidate, Vec<NuBranch>)>,
    pub selected: SelectedBranch,
    pub lambda_n: f64,
    /// `K + π′` of the selected branch.
    pub lambda: f64,
    pub quantization_residual: f64,
}

/// Runs the generic engine on a user-supplied `(σ, τ̃, σ̃)`.
pub fn cmd_nu_solve(cfg: &NuSolveConfig) -> Result<NuSolveReport, CliError> {
    let engine = |e: NuError| CliError::Compute(format!("{}: {e}", e.name()));
    let equation =
        HypergeometricEquation::new(cfg.sigma.clone(), cfg.tau_tilde.clone(), cfg.sigma_tilde.clone())
            .map_err(|e| match e {
                NuError::DegreeViolation { .. } | NuError::ZeroSigma => {
                    CliError::Config(format!("{}: {e}", e.name()))
                }
                other => engine(other),
            })?;
    let mut candidates = Vec::new();
    for cand in solve_k_candidates(&equation).map_err(engine)? {
        candidates.push((cand, pi_branches(&equation, cand.k).map_err(engine)?));
    }
    let all: Vec<NuBranch> = candidates.iter().flat_map(|(_, b)| b.iter().cloned()).collect();
    let selected = select_physical_branch(&all, cfg.n).map_err(engine)?;
    let branch = &selected.branch;
    Ok(NuSolveReport {
        lambda_n: lambda_n(&equation, branch, cfg.n),
        lambda: branch.k + branch.pi.coeff(1),
        quantization_residual: quantization_residual(&equation, branch, cfg.n),
        n: cfg.n,
        candidates,
        selected,
        equation,
    })
}
