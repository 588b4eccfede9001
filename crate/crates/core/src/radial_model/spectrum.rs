use super::{
    check_delta, energy_split, expansion_coefficients, invalid, to_nu_equation, EnergySplit,
    PotentialParams, QuantumNumbers, RadialError,
};
use crate::nu_engine::{
    pi_branches, quantization_residual, select_physical_branch, solve_k_candidates, NuBranch,
    NuError, Sign,
};
use crate::roots::{brent, scan_sign_changes, RootError};

/// `1 + 8ε₀a/δ³ + 4κ(κ+1) + 24ε₀c/δ⁴`.
pub fn radicand(p: &PotentialParams, eps0: f64, delta: f64, kappa: i32) -> f64 {
    let k = f64::from(kappa);
    let d3 = delta * delta * delta;
    1.0 + 8.0 * eps0 * p.a / d3 + 4.0 * k * (k + 1.0) + 24.0 * eps0 * p.c / (d3 * delta)
}

/// Closed-form `ε₁` for level `n` at fixed `ε₀`:
///
/// ```text
/// ε₁ = 3a/δ + 6c/δ² − 2ε₀(3a/δ² + b + 8c/δ³)² / [(2n+1) ± √radicand]²
/// ```
///
/// `Sign::Plus` is the physical branch; `Sign::Minus` gives `τ′ > 0` in the
/// engine and is exposed only for exploration.
pub fn closed_form_eps1(
    p: &PotentialParams,
    eps0: f64,
    delta: f64,
    qn: QuantumNumbers,
    sign: Sign,
) -> Result<f64, RadialError> {
    check_delta(delta)?;
    if !(eps0 > 0.0) {
        return Err(RadialError::NotBound(eps0));
    }
    let rad = radicand(p, eps0, delta, qn.kappa);
    if rad < 0.0 {
        return Err(RadialError::NegativeRadicand(rad));
    }
    let level = (2 * qn.n + 1) as f64;
    let denom = level + sign.factor() * rad.sqrt();
    if denom.abs() <= 4.0 * f64::EPSILON * level {
        return Err(RadialError::ZeroDenominator);
    }
    let d2 = delta * delta;
    let shift = 3.0 * p.a / delta + 6.0 * p.c / d2;
    let strength = 3.0 * p.a / d2 + p.b + 8.0 * p.c / (d2 * delta);
    Ok(shift - 2.0 * eps0 * strength * strength / (denom * denom))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineEigen {
    pub eps1: f64,
    pub branch: NuBranch,
    pub boundary: bool,
    pub quantization_residual: f64,
}

/// Quantization residual of the most negative-slope branch at a trial `ε₁`.
fn engine_residual(
    p: &PotentialParams,
    eps0: f64,
    delta: f64,
    qn: QuantumNumbers,
    eps1: f64,
) -> Result<(f64, NuBranch), RadialError> {
    let split = EnergySplit::from_eps(eps0, eps1);
    let coeffs = expansion_coefficients(p, &split, qn.kappa, delta)?;
    let eq = to_nu_equation(&coeffs);
    let mut best: Option<NuBranch> = None;
    for cand in solve_k_candidates(&eq)? {
        for b in pi_branches(&eq, cand.k)? {
            if best.as_ref().is_none_or(|cur| b.tau_slope < cur.tau_slope) {
                best = Some(b);
            }
        }
    }
    let branch = best.ok_or(NuError::NoPhysicalBranch { n: qn.n, slopes: Vec::new() })?;
    Ok((quantization_residual(&eq, &branch, qn.n), branch))
}

/// Solves the quantization condition of the generic engine for `ε₁` at
/// fixed `ε₀`, without using the closed-form spectrum.
///
/// Starting just below `ε₁ = 3a/δ + 6c/δ²` (where `A → 0⁺` and the residual
/// is large and positive) the scan steps geometrically downward until the
/// residual changes sign, then refines with Brent's method.
pub fn eps1_via_engine(
    p: &PotentialParams,
    eps0: f64,
    delta: f64,
    qn: QuantumNumbers,
) -> Result<EngineEigen, RadialError> {
    check_delta(delta)?;
    if !(eps0 > 0.0) {
        return Err(RadialError::NotBound(eps0));
    }
    let ceiling = 3.0 * p.a / delta + 6.0 * p.c / (delta * delta);
    let scale = ceiling.abs().max(1.0);
    let residual = |eps1: f64| engine_residual(p, eps0, delta, qn, eps1).map(|(r, _)| r);

    let mut gap = 1e-12 * scale;
    // Right at the ceiling A is within rounding of zero and the equation is
    // degenerate; step down until the engine accepts it.
    let mut f_upper = loop {
        match residual(ceiling - gap) {
            Ok(r) => break r,
            Err(RadialError::Engine(NuError::DiscriminantUnsolvable)) if gap < 1e-3 * scale => gap *= 1.01,
            Err(e) => return Err(e),
        }
    };
    let mut upper = ceiling - gap;
    let mut bracket = None;
    while gap < 1e12 * scale {
        gap *= 1.01;
        let lower = ceiling - gap;
        let f_lower = residual(lower)?;
        if f_upper > 0.0 && f_lower <= 0.0 {
            bracket = Some((lower, upper));
            break;
        }
        upper = lower;
        f_upper = f_lower;
    }
    let (lo, hi) = bracket.ok_or(RadialError::NoRoot { lo: ceiling - gap, hi: ceiling })?;
    let root = brent(
        |e| residual(e).unwrap_or(f64::NAN),
        lo,
        hi,
        1e-15 * scale,
        0.0,
        500,
    )
    .map_err(root_error)?;

    let (res, branch) = engine_residual(p, eps0, delta, qn, root.x)?;
    let selected = select_physical_branch(std::slice::from_ref(&branch), qn.n)?;
    Ok(EngineEigen {
        eps1: root.x,
        branch: selected.branch,
        boundary: selected.boundary,
        quantization_residual: res,
    })
}

fn root_error(e: RootError) -> RadialError {
    match e {
        RootError::NoConvergence(n) => RadialError::NoConvergence(n),
        RootError::NotBracketed { lo, hi, .. } => RadialError::NoRoot { lo, hi },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Energy bracket; `None` selects `(−m + 1e−6, m + 50·max(√a, b, c^(1/3), 1))`.
    pub bracket: Option<(f64, f64)>,
    pub scan_points: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 200, bracket: None, scan_points: 4000 }
    }
}

impl SolveOptions {
    pub fn default_bracket(p: &PotentialParams, mass: f64) -> (f64, f64) {
        let reach = p.a.sqrt().max(p.b).max(p.c.cbrt()).max(1.0);
        (-mass + 1e-6, mass + 50.0 * reach)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyResult {
    pub split: EnergySplit,
    pub branch_sign: Sign,
    pub delta: f64,
    pub iterations: usize,
    /// `(E − m) − ε₁(ε₀(E))` at the returned energy.
    pub residual: f64,
    /// `τ′ = 0` at the solution (only possible for `n = 0`).
    pub boundary_flag: bool,
    /// Number of accepted roots in the bracket; the lowest is returned.
    pub root_count: usize,
}

/// Solves `E − m = ε₁((E+m)/2)` for the closed-form spectrum.
pub fn solve_energy_selfconsistent(
    p: &PotentialParams,
    mass: f64,
    delta: f64,
    qn: QuantumNumbers,
    sign: Sign,
    opts: &SolveOptions,
) -> Result<EnergyResult, RadialError> {
    check_delta(delta)?;
    if !(opts.tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {}", opts.tol)));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(invalid("m", format!("must be positive, got {mass}")));
    }
    let (lo, hi) = opts.bracket.unwrap_or_else(|| SolveOptions::default_bracket(p, mass));

    let mut first_error = None;
    let mut evaluated = 0usize;
    let mut g = |e: f64| match closed_form_eps1(p, 0.5 * (e + mass), delta, qn, sign) {
        Ok(eps1) => {
            evaluated += 1;
            (e - mass) - eps1
        }
        Err(err) => {
            first_error.get_or_insert(err);
            f64::NAN
        }
    };

    let pairs = scan_sign_changes(&mut g, lo, hi, opts.scan_points);
    let mut roots = Vec::new();
    for (a, b) in pairs {
        let root = if a == b {
            crate::roots::Root { x: a, fx: 0.0, iterations: 0 }
        } else {
            brent(&mut g, a, b, 1e-3 * opts.tol, opts.tol, opts.max_iter).map_err(root_error)?
        };
        // Sign changes across poles of the minus branch do not converge to zeros.
        if root.fx.abs() <= opts.tol {
            roots.push(root);
        }
    }
    if evaluated == 0 {
        if let Some(err) = first_error {
            return Err(err);
        }
    }
    let root_count = roots.len();
    let best = roots
        .into_iter()
        .min_by(|x, y| x.x.total_cmp(&y.x))
        .ok_or(RadialError::NoRoot { lo, hi })?;

    let split = energy_split(best.x, mass);
    let coeffs = expansion_coefficients(p, &split, qn.kappa, delta)?;
    let tau_slope = 2.0 - 2.0 * coeffs.q();
    Ok(EnergyResult {
        split,
        branch_sign: sign,
        delta,
        iterations: best.iterations,
        residual: best.fx,
        boundary_flag: qn.n == 0 && tau_slope.abs() <= 1e-9,
        root_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaFlag {
    /// `dE/dδ` changes sign inside the interval and `δ*` is its zero.
    Stationary,
    /// `E` does not depend on `δ`; the interval midpoint is returned.
    DegenerateFlat,
    /// `E(δ)` is monotone on the interval; the endpoint with the smaller
    /// `|dE/dδ|` is returned.
    Monotone,
    /// The interval is a single point.
    SinglePoint,
}

impl DeltaFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            DeltaFlag::Stationary => "stationary",
            DeltaFlag::DegenerateFlat => "degenerate_flat",
            DeltaFlag::Monotone => "monotone",
            DeltaFlag::SinglePoint => "single_point",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSearch {
    pub lo: f64,
    pub hi: f64,
    pub scan_points: usize,
    pub sign: Sign,
    pub solve: SolveOptions,
}

impl Default for DeltaSearch {
    fn default() -> Self {
        Self {
            lo: 0.05,
            hi: 5.0,
            scan_points: 48,
            sign: Sign::Plus,
            solve: SolveOptions { tol: 1e-13, ..SolveOptions::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaChoice {
    pub delta: f64,
    pub flag: DeltaFlag,
    /// `dE/dδ` at the returned point (central difference).
    pub slope: f64,
}

/// Chooses the expansion point by minimal sensitivity: the `δ` at which
/// `|dE/dδ|` is smallest, refined by golden-section search.
pub fn optimal_delta(
    p: &PotentialParams,
    mass: f64,
    qn: QuantumNumbers,
    search: &DeltaSearch,
) -> Result<DeltaChoice, RadialError> {
    let (lo, hi) = (search.lo, search.hi);
    check_delta(lo)?;
    if !(hi >= lo) || !hi.is_finite() {
        return Err(invalid("delta", format!("search interval [{lo}, {hi}] is empty")));
    }
    let slope = |d: f64| -> Result<f64, RadialError> {
        let h = 1e-4 * d;
        let e = |x| {
            solve_energy_selfconsistent(p, mass, x, qn, search.sign, &search.solve)
                .map(|r| r.split.energy)
        };
        Ok((e(d + h)? - e(d - h)?) / (2.0 * h))
    };
    if lo == hi {
        return Ok(DeltaChoice { delta: lo, flag: DeltaFlag::SinglePoint, slope: slope(lo)? });
    }

    let count = search.scan_points.max(2);
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    let mut samples = Vec::with_capacity(count);
    let mut last_error = None;
    for i in 0..count {
        let d = if i == count - 1 { hi } else { lo * (ratio * i as f64).exp() };
        match slope(d) {
            Ok(s) => samples.push((d, s)),
            Err(e) => last_error = Some(e),
        }
    }
    if samples.is_empty() {
        return Err(last_error.unwrap_or(RadialError::NoRoot { lo, hi }));
    }

    let max_slope = samples.iter().fold(0.0_f64, |m, &(_, s)| m.max(s.abs()));
    if max_slope <= 1e-10 {
        let mid = 0.5 * (lo + hi);
        return Ok(DeltaChoice { delta: mid, flag: DeltaFlag::DegenerateFlat, slope: slope(mid)? });
    }

    if let Some(w) = samples.windows(2).find(|w| w[0].1.signum() != w[1].1.signum()) {
        let (a, b) = (w[0].0, w[1].0);
        let delta = golden_section(|d| slope(d).map(f64::abs).unwrap_or(f64::INFINITY), a, b, 1e-9 * b);
        return Ok(DeltaChoice { delta, flag: DeltaFlag::Stationary, slope: slope(delta)? });
    }

    let (first, last) = (samples[0], samples[samples.len() - 1]);
    let (delta, s) = if last.1.abs() <= first.1.abs() { last } else { first };
    log::warn!("E(delta) is monotone on [{lo}, {hi}]; using endpoint delta = {delta}");
    Ok(DeltaChoice { delta, flag: DeltaFlag::Monotone, slope: s })
}

fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
