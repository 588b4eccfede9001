use super::{OracleError, RadialGrid};
use crate::radial_model::{energy_split, EnergySplit, PotentialParams, QuantumNumbers};

/// Number of eigenvalues of the symmetric tridiagonal matrix
/// `(diag, off)` strictly below `x`, from the pivots of the LDLᵀ
/// factorization of `T − x`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] / q };
        q = d - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SturmEigenvalue {
    pub value: f64,
    /// `sturm_count(lo) = index` and `sturm_count(hi) = index + 1`.
    pub bracket: (f64, f64),
    pub counts: (usize, usize),
}

/// The `index`-th smallest eigenvalue (zero-based) by bisection on the
/// Sturm count, starting from Gershgorin bounds.
fn sturm_bisect(diag: &[f64], off: &[f64], index: usize) -> Result<SturmEigenvalue, OracleError> {
    let m = diag.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..m {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < m { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    let pad = 1e-12 * (hi - lo).abs().max(1.0);
    lo -= pad;
    hi += pad;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let counts = (sturm_count(diag, off, lo), sturm_count(diag, off, hi));
    if counts.0 != index || counts.1 != index + 1 {
        return Err(OracleError::Uncertified { lo, hi });
    }
    Ok(SturmEigenvalue { value: 0.5 * (lo + hi), bracket: (lo, hi), counts })
}

/// Inverse iteration for the eigenvector at a converged eigenvalue.
fn inverse_iteration(diag: &[f64], off: &[f64], shift: f64) -> Vec<f64> {
    let m = diag.len();
    let tiny = f64::EPSILON * diag.iter().fold(0.0_f64, |a, d| a.max(d.abs())).max(1.0);
    let mut x = vec![1.0; m];
    let mut c = vec![0.0; m];
    let mut y = vec![0.0; m];
    for _ in 0..3 {
        // Thomas algorithm on (T − shift) y = x
        let guard = |p: f64| if p.abs() < tiny { tiny.copysign(p) } else { p };
        let mut piv = guard(diag[0] - shift);
        c[0] = if m > 1 { off[0] / piv } else { 0.0 };
        y[0] = x[0] / piv;
        for i in 1..m {
            piv = guard(diag[i] - shift - off[i - 1] * c[i - 1]);
            c[i] = if i + 1 < m { off[i] / piv } else { 0.0 };
            y[i] = (x[i] - off[i - 1] * y[i - 1]) / piv;
        }
        for i in (0..m - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        let norm = y.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
    }
    x
}

/// Tridiagonal discretization of `−u″/(2μ) + [V + κ(κ+1)/(2μr²)]u` on the
/// interior nodes with `u(r_min) = u(r_max) = 0`.
fn hamiltonian(
    p: &PotentialParams,
    mu: f64,
    centrifugal: f64,
    grid: &RadialGrid,
) -> (Vec<f64>, Vec<f64>) {
    let h = grid.spacing();
    let kinetic = 1.0 / (2.0 * mu * h * h);
    let diag: Vec<f64> = (1..grid.num_points - 1)
        .map(|i| {
            let r = grid.point(i);
            2.0 * kinetic + p.potential(r) + centrifugal / (2.0 * mu * r * r)
        })
        .collect();
    let off = vec![-kinetic; diag.len().saturating_sub(1)];
    (diag, off)
}

/// Single-grid eigenvalue of level `n` (no Richardson step, no eigenvector).
pub fn fd_eigenvalue(
    p: &PotentialParams,
    mu: f64,
    qn: QuantumNumbers,
    grid: &RadialGrid,
) -> Result<SturmEigenvalue, OracleError> {
    if !(mu > 0.0) {
        return Err(OracleError::NotBound(mu));
    }
    let (diag, off) = hamiltonian(p, mu, qn.centrifugal(), grid);
    if diag.len() <= qn.n {
        return Err(OracleError::InvalidGrid(format!(
            "{} interior points cannot resolve level {}",
            diag.len(),
            qn.n
        )));
    }
    sturm_bisect(&diag, &off, qn.n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Eigenvalue on `grid` (spacing h).
    pub eigenvalue: f64,
    /// Eigenvalue on the refined grid (spacing h/2).
    pub refined_eigenvalue: f64,
    /// `(4 ε(h/2) − ε(h))/3`.
    pub richardson_estimate: f64,
    pub grid: RadialGrid,
    pub bracket: (f64, f64),
    /// `u` on every node of `grid`, boundaries included, `∫u² dr = 1` (trapezoid).
    pub eigenvector: Vec<f64>,
    pub node_count: usize,
}

/// Finite-difference solution of the fixed-mass radial equation
/// `−u″/(2μ) + [V(r) + κ(κ+1)/(2μr²)] u = ε u` for level `n`.
pub fn fd_eigen_fixed_mass(
    p: &PotentialParams,
    mu: f64,
    qn: QuantumNumbers,
    grid: &RadialGrid,
) -> Result<OracleResult, OracleError> {
    if !(mu > 0.0) {
        return Err(OracleError::NotBound(mu));
    }
    let (diag, off) = hamiltonian(p, mu, qn.centrifugal(), grid);
    if diag.len() <= qn.n {
        return Err(OracleError::InvalidGrid(format!(
            "{} interior points cannot resolve level {}",
            diag.len(),
            qn.n
        )));
    }
    let coarse = sturm_bisect(&diag, &off, qn.n)?;
    let refined = fd_eigenvalue(p, mu, qn, &grid.refined())?;

    let interior = inverse_iteration(&diag, &off, coarse.value);
    let mut u = Vec::with_capacity(grid.num_points);
    u.push(0.0);
    u.extend_from_slice(&interior);
    u.push(0.0);

    let peak = u.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let threshold = 1e-9 * peak;
    let first = u.iter().find(|v| v.abs() > threshold).copied().unwrap_or(1.0);
    let h = grid.spacing();
    let norm = (h * u.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let scale = first.signum() / norm;
    for v in &mut u {
        *v *= scale;
    }

    let node_count = count_sign_changes(&u, threshold * scale.abs());
    if node_count != qn.n {
        return Err(OracleError::GridTooCoarse { expected: qn.n, found: node_count });
    }
    let tail_start = grid.num_points - grid.num_points / 20 - 1;
    let tail = u[tail_start..].iter().fold(0.0_f64, |a, v| a.max(v.abs())) / (peak * scale.abs());
    if tail > 1e-8 {
        return Err(OracleError::BoxTooSmall(tail));
    }
    let v_edge = p.potential(grid.r_max) + qn.centrifugal() / (2.0 * mu * grid.r_max * grid.r_max);
    if v_edge <= coarse.value {
        log::warn!(
            "classical turning point beyond r_max = {} (V_eff = {v_edge}, eps = {})",
            grid.r_max,
            coarse.value
        );
    }

    Ok(OracleResult {
        eigenvalue: coarse.value,
        refined_eigenvalue: refined.value,
        richardson_estimate: (4.0 * refined.value - coarse.value) / 3.0,
        grid: *grid,
        bracket: coarse.bracket,
        eigenvector: u,
        node_count,
    })
}

fn count_sign_changes(u: &[f64], threshold: f64) -> usize {
    let mut prev = 0.0_f64;
    let mut count = 0;
    for &v in u {
        if v.abs() <= threshold {
            continue;
        }
        if prev != 0.0 && prev.signum() != v.signum() {
            count += 1;
        }
        prev = v;
    }
    count
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Weight of the previous iterate; 0 is the undamped map.
    pub damping: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 200, damping: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfConsistentOracle {
    pub energy: f64,
    pub split: EnergySplit,
    pub iterations: usize,
    /// Last fixed-mass solve; `None` in the free limit, which has no bound state.
    pub fixed_mass: Option<OracleResult>,
}

/// Closes the `ε₀(E)` loop numerically:
/// `E ← d·E + (1 − d)·(m + ε(μ = (E+m)/2))`, started at `E = m`, using the
/// Richardson-extrapolated eigenvalue at every step.
pub fn selfconsistent_oracle(
    p: &PotentialParams,
    mass: f64,
    qn: QuantumNumbers,
    grid: &RadialGrid,
    opts: &OracleOptions,
) -> Result<SelfConsistentOracle, OracleError> {
    if p.is_free() {
        return Ok(SelfConsistentOracle {
            energy: mass,
            split: energy_split(mass, mass),
            iterations: 1,
            fixed_mass: None,
        });
    }
    let mut energy = mass;
    for iter in 1..=opts.max_iter {
        let mu = 0.5 * (energy + mass);
        let fixed = fd_eigen_fixed_mass(p, mu, qn, grid)?;
        let target = mass + fixed.richardson_estimate;
        let next = opts.damping * energy + (1.0 - opts.damping) * target;
        let step = (next - energy).abs();
        energy = next;
        if step < opts.tol {
            return Ok(SelfConsistentOracle {
                energy,
                split: energy_split(energy, mass),
                iterations: iter,
                fixed_mass: Some(fixed),
            });
        }
    }
    Err(OracleError::NoConvergence(opts.max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_count_on_known_matrix() {
        // tridiag(−1, 2, −1) of size 4: eigenvalues 2 − 2cos(kπ/5)
        let diag = vec![2.0; 4];
        let off = vec![-1.0; 3];
        let eig: Vec<f64> = (1..=4)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / 5.0).cos())
            .collect();
        assert_eq!(sturm_count(&diag, &off, 0.0), 0);
        assert_eq!(sturm_count(&diag, &off, 5.0), 4);
        for (k, &e) in eig.iter().enumerate() {
            assert_eq!(sturm_count(&diag, &off, e + 1e-9), k + 1);
            let found = sturm_bisect(&diag, &off, k).unwrap();
            assert!((found.value - e).abs() < 1e-14);
            assert_eq!(found.counts, (k, k + 1));
        }
    }

    #[test]
    fn inverse_iteration_recovers_sine_mode() {
        let m = 50;
        let diag = vec![2.0; m];
        let off = vec![-1.0; m - 1];
        let e = sturm_bisect(&diag, &off, 1).unwrap().value;
        let v = inverse_iteration(&diag, &off, e);
        let theta = 2.0 * std::f64::consts::PI / (m + 1) as f64;
        let peak = (1..=m).map(|i| (i as f64 * theta).sin().abs()).fold(0.0, f64::max);
        let sign = v[0].signum();
        for (i, vi) in v.iter().enumerate() {
            let want = ((i + 1) as f64 * theta).sin() / peak;
            assert!((sign * vi - want).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_nonpositive_mass() {
        let p = PotentialParams::coulomb(1.0);
        let grid = RadialGrid::new(1e-9, 20.0, 100).unwrap();
        let qn = QuantumNumbers::new(0, -1).unwrap();
        assert_eq!(fd_eigen_fixed_mass(&p, 0.0, qn, &grid), Err(OracleError::NotBound(0.0)));
    }

    #[test]
    fn small_box_is_detected() {
        let p = PotentialParams::coulomb(1.0);
        let grid = RadialGrid::new(1e-9, 6.0, 2000).unwrap();
        let qn = QuantumNumbers::new(1, -1).unwrap();
        assert!(matches!(fd_eigen_fixed_mass(&p, 1.0, qn, &grid), Err(OracleError::BoxTooSmall(_))));
    }

    #[test]
    fn free_limit_short_circuits() {
        let p = PotentialParams::new(0.0, 0.0, 0.0).unwrap();
        let grid = RadialGrid::new(1e-9, 40.0, 1000).unwrap();
        let qn = QuantumNumbers::new(0, -1).unwrap();
        let r = selfconsistent_oracle(&p, 1.0, qn, &grid, &OracleOptions::default()).unwrap();
        assert_eq!((r.energy, r.iterations), (1.0, 1));
    }
}
