//! Worked examples frozen against independent oracles: hand algebra coded
//! separately from the library, brute-force scans, numeric Taylor checks and
//! Simpson quadrature.

use nu_spectra::nu_engine::{
    lambda_n, pi_branches, quantization_residual, select_physical_branch, solution_factors,
    solve_k_candidates, HypergeometricEquation, NuError, Sign,
};
use nu_spectra::oracle::{
    dirac_residual, fd_eigen_fixed_mass, ode_residual, quadrature, selfconsistent_oracle,
    OracleOptions, RadialGrid,
};
use nu_spectra::polynomial::Polynomial;
use nu_spectra::radial_model::{
    build_wavefunction, closed_form_eps1, eps1_via_engine, expansion_coefficients,
    inverse_power_expansion, lower_component, normalize, optimal_delta,
    solve_energy_selfconsistent, to_nu_equation, Convention, DeltaFlag, DeltaSearch,
    EnergySplit, ExpPolyFunction, PotentialParams, QuantumNumbers, SolveOptions,
};

fn poly(c: &[f64]) -> Polynomial {
    Polynomial::new(c.to_vec())
}

fn qn(n: usize, kappa: i32) -> QuantumNumbers {
    QuantumNumbers::new(n, kappa).unwrap()
}

/// The equation `σ = s², τ̃ = 2s, σ̃ = −Ā + B̄s − C̄s²`.
fn bar_equation(a: f64, b: f64, c: f64) -> HypergeometricEquation {
    HypergeometricEquation::new(poly(&[0.0, 0.0, 1.0]), poly(&[0.0, 2.0]), poly(&[-a, b, -c])).unwrap()
}

fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!((got - want).abs() <= tol, "{what}: got {got}, want {want} (tol {tol})");
}

// ---------------------------------------------------------------- nu_engine

#[test]
fn k_for_bar_equation() {
    // B̄² = 4Ā(C̄ + K) → K = B̄²/(4Ā) − C̄ = 16/8 − 1 = 1
    let eq = bar_equation(2.0, 4.0, 1.0);
    let ks = solve_k_candidates(&eq).unwrap();
    assert_eq!(ks.len(), 1);
    assert_close(ks[0].k, 1.0, 1e-14, "K");
    // (√(C̄+K)s − √Ā)² = Ā − B̄s + (C̄+K)s² must equal the radicand
    let root = poly(&[-(2.0_f64).sqrt(), (2.0_f64).sqrt()]);
    let want = &root * &root;
    let got = eq.radicand(ks[0].k);
    for i in 0..3 {
        assert_close(got.coeff(i), want.coeff(i), 1e-14, "radicand coefficient");
    }
}

#[test]
fn k_for_oscillator_form() {
    // σ = 1, τ̃ = −2s, σ̃ = 1 − s²: radicand = 2s² + (K − 1)
    let eq = HypergeometricEquation::new(poly(&[1.0]), poly(&[0.0, -2.0]), poly(&[1.0, 0.0, -1.0])).unwrap();
    let ks = solve_k_candidates(&eq).unwrap();
    assert!(!ks.is_empty());
    for cand in ks {
        let r = eq.radicand(cand.k);
        let (r0, r1, r2) = (r.coeff(0), r.coeff(1), r.coeff(2));
        let scale = r.max_abs_coeff().powi(2);
        assert!((r1 * r1 - 4.0 * r0 * r2).abs() < 1e-12 * scale, "radicand not square at K = {}", cand.k);
        assert_close(cand.k, 1.0, 1e-12, "K");
    }
}

#[test]
fn identically_square_radicand_is_degenerate() {
    let eq = HypergeometricEquation::new(poly(&[0.0, 0.0, 1.0]), poly(&[0.0, 2.0]), Polynomial::zero()).unwrap();
    assert_eq!(solve_k_candidates(&eq), Err(NuError::DegenerateFamily));
}

#[test]
fn branches_for_bar_equation() {
    // radicand 2(s − 1)² → π = ±√2(s − 1), τ = 2s + 2π, τ′ = 2 ± 2√2
    let eq = bar_equation(2.0, 4.0, 1.0);
    let branches = pi_branches(&eq, 1.0).unwrap();
    assert_eq!(branches.len(), 2);
    let mut slopes: Vec<f64> = branches.iter().map(|b| b.tau_slope).collect();
    slopes.sort_by(f64::total_cmp);
    let r2 = 2.0_f64.sqrt();
    assert_close(slopes[0], 2.0 - 2.0 * r2, 1e-14, "minus slope");
    assert_close(slopes[1], 2.0 + 2.0 * r2, 1e-14, "plus slope");
    for b in &branches {
        // (π − (σ′−τ̃)/2)² − radicand = 0 coefficient-wise
        let diff = &b.pi - &eq.half_shift();
        let res = &(&diff * &diff) - &eq.radicand(1.0);
        assert!(res.max_abs_coeff() < 1e-10, "branch {:?} residual {res}", b.sign);
    }
}

#[test]
fn branches_for_hydrogen_form() {
    // Ā = 1, B̄ = 2, C̄ = 0, K = 1: π = ±(1 − s), slopes 0 and 4
    let eq = bar_equation(1.0, 2.0, 0.0);
    let ks = solve_k_candidates(&eq).unwrap();
    assert_close(ks[0].k, 1.0, 1e-14, "K");
    let branches = pi_branches(&eq, 1.0).unwrap();
    let mut slopes: Vec<f64> = branches.iter().map(|b| b.tau_slope).collect();
    slopes.sort_by(f64::total_cmp);
    assert_close(slopes[0], 0.0, 1e-14, "slope");
    assert_close(slopes[1], 4.0, 1e-14, "slope");
    let sel = select_physical_branch(&branches, 0).unwrap();
    assert!(sel.boundary);
    assert_close(sel.branch.pi.coeff(0), 1.0, 1e-14, "π₀");
    assert_close(sel.branch.pi.coeff(1), -1.0, 1e-14, "π₁");
    assert!(select_physical_branch(&branches, 1).is_err());
    // n = 0: λ₀ = 0 and K + π′ = 1 − 1 = 0, so the level is on-shell
    assert_eq!(lambda_n(&eq, &sel.branch, 0), 0.0);
    assert_close(quantization_residual(&eq, &sel.branch, 0), 0.0, 1e-14, "residual");
}

#[test]
fn hydrogen_factors_reproduce_r_exp() {
    // hydrogen form with x = 1/r: Φ(x) = x^(−1) e^(−1/x) = r e^(−r)
    let eq = bar_equation(1.0, 2.0, 0.0);
    let branches = pi_branches(&eq, 1.0).unwrap();
    let sel = select_physical_branch(&branches, 0).unwrap();
    let spec = solution_factors(&eq, &sel.branch, 0).unwrap();
    let reference = |r: f64| r * (-r).exp();
    let ratio = spec.solution(1.0) / reference(1.0);
    for r in [0.1, 0.5, 2.0, 5.0, 12.0] {
        assert_close(spec.solution(1.0 / r) / reference(r), ratio, 1e-12 * ratio.abs(), "u/(r e^-r)");
    }
}

#[test]
fn rodrigues_factors_for_bar_equation() {
    // π = √Ā − (B̄/(2√Ā))s: Φ = s^(−B̄/(2√Ā)) e^(−√Ā/s), ρ = s^(−B̄/√Ā) e^(−2√Ā/s)
    let (a, b) = (2.0_f64, 4.0_f64);
    let eq = bar_equation(a, b, 1.0);
    let branch = pi_branches(&eq, 1.0).unwrap().into_iter().find(|br| br.tau_slope < 0.0).unwrap();
    assert_close(branch.pi.coeff(0), a.sqrt(), 1e-14, "π₀");
    assert_close(branch.pi.coeff(1), -b / (2.0 * a.sqrt()), 1e-14, "π₁");
    let spec = solution_factors(&eq, &branch, 2).unwrap();
    assert_close(spec.phi.power, -b / (2.0 * a.sqrt()), 1e-14, "Φ power");
    assert_close(spec.phi.inv_rate, -a.sqrt(), 1e-14, "Φ rate");
    assert_close(spec.weight.power, -b / a.sqrt(), 1e-14, "ρ power");
    assert_close(spec.weight.inv_rate, -2.0 * a.sqrt(), 1e-14, "ρ rate");
    for s in [0.3, 0.7, 1.1, 1.9, 3.2] {
        assert!(spec.weight_residual(s) < 1e-10, "(σρ)′ − τρ at {s}");
        assert!(spec.phi_residual(s) < 1e-10, "σΦ′ − πΦ at {s}");
    }
    assert_eq!(solution_factors(&eq, &branch, 0).unwrap().chi.degree(), Some(0));
}

// ---------------------------------------------------------------- radial_model

#[test]
fn taylor_oracle_for_inverse_powers() {
    // quadratic model of a/x + c/x² about δ, checked at δ(1 ± 10⁻⁴)
    for &(a, c, delta) in &[(0.1, 0.01, 0.3), (1.0, 0.0, 2.0), (0.0, 0.5, 0.7), (0.3, 0.2, 1.5)] {
        let [k0, k1, k2] = inverse_power_expansion(a, c, delta);
        for t in [1.0 - 1e-4, 1.0 + 1e-4] {
            let x = delta * t;
            let exact = a / x + c / (x * x);
            let model = k0 + k1 * x + k2 * x * x;
            let scale = exact.abs().max(1e-300);
            assert!((exact - model).abs() / scale < 1e-8, "(a, c, δ) = ({a}, {c}, {delta})");
        }
        // hand coefficients
        assert_close(k0, 3.0 * a / delta + 6.0 * c / delta.powi(2), 1e-14, "k0");
        assert_close(k1, -(3.0 * a / delta.powi(2) + 8.0 * c / delta.powi(3)), 1e-12, "k1");
        assert_close(k2, a / delta.powi(3) + 3.0 * c / delta.powi(4), 1e-12, "k2");
    }
}

#[test]
fn engine_round_trip_k() {
    // K = B̄²/(4Ā) − C̄ with Ā = 2A, B̄ = 2B, C̄ = 2C₁
    let p = PotentialParams::new(0.1, 0.4, 0.01).unwrap();
    let coeffs = expansion_coefficients(&p, &EnergySplit::from_eps(0.8, -0.3), -2, 0.6).unwrap();
    let (ab, bb, cb) = (2.0 * coeffs.a_coeff, 2.0 * coeffs.b_coeff, 2.0 * coeffs.c1_coeff);
    let ks = solve_k_candidates(&to_nu_equation(&coeffs)).unwrap();
    assert_eq!(ks.len(), 1);
    let want = bb * bb / (4.0 * ab) - cb;
    assert_close(ks[0].k, want, 1e-12 * want.abs(), "K");
}

#[test]
fn coulomb_closed_form() {
    let p = PotentialParams::coulomb(1.0);
    let eps1 = closed_form_eps1(&p, 1.0, 0.7, qn(0, -1), Sign::Plus).unwrap();
    assert_close(eps1, -0.5, 1e-15, "ε₁");
}

/// ε₁ for the Cornell example evaluated step by step, independently of the library.
fn cornell_hand(a: f64, b: f64, eps0: f64, delta: f64) -> f64 {
    let radicand = 1.0 + 8.0 * eps0 * a / delta.powi(3);
    let numerator = 3.0 * a / delta.powi(2) + b;
    let denominator = 1.0 + radicand.sqrt();
    3.0 * a / delta - 2.0 * eps0 * numerator.powi(2) / denominator.powi(2)
}

#[test]
fn cornell_closed_form_example() {
    let p = PotentialParams::new(0.1, 0.4, 0.0).unwrap();
    let eps1 = closed_form_eps1(&p, 0.65, 0.3, qn(0, -1), Sign::Plus).unwrap();
    // hand figures: radicand ≈ 20.259, √ ≈ 4.5010, ε₁ ≈ 0.401
    let rad: f64 = 1.0 + 8.0 * 0.65 * 0.1 / 0.027;
    assert_close(rad, 20.259, 1e-3, "radicand");
    assert_close(rad.sqrt(), 4.5010, 1e-4, "√radicand");
    assert_close(eps1, cornell_hand(0.1, 0.4, 0.65, 0.3), 1e-14, "ε₁ vs hand formula");
    assert_close(eps1, 0.401, 5e-4, "ε₁ ≈ 0.401");
    // regression pin
    assert_close(eps1, 0.401_245_116_7, 1e-9, "ε₁ pinned");
}

#[test]
fn engine_reproduces_closed_form_for_cornell() {
    let p = PotentialParams::new(0.1, 0.4, 0.01).unwrap();
    let (eps0, delta, q) = (0.9, 0.8, qn(1, -2));
    let cf = closed_form_eps1(&p, eps0, delta, q, Sign::Plus).unwrap();
    let coeffs = expansion_coefficients(&p, &EnergySplit::from_eps(eps0, cf), q.kappa, delta).unwrap();
    let eq = to_nu_equation(&coeffs);
    let branches: Vec<_> = solve_k_candidates(&eq)
        .unwrap()
        .into_iter()
        .flat_map(|k| pi_branches(&eq, k.k).unwrap())
        .collect();
    let sel = select_physical_branch(&branches, q.n).unwrap();
    assert!(sel.branch.tau_slope <= 0.0);
    assert!(quantization_residual(&eq, &sel.branch, q.n).abs() < 1e-8);
    let engine = eps1_via_engine(&p, eps0, delta, q).unwrap();
    assert_close(engine.eps1, cf, 1e-8, "engine ε₁");
}

#[test]
fn coulomb_self_consistent_energy() {
    // E − 1 = −(E + 1)/4 → E = 0.6; brute-force scan of g(E) as a second oracle
    let p = PotentialParams::coulomb(1.0);
    let r = solve_energy_selfconsistent(&p, 1.0, 0.5, qn(0, -1), Sign::Plus, &SolveOptions::default()).unwrap();
    assert_close(r.split.energy, 0.6, 1e-10, "E");
    assert_close(r.split.eps0, 0.8, 1e-10, "ε₀");
    assert_close(r.split.eps1, -0.4, 1e-10, "ε₁");
    let g = |e: f64| (e - 1.0) + 0.5 * (e + 1.0) * 0.5;
    let scan = (0..=200_000)
        .map(|i| -0.99 + 2.0 * i as f64 / 200_000.0)
        .min_by(|x, y| g(*x).abs().total_cmp(&g(*y).abs()))
        .unwrap();
    assert_close(r.split.energy, scan, 1e-5, "E vs scan");
}

fn coulomb_coeffs(n: usize) -> nu_spectra::radial_model::ExpansionCoefficients {
    // ε₀ = 1, b = 1, κ = −1
    let p = PotentialParams::coulomb(1.0);
    let eps1 = -0.5 / ((n + 1) as f64).powi(2);
    expansion_coefficients(&p, &EnergySplit::from_eps(1.0, eps1), -1, 0.4).unwrap()
}

#[test]
fn hydrogen_wavefunctions() {
    let u0 = build_wavefunction(&coulomb_coeffs(0), qn(0, -1), Sign::Plus, Convention::Reduced).unwrap();
    let (u0, c0) = normalize(&u0).unwrap();
    let u1 = build_wavefunction(&coulomb_coeffs(1), qn(1, -1), Sign::Plus, Convention::Reduced).unwrap();
    let (u1, _) = normalize(&u1).unwrap();
    // reference shapes normalized by their own Gamma integrals:
    // ∫(r e^−r)² = 1/4, ∫(r(r−2)e^(−r/2))² = 8
    let ref0 = |r: f64| 2.0 * r * (-r).exp();
    let ref1 = |r: f64| -(r * (r - 2.0) * (-r / 2.0).exp()) / 8.0_f64.sqrt();
    for r in [0.01, 0.3, 1.0, 2.5, 6.0, 15.0] {
        assert_close(u0.eval(r), ref0(r), 1e-8, "1s");
        assert_close(u1.eval(r), ref1(r), 1e-8, "2s");
    }
    assert_eq!(u0.node_count(), 0);
    assert_eq!(u1.node_count(), 1);
    assert_close(u1.nodes()[0], 2.0, 1e-10, "2s node");
    // unnormalized u = r e^−r needs C = 2; the builder's own scale is folded into c0
    let raw = ExpPolyFunction::new(1.0, 1.0, vec![1.0]);
    assert_close(normalize(&raw).unwrap().1, 2.0, 1e-14, "C");
    assert!(c0 > 0.0);
}

#[test]
fn closed_form_norm_matches_quadrature() {
    let u = ExpPolyFunction::new(1.0, 0.5, vec![-2.0, 1.0]); // r(r − 2)e^(−r/2)
    let grid = RadialGrid::new(1e-12, 140.0, 200_001).unwrap();
    let numeric = quadrature(|r| u.eval(r).powi(2), &grid).value;
    assert_close(u.norm_squared().unwrap(), numeric, 1e-10, "norm");
    assert_close(u.norm_squared().unwrap(), 8.0, 1e-12, "Γ integral");
}

#[test]
fn hydrogen_lower_component() {
    // u = r e^(−r), κ = −1, E + m = 2 → v = −(r/2)e^(−r)
    let u = ExpPolyFunction::new(1.0, 1.0, vec![1.0]);
    let v = lower_component(&u, 0.5, 1.5, -1).unwrap();
    for r in [0.1, 1.0, 3.0, 7.0] {
        assert_close(v.eval(r), -0.5 * r * (-r).exp(), 1e-15, "v");
    }
}

#[test]
fn dirac_consistency_for_coulomb_state() {
    // self-consistent Coulomb state E = 0.6, m = 1: on-shell and oracle-validated
    let p = PotentialParams::coulomb(1.0);
    let r = solve_energy_selfconsistent(&p, 1.0, 0.5, qn(0, -1), Sign::Plus, &SolveOptions::default()).unwrap();
    let coeffs = expansion_coefficients(&p, &r.split, -1, 0.5).unwrap();
    let (u, _) = normalize(&build_wavefunction(&coeffs, qn(0, -1), Sign::Plus, Convention::Reduced).unwrap()).unwrap();
    let v = lower_component(&u, r.split.energy, 1.0, -1).unwrap();
    let grid = RadialGrid::new(0.1, 10.0, 2000).unwrap();
    assert!(dirac_residual(&u, &v, &p, r.split.energy, 1.0, -1, &grid) < 1e-6);
}

#[test]
fn cornell_delta_choice_is_pinned() {
    // E(δ) is monotone decreasing over the default interval for this fixture,
    // so the minimal-sensitivity search ends at the upper endpoint.
    let p = PotentialParams::new(0.1, 0.4, 0.0).unwrap();
    let choice = optimal_delta(&p, 1.5, qn(0, -1), &DeltaSearch::default()).unwrap();
    assert_eq!(choice.flag, DeltaFlag::Monotone);
    assert_eq!(choice.delta, 5.0);
    assert!(choice.slope < 0.0);
}

// ---------------------------------------------------------------- oracle

fn refined_eigen(p: &PotentialParams, q: QuantumNumbers, r_max: f64, points: usize) -> f64 {
    let grid = RadialGrid::new(RadialGrid::DEFAULT_R_MIN, r_max, points).unwrap();
    fd_eigen_fixed_mass(p, 1.0, q, &grid).unwrap().richardson_estimate
}

#[test]
fn oracle_hydrogen_levels() {
    let p = PotentialParams::coulomb(1.0);
    assert_close(refined_eigen(&p, qn(0, -1), 40.0, 8000), -0.5, 1e-5, "1s");
    // the N = 2 tail at r = 40 is ~1e-6 of the peak, so the box is doubled
    assert_close(refined_eigen(&p, qn(1, -1), 80.0, 16000), -0.125, 1e-5, "2s");
}

#[test]
fn oracle_oscillator_levels() {
    let p = PotentialParams::new(0.0, 0.0, 0.5).unwrap();
    assert_close(refined_eigen(&p, qn(0, -1), 40.0, 8000), 1.5, 1e-5, "n = 0");
    assert_close(refined_eigen(&p, qn(1, -1), 40.0, 8000), 3.5, 1e-5, "n = 1");
}

#[test]
fn wall_at_1e_minus_4_biases_hydrogen() {
    // A Dirichlet wall at r_min shifts the 1s level by ≈ u′(0)² r_min/(2μ) = 2 r_min.
    let p = PotentialParams::coulomb(1.0);
    let grid = RadialGrid::new(1e-4, 40.0, 8000).unwrap();
    let e = fd_eigen_fixed_mass(&p, 1.0, qn(0, -1), &grid).unwrap().richardson_estimate;
    let shift = e + 0.5;
    assert!((shift - 2e-4).abs() < 0.2 * 2e-4, "shift {shift}");
}

#[test]
fn oracle_self_consistent_coulomb() {
    let p = PotentialParams::coulomb(1.0);
    let grid = RadialGrid::new(RadialGrid::DEFAULT_R_MIN, 40.0, 8000).unwrap();
    let r = selfconsistent_oracle(&p, 1.0, qn(0, -1), &grid, &OracleOptions::default()).unwrap();
    assert_close(r.energy, 0.6, 1e-5, "E");
}

#[test]
fn exact_coulomb_state_residual() {
    let u = ExpPolyFunction::new(1.0, 1.0, vec![2.0]);
    let p = PotentialParams::coulomb(1.0);
    let grid = RadialGrid::new(RadialGrid::DEFAULT_R_MIN, 40.0, 8000).unwrap();
    assert!(ode_residual(&u, &p, &EnergySplit::from_eps(1.0, -0.5), -1, &grid) < 1e-10);
    assert!(ode_residual(&u, &p, &EnergySplit::from_eps(1.0, -0.4), -1, &grid) > 1e-2);
}

#[test]
fn gamma_integral_by_quadrature() {
    let grid = RadialGrid::new(1e-4, 40.0, 8000).unwrap();
    assert_close(quadrature(|r| r * r * (-2.0 * r).exp(), &grid).value, 0.25, 1e-9, "Γ(3)/2³");
}
