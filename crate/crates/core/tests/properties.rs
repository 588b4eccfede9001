//! Randomized invariants of the engine, the closed-form model and the oracle.

use nu_spectra::cli::commands::decay_radius;
use nu_spectra::cli::format::real;
use nu_spectra::nu_engine::{
    pi_branches, quantization_residual, select_physical_branch, solution_factors,
    solve_k_candidates, HypergeometricEquation, NuBranch, Sign,
};
use nu_spectra::oracle::{
    fd_eigen_fixed_mass, fd_eigenvalue, quadrature, selfconsistent_oracle, sturm_count,
    OracleOptions, RadialGrid,
};
use nu_spectra::polynomial::Polynomial;
use nu_spectra::radial_model::{
    build_wavefunction, closed_form_eps1, eps1_via_engine, expansion_coefficients,
    kappa_from_jl, normalize, solve_energy_selfconsistent, to_nu_equation, BoundState,
    Convention, Coupling, EnergySplit, ExpPolyFunction, PotentialParams, QuantumNumbers,
    SolveOptions,
};
use nu_spectra::roots::brent;
use proptest::prelude::*;

fn kappa_strategy() -> impl Strategy<Value = i32> {
    prop_oneof![(-4i32..=-1), (1i32..=3)]
}

fn cornell_strategy() -> impl Strategy<Value = PotentialParams> {
    (0.0..0.5f64, 0.05..1.5f64, 0.0..0.1f64).prop_map(|(a, b, c)| PotentialParams::new(a, b, c).unwrap())
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn all_branches(eq: &HypergeometricEquation) -> Vec<NuBranch> {
    solve_k_candidates(eq)
        .unwrap()
        .into_iter()
        .flat_map(|k| pi_branches(eq, k.k).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(cfg(256))]

    #[test]
    fn coulomb_exactness(n in 0usize..=5, l in 0u32..=3, aligned in any::<bool>(),
                         b in 0.05..2.0f64, eps0 in 0.1..3.0f64, delta in 0.05..5.0f64) {
        let coupling = if aligned || l == 0 { Coupling::Aligned } else { Coupling::AntiAligned };
        let j = if coupling == Coupling::Aligned { l as f64 + 0.5 } else { l as f64 - 0.5 };
        let q = QuantumNumbers::from_jl(n, j, l, coupling).unwrap();
        let got = closed_form_eps1(&PotentialParams::coulomb(b), eps0, delta, q, Sign::Plus).unwrap();
        let want = -eps0 * b * b / (2.0 * ((n + l as usize + 1) as f64).powi(2));
        prop_assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn levels_increase_with_n(p in cornell_strategy(), eps0 in 0.1..3.0f64, delta in 0.1..5.0f64,
                              kappa in kappa_strategy(), n in 0usize..6) {
        let e = |n| closed_form_eps1(&p, eps0, delta, QuantumNumbers::new(n, kappa).unwrap(), Sign::Plus).unwrap();
        prop_assert!(e(n + 1) > e(n));
    }

    #[test]
    fn kappa_enters_only_through_l(l in 1u32..=4, p in cornell_strategy(),
                                   eps0 in 0.1..3.0f64, delta in 0.1..5.0f64, n in 0usize..4) {
        let aligned = kappa_from_jl(l as f64 + 0.5, l, Coupling::Aligned).unwrap();
        let anti = kappa_from_jl(l as f64 - 0.5, l, Coupling::AntiAligned).unwrap();
        let (qa, qb) = (QuantumNumbers::new(n, aligned).unwrap(), QuantumNumbers::new(n, anti).unwrap());
        let ll = f64::from(l * (l + 1));
        prop_assert_eq!(qa.centrifugal(), ll);
        prop_assert_eq!(qb.centrifugal(), ll);
        prop_assert_eq!(qa.l(), l);
        prop_assert_eq!(qb.l(), l);
        prop_assert_eq!(
            closed_form_eps1(&p, eps0, delta, qa, Sign::Plus).unwrap(),
            closed_form_eps1(&p, eps0, delta, qb, Sign::Plus).unwrap()
        );
    }

    #[test]
    fn cornell_only_formula(a in 0.0..1.0f64, b in 0.0..2.0f64, eps0 in 0.05..5.0f64,
                            delta in 0.05..5.0f64, n in 0usize..6, kappa in kappa_strategy()) {
        let p = PotentialParams::new(a, b, 0.0).unwrap();
        let q = QuantumNumbers::new(n, kappa).unwrap();
        let got = closed_form_eps1(&p, eps0, delta, q, Sign::Plus).unwrap();
        let kk = f64::from(kappa) * f64::from(kappa + 1);
        let root = (1.0 + 8.0 * eps0 * a / delta.powi(3) + 4.0 * kk).sqrt();
        let want = 3.0 * a / delta
            - 2.0 * eps0 * (3.0 * a / delta.powi(2) + b).powi(2) / ((2 * n + 1) as f64 + root).powi(2);
        prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-300));
    }

    #[test]
    fn radicand_is_square_and_tau_identity(s0 in -2.0..2.0f64, s1 in -2.0..2.0f64, s2 in -2.0..2.0f64,
                                           t0 in -2.0..2.0f64, t1 in -2.0..2.0f64,
                                           u0 in -2.0..2.0f64, u1 in -2.0..2.0f64, u2 in -2.0..2.0f64) {
        let eq = HypergeometricEquation::new(
            Polynomial::new(vec![s0, s1, s2]),
            Polynomial::new(vec![t0, t1]),
            Polynomial::new(vec![u0, u1, u2]),
        ).unwrap();
        if let Ok(ks) = solve_k_candidates(&eq) {
            for cand in ks {
                let r = eq.radicand(cand.k);
                let scale = r.max_abs_coeff().max(1.0);
                let disc = r.coeff(1).powi(2) - 4.0 * r.coeff(0) * r.coeff(2);
                prop_assert!(disc.abs() < 1e-10 * scale * scale, "disc {disc} at K = {}", cand.k);
                if let Ok(branches) = pi_branches(&eq, cand.k) {
                    for b in branches {
                        let expect = eq.tau_tilde() + &b.pi.scale(2.0);
                        prop_assert_eq!(&b.tau, &expect);
                        prop_assert_eq!(b.tau_slope, b.tau.coeff(1));
                    }
                }
            }
        }
    }

    #[test]
    fn residual_is_linear_in_k(k1 in -5.0..5.0f64, k2 in -5.0..5.0f64, slope in -3.0..3.0f64,
                               n in 0usize..5) {
        let eq = HypergeometricEquation::new(
            Polynomial::new(vec![0.0, 0.0, 1.0]), Polynomial::new(vec![0.0, 2.0]), Polynomial::new(vec![-1.0]),
        ).unwrap();
        let branch = |k: f64| NuBranch {
            k,
            sign: Sign::Minus,
            sqrt_radicand: Polynomial::zero(),
            pi: Polynomial::new(vec![0.5, slope]),
            tau: Polynomial::new(vec![1.0, 2.0 + 2.0 * slope]),
            tau_slope: 2.0 + 2.0 * slope,
        };
        let (r1, r2) = (quantization_residual(&eq, &branch(k1), n), quantization_residual(&eq, &branch(k2), n));
        prop_assert!(((r1 - r2) - (k1 - k2)).abs() < 1e-12);
    }

    #[test]
    fn rodrigues_residuals(a in 0.2..3.0f64, b in 0.2..3.0f64, c in -0.2..1.0f64, n in 0usize..4) {
        let eq = HypergeometricEquation::new(
            Polynomial::new(vec![0.0, 0.0, 1.0]), Polynomial::new(vec![0.0, 2.0]), Polynomial::new(vec![-a, b, -c]),
        ).unwrap();
        let Ok(ks) = solve_k_candidates(&eq) else { return Ok(()) };
        for cand in ks {
            for br in pi_branches(&eq, cand.k).unwrap() {
                let spec = solution_factors(&eq, &br, n).unwrap();
                for s in [0.4, 0.8, 1.3, 2.0, 2.9] {
                    prop_assert!(spec.weight_residual(s) < 1e-10);
                    prop_assert!(spec.phi_residual(s) < 1e-10);
                }
                prop_assert_eq!(spec.chi.degree(), Some(n));
            }
        }
    }

    #[test]
    fn derivative_and_lowering_match_finite_differences(gamma in 1.0..3.0f64, beta in 0.2..2.0f64,
                                                        c in prop::collection::vec(-1.0..1.0f64, 1..4),
                                                        r in 0.3..4.0f64) {
        let f = ExpPolyFunction::new(gamma, beta, c);
        let h = 1e-5 * r;
        let fd = (f.eval(r + h) - f.eval(r - h)) / (2.0 * h);
        let scale = f.derivative().eval(r).abs() + f.eval(r).abs() / r + 1e-12;
        prop_assert!((f.derivative().eval(r) - fd).abs() < 1e-6 * scale);
        prop_assert!((f.lowering().eval(r) + r * r * fd).abs() < 1e-6 * scale * r * r);
    }

    #[test]
    fn number_format_has_twelve_digits(x in prop::num::f64::NORMAL) {
        let text = real(x);
        let back: f64 = text.parse().unwrap();
        prop_assert!(((back - x) / x).abs() <= 5e-12);
        let mantissa = text.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
        prop_assert_eq!(mantissa.len(), 12);
    }

    #[test]
    fn brent_brackets_hold(shift in -0.9..0.9f64, power in 1i32..6) {
        let f = |x: f64| (x - shift).powi(2 * power - 1);
        let root = brent(f, -1.0, 1.0, 1e-14, 0.0, 500).unwrap();
        prop_assert!((root.x - shift).abs() < 1e-2f64.powf(1.0 / (2 * power - 1) as f64).max(1e-6));
        prop_assert!(root.x >= -1.0 && root.x <= 1.0);
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn engine_equivalence(p in cornell_strategy(), eps0 in 0.3..3.0f64, delta in 0.2..3.0f64,
                          n in 0usize..4, kappa in kappa_strategy()) {
        let q = QuantumNumbers::new(n, kappa).unwrap();
        let cf = closed_form_eps1(&p, eps0, delta, q, Sign::Plus).unwrap();
        let engine = eps1_via_engine(&p, eps0, delta, q).unwrap();
        prop_assert!((engine.eps1 - cf).abs() < 1e-8, "engine {} vs {}", engine.eps1, cf);
        prop_assert!(engine.branch.tau_slope <= 0.0);
        // deterministic: bit-identical on repetition
        prop_assert_eq!(eps1_via_engine(&p, eps0, delta, q).unwrap(), engine);
        // the equation at the closed-form ε₁ is on-shell for the selected branch
        let coeffs = expansion_coefficients(&p, &EnergySplit::from_eps(eps0, cf), kappa, delta).unwrap();
        let eq = to_nu_equation(&coeffs);
        let sel = select_physical_branch(&all_branches(&eq), n).unwrap();
        prop_assert!(quantization_residual(&eq, &sel.branch, n).abs() < 1e-8 * coeffs.b_coeff.max(1.0).powi(2));
    }

    #[test]
    fn selfconsistent_residual_within_tol(p in cornell_strategy(), m in 0.3..3.0f64,
                                          delta in 0.2..3.0f64, n in 0usize..3, kappa in kappa_strategy()) {
        let q = QuantumNumbers::new(n, kappa).unwrap();
        let opts = SolveOptions::default();
        let r = solve_energy_selfconsistent(&p, m, delta, q, Sign::Plus, &opts).unwrap();
        let e = r.split.energy;
        let g = (e - m) - closed_form_eps1(&p, 0.5 * (e + m), delta, q, Sign::Plus).unwrap();
        prop_assert!(g.abs() <= opts.tol);
    }

    #[test]
    fn node_counts_and_norms(p in cornell_strategy(), m in 0.5..3.0f64, delta in 0.3..3.0f64,
                             n in 0usize..=3, kappa in kappa_strategy()) {
        let q = QuantumNumbers::new(n, kappa).unwrap();
        let energy = solve_energy_selfconsistent(&p, m, delta, q, Sign::Plus, &SolveOptions::default()).unwrap();
        let state = BoundState::assemble(&p, q, energy, Convention::Reduced).unwrap();
        prop_assert_eq!(state.upper.node_count(), n);
        prop_assert_eq!(state.upper.terms.len(), n + 1);
        let grid = RadialGrid::new(1e-12, decay_radius(&state.upper), 200_001).unwrap();
        let numeric = quadrature(|r| state.upper.eval(r).powi(2), &grid).value;
        let closed = state.upper.norm_squared().unwrap();
        prop_assert!((closed - 1.0).abs() < 1e-8);
        prop_assert!((closed - numeric).abs() < 1e-10, "closed {} vs quadrature {}", closed, numeric);
    }

    #[test]
    fn normalization_is_idempotent(gamma in 1.0..3.0f64, beta in 0.2..2.0f64,
                                   c in prop::collection::vec(0.1..1.0f64, 1..4)) {
        let (u, _) = normalize(&ExpPolyFunction::new(gamma, beta, c)).unwrap();
        let (again, c2) = normalize(&u).unwrap();
        prop_assert!((c2 - 1.0).abs() < 1e-12);
        for (x, y) in again.terms.iter().zip(&u.terms) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs());
        }
    }
}

proptest! {
    #![proptest_config(cfg(12))]

    #[test]
    fn oracle_brackets_are_certified(b in 0.5..1.5f64, c in 0.0..0.3f64, n in 0usize..3, l in 0u32..3) {
        let p = PotentialParams::new(0.0, b, c).unwrap();
        let q = QuantumNumbers::new(n, -(l as i32) - 1).unwrap();
        let grid = RadialGrid::new(RadialGrid::DEFAULT_R_MIN, 60.0, 3000).unwrap();
        let ev = fd_eigenvalue(&p, 1.0, q, &grid).unwrap();
        prop_assert_eq!(ev.counts.1, ev.counts.0 + 1);
        prop_assert_eq!(ev.counts.0, n);
        prop_assert!(ev.bracket.0 <= ev.value && ev.value <= ev.bracket.1);
        let res = fd_eigen_fixed_mass(&p, 1.0, q, &grid).unwrap();
        prop_assert_eq!(res.node_count, n);
        // Sturm counts at the bracket ends, recomputed from the matrix
        let h = grid.spacing();
        let kin = 1.0 / (2.0 * h * h);
        let diag: Vec<f64> = (1..grid.num_points - 1).map(|i| {
            let r = grid.point(i);
            2.0 * kin + p.potential(r) + q.centrifugal() / (2.0 * r * r)
        }).collect();
        let off = vec![-kin; diag.len() - 1];
        prop_assert_eq!(sturm_count(&diag, &off, res.bracket.0), n);
        prop_assert_eq!(sturm_count(&diag, &off, res.bracket.1), n + 1);
    }

    #[test]
    fn damping_does_not_move_the_fixed_point(b in 0.6..1.2f64, a in 0.0..0.2f64, m in 0.8..1.6f64) {
        let p = PotentialParams::new(a, b, 0.0).unwrap();
        let q = QuantumNumbers::new(0, -1).unwrap();
        let grid = RadialGrid::new(RadialGrid::DEFAULT_R_MIN, 40.0, 4000).unwrap();
        let damped = OracleOptions::default();
        let undamped = OracleOptions { damping: 0.0, ..OracleOptions::default() };
        if let (Ok(x), Ok(y)) = (
            selfconsistent_oracle(&p, m, q, &grid, &damped),
            selfconsistent_oracle(&p, m, q, &grid, &undamped),
        ) {
            prop_assert!((x.energy - y.energy).abs() <= 2.0 * damped.tol, "{} vs {}", x.energy, y.energy);
        }
    }
}

#[test]
fn wavefunction_rejects_off_shell_requests() {
    let p = PotentialParams::coulomb(1.0);
    let coeffs = expansion_coefficients(&p, &EnergySplit::from_eps(1.0, -0.45), -1, 0.5).unwrap();
    let q = QuantumNumbers::new(0, -1).unwrap();
    assert!(build_wavefunction(&coeffs, q, Sign::Plus, Convention::Reduced).is_err());
}
