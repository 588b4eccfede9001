//! Every stage of the generic Nikiforov-Uvarov pipeline on the hydrogen-like
//! equation `σ = s², τ̃ = 2s, σ̃ = −1 + 4s` (ground state at K = 4).

use nu_spectra::nu_engine::{
    lambda_n, pi_branches, quantization_residual, select_physical_branch, solution_factors,
    solve_k_candidates, HypergeometricEquation,
};
use nu_spectra::polynomial::Polynomial;

pub fn main() {
    let eq = HypergeometricEquation::new(
        Polynomial::new(vec![0.0, 0.0, 1.0]),
        Polynomial::new(vec![0.0, 2.0]),
        Polynomial::new(vec![-1.0, 4.0]),
    )
    .unwrap();
    let n = 1;
    println!("equation: σ = {:?}, τ̃ = {:?}, σ̃ = {:?} (constant term first)", eq.sigma().coeffs(), eq.tau_tilde().coeffs(), eq.sigma_tilde().coeffs());
    let mut branches = Vec::new();
    for cand in solve_k_candidates(&eq).unwrap() {
        println!("K = {} (multiplicity {}), radicand {:?}", cand.k, cand.multiplicity, eq.radicand(cand.k).coeffs());
        for b in pi_branches(&eq, cand.k).unwrap() {
            println!("  {:>5}: π = {:?}, τ = {:?}, τ′ = {}", b.sign.as_str(), b.pi.coeffs(), b.tau.coeffs(), b.tau_slope);
            branches.push(b);
        }
    }
    let selected = select_physical_branch(&branches, n).unwrap();
    let b = &selected.branch;
    println!("selected for n = {n}: K = {}, {} branch (boundary: {})", b.k, b.sign.as_str(), selected.boundary);
    println!("λ_n = {}, quantization residual λ − λ_n = {}", lambda_n(&eq, b, n), quantization_residual(&eq, b, n));
    let spec = solution_factors(&eq, b, n).unwrap();
    println!("χ_n coefficients {:?}", spec.chi.coeffs());
    for s in [0.5, 1.0, 2.0] {
        println!("  s = {s}: y = {:.6e}, weight residual {:.1e}, Φ residual {:.1e}", spec.solution(s), spec.weight_residual(s), spec.phi_residual(s));
    }
}
