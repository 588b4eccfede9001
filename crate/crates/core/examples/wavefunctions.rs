//! Normalized upper and lower components of the first extended-Cornell
//! states, with node counts and a quadrature check of the norm.

use nu_spectra::cli::commands::decay_radius;
use nu_spectra::nu_engine::Sign;
use nu_spectra::oracle::{quadrature, RadialGrid};
use nu_spectra::radial_model::{
    solve_energy_selfconsistent, BoundState, Convention, PotentialParams, QuantumNumbers, SolveOptions,
};

pub fn main() {
    let p = PotentialParams::new(0.1, 0.4, 0.01).unwrap();
    for n in 0..4 {
        let q = QuantumNumbers::new(n, -1).unwrap();
        let energy = solve_energy_selfconsistent(&p, 1.5, 1.0, q, Sign::Plus, &SolveOptions::default()).unwrap();
        let state = BoundState::assemble(&p, q, energy, Convention::Reduced).unwrap();
        let grid = RadialGrid::new(1e-12, decay_radius(&state.upper), 200_001).unwrap();
        let numeric = quadrature(|r| state.upper.eval(r).powi(2), &grid).value;
        println!(
            "n = {n}: E = {:.9} GeV, C = {:.6e}, nodes at {:?}, ∫u² = {:.12} (quadrature {:.12})",
            state.energy.split.energy,
            state.c_nk,
            state.upper.nodes().iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>(),
            state.upper.norm_squared().unwrap(),
            numeric
        );
        for r in [0.5, 2.0, 5.0] {
            println!("    r = {r}: u = {:+.6e}, v = {:+.6e}", state.upper.eval(r), state.lower.eval(r));
        }
    }
}
