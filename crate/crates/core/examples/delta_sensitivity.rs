//! How the closed-form energy depends on the expansion point δ, and what
//! the minimal-sensitivity search returns for it.

use nu_spectra::nu_engine::Sign;
use nu_spectra::radial_model::{
    optimal_delta, solve_energy_selfconsistent, DeltaSearch, PotentialParams, QuantumNumbers, SolveOptions,
};

pub fn main() {
    let q = QuantumNumbers::new(0, -1).unwrap();
    for (name, p) in [
        ("Cornell a=0.1 b=0.4", PotentialParams::new(0.1, 0.4, 0.0).unwrap()),
        ("extended c=0.01", PotentialParams::new(0.1, 0.4, 0.01).unwrap()),
        ("pure Coulomb b=0.4", PotentialParams::coulomb(0.4)),
    ] {
        println!("{name}:");
        for delta in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let e = solve_energy_selfconsistent(&p, 1.5, delta, q, Sign::Plus, &SolveOptions::default()).unwrap();
            println!("  δ = {delta:<4} E = {:.9}", e.split.energy);
        }
        let choice = optimal_delta(&p, 1.5, q, &DeltaSearch::default()).unwrap();
        println!("  chosen δ = {:.6} ({}, dE/dδ = {:.3e})", choice.delta, choice.flag.as_str(), choice.slope);
    }
}
