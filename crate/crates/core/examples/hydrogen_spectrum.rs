//! Self-consistent Dirac-Coulomb levels against the exact fixed-point values.
//!
//! With equal scalar and vector coupling the level condition is
//! `E − m = −ε₀b²/(2N²)` with `ε₀ = (E + m)/2`, so `E = m(4N² − b²)/(4N² + b²)`.

use nu_spectra::nu_engine::Sign;
use nu_spectra::radial_model::{solve_energy_selfconsistent, PotentialParams, QuantumNumbers, SolveOptions};

pub fn main() {
    let (b, m) = (1.0, 1.0);
    let p = PotentialParams::coulomb(b);
    println!("{:>2} {:>3} {:>16} {:>16} {:>9}", "n", "κ", "E", "exact", "|Δ|");
    for n in 0..4 {
        for kappa in [-1, -2, 1] {
            let q = QuantumNumbers::new(n, kappa).unwrap();
            let r = solve_energy_selfconsistent(&p, m, 1.0, q, Sign::Plus, &SolveOptions::default()).unwrap();
            let big_n = (n + q.l() as usize + 1) as f64;
            let exact = m * (4.0 * big_n * big_n - b * b) / (4.0 * big_n * big_n + b * b);
            println!("{n:>2} {kappa:>3} {:>16.12} {exact:>16.12} {:>9.1e}", r.split.energy, (r.split.energy - exact).abs());
        }
    }
}
