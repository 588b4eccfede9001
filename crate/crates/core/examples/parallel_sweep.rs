//! A parameter sweep over the linear strength a, evaluated in parallel;
//! the output order does not depend on the thread schedule.

use nu_spectra::nu_engine::Sign;
use nu_spectra::radial_model::{solve_energy_selfconsistent, PotentialParams, QuantumNumbers, SolveOptions};
use rayon::prelude::*;

pub fn main() {
    let strengths: Vec<f64> = (0..=20).map(|i| 0.01 * i as f64).collect();
    let rows: Vec<(f64, Vec<f64>)> = strengths
        .par_iter()
        .map(|&a| {
            let p = PotentialParams::new(a, 0.4, 0.0).unwrap();
            let levels = (0..3)
                .map(|n| {
                    let q = QuantumNumbers::new(n, -1).unwrap();
                    solve_energy_selfconsistent(&p, 1.5, 1.0, q, Sign::Plus, &SolveOptions::default())
                        .map_or(f64::NAN, |r| r.split.energy)
                })
                .collect();
            (a, levels)
        })
        .collect();
    println!("a,E0,E1,E2");
    for (a, levels) in rows {
        println!("{a:.2},{:.9},{:.9},{:.9}", levels[0], levels[1], levels[2]);
    }
}
