//! The finite-difference oracle against exact hydrogen and oscillator
//! levels, and the closed form against the oracle for a Cornell fixture.

use nu_spectra::cli::render::render_validate;
use nu_spectra::cli::{cmd_validate, RunConfig, Settings};
use nu_spectra::oracle::{fd_eigen_fixed_mass, RadialGrid};
use nu_spectra::radial_model::{PotentialParams, QuantumNumbers};

pub fn main() {
    let grid = RadialGrid::new(RadialGrid::DEFAULT_R_MIN, 40.0, 8000).unwrap();
    let q = QuantumNumbers::new(0, -1).unwrap();
    for (name, p, exact) in [
        ("hydrogen 1s", PotentialParams::coulomb(1.0), -0.5),
        ("oscillator 0s", PotentialParams::new(0.0, 0.0, 0.5).unwrap(), 1.5),
    ] {
        let r = fd_eigen_fixed_mass(&p, 1.0, q, &grid).unwrap();
        println!(
            "{name}: h-grid {:.9}, h/2-grid {:.9}, Richardson {:.9}, exact {exact}",
            r.eigenvalue, r.refined_eigenvalue, r.richardson_estimate
        );
    }
    let mut s = Settings::default();
    for (k, v) in [("a", "0.1"), ("b", "0.4"), ("c", "0.01"), ("m", "1.5"), ("n_max", "1"), ("delta", "1")] {
        s.set(k, v);
    }
    let cfg = RunConfig::from_settings(&s).unwrap();
    print!("{}", render_validate(&cfg, &cmd_validate(&cfg)));
}
