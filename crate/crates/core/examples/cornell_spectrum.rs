//! Closed-form spectrum of the extended Cornell potential through the
//! library's batch driver, printed as the CSV the command line emits.

use nu_spectra::cli::render::render_spectrum;
use nu_spectra::cli::{cmd_spectrum, RunConfig, Settings};

pub fn main() {
    // charmonium-like parameters in GeV units
    let mut s = Settings::default();
    for (k, v) in [("a", "0.1"), ("b", "0.4"), ("c", "0.01"), ("m", "1.5"), ("n_max", "2"), ("l_max", "1"), ("delta", "1")] {
        s.set(k, v);
    }
    let cfg = RunConfig::from_settings(&s).unwrap();
    let rows = cmd_spectrum(&cfg);
    print!("{}", render_spectrum(&cfg, &rows));
}
