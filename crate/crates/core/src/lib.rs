//! Nikiforov-Uvarov solver for the Dirac equation with the extended Cornell
//! potential `V(r) = ar − b/r + cr²`.
//!
//! - [`nu_engine`]: generic machinery for hypergeometric-type equations.
//! - [`radial_model`]: quantum numbers, the `1/x` expansion, the closed-form
//!   spectrum, self-consistent energies and Rodrigues-form wavefunctions.
//! - [`oracle`]: finite-difference ground truth, quadrature and residuals.
//! - [`cli`]: the `spectrum`, `wavefunction`, `validate` and `nu-solve`
//!   drivers behind the `nu-spectra` binary.

// `!(x > 0.0)` is used on purpose: unlike `x <= 0.0` it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod nu_engine;
pub mod oracle;
pub mod polynomial;
pub mod radial_model;
pub mod roots;

pub use nu_engine::{HypergeometricEquation, NuBranch, NuError, Sign};
pub use polynomial::Polynomial;
pub use radial_model::{PotentialParams, QuantumNumbers, RadialError};
