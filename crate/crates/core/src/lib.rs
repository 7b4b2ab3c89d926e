//! Exact linear algebra over the integers for deciding when a `k × n`
//! matrix extends to an element of GL_n(Z), together with the natural
//! density of such matrices and tools to check it empirically.
//!
//! - [`matrix`]: arbitrary-precision matrices, minors, unimodularity.
//! - [`normal_forms`]: Hermite and Smith normal forms, GL_n completion.
//! - [`density`]: zeta products, local densities over finite prime sets.
//! - [`experiments`]: exhaustive and Monte Carlo density measurements.

pub mod density;
pub mod error;
pub mod experiments;
pub mod matrix;
pub mod matrix_file;
pub mod normal_forms;
pub mod rng;
mod serde_util;

pub use density::{
    count_full_rank_mod_p, density_exact, density_limit, divisibility_defect, local_density,
    zeta, DensityReport, Fixed, PrimeSet, Rational,
};
pub use error::{Error, Result};
pub use experiments::{
    convergence_sweep, estimate_density, exhaustive_density, verify_local_density, BoxSpec,
    EstimateReport, ExhaustiveReport,
};
pub use matrix::{full_rank_minor_gcd, is_unimodular, minors, IntMatrix, MinorSet};
pub use normal_forms::{complete_to_gl, hnf, is_trivial_hnf, snf, HnfResult, SnfResult};
