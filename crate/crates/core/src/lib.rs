//! Variable-exponent Lebesgue spaces, mixed Lebesgue-sequence spaces and
//! 2-microlocal Besov/Triebel-Lizorkin quasi-norms of sampled periodic signals.
//!
//! Everything lives on the unit torus `[0, 1)^d`, `d ∈ {1, 2}`, sampled on a
//! power-of-two lattice. Integrals are Riemann sums and every Fourier-side
//! operation is exact for lattice data.

pub mod analysis;
pub mod error;
pub mod exponents;
pub mod grid;
pub mod lebesgue;
pub mod mixed;
pub mod solve;
pub mod spaces;
pub mod weights;

pub use error::{Error, Result};
pub use exponents::{log_holder_estimate, LogHolderReport, VariableExponent};
pub use grid::{FrequencyMask, FunctionSequence, Grid, GridFunction, MultiIndex, Point};
pub use solve::BisectionOptions;
pub use spaces::{quasi_norm, Scale, SpaceRecipe, SpaceSpec};
pub use weights::WeightSequence;
