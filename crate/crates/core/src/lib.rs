//! Steady states of two two-level systems weakly coupled to several bosonic
//! baths at different temperatures, and the entanglement of those states.

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod model;
pub mod rates;
pub mod solver;
pub mod special;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use model::{BathSpec, BellDecomposition, EnvironmentConfig, SplittingSpec, Units, XState};
pub use rates::{GoldenRuleRates, ReducedRates};
pub use solver::{Route, SteadyState};
