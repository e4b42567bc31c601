//! Numerical tolerances shared by the solvers and the self-check suite.

/// Agreement required between independent solution routes.
pub const CROSS_PATH: f64 = 1e-10;

/// Identities that hold up to rounding (trace, detailed balance, symmetries).
pub const EXACT: f64 = 1e-12;

/// Slack before a kernel vector is declared unphysical.
pub const PHYSICALITY_SLACK: f64 = 1e-9;

/// Relative singular-value threshold for the numerical rank.
pub const RANK: f64 = 1e-10;

/// Relative match of the population-block eigenvalues to λ₁, λ₂, λ₁+λ₂.
pub const EIGENVALUE_MATCH: f64 = 1e-9;

/// Closed-form denominator magnitude (relative to γ²) below which the
/// steady state is reported as non-unique.
pub const CLOSED_FORM_DEGENERACY: f64 = 1e-12;

/// Absolute tolerance (units of Δ) of the entanglement-boundary bisection.
pub const BOUNDARY: f64 = 1e-6;
