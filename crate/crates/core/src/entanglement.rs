//! Negativity of X states, the zero-temperature entanglement criterion,
//! and the sweeps behind the entanglement maps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BathSpec, EnvironmentConfig, XState};
use crate::rates::{golden_rule_rates, reduced_parameters};
use crate::solver::{steady_identical_closed, steady_state};
use crate::tolerance::{BOUNDARY, EXACT};

/// Spectrum of the partial transpose of an X state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtEigs {
    pub p2: f64,
    pub p3: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl PtEigs {
    pub fn as_array(&self) -> [f64; 4] {
        [self.p2, self.p3, self.lambda_plus, self.lambda_minus]
    }
}

/// Eigenvalues p₂, p₃ and λ± = (p₁+p₄)/2 ± sqrt((p₁−p₄)² + 4|c|²)/2 of ρ^Γ.
///
/// λ₋ is taken as (p₁p₄ − |c|²)/λ₊, which keeps its relative accuracy when
/// p₄ and |c|² are many orders of magnitude below p₁.
pub fn partial_transpose_eigs(x: &XState) -> PtEigs {
    let [p1, p2, p3, p4] = x.p();
    let c2 = x.c().norm_sqr();
    let (lambda_plus, lambda_minus) = if c2 == 0.0 {
        (p1.max(p4), p1.min(p4))
    } else {
        let plus = 0.5 * (p1 + p4) + 0.5 * ((p1 - p4).powi(2) + 4.0 * c2).sqrt();
        (plus, (p1 * p4 - c2) / plus)
    };
    PtEigs { p2, p3, lambda_plus, lambda_minus }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub pt_eigs: PtEigs,
    /// max(0, −λ₋).
    pub negativity: f64,
    /// ‖ρ^Γ‖₁, so that (‖ρ^Γ‖₁ − 1)/2 is the negativity again.
    pub trace_norm: f64,
    pub entangled: bool,
}

impl NegativityReport {
    pub fn trace_norm_negativity(&self) -> f64 {
        0.5 * (self.trace_norm - 1.0)
    }
}

pub fn negativity(x: &XState) -> NegativityReport {
    let pt_eigs = partial_transpose_eigs(x);
    let trace_norm = pt_eigs.as_array().iter().map(|v| v.abs()).sum();
    NegativityReport {
        pt_eigs,
        negativity: (-pt_eigs.lambda_minus).max(0.0),
        trace_norm,
        entangled: pt_eigs.lambda_minus < 0.0,
    }
}

/// Rates relabeled so that the second bath has the larger J.
fn ordered_rates(j1: f64, j2: f64, k1: f64, k2: f64) -> Result<(f64, f64, f64, f64)> {
    for (name, v) in [("j1", j1), ("j2", j2), ("k1", k1), ("k2", k2)] {
        if !v.is_finite() {
            return Err(Error::InvalidRates(format!("{name} = {v}")));
        }
    }
    if !(j1 > 0.0 && j2 > 0.0) {
        return Err(Error::InvalidRates(format!("j1 = {j1}, j2 = {j2} must be positive")));
    }
    if k1.abs() > j1 * (1.0 + EXACT) || k2.abs() > j2 * (1.0 + EXACT) {
        return Err(Error::InvalidRates(format!("|k| exceeds j: ({j1}, {k1}), ({j2}, {k2})")));
    }
    Ok(if j2 >= j1 { (j1, j2, k1, k2) } else { (j2, j1, k2, k1) })
}

/// (J₁+J₂)² − (K₁+K₂)² − |K₁+K₂|·|K₂ − K₁J₂/J₁| with J₂ ≥ J₁.
pub fn zero_t_lhs(j1: f64, j2: f64, k1: f64, k2: f64) -> Result<f64> {
    let (j1, j2, k1, k2) = ordered_rates(j1, j2, k1, k2)?;
    let s = k1 + k2;
    Ok((j1 + j2).powi(2) - s * s - s.abs() * (k2 - k1 * (j2 / j1)).abs())
}

/// Whether baths (J₁, K₁) and (J₂, K₂) entangle the TLS near T₁ = T₂ = 0.
pub fn zero_t_criterion(j1: f64, j2: f64, k1: f64, k2: f64) -> Result<bool> {
    Ok(zero_t_lhs(j1, j2, k1, k2)? < 0.0)
}

/// Temperature pairs probing the neighborhood of T₁ = T₂ = 0 off the
/// equilibrium diagonal (where the state is always a Gibbs product).
pub const NEAR_ZERO_PROBES: [(f64, f64); 4] = [(0.02, 0.01), (0.01, 0.02), (0.02, 0.015), (0.015, 0.02)];

/// Two symmetric baths at unit splitting.
pub fn two_bath_config(t1: f64, j1: f64, k1: f64, t2: f64, j2: f64, k2: f64) -> EnvironmentConfig {
    EnvironmentConfig::identical(1.0, vec![BathSpec::symmetric(t1, j1, k1), BathSpec::symmetric(t2, j2, k2)])
}

/// λ₋ of the steady state of two symmetric baths, through the closed form.
pub fn lambda_minus_two_bath(t1: f64, j1: f64, k1: f64, t2: f64, j2: f64, k2: f64) -> Result<f64> {
    let gr = golden_rule_rates(&two_bath_config(t1, j1, k1, t2, j2, k2))?;
    let x = steady_identical_closed(&reduced_parameters(&gr)?)?;
    Ok(partial_transpose_eigs(&x).lambda_minus)
}

/// Solver-side counterpart of [`zero_t_criterion`]: entangled if λ₋ < 0 at
/// any of [`NEAR_ZERO_PROBES`] (in units of Δ).
pub fn entangled_near_zero_t(j1: f64, j2: f64, k1: f64, k2: f64) -> Result<bool> {
    ordered_rates(j1, j2, k1, k2)?;
    for (t1, t2) in NEAR_ZERO_PROBES {
        if lambda_minus_two_bath(t1, j1, k1, t2, j2, k2)? < 0.0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// λ₋ of the template with its first two baths at (t1, t2).
pub fn lambda_minus_at(template: &EnvironmentConfig, t1: f64, t2: f64) -> Result<f64> {
    let x = steady_state(&template.with_temperatures(t1, t2))?.state;
    Ok(partial_transpose_eigs(&x).lambda_minus)
}

pub const DEFAULT_BRACKET: (f64, f64) = (0.0, 2.0);
const PRESCAN_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub t1: f64,
    /// Largest T₂ in the bracket where λ₋ changes sign.
    pub t2: Option<f64>,
    /// More than one sign change was seen in the pre-scan.
    pub non_monotone: bool,
}

/// Entanglement boundary T₂ at fixed T₁, by bisection on the sign of λ₋.
///
/// The bracket is pre-scanned at 64 points; with several sign changes the
/// largest root is returned and `non_monotone` is set. No sign change gives
/// `t2 = None`.
pub fn boundary_t2(template: &EnvironmentConfig, t1: f64, bracket: (f64, f64)) -> Result<BoundaryPoint> {
    let (lo, hi) = bracket;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("bracket [{lo}, {hi}]")));
    }
    if template.baths.len() < 2 {
        return Err(Error::InvalidArgument("template needs two baths".into()));
    }
    let entangled = |t2: f64| -> Result<bool> { Ok(lambda_minus_at(template, t1, t2)? < 0.0) };
    let step = (hi - lo) / (PRESCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..PRESCAN_POINTS).map(|i| if i + 1 == PRESCAN_POINTS { hi } else { lo + step * i as f64 }).collect();
    let signs = grid.iter().map(|&t| entangled(t)).collect::<Result<Vec<_>>>()?;
    let changes: Vec<usize> = (0..grid.len() - 1).filter(|&i| signs[i] != signs[i + 1]).collect();
    let Some(&last) = changes.last() else {
        return Ok(BoundaryPoint { t1, t2: None, non_monotone: false });
    };

    let (mut a, mut b) = (grid[last], grid[last + 1]);
    let sign_a = signs[last];
    let tol = BOUNDARY * template.splittings.delta1.max(f64::MIN_POSITIVE);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if entangled(m)? == sign_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(BoundaryPoint { t1, t2: Some(0.5 * (a + b)), non_monotone: changes.len() > 1 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub template: EnvironmentConfig,
    pub t1: Vec<f64>,
    pub points: Vec<Result<BoundaryPoint>>,
}

impl BoundaryCurve {
    /// Boundary T₂ per grid point; failures and missing boundaries are None.
    pub fn t2_values(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.as_ref().ok().and_then(|p| p.t2)).collect()
    }
}

pub fn scan_t1t2(template: &EnvironmentConfig, t1_grid: &[f64], bracket: (f64, f64)) -> BoundaryCurve {
    BoundaryCurve {
        template: template.clone(),
        t1: t1_grid.to_vec(),
        points: t1_grid.iter().map(|&t1| boundary_t2(template, t1, bracket)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KPlanePoint {
    pub k1_over_j1: f64,
    pub k2_over_j2: f64,
    pub entangled: bool,
}

/// Zero-temperature criterion on a (K₁/J₁, K₂/J₂) grid with J₁ = 1.
/// Rows are ordered with K₁ in the outer loop. Only K₂ > 0 is accepted.
pub fn scan_kplane(j2_over_j1: f64, k1_grid: &[f64], k2_grid: &[f64]) -> Result<Vec<KPlanePoint>> {
    if let Some(k) = k2_grid.iter().find(|k| !(**k > 0.0)) {
        return Err(Error::InvalidArgument(format!("k2/j2 = {k} must be positive")));
    }
    let mut out = Vec::with_capacity(k1_grid.len() * k2_grid.len());
    for &k1 in k1_grid {
        for &k2 in k2_grid {
            let entangled = zero_t_criterion(1.0, j2_over_j1, k1, k2 * j2_over_j1)?;
            out.push(KPlanePoint { k1_over_j1: k1, k2_over_j2: k2, entangled });
        }
    }
    Ok(out)
}

/// Limiting-regime state for κ = K₂/J₂ and θ = (T₁/Δ)(J₁/J₂).
pub fn limiting_state(kappa: f64, theta: f64) -> Result<XState> {
    if !(kappa.abs() <= 1.0) {
        return Err(Error::InvalidArgument(format!("kappa = {kappa} outside [-1, 1]")));
    }
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::InvalidArgument(format!("theta = {theta} must be finite and >= 0")));
    }
    if kappa.abs() == 1.0 && theta == 0.0 {
        return Err(Error::DegenerateLimit);
    }
    let k2 = kappa * kappa;
    let w = 1.0 + 2.0 * theta;
    // (1+2θ)³ − κ² without cancellation at κ² → 1
    let denom = (1.0 - k2) + 2.0 * theta * (3.0 + 6.0 * theta + 4.0 * theta * theta);
    let sigma = 1.0 / denom;
    let p1 = sigma * ((1.0 - k2) + theta * (4.0 + 5.0 * theta + 2.0 * theta * theta));
    let p2 = sigma * theta * (1.0 + theta) * w;
    let p4 = sigma * theta * theta * w;
    XState::new([p1, p2, p2, p4], Complex64::new(-sigma * kappa * theta, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityPoint {
    pub negativity: f64,
    pub p1: f64,
    pub p2: f64,
    pub p4: f64,
    pub c: Complex64,
    /// Negativity of [`limiting_state`]; None where the limit is degenerate.
    pub negativity_large_j2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityRow {
    pub t1: f64,
    pub point: Result<NegativityPoint>,
}

/// Negativity and populations along T₁ at the template's fixed T₂, with the
/// large-J₂ approximation built from κ = K₂/J₂ and θ = (T₁/Δ)(J₁/J₂) of the
/// first two baths.
pub fn scan_negativity(template: &EnvironmentConfig, t1_grid: &[f64]) -> Result<Vec<NegativityRow>> {
    let [b1, b2] = match template.baths.as_slice() {
        [a, b, ..] => [*a, *b],
        _ => return Err(Error::InvalidArgument("template needs two baths".into())),
    };
    if !(b1.j1 > 0.0 && b2.j1 > 0.0) {
        return Err(Error::InvalidArgument("scan needs J1, J2 > 0".into()));
    }
    let delta = template.splittings.delta1;
    let kappa = b2.k / b2.j1;
    let t2 = b2.temperature;
    Ok(t1_grid
        .iter()
        .map(|&t1| {
            let point = steady_state(&template.with_temperatures(t1, t2)).map(|s| {
                let x = s.state;
                let [p1, p2, _, p4] = x.p();
                let theta = (t1 / delta) * (b1.j1 / b2.j1);
                let negativity_large_j2 = limiting_state(kappa, theta).ok().map(|l| negativity(&l).negativity);
                NegativityPoint { negativity: negativity(&x).negativity, p1, p2, p4, c: x.c(), negativity_large_j2 }
            });
            NegativityRow { t1, point }
        })
        .collect())
}
