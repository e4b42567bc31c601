//! Golden-rule coefficients of the stationarity system for bosonic baths,
//! the reduced symmetric parameters, and bath-geometry coupling ratios.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::EnvironmentConfig;
use crate::special::bessel_j0;
use crate::tolerance::EXACT;

/// Arguments Δ/T above this value give n̄ = 0 exactly.
const OCCUPATION_CUTOFF: f64 = 700.0;

/// Mean occupation n̄ = 1/(e^(Δ/T) − 1) of a bath mode at the Bohr energy.
pub fn bose_occupation(delta: f64, temperature: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::NonPositiveDelta(delta));
    }
    if temperature <= 0.0 {
        return Ok(0.0);
    }
    let x = delta / temperature;
    if x > OCCUPATION_CUTOFF {
        return Ok(0.0);
    }
    Ok(1.0 / x.exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenRuleRates {
    /// Downward (|−⟩ → |+⟩) rate of TLS 1.
    pub gamma_plus_1: f64,
    /// Upward rate of TLS 1.
    pub gamma_minus_1: f64,
    pub gamma_plus_2: f64,
    pub gamma_minus_2: f64,
    /// β₁, cross term of the upward rates.
    pub beta_one: Complex64,
    /// β₄, cross term of the downward rates (collective decay rate).
    pub beta_four: Complex64,
    pub beta_tilde: f64,
    /// Decay coefficient α of the |2⟩⟨3| coherence.
    pub alpha: Complex64,
    pub delta1: f64,
    pub delta2: f64,
}

impl GoldenRuleRates {
    pub fn is_identical(&self) -> bool {
        self.delta1 == self.delta2
    }

    /// γ̃ᵢ± equal for both TLS up to `EXACT` relative.
    pub fn is_symmetric(&self) -> bool {
        close(self.gamma_plus_1, self.gamma_plus_2) && close(self.gamma_minus_1, self.gamma_minus_2)
    }

    pub fn is_real(&self) -> bool {
        self.beta_one.im == 0.0 && self.beta_four.im == 0.0 && self.alpha.im == 0.0
    }

    /// (γ̃₁⁻ + γ̃₁⁺ + γ̃₂⁻ + γ̃₂⁺)/2, the transverse part of α.
    pub fn transverse_alpha(&self) -> f64 {
        0.5 * (self.gamma_plus_1 + self.gamma_minus_1 + self.gamma_plus_2 + self.gamma_minus_2)
    }

    /// Scale γ of the longitudinal term, α = transverse + γ ξ.
    pub fn gamma_scale(&self) -> f64 {
        0.5 * (self.gamma_plus_1 + self.gamma_plus_2)
    }

    pub fn xi(&self) -> f64 {
        let g = self.gamma_scale();
        if g == 0.0 {
            0.0
        } else {
            (self.alpha.re - self.transverse_alpha()) / g
        }
    }

    /// Golden-rule rates |4⟩ → |ψ±⟩ (equal to |ψ±⟩ → |1⟩), as (plus, minus).
    pub fn bell_down_rates(&self) -> (f64, f64) {
        let mean = self.gamma_scale();
        (mean + self.beta_four.re, mean - self.beta_four.re)
    }

    /// Golden-rule rates |1⟩ → |ψ±⟩ (equal to |ψ±⟩ → |4⟩), as (plus, minus).
    pub fn bell_up_rates(&self) -> (f64, f64) {
        let mean = 0.5 * (self.gamma_minus_1 + self.gamma_minus_2);
        (mean + self.beta_one.re, mean - self.beta_one.re)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXACT * a.abs().max(b.abs())
}

/// (γ̃ᵢ⁺, γ̃ᵢ⁻) of TLS `tls` (1 or 2) at its own splitting.
pub fn tls_rates(config: &EnvironmentConfig, tls: usize) -> Result<(f64, f64)> {
    let delta = match tls {
        1 => config.splittings.delta1,
        2 => config.splittings.delta2,
        _ => return Err(Error::InvalidArgument(format!("no TLS #{tls}"))),
    };
    let mut down = 0.0;
    let mut up = 0.0;
    for bath in &config.baths {
        let j = if tls == 1 { bath.j1 } else { bath.j2 };
        let n = bose_occupation(delta, bath.temperature)?;
        down += j * (n + 1.0);
        up += j * n;
    }
    Ok((down, up))
}

/// Assemble the coefficients entering the stationarity system.
///
/// The cross coefficients β₁, β₄ only exist for identical splittings and are
/// zero otherwise. α carries the Ohmic longitudinal term γ·Σ xibar_n T_n/Δ;
/// its principal-value (imaginary) part vanishes for symmetric coupling and
/// is not modeled.
pub fn golden_rule_rates(config: &EnvironmentConfig) -> Result<GoldenRuleRates> {
    let (gamma_plus_1, gamma_minus_1) = tls_rates(config, 1)?;
    let (gamma_plus_2, gamma_minus_2) = tls_rates(config, 2)?;
    let s = config.splittings;

    let (mut beta_one, mut beta_four) = (0.0, 0.0);
    if s.is_identical() {
        for bath in &config.baths {
            let n = bose_occupation(s.delta1, bath.temperature)?;
            beta_four += bath.k * (n + 1.0);
            beta_one += bath.k * n;
        }
    }

    let mut gr = GoldenRuleRates {
        gamma_plus_1,
        gamma_minus_1,
        gamma_plus_2,
        gamma_minus_2,
        beta_one: Complex64::new(beta_one, 0.0),
        beta_four: Complex64::new(beta_four, 0.0),
        beta_tilde: config.beta_tilde,
        alpha: Complex64::new(0.0, 0.0),
        delta1: s.delta1,
        delta2: s.delta2,
    };
    let xi = config.ohmic_xi(s.delta1);
    gr.alpha = Complex64::new(gr.transverse_alpha() + xi * gr.gamma_scale(), 0.0);
    Ok(gr)
}

/// Parameters of the identical, symmetrically coupled case:
/// γ̃ᵢ⁺ = γ, γ̃ᵢ⁻ = γη, β₄ = β, β₁ = βη′, α = γ(1 + η + ξ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedRates {
    pub gamma: f64,
    pub eta: f64,
    pub eta_prime: f64,
    pub xi: f64,
    pub beta: f64,
    pub beta_tilde: f64,
}

impl ReducedRates {
    /// β₁ = βη′.
    pub fn beta_one(&self) -> f64 {
        self.beta * self.eta_prime
    }

    pub fn alpha(&self) -> f64 {
        self.gamma * (1.0 + self.eta + self.xi)
    }

    /// Inverse of [`reduced_parameters`] at Bohr energy `delta`.
    pub fn to_golden_rule_rates(&self, delta: f64) -> GoldenRuleRates {
        let up = self.gamma * self.eta;
        GoldenRuleRates {
            gamma_plus_1: self.gamma,
            gamma_minus_1: up,
            gamma_plus_2: self.gamma,
            gamma_minus_2: up,
            beta_one: Complex64::new(self.beta_one(), 0.0),
            beta_four: Complex64::new(self.beta, 0.0),
            beta_tilde: self.beta_tilde,
            alpha: Complex64::new(self.alpha(), 0.0),
            delta1: delta,
            delta2: delta,
        }
    }
}

pub fn reduced_parameters(gr: &GoldenRuleRates) -> Result<ReducedRates> {
    if !gr.is_identical() {
        return Err(Error::DifferentSplittings);
    }
    if !gr.is_symmetric() {
        return Err(Error::AsymmetricCoupling);
    }
    if !gr.is_real() {
        return Err(Error::InapplicableRegime("complex coefficients".into()));
    }
    let gamma = gr.gamma_plus_1;
    if !(gamma > 0.0) {
        return Err(Error::ZeroGamma);
    }
    let beta = gr.beta_four.re;
    let beta_one = gr.beta_one.re;
    let eta_prime = if beta != 0.0 {
        beta_one / beta
    } else if beta_one == 0.0 {
        0.0
    } else {
        return Err(Error::UndefinedEtaPrime);
    };
    let eta = gr.gamma_minus_1 / gamma;
    Ok(ReducedRates {
        gamma,
        eta,
        eta_prime,
        xi: gr.alpha.re / gamma - 1.0 - eta,
        beta,
        beta_tilde: gr.beta_tilde,
    })
}

/// K/J ratio of a continuous free field of dimension `dimension` for the
/// scaled distance d̄ between the two coupling points.
pub fn spatial_ratio(dimension: u32, dbar: f64) -> Result<f64> {
    if !(dbar >= 0.0) || !dbar.is_finite() {
        return Err(Error::InvalidArgument(format!("dbar = {dbar} must be finite and >= 0")));
    }
    match dimension {
        1 => Ok(dbar.cos()),
        2 => Ok(bessel_j0(dbar)),
        3 => Ok(if dbar == 0.0 { 1.0 } else { dbar.sin() / dbar }),
        d => Err(Error::UnsupportedDimension(d)),
    }
}
