//! Domain types shared by the rate, solver and entanglement layers.
//!
//! Conventions: ħ = k_B = 1. TLS `i` has eigenstates |+⟩ᵢ (energy −Δᵢ/2)
//! and |−⟩ᵢ (energy +Δᵢ/2). The two-TLS product basis is
//!
//! ```text
//! |1⟩ = |+⟩|+⟩   |2⟩ = |+⟩|−⟩   |3⟩ = |−⟩|+⟩   |4⟩ = |−⟩|−⟩
//! ```
//!
//! so |1⟩ is the ground state and |4⟩ the top state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::EXACT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplittingSpec {
    pub delta1: f64,
    pub delta2: f64,
}

impl SplittingSpec {
    pub fn new(delta1: f64, delta2: f64) -> Self {
        Self { delta1, delta2 }
    }

    pub fn identical(delta: f64) -> Self {
        Self::new(delta, delta)
    }

    pub fn is_identical(&self) -> bool {
        self.delta1 == self.delta2
    }

    /// Energy unit used by normalization: Δ in identical mode, otherwise Δ₁
    /// (falling back to Δ₂ when Δ₁ = 0). `None` when both vanish.
    pub fn energy_unit(&self) -> Option<f64> {
        if self.delta1 > 0.0 {
            Some(self.delta1)
        } else if self.delta2 > 0.0 {
            Some(self.delta2)
        } else {
            None
        }
    }
}

/// One bosonic heat bath, characterized at the Bohr frequency.
///
/// `j1`, `j2` are the transverse spectral weights J_n^(i), `k` the cross
/// weight K_n, and `xibar` the Ohmic longitudinal coefficient: the bath adds
/// `xibar * temperature / Δ` to ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub temperature: f64,
    pub j1: f64,
    pub j2: f64,
    pub k: f64,
    pub xibar: f64,
}

impl BathSpec {
    /// Bath coupled identically to both TLS (J^(1) = J^(2) = `j`).
    pub fn symmetric(temperature: f64, j: f64, k: f64) -> Self {
        Self { temperature, j1: j, j2: j, k, xibar: 0.0 }
    }

    pub fn with_xibar(mut self, xibar: f64) -> Self {
        self.xibar = xibar;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    fn check(&self, index: usize) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidBath { index, reason });
        let fields = [
            ("temperature", self.temperature),
            ("j1", self.j1),
            ("j2", self.j2),
            ("k", self.k),
            ("xibar", self.xibar),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return bad(format!("{name} is not finite"));
            }
        }
        if self.temperature < 0.0 {
            return bad(format!("negative temperature {}", self.temperature));
        }
        if self.j1 < 0.0 || self.j2 < 0.0 {
            return bad(format!("negative transverse rate (j1={}, j2={})", self.j1, self.j2));
        }
        if self.xibar < 0.0 {
            return bad(format!("negative xibar {}", self.xibar));
        }
        // |K| = sqrt(J1 J2) is the co-located limit and stays admissible.
        let bound = (self.j1 * self.j2).sqrt();
        if self.k.abs() > bound * (1.0 + EXACT) + f64::MIN_POSITIVE {
            return bad(format!("|k| = {} exceeds sqrt(j1*j2) = {}", self.k.abs(), bound));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentConfig {
    pub splittings: SplittingSpec,
    pub baths: Vec<BathSpec>,
    #[serde(default)]
    pub beta_tilde: f64,
    #[serde(default)]
    pub detuning: f64,
}

impl EnvironmentConfig {
    pub fn identical(delta: f64, baths: Vec<BathSpec>) -> Self {
        Self { splittings: SplittingSpec::identical(delta), baths, beta_tilde: 0.0, detuning: 0.0 }
    }

    pub fn with_beta_tilde(mut self, beta_tilde: f64) -> Self {
        self.beta_tilde = beta_tilde;
        self
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    /// Copy with the temperatures of the first two baths replaced.
    pub fn with_temperatures(&self, t1: f64, t2: f64) -> Self {
        let mut out = self.clone();
        if let Some(b) = out.baths.get_mut(0) {
            b.temperature = t1;
        }
        if let Some(b) = out.baths.get_mut(1) {
            b.temperature = t2;
        }
        out
    }

    /// ξ = Σ_n xibar_n T_n / Δ for the given Bohr energy.
    pub fn ohmic_xi(&self, delta: f64) -> f64 {
        self.baths.iter().map(|b| b.xibar * b.temperature / delta).sum()
    }

    /// Parse the JSON config file format. The result is not validated.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        raw.into_config()
    }
}

/// Energy convention applied by [`validate_config`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    /// Keep energies as given.
    Raw,
    /// Rescale every energy so that Δ (or Δ₁) is 1.
    #[default]
    Normalized,
}

/// Check every invariant of `raw` and optionally rescale energies.
pub fn validate_config(raw: EnvironmentConfig, units: Units) -> Result<EnvironmentConfig> {
    let s = raw.splittings;
    for (name, d) in [("delta1", s.delta1), ("delta2", s.delta2)] {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::InvalidSplitting(format!("{name} = {d} must be finite and >= 0")));
        }
    }
    if raw.baths.is_empty() {
        return Err(Error::EmptyEnvironment);
    }
    for (i, b) in raw.baths.iter().enumerate() {
        b.check(i)?;
    }
    if !raw.beta_tilde.is_finite() {
        return Err(Error::InvalidConfig("beta_tilde is not finite".into()));
    }
    if !raw.detuning.is_finite() {
        return Err(Error::InvalidConfig("detuning is not finite".into()));
    }
    if raw.detuning != 0.0 && !s.is_identical() {
        return Err(Error::DetuningOutsideIdenticalMode(raw.detuning));
    }

    match (units, s.energy_unit()) {
        (Units::Normalized, Some(unit)) if unit != 1.0 => Ok(rescale(raw, 1.0 / unit)),
        _ => Ok(raw),
    }
}

fn rescale(mut cfg: EnvironmentConfig, f: f64) -> EnvironmentConfig {
    cfg.splittings.delta1 *= f;
    cfg.splittings.delta2 *= f;
    // xibar multiplies T/Δ and is therefore scale free.
    for b in &mut cfg.baths {
        b.temperature *= f;
        b.j1 *= f;
        b.j2 *= f;
        b.k *= f;
    }
    cfg.beta_tilde *= f;
    cfg.detuning *= f;
    cfg
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBath {
    temperature: f64,
    j: Option<f64>,
    j1: Option<f64>,
    j2: Option<f64>,
    #[serde(default)]
    k: f64,
    #[serde(default)]
    xibar: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    delta: Option<f64>,
    delta1: Option<f64>,
    delta2: Option<f64>,
    baths: Vec<RawBath>,
    #[serde(default)]
    beta_tilde: f64,
    #[serde(default)]
    detuning: f64,
}

impl RawConfig {
    fn into_config(self) -> Result<EnvironmentConfig> {
        let splittings = match (self.delta, self.delta1, self.delta2) {
            (Some(d), None, None) => SplittingSpec::identical(d),
            (None, Some(d1), Some(d2)) => SplittingSpec::new(d1, d2),
            _ => {
                return Err(Error::InvalidConfig(
                    "give either \"delta\" or both \"delta1\" and \"delta2\"".into(),
                ))
            }
        };
        let baths = self
            .baths
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                let (j1, j2) = match (b.j, b.j1, b.j2) {
                    (Some(j), None, None) => (j, j),
                    (None, Some(j1), Some(j2)) => (j1, j2),
                    _ => {
                        return Err(Error::InvalidConfig(format!(
                            "bath #{i}: give either \"j\" or both \"j1\" and \"j2\""
                        )))
                    }
                };
                Ok(BathSpec { temperature: b.temperature, j1, j2, k: b.k, xibar: b.xibar })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EnvironmentConfig {
            splittings,
            baths,
            beta_tilde: self.beta_tilde,
            detuning: self.detuning,
        })
    }
}

/// Two-TLS density matrix of X form: diagonal populations plus the single
/// coherence c = ⟨2|ρ|3⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XState {
    p: [f64; 4],
    c: Complex64,
}

impl XState {
    /// Validated constructor (trace within 1e-12, positivity of every block).
    pub fn new(p: [f64; 4], c: Complex64) -> Result<Self> {
        if p.iter().any(|v| !v.is_finite()) || !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        if let Some(v) = p.iter().find(|v| **v < 0.0) {
            return Err(Error::InvalidState(format!("negative population {v}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > EXACT {
            return Err(Error::InvalidState(format!("populations sum to {sum}")));
        }
        let bound = (p[1] * p[2]).sqrt();
        if c.norm() > bound * (1.0 + EXACT) + EXACT * EXACT {
            return Err(Error::InvalidState(format!("|c| = {} exceeds sqrt(p2 p3) = {bound}", c.norm())));
        }
        Ok(Self { p, c })
    }

    pub(crate) fn from_parts(p: [f64; 4], c: Complex64) -> Self {
        Self { p, c }
    }

    pub fn maximally_mixed() -> Self {
        Self { p: [0.25; 4], c: Complex64::new(0.0, 0.0) }
    }

    /// ρ₁ ⊗ ρ₂ with ρᵢ = diag(ground, excited) weights of TLS i.
    pub fn product(tls1: [f64; 2], tls2: [f64; 2]) -> Self {
        Self {
            p: [tls1[0] * tls2[0], tls1[0] * tls2[1], tls1[1] * tls2[0], tls1[1] * tls2[1]],
            c: Complex64::new(0.0, 0.0),
        }
    }

    /// Thermal state of two uncoupled TLS at a common temperature.
    pub fn gibbs(delta1: f64, delta2: f64, temperature: f64) -> Self {
        let marginal = |d: f64| {
            if temperature == 0.0 {
                if d > 0.0 { [1.0, 0.0] } else { [0.5, 0.5] }
            } else {
                let w = (-d / temperature).exp();
                [1.0 / (1.0 + w), w / (1.0 + w)]
            }
        };
        Self::product(marginal(delta1), marginal(delta2))
    }

    pub fn p(&self) -> [f64; 4] {
        self.p
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Reduced state of TLS 1 as (|+⟩ weight, |−⟩ weight).
    pub fn marginal_1(&self) -> [f64; 2] {
        [self.p[0] + self.p[1], self.p[2] + self.p[3]]
    }

    pub fn marginal_2(&self) -> [f64; 2] {
        [self.p[0] + self.p[2], self.p[1] + self.p[3]]
    }

    pub fn max_abs_diff(&self, other: &XState) -> f64 {
        let dp = self.p.iter().zip(other.p.iter()).map(|(a, b)| (a - b).abs());
        dp.chain(std::iter::once((self.c - other.c).norm())).fold(0.0, f64::max)
    }

    /// ½‖ρ − σ‖₁ for two X states.
    pub fn trace_distance(&self, other: &XState) -> f64 {
        let d: Vec<f64> = self.p.iter().zip(other.p.iter()).map(|(a, b)| a - b).collect();
        let dc = (self.c - other.c).norm();
        // middle block [[d2, dc], [dc*, d3]]
        let mean = 0.5 * (d[1] + d[2]);
        let rad = (0.25 * (d[1] - d[2]).powi(2) + dc * dc).sqrt();
        0.5 * (d[0].abs() + d[3].abs() + (mean + rad).abs() + (mean - rad).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDecomposition {
    pub pop_ground: f64,
    pub pop_psi_plus: f64,
    pub pop_psi_minus: f64,
    pub pop_top: f64,
    /// ⟨ψ⁺|ρ|ψ⁻⟩
    pub residual_coherence: Complex64,
}

/// Express `x` in the basis {|1⟩, |ψ⁺⟩, |ψ⁻⟩, |4⟩}, |ψ±⟩ = (|2⟩ ± |3⟩)/√2.
pub fn to_bell(x: &XState) -> BellDecomposition {
    let [p1, p2, p3, p4] = x.p;
    let mid = 0.5 * (p2 + p3);
    BellDecomposition {
        pop_ground: p1,
        pop_psi_plus: mid + x.c.re,
        pop_psi_minus: mid - x.c.re,
        pop_top: p4,
        residual_coherence: Complex64::new(0.5 * (p2 - p3), -x.c.im),
    }
}

pub fn from_bell(b: &BellDecomposition) -> Result<XState> {
    let mid = 0.5 * (b.pop_psi_plus + b.pop_psi_minus);
    let p = [
        b.pop_ground,
        mid + b.residual_coherence.re,
        mid - b.residual_coherence.re,
        b.pop_top,
    ];
    let c = Complex64::new(0.5 * (b.pop_psi_plus - b.pop_psi_minus), -b.residual_coherence.im);
    XState::new(p, c)
}

impl BellDecomposition {
    pub fn total(&self) -> f64 {
        self.pop_ground + self.pop_psi_plus + self.pop_psi_minus + self.pop_top
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_bath_is_accepted() {
        let cfg = EnvironmentConfig::identical(1.0, vec![BathSpec::symmetric(1.0, 1.0, 0.0)]);
        assert_eq!(validate_config(cfg.clone(), Units::Raw).unwrap(), cfg);
    }

    #[test]
    fn cross_weight_bound() {
        let over = EnvironmentConfig::identical(1.0, vec![BathSpec::symmetric(1.0, 1.0, 2.0)]);
        assert!(matches!(
            validate_config(over, Units::Raw),
            Err(Error::InvalidBath { index: 0, .. })
        ));
        let edge = EnvironmentConfig::identical(1.0, vec![BathSpec::symmetric(1.0, 1.0, 1.0)]);
        assert!(validate_config(edge, Units::Raw).is_ok());
        let neg = EnvironmentConfig::identical(1.0, vec![BathSpec::symmetric(1.0, 1.0, -1.0)]);
        assert!(validate_config(neg, Units::Raw).is_ok());
    }

    #[test]
    fn rejects_bad_inputs() {
        let empty = EnvironmentConfig::identical(1.0, vec![]);
        assert_eq!(validate_config(empty, Units::Raw), Err(Error::EmptyEnvironment));

        let cold = EnvironmentConfig::identical(1.0, vec![BathSpec::symmetric(-1.0, 1.0, 0.0)]);
        assert!(matches!(validate_config(cold, Units::Raw), Err(Error::InvalidBath { .. })));

        let detuned = EnvironmentConfig {
            splittings: SplittingSpec::new(1.0, 2.0),
            baths: vec![BathSpec::symmetric(1.0, 1.0, 0.0)],
            beta_tilde: 0.0,
            detuning: 0.1,
        };
        assert!(matches!(
            validate_config(detuned, Units::Raw),
            Err(Error::DetuningOutsideIdenticalMode(_))
        ));
    }

    #[test]
    fn normalization_and_idempotence() {
        let cfg = EnvironmentConfig::identical(
            2.0,
            vec![BathSpec::symmetric(4.0, 0.5, 0.25).with_xibar(0.3), BathSpec::symmetric(0.2, 6.0, 6.0)],
        )
        .with_beta_tilde(1.0);
        let once = validate_config(cfg, Units::Normalized).unwrap();
        assert_eq!(once.splittings, SplittingSpec::identical(1.0));
        assert_eq!(once.baths[0].temperature, 2.0);
        assert_eq!(once.baths[0].j1, 0.25);
        assert_eq!(once.baths[0].xibar, 0.3);
        assert_eq!(once.beta_tilde, 0.5);
        let twice = validate_config(once.clone(), Units::Normalized).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn json_shorthand() {
        let cfg = EnvironmentConfig::from_json_str(
            r#"{"delta": 1.0, "baths": [{"temperature": 2.0, "j": 1.0, "k": 0.5},
                {"temperature": 0.1, "j1": 5.0, "j2": 4.0, "xibar": 0.01}], "beta_tilde": 0.2}"#,
        )
        .unwrap();
        assert!(cfg.splittings.is_identical());
        assert_eq!(cfg.baths[0], BathSpec::symmetric(2.0, 1.0, 0.5));
        assert_eq!(cfg.baths[1].j2, 4.0);
        assert_eq!(cfg.baths[1].k, 0.0);
        assert_eq!(cfg.beta_tilde, 0.2);

        let bad = EnvironmentConfig::from_json_str(r#"{"delta": 1.0, "delta1": 2.0, "baths": []}"#);
        assert!(matches!(bad, Err(Error::InvalidConfig(_))));
        let unknown = EnvironmentConfig::from_json_str(r#"{"delta": 1.0, "baths": [], "gamma": 1}"#);
        assert!(matches!(unknown, Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn xstate_invariants() {
        assert!(XState::new([0.25; 4], c(0.0, 0.0)).is_ok());
        assert!(XState::new([0.5, 0.5, 0.1, -0.1], c(0.0, 0.0)).is_err());
        assert!(XState::new([0.5, 0.2, 0.2, 0.2], c(0.0, 0.0)).is_err());
        assert!(XState::new([0.4, 0.1, 0.1, 0.4], c(0.2, 0.0)).is_err());
    }

    #[test]
    fn bell_examples() {
        let mixed = to_bell(&XState::maximally_mixed());
        for v in [mixed.pop_ground, mixed.pop_psi_plus, mixed.pop_psi_minus, mixed.pop_top] {
            assert_eq!(v, 0.25);
        }
        assert_eq!(mixed.residual_coherence, c(0.0, 0.0));

        let x = XState::new([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 0.0], c(-1.0 / 6.0, 0.0)).unwrap();
        let b = to_bell(&x);
        assert!((b.pop_ground - 2.0 / 3.0).abs() < 1e-15);
        assert!((b.pop_psi_minus - 1.0 / 3.0).abs() < 1e-15);
        assert!(b.pop_psi_plus.abs() < 1e-15);
        assert_eq!(b.pop_top, 0.0);

        let triplet = XState::new([0.0, 0.5, 0.5, 0.0], c(0.5, 0.0)).unwrap();
        assert_eq!(to_bell(&triplet).pop_psi_plus, 1.0);
    }

    #[test]
    fn bell_round_trip_with_complex_coherence() {
        let x = XState::new([0.3, 0.25, 0.15, 0.3], c(0.05, -0.12)).unwrap();
        let b = to_bell(&x);
        assert!((b.total() - 1.0).abs() < 1e-15);
        assert!((b.residual_coherence - c(0.05, 0.12)).norm() < 1e-15);
        let back = from_bell(&b).unwrap();
        assert!(back.max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn trace_distance_basics() {
        let a = XState::maximally_mixed();
        assert_eq!(a.trace_distance(&a), 0.0);
        let ground = XState::new([1.0, 0.0, 0.0, 0.0], c(0.0, 0.0)).unwrap();
        let singlet = XState::new([0.0, 0.5, 0.5, 0.0], c(-0.5, 0.0)).unwrap();
        assert!((ground.trace_distance(&singlet) - 1.0).abs() < 1e-15);
        let triplet = XState::new([0.0, 0.5, 0.5, 0.0], c(0.5, 0.0)).unwrap();
        assert!((triplet.trace_distance(&singlet) - 1.0).abs() < 1e-15);
    }
}
