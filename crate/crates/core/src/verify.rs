//! Built-in self-checks: independent routes cross-checked against each other
//! and against known closed-form anchors.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::entanglement::{
    boundary_t2, entangled_near_zero_t, limiting_state, negativity, scan_t1t2, two_bath_config, zero_t_criterion,
    DEFAULT_BRACKET,
};
use crate::error::Result;
use crate::model::{to_bell, BathSpec, EnvironmentConfig, SplittingSpec, XState};
use crate::rates::{golden_rule_rates, reduced_parameters, spatial_ratio, GoldenRuleRates};
use crate::solver::{
    bell_chain_steady, build_stationarity_system, product_from_rates, solve_spectral_coherence, solve_system,
    steady_detuned, steady_identical_closed, steady_identical_linear, steady_state,
};
use crate::tolerance::CROSS_PATH;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {}: {status} {} ({})", self.id, self.name, self.detail)
    }
}

fn report(id: u32, name: &'static str, result: Result<(bool, String)>) -> CheckReport {
    match result {
        Ok((passed, detail)) => CheckReport { id, name, passed, detail },
        Err(e) => CheckReport { id, name, passed: false, detail: format!("error: {e}") },
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.log10(), b.log10(), n).into_iter().map(|e| 10f64.powf(e)).collect()
}

/// Hot weak bath (J₁, K₁ = 0) and cold strong bath with K₂ = κJ₂.
fn limiting_template(j2_over_j1: f64, kappa: f64, t1: f64, t2: f64) -> EnvironmentConfig {
    two_bath_config(t1, 1.0, 0.0, t2, j2_over_j1, kappa * j2_over_j1)
}

pub const LIMITING_NEGATIVITY: f64 = 0.039_344_662_916_631_6;

/// Limiting-regime mixture at T₁ = 10Δ, T₂ = 0.01Δ, J₂/J₁ = 10⁴.
pub fn criterion_1() -> CheckReport {
    report(1, "limiting-regime mixture", (|| {
        let x = steady_state(&limiting_template(1e4, 1.0, 10.0, 0.01))?.state;
        let p1 = x.p()[0];
        let singlet = to_bell(&x).pop_psi_minus;
        let n = negativity(&x).negativity;
        let ok = (p1 - 2.0 / 3.0).abs() <= 1e-2 && (singlet - 1.0 / 3.0).abs() <= 1e-2 && (n - LIMITING_NEGATIVITY).abs() <= 1e-3;
        Ok((ok, format!("p1 = {p1:.6} (2/3 ± 1e-2), singlet = {singlet:.6} (1/3 ± 1e-2), N = {n:.6} ({LIMITING_NEGATIVITY:.7} ± 1e-3)")))
    })())
}

/// Largest entanglement boundary T₂ over T₁ for K₂ = J₂ = r J₁.
pub fn max_boundary_t2(j2_over_j1: f64) -> Result<(f64, f64)> {
    let template = limiting_template(j2_over_j1, 1.0, 0.0, 0.0);
    let at = |t1: f64| -> Result<f64> { Ok(boundary_t2(&template, t1, DEFAULT_BRACKET)?.t2.unwrap_or(0.0)) };
    let grid = logspace(1e-2, 1e4, 61);
    let values = grid.iter().map(|&t| at(t)).collect::<Result<Vec<_>>>()?;
    let best = (0..grid.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    // golden section on log T₁ between the neighbours of the best grid point
    let (mut a, mut b) = (grid[best.saturating_sub(1)].ln(), grid[(best + 1).min(grid.len() - 1)].ln());
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (at(c.exp())?, at(d.exp())?);
    for _ in 0..30 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = at(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = at(d.exp())?;
        }
    }
    let (t1, t2) = if fc > fd { (c.exp(), fc) } else { (d.exp(), fd) };
    Ok(if values[best] > t2 { (grid[best], values[best]) } else { (t1, t2) })
}

pub fn criterion_2() -> CheckReport {
    report(2, "T2 ceiling of the entanglement region", (|| {
        let (t1, t2) = max_boundary_t2(1e4)?;
        Ok(((t2 - 0.567).abs() <= 0.01, format!("max T2 = {t2:.6} at T1 = {t1:.3} (0.567 ± 0.01)")))
    })())
}

/// Relative distance of a K₁ = 0 point from the zero-temperature boundary.
pub fn k1_zero_margin(kappa: f64, r: f64) -> f64 {
    (2f64.sqrt() * kappa * r / (1.0 + r) - 1.0).abs()
}

pub fn criterion_3() -> CheckReport {
    report(3, "zero-temperature criterion concordance", (|| {
        let (mut checked, mut mismatches, mut threshold_errors) = (0, 0, 0);
        for kappa in linspace(0.6, 1.0, 20) {
            for r in linspace(2.0, 100.0, 20) {
                let predicted = zero_t_criterion(1.0, r, 0.0, kappa * r)?;
                let special = kappa > 1.0 / 2f64.sqrt() && r * (2f64.sqrt() * kappa - 1.0) > 1.0;
                if k1_zero_margin(kappa, r) < 1e-12 {
                    continue;
                }
                if special != predicted {
                    threshold_errors += 1;
                }
                if k1_zero_margin(kappa, r) >= 0.05 {
                    checked += 1;
                    if entangled_near_zero_t(1.0, r, 0.0, kappa * r)? != predicted {
                        mismatches += 1;
                    }
                }
            }
        }
        Ok((
            mismatches == 0 && threshold_errors == 0 && checked > 0,
            format!("{checked} points beyond 5% margin, {mismatches} solver mismatches, {threshold_errors} threshold disagreements"),
        ))
    })())
}

/// Random valid symmetric environment at unit splitting.
pub fn random_symmetric_config<R: Rng>(rng: &mut R) -> EnvironmentConfig {
    let n = rng.gen_range(2..=3);
    let baths = (0..n)
        .map(|_| {
            let j = rng.gen_range(0.05..5.0);
            BathSpec::symmetric(rng.gen_range(0.0..3.0), j, rng.gen_range(-j..=j)).with_xibar(rng.gen_range(0.0..0.2))
        })
        .collect();
    EnvironmentConfig::identical(1.0, baths).with_beta_tilde(rng.gen_range(-2.0..2.0))
}

fn state_diff(a: &XState, b: &XState) -> f64 {
    a.max_abs_diff(b)
}

pub const RANDOM_CONFIGS: usize = 1000;
pub const RANDOM_SEED: u64 = 0x5eed_2015;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct OracleStats {
    pub configs: usize,
    pub closed_vs_linear: f64,
    pub closed_vs_spectral: f64,
    pub bell_configs: usize,
    pub closed_vs_bell: f64,
}

pub fn oracle_stats(count: usize, seed: u64) -> Result<OracleStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = OracleStats::default();
    let bell = |gr: &GoldenRuleRates, s: &mut OracleStats| -> Result<()> {
        let closed = steady_identical_closed(&reduced_parameters(gr)?)?;
        s.closed_vs_bell = s.closed_vs_bell.max(state_diff(&closed, &bell_chain_steady(gr)?));
        s.bell_configs += 1;
        Ok(())
    };
    for _ in 0..count {
        let cfg = random_symmetric_config(&mut rng);
        let gr = golden_rule_rates(&cfg)?;
        let closed = steady_identical_closed(&reduced_parameters(&gr)?)?;
        let linear = steady_identical_linear(&build_stationarity_system(&gr, 0.0))?;
        s.closed_vs_linear = s.closed_vs_linear.max(state_diff(&closed, &linear));
        s.closed_vs_spectral = s.closed_vs_spectral.max((solve_spectral_coherence(&gr)? - closed.c()).norm());
        s.configs += 1;

        let mut no_xi = cfg.clone();
        no_xi.baths.iter_mut().for_each(|b| b.xibar = 0.0);
        bell(&golden_rule_rates(&no_xi)?, &mut s)?;
    }
    for theta in [1e-3, 0.1, 1.0, 10.0] {
        for kappa in [-1.0, 0.5, 1.0] {
            let t1 = theta * 1e4;
            bell(&golden_rule_rates(&limiting_template(1e4, kappa, t1, 0.01))?, &mut s)?;
        }
    }
    Ok(s)
}

pub fn criterion_4() -> CheckReport {
    report(4, "oracle equivalence", (|| {
        let s = oracle_stats(RANDOM_CONFIGS, RANDOM_SEED)?;
        let ok = s.configs >= 1000 && s.closed_vs_linear <= CROSS_PATH && s.closed_vs_spectral <= CROSS_PATH && s.closed_vs_bell <= 1e-9;
        Ok((
            ok,
            format!(
                "{} configs: closed/linear {:.2e}, closed/spectral {:.2e}; {} chain configs: closed/chain {:.2e}",
                s.configs, s.closed_vs_linear, s.closed_vs_spectral, s.bell_configs, s.closed_vs_bell
            ),
        ))
    })())
}

pub fn criterion_5() -> CheckReport {
    report(5, "equilibrium and zero-splitting theorems", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED ^ 5);
        let (mut gibbs_dev, mut marginal_dev, mut mixed_dev) = (0.0_f64, 0.0_f64, 0.0_f64);
        for _ in 0..200 {
            let base = random_symmetric_config(&mut rng);
            let t = rng.gen_range(0.05..5.0);
            let mut eq = base.clone();
            eq.baths.iter_mut().for_each(|b| b.temperature = t);
            let gibbs = XState::gibbs(1.0, 1.0, t);
            gibbs_dev = gibbs_dev.max(steady_state(&eq)?.state.trace_distance(&gibbs));
            let gr = golden_rule_rates(&eq)?;
            gibbs_dev = gibbs_dev.max(solve_system(&build_stationarity_system(&gr, 0.0), false)?.trace_distance(&gibbs));
            // asymmetric couplings at a common temperature
            let mut asym = eq.clone();
            asym.baths.iter_mut().for_each(|b| b.j2 = rng.gen_range(0.05_f64..5.0).max(b.k.abs() * b.k.abs() / b.j1));
            gibbs_dev = gibbs_dev.max(steady_state(&asym)?.state.trace_distance(&gibbs));

            let mut split = base.clone();
            split.splittings = SplittingSpec::new(1.0, 0.0);
            let m = steady_state(&split)?.state.marginal_2();
            marginal_dev = marginal_dev.max((m[0] - 0.5).abs()).max((m[1] - 0.5).abs());

            let mut zero = base;
            zero.splittings = SplittingSpec::identical(0.0);
            mixed_dev = mixed_dev.max(steady_state(&zero)?.state.max_abs_diff(&XState::maximally_mixed()));
        }
        Ok((
            gibbs_dev <= 1e-12 && marginal_dev <= 1e-12 && mixed_dev <= 1e-12,
            format!("equal T: {gibbs_dev:.2e}, delta2 = 0 marginal: {marginal_dev:.2e}, delta1 = delta2 = 0: {mixed_dev:.2e}"),
        ))
    })())
}

pub fn criterion_6() -> CheckReport {
    report(6, "beta-tilde non-contribution", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED ^ 6);
        let mut worst = 0.0_f64;
        for _ in 0..50 {
            let cfg = random_symmetric_config(&mut rng).with_beta_tilde(0.0);
            let gr = golden_rule_rates(&cfg)?;
            let reference = solve_system(&build_stationarity_system(&gr, 0.0), false)?;
            let gamma = gr.gamma_plus_1;
            for bt in linspace(-10.0 * gamma, 10.0 * gamma, 21) {
                let mut g = gr;
                g.beta_tilde = bt;
                worst = worst.max(solve_system(&build_stationarity_system(&g, 0.0), false)?.max_abs_diff(&reference));
            }
        }
        Ok((worst < 1e-12, format!("max change {worst:.2e} over beta_tilde in [-10 gamma, 10 gamma]")))
    })())
}

pub fn criterion_7() -> CheckReport {
    report(7, "detuning interpolation", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED ^ 7);
        let (mut zero_dev, mut far_dev) = (0.0_f64, 0.0_f64);
        for _ in 0..100 {
            let gr = golden_rule_rates(&random_symmetric_config(&mut rng))?;
            let closed = steady_identical_closed(&reduced_parameters(&gr)?)?;
            zero_dev = zero_dev.max(steady_detuned(&gr, 0.0)?.max_abs_diff(&closed));
            let far = steady_detuned(&gr, 1e8 * gr.gamma_plus_1)?;
            far_dev = far_dev.max(far.max_abs_diff(&product_from_rates(&gr)?));
        }
        Ok((
            zero_dev <= CROSS_PATH && far_dev <= 1e-6,
            format!("delta = 0 vs identical: {zero_dev:.2e}; delta = 1e8 gamma vs product: {far_dev:.2e}"),
        ))
    })())
}

pub const NESTING_RATIOS: [f64; 3] = [5.0, 10.0, 50.0];

pub fn criterion_8() -> CheckReport {
    report(8, "entanglement region grows with J2", (|| {
        let grid = linspace(0.02, 3.0, 40);
        let curves: Vec<Vec<Option<f64>>> = NESTING_RATIOS
            .iter()
            .map(|&r| scan_t1t2(&limiting_template(r, 1.0, 0.0, 0.0), &grid, DEFAULT_BRACKET))
            .map(|c| {
                c.points.iter().try_for_each(|p| p.as_ref().map(|_| ()).map_err(Clone::clone))?;
                Ok(c.t2_values())
            })
            .collect::<Result<_>>()?;
        let mut violations = 0;
        for pair in curves.windows(2) {
            for (small, large) in pair[0].iter().zip(&pair[1]) {
                let (s, l) = (small.unwrap_or(f64::NEG_INFINITY), large.unwrap_or(f64::NEG_INFINITY));
                if s > l {
                    violations += 1;
                }
            }
        }
        let nonempty = curves.iter().all(|c| c.iter().any(Option::is_some));
        let mut equal_bath_entangled = 0;
        for j in [0.1, 1.0, 7.0] {
            for k in linspace(-1.0, 1.0, 41) {
                if zero_t_criterion(j, j, k * j, k * j)? {
                    equal_bath_entangled += 1;
                }
            }
        }
        Ok((
            violations == 0 && nonempty && equal_bath_entangled == 0,
            format!("{violations} nesting violations over {} T1 points; {equal_bath_entangled} entangled equal-bath points", grid.len()),
        ))
    })())
}

/// J₀(x) from the first `terms` series terms in exact rational arithmetic.
pub fn j0_rational_series(x: BigRational, terms: usize) -> f64 {
    let q = -(&x * &x) / BigRational::from_integer(BigInt::from(4));
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for k in 0..terms {
        if k > 0 {
            let kk = BigRational::from_integer(BigInt::from(k * k));
            term = term * &q / kk;
        }
        sum += &term;
    }
    sum.to_f64().unwrap_or(f64::NAN)
}

pub fn criterion_9() -> CheckReport {
    report(9, "spatial coupling ratios", (|| {
        let mut worst = 0.0_f64;
        for m in 0..=512 {
            let x = BigRational::new(BigInt::from(m), BigInt::from(64));
            let xf = m as f64 / 64.0;
            worst = worst.max((spatial_ratio(2, xf)? - j0_rational_series(x, 50)).abs());
        }
        let zero = spatial_ratio(2, 2.404825557695773)?.abs();
        let r3 = spatial_ratio(3, std::f64::consts::PI)?;
        let r1 = spatial_ratio(1, 0.0)?;
        Ok((
            worst <= 1e-10 && zero <= 1e-10 && r3.abs() <= 1e-15 && r1 == 1.0,
            format!("J0 vs rational series on [0, 8]: {worst:.2e}; J0 at first zero: {zero:.2e}; D=3 at pi: {r3:.2e}; D=1 at 0: {r1}"),
        ))
    })())
}

/// Boundary T₂ rises then falls along T₁: at most one change of direction
/// beyond the bisection tolerance.
pub fn is_unimodal(values: &[f64], tol: f64) -> bool {
    let mut falling = false;
    for w in values.windows(2) {
        if w[1] < w[0] - tol {
            falling = true;
        } else if falling && w[1] > w[0] + tol {
            return false;
        }
    }
    true
}

/// Worst deviation of the full solution from the limiting state over θ,
/// at J₂/J₁ = 10⁴, T₂ = 0.1Δ.
pub fn limiting_convergence(kappa: f64, thetas: &[f64]) -> Result<f64> {
    let r = 1e4;
    let mut worst = 0.0_f64;
    for &theta in thetas {
        let x = steady_state(&limiting_template(r, kappa, theta * r, 0.1))?.state;
        let l = limiting_state(kappa, theta)?;
        let dn = (negativity(&x).negativity - negativity(&l).negativity).abs();
        worst = worst.max(dn).max(x.max_abs_diff(&l));
    }
    Ok(worst)
}

pub fn criterion_10() -> CheckReport {
    report(10, "boundary shape and large-J2 convergence", (|| {
        let template = limiting_template(50.0, 1.0, 0.0, 0.0);
        let curve = scan_t1t2(&template, &logspace(1e-2, 1e2, 40), DEFAULT_BRACKET);
        let mut values = Vec::new();
        let mut flagged = 0;
        for p in &curve.points {
            let p = p.clone()?;
            flagged += p.non_monotone as usize;
            values.push(p.t2.unwrap_or(0.0));
        }
        let unimodal = is_unimodal(&values, 2e-6);
        let thetas = logspace(0.05, 20.0, 30);
        let dev = limiting_convergence(1.0, &thetas)?.max(limiting_convergence(0.8, &thetas)?);
        Ok((
            unimodal && flagged == 0 && dev <= 1e-3,
            format!("boundary unimodal: {unimodal}, non-monotone brackets: {flagged}; limiting deviation {dev:.2e}"),
        ))
    })())
}

pub fn run_all() -> Vec<CheckReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}
