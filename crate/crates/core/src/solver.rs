//! Weak-coupling steady state of the two TLS.
//!
//! Different splittings give a product of per-TLS golden-rule states. For
//! identical splittings the populations couple to the coherence c = ⟨2|ρ|3⟩
//! through a 6-real-dimensional stationarity system over
//! (p₁, p₂, p₃, p₄, Re c, Im c). Four independent routes solve it:
//! the closed form of the symmetric case, a rank-revealing kernel solve, the
//! spectral (λ₀ … λ₄) reduction to a scalar equation for c, and the
//! classical rate chain over {|1⟩, |ψ⁺⟩, |ψ⁻⟩, |4⟩}.

use nalgebra::{DMatrix, DVector, Matrix4, SMatrix, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EnvironmentConfig, XState};
use crate::rates::{golden_rule_rates, reduced_parameters, tls_rates, GoldenRuleRates, ReducedRates};
use crate::tolerance::{CLOSED_FORM_DEGENERACY, CROSS_PATH, EIGENVALUE_MATCH, EXACT, PHYSICALITY_SLACK, RANK};

pub type Matrix6 = SMatrix<f64, 6, 6>;

/// Clean a candidate solution into an [`XState`], rejecting it when it
/// violates positivity or normalization beyond [`PHYSICALITY_SLACK`].
pub(crate) fn physical_state(p: [f64; 4], c: Complex64) -> Result<XState> {
    if p.iter().any(|v| !v.is_finite()) || !c.re.is_finite() || !c.im.is_finite() {
        return Err(Error::NoPhysicalState("non-finite entry".into()));
    }
    if let Some(v) = p.iter().find(|v| **v < -PHYSICALITY_SLACK) {
        return Err(Error::NoPhysicalState(format!("population {v} < 0")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PHYSICALITY_SLACK {
        return Err(Error::NoPhysicalState(format!("trace {sum}")));
    }
    let mut q = p.map(|v| v.max(0.0));
    let norm: f64 = q.iter().sum();
    q.iter_mut().for_each(|v| *v /= norm);
    let bound = (q[1] * q[2]).sqrt();
    let mut c = c;
    if c.norm() > bound {
        if c.norm() > bound + PHYSICALITY_SLACK {
            return Err(Error::NoPhysicalState(format!("|c| = {} > sqrt(p2 p3) = {bound}", c.norm())));
        }
        c = if bound == 0.0 { Complex64::new(0.0, 0.0) } else { c * (bound / c.norm()) };
    }
    Ok(XState::from_parts(q, c))
}

/// Product state ρ₁ ⊗ ρ₂ for splittings that differ from each other.
///
/// A zero splitting gives the maximally mixed marginal I/2 (the analytic
/// limit of divergent Bose factors); Δ₁ = Δ₂ = 0 is accepted here and yields
/// the maximally mixed two-TLS state.
pub fn steady_product(config: &EnvironmentConfig) -> Result<XState> {
    let s = config.splittings;
    if s.is_identical() && s.delta1 > 0.0 {
        return Err(Error::IdenticalSplittings);
    }
    let marginal = |tls: usize, delta: f64| -> Result<[f64; 2]> {
        if delta == 0.0 {
            return Ok([0.5, 0.5]);
        }
        let (down, up) = tls_rates(config, tls)?;
        let total = down + up;
        if !(total > 0.0) {
            return Err(Error::ZeroTotalRate(tls));
        }
        Ok([down / total, up / total])
    };
    let m1 = marginal(1, s.delta1)?;
    let m2 = marginal(2, s.delta2)?;
    physical_state(XState::product(m1, m2).p(), Complex64::new(0.0, 0.0))
}

/// Uncorrelated state built from golden-rule rates alone (the large
/// detuning limit of the identical-splitting problem).
pub fn product_from_rates(gr: &GoldenRuleRates) -> Result<XState> {
    let t1 = gr.gamma_plus_1 + gr.gamma_minus_1;
    let t2 = gr.gamma_plus_2 + gr.gamma_minus_2;
    if !(t1 > 0.0) {
        return Err(Error::ZeroTotalRate(1));
    }
    if !(t2 > 0.0) {
        return Err(Error::ZeroTotalRate(2));
    }
    let x = XState::product([gr.gamma_plus_1 / t1, gr.gamma_minus_1 / t1], [gr.gamma_plus_2 / t2, gr.gamma_minus_2 / t2]);
    physical_state(x.p(), Complex64::new(0.0, 0.0))
}

/// Closed-form steady state of identical, symmetrically coupled TLS with
/// real coefficients.
///
/// Written in terms of β and β₁ = βη′ so that β = 0 needs no division.
pub fn steady_identical_closed(r: &ReducedRates) -> Result<XState> {
    let ReducedRates { gamma: g, eta, xi, beta, .. } = *r;
    let beta_one = r.beta_one();
    let z = 1.0 + eta;
    let d = beta_one - beta * eta;
    let denom = 4.0 * d * d + g * g * z.powi(3) * (z + xi)
        - (beta + beta_one) * (beta * (1.0 + 3.0 * eta * eta) + beta_one * (3.0 + eta * eta));
    if denom.abs() < CLOSED_FORM_DEGENERACY * g * g {
        return Err(Error::NonUniqueSteadyState);
    }
    // c = γ q and cβ/γ = β q
    let q = d * (1.0 - eta * eta) / denom;
    let c = g * q;
    let z2 = z * z;
    let along = beta * eta + beta_one;
    let across = beta_one - beta;
    let p1 = (1.0 + q * (along - 2.0 * across)) / z2;
    let p2 = (eta + q * (across * (1.0 - eta) - along)) / z2;
    let p4 = (eta * eta + q * (along + 2.0 * eta * across)) / z2;
    physical_state([p1, p2, p2, p4], Complex64::new(c, 0.0))
}

/// The identical-splitting stationarity system in real form.
///
/// Rows 0–3 are the population equations in the printed layout of the
/// golden-rule matrix (row k is the negated rate equation of p₅₋ₖ) with the
/// coupling −β*c − βc* on row k; rows 4 and 5 are the real and imaginary
/// parts of −βᵀp + (α + iδ)c = 0. Columns are (p₁, p₂, p₃, p₄, Re c, Im c).
#[derive(Debug, Clone, PartialEq)]
pub struct StationaritySystem {
    pub matrix: Matrix6,
    /// Real inputs, δ = 0 and symmetric rates: Im c = 0 can be imposed.
    pub real_symmetric: bool,
}

/// The 4×4 golden-rule matrix as printed: row k is −dp₅₋ₖ/dt.
pub fn population_block(gr: &GoldenRuleRates) -> Matrix4<f64> {
    let (d1, u1, d2, u2) = (gr.gamma_plus_1, gr.gamma_minus_1, gr.gamma_plus_2, gr.gamma_minus_2);
    Matrix4::new(
        0.0, -u1, -u2, d1 + d2, //
        -u1, 0.0, d1 + u2, -d2, //
        -u2, u1 + d2, 0.0, -d1, //
        u1 + u2, -d2, -d1, 0.0,
    )
}

/// β = (β₁, β₂, β₃, β₄) with β₂,₃ = −(β₁ + β₄)/2 ± iβ̃.
pub fn beta_vector(gr: &GoldenRuleRates) -> [Complex64; 4] {
    let mid = -0.5 * (gr.beta_one + gr.beta_four);
    let bt = Complex64::new(0.0, gr.beta_tilde);
    [gr.beta_one, mid + bt, mid - bt, gr.beta_four]
}

pub fn build_stationarity_system(gr: &GoldenRuleRates, detuning: f64) -> StationaritySystem {
    let block = population_block(gr);
    let b = beta_vector(gr);
    let a = gr.alpha + Complex64::new(0.0, detuning);
    let mut m = Matrix6::zeros();
    for k in 0..4 {
        for l in 0..4 {
            m[(k, l)] = block[(k, l)];
        }
        // −β*c − βc* = −2 Re(β* c)
        m[(k, 4)] = -2.0 * b[k].re;
        m[(k, 5)] = -2.0 * b[k].im;
        m[(4, k)] = -b[k].re;
        m[(5, k)] = -b[k].im;
    }
    m[(4, 4)] = a.re;
    m[(4, 5)] = -a.im;
    m[(5, 4)] = a.im;
    m[(5, 5)] = a.re;
    StationaritySystem { matrix: m, real_symmetric: detuning == 0.0 && gr.is_real() && gr.is_symmetric() }
}

impl StationaritySystem {
    pub fn population_block(&self) -> Matrix4<f64> {
        self.matrix.fixed_view::<4, 4>(0, 0).into_owned()
    }

    /// Apply the system to a state; zero for a steady state.
    pub fn residual(&self, x: &XState) -> f64 {
        let p = x.p();
        let v = SMatrix::<f64, 6, 1>::from_column_slice(&[p[0], p[1], p[2], p[3], x.c().re, x.c().im]);
        (self.matrix * v).amax()
    }
}

/// Solve the stationarity rows with the trace condition in place of the
/// first population row (the population rows sum to zero, so nothing is
/// lost). Rank is judged from the singular values of the equilibrated
/// matrix; the solve itself uses fully pivoted LU.
fn kernel_solve(rows: DMatrix<f64>) -> Result<DVector<f64>> {
    let n = rows.ncols();
    let mut a = rows;
    for j in 0..n {
        a[(0, j)] = if j < 4 { 1.0 } else { 0.0 };
    }
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[0] = 1.0;

    for i in 0..n {
        let s = a.row(i).amax();
        if s > 0.0 {
            a.row_mut(i).scale_mut(1.0 / s);
            rhs[i] /= s;
        }
    }
    let mut col_scale = vec![1.0; n];
    for (j, cs) in col_scale.iter_mut().enumerate() {
        let s = a.column(j).amax();
        if s > 0.0 {
            a.column_mut(j).scale_mut(1.0 / s);
            *cs = 1.0 / s;
        }
    }

    let sv = a.clone().singular_values();
    let smax = sv.max();
    if sv.iter().filter(|s| **s > RANK * smax).count() < n {
        return Err(Error::NonUniqueSteadyState);
    }
    let y = a.full_piv_lu().solve(&rhs).ok_or(Error::NonUniqueSteadyState)?;
    Ok(DVector::from_iterator(n, y.iter().zip(col_scale.iter()).map(|(v, s)| v * s)))
}

/// Solve the stationarity system through its numerical kernel.
///
/// When the system is real and symmetric, Im c is pinned to zero and the
/// imaginary coherence row dropped before solving.
pub fn steady_identical_linear(sys: &StationaritySystem) -> Result<XState> {
    solve_system(sys, sys.real_symmetric)
}

/// Kernel solve with explicit control over Im c pinning.
pub fn solve_system(sys: &StationaritySystem, pin_imaginary: bool) -> Result<XState> {
    let n = if pin_imaginary { 5 } else { 6 };
    let rows = DMatrix::from_fn(n, n, |i, j| sys.matrix[(i, j)]);
    let x = kernel_solve(rows)?;
    let c = Complex64::new(x[4], if pin_imaginary { 0.0 } else { x[5] });
    physical_state([x[0], x[1], x[2], x[3]], c)
}

/// Population equations in natural order (row k ↔ p_k): the negated rate
/// generator, with eigenvalues 0, λ₁, λ₂, λ₁ + λ₂.
pub fn natural_population_block(gr: &GoldenRuleRates) -> Matrix4<f64> {
    let printed = population_block(gr);
    Matrix4::from_fn(|i, j| printed[(3 - i, j)])
}

/// Coherence from the scalar equation obtained by eliminating p with the
/// spectral decomposition of the population block,
///
/// α c − βᵀψ₀ − Σₙ λₙ⁻¹ βᵀψₙφₙᵀ(v*c + v c*) = 0,
///
/// where v is the β coupling of the population equations in natural order.
/// Σₙ λₙ⁻¹ψₙφₙᵀ is evaluated as the group inverse (M + ψ₀1ᵀ)⁻¹ − ψ₀1ᵀ.
pub fn solve_spectral_coherence(gr: &GoldenRuleRates) -> Result<Complex64> {
    if !gr.is_identical() {
        return Err(Error::DifferentSplittings);
    }
    let m = natural_population_block(gr);
    let lambda1 = gr.gamma_minus_1 + gr.gamma_plus_1;
    let lambda2 = gr.gamma_minus_2 + gr.gamma_plus_2;
    check_eigenvalues(&m, [0.0, lambda1, lambda2, lambda1 + lambda2])?;

    // ψ₀: right null vector with unit element sum
    let svd = m.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::EigenstructureMismatch("no SVD".into()))?;
    let imin = svd.singular_values.imin();
    let null = v_t.row(imin).transpose();
    let sum = null.sum();
    if sum.abs() < EXACT {
        return Err(Error::NonUniqueSteadyState);
    }
    let psi0: Vector4<f64> = null / sum;
    let p0 = psi0 * Vector4::repeat(1.0).transpose();
    let group_inverse = (m + p0).try_inverse().ok_or(Error::NonUniqueSteadyState)? - p0;

    let b = beta_vector(gr);
    // natural row k carries printed row 3 − k, hence β reversed
    let v_re = Vector4::from_fn(|k, _| 2.0 * b[3 - k].re);
    let v_im = Vector4::from_fn(|k, _| 2.0 * b[3 - k].im);
    let u_re = group_inverse * v_re;
    let u_im = group_inverse * v_im;
    let dot = |u: &Vector4<f64>| -> Complex64 { (0..4).map(|k| b[k] * u[k]).sum() };
    let source = dot(&psi0);
    let (kx, ky) = (dot(&u_re), dot(&u_im));

    // Re/Im of (α − kx) x + (iα − ky) y = source
    let ax = gr.alpha - kx;
    let ay = Complex64::new(0.0, 1.0) * gr.alpha - ky;
    let det = ax.re * ay.im - ay.re * ax.im;
    let scale = gr.alpha.norm().max(EXACT);
    if det.abs() < EXACT * scale * scale {
        return Err(Error::NonUniqueSteadyState);
    }
    let x = (source.re * ay.im - ay.re * source.im) / det;
    let y = (ax.re * source.im - source.re * ax.im) / det;
    Ok(Complex64::new(x, y))
}

fn check_eigenvalues(m: &Matrix4<f64>, expected: [f64; 4]) -> Result<()> {
    let eig = m.complex_eigenvalues();
    let scale = expected.iter().fold(0.0_f64, |a, b| a.max(b.abs())).max(f64::MIN_POSITIVE);
    let mut got: Vec<Complex64> = eig.iter().map(|z| Complex64::new(z.re, z.im)).collect();
    got.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut want = expected.to_vec();
    want.sort_by(f64::total_cmp);
    for (g, w) in got.iter().zip(&want) {
        if (g.re - w).abs() > EIGENVALUE_MATCH * scale || g.im.abs() > EIGENVALUE_MATCH * scale {
            return Err(Error::EigenstructureMismatch(format!("computed {got:?}, expected {want:?}")));
        }
    }
    Ok(())
}

/// Steady state of the classical four-state chain over
/// {|1⟩, |ψ⁺⟩, |ψ⁻⟩, |4⟩}, exact for symmetric real rates with ξ = 0.
///
/// The stationary distribution comes from the matrix-tree theorem on the
/// cycle |1⟩ – |ψ⁺⟩ – |4⟩ – |ψ⁻⟩ – |1⟩: each weight is a sum of products of
/// rates, hence nonnegative and free of cancellation.
pub fn bell_chain_steady(gr: &GoldenRuleRates) -> Result<XState> {
    if !gr.is_identical() {
        return Err(Error::DifferentSplittings);
    }
    if !gr.is_real() {
        return Err(Error::InapplicableRegime("complex coefficients".into()));
    }
    if !gr.is_symmetric() {
        return Err(Error::InapplicableRegime("asymmetric rates couple the Bell coherence".into()));
    }
    if gr.xi().abs() > CROSS_PATH {
        return Err(Error::InapplicableRegime(format!("xi = {} != 0", gr.xi())));
    }
    let (up_plus, up_minus) = gr.bell_up_rates();
    let (down_plus, down_minus) = gr.bell_down_rates();

    // cycle order: 0 = |1⟩, 1 = |ψ⁺⟩, 2 = |4⟩, 3 = |ψ⁻⟩
    // forward[i] = rate(i → i+1), backward[i] = rate(i+1 → i)
    let forward = [up_plus, up_plus, down_minus, down_minus];
    let backward = [down_plus, down_plus, up_minus, up_minus];
    let rate = |from: usize, to: usize| -> f64 {
        if (from + 1) % 4 == to {
            forward[from]
        } else {
            backward[to]
        }
    };
    let mut weight = [0.0; 4];
    for (root, w) in weight.iter_mut().enumerate() {
        for cut in 0..4 {
            // spanning path obtained by removing edge (cut, cut+1)
            let path: Vec<usize> = (1..=4).map(|s| (cut + s) % 4).collect();
            let pos = path.iter().position(|&n| n == root).unwrap_or(0);
            let mut prod = 1.0;
            for i in 0..4 {
                if i < pos {
                    prod *= rate(path[i], path[i + 1]);
                } else if i > pos {
                    prod *= rate(path[i], path[i - 1]);
                }
            }
            *w += prod;
        }
    }
    let total: f64 = weight.iter().sum();
    if !(total > 0.0) {
        return Err(Error::NonUniqueSteadyState);
    }
    let [ground, plus, top, minus] = weight.map(|w| w / total);
    let mid = 0.5 * (plus + minus);
    physical_state([ground, mid, mid, top], Complex64::new(0.5 * (plus - minus), 0.0))
}

/// Steady state with the coherence decay α replaced by α + iδ.
pub fn steady_detuned(gr: &GoldenRuleRates, delta_split: f64) -> Result<XState> {
    if !gr.is_identical() {
        return Err(Error::DifferentSplittings);
    }
    if !delta_split.is_finite() {
        return Err(Error::InvalidArgument(format!("detuning {delta_split}")));
    }
    steady_identical_linear(&build_stationarity_system(gr, delta_split))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Product,
    IdenticalClosed,
    IdenticalLinear,
    Detuned,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Product => "product",
            Route::IdenticalClosed => "identical_closed",
            Route::IdenticalLinear => "identical_linear",
            Route::Detuned => "detuned",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub state: XState,
    pub route: Route,
}

/// Pick the appropriate solver for a validated config.
pub fn steady_state(config: &EnvironmentConfig) -> Result<SteadyState> {
    let s = config.splittings;
    if !s.is_identical() || s.delta1 == 0.0 {
        return Ok(SteadyState { state: steady_product(config)?, route: Route::Product });
    }
    let gr = golden_rule_rates(config)?;
    if config.detuning != 0.0 {
        return Ok(SteadyState { state: steady_detuned(&gr, config.detuning)?, route: Route::Detuned });
    }
    if gr.is_symmetric() && gr.is_real() {
        if let Ok(r) = reduced_parameters(&gr) {
            return Ok(SteadyState { state: steady_identical_closed(&r)?, route: Route::IdenticalClosed });
        }
    }
    let sys = build_stationarity_system(&gr, 0.0);
    Ok(SteadyState { state: steady_identical_linear(&sys)?, route: Route::IdenticalLinear })
}
