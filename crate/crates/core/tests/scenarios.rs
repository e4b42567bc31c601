use ness_core::entanglement::{
    boundary_t2, limiting_state, negativity, scan_kplane, scan_negativity, two_bath_config, zero_t_criterion,
    DEFAULT_BRACKET,
};
use ness_core::model::validate_config;
use ness_core::solver::steady_state;
use ness_core::{EnvironmentConfig, Route, Units, XState};

fn max_dev(a: &XState, b: &XState) -> f64 {
    a.max_abs_diff(b)
}

#[test]
fn limiting_state_matches_deep_limit_solution() {
    let (r, kappa, theta) = (1e4, 0.95, 0.1);
    let cfg = two_bath_config(theta * r, 1.0, 0.0, 1e-3, r, kappa * r);
    let full = steady_state(&cfg).unwrap().state;
    let limit = limiting_state(kappa, theta).unwrap();
    assert!(max_dev(&full, &limit) < 1e-3, "{full:?} vs {limit:?}");
}

#[test]
fn negativity_curve_converges_with_j2() {
    let thetas = [0.05, 0.1, 0.3, 1.0, 3.0];
    let deviation = |r: f64| -> f64 {
        let template = two_bath_config(0.0, 1.0, 0.0, 0.1, r, r);
        let grid: Vec<f64> = thetas.iter().map(|t| t * r).collect();
        scan_negativity(&template, &grid)
            .unwrap()
            .iter()
            .map(|row| {
                let p = row.point.as_ref().unwrap();
                (p.negativity - p.negativity_large_j2.unwrap()).abs()
            })
            .fold(0.0, f64::max)
    };
    let (d3, d4, d5) = (deviation(1e3), deviation(1e4), deviation(1e5));
    assert!(d4 < d3 && d5 < d4, "{d3} {d4} {d5}");
    assert!(d4 < 1e-3);
}

#[test]
fn ohmic_boundary_stays_below_0_6() {
    let mut template = two_bath_config(0.0, 1.0, 0.0, 0.0, 50.0, 50.0);
    template.baths[0].xibar = 0.01;
    for t1 in [0.05, 0.1, 0.2, 0.4] {
        let b = boundary_t2(&template, t1, DEFAULT_BRACKET).unwrap();
        let t2 = b.t2.unwrap();
        assert!(t2 > 0.0 && t2 < 0.6, "t1={t1}: {t2}");
    }
    // the longitudinal term can only shrink the region
    let plain = two_bath_config(0.0, 1.0, 0.0, 0.0, 50.0, 50.0);
    let with = boundary_t2(&template, 0.3, DEFAULT_BRACKET).unwrap().t2.unwrap();
    let without = boundary_t2(&plain, 0.3, DEFAULT_BRACKET).unwrap().t2.unwrap();
    assert!(with <= without + 1e-6);
}

#[test]
fn kplane_region_grows_with_j2() {
    let k1: Vec<f64> = (0..=40).map(|i| -1.0 + 0.05 * f64::from(i)).collect();
    let k2: Vec<f64> = (1..=20).map(|i| 0.05 * f64::from(i)).collect();
    let small = scan_kplane(10.0, &k1, &k2).unwrap();
    let large = scan_kplane(100.0, &k1, &k2).unwrap();
    assert!(small.iter().any(|p| p.entangled));
    for (s, l) in small.iter().zip(&large) {
        assert_eq!((s.k1_over_j1, s.k2_over_j2), (l.k1_over_j1, l.k2_over_j2));
        assert!(!s.entangled || l.entangled, "{s:?}");
    }
    assert!(large.iter().filter(|p| p.entangled).count() > small.iter().filter(|p| p.entangled).count());
}

#[test]
fn k1_zero_thresholds() {
    // J₂/J₁ = 10, K₂ = 0.8 J₂ sits above the ratio threshold 1/(0.8√2 − 1) ≈ 7.61
    assert!(zero_t_criterion(1.0, 10.0, 0.0, 8.0).unwrap());
    assert!(!zero_t_criterion(1.0, 7.5, 0.0, 6.0).unwrap());
    assert!(zero_t_criterion(1.0, 7.7, 0.0, 0.8 * 7.7).unwrap());
}

#[test]
fn equilibrium_json_config_gives_gibbs() {
    let raw = EnvironmentConfig::from_json_str(
        r#"{"delta": 2.0, "baths": [
            {"temperature": 1.0, "j": 0.5, "k": 0.4},
            {"temperature": 1.0, "j": 3.0, "k": -2.0, "xibar": 0.1}
        ]}"#,
    )
    .unwrap();
    let cfg = validate_config(raw, Units::Normalized).unwrap();
    assert_eq!(cfg.splittings.delta1, 1.0);
    let s = steady_state(&cfg).unwrap();
    assert_eq!(s.route, Route::IdenticalClosed);
    assert!(s.state.trace_distance(&XState::gibbs(1.0, 1.0, 0.5)) < 1e-12);
    assert_eq!(negativity(&s.state).negativity, 0.0);
}
