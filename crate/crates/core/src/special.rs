//! Bessel function of the first kind, order zero.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_MAX: f64 = 8.0;
const RECURRENCE_MAX: f64 = 25.0;

/// J₀(x), absolute accuracy better than 1e-10 on [0, 100].
///
/// Power series for |x| ≤ 8, Miller backward recurrence with the
/// normalization 1 = J₀ + 2 Σ J₂ₖ for 8 < |x| ≤ 25, Hankel asymptotic
/// expansion beyond.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= SERIES_MAX {
        series(x)
    } else if x <= RECURRENCE_MAX {
        backward_recurrence(x)
    } else {
        hankel(x)
    }
}

fn series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn backward_recurrence(x: f64) -> f64 {
    // start well above x so that the seed error has decayed
    let start = (x + 30.0 + 10.0 * x.sqrt()) as usize;
    let start = start + start % 2;
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut even_sum = 0.0;
    let mut j0 = 0.0;
    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_x * cur - next; // J_{k-1}
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            even_sum *= 1e-250;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            even_sum += cur;
        }
        if k == 1 {
            j0 = cur;
        }
    }
    j0 / (j0 + 2.0 * even_sum)
}

fn hankel(x: f64) -> f64 {
    // a_k = Π_{j=1..k} (−(2j−1)²) / (k! 8^k)
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        let term = a / x.powi(k);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
        let j = (k + 1) as f64;
        a *= -(2.0 * j - 1.0).powi(2) / (j * 8.0);
    }
    let (s, c) = x.sin_cos();
    let cos_w = (c + s) * FRAC_1_SQRT_2;
    let sin_w = (s - c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_w - q * sin_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        // first zero of J0
        assert!(bessel_j0(2.404825557695773).abs() < 1e-14);
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j0(10.0) - (-0.245_935_764_451_348_3)).abs() < 1e-14);
        assert!((bessel_j0(30.0) - (-0.086_367_983_581_040_2)).abs() < 1e-14);
        assert_eq!(bessel_j0(-3.0), bessel_j0(3.0));
    }

    #[test]
    fn branches_agree_at_switch_points() {
        for x in [SERIES_MAX, RECURRENCE_MAX] {
            let lo = bessel_j0(x);
            let hi = bessel_j0(x + 1e-12);
            assert!((lo - hi).abs() < 1e-12, "x={x}: {lo} vs {hi}");
        }
        assert!((series(8.0) - backward_recurrence(8.0)).abs() < 1e-13);
        assert!((backward_recurrence(25.0) - hankel(25.0)).abs() < 1e-13);
    }
}
