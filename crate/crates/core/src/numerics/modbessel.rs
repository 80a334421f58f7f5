//! Modified Bessel functions `I_0` and `K_0`, plain and exponentially scaled.
//!
//! `K_0` uses the logarithmic series for `x ≤ 1`, the trapezoidal rule on
//! `e^x K_0(x) = ∫_0^∞ exp(-x(cosh u - 1)) du` for `1 < x ≤ 25` (the integrand
//! is analytic in a strip, so the rule converges geometrically), and the
//! asymptotic series above.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma::EULER_GAMMA;
use super::precision::Precision;
use super::sum::CompensatedSum;
use crate::error::{domain, Result};

const ASYMPTOTIC_FROM: f64 = 25.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModifiedKind {
    I0,
    K0,
}

/// `I_0(x)` or `K_0(x)`.
pub fn modified_bessel(kind: ModifiedKind, x: f64, _prec: &Precision) -> Result<f64> {
    match kind {
        ModifiedKind::I0 => {
            if !(x >= 0.0) || !x.is_finite() {
                return Err(domain(format!("I0 needs x >= 0, got {x}")));
            }
            Ok(i0(x))
        }
        ModifiedKind::K0 => {
            if !(x > 0.0) || x.is_nan() {
                return Err(domain(format!("K0 needs x > 0, got {x}")));
            }
            Ok(k0(x))
        }
    }
}

fn i0_series(x: f64) -> f64 {
    let u = 0.25 * x * x;
    let mut term = 1.0;
    let mut s = CompensatedSum::new();
    s.add(1.0);
    for k in 1..500 {
        let kf = k as f64;
        term *= u / (kf * kf);
        s.add(term);
        if term < 1e-18 * s.value() {
            break;
        }
    }
    s.value()
}

/// `Σ a_k / x^k` with `a_k = ((2k-1)!!)² / (k! 8^k)`, optionally alternating.
fn asym_sum(x: f64, alternating: bool) -> f64 {
    let mut a = 1.0;
    let mut s = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let j = (2 * k - 1) as f64;
        a *= j * j / (8.0 * k as f64 * x);
        if a >= last {
            break;
        }
        last = a;
        if alternating && k % 2 == 1 {
            s -= a;
        } else {
            s += a;
        }
        if a < 1e-18 * s {
            break;
        }
    }
    s
}

/// `e^{-x} I_0(x)` for `x ≥ 0`.
pub fn i0e(x: f64) -> f64 {
    if x < ASYMPTOTIC_FROM {
        i0_series(x) * (-x).exp()
    } else {
        asym_sum(x, false) / (2.0 * PI * x).sqrt()
    }
}

pub fn i0(x: f64) -> f64 {
    if x < ASYMPTOTIC_FROM {
        i0_series(x)
    } else {
        i0e(x) * x.exp()
    }
}

fn k0_series(x: f64) -> f64 {
    let u = 0.25 * x * x;
    let c = (0.5 * x).ln() + EULER_GAMMA;
    let mut term = 1.0;
    let mut h = 0.0;
    let mut s = CompensatedSum::new();
    s.add(-c);
    for k in 1..200 {
        let kf = k as f64;
        term *= u / (kf * kf);
        h += 1.0 / kf;
        s.add(term * (h - c));
        if term * (h + c.abs()) < 1e-18 * s.value().abs() {
            break;
        }
    }
    s.value()
}

fn k0e_trapezoid(x: f64) -> f64 {
    // strip half-width 1: error ≈ exp(x(1 - cos 1) - 2π/h)
    let h = 2.0 * PI / (0.46 * x + 44.0);
    let mut s = CompensatedSum::new();
    s.add(0.5);
    let mut k = 1;
    loop {
        let u = k as f64 * h;
        let e = -x * (u.cosh() - 1.0);
        if e < -45.0 {
            break;
        }
        s.add(e.exp());
        k += 1;
    }
    s.value() * h
}

/// `e^x K_0(x)` for `x > 0`.
pub fn k0e(x: f64) -> f64 {
    if x <= 1.0 {
        k0_series(x) * x.exp()
    } else if x <= ASYMPTOTIC_FROM {
        k0e_trapezoid(x)
    } else {
        (PI / (2.0 * x)).sqrt() * asym_sum(x, true)
    }
}

pub fn k0(x: f64) -> f64 {
    if x <= 1.0 {
        k0_series(x)
    } else {
        k0e(x) * (-x).exp()
    }
}

/// Coefficients of `I_0(t) = Σ c_k t^{2k}` and
/// `K_0(t) = log t · Σ a_k t^{2k} + Σ b_k t^{2k}`, returned as `(c, a, b)`.
pub fn small_t_coefficients(terms: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut c = Vec::with_capacity(terms);
    let mut a = Vec::with_capacity(terms);
    let mut b = Vec::with_capacity(terms);
    let base = std::f64::consts::LN_2 - EULER_GAMMA;
    let mut ck = 1.0;
    let mut h = 0.0;
    for k in 0..terms {
        if k > 0 {
            let kf = k as f64;
            ck /= 4.0 * kf * kf;
            h += 1.0 / kf;
        }
        c.push(ck);
        a.push(-ck);
        b.push(ck * (base + h));
    }
    (c, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::adaptive_gk;

    #[test]
    fn trivial_and_domain() {
        let p = Precision::default();
        assert_eq!(modified_bessel(ModifiedKind::I0, 0.0, &p).unwrap(), 1.0);
        assert!(modified_bessel(ModifiedKind::K0, 0.0, &p).is_err());
        assert!(modified_bessel(ModifiedKind::K0, -1.0, &p).is_err());
    }

    #[test]
    fn i0_at_one_two_ways() {
        // forward naive summation vs compensated
        let mut naive = 0.0;
        let mut term = 1.0;
        naive += term;
        for k in 1..40 {
            term *= 0.25 / (k as f64 * k as f64);
            naive += term;
        }
        assert!((naive - i0(1.0)).abs() < 1e-14);
        assert!((i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
    }

    #[test]
    fn k0_known_values() {
        let cases = [
            (0.1, 2.427_069_024_702_016_6),
            (1.0, 0.421_024_438_240_708_3),
            (2.0, 0.113_893_872_749_533_4),
            (10.0, 1.778_006_231_616_765_2e-5),
            (30.0, 2.132_477_496_463_056_4e-14),
        ];
        for (x, v) in cases {
            assert!((k0(x) / v - 1.0).abs() < 3e-15, "x={x} got {}", k0(x));
        }
    }

    #[test]
    fn branches_continuous() {
        let a = k0_series(1.0) * 1f64.exp();
        assert!((a / k0e_trapezoid(1.0) - 1.0).abs() < 1e-14);
        let b = (PI / 50.0).sqrt() * asym_sum(25.0, true);
        assert!((b / k0e_trapezoid(25.0) - 1.0).abs() < 1e-14);
        let a = i0_series(25.0) * (-25.0f64).exp();
        let b = asym_sum(25.0, false) / (2.0 * PI * 25.0).sqrt();
        assert!((a / b - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wronskian() {
        // I0 K1 + I1 K0 = 1/x, with I1 = I0', K1 = -K0' by differences
        for &x in &[0.5, 3.0, 12.0, 40.0] {
            let h = 1e-5 * x;
            let i1 = (i0e(x + h) * (x + h).exp() - i0e(x - h) * (x - h).exp()) / (2.0 * h);
            let k1 = -(k0e(x + h) * (-(x + h)).exp() - k0e(x - h) * (-(x - h)).exp()) / (2.0 * h);
            let w = i0(x) * k1 + i1 * k0(x);
            assert!((w * x - 1.0).abs() < 1e-7, "x={x}");
        }
    }

    #[test]
    fn nicholson_identity() {
        // I0(t) K0(t) = (2/π) ∫_0^{π/2} K0(2t sin a) da
        for &t in &[0.5, 1.0, 2.0] {
            let r = adaptive_gk(&|a: f64| k0(2.0 * t * a.sin()), 0.0, PI / 2.0, 1e-13, 40).unwrap();
            let lhs = i0(t) * k0(t);
            assert!((lhs - 2.0 / PI * r.value).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn small_t_expansion() {
        let (c, a, b) = small_t_coefficients(20);
        let t: f64 = 0.3;
        let mut iv = 0.0;
        let mut kv = 0.0;
        for k in 0..20 {
            let p = t.powi(2 * k as i32);
            iv += c[k] * p;
            kv += (a[k] * t.ln() + b[k]) * p;
        }
        assert!((iv - i0(t)).abs() < 1e-15);
        assert!((kv - k0(t)).abs() < 1e-15);
    }
}
