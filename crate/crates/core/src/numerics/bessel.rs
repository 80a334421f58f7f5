//! Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series below the crossover, Hankel asymptotics above. Between 8 and
//! the crossover the series is summed in double-double because its terms grow
//! to about `e^x / x` before cancelling.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::dd::DD;
use super::precision::Precision;
use super::sum::CompensatedSum;
use crate::error::{domain, Result, WalkError};

pub const CROSSOVER: f64 = 18.0;

/// Series for `J_ν(x)` with the terms summed in f64 (compensated).
fn series_f64(nu: u8, x: f64, tol: f64, max_terms: usize) -> Result<f64> {
    let h = 0.5 * x;
    let u = -h * h;
    let mut term = if nu == 0 { 1.0 } else { h };
    let mut s = CompensatedSum::new();
    s.add(term);
    let mut small = 0;
    for k in 1..max_terms {
        let kf = k as f64;
        term *= u / (kf * (kf + nu as f64));
        s.add(term);
        if term.abs() <= tol * s.value().abs() || term == 0.0 {
            small += 1;
            if small >= 3 {
                return Ok(s.value());
            }
        } else {
            small = 0;
        }
    }
    Err(WalkError::NonConvergence { what: "bessel_j series", terms: max_terms })
}

fn series_dd(nu: u8, x: DD, tol: f64, max_terms: usize) -> Result<DD> {
    let h = x.mul_f64(0.5);
    let u = -(h * h);
    let mut term = if nu == 0 { DD::ONE } else { h };
    let mut s = term;
    let mut small = 0;
    for k in 1..max_terms {
        let kf = k as f64;
        term = term * u / DD::from_f64(kf * (kf + nu as f64));
        s += term;
        if term.hi.abs() <= tol * s.hi.abs() || term.hi == 0.0 {
            small += 1;
            if small >= 3 {
                return Ok(s);
            }
        } else {
            small = 0;
        }
    }
    Err(WalkError::NonConvergence { what: "bessel_j series", terms: max_terms })
}

/// Hankel coefficients `a_k(ν) = ∏_{j=1}^k (4ν² - (2j-1)²) / (k! 8^k)`; returns
/// `(P, Q, error)` with `J_ν = √(2/πx)(P cos χ - Q sin χ)`.
fn hankel_pq(nu: u8, x: f64) -> (f64, f64, f64) {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    let mut err = 0.0;
    for k in 1..200 {
        let j = (2 * k - 1) as f64;
        a *= (mu - j * j) / (k as f64 * 8.0 * x);
        if a.abs() >= last {
            err = last;
            break;
        }
        last = a.abs();
        // k even -> P, odd -> Q, with alternating signs
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-18 {
            err = a.abs();
            break;
        }
    }
    (p, q, err)
}

fn hankel_f64(nu: u8, x: f64) -> (f64, f64) {
    let (p, q, err) = hankel_pq(nu, x);
    let (s, c) = x.sin_cos();
    // χ = x - νπ/2 - π/4
    let (cchi, schi) = if nu == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * cchi - q * schi), amp * err)
}

fn hankel_dd(nu: u8, x: f64) -> (DD, f64) {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let xd = DD::from_f64(x);
    let mut p = DD::ONE;
    let mut q = DD::ZERO;
    let mut a = DD::ONE;
    let mut last = f64::INFINITY;
    let mut err = 0.0;
    for k in 1..400 {
        let j = (2 * k - 1) as f64;
        a = a.mul_f64(mu - j * j) / xd.mul_f64(8.0 * k as f64);
        if a.hi.abs() >= last {
            err = last;
            break;
        }
        last = a.hi.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.hi.abs() < 1e-33 {
            err = a.hi.abs();
            break;
        }
    }
    let (s, c) = xd.sin_cos();
    let r = DD::from_f64(0.5).sqrt();
    let (cchi, schi) = if nu == 0 {
        ((c + s) * r, (s - c) * r)
    } else {
        ((s - c) * r, -(s + c) * r)
    };
    let amp = (DD::from_f64(2.0) / (DD::PI * xd)).sqrt();
    (amp * (p * cchi - q * schi), amp.to_f64() * err)
}

/// Fast `J_0(x)` at default precision.
pub fn j0(x: f64) -> f64 {
    bessel_j_unchecked(0, x)
}

/// Fast `J_1(x)` at default precision.
pub fn j1(x: f64) -> f64 {
    bessel_j_unchecked(1, x)
}

fn bessel_j_unchecked(nu: u8, x: f64) -> f64 {
    let ax = x.abs();
    let sign = if nu == 1 && x < 0.0 { -1.0 } else { 1.0 };
    let v = if ax < 8.0 {
        series_f64(nu, ax, 1e-17, 400).unwrap_or(f64::NAN)
    } else if ax < CROSSOVER {
        series_dd(nu, DD::from_f64(ax), 1e-17, 400)
            .map(DD::to_f64)
            .unwrap_or(f64::NAN)
    } else {
        hankel_f64(nu, ax).0
    };
    sign * v
}

/// `J_ν(x)` for `ν ∈ {0, 1}` with the accuracy requested in `prec`.
pub fn bessel_j(order: u8, x: f64, prec: &Precision) -> Result<f64> {
    bessel_j_dd(order, x, prec).map(DD::to_f64)
}

/// Same as [`bessel_j`] but returns the double-double value.
pub fn bessel_j_dd(order: u8, x: f64, prec: &Precision) -> Result<DD> {
    if order > 1 {
        return Err(domain(format!("bessel order {order} not supported")));
    }
    if !x.is_finite() {
        return Err(domain("bessel_j needs a finite argument"));
    }
    let ax = x.abs();
    let sign = if order == 1 && x < 0.0 { -1.0 } else { 1.0 };
    let tol = prec.effective_tol();
    let v = if prec.is_double_double() {
        // the asymptotic series bottoms out near e^{-2x}; move the crossover
        // up when more than that is requested
        let cross = CROSSOVER.max(-0.5 * tol.ln() + 2.0);
        if ax < cross {
            series_dd(order, DD::from_f64(ax), 0.1 * tol, prec.max_terms)?
        } else {
            let (v, err) = hankel_dd(order, ax);
            check_envelope(err, ax, tol)?;
            v
        }
    } else if ax < 8.0 {
        DD::from_f64(series_f64(order, ax, 0.1 * tol, prec.max_terms)?)
    } else if ax < CROSSOVER {
        series_dd(order, DD::from_f64(ax), 0.1 * tol, prec.max_terms)?
    } else {
        let (v, err) = hankel_f64(order, ax);
        check_envelope(err, ax, tol)?;
        DD::from_f64(v)
    };
    Ok(v.mul_f64(sign))
}

// relative error is measured against the envelope √(2/πx); near zeros the
// function value itself is not a meaningful scale
fn check_envelope(err: f64, x: f64, tol: f64) -> Result<()> {
    let env = (2.0 / (PI * x)).sqrt();
    if err > tol * env {
        return Err(WalkError::NonConvergence { what: "bessel_j asymptotic", terms: 400 });
    }
    Ok(())
}

/// Both `J_0(x)` and `J_1(x)`.
pub fn j0_j1(x: f64) -> (f64, f64) {
    (j0(x), j1(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0, &p()).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0, &p()).unwrap(), 0.0);
        assert!(bessel_j(2, 1.0, &p()).is_err());
    }

    #[test]
    fn first_zero_by_bisection() {
        let (mut a, mut b) = (2.0, 3.0);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if series_f64(0, a, 1e-17, 200).unwrap() * series_f64(0, m, 1e-17, 200).unwrap() <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let z = 0.5 * (a + b);
        assert!((z - 2.404_825_557_695_773).abs() < 1e-14);
        assert!(bessel_j(0, z, &p()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn known_values() {
        // J0(1), J1(1), J0(10), J1(30)
        assert!((j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((j0(10.0) - (-0.245_935_764_451_348_3)).abs() < 1e-15);
        assert!((j1(30.0) - (-0.118_751_062_616_622_94)).abs() < 1e-15);
    }

    #[test]
    fn branches_agree_at_crossover() {
        for nu in 0..2u8 {
            for &x in &[CROSSOVER - 1e-9, CROSSOVER, CROSSOVER + 0.5, 20.0] {
                let s = series_dd(nu, DD::from_f64(x), 1e-32, 500).unwrap().to_f64();
                let h = hankel_f64(nu, x).0;
                assert!((s - h).abs() < 1e-14, "nu={nu} x={x} {s} {h}");
            }
        }
    }

    #[test]
    fn derivative_of_j0_is_minus_j1() {
        let h = 1e-5;
        let mut x = 0.5;
        while x <= 20.0 {
            let d = (j0(x + h) - j0(x - h)) / (2.0 * h);
            assert!((d + j1(x)).abs() < 1e-8, "x={x}");
            x += 0.5;
        }
    }

    #[test]
    fn double_double_agrees_with_f64() {
        let dd = Precision::double_double();
        for &x in &[0.3, 1.7, 4.2] {
            let a = bessel_j_dd(0, x, &dd).unwrap();
            let b = series_dd(0, DD::from_f64(x), 1e-33, 500).unwrap();
            assert!((a - b).abs().to_f64() < 1e-30);
            assert!((a.to_f64() - j0(x)).abs() < 2e-16);
        }
    }

    #[test]
    fn double_double_recurrence_digits() {
        // J_2 from the recurrence must match its own series to ≥ 25 digits:
        // J_2(x) = 2 J_1(x)/x - J_0(x)
        let dd = Precision::double_double();
        let x = 2.5;
        let xd = DD::from_f64(x);
        let j2 = bessel_j_dd(1, x, &dd).unwrap().mul_f64(2.0) / xd - bessel_j_dd(0, x, &dd).unwrap();
        let h = xd.mul_f64(0.5);
        let u = -(h * h);
        let mut term = h * h.mul_f64(0.5);
        let mut s = term;
        for k in 1..60 {
            term = term * u / DD::from_f64((k * (k + 2)) as f64);
            s += term;
        }
        assert!(((j2 - s) / s).abs().to_f64() < 1e-25);
    }

    #[test]
    fn odd_symmetry() {
        assert_eq!(j1(-3.0), -j1(3.0));
        assert_eq!(j0(-3.0), j0(3.0));
    }
}
