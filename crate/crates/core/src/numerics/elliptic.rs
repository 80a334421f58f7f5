//! Complete elliptic integrals (modulus convention) by the AGM.

use std::f64::consts::FRAC_PI_2;

use super::dd::DD;
use super::precision::Precision;
use super::real::Real;
use crate::error::{domain, Result, WalkError};

/// Arithmetic-geometric mean; also returns the sum `Σ 2^{n-1} c_n²` needed for `E`.
/// `tol` is the relative gap after which one more step is taken analytically;
/// convergence is quadratic, so ~sqrt of the working epsilon suffices.
fn agm_with_sum<T: Real>(a0: T, b0: T, c0: T, tol: f64) -> (T, T) {
    let mut a = a0;
    let mut b = b0;
    let half = T::from_f64(0.5);
    let mut pow = 0.5;
    let mut s = c0 * c0 * half;
    for _ in 0..64 {
        let c = (a - b) * half;
        let an = (a + b) * half;
        let bn = (a * b).sqrt();
        pow *= 2.0;
        s = s + T::from_f64(pow) * c * c;
        a = an;
        b = bn;
        if (a - b).abs().to_f64() <= tol * a.to_f64().abs() {
            let c = (a - b) * half;
            s = s + T::from_f64(2.0 * pow) * c * c;
            a = (a + b) * half;
            break;
        }
    }
    (a, s)
}

fn check_k(k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&k.abs()) || k.is_nan() {
        return Err(domain(format!("elliptic modulus must satisfy |k| <= 1, got {k}")));
    }
    Ok(())
}

/// `K(k) = ∫_0^{π/2} dθ / √(1 - k² sin²θ)`.
pub fn elliptic_k(k: f64, prec: &Precision) -> Result<f64> {
    check_k(k)?;
    if k.abs() == 1.0 {
        return Err(WalkError::SingularInput("elliptic_k at k = 1".into()));
    }
    if prec.is_double_double() {
        return elliptic_k_dd(DD::from_f64(k)).map(DD::to_f64);
    }
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    let (m, _) = agm_with_sum(1.0, kp, k, 1e-9);
    Ok(FRAC_PI_2 / m)
}

/// `E(k) = ∫_0^{π/2} √(1 - k² sin²θ) dθ`.
pub fn elliptic_e(k: f64, prec: &Precision) -> Result<f64> {
    check_k(k)?;
    if k.abs() == 1.0 {
        return Ok(1.0);
    }
    if prec.is_double_double() {
        return elliptic_e_dd(DD::from_f64(k)).map(DD::to_f64);
    }
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    let (m, s) = agm_with_sum(1.0, kp, k, 1e-9);
    Ok(FRAC_PI_2 / m * (1.0 - s))
}

pub fn elliptic_k_dd(k: DD) -> Result<DD> {
    check_k(k.to_f64())?;
    let kp = ((DD::ONE - k) * (DD::ONE + k)).sqrt();
    if kp.hi == 0.0 {
        return Err(WalkError::SingularInput("elliptic_k at k = 1".into()));
    }
    let (m, _) = agm_with_sum(DD::ONE, kp, k, 1e-17);
    Ok(DD::FRAC_PI_2 / m)
}

pub fn elliptic_e_dd(k: DD) -> Result<DD> {
    check_k(k.to_f64())?;
    let kp = ((DD::ONE - k) * (DD::ONE + k)).sqrt();
    if kp.hi == 0.0 {
        return Ok(DD::ONE);
    }
    let (m, s) = agm_with_sum(DD::ONE, kp, k, 1e-17);
    Ok(DD::FRAC_PI_2 / m * (DD::ONE - s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        let p = Precision::default();
        assert!((elliptic_k(0.0, &p).unwrap() - FRAC_PI_2).abs() < 1e-16);
        assert_eq!(elliptic_e(1.0, &p).unwrap(), 1.0);
        assert!((elliptic_e(0.0, &p).unwrap() - FRAC_PI_2).abs() < 1e-16);
        assert!(matches!(elliptic_k(1.0, &p), Err(WalkError::SingularInput(_))));
        assert!(elliptic_k(1.5, &p).is_err());
    }

    #[test]
    fn legendre_relation() {
        let p = Precision::default();
        for &k in &[std::f64::consts::FRAC_1_SQRT_2, 0.2, 0.9] {
            let kp = (1.0 - k * k).sqrt();
            let (kk, ee) = (elliptic_k(k, &p).unwrap(), elliptic_e(k, &p).unwrap());
            let (kkp, eep) = (elliptic_k(kp, &p).unwrap(), elliptic_e(kp, &p).unwrap());
            assert!((ee * kkp + eep * kk - kk * kkp - FRAC_PI_2).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn legendre_relation_double_double() {
        let k = DD::from_f64(0.5).sqrt();
        let kk = elliptic_k_dd(k).unwrap();
        let ee = elliptic_e_dd(k).unwrap();
        // k = k' here
        let r = ee * kk + ee * kk - kk * kk - DD::FRAC_PI_2;
        assert!(r.abs().to_f64() < 1e-29);
        let k = DD::from_ratio(3, 5);
        let kp = DD::from_ratio(4, 5);
        let r = elliptic_e_dd(k).unwrap() * elliptic_k_dd(kp).unwrap()
            + elliptic_e_dd(kp).unwrap() * elliptic_k_dd(k).unwrap()
            - elliptic_k_dd(k).unwrap() * elliptic_k_dd(kp).unwrap()
            - DD::FRAC_PI_2;
        assert!(r.abs().to_f64() < 1e-29);
    }
}
