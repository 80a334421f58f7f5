//! Clausen function `Cl(θ) = Σ sin(nθ)/n²`.

use std::f64::consts::PI;

use super::gamma::zeta_even;
use super::precision::Precision;
use crate::error::{Result, WalkError};

/// Uses `Cl(θ) = θ - θ log|θ| + Σ_k ζ(2k)/(k(2k+1)) · θ^{2k+1}/(2π)^{2k}` on `|θ| ≤ π`,
/// after reduction mod 2π. Oddness is exact: the sign is applied last.
pub fn clausen(theta: f64, prec: &Precision) -> Result<f64> {
    if !theta.is_finite() {
        return Err(WalkError::Domain("clausen needs a finite angle".into()));
    }
    let sign = if theta < 0.0 { -1.0 } else { 1.0 };
    let t = theta.abs();
    let two_pi = 2.0 * PI;
    let mut r = t - two_pi * (t / two_pi).round();
    let mut sgn = sign;
    if r < 0.0 {
        r = -r;
        sgn = -sgn;
    }
    if r == 0.0 || r == PI {
        return Ok(0.0);
    }
    let q = (r / two_pi) * (r / two_pi);
    let mut p = r;
    let mut s = r - r * r.ln();
    let tol = prec.effective_tol();
    for k in 1..200u32 {
        p *= q;
        let kf = k as f64;
        let term = zeta_even(k) / (kf * (2.0 * kf + 1.0)) * p;
        s += term;
        if term.abs() < 0.1 * tol * s.abs() {
            return Ok(sgn * s);
        }
    }
    Err(WalkError::NonConvergence { what: "clausen", terms: 200 })
}
