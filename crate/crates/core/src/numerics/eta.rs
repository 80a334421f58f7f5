//! Dedekind eta function.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::precision::Precision;
use crate::error::{domain, Result, WalkError};

/// Pentagonal terms are included until `|q|^{n(3n+1)/2} < CUTOFF · |sum|`.
const CUTOFF: f64 = 1e-20;

fn check_tau(tau: Complex64) -> Result<Complex64> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(domain(format!("eta needs Im(tau) > 0, got {tau}")));
    }
    Ok(Complex64::new(0.0, 2.0 * PI) * tau)
}

/// `η(τ) = q^{1/24} Σ_{n∈ℤ} (-1)^n q^{n(3n+1)/2}`, `q = e^{2πiτ}`.
pub fn dedekind_eta(tau: Complex64, prec: &Precision) -> Result<Complex64> {
    let l = check_tau(tau)?; // log q
    let aq = (-2.0 * PI * tau.im).exp();
    let mut sum = Complex64::new(1.0, 0.0);
    for n in 1..prec.max_terms as i64 {
        let e1 = (n * (3 * n - 1) / 2) as f64; // from -n
        let e2 = (n * (3 * n + 1) / 2) as f64;
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * ((l * e1).exp() + (l * e2).exp());
        if aq.powf(e1) < CUTOFF * sum.norm() {
            return Ok((l / 24.0).exp() * sum);
        }
    }
    Err(WalkError::NonConvergence { what: "dedekind_eta", terms: prec.max_terms })
}

/// Product form `q^{1/24} ∏ (1 - q^n)`, used as an independent check.
pub fn dedekind_eta_product(tau: Complex64, prec: &Precision) -> Result<Complex64> {
    let l = check_tau(tau)?;
    let aq = (-2.0 * PI * tau.im).exp();
    let mut prod = Complex64::new(1.0, 0.0);
    for n in 1..prec.max_terms {
        prod *= Complex64::new(1.0, 0.0) - (l * n as f64).exp();
        if aq.powi(n as i32) < CUTOFF {
            return Ok((l / 24.0).exp() * prod);
        }
    }
    Err(WalkError::NonConvergence { what: "dedekind_eta_product", terms: prec.max_terms })
}

fn pentagonal_real(t: f64) -> f64 {
    // Σ (-1)^n e^{-t n(3n+1)/2}
    let mut s = 1.0;
    for n in 1..10_000i64 {
        let e1 = (n * (3 * n - 1) / 2) as f64;
        let e2 = (n * (3 * n + 1) / 2) as f64;
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        let a = (-t * e1).exp();
        s += sign * (a + (-t * e2).exp());
        if a < CUTOFF * s.abs() {
            break;
        }
    }
    s
}

/// `log η` at the real nome `e^{-t}`, i.e. `log(e^{-t/24} ∏(1 - e^{-nt}))`.
/// Small `t` goes through `η(e^{-t}) = √(2π/t) η(e^{-4π²/t})`.
pub fn ln_eta_nome(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("nome exponent must be positive, got {t}")));
    }
    if t >= 2.0 * PI {
        Ok(-t / 24.0 + pentagonal_real(t).ln())
    } else {
        let tt = 4.0 * PI * PI / t;
        Ok(0.5 * (2.0 * PI / t).ln() - tt / 24.0 + pentagonal_real(tt).ln())
    }
}

/// `η(e^{-t})` in the nome convention.
pub fn eta_nome(t: f64) -> Result<f64> {
    ln_eta_nome(t).map(f64::exp)
}

/// Direct product form at the real nome, no transformation.
pub fn eta_nome_product(t: f64) -> f64 {
    let mut p = 1.0;
    let mut n = 1.0;
    loop {
        let e = (-t * n).exp();
        p *= 1.0 - e;
        if e < CUTOFF {
            break;
        }
        n += 1.0;
    }
    (-t / 24.0).exp() * p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn large_imaginary_part() {
        let tau = Complex64::new(0.0, 10.0);
        let e = dedekind_eta(tau, &p()).unwrap();
        let lead = (-20.0 * PI / 24.0f64).exp();
        assert!(((e.re - lead) / lead).abs() < 1e-27 + 1e-16);
        assert!(e.im.abs() < 1e-30);
    }

    #[test]
    fn domain() {
        assert!(dedekind_eta(Complex64::new(0.3, 0.0), &p()).is_err());
        assert!(dedekind_eta(Complex64::new(0.3, -1.0), &p()).is_err());
    }

    #[test]
    fn product_and_series_agree() {
        let tau = Complex64::new(-0.5, 0.6);
        let a = dedekind_eta(tau, &p()).unwrap();
        let b = dedekind_eta_product(tau, &p()).unwrap();
        assert!((a - b).norm() < 1e-13 * a.norm());
        let t = 1.0;
        let s = eta_nome(t).unwrap();
        let q = eta_nome_product(t);
        assert!((s - q).abs() < 1e-13 * s);
        // pentagonal sum without the transformation
        let direct = (-t / 24.0).exp() * pentagonal_real(t);
        assert!((direct - q).abs() < 1e-13 * q);
    }

    #[test]
    fn modularity() {
        for &y in &[0.5, 1.0, 2.0] {
            let tau = Complex64::new(0.0, y);
            let lhs = dedekind_eta(-1.0 / tau, &p()).unwrap();
            let rhs = (Complex64::new(0.0, -1.0) * tau).sqrt() * dedekind_eta(tau, &p()).unwrap();
            assert!((lhs - rhs).norm() < 1e-10, "y={y}");
        }
    }

    #[test]
    fn nome_transformation_is_continuous() {
        let t = 2.0 * PI;
        let a = ln_eta_nome(t * (1.0 - 1e-12)).unwrap();
        let b = ln_eta_nome(t).unwrap();
        assert!((a - b).abs() < 1e-11);
        assert!((eta_nome(0.3).unwrap() - eta_nome_product(0.3)).abs() < 1e-12);
    }
}
