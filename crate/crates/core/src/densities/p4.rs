use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::series::p4_series;
use super::{pn_quadrature, DensityFlag, DensityMethod, EvalResult};
use crate::error::{domain, Result};
use crate::numerics::hyper::{hyp32_log_continuation_full, hyp_pfq_full, HyperParams};
use crate::numerics::{dedekind_eta, gamma, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum P4Method {
    #[default]
    Auto,
    Hyper,
    Series0,
    Asym4,
    Quadrature,
}

const SERIES_UPTO: f64 = 1.5;
/// Around `x = 2` the ₃F₂ argument approaches 1 and quadrature takes over.
pub const P4_SEAM_HALF_WIDTH: f64 = 0.05;
const ASYM_FROM: f64 = 3.999;
/// Terms allowed for the ₃F₂ series, which converges slowly next to `x = 2`.
const HYPER_MAX_TERMS: usize = 4_000_000;

pub fn p4(x: f64, method: P4Method, prec: &Precision) -> Result<EvalResult> {
    if x.is_nan() {
        return Err(domain("p4 at NaN"));
    }
    if !(0.0..4.0).contains(&x) {
        return Ok(EvalResult::outside(DensityMethod::ClosedForm));
    }
    if x == 0.0 {
        return Ok(EvalResult::new(0.0, 0.0, DensityMethod::ClosedForm, "origin"));
    }
    let r = match method {
        P4Method::Auto => {
            if x <= SERIES_UPTO {
                series0(x)?
            } else if (x - 2.0).abs() < P4_SEAM_HALF_WIDTH {
                pn_quadrature(4, x, prec)?
            } else if x > ASYM_FROM {
                asym4(x)
            } else {
                hyper(x, prec)?
            }
        }
        P4Method::Hyper => hyper(x, prec)?,
        P4Method::Series0 => series0(x)?,
        P4Method::Asym4 => asym4(x),
        P4Method::Quadrature => pn_quadrature(4, x, prec)?,
    };
    let mut r = r;
    r.region = region(x).into();
    if (x - 2.0).abs() < P4_SEAM_HALF_WIDTH {
        r = r.with_flag(DensityFlag::SingularPoint);
    }
    Ok(r)
}

fn region(x: f64) -> &'static str {
    if x < 2.0 {
        "inner"
    } else if x == 2.0 {
        "seam"
    } else {
        "outer"
    }
}

/// `p_4(2) = 2^{7/3}π/(3√3) · Γ(2/3)^{−6}`.
pub fn p4_at_two() -> f64 {
    2f64.powf(7.0 / 3.0) * PI / (3.0 * 3f64.sqrt()) * gamma(2.0 / 3.0).expect("positive").powi(-6)
}

/// `p_4'(2⁻) = (√3/π) ₃F₂(−½,⅓,⅔; 1,1; 1) − (2/3) p_4(2)`.
pub fn p4_left_derivative_at_two() -> f64 {
    // terms decay like n^{-5/2}; the remainder is estimated from the last
    // term by the integral of that power law
    let n_max = 200_000usize;
    let mut t = 1.0f64;
    let mut s = crate::numerics::sum::CompensatedSum::new();
    s.add(t);
    for n in 0..n_max {
        let nf = n as f64;
        t *= (nf - 0.5) * (nf + 1.0 / 3.0) * (nf + 2.0 / 3.0) / (nf + 1.0).powi(3);
        s.add(t);
    }
    let nn = n_max as f64;
    let c = t * nn.powf(2.5);
    s.add(c * (2.0 / 3.0) * (nn + 0.5).powf(-1.5));
    3f64.sqrt() / PI * s.value() - 2.0 / 3.0 * p4_at_two()
}

/// `(2/π²)(√(16−x²)/x) Re ₃F₂(½,½,½; 5/6,7/6; (16−x²)³/(108x⁴))`.
fn hyper(x: f64, prec: &Precision) -> Result<EvalResult> {
    if x == 2.0 {
        let v = p4_at_two();
        return Ok(EvalResult::new(v, 1e-15, DensityMethod::ClosedForm, "seam"));
    }
    let d = (4.0 - x) * (4.0 + x);
    let z = d.powi(3) / (108.0 * x.powi(4));
    let pre = 2.0 / (PI * PI) * d.sqrt() / x;
    let prec = Precision { max_terms: prec.max_terms.max(HYPER_MAX_TERMS), ..*prec };
    if z > 1.0 {
        let h = hyp32_log_continuation_full(z, &prec)?;
        let err = pre * (h.err + 8.0 * f64::EPSILON * h.value.abs());
        Ok(EvalResult::new(pre * h.value, err, DensityMethod::LogContinuation, "inner"))
    } else {
        let params = HyperParams::new(&[0.5, 0.5, 0.5], &[5.0 / 6.0, 7.0 / 6.0])?;
        let prec = Precision { target_rel_error: prec.target_rel_error * (1.0 - z).clamp(1e-6, 1.0), ..prec };
        let h = hyp_pfq_full(&params, z, &prec)?;
        // rounding of z is amplified by the square-root type growth of the derivative at z = 1
        let amp = 1.0 + 1.0 / (1.0 - z).sqrt();
        let err = pre * (h.err + 8.0 * f64::EPSILON * h.value.abs() * amp);
        Ok(EvalResult::new(pre * h.value, err, DensityMethod::ClosedForm, "outer"))
    }
}

/// `Σ (r_{4,k} − s_{4,k} log x) x^{2k+1}`, convergent for `x < 2`.
fn series0(x: f64) -> Result<EvalResult> {
    if x >= 2.0 {
        return Err(domain(format!("p4 series at 0 converges for x < 2, got {x}")));
    }
    let s = p4_series()?;
    let (v, last) = s.eval(x);
    let q = x * x / 4.0;
    let err = last * q / (1.0 - q) + 8.0 * f64::EPSILON * v.abs();
    Ok(EvalResult::new(v, err, DensityMethod::Series0, "inner"))
}

/// Three-term expansion at `x = 4`,
/// `(√2/π²)(√ε + (3/16)ε^{3/2} + (23/512)ε^{5/2})` with `ε = 4 − x`.
/// The middle sign is fixed by expanding the ₃F₂ form, whose argument is
/// `O(ε³)`, so that `p_4 = (2/π²)√(ε(8−ε))/(4−ε) + O(ε^{7/2})`.
pub fn p4_asym4_terms(x: f64) -> [f64; 3] {
    let e = 4.0 - x;
    let c = 2f64.sqrt() / (PI * PI);
    [c * e.sqrt(), c * 3.0 / 16.0 * e.powf(1.5), c * 23.0 / 512.0 * e.powf(2.5)]
}

fn asym4(x: f64) -> EvalResult {
    let e = 4.0 - x;
    let c = 2f64.sqrt() / (PI * PI);
    let v: f64 = p4_asym4_terms(x).iter().sum();
    EvalResult::new(v, c * e.powf(3.5), DensityMethod::AsymEdge, "outer")
}

/// `|p_4(8i η(2τ)³η(6τ)³/(η(τ)³η(3τ)³)) − (6(2τ+1)/π) η(τ)η(2τ)η(3τ)η(6τ)|`
/// at `τ = −1/2 + iy`.
pub fn p4_modular_check(y: f64, prec: &Precision) -> Result<f64> {
    if !(y >= 0.35) || !y.is_finite() {
        return Err(domain(format!("p4_modular_check needs y ≥ 0.35, got {y}")));
    }
    let tau = Complex64::new(-0.5, y);
    let e1 = dedekind_eta(tau, prec)?;
    let e2 = dedekind_eta(2.0 * tau, prec)?;
    let e3 = dedekind_eta(3.0 * tau, prec)?;
    let e6 = dedekind_eta(6.0 * tau, prec)?;
    let arg = Complex64::new(0.0, 8.0) * (e2 * e6).powi(3) / (e1 * e3).powi(3);
    if arg.im.abs() > 1e-10 * arg.norm() || !(arg.re > 0.0 && arg.re < 2.0) {
        return Err(domain(format!("modular argument {arg} outside (0, 2)")));
    }
    let lhs = p4(arg.re, P4Method::Auto, prec)?.value;
    let rhs = 6.0 * (2.0 * tau + 1.0) / PI * e1 * e2 * e3 * e6;
    Ok((Complex64::new(lhs, 0.0) - rhs).norm())
}

/// The modular argument `8i η(2τ)³η(6τ)³/(η(τ)³η(3τ)³)` at `τ = −1/2 + iy`.
pub fn p4_modular_argument(y: f64, prec: &Precision) -> Result<f64> {
    let tau = Complex64::new(-0.5, y);
    let e = |m: f64| dedekind_eta(m * tau, prec);
    let arg = Complex64::new(0.0, 8.0) * (e(2.0)? * e(6.0)?).powi(3) / (e(1.0)? * e(3.0)?).powi(3);
    Ok(arg.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{r50_gamma_form, w3};

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn value_at_two() {
        let g = p4_at_two();
        let w = 3f64.sqrt() / PI * w3(-1.0, &p()).unwrap().value;
        assert!((g - w).abs() < 1e-13, "{g} {w}");
        let q = p4(2.0, P4Method::Auto, &p()).unwrap();
        assert_eq!(q.method, DensityMethod::Quadrature);
        assert!((q.value - g).abs() < 1e-9, "{q:?} vs {g}");
    }

    #[test]
    fn value_at_one() {
        let v = p4(1.0, P4Method::Auto, &p()).unwrap().value;
        assert!((v - 0.3299338011).abs() < 5e-11, "{v}");
        assert!((v - r50_gamma_form()).abs() < 1e-13);
        let h = p4(1.0, P4Method::Hyper, &p()).unwrap();
        assert_eq!(h.method, DensityMethod::LogContinuation);
        assert!((h.value - v).abs() < 1e-12);
    }

    #[test]
    fn hyper_vs_quadrature() {
        for &x in &[0.5, 1.0, 1.5, 2.5, 3.0, 3.5] {
            let h = p4(x, P4Method::Hyper, &p()).unwrap().value;
            let q = p4(x, P4Method::Quadrature, &p()).unwrap().value;
            assert!((h - q).abs() < 1e-6, "x={x}: {h} vs {q}");
        }
    }

    #[test]
    fn seams_overlap() {
        for &x in &[1.5, 1.95, 2.05, 3.999] {
            let h = p4(x, P4Method::Hyper, &p()).unwrap().value;
            let q = p4(x, P4Method::Quadrature, &p()).unwrap().value;
            assert!((h - q).abs() < 1e-8, "x={x}: {h} vs {q}");
        }
        let s = p4(1.5, P4Method::Series0, &p()).unwrap().value;
        let h = p4(1.5, P4Method::Hyper, &p()).unwrap().value;
        assert!((s - h).abs() < 1e-12);
        let a = p4(3.9995, P4Method::Asym4, &p()).unwrap().value;
        let h = p4(3.9995, P4Method::Hyper, &p()).unwrap().value;
        assert!((a - h).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_constant_near_four() {
        let x: f64 = 3.99;
        let e = 4.0 - x;
        let c2 = 2f64.sqrt() / (PI * PI);
        let h = p4(x, P4Method::Hyper, &p()).unwrap().value;
        let fitted = (h - c2 * (e.sqrt() + 3.0 / 16.0 * e.powf(1.5))) / e.powf(2.5);
        let c = 23.0 * c2 / 512.0;
        assert!((fitted / c - 1.0).abs() < 0.5, "{fitted} vs {c}");
        // with the opposite middle sign the remainder is of order ε^{3/2}
        let other = (h - c2 * (e.sqrt() - 3.0 / 16.0 * e.powf(1.5))) / e.powf(2.5);
        assert!(other / c > 100.0);
    }

    #[test]
    fn left_derivative_at_two() {
        let d = p4_left_derivative_at_two();
        assert!((d - 0.14468682595228177).abs() < 1e-12, "{d}");
        let f = |x: f64| p4(x, P4Method::Hyper, &p()).unwrap().value;
        let h = 0.005;
        let v: Vec<f64> = (0..5).map(|j| f(2.0 - j as f64 * h)).collect();
        let fd = (25.0 * v[0] - 48.0 * v[1] + 36.0 * v[2] - 16.0 * v[3] + 3.0 * v[4]) / (12.0 * h);
        assert!((fd - d).abs() < 1e-6, "{fd} vs {d}");
    }

    #[test]
    fn modular() {
        for &y in &[0.6455, 1.0, 2.0] {
            let r = p4_modular_check(y, &p()).unwrap();
            assert!(r < 1e-9, "y={y}: {r}");
        }
        let y0 = (5.0f64 / 3.0).sqrt() / 2.0;
        assert!((p4_modular_argument(y0, &p()).unwrap() - 1.0).abs() < 1e-12);
        assert!(p4_modular_check(0.2, &p()).is_err());
    }
}
