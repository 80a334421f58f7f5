use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{DensityFlag, DensityMethod, EvalResult};
use crate::error::{domain, Result, WalkError};
use crate::numerics::hyper::{hyp_pfq_full, HyperParams};
use crate::numerics::{agm3, elliptic_k, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum P3Method {
    #[default]
    Auto,
    Elliptic,
    Hyper,
    Agm,
    Series,
}

const SERIES_UPTO: f64 = 0.8;
/// Half-width of the window around 1 that carries the singular-point flag.
const FLAG_WINDOW: f64 = 0.05;

pub fn p3(x: f64, method: P3Method, prec: &Precision) -> Result<EvalResult> {
    if x.is_nan() {
        return Err(domain("p3 at NaN"));
    }
    if !(0.0..=3.0).contains(&x) {
        return Ok(EvalResult::outside(DensityMethod::ClosedForm));
    }
    if x == 0.0 {
        return Ok(EvalResult::new(0.0, 0.0, DensityMethod::ClosedForm, "origin"));
    }
    if x == 1.0 {
        return Ok(EvalResult::new(f64::INFINITY, 0.0, DensityMethod::AsymEdge, "log_singularity")
            .with_flag(DensityFlag::InfiniteSentinel)
            .with_flag(DensityFlag::SingularPoint));
    }
    let r = match method {
        P3Method::Auto => {
            if x <= SERIES_UPTO {
                series(x, prec)?
            } else {
                // the AGM keeps full accuracy up to |x − 1| ~ ε; the log
                // asymptotics only back it up
                match agm(x, prec) {
                    Ok(r) => r,
                    Err(_) => asym_edge(x),
                }
            }
        }
        P3Method::Elliptic => elliptic(x, prec)?,
        P3Method::Hyper => hyper(x, prec)?,
        P3Method::Agm => agm(x, prec)?,
        P3Method::Series => series(x, prec)?,
    };
    if (x - 1.0).abs() < FLAG_WINDOW {
        Ok(r.with_flag(DensityFlag::SingularPoint))
    } else {
        Ok(r)
    }
}

fn region(x: f64) -> &'static str {
    if x < 1.0 {
        "inner"
    } else {
        "outer"
    }
}

/// `(3/(2π²)) log(4/|x−1|)`; the remainder vanishes like `ε log ε`.
fn asym_edge(x: f64) -> EvalResult {
    let e = (x - 1.0).abs();
    let v = 3.0 / (2.0 * PI * PI) * (4.0 / e).ln();
    EvalResult::new(v, 2.0 * e * (1.0 + e.ln().abs()), DensityMethod::AsymEdge, "near_one")
}

/// `√x/π² · Re K(k)`, `k² = (x+1)³(3−x)/(16x)`, with `Re K(k) = K(1/k)/k` for `k > 1`.
fn elliptic(x: f64, prec: &Precision) -> Result<EvalResult> {
    let k2 = (x + 1.0).powi(3) * (3.0 - x) / (16.0 * x);
    let kk = if k2 > 1.0 {
        let k = k2.sqrt();
        elliptic_k(1.0 / k, prec)? / k
    } else {
        elliptic_k(k2.sqrt(), prec)?
    };
    let v = x.sqrt() / (PI * PI) * kk;
    // modulus rounding amplified by the logarithmic blow-up of K at 1
    let kp2 = (x - 1.0).abs().powi(3) * (x + 3.0) / (16.0 * x);
    let err = v * (1e-15 + f64::EPSILON / kp2.max(f64::MIN_POSITIVE));
    Ok(EvalResult::new(v, err, DensityMethod::ClosedForm, region(x)))
}

/// `2√3 x/(π(3+x²)) ₂F₁(⅓,⅔;1; x²(9−x²)²/(3+x²)³)`.
fn hyper(x: f64, prec: &Precision) -> Result<EvalResult> {
    let x2 = x * x;
    let z = x2 * (9.0 - x2).powi(2) / (3.0 + x2).powi(3);
    let h = HyperParams::new(&[1.0 / 3.0, 2.0 / 3.0], &[1.0])?;
    // the series is cut when a term drops below tol·sum; near z = 1 the
    // neglected tail is larger by 1/(1−z), so the cut is tightened accordingly
    let hp = Precision {
        max_terms: prec.max_terms.max(2_000_000),
        target_rel_error: prec.target_rel_error * (1.0 - z).clamp(1e-6, 1.0),
        ..*prec
    };
    let f = hyp_pfq_full(&h, z, &hp)?;
    let pre = 2.0 * 3f64.sqrt() * x / (PI * (3.0 + x2));
    let one_minus = (1.0 - z).max(f64::MIN_POSITIVE);
    let err = pre * (f.err + f.value * f64::EPSILON * (4.0 + 1.0 / one_minus));
    Ok(EvalResult::new(pre * f.value, err, DensityMethod::ClosedForm, region(x)))
}

/// `(2√3/π) x / AG₃(3+x², 3|1−x²|^{2/3})`.
fn agm(x: f64, prec: &Precision) -> Result<EvalResult> {
    let b = 3.0 * ((1.0 - x) * (1.0 + x)).abs().powf(2.0 / 3.0);
    let m = agm3(3.0 + x * x, b, prec)?;
    if m == 0.0 {
        return Err(WalkError::SingularInput("p3 agm at x = 1".into()));
    }
    let v = 2.0 * 3f64.sqrt() / PI * x / m;
    Ok(EvalResult::new(v, 8.0 * f64::EPSILON * v, DensityMethod::ClosedForm, region(x)))
}

/// `(2x/(π√3)) Σ W_3(2k) (x/3)^{2k}` for `x < 1`, transported to `x > 1` by
/// `p_3(x) = 4x/((3−x)(1+x)) · p_3((3−x)/(1+x))`.
fn series(x: f64, prec: &Precision) -> Result<EvalResult> {
    if x > 1.0 {
        let xp = (3.0 - x) / (1.0 + x);
        let f = 4.0 * x / ((3.0 - x) * (1.0 + x));
        if xp == 0.0 {
            // x = 3: limit of f·p3(x') with p3(x') ~ 2x'/(π√3)
            return Ok(EvalResult::new(3f64.sqrt() / (2.0 * PI), 1e-16, DensityMethod::Series0, "outer"));
        }
        let (v, e) = series_inner(xp, prec)?;
        return Ok(EvalResult::new(f * v, f * e, DensityMethod::Series0, "outer"));
    }
    let (v, e) = series_inner(x, prec)?;
    Ok(EvalResult::new(v, e, DensityMethod::Series0, "inner"))
}

fn series_inner(x: f64, prec: &Precision) -> Result<(f64, f64)> {
    // u_k = W_3(2k)/9^k from the scaled three-term recurrence
    let q = x * x;
    let tol = prec.effective_tol();
    let (mut u0, mut u1) = (1.0, 1.0 / 3.0);
    let mut pw = q;
    let mut sum = crate::numerics::sum::CompensatedSum::new();
    sum.add(u0);
    sum.add(u1 * pw);
    for k in 0..prec.max_terms {
        let kf = k as f64;
        let u2 = (18.0 * (20.0 * kf * kf + 60.0 * kf + 46.0) * u1 - 9.0 * (2.0 * kf + 2.0).powi(2) * u0)
            / (81.0 * (2.0 * kf + 4.0).powi(2));
        pw *= q;
        let t = u2 * pw;
        sum.add(t);
        u0 = u1;
        u1 = u2;
        let s = sum.value();
        if t <= tol * s {
            let tail = t * q / (1.0 - q);
            let pre = 2.0 * x / (PI * 3f64.sqrt());
            return Ok((pre * s, pre * (tail + 4.0 * f64::EPSILON * s)));
        }
    }
    Err(WalkError::NonConvergence { what: "p3 series", terms: prec.max_terms })
}
