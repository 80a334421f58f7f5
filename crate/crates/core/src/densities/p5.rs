use serde::{Deserialize, Serialize};

use super::series::p5_series;
use super::{near_singular, pn_quadrature, DensityFlag, DensityMethod, EvalResult};
use crate::error::{domain, Result};
use crate::numerics::Precision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum P5Method {
    #[default]
    Auto,
    Series0,
    Quadrature,
}

/// The series converges for `x < 3` but represents `p_5` only up to the
/// singular point 1; beyond it sums to the analytic continuation.
const SERIES_UPTO: f64 = 1.0;

pub fn p5(x: f64, method: P5Method, prec: &Precision) -> Result<EvalResult> {
    if x.is_nan() {
        return Err(domain("p5 at NaN"));
    }
    if !(0.0..5.0).contains(&x) {
        return Ok(EvalResult::outside(DensityMethod::ClosedForm));
    }
    if x == 0.0 {
        return Ok(EvalResult::new(0.0, 0.0, DensityMethod::Series0, "origin"));
    }
    let mut r = match method {
        P5Method::Auto if x <= SERIES_UPTO => series0(x)?,
        P5Method::Auto | P5Method::Quadrature => pn_quadrature(5, x, prec)?,
        P5Method::Series0 => series0(x)?,
    };
    if near_singular(5, x, 0.05) {
        r = r.with_flag(DensityFlag::SingularPoint);
    }
    Ok(r)
}

/// `Σ r_{5,k} x^{2k+1}` on `[0, 1]`.
fn series0(x: f64) -> Result<EvalResult> {
    if x > SERIES_UPTO {
        return Err(domain(format!("p5 series at 0 represents p5 only on [0, 1], got {x}")));
    }
    let s = p5_series()?;
    let (v, last) = s.eval(x);
    let q = x * x / 9.0;
    let err = last * q / (1.0 - q) + 8.0 * f64::EPSILON * v.abs();
    Ok(EvalResult::new(v, err, DensityMethod::Series0, "inner"))
}
