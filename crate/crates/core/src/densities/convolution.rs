use std::cell::Cell;
use std::f64::consts::PI;

use super::{
    near_singular, p2, p3, p4, p5, pn_quadrature, singular_abscissas, DensityFlag, DensityMethod, EvalResult, P3Method,
    P4Method, P5Method,
};
use crate::error::{domain, Result, WalkError};
use crate::numerics::quad::tanh_sinh;
use crate::numerics::Precision;

const ARC_TOL: f64 = 1e-12;

fn inner(n: usize, r: f64, prec: &Precision) -> Result<EvalResult> {
    match n {
        2 => Ok(p2(r)),
        // the agm route is exact up to the log singularity itself
        3 => p3(r, P3Method::Agm, prec),
        4 => p4(r, P4Method::Auto, prec),
        5 => p5(r, P5Method::Auto, prec),
        _ => {
            if r >= n as f64 {
                Ok(EvalResult::outside(DensityMethod::Quadrature))
            } else {
                pn_quadrature(n, r, prec)
            }
        }
    }
}

/// `p_n(x) = (2x/π) ∫ p_{n−1}(r) dr / √((r² − (x−1)²)((x+1)² − r²))` over
/// `|x−1| < r < x+1`, which is the arc average `(x/π) ∫_0^π p_{n−1}(r)/r dα`
/// with `r = √(x² − 2x cos α + 1)` after substituting `r` for `α`. The range
/// is split where `r` meets a singular abscissa of `p_{n−1}`; the endpoint
/// square roots are evaluated from the exact distances supplied by tanh-sinh.
pub fn pn_convolution(n: usize, x: f64, prec: &Precision) -> Result<EvalResult> {
    if n < 3 {
        return Err(domain(format!("pn_convolution needs n ≥ 3, got {n}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("pn_convolution needs x > 0, got {x}")));
    }
    if x >= n as f64 {
        return Ok(EvalResult::outside(DensityMethod::Convolution));
    }
    let m = n - 1;
    if m == 2 && x == 1.0 {
        return Ok(EvalResult::new(f64::INFINITY, 0.0, DensityMethod::Convolution, "from_p2")
            .with_flag(DensityFlag::InfiniteSentinel)
            .with_flag(DensityFlag::SingularPoint));
    }
    let lo = (x - 1.0).abs();
    let hi = (x + 1.0).min(m as f64);
    let mut cuts = vec![lo, hi];
    cuts.extend(singular_abscissas(m).into_iter().filter(|&s| s > lo && s < hi));
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let inner_err = Cell::new(0.0f64);
    let failure: Cell<Option<WalkError>> = Cell::new(None);
    let mut total = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let f = |r: f64, da: f64, db: f64| -> f64 {
            let d_lo = if a == lo { da } else { r - lo };
            let d_hi = if b == x + 1.0 { db } else { x + 1.0 - r };
            let kernel = 1.0 / (d_lo * (r + lo) * d_hi * (x + 1.0 + r)).sqrt();
            let v = if m == 2 {
                // p_2 with its endpoint distance taken exactly
                let d2 = if b == 2.0 { db } else { 2.0 - r };
                Ok(EvalResult::new(2.0 / (PI * (d2 * (2.0 + r)).sqrt()), 0.0, DensityMethod::ClosedForm, ""))
            } else {
                inner(m, r, prec)
            };
            match v {
                Ok(v) if v.value.is_finite() => {
                    inner_err.set(inner_err.get().max(v.err * kernel));
                    v.value * kernel
                }
                Ok(_) => 0.0,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        };
        let q = tanh_sinh(&f, a, b, ARC_TOL)?;
        total += q.value;
        err += q.err;
    }
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let c = 2.0 * x / PI;
    let err = c * (err + (hi - lo) * inner_err.get());
    let res = EvalResult::new(c * total, err, DensityMethod::Convolution, format!("from_p{m}"));
    if near_singular(n, x, 0.05) {
        Ok(res.with_flag(DensityFlag::SingularPoint))
    } else {
        Ok(res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn p3_from_p2() {
        for &x in &[0.5, 2.0, 2.9] {
            let c = pn_convolution(3, x, &p()).unwrap().value;
            let e = p3(x, P3Method::Elliptic, &p()).unwrap().value;
            assert!((c - e).abs() < 1e-8, "x={x}: {c} vs {e}");
        }
    }

    #[test]
    fn p4_from_p3() {
        let c = pn_convolution(4, 3.5, &p()).unwrap().value;
        let h = p4(3.5, P4Method::Hyper, &p()).unwrap().value;
        assert!((c - h).abs() < 1e-7, "{c} vs {h}");
    }

    #[test]
    fn p5_from_p4() {
        let c = pn_convolution(5, 0.5, &p()).unwrap().value;
        let s = p5(0.5, P5Method::Series0, &p()).unwrap().value;
        assert!((c - s).abs() < 1e-6, "{c} vs {s}");
    }
}
