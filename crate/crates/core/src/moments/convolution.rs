use num_traits::ToPrimitive;

use super::exact::even_moment_exact;
use super::hyper_forms::{w3, w3_neg_odd};
use super::{MomentMethod, MomentValue};
use crate::error::{domain, Result, WalkError};
use crate::numerics::Precision;

/// `W_4(s) = Σ_j C(s/2, j)² W_3(s − 2j)` for integer `s`, truncated at `J`.
pub fn convolution_w4_from_w3(s: i64, j_max: usize, prec: &Precision) -> Result<MomentValue> {
    if j_max < 40 {
        return Err(domain(format!("convolution needs J ≥ 40, got {j_max}")));
    }
    if s < 0 && s % 2 == 0 {
        return Err(WalkError::Pole { what: "W_4", at: s as f64 });
    }
    let half = s as f64 / 2.0;
    let mut binom = 1.0;
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut last = 0.0;
    for j in 0..=j_max {
        if j > 0 {
            binom *= (half - (j - 1) as f64) / j as f64;
        }
        if binom == 0.0 {
            last = 0.0;
            break;
        }
        let arg = s - 2 * j as i64;
        let w = if arg < 0 {
            w3_neg_odd(((-arg - 1) / 2) as usize, prec)?
        } else if arg % 2 == 0 && arg <= 60 {
            let v = even_moment_exact(3, (arg / 2) as usize)?;
            MomentValue::new(v.to_f64().unwrap_or(f64::NAN), 0.0, MomentMethod::ExactCombinatorial)
        } else {
            w3(arg as f64, prec)?
        };
        let t = binom * binom * w.value;
        sum += t;
        err += binom * binom * w.err;
        last = t.abs();
    }
    // terms decay roughly like 9^{-j} times a power of j
    let tail = last / 8.0;
    let tol = prec.target_rel_error.max(1e-12) * sum.abs();
    if tail > 1e3 * tol {
        return Err(WalkError::SlowConvergence { what: "W_4 convolution", err: tail, tol });
    }
    Ok(MomentValue::new(sum, err + tail + 4.0 * f64::EPSILON * sum.abs(), MomentMethod::Convolution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::continuation::{continue_by_functional_eq, direct_moment};

    #[test]
    fn trivial_and_even() {
        let p = Precision::default();
        assert_eq!(convolution_w4_from_w3(0, 40, &p).unwrap().value, 1.0);
        assert!((convolution_w4_from_w3(2, 40, &p).unwrap().value - 4.0).abs() < 1e-12);
        assert!(convolution_w4_from_w3(2, 10, &p).is_err());
    }

    #[test]
    fn odd_values() {
        let p = Precision::default();
        for s in [-1i64, 1, 3] {
            let c = convolution_w4_from_w3(s, 60, &p).unwrap().value;
            let d = direct_moment(4, s as f64, &p).unwrap().value;
            assert!((c - d).abs() < 1e-8, "s={s}: {c} {d}");
        }
        let c = convolution_w4_from_w3(-3, 60, &p).unwrap().value;
        let d = continue_by_functional_eq(4, -3.0, &p).unwrap().value;
        assert!((c - d).abs() < 1e-8, "{c} {d}");
    }
}
