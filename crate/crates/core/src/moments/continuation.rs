use super::bessel_forms::{bessel_moment, broadhurst_integral};
use super::hyper_forms::{w3_single, w4_two_term};
use super::{MomentMethod, MomentValue};
use crate::error::{domain, Result, WalkError};
use crate::holonomic::verrill_operator;
use crate::numerics::Precision;

/// Poles of `W_n` at `-2, -4, …` (`n ≥ 3`).
pub fn is_pole(n: usize, s: f64) -> bool {
    n >= 3 && s <= -1.5 && (0.5 * s - (0.5 * s).round()).abs() < 1e-12
}

/// A non-recursive evaluation of `W_n(s)` valid for `s > -2`.
pub fn direct_moment(n: usize, s: f64, prec: &Precision) -> Result<MomentValue> {
    if !(s > -2.0) || !s.is_finite() {
        return Err(domain(format!("direct evaluation of W_{n} needs s > -2, got {s}")));
    }
    match n {
        3 => w3_single(s, prec),
        4 => {
            let odd = s == s.round() && (s.round() as i64).rem_euclid(2) == 1;
            if odd || s < -1.0 {
                bessel_moment(4, s, prec)
            } else {
                w4_two_term(s, prec)
            }
        }
        n if n >= 2 => broadhurst_integral(n, s, 0, prec),
        _ => Err(domain(format!("W_n needs n ≥ 2, got {n}"))),
    }
}

/// Evaluates `W_n(s)` by moving to `s + 2j ≥ 0` with direct evaluations and
/// running the moment recurrence back down to `s`.
pub fn continue_by_functional_eq(n: usize, s: f64, prec: &Precision) -> Result<MomentValue> {
    if !(3..=5).contains(&n) {
        return Err(domain(format!("functional-equation continuation covers n = 3, 4, 5, got {n}")));
    }
    if !s.is_finite() {
        return Err(domain(format!("s must be finite, got {s}")));
    }
    if is_pole(n, s) {
        return Err(WalkError::Pole { what: "W_n", at: s });
    }
    let op = verrill_operator(n);
    let lam = op.order();
    let shift = ((-s / 2.0).ceil().max(0.0) as usize).max(1);
    // vals[i] = W(s + 2i) for i = shift .. shift + lam - 1
    let mut vals = vec![0.0; shift + lam];
    let mut errs = vec![0.0; shift + lam];
    for i in shift..shift + lam {
        let v = direct_moment(n, s + 2.0 * i as f64, prec)?;
        vals[i] = v.value;
        errs[i] = v.err;
    }
    for i in (0..shift).rev() {
        let q = op.coeffs_near(0.5 * s + i as f64);
        if q[0] == 0.0 {
            return Err(WalkError::Pole { what: "W_n", at: s + 2.0 * i as f64 });
        }
        let mut acc = 0.0;
        let mut err = 0.0;
        let mut mag = 0.0;
        for j in 1..=lam {
            acc += q[j] * vals[i + j];
            err += (q[j] * errs[i + j]).abs();
            mag += (q[j] * vals[i + j]).abs();
        }
        vals[i] = -acc / q[0];
        errs[i] = (err + 4.0 * f64::EPSILON * mag) / q[0].abs();
    }
    Ok(MomentValue::new(vals[0], errs[0], MomentMethod::FunctionalEq))
}
