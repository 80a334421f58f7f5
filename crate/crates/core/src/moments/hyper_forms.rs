use std::f64::consts::PI;

use super::continuation::{continue_by_functional_eq, is_pole};
use super::{MomentMethod, MomentValue};
use crate::error::{domain, Result, WalkError};
use crate::numerics::gamma::{binomial_real, ln_gamma};
use crate::numerics::hyper::hyp_pfq_full;
use crate::numerics::{HyperParams, Precision};

fn is_odd_integer(s: f64) -> bool {
    s == s.round() && (s.round() as i64).rem_euclid(2) == 1
}

/// `W_3(s)` from the single ₃F₂ at ¼ for `s > -2`, continued below by the
/// functional equation.
pub fn w3(s: f64, prec: &Precision) -> Result<MomentValue> {
    if !s.is_finite() {
        return Err(domain(format!("w3 needs finite s, got {s}")));
    }
    if is_pole(3, s) {
        return Err(WalkError::Pole { what: "W_3", at: s });
    }
    if s > -2.0 {
        w3_single(s, prec)
    } else {
        continue_by_functional_eq(3, s, prec)
    }
}

/// The single-hypergeometric form alone, `s > -2`.
pub fn w3_single(s: f64, prec: &Precision) -> Result<MomentValue> {
    if !(s > -2.0) {
        return Err(domain(format!("single ₃F₂ form needs s > -2, got {s}")));
    }
    let a = 0.5 * (s + 2.0);
    let p = HyperParams::new(&[a, a, a], &[1.0, 0.5 * (s + 3.0)])?;
    let h = hyp_pfq_full(&p, 0.25, prec)?;
    // log of 3^{s+3/2} Γ(1+s/2)² / (2π Γ(s+2))
    let lc = (s + 1.5) * 3f64.ln() + 2.0 * ln_gamma(1.0 + 0.5 * s)? - ln_gamma(s + 2.0)? - (2.0 * PI).ln();
    let c = lc.exp();
    let value = c * h.value;
    Ok(MomentValue::new(value, c * h.err + 8.0 * f64::EPSILON * (1.0 + lc.abs()) * value.abs(), MomentMethod::HypSingle))
}

fn two_term_guard(s: f64, n: usize) -> Result<()> {
    if !s.is_finite() {
        return Err(domain(format!("two-term form needs finite s, got {s}")));
    }
    if is_odd_integer(s) {
        return Err(domain(format!("two-term form of W_{n} excludes odd integer s = {s}")));
    }
    if s <= -2.0 && s == s.round() {
        return Err(WalkError::Pole { what: if n == 3 { "W_3" } else { "W_4" }, at: s });
    }
    Ok(())
}

/// `binomial(s, (s-1)/2)` and `binomial(s, s/2)` through the Gamma family.
/// `tan(πs/2)`, reduced by the nearest integer first so that the pole at odd
/// `s` keeps full relative accuracy.
fn tan_half_pi(s: f64) -> f64 {
    let m = s.round();
    let t = (0.5 * PI * (s - m)).tan();
    if (m as i64).rem_euclid(2) == 1 {
        -1.0 / t
    } else {
        t
    }
}

fn binomials(s: f64) -> Result<(f64, f64)> {
    Ok((binomial_real(s, 0.5 * (s - 1.0))?, binomial_real(s, 0.5 * s)?))
}

/// `W_3(s)` as the sum of two ₃F₂ at ¼; `s` not an odd integer.
pub fn w3_two_term(s: f64, prec: &Precision) -> Result<MomentValue> {
    two_term_guard(s, 3)?;
    let (b1, b2) = binomials(s)?;
    let f1 = tan_half_pi(s) * b1 * b1 / 2f64.powf(2.0 * s + 1.0);
    let mut value = 0.0;
    let mut err = 0.0;
    let mut scale = 0.0;
    if f1 != 0.0 {
        let b = 0.5 * (s + 3.0);
        let h = hyp_pfq_full(&HyperParams::new(&[0.5, 0.5, 0.5], &[b, b])?, 0.25, prec)?;
        value += f1 * h.value;
        err += (f1 * h.err).abs();
        scale += (f1 * h.value).abs();
    }
    if b2 != 0.0 {
        let a = -0.5 * s;
        let h = hyp_pfq_full(&HyperParams::new(&[a, a, a], &[1.0, -0.5 * (s - 1.0)])?, 0.25, prec)?;
        value += b2 * h.value;
        err += (b2 * h.err).abs();
        scale += (b2 * h.value).abs();
    }
    Ok(MomentValue::new(value, err + 16.0 * f64::EPSILON * scale, MomentMethod::HypTwoTerm))
}

/// `W_4(s)` as the sum of two ₄F₃ at 1; `s > -2`, not an odd integer.
pub fn w4_two_term(s: f64, prec: &Precision) -> Result<MomentValue> {
    two_term_guard(s, 4)?;
    if !(s > -2.0) {
        return Err(domain(format!("two-term form of W_4 needs s > -2, got {s}")));
    }
    let (b1, b2) = binomials(s)?;
    let f1 = tan_half_pi(s) * b1 * b1 * b1 / 2f64.powf(2.0 * s);
    let mut value = 0.0;
    let mut err = 0.0;
    let mut scale = 0.0;
    if f1 != 0.0 {
        let b = 0.5 * (s + 3.0);
        let h = hyp_pfq_full(&HyperParams::new(&[0.5, 0.5, 0.5, 0.5 * s + 1.0], &[b, b, b])?, 1.0, prec)?;
        value += f1 * h.value;
        err += (f1 * h.err).abs();
        scale += (f1 * h.value).abs();
    }
    if b2 != 0.0 {
        let a = -0.5 * s;
        let h = hyp_pfq_full(&HyperParams::new(&[0.5, a, a, a], &[1.0, 1.0, -0.5 * (s - 1.0)])?, 1.0, prec)?;
        value += b2 * h.value;
        err += (b2 * h.err).abs();
        scale += (b2 * h.value).abs();
    }
    Ok(MomentValue::new(value, err + 16.0 * f64::EPSILON * scale, MomentMethod::HypTwoTerm))
}

/// `W_3(-2k-1) = √3 C(2k,k)² / (2^{4k+1} 3^{2k}) · ₃F₂(½,½,½; k+1,k+1; ¼)`.
pub fn w3_neg_odd(k: usize, prec: &Precision) -> Result<MomentValue> {
    let kf = k as f64;
    let lb = ln_gamma(2.0 * kf + 1.0)? - 2.0 * ln_gamma(kf + 1.0)?;
    let lc = 0.5 * 3f64.ln() + 2.0 * lb - (4.0 * kf + 1.0) * 2f64.ln() - 2.0 * kf * 3f64.ln();
    let c = lc.exp();
    let h = hyp_pfq_full(&HyperParams::new(&[0.5, 0.5, 0.5], &[kf + 1.0, kf + 1.0])?, 0.25, prec)?;
    let value = c * h.value;
    Ok(MomentValue::new(value, c * h.err + 4.0 * f64::EPSILON * (1.0 + lc.abs()) * value, MomentMethod::HypSingle))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn two_term_next_to_odd_integer() {
        for d in [1e-4, 1e-6] {
            for s in [1.0 - d, 1.0 + d] {
                let a = w4_two_term(s, &p()).unwrap();
                let b = crate::moments::direct_moment(4, s, &p()).unwrap();
                assert!((a.value - b.value).abs() < 1e-10, "s={s}: {a:?} {b:?}");
            }
        }
        assert!((tan_half_pi(0.5) - 1.0).abs() < 1e-15);
        let d = 2f64.powi(-30);
        assert!((tan_half_pi(3.0 - d) * 0.5 * PI * d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn even_values() {
        assert!((w3(0.0, &p()).unwrap().value - 1.0).abs() < 1e-13);
        assert!((w3(2.0, &p()).unwrap().value - 3.0).abs() < 1e-12);
        assert!((w3(4.0, &p()).unwrap().value - 15.0).abs() < 1e-11);
        assert!((w3_two_term(2.0, &p()).unwrap().value - 3.0).abs() < 1e-12);
        assert!((w4_two_term(2.0, &p()).unwrap().value - 4.0).abs() < 1e-12);
        assert!((w4_two_term(4.0, &p()).unwrap().value - 28.0).abs() < 1e-11);
    }

    #[test]
    fn single_vs_two_term() {
        for &s in &[-1.5, -0.5, 0.5, 1.5, 2.5] {
            let a = w3(s, &p()).unwrap().value;
            let b = w3_two_term(s, &p()).unwrap().value;
            assert!((a - b).abs() < 1e-10, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn neg_odd_and_single() {
        let a = w3(-1.0, &p()).unwrap().value;
        let b = w3_neg_odd(0, &p()).unwrap().value;
        assert!((a - b).abs() < 1e-12, "{a} {b}");
        let r = w3_neg_odd(6, &p()).unwrap().value / w3_neg_odd(5, &p()).unwrap().value;
        assert!(r > 1.0 / 15.0 && r < 0.2, "{r}");
    }

    #[test]
    fn odd_rejected() {
        assert!(matches!(w3_two_term(1.0, &p()), Err(WalkError::Domain(_))));
        assert!(matches!(w4_two_term(-1.0, &p()), Err(WalkError::Domain(_))));
        assert!(matches!(w3_two_term(-4.0, &p()), Err(WalkError::Pole { .. })));
    }
}
