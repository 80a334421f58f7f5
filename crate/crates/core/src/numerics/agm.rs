//! Cubic arithmetic-geometric mean.

use super::dd::DD;
use super::precision::Precision;
use super::real::Real;
use crate::error::{domain, Result, WalkError};

/// Runs the cubic iteration, recording the gap `|a_n - b_n|` after each step.
pub fn agm3_generic<T: Real>(a: T, b: T, tol: f64, max_iter: usize, gaps: Option<&mut Vec<f64>>) -> Result<T> {
    let zero = T::zero();
    if a < zero || b < zero {
        return Err(domain("agm3 needs nonnegative arguments"));
    }
    if a == zero && b == zero {
        return Err(domain("agm3 needs at least one positive argument"));
    }
    let mut gaps = gaps;
    let (mut a, mut b) = (a, b);
    if b == zero || a == zero {
        // the iteration is linear with limit 0 in this case
        return Ok(zero);
    }
    let three = T::from_f64(3.0);
    let two = T::from_f64(2.0);
    for _ in 0..max_iter {
        let gap = (a - b).abs();
        if let Some(g) = gaps.as_deref_mut() {
            g.push(gap.to_f64());
        }
        if gap.to_f64() <= tol * a.to_f64().abs() {
            return Ok(a);
        }
        let an = (a + two * b) / three;
        let bn = (b * (a * a + a * b + b * b) / three).cbrt();
        a = an;
        b = bn;
    }
    Err(WalkError::NonConvergence { what: "agm3", terms: max_iter })
}

pub fn agm3(a: f64, b: f64, prec: &Precision) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("agm3 needs finite arguments"));
    }
    if prec.is_double_double() {
        agm3_generic(DD::from_f64(a), DD::from_f64(b), prec.effective_tol(), 64, None).map(DD::to_f64)
    } else {
        agm3_generic(a, b, prec.effective_tol().max(4.0 * f64::EPSILON), 64, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points_and_domain() {
        let p = Precision::default();
        assert_eq!(agm3(5.0, 5.0, &p).unwrap(), 5.0);
        assert_eq!(agm3(12.0, 12.0, &p).unwrap(), 12.0);
        assert!(agm3(-1.0, 2.0, &p).is_err());
        assert_eq!(agm3(3.0, 0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn homogeneous_and_symmetric_limit() {
        let p = Precision::default();
        let m = agm3(1.0, 0.3, &p).unwrap();
        assert!((agm3(7.0, 2.1, &p).unwrap() - 7.0 * m).abs() < 1e-14);
        assert!(m > 0.3 && m < 1.0);
    }

    #[test]
    fn cubic_convergence() {
        let mut gaps = Vec::new();
        agm3_generic(DD::from_f64(1.0), DD::from_f64(0.05), 1e-31, 64, Some(&mut gaps)).unwrap();
        let mut checked = 0;
        for w in gaps.windows(2) {
            if w[0] < 0.1 && w[1] > 1e-30 {
                assert!(w[1] <= 10.0 * w[0].powi(3), "{:?}", w);
                checked += 1;
            }
        }
        assert!(checked >= 1);
    }
}
