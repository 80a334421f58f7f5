use std::f64::consts::PI;
use std::sync::OnceLock;

use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;

use crate::error::{domain, Result, WalkError};
use crate::holonomic::LogPowerSeries;
use crate::moments::{even_moments, residues};
use crate::numerics::Precision;

pub const MAX_SERIES_K: usize = 200;

/// Expansion of `p_n` at 0 with `K` terms `x^{2k+1}`, `k < K`, stored densely
/// from `x^1` (odd offsets are zero).
pub fn series_at_zero(n: usize, k_terms: usize) -> Result<LogPowerSeries> {
    if k_terms > MAX_SERIES_K {
        return Err(WalkError::GuardExceeded(format!("series length {k_terms} > {MAX_SERIES_K}")));
    }
    if k_terms == 0 {
        return Err(domain("series needs at least one term"));
    }
    let dense = |c: &[f64]| -> Vec<f64> {
        let mut v = vec![0.0; 2 * c.len() - 1];
        for (k, &x) in c.iter().enumerate() {
            v[2 * k] = x;
        }
        v
    };
    match n {
        3 => {
            let w = even_moments(3, k_terms)?;
            let c = 2.0 / (PI * 3f64.sqrt());
            let mut nine = num_bigint::BigInt::from(1);
            let mut a = Vec::with_capacity(k_terms);
            for wk in &w {
                let q = BigRational::new(wk.clone(), nine.clone()).to_f64().unwrap_or(f64::NAN);
                a.push(c * q);
                nine *= 9;
            }
            // W_3(2k)/9^k decays like 1/k, so the series in x has radius 1
            Ok(LogPowerSeries { alpha: Rational64::from_integer(1), a: dense(&a), b: vec![], radius: 1.0 })
        }
        4 => {
            let t = residues(4, k_terms, &Precision::default())?;
            let b: Vec<f64> = t.s4.iter().map(|s| -s).collect();
            Ok(LogPowerSeries { alpha: Rational64::from_integer(1), a: dense(&t.r4), b: dense(&b), radius: 2.0 })
        }
        5 => {
            let t = residues(5, k_terms, &Precision::default())?;
            Ok(LogPowerSeries { alpha: Rational64::from_integer(1), a: dense(&t.r5), b: vec![0.0; 2 * k_terms - 1], radius: 3.0 })
        }
        _ => Err(domain(format!("series at 0 available for n = 3, 4, 5, got {n}"))),
    }
}

fn cached(cell: &'static OnceLock<std::result::Result<LogPowerSeries, WalkError>>, n: usize) -> Result<&'static LogPowerSeries> {
    cell.get_or_init(|| series_at_zero(n, MAX_SERIES_K)).as_ref().map_err(Clone::clone)
}

pub(crate) fn p4_series() -> Result<&'static LogPowerSeries> {
    static CELL: OnceLock<std::result::Result<LogPowerSeries, WalkError>> = OnceLock::new();
    cached(&CELL, 4)
}

pub(crate) fn p5_series() -> Result<&'static LogPowerSeries> {
    static CELL: OnceLock<std::result::Result<LogPowerSeries, WalkError>> = OnceLock::new();
    cached(&CELL, 5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficients() {
        let s = series_at_zero(4, 10).unwrap();
        assert!((s.b[0] + 3.0 / (2.0 * PI * PI)).abs() < 1e-15);
        assert!((s.a[0] - 9.0 / (2.0 * PI * PI) * 2f64.ln()).abs() < 1e-15);
        assert_eq!(s.radius, 2.0);
        let s = series_at_zero(5, 30).unwrap();
        assert!(s.b.iter().all(|&b| b == 0.0));
        assert_eq!(s.radius, 3.0);
        let s = series_at_zero(3, 5).unwrap();
        let c = 2.0 / (PI * 3f64.sqrt());
        for (k, w) in [1.0, 3.0, 15.0].iter().enumerate() {
            assert!((s.a[2 * k] - c * w / 9f64.powi(k as i32)).abs() < 1e-16);
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(series_at_zero(4, 201), Err(WalkError::GuardExceeded(_))));
        assert!(series_at_zero(6, 10).is_err());
    }
}
