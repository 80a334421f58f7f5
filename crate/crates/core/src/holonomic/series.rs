//! Truncated log-power series `Σ_k (a_k + b_k log x) x^{α+k}` and the action
//! of `θ`-operators on them.

use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::theta::ThetaOperator;
use crate::exact::{rat, Poly};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogPowerSeries {
    #[serde(serialize_with = "ser_ratio")]
    pub alpha: Rational64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Empirical radius of convergence.
    pub radius: f64,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl LogPowerSeries {
    pub fn len(&self) -> usize {
        self.a.len().max(self.b.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn alpha_f64(&self) -> f64 {
        *self.alpha.numer() as f64 / *self.alpha.denom() as f64
    }

    /// Partial sum at `x > 0` and the size of the last included term pair
    /// as a crude truncation indicator.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let lx = x.ln();
        let alpha = self.alpha_f64();
        let mut sum = crate::numerics::sum::CompensatedSum::new();
        let mut last = 0.0;
        for k in 0..self.len() {
            let a = self.a.get(k).copied().unwrap_or(0.0);
            let b = self.b.get(k).copied().unwrap_or(0.0);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let t = (a + b * lx) * x.powf(alpha + k as f64);
            sum.add(t);
            last = t.abs();
        }
        (sum.value(), last)
    }

    /// `d/dx` of the partial sum.
    pub fn eval_derivative(&self, x: f64) -> f64 {
        let lx = x.ln();
        let alpha = self.alpha_f64();
        let mut s = 0.0;
        for k in 0..self.len() {
            let a = self.a.get(k).copied().unwrap_or(0.0);
            let b = self.b.get(k).copied().unwrap_or(0.0);
            let e = alpha + k as f64;
            s += ((a + b * lx) * e + b) * x.powf(e - 1.0);
        }
        s
    }
}

/// Exact counterpart of [`LogPowerSeries`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExactLogSeries {
    pub alpha: BigRational,
    pub a: Vec<BigRational>,
    pub b: Vec<BigRational>,
}

impl ExactLogSeries {
    pub fn len(&self) -> usize {
        self.a.len().max(self.b.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn get(v: &[BigRational], i: usize) -> BigRational {
    v.get(i).cloned().unwrap_or_else(BigRational::zero)
}

/// Applies `op` to the series; returns the plain and log coefficient lists of
/// the image, indexed relative to `α`. Entries past the input length are
/// incomplete and omitted.
pub fn apply_exact(op: &ThetaOperator, s: &ExactLogSeries) -> (Vec<BigRational>, Vec<BigRational>) {
    let len = s.len();
    let mut pa = vec![BigRational::zero(); len];
    let mut pb = vec![BigRational::zero(); len];
    for (m, p) in op.terms() {
        let dp: Poly = p.derivative();
        for k in 0..len.saturating_sub(m) {
            let (a, b) = (get(&s.a, k), get(&s.b, k));
            if a.is_zero() && b.is_zero() {
                continue;
            }
            // θ acts on x^e(a + b log x) as e plus differentiation in log x
            let e = &s.alpha + rat(k as i64);
            let pe = p.eval(&e);
            pa[k + m] += &pe * &a + dp.eval(&e) * &b;
            pb[k + m] += pe * b;
        }
    }
    (pa, pb)
}

/// Largest coefficient of `op·series` among orders `≤ K`, exactly.
pub fn annihilation_residual_exact(op: &ThetaOperator, s: &ExactLogSeries, k_max: usize) -> BigRational {
    let (pa, pb) = apply_exact(op, s);
    pa.iter()
        .zip(&pb)
        .take(k_max + 1)
        .flat_map(|(x, y)| [x.abs(), y.abs()])
        .fold(BigRational::zero(), |m, c| if c > m { c } else { m })
}

/// Largest coefficient magnitude of `op·series` among orders `≤ K`.
pub fn annihilation_residual(op: &ThetaOperator, s: &LogPowerSeries, k_max: usize) -> f64 {
    let len = s.len();
    let alpha = *s.alpha.numer() as f64 / *s.alpha.denom() as f64;
    let mut pa = vec![0.0; len];
    let mut pb = vec![0.0; len];
    for (m, p) in op.terms() {
        let dp = p.derivative();
        for k in 0..len.saturating_sub(m) {
            let a = s.a.get(k).copied().unwrap_or(0.0);
            let b = s.b.get(k).copied().unwrap_or(0.0);
            let e = alpha + k as f64;
            let pe = p.eval_f64(e);
            pa[k + m] += pe * a + dp.eval_f64(e) * b;
            pb[k + m] += pe * b;
        }
    }
    pa.iter()
        .zip(&pb)
        .take(k_max + 1)
        .map(|(x, y)| x.abs().max(y.abs()))
        .fold(0.0, f64::max)
}

/// Exact series to floating point with the given prefactor on each part.
pub fn to_float(s: &ExactLogSeries, scale_a: f64, scale_b: f64, radius: f64) -> LogPowerSeries {
    let alpha = Rational64::new(
        s.alpha.numer().to_i64().unwrap_or(0),
        s.alpha.denom().to_i64().unwrap_or(1),
    );
    LogPowerSeries {
        alpha,
        a: s.a.iter().map(|c| c.to_f64().unwrap_or(f64::NAN) * scale_a).collect(),
        b: s.b.iter().map(|c| c.to_f64().unwrap_or(f64::NAN) * scale_b).collect(),
        radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_on_log_monomial() {
        // θ(x² log x) = 2x² log x + x²
        let op = ThetaOperator::from_terms([(0, Poly::from_i64(&[0, 1]))]);
        let s = ExactLogSeries { alpha: rat(2), a: vec![rat(0)], b: vec![rat(1)] };
        let (pa, pb) = apply_exact(&op, &s);
        assert_eq!(pa[0], rat(1));
        assert_eq!(pb[0], rat(2));
    }

    #[test]
    fn exponential_series_annihilated() {
        // (θ - x)·e^x = 0
        let op = ThetaOperator::from_terms([(0, Poly::x()), (1, Poly::from_i64(&[-1]))]);
        let mut a = vec![rat(1)];
        for k in 1..20 {
            let prev: BigRational = a[k - 1].clone();
            a.push(prev / rat(k as i64));
        }
        let s = ExactLogSeries { alpha: rat(0), a, b: vec![] };
        assert!(annihilation_residual_exact(&op, &s, 18).is_zero());
        let f = to_float(&s, 1.0, 1.0, f64::INFINITY);
        assert!(annihilation_residual(&op, &f, 18) < 1e-15);
        assert!((f.eval(1.0).0 - std::f64::consts::E).abs() < 1e-15);
    }
}
