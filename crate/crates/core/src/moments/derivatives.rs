use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::bessel_forms::broadhurst_integral;
use super::exact::even_moments;
use super::hyper_forms::{w3_single, w4_two_term};
use super::{MomentMethod, MomentValue};
use crate::error::{domain, Result, WalkError};
use crate::numerics::dd::DD;
use crate::numerics::gamma::{li4_half, zeta3, zeta_even, EULER_GAMMA};
use crate::numerics::{clausen, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMethod {
    /// Clausen / zeta closed forms (`n ∈ {3,4}`, `at ∈ {0,2}`).
    Closed,
    /// `log n − Σ_m (1/2m) Σ_k C(m,k)(−1)^k W_n(2k)/n^{2k}` (`at = 0`).
    Series,
    /// `½log n − γ/2 − Σ_{m≥2} (1/2m) Σ_k C(m,k)(−1)^k W_n(2k)/(k! n^k)` (`at = 0`).
    SeriesAlt,
    /// The `J_0^n` integral differentiated under the integral sign.
    Bessel,
}

fn unavailable(method: &str, n: usize, at: f64) -> WalkError {
    WalkError::MethodUnavailable { method: method.to_string(), context: format!("n={n}, at={at}") }
}

fn cl_pi3() -> f64 {
    clausen(PI / 3.0, &Precision::default()).expect("Cl(π/3)")
}

/// `W_n'(at)` for `n ∈ {3,…,6}` and `at ∈ {0, 2, 4}`.
pub fn wn_prime(n: usize, at: f64, method: DerivativeMethod, prec: &Precision) -> Result<MomentValue> {
    if !(3..=6).contains(&n) || ![0.0, 2.0, 4.0].contains(&at) {
        return Err(domain(format!("wn_prime covers n ∈ 3..=6, at ∈ {{0,2,4}} (n={n}, at={at})")));
    }
    match method {
        DerivativeMethod::Closed => {
            let v = match (n, at as i32) {
                (3, 0) => cl_pi3() / PI,
                (3, 2) => 2.0 + 3.0 / PI * cl_pi3() - 1.5 * 3f64.sqrt() / PI,
                (4, 0) => 3.5 * zeta3() / (PI * PI),
                (4, 2) => 3.0 + (14.0 * zeta3() - 12.0) / (PI * PI),
                _ => return Err(unavailable("closed", n, at)),
            };
            Ok(MomentValue::new(v, 4.0 * f64::EPSILON * v.abs(), MomentMethod::ClosedForm))
        }
        DerivativeMethod::Series | DerivativeMethod::SeriesAlt => {
            if at != 0.0 {
                return Err(unavailable("series", n, at));
            }
            let (v, e) = if method == DerivativeMethod::Series {
                binomial_series_derivative(n, SERIES_TERMS)?
            } else {
                laguerre_series_derivative(n, SERIES_TERMS)?
            };
            Ok(MomentValue::new(v, e, MomentMethod::MomentSeries))
        }
        DerivativeMethod::Bessel => broadhurst_integral(n, at, 1, prec),
    }
}

const SERIES_TERMS: usize = 400;

/// Inner sums `Σ_k C(m,k)(−1)^k w_k x_k` for `m = 1..=m_max` in exact arithmetic.
fn inner_sums(w: &[BigInt], weight: impl Fn(usize) -> BigRational, m_max: usize) -> Vec<f64> {
    let scaled: Vec<BigRational> = w.iter().enumerate().map(|(k, wk)| weight(k) * BigRational::from_integer(wk.clone())).collect();
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    let mut out = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut next = vec![BigInt::one(); m + 1];
        for k in 1..m {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
        let mut acc = BigRational::zero();
        for (k, c) in row.iter().enumerate() {
            let t = &scaled[k] * BigRational::from_integer(c.clone());
            if k % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        out.push(acc.to_f64().unwrap_or(f64::NAN));
    }
    out
}

/// Richardson extrapolation in `1/M` over `M = M_max/2^j`.
fn richardson(partial: &[f64], m_max: usize, levels: usize) -> (f64, f64) {
    let ms: Vec<usize> = (0..levels).rev().map(|j| m_max >> j).collect();
    let mut table: Vec<Vec<f64>> = Vec::new();
    for (j, &m) in ms.iter().enumerate() {
        let mut row = vec![partial[m - 1]];
        for i in 1..=j {
            let f = 2f64.powi(i as i32);
            let v = (f * row[i - 1] - table[j - 1][i - 1]) / (f - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    let last = &table[levels - 1];
    let prev = &table[levels - 2];
    // best column: smallest change between the last two rows
    let mut best = (last[0], (last[0] - prev[0]).abs());
    for i in 1..levels - 1 {
        let d = (last[i] - prev[i]).abs();
        if d < best.1 {
            best = (last[i], d);
        }
    }
    best
}

/// `W_n'(0)` from the binomial series in the even moments, with Richardson
/// extrapolation of the `O(1/M)` tail. Returns value and error estimate.
pub fn binomial_series_derivative(n: usize, m_max: usize) -> Result<(f64, f64)> {
    if n < 2 || m_max < 64 {
        return Err(domain("binomial series needs n ≥ 2 and at least 64 terms"));
    }
    let w = even_moments(n, m_max + 1)?;
    let n2 = BigInt::from(n * n);
    let mut pow = BigInt::one();
    let mut pows = Vec::with_capacity(m_max + 1);
    for _ in 0..=m_max {
        pows.push(pow.clone());
        pow *= &n2;
    }
    let inner = inner_sums(&w, |k| BigRational::new(BigInt::one(), pows[k].clone()), m_max);
    let mut partial = Vec::with_capacity(m_max);
    let mut s = DD::from_f64((n as f64).ln());
    for (i, v) in inner.iter().enumerate() {
        s = s - DD::from_f64(v / (2.0 * (i + 1) as f64));
        partial.push(s.to_f64());
    }
    Ok(richardson(&partial, m_max, 4))
}

/// `W_n'(0)` from the Laguerre-type series; the partial sums oscillate, so the
/// estimate is the mean over the last half of the range.
fn laguerre_series_derivative(n: usize, m_max: usize) -> Result<(f64, f64)> {
    let w = even_moments(n, m_max + 1)?;
    let mut fact = BigInt::one();
    let mut npow = BigInt::one();
    let mut weights = Vec::with_capacity(m_max + 1);
    for k in 0..=m_max {
        if k > 0 {
            fact *= BigInt::from(k);
            npow *= BigInt::from(n);
        }
        weights.push(BigRational::new(BigInt::one(), &fact * &npow));
    }
    let inner = inner_sums(&w, |k| weights[k].clone(), m_max);
    let mut s = 0.5 * (n as f64).ln() - 0.5 * EULER_GAMMA;
    let mut partial = Vec::new();
    for (i, v) in inner.iter().enumerate().skip(1) {
        s -= v / (2.0 * (i + 1) as f64);
        partial.push(s);
    }
    let tail = &partial[partial.len() / 2..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let spread = tail.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    Ok((mean, spread))
}

/// `W_n''(at)` for `n ∈ {3,4}`, `at ∈ {0,2}`.
pub fn wn_doubleprime(n: usize, at: f64, prec: &Precision) -> Result<MomentValue> {
    match (n, at) {
        (3, a) if a == 0.0 => w3_second_at_zero(),
        (4, a) if a == 0.0 => {
            let l2 = LN_2;
            let v = (24.0 * li4_half() - 18.0 * zeta_even(2) + 21.0 * zeta3() * l2 - 6.0 * zeta_even(1) * l2 * l2
                + l2.powi(4))
                / (PI * PI);
            Ok(MomentValue::new(v, 1e-15, MomentMethod::ClosedForm))
        }
        (3, a) if a == 2.0 => {
            let (v, e) = fd_second(&|s| w3_single(s, prec).map(|m| m.value), 2.0, 0.4)?;
            Ok(MomentValue::new(v, e, MomentMethod::HypSingle))
        }
        (4, a) if a == 2.0 => {
            let (v, e) = fd_second(&|s| w4_two_term(s, prec).map(|m| m.value), 2.0, 0.4)?;
            Ok(MomentValue::new(v, e, MomentMethod::HypTwoTerm))
        }
        _ => Err(domain(format!("wn_doubleprime covers n ∈ {{3,4}}, at ∈ {{0,2}} (n={n}, at={at})"))),
    }
}

/// `π²/12 − (2/π) Σ C(2n,n)/16^n · H_{n+1/2}/(2n+1)²`.
fn w3_second_at_zero() -> Result<MomentValue> {
    let mut c = DD::ONE;
    let mut odd = DD::ONE; // Σ_{k=1}^{n+1} 1/(2k−1)
    let mut sum = DD::ZERO;
    let two_ln2 = DD::LN_2.mul_f64(2.0);
    for n in 0..200u32 {
        if n > 0 {
            c = c.mul_f64((2 * n - 1) as f64) / DD::from_f64((8 * n) as f64);
            odd += DD::ONE / DD::from_f64((2 * n + 1) as f64);
        }
        let h = odd.mul_f64(2.0) - two_ln2;
        let d = DD::from_f64((2 * n + 1) as f64);
        let t = c * h / (d * d);
        sum += t;
        if t.abs().to_f64() < 1e-33 {
            let v = (DD::PI * DD::PI).to_f64() / 12.0 - 2.0 / PI * sum.to_f64();
            return Ok(MomentValue::new(v, 4.0 * f64::EPSILON, MomentMethod::MomentSeries));
        }
    }
    Err(WalkError::NonConvergence { what: "W_3''(0) series", terms: 200 })
}

/// Second derivative by central differences with Richardson extrapolation
/// over steps `h, h/2, …`.
pub(crate) fn fd_second(f: &dyn Fn(f64) -> Result<f64>, s: f64, h: f64) -> Result<(f64, f64)> {
    let f0 = f(s)?;
    let levels = 6;
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut best = (f64::NAN, f64::INFINITY);
    for j in 0..levels {
        let hj = h / 2f64.powi(j as i32);
        let d = (f(s + hj)? - 2.0 * f0 + f(s - hj)?) / (hj * hj);
        let mut row = vec![d];
        for i in 1..=j {
            let q = 4f64.powi(i as i32);
            row.push((q * row[i - 1] - table[j - 1][i - 1]) / (q - 1.0));
        }
        if j > 0 {
            for i in 0..j {
                let e = (row[i + 1] - table[j - 1][i]).abs();
                if e < best.1 {
                    best = (row[i + 1], e);
                }
            }
        }
        table.push(row);
    }
    Ok(best)
}

/// First derivative, same scheme.
pub(crate) fn fd_first(f: &dyn Fn(f64) -> Result<f64>, s: f64, h: f64) -> Result<(f64, f64)> {
    let levels = 6;
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut best = (f64::NAN, f64::INFINITY);
    for j in 0..levels {
        let hj = h / 2f64.powi(j as i32);
        let d = (f(s + hj)? - f(s - hj)?) / (2.0 * hj);
        let mut row = vec![d];
        for i in 1..=j {
            let q = 4f64.powi(i as i32);
            row.push((q * row[i - 1] - table[j - 1][i - 1]) / (q - 1.0));
        }
        if j > 0 {
            for i in 0..j {
                let e = (row[i + 1] - table[j - 1][i]).abs();
                if e < best.1 {
                    best = (row[i + 1], e);
                }
            }
        }
        table.push(row);
    }
    Ok(best)
}
