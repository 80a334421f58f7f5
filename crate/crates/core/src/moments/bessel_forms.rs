//! Bessel-function integral representations of `W_n(s)`.
//!
//! For `n ∈ {3, 4}` the moments are integrals of `K_0^{n-1} I_0`, which decay
//! exponentially. For general `n` the `J_0^n` form with `k` derivatives is
//! used; it is also differentiated in `s` under the integral sign.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{MomentMethod, MomentValue};
use crate::error::{domain, Result, WalkError};
use crate::numerics::bessel::j0_j1;
use crate::numerics::gamma::{digamma, ln_gamma, trigamma};
use crate::numerics::modbessel::{i0e, k0e, small_t_coefficients};
use crate::numerics::oscillatory::{integrate_bessel_products, BesselFactor, BesselProduct, OscillatoryIntegral};
use crate::numerics::quad::GaussLegendre;
use crate::numerics::sum::CompensatedSum;
use crate::numerics::Precision;

const SMALL_T: f64 = 0.5;
const SMALL_T_TERMS: usize = 24;

/// Series in `t²` whose coefficients are polynomials in `log t`:
/// `by_log[l][j]` multiplies `log^l t · t^{2j}`.
#[derive(Clone, Debug)]
struct LogSeries {
    by_log: Vec<Vec<f64>>,
}

impl LogSeries {
    fn mul(&self, other: &LogSeries, terms: usize) -> LogSeries {
        let mut out = vec![vec![0.0; terms]; self.by_log.len() + other.by_log.len() - 1];
        for (l1, p) in self.by_log.iter().enumerate() {
            for (l2, q) in other.by_log.iter().enumerate() {
                for (j1, a) in p.iter().enumerate() {
                    for (j2, b) in q.iter().enumerate().take(terms.saturating_sub(j1)) {
                        out[l1 + l2][j1 + j2] += a * b;
                    }
                }
            }
        }
        LogSeries { by_log: out }
    }
}

/// `∫_0^δ t^{a-1} log^l t dt` for `a > 0`.
fn log_power_integral(a: f64, l: usize, delta: f64) -> f64 {
    let ld = delta.ln();
    let mut fact_ratio = 1.0; // l!/(l-i)!
    let mut s = 0.0;
    for i in 0..=l {
        if i > 0 {
            fact_ratio *= (l + 1 - i) as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * fact_ratio * ld.powi((l - i) as i32) / a.powi(i as i32 + 1);
    }
    delta.powf(a) * s
}

/// `∫_0^∞ t^p K_0(t)^m I_0(t)^q dt` with `p > -1` and `m > q`.
pub(crate) fn k0_i0_moment(p: f64, m: usize, q: usize) -> Result<(f64, f64)> {
    if !(p > -1.0) || m <= q {
        return Err(domain(format!("K0^{m} I0^{q} t^{p} is not integrable")));
    }
    // (0, δ]: expand and integrate term by term
    let (c, a, b) = small_t_coefficients(SMALL_T_TERMS);
    let k0s = LogSeries { by_log: vec![b, a] };
    let i0s = LogSeries { by_log: vec![c] };
    let mut prod = LogSeries { by_log: vec![{
        let mut one = vec![0.0; SMALL_T_TERMS];
        one[0] = 1.0;
        one
    }] };
    for _ in 0..m {
        prod = prod.mul(&k0s, SMALL_T_TERMS);
    }
    for _ in 0..q {
        prod = prod.mul(&i0s, SMALL_T_TERMS);
    }
    let mut near = CompensatedSum::new();
    let mut last = 0.0;
    for (l, coeffs) in prod.by_log.iter().enumerate() {
        for (j, &cj) in coeffs.iter().enumerate() {
            let term = cj * log_power_integral(p + 1.0 + 2.0 * j as f64, l, SMALL_T);
            near.add(term);
            if j + 1 == coeffs.len() {
                last += term.abs();
            }
        }
    }
    // (δ, T]: exponentially scaled integrand, Gauss-Legendre panels
    let decay = (m - q) as f64;
    let f = |t: f64| -> f64 {
        let log_mag = p * t.ln() - decay * t;
        k0e(t).powi(m as i32) * i0e(t).powi(q as i32) * log_mag.exp()
    };
    let gl = GaussLegendre::gl20();
    let mut far = CompensatedSum::new();
    let mut lo = SMALL_T;
    let peak = (p / decay).max(1.0);
    let mut tail_bound: f64;
    loop {
        let width = if lo < 4.0 { 0.5 } else { 1.0 + 0.1 * lo.min(peak) };
        let hi = lo + width;
        let v = gl.integrate(&f, lo, hi);
        far.add(v);
        lo = hi;
        if lo > peak + 5.0 {
            // beyond the peak the integrand decays at least like e^{-decay·t/2}
            let fv = f(lo);
            tail_bound = 2.0 * fv / (decay - p.max(0.0) / lo).max(0.5 * decay);
            if tail_bound < 1e-18 * far.value().abs() {
                break;
            }
        }
        if lo > 2000.0 {
            return Err(WalkError::NonConvergence { what: "K0/I0 moment tail", terms: 0 });
        }
    }
    let value = near.value() + far.value();
    let err = last + tail_bound + 1e-15 * value.abs();
    Ok((value, err))
}

/// `W_3(s)` (`n = 3`) or `W_4(s)` (`n = 4`) from the `K_0`/`I_0` integrals,
/// `s > -2`.
pub fn bessel_moment(n: usize, s: f64, _prec: &Precision) -> Result<MomentValue> {
    if !(s > -2.0) || !s.is_finite() {
        return Err(domain(format!("bessel_moment needs s > -2, got {s}")));
    }
    let lg = ln_gamma(0.5 * s + 1.0)?;
    let (lc, m) = match n {
        3 => ((s + 1.5) * 3f64.ln() - PI.ln() - s * 2f64.ln() - 2.0 * lg, 2),
        4 => ((s + 2.0) * 4f64.ln() - 2.0 * PI.ln() - 2.0 * lg, 3),
        _ => return Err(domain(format!("bessel_moment covers n = 3, 4, got {n}"))),
    };
    let (v, e) = k0_i0_moment(s + 1.0, m, 1)?;
    let c = lc.exp();
    Ok(MomentValue::new(c * v, c * e + 4.0 * f64::EPSILON * (1.0 + lc.abs()) * (c * v).abs(), MomentMethod::BesselIntegral))
}

/// `W_3(-2k-1) = (4/π³)(2^k k!/(2k)!)² ∫ t^{2k} K_0³`.
pub fn kn_neg_odd(k: usize) -> Result<MomentValue> {
    let kf = k as f64;
    let lc = (4.0 / PI.powi(3)).ln()
        + 2.0 * (kf * 2f64.ln() + ln_gamma(kf + 1.0)? - ln_gamma(2.0 * kf + 1.0)?);
    let (v, e) = k0_i0_moment(2.0 * kf, 3, 0)?;
    let c = lc.exp();
    Ok(MomentValue::new(c * v, c * e, MomentMethod::BesselIntegral))
}

/// `(-(1/x) d/dx)^k J_0(x)^n` as `Σ coef · J_0^a J_1^b x^{-c}`.
fn derivative_terms(n: usize, k: usize) -> Vec<(f64, usize, usize, usize)> {
    let mut cur: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
    cur.insert((n, 0, 0), 1.0);
    for _ in 0..k {
        let mut next: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
        for (&(a, b, c), &v) in &cur {
            if a > 0 {
                *next.entry((a - 1, b + 1, c + 1)).or_default() += v * a as f64;
            }
            if b > 0 {
                *next.entry((a + 1, b - 1, c + 1)).or_default() -= v * b as f64;
            }
            if b + c > 0 {
                *next.entry((a, b, c + 2)).or_default() += v * (b + c) as f64;
            }
        }
        next.retain(|_, v| *v != 0.0);
        cur = next;
    }
    cur.into_iter().map(|((a, b, c), v)| (v, a, b, c)).collect()
}

/// Coefficients of `J_0(x)^n = Σ e_m x^{2m}`.
fn j0_power_series(n: usize, terms: usize) -> Vec<f64> {
    let mut j0 = vec![0.0; terms];
    let mut c = 1.0;
    for (j, slot) in j0.iter_mut().enumerate() {
        if j > 0 {
            c *= -0.25 / (j * j) as f64;
        }
        *slot = c;
    }
    let mut out = vec![0.0; terms];
    out[0] = 1.0;
    for _ in 0..n {
        let mut next = vec![0.0; terms];
        for (i, a) in out.iter().enumerate() {
            for (j, b) in j0.iter().enumerate().take(terms - i) {
                next[i + j] += a * b;
            }
        }
        out = next;
    }
    out
}

const SERIES_CUT: f64 = 2.0;
const NEAR_CUT: f64 = 0.5;
const SERIES_TERMS: usize = 48;

/// Pieces of the `J_0^n` integral at a given `s`: `W^{(j)}(s)` follows from
/// the prefactor's log-derivatives and `I_j = ∫ (-log x)^j x^{2k-s-1} g_k(x) dx`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BroadhurstParts {
    pub n: usize,
    pub s: f64,
    pub k: usize,
    /// `A(s) = 2^{s+1-k} Γ(1+s/2) / Γ(k-s/2)`.
    pub prefactor: f64,
    /// `(log A)'` and `(log A)''`.
    pub dlog: f64,
    pub d2log: f64,
    /// `I_0, I_1, I_2` (only as many as requested).
    pub integrals: Vec<f64>,
    pub errors: Vec<f64>,
}

impl BroadhurstParts {
    pub fn compute(n: usize, s: f64, order: usize, tol: f64) -> Result<Self> {
        if n < 2 || !(s > -2.0) || !s.is_finite() || order > 2 {
            return Err(domain(format!("J0 integral needs n ≥ 2, s > -2, order ≤ 2 (n={n}, s={s})")));
        }
        let k = ((0.5 * s).floor() + 1.0).max(0.0) as usize;
        let kf = k as f64;
        let half = 0.5 * s;
        let lnpref = (s + 1.0 - kf) * 2f64.ln() + ln_gamma(1.0 + half)? - ln_gamma(kf - half)?;
        let prefactor = lnpref.exp();
        let dlog = 2f64.ln() + 0.5 * digamma(1.0 + half)? + 0.5 * digamma(kf - half)?;
        let d2log = 0.25 * trigamma(1.0 + half)? - 0.25 * trigamma(kf - half)?;

        let terms = derivative_terms(n, k);
        let e = j0_power_series(n, SERIES_TERMS);
        // g_k near 0: Σ_{m≥k} e_m (-2)^k m!/(m-k)! x^{2(m-k)}
        let mut g_series = vec![0.0; SERIES_TERMS - k];
        for m in k..SERIES_TERMS {
            let mut f = 1.0;
            for i in 0..k {
                f *= -2.0 * (m - i) as f64;
            }
            g_series[m - k] = e[m] * f;
        }
        let g = |x: f64| -> f64 {
            if x < SERIES_CUT {
                let u = x * x;
                let mut acc = 0.0;
                for c in g_series.iter().rev() {
                    acc = acc * u + c;
                }
                acc
            } else {
                let (j0, j1) = j0_j1(x);
                let inv = 1.0 / x;
                terms
                    .iter()
                    .map(|&(v, a, b, c)| v * j0.powi(a as i32) * j1.powi(b as i32) * inv.powi(c as i32))
                    .sum()
            }
        };
        let power = 2.0 * kf - s - 1.0;
        let mut integrals = Vec::new();
        let mut errors = Vec::new();
        for lp in 0..=order {
            let sign = if lp % 2 == 0 { 1.0 } else { -1.0 };
            // [0, NEAR_CUT] term by term: x^power can be close to 1/x, which
            // no quadrature resolves
            let near: f64 = g_series
                .iter()
                .enumerate()
                .map(|(m, c)| sign * c * log_power_integral(power + 2.0 * m as f64 + 1.0, lp, NEAR_CUT))
                .sum();
            let integrand = |x: f64| -> f64 {
                if x < NEAR_CUT {
                    0.0
                } else {
                    sign * x.powf(power) * x.ln().powi(lp as i32) * g(x)
                }
            };
            let far = terms
                .iter()
                .map(|&(v, a, b, c)| {
                    let mut factors = vec![BesselFactor::j0(1.0); a];
                    factors.extend(std::iter::repeat(BesselFactor::j1(1.0)).take(b));
                    BesselProduct { coeff: sign * v, power: power - c as f64, log_power: lp as u32, factors }
                })
                .collect();
            let spec = OscillatoryIntegral {
                integrand: &integrand,
                far,
                singular_at_zero: false,
                breakpoints: vec![NEAR_CUT, SERIES_CUT],
            };
            let r = integrate_bessel_products(&spec, tol)?;
            integrals.push(near + r.value);
            errors.push(r.err);
        }
        Ok(BroadhurstParts { n, s, k, prefactor, dlog, d2log, integrals, errors })
    }

    /// `W_n^{(j)}(s)` for `j ≤` the computed order, with an error estimate.
    pub fn derivative(&self, j: usize) -> (f64, f64) {
        let a = self.prefactor;
        let i = &self.integrals;
        let e = &self.errors;
        match j {
            0 => (a * i[0], a * e[0]),
            1 => (a * (self.dlog * i[0] + i[1]), a * (self.dlog.abs() * e[0] + e[1])),
            _ => (
                a * ((self.d2log + self.dlog * self.dlog) * i[0] + 2.0 * self.dlog * i[1] + i[2]),
                a * ((self.d2log + self.dlog * self.dlog).abs() * e[0] + 2.0 * self.dlog.abs() * e[1] + e[2]),
            ),
        }
    }
}

/// `W_n^{(order)}(s)` from the `J_0^n` integral, `s > -2`, `order ≤ 2`.
pub fn broadhurst_integral(n: usize, s: f64, order: usize, prec: &Precision) -> Result<MomentValue> {
    let tol = prec.target_rel_error.max(1e-15);
    let parts = BroadhurstParts::compute(n, s, order, tol)?;
    let (v, e) = parts.derivative(order);
    let err = e + 1e-15 * v.abs();
    Ok(MomentValue::new(v, err, MomentMethod::BesselIntegral))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::adaptive_gk;

    #[test]
    fn log_power_integral_matches_quadrature() {
        for &(a, l) in &[(0.3, 0usize), (1.5, 2), (0.05, 3)] {
            // t = δ e^{-y}
            let d: f64 = 0.5;
            let f = |y: f64| d.powf(a) * (-a * y).exp() * (d.ln() - y).powi(l as i32);
            let q = adaptive_gk(&f, 0.0, 80.0 / a, 1e-13, 40).unwrap().value;
            let c = log_power_integral(a, l, 0.5);
            assert!((q - c).abs() < 1e-10 * c.abs().max(1.0), "a={a} l={l}: {q} {c}");
        }
    }

    #[test]
    fn derivative_terms_single_step() {
        // -(1/x) d/dx J0^3 = 3 J0² J1 / x
        assert_eq!(derivative_terms(3, 1), vec![(3.0, 2, 1, 1)]);
    }

    #[test]
    fn bessel_moment_trivial() {
        let p = Precision::default();
        assert!((bessel_moment(4, 0.0, &p).unwrap().value - 1.0).abs() < 1e-12);
        assert!((bessel_moment(3, 2.0, &p).unwrap().value - 3.0).abs() < 1e-12);
        assert!((bessel_moment(4, 4.0, &p).unwrap().value - 28.0).abs() < 1e-10);
        assert!(bessel_moment(3, -2.0, &p).is_err());
    }

    #[test]
    fn j0_form_just_below_even() {
        // the x^power weight approaches 1/x here
        let p = Precision::default();
        for (s, want) in [(2.0 - 1e-6, 5.0), (1.93, f64::NAN), (4.0 - 1e-4, 45.0)] {
            let v = broadhurst_integral(5, s, 0, &p).unwrap().value;
            let u = broadhurst_integral(5, s + 2e-9, 0, &p).unwrap().value;
            assert!((v - u).abs() < 1e-7 * v, "s={s}: {v} {u}");
            if want.is_finite() {
                assert!((v - want).abs() < 1e-3 * want, "s={s}: {v}");
            }
        }
    }

    #[test]
    fn j0_form_even_values() {
        let p = Precision::default();
        for (n, s, want) in [(3, 0.0, 1.0), (3, 2.0, 3.0), (5, 2.0, 5.0), (5, 4.0, 45.0), (4, 1.0, 0.0)] {
            let v = broadhurst_integral(n, s, 0, &p).unwrap().value;
            if want > 0.0 {
                assert!((v - want).abs() < 1e-10 * want, "n={n} s={s}: {v}");
            } else {
                let b = bessel_moment(4, 1.0, &p).unwrap().value;
                assert!((v - b).abs() < 1e-10, "W4(1): {v} vs {b}");
            }
        }
    }
}
