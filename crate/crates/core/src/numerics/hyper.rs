//! Generalized hypergeometric series `pFq(a; b; z)`.
//!
//! Terms are generated by the ratio recurrence and summed in double-double, so
//! the f64 path is effectively compensated. Unit argument (`p = q + 1`,
//! `|z| = 1`) is handled with the Levin u-transform of the partial sums.

use serde::{Deserialize, Serialize};

use super::dd::DD;
use super::precision::Precision;
use crate::error::{domain, Result, WalkError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl HyperParams {
    pub fn new(upper: &[f64], lower: &[f64]) -> Result<Self> {
        for &b in lower {
            if b <= 0.0 && b == b.floor() {
                return Err(domain(format!("lower parameter {b} is a nonpositive integer")));
            }
        }
        Ok(HyperParams {
            upper: upper.to_vec(),
            lower: lower.to_vec(),
        })
    }

    /// Nonnegative `m` if some upper parameter equals `-m`.
    fn terminating_degree(&self) -> Option<usize> {
        self.upper
            .iter()
            .filter(|&&a| a <= 0.0 && a == a.floor())
            .map(|&a| (-a) as usize)
            .min()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperValue {
    pub value: f64,
    pub err: f64,
    pub terms: usize,
}

/// `pFq` value only.
pub fn hyp_pfq(params: &HyperParams, z: f64, prec: &Precision) -> Result<f64> {
    hyp_pfq_full(params, z, prec).map(|v| v.value)
}

/// `pFq` with error estimate and term count.
pub fn hyp_pfq_full(params: &HyperParams, z: f64, prec: &Precision) -> Result<HyperValue> {
    let up: Vec<DD> = params.upper.iter().map(|&a| DD::from_f64(a)).collect();
    let lo: Vec<DD> = params.lower.iter().map(|&b| DD::from_f64(b)).collect();
    let (v, err, terms) = hyp_core(&up, &lo, params.terminating_degree(), DD::from_f64(z), prec)?;
    Ok(HyperValue {
        value: v.to_f64(),
        err: err.max(f64::EPSILON * v.to_f64().abs()),
        terms,
    })
}

/// Double-double parameters and argument; returns value and error estimate.
pub fn hyp_pfq_dd(upper: &[DD], lower: &[DD], z: DD, prec: &Precision) -> Result<(DD, f64)> {
    for b in lower {
        let f = b.to_f64();
        if f <= 0.0 && *b == DD::from_f64(f.floor()) {
            return Err(domain("lower parameter is a nonpositive integer"));
        }
    }
    let term_deg = upper
        .iter()
        .filter(|a| {
            let f = a.to_f64();
            f <= 0.0 && **a == DD::from_f64(f.floor())
        })
        .map(|a| (-a.to_f64()) as usize)
        .min();
    hyp_core(upper, lower, term_deg, z, prec).map(|(v, e, _)| (v, e))
}

fn next_term(t: DD, n: usize, upper: &[DD], lower: &[DD], z: DD) -> DD {
    let nd = DD::from_f64(n as f64);
    let mut num = z;
    for &a in upper {
        num = num * (a + nd);
    }
    let mut den = DD::from_f64((n + 1) as f64);
    for &b in lower {
        den = den * (b + nd);
    }
    t * num / den
}

fn hyp_core(
    upper: &[DD],
    lower: &[DD],
    term_deg: Option<usize>,
    z: DD,
    prec: &Precision,
) -> Result<(DD, f64, usize)> {
    let zf = z.to_f64();
    if !zf.is_finite() {
        return Err(domain("hypergeometric argument must be finite"));
    }
    let tol = prec.effective_tol();
    let eps = if prec.is_double_double() { 1e-31 } else { 1.1e-16 };
    let p = upper.len();
    let q = lower.len();

    if let Some(m) = term_deg {
        // polynomial: exact number of terms
        let mut t = DD::ONE;
        let mut s = DD::ONE;
        let mut abs_sum = 1.0;
        for n in 0..m {
            t = next_term(t, n, upper, lower, z);
            s += t;
            abs_sum += t.hi.abs();
        }
        return Ok((s, eps * abs_sum, m + 1));
    }

    if p > q + 1 && zf != 0.0 {
        return Err(domain(format!("{p}F{q} series diverges for z != 0")));
    }
    if p == q + 1 {
        if zf.abs() > 1.0 {
            return Err(domain(format!("|z| = {} > 1 needs analytic continuation", zf.abs())));
        }
        if zf.abs() == 1.0 {
            let excess: f64 = lower.iter().map(|b| b.to_f64()).sum::<f64>()
                - upper.iter().map(|a| a.to_f64()).sum::<f64>();
            if excess <= 0.0 {
                return Err(domain(format!("series diverges at |z| = 1 (parameter excess {excess})")));
            }
            return unit_argument(upper, lower, z, tol);
        }
    }

    let mut t = DD::ONE;
    let mut s = DD::ONE;
    let mut abs_sum = 1.0;
    let mut small = 0;
    for n in 0..prec.max_terms {
        let tn = next_term(t, n, upper, lower, z);
        s += tn;
        abs_sum += tn.hi.abs();
        if tn.hi.abs() <= tol * s.hi.abs() || tn.hi == 0.0 {
            small += 1;
            if small >= 3 {
                // geometric tail bound from the current ratio
                let t2 = next_term(tn, n + 1, upper, lower, z);
                let r = if tn.hi == 0.0 { 0.0 } else { (t2.hi / tn.hi).abs() };
                let rho = r.max(if p == q + 1 { zf.abs() } else { 0.0 });
                let tail = if rho < 1.0 {
                    tn.hi.abs() * rho / (1.0 - rho)
                } else {
                    tn.hi.abs() * n as f64
                };
                return Ok((s, tail + eps * abs_sum, n + 2));
            }
        } else {
            small = 0;
        }
        t = tn;
    }
    Err(WalkError::NonConvergence { what: "hyp_pfq", terms: prec.max_terms })
}

fn unit_argument(upper: &[DD], lower: &[DD], z: DD, tol: f64) -> Result<(DD, f64, usize)> {
    const KMAX: usize = 44;
    let mut terms = Vec::with_capacity(KMAX + 1);
    let mut t = DD::ONE;
    terms.push(t);
    for n in 0..KMAX {
        t = next_term(t, n, upper, lower, z);
        terms.push(t);
    }
    let (v, err) = levin_u(&terms, tol)?;
    if err <= 1e3 * tol * v.abs().to_f64() {
        Ok((v, err, terms.len()))
    } else {
        Err(WalkError::SlowConvergence { what: "hyp_pfq at unit argument", err, tol })
    }
}

/// Levin u-transform (β = 1) of the series with the given terms, returning the
/// best estimate and the difference of successive transforms.
pub fn levin_u(terms: &[DD], tol: f64) -> Result<(DD, f64)> {
    let n = terms.len();
    if n < 3 {
        return Err(domain("levin_u needs at least three terms"));
    }
    let mut partial = Vec::with_capacity(n);
    let mut s = DD::ZERO;
    for &t in terms {
        s += t;
        partial.push(s);
    }
    if terms.iter().skip(1).all(|t| t.hi == 0.0) {
        return Ok((partial[0], 0.0));
    }
    let mut prev: Option<DD> = None;
    let mut best = (partial[n - 1], f64::INFINITY);
    let mut hits = 0;
    for k in 1..n {
        let mut num = DD::ZERO;
        let mut den = DD::ZERO;
        let mut binom = DD::ONE;
        let kp1 = DD::from_f64((k + 1) as f64);
        for j in 0..=k {
            if j > 0 {
                binom = binom.mul_f64((k + 1 - j) as f64) / DD::from_f64(j as f64);
            }
            let w = (DD::from_f64((j + 1) as f64) / kp1).powi(k as i32 - 1);
            let omega = terms[j].mul_f64((j + 1) as f64);
            if omega.hi == 0.0 {
                continue;
            }
            let c = binom * w / omega;
            let c = if j % 2 == 1 { -c } else { c };
            num += c * partial[j];
            den += c;
        }
        let l = num / den;
        if let Some(p) = prev {
            let d = (l - p).abs().to_f64();
            if d < best.1 {
                best = (l, d);
            }
            if d <= tol * l.abs().to_f64() {
                hits += 1;
                if hits >= 2 {
                    return Ok((l, d));
                }
            } else {
                hits = 0;
            }
        }
        prev = Some(l);
    }
    Ok(best)
}

/// `Re ₃F₂(½,½,½; 5/6,7/6; z)` for `z > 1`, through the logarithmic
/// continuation in terms of series in `1/z`.
pub fn hyp32_log_continuation(z: f64, prec: &Precision) -> Result<f64> {
    hyp32_log_continuation_full(z, prec).map(|v| v.value)
}

pub fn hyp32_log_continuation_full(z: f64, prec: &Precision) -> Result<HyperValue> {
    if !(z > 1.0) || !z.is_finite() {
        return Err(domain(format!("log continuation needs z > 1, got {z}")));
    }
    let tol = prec.effective_tol();
    let w = DD::ONE / DD::from_f64(z);
    let third = DD::from_ratio(1, 3);
    let half = DD::from_ratio(1, 2);
    let two_thirds = DD::from_ratio(2, 3);
    let mut c = DD::ONE;
    let mut f_sum = DD::ONE;
    let mut g_sum = DD::ZERO;
    // harmonic numbers H_n, H_{2n}, H_{3n}
    let (mut h1, mut h2, mut h3) = (DD::ZERO, DD::ZERO, DD::ZERO);
    let mut small = 0;
    let mut terms = 1;
    let mut last = (0.0, 0.0);
    for n in 0..prec.max_terms {
        let nd = DD::from_f64(n as f64);
        let np1 = DD::from_f64((n + 1) as f64);
        c = c * (third + nd) * (half + nd) * (two_thirds + nd) * w / (np1 * np1 * np1);
        let m = (n + 1) as f64;
        h1 += DD::ONE / np1;
        h2 += DD::ONE / DD::from_f64(2.0 * m - 1.0) + DD::ONE / DD::from_f64(2.0 * m);
        h3 += DD::ONE / DD::from_f64(3.0 * m - 2.0)
            + DD::ONE / DD::from_f64(3.0 * m - 1.0)
            + DD::ONE / DD::from_f64(3.0 * m);
        let h = h1.mul_f64(5.0) - h2.mul_f64(2.0) - h3.mul_f64(3.0);
        let gt = c * h;
        f_sum += c;
        g_sum += gt;
        terms += 1;
        let scale = f_sum.hi.abs() + g_sum.hi.abs();
        if c.hi.abs() <= tol * scale && gt.hi.abs() <= tol * scale {
            small += 1;
            if small >= 3 {
                last = (c.hi.abs(), gt.hi.abs());
                break;
            }
        } else {
            small = 0;
        }
        if n + 1 == prec.max_terms {
            return Err(WalkError::NonConvergence { what: "hyp32_log_continuation", terms: n + 1 });
        }
    }
    let zd = DD::from_f64(z);
    let root = (zd.mul_f64(3.0)).sqrt();
    let pref = DD::ONE / root.mul_f64(2.0);
    let logt = zd.mul_f64(108.0).ln();
    let v = pref * (logt * f_sum + g_sum);
    let wf = 1.0 / z;
    let tail = (last.0 * logt.to_f64() + last.1 * 1.5) * wf / (1.0 - wf) * pref.to_f64();
    let eps = if prec.is_double_double() { 1e-31 } else { 1.1e-16 };
    Ok(HyperValue {
        value: v.to_f64(),
        err: tail + eps * v.abs().to_f64() * 4.0,
        terms,
    })
}
