use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::derivatives::{wn_doubleprime, wn_prime, DerivativeMethod};
use super::exact::even_moments;
use crate::error::{domain, Result, WalkError};
use crate::numerics::gamma::gamma;
use crate::numerics::hyper::hyp32_log_continuation_full;
use crate::numerics::Precision;

pub const MAX_RESIDUE_K: usize = 200;

/// Residue data of `W_4` or `W_5` at the negative even integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueTable {
    pub n: usize,
    /// `s_{4,k} = (3/(2π²)) W_4(2k)/64^k` (n = 4).
    pub s4: Vec<f64>,
    /// `r_{4,k}` (n = 4).
    pub r4: Vec<f64>,
    /// `r_{5,k}`, the residue of `W_5` at `-2k-2` (n = 5).
    pub r5: Vec<f64>,
    pub length: usize,
    /// The conjectured closed form of `r_{5,1}`, kept for comparison with the
    /// value the recurrence forces (n = 5).
    pub r51_conjectural: Option<f64>,
}

fn gamma_quartet(a: [f64; 4]) -> f64 {
    a.iter().map(|&x| gamma(x).expect("positive argument")).product()
}

fn g_low() -> f64 {
    gamma_quartet([1.0 / 15.0, 2.0 / 15.0, 4.0 / 15.0, 8.0 / 15.0])
}

fn g_high() -> f64 {
    gamma_quartet([7.0 / 15.0, 11.0 / 15.0, 13.0 / 15.0, 14.0 / 15.0])
}

/// `r_{5,0}` from the Chowla–Selberg square root of Gamma values.
pub fn r50_chowla_selberg() -> f64 {
    (g_low() / (5.0 * g_high())).sqrt() / (2.0 * PI * PI)
}

/// `r_{5,0} = (√5/40) Γ(1/15)Γ(2/15)Γ(4/15)Γ(8/15)/π⁴`.
pub fn r50_gamma_form() -> f64 {
    5f64.sqrt() / 40.0 * g_low() / PI.powi(4)
}

/// `r_{5,0} = (2√15/π²) Re ₃F₂(½,½,½; 5/6,7/6; 125/4)`.
pub fn r50_hypergeometric(prec: &Precision) -> Result<(f64, f64)> {
    let h = hyp32_log_continuation_full(125.0 / 4.0, prec)?;
    let c = 2.0 * 15f64.sqrt() / (PI * PI);
    Ok((c * h.value, c * h.err))
}

/// Conjectured `r_{5,1} = (13/225) r_{5,0} − 2/(5π⁴ r_{5,0})`.
pub fn r51_conjecture(r50: f64) -> f64 {
    13.0 / 225.0 * r50 - 2.0 / (5.0 * PI.powi(4) * r50)
}

/// Residue tables for `n ∈ {4, 5}` up to index `k < length`.
pub fn residues(n: usize, length: usize, _prec: &Precision) -> Result<ResidueTable> {
    if length > MAX_RESIDUE_K {
        return Err(WalkError::GuardExceeded(format!("residue table length {length} > {MAX_RESIDUE_K}")));
    }
    if length == 0 {
        return Err(domain("residue table needs length ≥ 1"));
    }
    match n {
        4 => {
            let (s4, r4) = residues4(length)?;
            Ok(ResidueTable { n, s4, r4, r5: vec![], length, r51_conjectural: None })
        }
        5 => {
            let r50 = r50_gamma_form();
            let r5 = residues5(r50, length)?;
            Ok(ResidueTable { n, s4: vec![], r4: vec![], r5, length, r51_conjectural: Some(r51_conjecture(r50)) })
        }
        _ => Err(domain(format!("residue tables exist for n = 4, 5, got {n}"))),
    }
}

fn residues4(len: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let w = even_moments(4, len)?;
    let c = 3.0 / (2.0 * PI * PI);
    let mut s = Vec::with_capacity(len);
    let mut pow = BigInt::from(1);
    for wk in &w {
        let q = BigRational::new(wk.clone(), pow.clone());
        s.push(c * q.to_f64().unwrap_or(f64::NAN));
        pow *= 64;
    }
    let mut r = Vec::with_capacity(len);
    r.push(9.0 / (2.0 * PI * PI) * 2f64.ln());
    let sk = |j: isize| if j < 0 { 0.0 } else { s[j as usize] };
    for k in 1..len {
        let kf = k as f64;
        let km = kf - 1.0;
        let r1 = r[k - 1];
        let r2 = if k >= 2 { r[k - 2] } else { 0.0 };
        let ki = k as isize;
        let src = 3.0 * (64.0 * kf * kf * sk(ki) - (20.0 * kf * kf - 20.0 * kf + 6.0) * sk(ki - 1) + km * km * sk(ki - 2));
        let v = (4.0 * (2.0 * kf - 1.0) * (5.0 * kf * kf - 5.0 * kf + 2.0) * r1 - 2.0 * km.powi(3) * r2 + src)
            / (128.0 * kf.powi(3));
        r.push(v);
    }
    Ok((s, r))
}

/// Coefficients of the `r_5` recurrence at index `k`:
/// `c3 r_{k+2} = c2 r_{k+1} − c1 r_k + c0 r_{k−1}`.
fn r5_coeffs(k: usize) -> [f64; 4] {
    let kf = k as f64;
    let a = 2.0 * kf + 2.0;
    let b = 2.0 * kf + 1.0;
    let c3 = (15.0 * a * (2.0 * kf + 4.0)).powi(2);
    let c2 = 259.0 * a.powi(4) + 104.0 * a * a;
    let c1 = 35.0 * b.powi(4) + 42.0 * b * b + 3.0;
    let c0 = (2.0 * kf).powi(4);
    [c0, c1, c2, c3]
}

/// `r_{5,k}` as the solution that stays bounded by the `1/9` growth rate: the
/// recurrence is solved as a boundary-value problem with `r_{5,0}` given and
/// `r_{5,N} = 0` far beyond the requested range. Unknowns are scaled by `9^k`.
fn residues5(r50: f64, len: usize) -> Result<Vec<f64>> {
    let big_n = len + 60;
    // unknowns y_1..y_{N-1}, r_k = 9^{-k} y_k, y_0 = r50, y_N = 0
    let m = big_n - 1;
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    let scale = |k: usize| 9f64.powi(-(k as i32));
    for k in 0..m {
        // equation at k involves r_{k-1}, r_k, r_{k+1}, r_{k+2}
        let [c0, c1, c2, c3] = r5_coeffs(k);
        let entries = [(k as isize - 1, c0), (k as isize, -c1), (k as isize + 1, c2), (k as isize + 2, -c3)];
        let mut row_max: f64 = 0.0;
        for &(idx, c) in &entries {
            if idx >= 0 {
                row_max = row_max.max((c * scale(idx as usize)).abs());
            }
        }
        for &(idx, c) in &entries {
            if idx < 0 || idx as usize >= big_n {
                continue;
            }
            let idx = idx as usize;
            let coef = c * scale(idx) / row_max;
            if idx == 0 {
                rhs[k] -= coef * r50;
            } else {
                a[(k, idx - 1)] += coef;
            }
        }
    }
    let y = a
        .lu()
        .solve(&rhs)
        .ok_or(WalkError::SingularInput("r_5 boundary-value system".into()))?;
    let mut r = Vec::with_capacity(len);
    r.push(r50);
    for (i, v) in y.iter().enumerate().take(len - 1) {
        r.push(v * scale(i + 1));
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueWhich {
    W3Res2,
    W5Res2,
    W5Res4,
    W4Coeff2,
    W4Res2,
}

/// Residue data assembled from derivative values at nonnegative even points.
pub fn residue_from_derivatives(which: ResidueWhich, prec: &Precision) -> Result<f64> {
    let closed = DerivativeMethod::Closed;
    let bessel = DerivativeMethod::Bessel;
    match which {
        ResidueWhich::W3Res2 => {
            let d0 = wn_prime(3, 0.0, closed, prec)?.value;
            let d2 = wn_prime(3, 2.0, closed, prec)?.value;
            Ok((8.0 + 12.0 * d0 - 4.0 * d2) / 9.0)
        }
        ResidueWhich::W5Res2 | ResidueWhich::W5Res4 => {
            let d0 = wn_prime(5, 0.0, bessel, prec)?.value;
            let d2 = wn_prime(5, 2.0, bessel, prec)?.value;
            let d4 = wn_prime(5, 4.0, bessel, prec)?.value;
            let res2 = (16.0 + 1140.0 * d0 - 804.0 * d2 + 64.0 * d4) / 225.0;
            if which == ResidueWhich::W5Res2 {
                Ok(res2)
            } else {
                Ok((26.0 * res2 - 16.0 - 20.0 * d0 + 4.0 * d2) / 225.0)
            }
        }
        ResidueWhich::W4Coeff2 => {
            let d0 = wn_prime(4, 0.0, closed, prec)?.value;
            let d2 = wn_prime(4, 2.0, closed, prec)?.value;
            Ok((3.0 + 4.0 * d0 - d2) / 8.0)
        }
        ResidueWhich::W4Res2 => {
            let d0 = wn_prime(4, 0.0, closed, prec)?.value;
            let d2 = wn_prime(4, 2.0, closed, prec)?.value;
            let dd0 = wn_doubleprime(4, 0.0, prec)?.value;
            let dd2 = wn_doubleprime(4, 2.0, prec)?.value;
            Ok((9.0 + 18.0 * d0 - 3.0 * d2 + 4.0 * dd0 - dd2) / 16.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DD;

    #[test]
    fn r50_forms_agree() {
        let g = r50_gamma_form();
        let cs = r50_chowla_selberg();
        let (h, _) = r50_hypergeometric(&Precision::default()).unwrap();
        assert!((g - 0.329_933_801_1).abs() < 1e-10, "{g}");
        assert!((g - cs).abs() < 1e-12);
        assert!((g - h).abs() < 1e-10, "{g} {h}");
    }

    #[test]
    fn r5_table() {
        let t = residues(5, 40, &Precision::default()).unwrap();
        let r = &t.r5;
        assert!((r[1] - 0.006_616_730_259).abs() < 1e-12, "{}", r[1]);
        assert!((r[1] - t.r51_conjectural.unwrap()).abs() < 1e-9);
        // printed to six significant digits
        assert!((r[2] / 0.000_262_333 - 1.0).abs() < 1e-5, "{}", r[2]);
        assert!((r[3] / 0.000_014_118_5 - 1.0).abs() < 1e-5, "{}", r[3]);
        // forward recurrence in double-double from the two seeds
        let mut f = vec![DD::ZERO, DD::from_f64(r[0]), DD::from_f64(t.r51_conjectural.unwrap())];
        for k in 0..8 {
            let [c0, c1, c2, c3] = r5_coeffs(k);
            let v = (f[k + 2].mul_f64(c2) - f[k + 1].mul_f64(c1) + f[k].mul_f64(c0)) / DD::from_f64(c3);
            f.push(v);
        }
        // seed errors grow like 9^k in the forward direction
        for k in 0..6 {
            assert!((f[k + 1].to_f64() / r[k] - 1.0).abs() < 1e-8, "k={k}");
        }
        assert!(r.iter().all(|&v| v > 0.0));
        assert!((r[16] / r[15] * 9.0 - 1.0).abs() < 0.2);
    }

    #[test]
    fn s4_is_scaled_domb() {
        let t = residues(4, 10, &Precision::default()).unwrap();
        let c = 3.0 / (2.0 * PI * PI);
        assert!((t.s4[2] - c * 28.0 / 4096.0).abs() < 1e-15);
        assert!((t.r4[0] - 9.0 * 2f64.ln() / (2.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn guard() {
        assert!(matches!(residues(5, 201, &Precision::default()), Err(WalkError::GuardExceeded(_))));
    }

    #[test]
    fn residues_from_closed_derivatives() {
        let p = Precision::default();
        let v = residue_from_derivatives(ResidueWhich::W3Res2, &p).unwrap();
        assert!((v - 2.0 / (3f64.sqrt() * PI)).abs() < 1e-14);
        let v = residue_from_derivatives(ResidueWhich::W4Coeff2, &p).unwrap();
        assert!((v - 3.0 / (2.0 * PI * PI)).abs() < 1e-14);
        let v = residue_from_derivatives(ResidueWhich::W4Res2, &p).unwrap();
        assert!((v - 9.0 * 2f64.ln() / (2.0 * PI * PI)).abs() < 1e-9, "{v}");
    }
}
