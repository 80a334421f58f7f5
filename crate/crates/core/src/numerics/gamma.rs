//! Gamma family, harmonic numbers and a few named constants.
//!
//! `gamma`, `ln_gamma` and `digamma` wrap `statrs` after checking for poles;
//! `trigamma` is evaluated here by recurrence plus the asymptotic series.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::dd::DD;
use crate::error::{Result, WalkError};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

pub fn gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(WalkError::Pole { what: "gamma", at: x });
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// `log |Γ(x)|`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(WalkError::Pole { what: "ln_gamma", at: x });
    }
    if x > 0.0 {
        Ok(statrs::function::gamma::ln_gamma(x))
    } else {
        // reflection: |Γ(x)| = π / |sin(πx) Γ(1-x)|
        let s = (PI * x).sin().abs();
        Ok(PI.ln() - s.ln() - statrs::function::gamma::ln_gamma(1.0 - x))
    }
}

pub fn digamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(WalkError::Pole { what: "digamma", at: x });
    }
    if x > 0.0 {
        Ok(statrs::function::gamma::digamma(x))
    } else {
        // ψ(1-x) - ψ(x) = π cot(πx)
        Ok(statrs::function::gamma::digamma(1.0 - x) - PI / (PI * x).tan())
    }
}

pub fn trigamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(WalkError::Pole { what: "trigamma", at: x });
    }
    if x < 0.5 {
        // ψ'(1-x) + ψ'(x) = π² / sin²(πx)
        let s = (PI * x).sin();
        return Ok(PI * PI / (s * s) - trigamma(1.0 - x)?);
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 12.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    // 1/x + 1/(2x²) + Σ B_{2k}/x^{2k+1}
    const B: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut p = inv * inv2;
    let mut tail = 0.0;
    for b in B {
        tail += b * p;
        p *= inv2;
    }
    Ok(acc + inv + 0.5 * inv2 + tail)
}

/// Reciprocal Gamma function, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        0.0
    } else {
        1.0 / statrs::function::gamma::gamma(x)
    }
}

/// `binomial(s, t) = Γ(s+1) / (Γ(t+1) Γ(s-t+1))` for real arguments.
pub fn binomial_real(s: f64, t: f64) -> Result<f64> {
    let num = gamma(s + 1.0)?;
    Ok(num * rgamma(t + 1.0) * rgamma(s - t + 1.0))
}

/// `H_n = Σ_{k=1}^n 1/k`.
pub fn harmonic(n: u64) -> f64 {
    if n < 64 {
        let mut s = DD::ZERO;
        for k in 1..=n {
            s += DD::from_ratio(1, k as i64);
        }
        s.to_f64()
    } else {
        // ψ(n+1) + γ
        statrs::function::gamma::digamma(n as f64 + 1.0) + EULER_GAMMA
    }
}

/// `H_{n+1/2} = 2 Σ_{k=1}^{n+1} 1/(2k-1) - 2 log 2`.
pub fn harmonic_half(n: u64) -> f64 {
    let mut s = DD::ZERO;
    for k in 1..=(n + 1) {
        s += DD::from_ratio(1, (2 * k - 1) as i64);
    }
    (s.mul_f64(2.0) - DD::LN_2.mul_f64(2.0)).to_f64()
}

/// `ζ(3)` from `ζ(3) = (5/2) Σ (-1)^{k+1} / (k³ C(2k,k))`, summed in double-double.
pub fn zeta3_dd() -> DD {
    static Z: OnceLock<DD> = OnceLock::new();
    *Z.get_or_init(|| {
        let mut sum = DD::ZERO;
        let mut central = DD::ONE; // C(2k,k)
        for k in 1..60i64 {
            central = central.mul_f64((2 * (2 * k - 1)) as f64) / DD::from_f64(k as f64);
            let kk = DD::from_f64(k as f64);
            let term = (kk * kk * kk * central).recip();
            if k % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
            if term.hi < 1e-34 {
                break;
            }
        }
        sum.mul_f64(2.5)
    })
}

pub fn zeta3() -> f64 {
    zeta3_dd().to_f64()
}

/// `Li_4(1/2) = Σ 1/(2^k k^4)`.
pub fn li4_half_dd() -> DD {
    static L: OnceLock<DD> = OnceLock::new();
    *L.get_or_init(|| {
        let mut sum = DD::ZERO;
        let mut p = DD::ONE;
        for k in 1..120i64 {
            p = p.mul_f64(0.5);
            let k4 = (k * k * k * k) as f64;
            let term = p / DD::from_f64(k4);
            sum += term;
            if term.hi < 1e-34 {
                break;
            }
        }
        sum
    })
}

pub fn li4_half() -> f64 {
    li4_half_dd().to_f64()
}

/// `ζ(2k)` for `k ≥ 1` via the direct sum with an integral tail correction.
pub fn zeta_even(k: u32) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        _ => {
            let s = 2 * k as i32;
            let mut sum = 0.0;
            for n in (1..=20).rev() {
                sum += (n as f64).powi(-s);
            }
            // Euler-Maclaurin tail from 21
            let n = 21.0_f64;
            let sf = s as f64;
            sum + n.powi(1 - s) / (sf - 1.0) + 0.5 * n.powi(-s) + sf * n.powi(-s - 1) / 12.0
                - sf * (sf + 1.0) * (sf + 2.0) * n.powi(-s - 3) / 720.0
        }
    }
}
