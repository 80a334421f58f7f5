use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::eta::ln_eta_nome;
use crate::numerics::quad::adaptive_gk;
use crate::numerics::Precision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MahlerWhich {
    W5,
    W6,
}

/// Eta-product kernel at `t`, without the power of `t`.
pub fn eta_kernel(which: MahlerWhich, t: f64) -> Result<f64> {
    let l = |a: f64| ln_eta_nome(a * t);
    Ok(match which {
        MahlerWhich::W5 => (3.0 * (l(3.0)? + l(5.0)?)).exp() + (3.0 * (l(1.0)? + l(15.0)?)).exp(),
        MahlerWhich::W6 => (2.0 * (l(1.0)? + l(2.0)? + l(3.0)? + l(6.0)?)).exp(),
    })
}

/// The eta-quotient integrals conjectured to equal `W_5'(0)` and `W_6'(0)`.
pub fn mahler_eta_integral(which: MahlerWhich, prec: &Precision) -> Result<f64> {
    let (c, power) = match which {
        MahlerWhich::W5 => ((15.0 / (4.0 * PI * PI)).powf(2.5), 3),
        MahlerWhich::W6 => ((3.0 / (PI * PI)).powi(3), 4),
    };
    let tol = prec.target_rel_error.max(1e-14);
    let f = |t: f64| -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        eta_kernel(which, t).map(|k| k * t.powi(power)).unwrap_or(f64::NAN)
    };
    // the kernel vanishes faster than any power at 0 and decays like e^{-t}
    let mut total = 0.0;
    for w in [0.0, 1.0, 3.0, 8.0, 20.0, 50.0, 120.0].windows(2) {
        total += adaptive_gk(&f, w[0], w[1], tol, 40)?.value;
    }
    Ok(c * total)
}
