//! Quadrature rules: Gauss-Legendre panels, tanh-sinh for endpoint
//! singularities, and adaptive Gauss-Kronrod (7/15).

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::sum::CompensatedSum;
use crate::error::{Result, WalkError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err: f64,
    pub evals: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 0 { 1.0 } else { p1 };
                let pm = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared 20-point rule.
    pub fn gl20() -> &'static GaussLegendre {
        static R: OnceLock<GaussLegendre> = OnceLock::new();
        R.get_or_init(|| GaussLegendre::new(20))
    }

    pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = CompensatedSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s.add(w * f(c + h * x));
        }
        s.value() * h
    }

    /// Composite rule over `panels` equal panels of `[a, b]`.
    pub fn composite<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, a: f64, b: f64, panels: usize) -> f64 {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut s = CompensatedSum::new();
        for i in 0..panels {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == panels { b } else { lo + h };
            s.add(self.integrate(f, lo, hi));
        }
        s.value()
    }
}

/// Tanh-sinh quadrature on `[a, b]`. The integrand receives `(x, x - a, b - x)`
/// so that functions singular at an endpoint can use the accurately computed
/// distance.
pub fn tanh_sinh<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> f64 + ?Sized,
{
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> f64 {
        // x = c + half·tanh(π/2 sinh t); weight half·(π/2)cosh t / cosh²(π/2 sinh t)
        let s = 0.5 * PI * t.sinh();
        let w = half * 0.5 * PI * t.cosh() / s.cosh().powi(2);
        if !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        // distance from the near endpoint: (b-a)/(1+e^{2|s|})
        let d = (b - a) / (1.0 + (2.0 * s.abs()).exp());
        let (x, da, db) = if t < 0.0 {
            (a + d, d, b - a - d)
        } else {
            (b - d, b - a - d, d)
        };
        if da <= 0.0 || db <= 0.0 {
            return 0.0;
        }
        w * f(x, da, db)
    };
    let tmax = 4.0;
    let mut h = 0.5;
    let mut evals = 1;
    let mut sum = CompensatedSum::new();
    sum.add(eval(0.0));
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > tmax {
            break;
        }
        sum.add(eval(t) + eval(-t));
        evals += 2;
        k += 1;
    }
    let mut prev = sum.value() * h;
    for _level in 0..10 {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > tmax {
                break;
            }
            sum.add(eval(t) + eval(-t));
            evals += 2;
            k += 2;
        }
        let cur = sum.value() * h;
        let err = (cur - prev).abs();
        if err <= tol * cur.abs().max(1e-300) {
            // quadratic convergence: the true error is far below the difference
            return Ok(QuadResult { value: cur, err: err * err / cur.abs().max(1e-300) + 4.0 * f64::EPSILON * cur.abs(), evals });
        }
        prev = cur;
    }
    Err(WalkError::SlowConvergence { what: "tanh_sinh", err: f64::NAN, tol })
}

// Kronrod 15 / Gauss 7 abscissae and weights on [-1, 1]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature by recursive bisection.
pub fn adaptive_gk<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<QuadResult> {
    let (whole, _) = gk15(f, a, b);
    let scale = whole.abs().max(1e-300);
    let mut evals = 15;
    let mut stack = vec![(a, b, 0u32)];
    let mut total = CompensatedSum::new();
    let mut err_total = 0.0;
    let mut failed = false;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(f, lo, hi);
        evals += 15;
        let local_tol = tol * scale * ((hi - lo) / (b - a)).max(1e-3);
        if e <= local_tol || depth >= max_depth || (hi - lo).abs() < 1e-14 * (1.0 + lo.abs()) {
            if e > local_tol {
                failed = true;
            }
            total.add(v);
            err_total += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    let value = total.value();
    if failed && err_total > 10.0 * tol * value.abs() {
        return Err(WalkError::SlowConvergence { what: "adaptive_gk", err: err_total, tol });
    }
    Ok(QuadResult { value, err: err_total, evals })
}
