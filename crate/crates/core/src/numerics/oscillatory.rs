//! Integrals over `(0, ∞)` of products of Bessel functions `J_ν(a t)` times
//! `t^p log^L t`.
//!
//! The integral is split at a cut `T`. On `(0, T)` the exact integrand is
//! integrated with Gauss-Legendre panels (tanh-sinh on the first panel when the
//! integrand is singular at 0). Beyond `T` every Bessel factor is replaced by its
//! Hankel expansion, the product is expanded into pure frequencies
//! `t^{-β} log^L t · e^{iωt}`, and each of those is integrated analytically by
//! repeated integration by parts (numerically up to `|ω| t = 40` for slow
//! frequencies). The error estimate compares two cuts.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quad::{tanh_sinh, GaussLegendre, QuadResult};
use super::sum::CompensatedSum;
use crate::error::{domain, Result, WalkError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselFactor {
    /// 0 or 1.
    pub order: u8,
    /// `a` in `J_ν(a t)`, positive.
    pub scale: f64,
}

impl BesselFactor {
    pub fn j0(scale: f64) -> Self {
        BesselFactor { order: 0, scale }
    }
    pub fn j1(scale: f64) -> Self {
        BesselFactor { order: 1, scale }
    }
}

/// `coeff · t^power · log^L t · ∏ J_{ν_i}(a_i t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselProduct {
    pub coeff: f64,
    pub power: f64,
    pub log_power: u32,
    pub factors: Vec<BesselFactor>,
}

/// One pure-frequency component `c · t^{-β} log^L t · e^{iωt}`.
#[derive(Clone, Copy, Debug)]
struct Component {
    omega: f64,
    beta: f64,
    log_power: u32,
    c: Complex64,
}

const HANKEL_ORDER: usize = 18;
/// `|ω| t` beyond which integration by parts is used.
const IBP_FROM: f64 = 40.0;

fn hankel_coefficients(order: u8) -> Vec<f64> {
    let mu = 4.0 * (order as f64).powi(2);
    let mut a = vec![1.0];
    for k in 1..=HANKEL_ORDER {
        let j = (2 * k - 1) as f64;
        let prev = a[k - 1];
        a.push(prev * (mu - j * j) / (8.0 * k as f64));
    }
    a
}

fn i_pow(m: usize) -> Complex64 {
    match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn expand(term: &BesselProduct) -> Vec<Component> {
    // list of (ω, series in t^{-m})
    let mut cur: Vec<(f64, Vec<Complex64>)> = vec![(0.0, {
        let mut v = vec![Complex64::new(0.0, 0.0); HANKEL_ORDER + 1];
        v[0] = Complex64::new(term.coeff, 0.0);
        v
    })];
    for f in &term.factors {
        let a = f.scale;
        let h = hankel_coefficients(f.order);
        let phase = Complex64::from_polar(1.0, -(f.order as f64 * PI / 2.0 + PI / 4.0));
        let amp = (2.0 / (PI * a)).sqrt();
        let fm: Vec<Complex64> = (0..=HANKEL_ORDER)
            .map(|m| 0.5 * amp * phase * i_pow(m) * h[m] / a.powi(m as i32))
            .collect();
        let fc: Vec<Complex64> = fm.iter().map(|c| c.conj()).collect();
        let mut next: Vec<(f64, Vec<Complex64>)> = Vec::new();
        for (w, s) in &cur {
            for (dw, g) in [(a, &fm), (-a, &fc)] {
                let nw = w + dw;
                let mut prod = vec![Complex64::new(0.0, 0.0); HANKEL_ORDER + 1];
                for (i, si) in s.iter().enumerate() {
                    if *si == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (j, gj) in g.iter().enumerate().take(HANKEL_ORDER + 1 - i) {
                        prod[i + j] += si * gj;
                    }
                }
                let tol = 1e-12 * (1.0 + nw.abs());
                if let Some(e) = next.iter_mut().find(|(x, _)| (x - nw).abs() < tol) {
                    for (x, y) in e.1.iter_mut().zip(&prod) {
                        *x += y;
                    }
                } else {
                    next.push((nw, prod));
                }
            }
        }
        cur = next;
    }
    let base = -term.power + term.factors.len() as f64 / 2.0;
    let mut out = Vec::new();
    for (w, s) in cur {
        for (m, c) in s.into_iter().enumerate() {
            if c != Complex64::new(0.0, 0.0) {
                out.push(Component {
                    omega: if w.abs() < 1e-12 { 0.0 } else { w },
                    beta: base + m as f64,
                    log_power: term.log_power,
                    c,
                });
            }
        }
    }
    out
}

fn merge(mut comps: Vec<Component>) -> Vec<Component> {
    let mut out: Vec<Component> = Vec::new();
    comps.sort_by(|a, b| a.omega.partial_cmp(&b.omega).unwrap().then(a.beta.partial_cmp(&b.beta).unwrap()));
    for c in comps {
        if let Some(last) = out.iter_mut().rev().find(|o| {
            (o.omega - c.omega).abs() < 1e-12 * (1.0 + c.omega.abs())
                && (o.beta - c.beta).abs() < 1e-12
                && o.log_power == c.log_power
        }) {
            last.c += c.c;
        } else {
            out.push(c);
        }
    }
    out
}

/// `∫_T^∞ t^{-β} log^L t dt` for `β > 1`.
fn non_oscillatory_tail(beta: f64, l: u32, t: f64) -> f64 {
    let b1 = beta - 1.0;
    let lt = t.ln();
    let mut s = 0.0;
    let mut fact = 1.0;
    for j in 0..=l {
        if j > 0 {
            fact *= (l - j + 1) as f64;
        }
        s += fact * lt.powi((l - j) as i32) / b1.powi(j as i32 + 1);
    }
    t.powf(-b1) * s
}

/// `∫_T^∞ t^{-β} log^L t e^{iωt} dt` by integration by parts, `|ω| T ≥ IBP_FROM`.
fn ibp_tail(beta: f64, l: u32, omega: f64, t: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, omega * t);
    let lt = t.ln();
    let k = Complex64::new(0.0, 1.0 / omega);
    // expand along paths: each step multiplies by (i/ω)/t and either keeps L
    // with factor -(β+d) or lowers it with factor L
    let mut total = Complex64::new(0.0, 0.0);
    // state: (beta_shift d, current L, accumulated coefficient)
    let mut layer: Vec<(u32, f64)> = vec![(l, 1.0)];
    let mut kp = k;
    for d in 0..60 {
        let mut contrib = Complex64::new(0.0, 0.0);
        let mut next: Vec<(u32, f64)> = Vec::new();
        let b = beta + d as f64;
        let mut largest = 0.0f64;
        for &(ll, c) in &layer {
            let g = c * t.powf(-b) * lt.powi(ll as i32);
            contrib += kp * g;
            largest = largest.max((c * t.powf(-b)).abs() * (1.0 + lt.abs()).powi(ll as i32));
            next.push((ll, -c * b));
            if ll > 0 {
                next.push((ll - 1, c * ll as f64));
            }
        }
        total += contrib;
        if largest * kp.norm() < 1e-19 * (total.norm() + 1e-300) {
            break;
        }
        // merge equal L
        next.sort_by_key(|x| x.0);
        let mut merged: Vec<(u32, f64)> = Vec::new();
        for (ll, c) in next {
            if let Some(m) = merged.iter_mut().find(|m| m.0 == ll) {
                m.1 += c;
            } else {
                merged.push((ll, c));
            }
        }
        layer = merged;
        kp *= k;
    }
    total * e
}

fn component_tail(c: &Component, t: f64, gl: &GaussLegendre) -> Result<Complex64> {
    if c.omega == 0.0 {
        if c.beta <= 1.0 {
            return Err(WalkError::SingularInput(format!(
                "non-oscillatory tail t^-{} does not converge",
                c.beta
            )));
        }
        return Ok(c.c * non_oscillatory_tail(c.beta, c.log_power, t));
    }
    let w = c.omega.abs();
    let t2 = t.max(IBP_FROM / w);
    let mut acc = Complex64::new(0.0, 0.0);
    if t2 > t {
        // slowly oscillating: geometric panels until IBP is accurate
        let f_re = |s: f64| s.powf(-c.beta) * s.ln().powi(c.log_power as i32) * (c.omega * s).cos();
        let f_im = |s: f64| s.powf(-c.beta) * s.ln().powi(c.log_power as i32) * (c.omega * s).sin();
        let mut lo = t;
        while lo < t2 {
            let hi = (lo + (0.5 * lo).min(6.0 / w)).min(t2);
            acc += Complex64::new(gl.integrate(&f_re, lo, hi), gl.integrate(&f_im, lo, hi));
            lo = hi;
        }
    }
    acc += ibp_tail(c.beta, c.log_power, c.omega, t2);
    Ok(c.c * acc)
}

/// Specification of an integral over `(0, ∞)`.
pub struct OscillatoryIntegral<'a> {
    /// The exact integrand, used on `(0, T)`.
    pub integrand: &'a (dyn Fn(f64) -> f64 + Sync),
    /// Its large-`t` form as a sum of Bessel products.
    pub far: Vec<BesselProduct>,
    /// Integrable singularity (or non-smoothness) at 0.
    pub singular_at_zero: bool,
    /// Additional interior breakpoints, e.g. kinks of the integrand.
    pub breakpoints: Vec<f64>,
}

fn near_field(p: &OscillatoryIntegral<'_>, lo: f64, hi: f64, omega_max: f64, gl: &GaussLegendre) -> Result<f64> {
    let h = (10.0 / omega_max.max(1e-3)).min(1.0);
    let mut s = CompensatedSum::new();
    let mut start = lo;
    if lo == 0.0 && p.singular_at_zero {
        let t0 = h.min(hi);
        let f = |x: f64, _da: f64, _db: f64| (p.integrand)(x);
        let r = tanh_sinh(&f, 0.0, t0, 1e-15)?;
        s.add(r.value);
        start = t0;
    }
    let mut cuts: Vec<f64> = p.breakpoints.iter().copied().filter(|&b| b > start && b < hi).collect();
    cuts.push(hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut a = start;
    for b in cuts {
        let panels = ((b - a) / h).ceil().max(1.0) as usize;
        s.add(gl.composite(p.integrand, a, b, panels));
        a = b;
    }
    Ok(s.value())
}

fn tail(comps: &[Component], t: f64, gl: &GaussLegendre) -> Result<f64> {
    let mut s = CompensatedSum::new();
    for c in comps {
        s.add(component_tail(c, t, gl)?.re);
    }
    Ok(s.value())
}

/// Integrates over `(0, ∞)`. `tol` is an absolute target used only to decide
/// between success and [`WalkError::SlowConvergence`].
pub fn integrate_bessel_products(p: &OscillatoryIntegral<'_>, tol: f64) -> Result<QuadResult> {
    if p.far.is_empty() {
        return Err(domain("empty far-field description"));
    }
    let mut min_scale = f64::INFINITY;
    let mut omega_max: f64 = 0.0;
    let mut comps = Vec::new();
    for term in &p.far {
        let mut om = 0.0;
        for f in &term.factors {
            if !(f.scale > 0.0) {
                return Err(domain("Bessel scale must be positive"));
            }
            if f.order > 1 {
                return Err(domain("Bessel order must be 0 or 1"));
            }
            min_scale = min_scale.min(f.scale);
            om += f.scale;
        }
        omega_max = omega_max.max(om);
        comps.extend(expand(term));
    }
    let comps = merge(comps);
    let mut t_cut = (IBP_FROM / min_scale).max(30.0);
    if let Some(&b) = p.breakpoints.iter().max_by(|a, b| a.partial_cmp(b).unwrap()) {
        t_cut = t_cut.max(b);
    }
    // drop components that cancelled to rounding level, judged by their size at the cut
    let size = |c: &Component| c.c.norm() * t_cut.powf(-c.beta);
    let cmax = comps.iter().map(size).fold(0.0, f64::max);
    let comps: Vec<Component> = comps.into_iter().filter(|c| size(c) > 1e-14 * cmax).collect();
    if t_cut > 2e5 {
        return Err(WalkError::SlowConvergence { what: "bessel product cut", err: f64::NAN, tol });
    }
    let gl = GaussLegendre::gl20();
    let t2 = 1.25 * t_cut;
    let n1 = near_field(p, 0.0, t_cut, omega_max, gl)?;
    let extra = near_field(&OscillatoryIntegral { singular_at_zero: false, integrand: p.integrand, far: vec![], breakpoints: vec![] }, t_cut, t2, omega_max, gl)?;
    let tail1 = tail(&comps, t_cut, gl)?;
    let tail2 = tail(&comps, t2, gl)?;
    let v1 = n1 + tail1;
    let v2 = n1 + extra + tail2;
    let err = (v1 - v2).abs() + 1e-16 * v1.abs();
    let evals = (t2 / (10.0 / omega_max.max(1e-3)).min(1.0)) as usize * 20;
    if err > tol.max(1e-15) * 100.0 {
        return Err(WalkError::SlowConvergence { what: "bessel product integral", err, tol });
    }
    Ok(QuadResult { value: v2, err, evals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bessel::{j0, j1};

    #[test]
    fn weber_type_integrals() {
        // ∫ J0(t) dt = 1 ; ∫ J1(t) dt = 1 ; ∫ J0(t) J1(t) dt = 1/2 ; ∫ J0(at)J1(t) dt = 1 for a<1
        let f = |t: f64| j0(t);
        let p = OscillatoryIntegral { integrand: &f, far: vec![BesselProduct { coeff: 1.0, power: 0.0, log_power: 0, factors: vec![BesselFactor::j0(1.0)] }], singular_at_zero: false, breakpoints: vec![] };
        let r = integrate_bessel_products(&p, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{r:?}");

        let f = |t: f64| j0(t) * j1(t);
        let p = OscillatoryIntegral { integrand: &f, far: vec![BesselProduct { coeff: 1.0, power: 0.0, log_power: 0, factors: vec![BesselFactor::j0(1.0), BesselFactor::j1(1.0)] }], singular_at_zero: false, breakpoints: vec![] };
        let r = integrate_bessel_products(&p, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12, "{r:?}");

        let a = 0.6;
        let f = |t: f64| j0(a * t) * j1(t);
        let p = OscillatoryIntegral { integrand: &f, far: vec![BesselProduct { coeff: 1.0, power: 0.0, log_power: 0, factors: vec![BesselFactor::j0(a), BesselFactor::j1(1.0)] }], singular_at_zero: false, breakpoints: vec![] };
        let r = integrate_bessel_products(&p, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn logarithmic_weight() {
        // ∫ log t · J1(t) dt = log 2 - γ
        let f = |t: f64| t.ln() * j1(t);
        let p = OscillatoryIntegral { integrand: &f, far: vec![BesselProduct { coeff: 1.0, power: 0.0, log_power: 1, factors: vec![BesselFactor::j1(1.0)] }], singular_at_zero: true, breakpoints: vec![] };
        let r = integrate_bessel_products(&p, 1e-12).unwrap();
        let exact = std::f64::consts::LN_2 - crate::numerics::gamma::EULER_GAMMA;
        assert!((r.value - exact).abs() < 1e-12, "{r:?} vs {exact}");
    }

    #[test]
    fn non_oscillatory_component() {
        // ∫ J1(t)² / t dt = 1/2 has a zero-frequency far-field part
        let f = |t: f64| if t == 0.0 { 0.0 } else { j1(t).powi(2) / t };
        let p = OscillatoryIntegral { integrand: &f, far: vec![BesselProduct { coeff: 1.0, power: -1.0, log_power: 0, factors: vec![BesselFactor::j1(1.0), BesselFactor::j1(1.0)] }], singular_at_zero: false, breakpoints: vec![] };
        let r = integrate_bessel_products(&p, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn ibp_matches_quadrature() {
        let (beta, l, w, t) = (1.3, 1u32, 2.0, 25.0);
        let v = ibp_tail(beta, l, w, t);
        let gl = GaussLegendre::gl20();
        let fr = |s: f64| s.powf(-beta) * s.ln() * (w * s).cos();
        let fi = |s: f64| s.powf(-beta) * s.ln() * (w * s).sin();
        let end = 2000.0;
        let near = Complex64::new(gl.composite(&fr, t, end, 2000), gl.composite(&fi, t, end, 2000));
        let far = ibp_tail(beta, l, w, end);
        assert!((near + far - v).norm() < 1e-12);
    }
}
