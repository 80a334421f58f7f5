use super::{near_singular, DensityFlag, DensityMethod, EvalResult};
use crate::error::{domain, Result};
use crate::numerics::bessel::j0;
use crate::numerics::oscillatory::{integrate_bessel_products, BesselFactor, BesselProduct, OscillatoryIntegral};
use crate::numerics::Precision;

/// Absolute accuracy requested from the oscillatory integrator.
const QUAD_TOL: f64 = 1e-11;

/// Below this the `J_0(xt)` factor is too slow for the far-field cut.
const SMALL_X: f64 = 2.5e-4;

/// `p_n(x) = ∫_0^∞ x t J_0(xt) J_0(t)^n dt`.
pub fn pn_quadrature(n: usize, x: f64, _prec: &Precision) -> Result<EvalResult> {
    if n < 2 {
        return Err(domain(format!("pn_quadrature needs n ≥ 2, got {n}")));
    }
    if x.is_nan() {
        return Err(domain("pn_quadrature at NaN"));
    }
    if x < 0.0 || x >= n as f64 {
        return Ok(EvalResult::outside(DensityMethod::Quadrature));
    }
    if x < SMALL_X && n >= 5 {
        // p_n(x) = x ∫ t J_0(t)^n dt + O(x³ log x)
        let c = slope_at_zero(n)?;
        let err = c.err * x + 100.0 * x.powi(3) * (1.0 - x.ln());
        return Ok(EvalResult::new(c.value * x, err, DensityMethod::Quadrature, "kluyver_small_x"));
    }
    if x == 0.0 {
        let v = if n == 2 { std::f64::consts::FRAC_1_PI } else { 0.0 };
        return Ok(EvalResult::new(v, 0.0, DensityMethod::Quadrature, "kluyver"));
    }
    if (n == 2 && x == 2.0) || (n == 3 && x == 1.0) {
        return Ok(EvalResult::new(f64::INFINITY, 0.0, DensityMethod::Quadrature, "kluyver")
            .with_flag(DensityFlag::InfiniteSentinel)
            .with_flag(DensityFlag::SingularPoint));
    }
    let f = move |t: f64| x * t * j0(x * t) * j0(t).powi(n as i32);
    let mut factors = vec![BesselFactor::j0(x)];
    factors.extend(std::iter::repeat(BesselFactor::j0(1.0)).take(n));
    let spec = OscillatoryIntegral {
        integrand: &f,
        far: vec![BesselProduct { coeff: x, power: 1.0, log_power: 0, factors }],
        singular_at_zero: false,
        breakpoints: vec![],
    };
    let r = integrate_bessel_products(&spec, QUAD_TOL)?;
    let res = EvalResult::new(r.value, r.err, DensityMethod::Quadrature, "kluyver");
    if near_singular(n, x, 0.05) {
        Ok(res.with_flag(DensityFlag::SingularPoint))
    } else {
        Ok(res)
    }
}

/// `p_n'(0) = ∫_0^∞ t J_0(t)^n dt`, convergent for `n ≥ 5`.
fn slope_at_zero(n: usize) -> Result<crate::numerics::quad::QuadResult> {
    let f = move |t: f64| t * j0(t).powi(n as i32);
    let spec = OscillatoryIntegral {
        integrand: &f,
        far: vec![BesselProduct { coeff: 1.0, power: 1.0, log_power: 0, factors: vec![BesselFactor::j0(1.0); n] }],
        singular_at_zero: false,
        breakpoints: vec![],
    };
    integrate_bessel_products(&spec, QUAD_TOL)
}
