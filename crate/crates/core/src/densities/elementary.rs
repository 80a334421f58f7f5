use std::f64::consts::PI;

use super::{DensityFlag, DensityMethod, EvalResult};

/// `p_2(x) = 2/(π√(4−x²))` on `(0, 2)`.
pub fn p2(x: f64) -> EvalResult {
    if !(x >= 0.0) || x > 2.0 {
        return EvalResult::outside(DensityMethod::ClosedForm);
    }
    if x == 2.0 {
        return EvalResult::new(f64::INFINITY, 0.0, DensityMethod::ClosedForm, "endpoint")
            .with_flag(DensityFlag::InfiniteSentinel)
            .with_flag(DensityFlag::SingularPoint);
    }
    // (2-x)(2+x) keeps relative accuracy close to 2
    let v = 2.0 / (PI * ((2.0 - x) * (2.0 + x)).sqrt());
    EvalResult::new(v, 4.0 * f64::EPSILON * v, DensityMethod::ClosedForm, "interior")
}

/// Density of the distance after two steps of lengths `a` and `b`.
pub fn p2_two_step(x: f64, a: f64, b: f64) -> EvalResult {
    let lo = (a - b).abs();
    let hi = a + b;
    if !(a > 0.0 && b > 0.0) || !(x >= lo && x <= hi) {
        return EvalResult::outside(DensityMethod::ClosedForm);
    }
    if x == lo || x == hi {
        return EvalResult::new(f64::INFINITY, 0.0, DensityMethod::ClosedForm, "endpoint")
            .with_flag(DensityFlag::InfiniteSentinel)
            .with_flag(DensityFlag::SingularPoint);
    }
    let q = (hi - x) * (hi + x) * (x - lo) * (x + lo);
    let v = 2.0 * x / (PI * q.sqrt());
    EvalResult::new(v, 8.0 * f64::EPSILON * v, DensityMethod::ClosedForm, "interior")
}

/// Limiting density `2x/n · e^{−x²/n}`.
pub fn rayleigh(n: usize, x: f64) -> f64 {
    let n = n as f64;
    2.0 * x / n * (-x * x / n).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_values() {
        assert!((p2(1.0).value - 2.0 / (PI * 3f64.sqrt())).abs() < 1e-16);
        assert!((p2(1.0).value - 0.3675526).abs() < 1e-7);
        let e = p2(2.0);
        assert!(e.value.is_infinite() && e.has_flag(DensityFlag::InfiniteSentinel));
        assert_eq!(p2(2.5).value, 0.0);
        assert_eq!(p2(-0.1).value, 0.0);
    }

    #[test]
    fn two_step_values() {
        let v = p2_two_step(2.0, 1.0, 2.0).value;
        assert!((v - 4.0 / (PI * 15f64.sqrt())).abs() < 1e-15);
        assert!((v - 0.32877).abs() < 5e-5);
        assert!((p2_two_step(1.0, 1.0, 1.0).value - p2(1.0).value).abs() < 1e-15);
        assert_eq!(p2_two_step(0.5, 1.0, 2.0).value, 0.0);
        for &x in &[0.1, 0.7, 1.3, 1.9] {
            assert!((p2_two_step(x, 1.0, 1.0).value - p2(x).value).abs() < 1e-14 * p2(x).value);
        }
    }

    #[test]
    fn rayleigh_shape() {
        assert_eq!(rayleigh(5, 0.0), 0.0);
        for n in 1..10 {
            let xm = (n as f64 / 2.0).sqrt();
            let peak = (2.0 / (std::f64::consts::E * n as f64)).sqrt();
            assert!((rayleigh(n, xm) - peak).abs() < 1e-15);
            assert!(rayleigh(n, xm * 1.01) < peak && rayleigh(n, xm * 0.99) < peak);
        }
    }
}
