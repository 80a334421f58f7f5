use std::f64::consts::PI;

use proptest::prelude::*;
use walkdens::densities::{p5, P5Method};
use walkdens::moments::{
    bessel_moment, continue_by_functional_eq, direct_moment, even_moment_exact, mahler_eta_integral, w3, wn_prime,
    DerivativeMethod, MahlerWhich,
};
use walkdens::numerics::bessel::j0;
use walkdens::numerics::quad::tanh_sinh;
use walkdens::numerics::Precision;

fn prec() -> Precision {
    Precision::default()
}

#[test]
fn even_moments_are_multinomial_sums() {
    // W_n(2k) = Σ (k choose a_1..a_n)², checked by brute force for tiny cases
    fn brute(n: usize, k: usize) -> u128 {
        fn rec(n: usize, left: usize, fact: &[u128], acc: u128) -> u128 {
            if n == 1 {
                let m = acc / fact[left];
                return m * m;
            }
            (0..=left).map(|a| rec(n - 1, left - a, fact, acc / fact[a])).sum()
        }
        let fact: Vec<u128> = (0..=k as u128).scan(1u128, |f, i| {
            if i > 0 {
                *f *= i;
            }
            Some(*f)
        }).collect();
        rec(n, k, &fact, fact[k])
    }
    for n in 1..=5 {
        for k in 0..=6 {
            let w = even_moment_exact(n, k).unwrap();
            assert_eq!(w.to_string(), brute(n, k).to_string(), "n={n} k={k}");
        }
    }
}

#[test]
fn bessel_route_matches_hypergeometric_for_three_steps() {
    for s in [-1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 3.0, 5.5] {
        let a = bessel_moment(3, s, &prec()).unwrap().value;
        let b = w3(s, &prec()).unwrap().value;
        assert!((a - b).abs() < 1e-11 * b.abs(), "s={s}: {a} vs {b}");
    }
}

#[test]
fn four_steps_at_minus_one_is_a_bessel_integral() {
    // W_4(-1) = ∫_0^∞ J_0(t)^4 dt
    let f = |t: f64, _: f64, _: f64| j0(t).powi(4);
    let mut total = 0.0;
    let mut a = 0.0;
    for _ in 0..4000 {
        total += tanh_sinh(&f, a, a + 0.5 * PI, 1e-13).unwrap().value;
        a += 0.5 * PI;
    }
    // J_0^4 ~ (2/(πt))² cos⁴: non-oscillating part 3/(2π²t²) past the cut
    total += 3.0 / (2.0 * PI * PI * a);
    let w = bessel_moment(4, -1.0, &prec()).unwrap().value;
    assert!((total - w).abs() < 1e-7, "{total} vs {w}");
}

#[test]
fn double_pole_of_four_steps() {
    // (s+2)² W_4(s) → 3/(2π²)
    let mut prev = f64::INFINITY;
    for e in [1e-2, 1e-3, 1e-4] {
        let s = -2.0 + e;
        let v = e * e * bessel_moment(4, s, &prec()).unwrap().value;
        let d = (v - 1.5 / (PI * PI)).abs();
        assert!(d < prev, "e={e}: {v}");
        prev = d;
    }
    assert!(prev < 1e-4);
}

#[test]
fn five_steps_at_minus_one_from_density() {
    let f = |x: f64, _: f64, _: f64| p5(x, P5Method::Auto, &prec()).unwrap().value / x;
    let q: f64 = [(0.0, 1.0), (1.0, 3.0), (3.0, 5.0)]
        .iter()
        .map(|&(a, b)| tanh_sinh(&f, a, b, 1e-10).unwrap().value)
        .sum();
    let w = continue_by_functional_eq(5, -1.0, &prec()).unwrap().value;
    assert!((q - w).abs() < 1e-7, "{q} vs {w}");
}

#[test]
fn six_step_mahler_measure() {
    let d = wn_prime(6, 0.0, DerivativeMethod::Bessel, &prec()).unwrap().value;
    let m = mahler_eta_integral(MahlerWhich::W6, &prec()).unwrap();
    assert!((d - m).abs() < 1e-6, "{d} vs {m}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn functional_equation_matches_direct(n in 3usize..=5, s in -1.9f64..4.0) {
        let a = direct_moment(n, s, &prec()).unwrap();
        let b = continue_by_functional_eq(n, s, &prec()).unwrap();
        prop_assert!((a.value - b.value).abs() <= 10.0 * (a.err + b.err) + 1e-9 * a.value.abs(),
            "n={} s={}: {:?} vs {:?}", n, s, a, b);
    }

    #[test]
    fn moments_increase_in_s(n in 3usize..=5, s in -0.9f64..3.0) {
        // log-convex with W_n(0) = 1 and W_n(2) = n > 1, so increasing past 0
        let a = direct_moment(n, s, &prec()).unwrap().value;
        let b = direct_moment(n, s + 0.5, &prec()).unwrap().value;
        prop_assert!(a > 0.0);
        if s >= 0.0 {
            prop_assert!(b > a);
        }
    }
}
