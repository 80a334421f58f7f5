use walkdens::densities::{p2, p3, p4, p5, pn_quadrature, rayleigh, singular_abscissas, P3Method, P4Method, P5Method};
use walkdens::numerics::quad::tanh_sinh;
use walkdens::numerics::Precision;

fn density(n: usize, x: f64) -> f64 {
    let prec = Precision::default();
    let r = match n {
        2 => Ok(p2(x)),
        3 => p3(x, P3Method::Auto, &prec),
        4 => p4(x, P4Method::Auto, &prec),
        5 => p5(x, P5Method::Auto, &prec),
        _ => pn_quadrature(n, x, &prec),
    };
    r.unwrap_or_else(|e| panic!("p_{n}({x}): {e}")).value
}

/// `∫_0^n x^k p_n(x) dx`, split at the singular abscissas.
fn moment(n: usize, k: i32, tol: f64) -> f64 {
    let mut cuts = singular_abscissas(n);
    if cuts[0] != 0.0 {
        cuts.insert(0, 0.0);
    }
    cuts.windows(2)
        .map(|w| {
            // nodes that round onto an integrable pole carry no mass
            let f = |x: f64, _: f64, _: f64| {
                let v = x.powi(k) * density(n, x);
                if v.is_finite() { v } else { 0.0 }
            };
            tanh_sinh(&f, w[0], w[1], tol).unwrap_or_else(|e| panic!("n={n} k={k} {w:?}: {e}")).value
        })
        .sum()
}

#[test]
fn normalized_with_correct_second_moment() {
    for n in 2..=6 {
        let m0 = moment(n, 0, 1e-9);
        assert!((m0 - 1.0).abs() < 1e-6, "n={n}: ∫p = {m0}");
        let m2 = moment(n, 2, 1e-9);
        assert!((m2 - n as f64).abs() < 1e-6 * n as f64, "n={n}: ∫x²p = {m2}");
    }
}

#[test]
fn eight_steps_close_to_rayleigh() {
    let worst = (1..40)
        .map(|i| {
            let x = 0.2 * i as f64;
            (density(8, x) - rayleigh(8, x)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 0.02, "{worst}");
}

#[test]
fn three_step_routes_agree_off_the_singularity() {
    let prec = Precision::default();
    for i in 1..60 {
        let x = 0.05 * i as f64;
        if (x - 1.0).abs() < 0.05 {
            continue;
        }
        let a = p3(x, P3Method::Elliptic, &prec).unwrap().value;
        let b = p3(x, P3Method::Hyper, &prec).unwrap().value;
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "x={x}: {a} vs {b}");
    }
}

#[test]
fn four_step_quadrature_matches_closed_form() {
    let prec = Precision::default();
    for x in [0.3, 1.0, 1.7, 2.5, 3.2, 3.8] {
        let a = p4(x, P4Method::Auto, &prec).unwrap().value;
        let q = p4(x, P4Method::Quadrature, &prec).unwrap();
        assert!((a - q.value).abs() < 1e-8, "x={x}: {a} vs {}", q.value);
    }
}

#[test]
fn support_boundaries() {
    let prec = Precision::default();
    assert_eq!(p3(3.5, P3Method::Auto, &prec).unwrap().value, 0.0);
    assert_eq!(p4(4.0, P4Method::Auto, &prec).unwrap().value, 0.0);
    assert_eq!(p5(-0.1, P5Method::Auto, &prec).unwrap().value, 0.0);
    assert_eq!(p2(2.5).value, 0.0);
}
