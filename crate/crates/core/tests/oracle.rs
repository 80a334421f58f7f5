use proptest::prelude::*;
use walkdens::densities::{p2, p5, rayleigh, P5Method};
use walkdens::moments::{continue_by_functional_eq, direct_moment, w4_two_term};
use walkdens::numerics::quad::tanh_sinh;
use walkdens::numerics::Precision;
use walkdens::oracle::{estimate_density, estimate_moment, histogram_unchecked, sample_distances, RngSpec, WalkHistogram};

const N: u64 = 1_000_000;

fn within(sigmas: f64, mc: walkdens::moments::MomentValue, want: f64) {
    assert!((mc.value - want).abs() <= sigmas * mc.err, "{} ± {} vs {want}", mc.value, mc.err);
}

#[test]
fn moment_examples() {
    let p = Precision::default();
    within(3.0, estimate_moment(3, 2.0, N, &RngSpec::new(1, 0)).unwrap(), 3.0);
    let w = continue_by_functional_eq(4, -0.5, &p).unwrap().value;
    within(3.0, estimate_moment(4, -0.5, N, &RngSpec::new(2, 0)).unwrap(), w);
    // the two-term form excludes odd s; take its symmetric limit at 1
    let d = 1e-5;
    let w41 = 0.5 * (w4_two_term(1.0 - d, &p).unwrap().value + w4_two_term(1.0 + d, &p).unwrap().value);
    assert!((w41 - direct_moment(4, 1.0, &p).unwrap().value).abs() < 1e-8);
    within(3.0, estimate_moment(4, 1.0, N, &RngSpec::new(3, 0)).unwrap(), w41);

    let f = |x: f64, _: f64, _: f64| x * p5(x, P5Method::Auto, &p).unwrap().value;
    let q: f64 = [(0.0, 1.0), (1.0, 3.0), (3.0, 5.0)].iter().map(|&(a, b)| tanh_sinh(&f, a, b, 1e-10).unwrap().value).sum();
    within(3.0, estimate_moment(5, 1.0, N, &RngSpec::new(4, 0)).unwrap(), q);
}

#[test]
fn moment_rejects_small_s() {
    assert!(estimate_moment(3, -1.0, 100, &RngSpec::new(0, 0)).is_err());
    assert!(estimate_moment(0, 1.0, 100, &RngSpec::new(0, 0)).is_err());
}

#[test]
fn two_steps_below_one() {
    let d = sample_distances(2, N, &RngSpec::new(5, 0)).unwrap();
    assert!(d.iter().all(|&x| (0.0..=2.0).contains(&x)));
    let frac = d.iter().filter(|&&x| x <= 1.0).count() as f64 / N as f64;
    let want = tanh_sinh(&|x: f64, _: f64, _: f64| p2(x).value, 0.0, 1.0, 1e-12).unwrap().value;
    assert!((want - 1.0 / 3.0).abs() < 1e-10);
    let sigma = (want * (1.0 - want) / N as f64).sqrt();
    assert!((frac - want).abs() < 3.0 * sigma, "{frac}");
}

#[test]
fn five_step_mode() {
    let h = estimate_density(5, 100, N, &RngSpec::new(6, 0)).unwrap();
    let dens = h.density();
    let bin = (0..100).max_by(|&a, &b| dens[a].total_cmp(&dens[b])).unwrap();
    let p = Precision::default();
    let x_star = (1..5000)
        .map(|i| i as f64 * 1e-3)
        .max_by(|&a, &b| {
            let pa = p5(a, P5Method::Auto, &p).unwrap().value;
            let pb = p5(b, P5Method::Auto, &p).unwrap().value;
            pa.total_cmp(&pb)
        })
        .unwrap();
    let want = (x_star / h.width(0)).floor() as i64;
    assert!((bin as i64 - want).abs() <= 2, "histogram mode in bin {bin}, p5 peaks at {x_star}");
}

#[test]
fn eight_steps_near_rayleigh() {
    let h = estimate_density(8, 100, N, &RngSpec::new(7, 0)).unwrap();
    let worst = h
        .density()
        .iter()
        .enumerate()
        .map(|(i, d)| (d - rayleigh(8, 0.5 * (h.edges[i] + h.edges[i + 1]))).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.02, "{worst}");
}

#[test]
fn histogram_guards() {
    let r = RngSpec::new(0, 0);
    assert!(estimate_density(3, 9, N, &r).is_err());
    assert!(estimate_density(3, 60, 9_999, &r).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn histograms_reproducible_and_normalized(n in 1usize..=8, seed in any::<u64>(), bins in 10usize..120) {
        let r = RngSpec::new(seed, 3);
        let a = histogram_unchecked(n, bins, 5_000, &r);
        let b = histogram_unchecked(n, bins, 5_000, &r);
        prop_assert_eq!(&a, &b);
        let mass: f64 = a.density().iter().enumerate().map(|(i, d)| d * a.width(i)).sum();
        prop_assert!((mass - 1.0).abs() < 1e-12);
        prop_assert_eq!(a.counts.iter().sum::<u64>(), 5_000);
    }

    #[test]
    fn merge_is_associative_and_commutative(seeds in proptest::array::uniform3(any::<u64>())) {
        let h: Vec<WalkHistogram> = seeds.iter().map(|&s| histogram_unchecked(4, 40, 2_000, &RngSpec::new(s, 0))).collect();
        let mut left = h[0].clone();
        left.merge(&h[1]).unwrap();
        left.merge(&h[2]).unwrap();
        let mut right = h[1].clone();
        right.merge(&h[2]).unwrap();
        let mut swapped = right.clone();
        right.merge(&h[0]).unwrap();
        let mut tail = h[0].clone();
        tail.merge(&swapped).unwrap();
        swapped = tail;
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &swapped);
    }
}

#[test]
fn merge_rejects_other_binning() {
    let mut a = WalkHistogram::empty(3, 20);
    assert!(a.merge(&WalkHistogram::empty(3, 30)).is_err());
    assert!(a.merge(&WalkHistogram::empty(4, 20)).is_err());
}
