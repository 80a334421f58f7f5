//! Linear recurrences with polynomial coefficients and the explicit moment
//! recurrence of the n-step walk.

use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{poly::primitive_scale, rat, Poly};

/// `Σ_j q_j(k) f(k+j) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceOperator {
    coeffs: Vec<Poly>,
}

impl RecurrenceOperator {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        RecurrenceOperator { coeffs }
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Largest coefficient degree.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// Divides out the common polynomial factor and scales to content-free
    /// integer coefficients with a positive leading coefficient on `q_λ`.
    pub fn normalized(&self) -> Self {
        let g = self
            .coeffs
            .iter()
            .fold(Poly::zero(), |g, q| if g.is_zero() { q.monic() } else { g.gcd(q) });
        if g.is_zero() {
            return self.clone();
        }
        let reduced: Vec<Poly> = self.coeffs.iter().map(|q| q.div_rem(&g).0).collect();
        match primitive_scale(&reduced) {
            Some(s) => RecurrenceOperator::new(reduced.iter().map(|q| q.scale(&s)).collect()),
            None => RecurrenceOperator::new(reduced),
        }
    }

    /// `Σ_j q_j(k) f[k+j]`; `f` must extend to index `k + order`.
    pub fn apply(&self, f: &[BigRational], k: usize) -> BigRational {
        let kk = rat(k as i64);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, q)| q.eval(&kk) * &f[k + j])
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Coefficients `q_j(k)` at a real `k`.
    pub fn coeffs_at(&self, k: f64) -> Vec<f64> {
        self.coeffs.iter().map(|q| q.eval_f64(k)).collect()
    }

    /// Same as [`Self::coeffs_at`], but each `q_j` is re-expanded exactly
    /// around the nearest integer first, which keeps full relative accuracy
    /// next to integer roots such as `(k+1)^3` at `k ≈ -1`.
    pub fn coeffs_near(&self, k: f64) -> Vec<f64> {
        let k0 = k.round();
        if !k0.is_finite() || k0.abs() > 1e6 {
            return self.coeffs_at(k);
        }
        let d = k - k0;
        let c = rat(k0 as i64);
        self.coeffs
            .iter()
            .map(|q| q.substitute_linear(&BigRational::one(), &c).eval_f64(d))
            .collect()
    }

    /// `Σ_j lc_d(q_j) x^j` where `lc_d` is the coefficient of `k^d` at the
    /// maximal degree `d`.
    pub fn characteristic_polynomial(&self) -> Poly {
        let d = self.degree();
        Poly::from_coeffs(self.coeffs.iter().map(|q| q.coeff(d)).collect())
    }

    /// Operator for `g(k) = f(k + m)`.
    pub fn shifted(&self, m: i64) -> Self {
        let one = BigRational::one();
        RecurrenceOperator::new(
            self.coeffs
                .iter()
                .map(|q| q.substitute_linear(&one, &rat(m)))
                .collect(),
        )
    }
}

impl Add for &RecurrenceOperator {
    type Output = RecurrenceOperator;
    fn add(self, o: &RecurrenceOperator) -> RecurrenceOperator {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[Poly], i: usize| v.get(i).cloned().unwrap_or_default();
        RecurrenceOperator::new((0..n).map(|i| &get(&self.coeffs, i) + &get(&o.coeffs, i)).collect())
    }
}

/// The order `⌈n/2⌉` of the moment recurrence.
pub fn walk_order(n: usize) -> usize {
    n.div_ceil(2)
}

/// Recurrence annihilating `f(k) = W_n(2k)`, built from the explicit sum over
/// gap-two sequences `n ≥ α_1 > α_2 + 1 > …` and normalized.
pub fn verrill_operator(n: usize) -> RecurrenceOperator {
    assert!(n >= 1);
    let lam = walk_order(n);
    let k = Poly::x();
    let lin = |c: i64| Poly::from_coeffs(vec![rat(c), BigRational::one()]); // k + c
    let pow = |p: &Poly, e: usize| (0..e).fold(Poly::one(), |acc, _| &acc * p);

    // dp[a] sums the weights of sequences of current length ending in α = a,
    // each factor carrying the extra (k - i + 1)^{n-1} that clears its denominator.
    let mut totals = vec![Poly::one()];
    let mut dp: Vec<Poly> = vec![Poly::zero(); n + 1];
    for i in 1..=lam {
        let num = lin(-(i as i64));
        let den = lin(1 - i as i64);
        let mut next = vec![Poly::zero(); n + 1];
        for a in 1..=n {
            let prefix = if i == 1 {
                Poly::one()
            } else {
                let mut s = Poly::zero();
                for prev in a + 2..=n {
                    s += &dp[prev];
                }
                s
            };
            if prefix.is_zero() {
                continue;
            }
            let c = rat(-(a as i64) * (n as i64 + 1 - a as i64));
            let w = (&pow(&num, a - 1) * &pow(&den, n - a)).scale(&c);
            next[a] = &prefix * &w;
        }
        dp = next;
        let mut t = Poly::zero();
        for p in &dp {
            t += p;
        }
        totals.push(t);
    }

    // c_j multiplies f(k - j); bring every term over the common denominator.
    let kn1 = pow(&k, n + 1);
    let backward: Vec<Poly> = (0..=lam)
        .map(|j| {
            let mut c = &kn1 * &totals[j];
            for i in j + 1..=lam {
                c = &c * &pow(&lin(1 - i as i64), n - 1);
            }
            c
        })
        .collect();
    let forward: Vec<Poly> = (0..=lam)
        .map(|i| backward[lam - i].substitute_linear(&BigRational::one(), &rat(lam as i64)))
        .collect();
    RecurrenceOperator::new(forward).normalized()
}

/// `e_j = Σ_α ∏ (-α_i)(n+1-α_i)` over gap-two sequences in `1..=n` of length
/// `j`, for `j = 0..=max_len`.
pub fn gap_two_sums(n: usize, max_len: usize, weight: impl Fn(usize) -> BigInt) -> Vec<BigInt> {
    // ending[a]: total weight of sequences whose last (largest) entry is a
    let mut out = vec![BigInt::one()];
    let mut ending: Vec<BigInt> = (0..=n)
        .map(|a| if a >= 1 { weight(a) } else { BigInt::zero() })
        .collect();
    for _ in 1..=max_len {
        out.push(ending.iter().sum());
        let mut prefix = BigInt::zero();
        let mut next = vec![BigInt::zero(); n + 1];
        for a in 1..=n {
            if a >= 3 {
                prefix += &ending[a - 2];
            }
            next[a] = &prefix * weight(a);
        }
        ending = next;
    }
    out
}

/// Characteristic polynomial of the moment recurrence, from the leading-order
/// part of the explicit sum: `Σ_j e_j x^{λ-j}`.
pub fn char_poly(n: usize) -> Poly {
    let lam = walk_order(n);
    let e = gap_two_sums(n, lam, |a| BigInt::from(-(a as i64) * (n as i64 + 1 - a as i64)));
    Poly::from_coeffs((0..=lam).map(|i| BigRational::from_integer(e[lam - i].clone())).collect())
}

/// `∏ (x - m²)` over `1 ≤ m ≤ n`, `m ≡ n (mod 2)`.
pub fn char_poly_product(n: usize) -> Poly {
    // integer arithmetic; this runs for n in the hundreds
    let mut c = vec![BigInt::one()];
    for m in (1..=n).filter(|m| (n - m) % 2 == 0) {
        let r = BigInt::from(m * m);
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * &r;
        }
        c = next;
    }
    Poly::from_coeffs(c.into_iter().map(BigRational::from_integer).collect())
}

/// Applies the recurrence in the moment variable: `Σ_j q_j(s/2) W(s + 2j)`.
pub fn s_form_residual(op: &RecurrenceOperator, s: f64, w: impl Fn(f64) -> f64) -> f64 {
    op.coeffs_at(s / 2.0)
        .iter()
        .enumerate()
        .map(|(j, q)| q * w(s + 2.0 * j as f64))
        .sum()
}

/// Small helper for tests and reports: integer value of a rational.
pub fn as_i128(r: &BigRational) -> Option<i128> {
    if r.is_integer() {
        r.to_integer().to_i128()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_and_four_step_forms() {
        let op3 = verrill_operator(3);
        assert_eq!(op3.coeffs()[2], Poly::from_i64(&[4, 4, 1]));
        assert_eq!(op3.coeffs()[1], Poly::from_i64(&[-23, -30, -10]));
        assert_eq!(op3.coeffs()[0], Poly::from_i64(&[9, 18, 9]));
        let op4 = verrill_operator(4);
        assert_eq!(op4.coeffs()[2], Poly::from_i64(&[8, 12, 6, 1]));
        // -2(2k+3)(5k²+15k+12)
        let mid = Poly::from_i64(&[3, 2]) * Poly::from_i64(&[12, 15, 5]);
        assert_eq!(op4.coeffs()[1], mid.scale(&rat(-2)));
        assert_eq!(op4.coeffs()[0], Poly::from_i64(&[1, 3, 3, 1]).scale(&rat(64)));
    }

    #[test]
    fn order_and_degree() {
        for n in 1..=9 {
            let op = verrill_operator(n);
            assert_eq!(op.order(), walk_order(n), "n={n}");
            assert_eq!(op.degree(), n - 1, "n={n}");
        }
    }

    #[test]
    fn char_poly_small_cases() {
        assert_eq!(char_poly(3), Poly::from_i64(&[9, -10, 1]));
        assert_eq!(char_poly(4), Poly::from_i64(&[64, -20, 1]));
        for n in 1..=10 {
            assert_eq!(char_poly(n), char_poly_product(n), "n={n}");
            assert_eq!(verrill_operator(n).characteristic_polynomial().monic(), char_poly(n));
        }
    }

    #[test]
    fn recentred_coefficients_near_root() {
        let op = verrill_operator(4);
        // q_0(k) = 64(k+1)^3
        let d: f64 = 5e-4;
        let q = op.coeffs_near(-1.0 + d);
        assert!((q[0] / (64.0 * d.powi(3)) - 1.0).abs() < 1e-12, "{}", q[0]);
        let far = op.coeffs_near(2.3);
        for (a, b) in far.iter().zip(op.coeffs_at(2.3)) {
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn three_step_s_form_at_zero() {
        // 16·15 − 92·3 + 36 = 0
        let w = |s: f64| match s as i64 {
            0 => 1.0,
            2 => 3.0,
            4 => 15.0,
            _ => unreachable!(),
        };
        let op = verrill_operator(3);
        assert_eq!(s_form_residual(&op, 0.0, w) * 4.0, 16.0 * 15.0 - 92.0 * 3.0 + 36.0);
    }
}
