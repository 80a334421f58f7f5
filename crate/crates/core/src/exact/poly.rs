//! Dense univariate polynomials with big-rational coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Coefficients stored low degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// `c·x^n`.
    pub fn monomial(c: BigRational, n: usize) -> Self {
        let mut v = vec![BigRational::zero(); n + 1];
        v[n] = c;
        Poly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `∏ (x - r)`.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            acc * Poly::from_coeffs(vec![-r.clone(), BigRational::one()])
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^n`.
    pub fn shift_up(&self, n: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigRational::zero(); n];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }

    /// `p(a·x + b)`.
    pub fn substitute_linear(&self, a: &BigRational, b: &BigRational) -> Poly {
        self.compose(&Poly::from_coeffs(vec![b.clone(), a.clone()]))
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut r = self.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.leading() / &lead;
            let k = rd - dd;
            q[k] = c.clone();
            r = &r - &(d.shift_up(k).scale(&c));
        }
        (Poly::from_coeffs(q), r)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.leading();
        self.scale(&(BigRational::one() / l))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales to integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        primitive_scale(&[self.clone()]).map(|s| self.scale(&s)).unwrap_or_default()
    }

    /// Integer coefficients, if all coefficients are integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
            .collect()
    }

    pub fn to_string_in(&self, var: &str) -> String {
        format_poly(self, var)
    }
}

/// The rational factor that turns the given polynomials jointly into
/// content-free integer polynomials with positive leading coefficient on the
/// last nonzero polynomial.
pub fn primitive_scale(polys: &[Poly]) -> Option<BigRational> {
    let mut den = BigInt::one();
    for p in polys {
        for c in p.coeffs() {
            den = den.lcm(c.denom());
        }
    }
    let mut g = BigInt::zero();
    for p in polys {
        for c in p.coeffs() {
            let v = (c * BigRational::from_integer(den.clone())).to_integer();
            g = g.gcd(&v);
        }
    }
    if g.is_zero() {
        return None;
    }
    let lead = polys.iter().rev().find(|p| !p.is_zero())?.leading();
    let sign = if lead.is_negative() { -1 } else { 1 };
    Some(BigRational::new(den * sign, g))
}

fn format_poly(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let body = match i {
            0 => format!("{a}"),
            _ => {
                let mono = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if a.is_one() {
                    mono
                } else {
                    format!("{a}*{mono}")
                }
            }
        };
        out.push_str(&body);
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, "x"))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + o.coeff(i));
        }
        Poly::from_coeffs(v)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - o.coeff(i));
        }
        Poly::from_coeffs(v)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, o: &Poly) {
        *self = &*self + o;
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|v| Poly::from_i64(&v))
    }

    #[test]
    fn basic_arithmetic() {
        let p = Poly::from_i64(&[-1, 0, 1]); // x² - 1
        let q = Poly::from_i64(&[1, 1]);
        let (d, r) = p.div_rem(&q);
        assert_eq!(d, Poly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(p.eval(&rat(3)), rat(8));
        assert_eq!(p.to_string(), "x^2 - 1");
        assert_eq!(Poly::from_roots(&[rat(1), rat(9)]), Poly::from_i64(&[9, -10, 1]));
    }

    #[test]
    fn gcd_and_primitive() {
        let a = Poly::from_i64(&[-1, 0, 1]) * Poly::from_i64(&[2, 1]);
        let b = Poly::from_i64(&[1, 1]) * Poly::from_i64(&[5, 0, 1]);
        assert_eq!(a.gcd(&b), Poly::from_i64(&[1, 1]));
        let p = Poly::from_coeffs(vec![ratio(-1, 2), ratio(-3, 4)]);
        assert_eq!(p.primitive(), Poly::from_i64(&[2, 3]));
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn division_identity(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }

        #[test]
        fn compose_evaluates(a in arb_poly(), b in arb_poly(), x in -5i64..5) {
            let x = rat(x);
            prop_assert_eq!(a.compose(&b).eval(&x), a.eval(&b.eval(&x)));
        }
    }
}
