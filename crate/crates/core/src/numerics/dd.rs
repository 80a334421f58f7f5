//! Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 31 significant decimal digits.
//!
//! Only the operations needed by the series kernels are provided.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };
    pub const PI: DD = DD {
        hi: 3.141_592_653_589_793,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const FRAC_PI_2: DD = DD {
        hi: 1.570_796_326_794_896_6,
        lo: 6.123_233_995_736_766e-17,
    };
    pub const LN_2: DD = DD {
        hi: 0.693_147_180_559_945_3,
        lo: 2.319_046_813_846_299_6e-17,
    };

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        DD { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    /// Exact quotient `p/q` of two integers (as far as double-double allows).
    pub fn from_ratio(p: i64, q: i64) -> Self {
        DD::from_f64(p as f64) / DD::from_f64(q as f64)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = self.lo.mul_add(b, e);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }

    pub fn recip(self) -> Self {
        DD::ONE / self
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn powi(self, mut n: i32) -> Self {
        if n == 0 {
            return DD::ONE;
        }
        let invert = n < 0;
        n = n.abs();
        let mut base = self;
        let mut acc = DD::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        if invert {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                DD::ZERO
            } else {
                DD::from_f64(f64::NAN)
            };
        }
        // one Newton step on the f64 estimate doubles the digits
        let x = self.hi.sqrt();
        let xd = DD::from_f64(x);
        let r = self - xd * xd;
        xd + DD::from_f64(r.hi / (2.0 * x))
    }

    pub fn cbrt(self) -> Self {
        if self.hi == 0.0 {
            return DD::ZERO;
        }
        let mut y = DD::from_f64(self.hi.cbrt());
        for _ in 0..2 {
            // y <- y - (y^3 - a)/(3 y^2)
            let y2 = y * y;
            let f = y2 * y - self;
            y = y - f / (y2.mul_f64(3.0));
        }
        y
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DD::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DD::ZERO;
        }
        let k = (self.hi / DD::LN_2.hi).round();
        let r = self - DD::LN_2.mul_f64(k);
        // scale down by 2^4 and square back up
        let r = r.mul_f64(1.0 / 16.0);
        let mut term = DD::ONE;
        let mut sum = DD::ONE;
        for n in 1..30 {
            term = term * r / DD::from_f64(n as f64);
            sum += term;
            if term.hi.abs() < 1e-34 * sum.hi.abs() {
                break;
            }
        }
        for _ in 0..4 {
            sum = sum * sum;
        }
        sum.ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return DD::from_f64(f64::NAN);
        }
        let mut y = DD::from_f64(self.hi.ln());
        for _ in 0..2 {
            // y <- y + a e^{-y} - 1
            y = y + self * (-y).exp() - DD::ONE;
        }
        y
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        DD {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    /// Returns `(sin x, cos x)`.
    pub fn sin_cos(self) -> (DD, DD) {
        // reduce by pi/2
        let q = (self.hi / DD::FRAC_PI_2.hi).round();
        let r = self - DD::FRAC_PI_2.mul_f64(q);
        let r2 = r * r;
        let mut s = r;
        let mut term = r;
        let mut c = DD::ONE;
        let mut cterm = DD::ONE;
        for n in 1..40 {
            let k = (2 * n) as f64;
            term = -(term * r2) / DD::from_f64(k * (k + 1.0));
            cterm = -(cterm * r2) / DD::from_f64((k - 1.0) * k);
            s += term;
            c += cterm;
            if term.hi.abs() < 1e-34 && cterm.hi.abs() < 1e-34 {
                break;
            }
        }
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD::from_f64(x)
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, b: DD) -> DD {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        DD { hi, lo }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = self.hi.mul_add(b.lo, e);
        let e = self.lo.mul_add(b.hi, e);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::from_f64(q3)
    }
}

impl AddAssign for DD {
    fn add_assign(&mut self, b: DD) {
        *self = *self + b;
    }
}

impl SubAssign for DD {
    fn sub_assign(&mut self, b: DD) {
        *self = *self - b;
    }
}

impl MulAssign for DD {
    fn mul_assign(&mut self, b: DD) {
        *self = *self * b;
    }
}

impl PartialOrd for DD {
    fn partial_cmp(&self, other: &DD) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl fmt::Display for DD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} + {:.3e}", self.hi, self.lo)
    }
}
