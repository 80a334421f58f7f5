//! Minimal scalar abstraction so the series kernels can run in `f64` or [`DD`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::dd::DD;

pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn cbrt(self) -> Self;
    fn abs(self) -> Self;
    /// Unit roundoff of the representation.
    fn epsilon() -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn cbrt(self) -> Self {
        f64::cbrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

impl Real for DD {
    fn from_f64(x: f64) -> Self {
        DD::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        DD::to_f64(self)
    }
    fn sqrt(self) -> Self {
        DD::sqrt(self)
    }
    fn cbrt(self) -> Self {
        DD::cbrt(self)
    }
    fn abs(self) -> Self {
        DD::abs(self)
    }
    fn epsilon() -> f64 {
        4.93e-32
    }
}
