//! Dense bivariate polynomials `Σ c_{ij} X^i u^j` over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{rat, Poly};

/// Stored as polynomials in `X` indexed by the power of `u`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivarPoly {
    by_u: Vec<Poly>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly { by_u: Vec::new() }
    }

    pub fn one() -> Self {
        BivarPoly::from_x_poly(Poly::one())
    }

    /// Polynomial in `X` only.
    pub fn from_x_poly(p: Poly) -> Self {
        BivarPoly::from_u_coeffs(vec![p])
    }

    /// `Σ_j p_j(X) u^j`.
    pub fn from_u_coeffs(mut by_u: Vec<Poly>) -> Self {
        while by_u.last().is_some_and(|p| p.is_zero()) {
            by_u.pop();
        }
        BivarPoly { by_u }
    }

    pub fn x() -> Self {
        BivarPoly::from_x_poly(Poly::x())
    }

    pub fn u() -> Self {
        BivarPoly::from_u_coeffs(vec![Poly::zero(), Poly::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        BivarPoly::from_x_poly(Poly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.by_u.is_empty()
    }

    pub fn u_degree(&self) -> Option<usize> {
        self.by_u.len().checked_sub(1)
    }

    /// Coefficient of `u^j` as a polynomial in `X`.
    pub fn u_coeff(&self, j: usize) -> Poly {
        self.by_u.get(j).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        self.u_coeff(j).coeff(i)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        BivarPoly::from_u_coeffs(self.by_u.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_x_poly(&self, p: &Poly) -> Self {
        BivarPoly::from_u_coeffs(self.by_u.iter().map(|q| q * p).collect())
    }

    pub fn mul_u(&self) -> Self {
        if self.is_zero() {
            return BivarPoly::zero();
        }
        let mut v = vec![Poly::zero()];
        v.extend(self.by_u.iter().cloned());
        BivarPoly::from_u_coeffs(v)
    }

    /// Specialize `X` to a value, leaving a polynomial in `u`.
    pub fn eval_x(&self, x: &BigRational) -> Poly {
        Poly::from_coeffs(self.by_u.iter().map(|p| p.eval(x)).collect())
    }

    /// `P(u ↦ -u)`.
    pub fn negate_u(&self) -> Self {
        BivarPoly::from_u_coeffs(
            self.by_u
                .iter()
                .enumerate()
                .map(|(j, p)| if j % 2 == 1 { -p } else { p.clone() })
                .collect(),
        )
    }

    /// Substitute bivariate polynomials for both variables.
    pub fn compose(&self, x: &BivarPoly, u: &BivarPoly) -> BivarPoly {
        let mut acc = BivarPoly::zero();
        for pj in self.by_u.iter().rev() {
            // inner Horner in X
            let mut inner = BivarPoly::zero();
            for c in pj.coeffs().iter().rev() {
                inner = &(&inner * x) + &BivarPoly::constant(c.clone());
            }
            acc = &(&acc * u) + &inner;
        }
        acc
    }

    /// Monic in `u` (leading `u`-coefficient is the constant 1).
    pub fn is_monic_in_u(&self) -> bool {
        self.by_u.last().is_some_and(|p| *p == Poly::one())
    }
}

impl<'a> Add<&'a BivarPoly> for &'a BivarPoly {
    type Output = BivarPoly;
    fn add(self, o: &BivarPoly) -> BivarPoly {
        let n = self.by_u.len().max(o.by_u.len());
        BivarPoly::from_u_coeffs((0..n).map(|j| &self.u_coeff(j) + &o.u_coeff(j)).collect())
    }
}

impl<'a> Sub<&'a BivarPoly> for &'a BivarPoly {
    type Output = BivarPoly;
    fn sub(self, o: &BivarPoly) -> BivarPoly {
        let n = self.by_u.len().max(o.by_u.len());
        BivarPoly::from_u_coeffs((0..n).map(|j| &self.u_coeff(j) - &o.u_coeff(j)).collect())
    }
}

impl<'a> Mul<&'a BivarPoly> for &'a BivarPoly {
    type Output = BivarPoly;
    fn mul(self, o: &BivarPoly) -> BivarPoly {
        if self.is_zero() || o.is_zero() {
            return BivarPoly::zero();
        }
        let mut v = vec![Poly::zero(); self.by_u.len() + o.by_u.len() - 1];
        for (i, a) in self.by_u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.by_u.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        BivarPoly::from_u_coeffs(v)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        self.scale(&rat(-1))
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, p) in self.by_u.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            let single = p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
            let ps = p.to_string_in("X");
            let mono = match j {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{j}"),
            };
            let (neg, body) = if single && p.leading().is_negative() {
                (true, (-p).to_string_in("X"))
            } else {
                (false, ps)
            };
            let text = if j == 0 {
                if single { body } else { format!("({body})") }
            } else if body == "1" {
                mono
            } else if single {
                format!("{body}*{mono}")
            } else {
                format!("({body})*{mono}")
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            f.write_str(&text)?;
        }
        let _ = BigRational::one();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_swaps_variables() {
        // P = X + 2u² ; P(u, X) = u + 2X²
        let p = &BivarPoly::x() + &BivarPoly::u().mul_u().scale(&rat(2));
        let q = p.compose(&BivarPoly::u(), &BivarPoly::x());
        assert_eq!(q.coeff(0, 1), rat(1));
        assert_eq!(q.coeff(2, 0), rat(2));
        assert_eq!(q.coeff(1, 0), rat(0));
    }

    #[test]
    fn display() {
        let p = &(&BivarPoly::u().mul_u() - &BivarPoly::x()) + &BivarPoly::one();
        assert_eq!(p.to_string(), "u^2 + (-X + 1)");
    }
}
