//! Differential operators in `θ = x·d/dx`, their `D_x` expansion, and the
//! Mellin translation of moment recurrences.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::recurrence::RecurrenceOperator;
use crate::exact::{poly::primitive_scale, rat, ratio, Poly};

/// `Σ_m x^m P_m(θ)`, stored by power of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThetaOperator {
    by_power: Vec<Poly>,
}

impl ThetaOperator {
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Poly)>) -> Self {
        let mut by_power: Vec<Poly> = Vec::new();
        for (m, p) in terms {
            if by_power.len() <= m {
                by_power.resize(m + 1, Poly::zero());
            }
            by_power[m] += &p;
        }
        while by_power.last().is_some_and(|p| p.is_zero()) {
            by_power.pop();
        }
        ThetaOperator { by_power }
    }

    /// Nonzero `(x_power, θ-polynomial)` pairs in increasing power.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.by_power.iter().enumerate().filter(|(_, p)| !p.is_zero())
    }

    pub fn theta_poly(&self, power: usize) -> Poly {
        self.by_power.get(power).cloned().unwrap_or_default()
    }

    pub fn theta_degree(&self) -> usize {
        self.by_power.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn max_power(&self) -> usize {
        self.by_power.len().saturating_sub(1)
    }

    /// Content-free integer coefficients, positive leading coefficient on the
    /// highest power of `x`.
    pub fn normalized(&self) -> Self {
        match primitive_scale(&self.by_power) {
            Some(s) => ThetaOperator {
                by_power: self.by_power.iter().map(|p| p.scale(&s)).collect(),
            },
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ThetaOperator::from_terms(self.terms().map(|(m, p)| (m, p.scale(c))))
    }

    /// Rewrites `θ^m = Σ_j S(m, j) x^j D_x^j`.
    pub fn to_dx(&self) -> DxOperator {
        let deg = self.theta_degree();
        let stirling = stirling2_table(deg);
        let mut coeffs = vec![Poly::zero(); deg + 1];
        for (m, p) in self.terms() {
            for (j, slot) in coeffs.iter_mut().enumerate() {
                let mut c = BigRational::zero();
                for (e, pe) in p.coeffs().iter().enumerate() {
                    if e >= j {
                        c += pe * BigRational::from_integer(stirling[e][j].clone());
                    }
                }
                if !c.is_zero() {
                    *slot += &Poly::monomial(c, m + j);
                }
            }
        }
        DxOperator::new(coeffs)
    }

    /// Pretty form such as `x^4 (θ+1)^3 - 4 x^2 θ (5θ^2+3) + 64 (θ-1)^3`.
    pub fn pretty(&self) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (m, p) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let (neg, body) = factored(p, "θ");
            let xpart = match m {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{m}"),
            };
            parts.push((neg, join_factors(&[body.0, xpart], &body.1)));
        }
        join_signed(parts)
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// `Σ_j c_j(x) D_x^j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DxOperator {
    coeffs: Vec<Poly>,
}

impl DxOperator {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        DxOperator { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `D_x^j`.
    pub fn coeff(&self, j: usize) -> Poly {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Poly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// `(order, coefficient)` pairs from the highest order down.
    pub fn terms(&self) -> Vec<(usize, Poly)> {
        self.coeffs.iter().cloned().enumerate().rev().filter(|(_, p)| !p.is_zero()).collect()
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut d = f.clone();
        let mut acc = Poly::zero();
        for c in &self.coeffs {
            acc += &(c * &d);
            d = d.derivative();
        }
        acc
    }

    pub fn pretty(&self) -> String {
        let mut parts = Vec::new();
        for (j, p) in self.terms() {
            let (neg, body) = factored(&p, "x");
            let d = match j {
                0 => String::new(),
                1 => "D_x".to_string(),
                _ => format!("D_x^{j}"),
            };
            let lhs = join_factors(&[body.0, String::new()], &body.1);
            let text = match (lhs.is_empty(), d.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => d,
                (false, true) => lhs,
                (false, false) => format!("{lhs} {d}"),
            };
            parts.push((neg, text));
        }
        join_signed(parts)
    }
}

impl fmt::Display for DxOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Translates a recurrence for `f(k) = W(2k)` into the operator annihilating
/// the inverse Mellin transform of `W(s-1)`:
/// `Σ_i q_i(k) f(k+i) ↦ Σ_i x^{2i} q_i((-θ-2i-1)/2)`, normalized.
pub fn mellin_translate(rec: &RecurrenceOperator) -> ThetaOperator {
    let half = ratio(-1, 2);
    let terms = rec.coeffs().iter().enumerate().map(|(i, q)| {
        let shift = ratio(-(2 * i as i64 + 1), 2);
        (2 * i, q.substitute_linear(&half, &shift))
    });
    ThetaOperator::from_terms(terms).normalized()
}

/// Operator in `θ = z d/dz` annihilating `Σ_k f(k) z^k`:
/// `Σ_i z^{λ-i} q_i(θ - i)`, normalized.
pub fn generating_function_operator(rec: &RecurrenceOperator) -> ThetaOperator {
    let lam = rec.order();
    let one = BigRational::one();
    let terms = rec
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, q)| (lam - i, q.substitute_linear(&one, &rat(-(i as i64)))));
    ThetaOperator::from_terms(terms).normalized()
}

/// `θ`-identity on monomials: `θ^m x^e = e^m x^e`.
pub fn theta_to_dx(op: &ThetaOperator) -> DxOperator {
    op.to_dx()
}

fn stirling2_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for m in 1..=n {
        for j in 1..=m {
            s[m][j] = &s[m - 1][j - 1] + BigInt::from(j) * &s[m - 1][j];
        }
    }
    s
}

/// Splits `p` into sign, content, and a product of rational linear factors
/// times an irreducible-over-ℚ-roots remainder. Returns
/// `(negative, (content_string, factor_list))`.
fn factored(p: &Poly, var: &str) -> (bool, (String, Vec<String>)) {
    let neg = p.leading().is_negative();
    let prim = p.primitive();
    let content = if prim.is_zero() { BigRational::one() } else { (p.leading() / prim.leading()).abs() };
    let mut rest = prim;
    let mut roots: Vec<(BigRational, usize)> = Vec::new();
    for r in rational_root_candidates(&rest) {
        let mut mult = 0;
        let lin = Poly::from_coeffs(vec![-r.clone(), BigRational::one()]);
        while rest.degree().unwrap_or(0) >= 1 && rest.eval(&r).is_zero() {
            rest = rest.div_rem(&lin).0;
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    }
    roots.sort_by(|a, b| b.0.cmp(&a.0));
    let mut factors = Vec::new();
    for (r, m) in &roots {
        let exp = if *m > 1 { format!("^{m}") } else { String::new() };
        if r.is_zero() {
            factors.push(format!("{var}{exp}"));
            continue;
        }
        // q·var - p with integer q > 0
        let (num, den) = (r.numer().clone(), r.denom().clone());
        let lead = if den.is_one() { var.to_string() } else { format!("{den}{var}") };
        let sign = if num.is_negative() { "+" } else { "-" };
        factors.push(format!("({lead}{sign}{}){exp}", num.abs()));
    }
    // by Gauss's lemma the cofactor of the primitive linear factors is primitive
    let rest = rest.primitive();
    if rest.degree().unwrap_or(0) >= 1 {
        factors.push(format!("({})", compact(&rest, var)));
    }
    let content_str = if content.is_one() { String::new() } else { content.to_string() };
    (neg, (content_str, factors))
}

fn rational_root_candidates(p: &Poly) -> Vec<BigRational> {
    let Some(coeffs) = p.integer_coeffs() else { return Vec::new() };
    if coeffs.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if coeffs[0].is_zero() {
        out.push(BigRational::zero());
    }
    let Some(c0) = coeffs.iter().find(|c| !c.is_zero()).and_then(|c| c.abs().to_u64()) else {
        return out;
    };
    let Some(cl) = coeffs.last().and_then(|c| c.abs().to_u64()) else { return out };
    if c0 > 1_000_000_000_000 || cl > 1_000_000_000_000 {
        return out;
    }
    for q in divisors(cl) {
        for pnum in divisors(c0) {
            for s in [1i64, -1] {
                let r = BigRational::new(BigInt::from(pnum) * s, BigInt::from(q));
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            d.push(i);
            if i != n / i {
                d.push(n / i);
            }
        }
        i += 1;
    }
    d
}

/// Polynomial without spaces, highest power first: `5θ^2+3`.
fn compact(p: &Poly, var: &str) -> String {
    let mut s = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let a = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push(if c.is_negative() { '-' } else { '+' });
        }
        let coef = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        s.push_str(&coef);
        s.push_str(&mono);
    }
    s
}

fn join_factors(lead: &[String; 2], factors: &[String]) -> String {
    let mut head: Vec<&str> = lead.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
    let tail = factors.concat();
    if !tail.is_empty() {
        head.push(&tail);
    }
    head.join(" ")
}

fn join_signed(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        let body = if body.is_empty() { "1".to_string() } else { body };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomic::recurrence::verrill_operator;

    fn tp(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn theta_squared_on_monomials() {
        let op = ThetaOperator::from_terms([(0, tp(&[0, 0, 1]))]);
        let d = op.to_dx();
        assert_eq!(d.coeff(2), tp(&[0, 0, 1]));
        assert_eq!(d.coeff(1), tp(&[0, 1]));
        for e in 0..6usize {
            let m = Poly::monomial(rat(1), e);
            assert_eq!(d.apply(&m), m.scale(&rat((e * e) as i64)));
        }
    }

    #[test]
    fn four_step_pretty_form() {
        let a4 = mellin_translate(&verrill_operator(4));
        assert_eq!(a4.pretty(), "x^4 (θ+1)^3 - 4 x^2 θ(5θ^2+3) + 64 (θ-1)^3");
        let d = a4.to_dx();
        assert_eq!(d.leading(), tp(&[0, 0, 0, 64, 0, -20, 0, 1]));
    }
}
