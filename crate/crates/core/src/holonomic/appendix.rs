//! The gap-two polynomials `F_{M,k}`, their generating polynomials `Φ_M`, and
//! exact checks of the identities relating them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::recurrence::{char_poly, gap_two_sums, walk_order};
use crate::error::{Result, WalkError};
use crate::exact::{rat, BivarPoly, Poly};

pub const MAX_FMK_M: usize = 40;
pub const MAX_ZAGIER_N: usize = 60;
pub const MAX_ZAGIER_J: usize = 12;
pub const MAX_APPENDIX_M: usize = 20;
pub const MAX_APPENDIX_N: usize = 10;

fn guard(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(WalkError::GuardExceeded(msg()))
    }
}

/// Both sides of the gap-two / squared-odd-part identity:
/// `Σ_{0≤m_1<…<m_j<n/2} ∏(n-2m_i)²` and
/// `Σ_{1≤α_1, α_i≤α_{i+1}-2, α_j≤n} ∏α_i(n+1-α_i)`.
pub fn zagier_sides(n: usize, j: usize) -> Result<(BigInt, BigInt)> {
    guard(n >= 1 && j >= 1, || "n and j must be positive".into())?;
    guard(n <= MAX_ZAGIER_N && j <= MAX_ZAGIER_J, || {
        format!("zagier_sides({n}, {j}) beyond n ≤ {MAX_ZAGIER_N}, j ≤ {MAX_ZAGIER_J}")
    })?;
    let squares: Vec<BigInt> = (0..)
        .take_while(|m| 2 * m < n)
        .map(|m| BigInt::from((n - 2 * m) * (n - 2 * m)))
        .collect();
    let lhs = elementary_symmetric(&squares, j).pop().unwrap();
    let rhs = gap_two_sums(n, j, |a| BigInt::from(a * (n + 1 - a))).pop().unwrap();
    Ok((lhs, rhs))
}

/// `σ_0, …, σ_j` of the given values.
pub fn elementary_symmetric(values: &[BigInt], j: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); j + 1];
    e[0] = BigInt::one();
    for v in values {
        for i in (1..=j).rev() {
            let t = &e[i - 1] * v;
            e[i] += t;
        }
    }
    e
}

/// `F_{M,k}(X) = Σ_{0<j_1<…<j_k<M, gaps ≥ 2} ∏ j_s(X - j_s)`.
pub fn fmk_poly(m: usize, k: usize) -> Result<Poly> {
    guard(m <= MAX_FMK_M, || format!("fmk_poly: M = {m} exceeds {MAX_FMK_M}"))?;
    Ok(fmk_all(m, k).swap_remove(k))
}

/// `F_{M,0}, …, F_{M,k}` via a sweep over the last chosen index.
fn fmk_all(m: usize, kmax: usize) -> Vec<Poly> {
    let factor = |j: usize| Poly::from_coeffs(vec![rat(-((j * j) as i64)), rat(j as i64)]);
    let mut out = vec![Poly::one()];
    // ending[j]: sum over tuples of the current length whose last entry is j
    let mut ending: Vec<Poly> = (0..m).map(|j| if j >= 1 { factor(j) } else { Poly::zero() }).collect();
    for _ in 1..=kmax {
        let mut total = Poly::zero();
        for p in &ending {
            total += p;
        }
        out.push(total);
        let mut prefix = Poly::zero();
        let mut next = vec![Poly::zero(); m];
        for j in 1..m {
            if j >= 3 {
                prefix += &ending[j - 2];
            }
            next[j] = &prefix * &factor(j);
        }
        ending = next;
    }
    out
}

/// `Φ_M(X, u)` from `Φ_{M+1} = uΦ_M − M(X−M)Φ_{M−1}`.
pub fn phi_poly(m: usize) -> Result<BivarPoly> {
    guard(m <= MAX_FMK_M, || format!("phi_poly: M = {m} exceeds {MAX_FMK_M}"))?;
    Ok(phi_sequence(m).pop().unwrap())
}

fn phi_sequence(m: usize) -> Vec<BivarPoly> {
    let mut v = vec![BivarPoly::one(), BivarPoly::u()];
    for i in 1..m {
        let c = Poly::from_coeffs(vec![rat(-((i * i) as i64)), rat(i as i64)]); // i(X - i)
        let next = &v[i].mul_u() - &v[i - 1].mul_x_poly(&c);
        v.push(next);
    }
    v.truncate(m + 1);
    v
}

/// `Σ_k (-1)^k F_{M,k}(X) u^{M-2k}`.
pub fn phi_from_fmk(m: usize) -> BivarPoly {
    let f = fmk_all(m, m / 2);
    let mut by_u = vec![Poly::zero(); m + 1];
    for (k, fk) in f.iter().enumerate() {
        by_u[m - 2 * k] = if k % 2 == 0 { fk.clone() } else { -fk };
    }
    BivarPoly::from_u_coeffs(by_u)
}

/// `P_M(u) = ∏_{|λ|<M, λ ≢ M (mod 2)} (u − λ)`.
pub fn p_m(m: usize) -> Poly {
    let mi = m as i64;
    let roots: Vec<BigRational> = (1 - mi..mi)
        .filter(|l| (l - mi).rem_euclid(2) == 1)
        .map(rat)
        .collect();
    Poly::from_roots(&roots)
}

/// `C(t, j)` as a polynomial in `t`.
fn binomial_poly(j: usize) -> Poly {
    let mut p = Poly::one();
    for i in 0..j {
        p = &p * &Poly::from_coeffs(vec![rat(-(i as i64)), rat(1)]);
    }
    p.scale(&(BigRational::one() / factorial(j)))
}

fn factorial(n: usize) -> BigRational {
    (1..=n).fold(BigRational::one(), |a, i| a * rat(i as i64))
}

/// `G_M(x, y) = Σ_j (-1)^j C(x,j) C(y,M-j)` with `x ↦ X`, `y ↦ u`.
pub fn g_poly(m: usize) -> BivarPoly {
    let mut acc = BivarPoly::zero();
    for j in 0..=m {
        let cx = BivarPoly::from_x_poly(binomial_poly(j));
        let cy = binomial_poly(m - j);
        let cy = BivarPoly::from_u_coeffs(cy.coeffs().iter().map(|c| Poly::constant(c.clone())).collect());
        let t = &cx * &cy;
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl IdentityCheck {
    fn new(name: &'static str) -> Self {
        IdentityCheck { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(case());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub checks: Vec<IdentityCheck>,
}

impl AppendixReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs every exact identity on `Φ_M`, `F_{M,k}` and `G_M` for `M ≤ M_max`,
/// `n ≤ n_max`.
pub fn appendix_identities(m_max: usize, n_max: usize) -> Result<AppendixReport> {
    guard(m_max <= MAX_APPENDIX_M && n_max <= MAX_APPENDIX_N, || {
        format!("appendix_identities({m_max}, {n_max}) beyond M ≤ {MAX_APPENDIX_M}, n ≤ {MAX_APPENDIX_N}")
    })?;
    let top = m_max + n_max + 1;
    let phis = phi_sequence(top);
    let fmk: Vec<Vec<Poly>> = (0..=m_max + 1).map(|m| fmk_all(m, m / 2 + 1)).collect();

    let mut rec = IdentityCheck::new("fmk_recursion");
    for m in 1..=m_max {
        for k in 0..m / 2 {
            let lhs = &fmk[m + 1][k + 1] - &fmk[m][k + 1];
            let c = Poly::from_coeffs(vec![rat(-((m * m) as i64)), rat(m as i64)]);
            let rhs = &c * &fmk[m - 1][k];
            rec.record(lhs == rhs, || format!("M={m}, k={k}"));
        }
    }

    let mut at_m = IdentityCheck::new("fmk_at_m");
    for (m, fm) in fmk.iter().enumerate().take(m_max + 1).skip(1) {
        let start = if m % 2 == 0 { 1 } else { 2 };
        let sq: Vec<BigInt> = (start..m).step_by(2).map(|i| BigInt::from(i * i)).collect();
        let sigma = elementary_symmetric(&sq, m / 2);
        for (k, s) in sigma.iter().enumerate() {
            let v = fm[k].eval(&rat(m as i64));
            at_m.record(v == BigRational::from_integer(s.clone()), || format!("M={m}, k={k}"));
        }
    }

    let mut assembly = IdentityCheck::new("phi_assembly");
    let mut parity = IdentityCheck::new("phi_parity");
    let mut id_phi = IdentityCheck::new("id_phi");
    for m in 0..=m_max {
        assembly.record(phis[m] == phi_from_fmk(m), || format!("M={m}"));
        let flipped = phis[m].negate_u();
        let expect = if m % 2 == 0 { phis[m].clone() } else { -&phis[m] };
        parity.record(flipped == expect && phis[m].is_monic_in_u(), || format!("M={m}"));
        id_phi.record(phis[m].eval_x(&rat(m as i64)) == p_m(m), || format!("M={m}"));
    }

    let mut phi1 = IdentityCheck::new("phi1");
    let mut phi2 = IdentityCheck::new("phi2");
    for m in 0..=m_max {
        let pm = p_m(m);
        for n in 0..=n_max {
            let lhs = phis[m].eval_x(&rat(m as i64 - n as i64));
            let mut rhs = Poly::zero();
            for j in 0..=n {
                let shifted = pm.substitute_linear(&rat(1), &rat(2 * j as i64 - n as i64));
                rhs += &shifted.scale(&rat(binom(n, j)));
            }
            let rhs = rhs.scale(&(BigRational::one() / rat(1i64 << n)));
            phi1.record(lhs == rhs, || format!("M={m}, n={n}"));

            let lhs2 = phis[m + n].eval_x(&rat(m as i64));
            let rhs2 = &phis[m].eval_x(&rat(m as i64)) * &phis[n].eval_x(&rat(-(m as i64)));
            phi2.record(lhs2 == rhs2, || format!("M={m}, n={n}"));
        }
    }

    // Φ_M(x+y+1, y−x)/M! = G_M(x, y) with x ↦ X, y ↦ u
    let mut phi3 = IdentityCheck::new("phi3");
    let xs = &(&BivarPoly::x() + &BivarPoly::u()) + &BivarPoly::one();
    let us = &BivarPoly::u() - &BivarPoly::x();
    let gs: Vec<BivarPoly> = (0..=m_max + 1).map(g_poly).collect();
    for m in 0..=m_max {
        let lhs = phis[m].compose(&xs, &us).scale(&(BigRational::one() / factorial(m)));
        phi3.record(lhs == gs[m], || format!("M={m}"));
    }

    // coefficients of (1−T)^x (1+T)^y and the recursion they satisfy
    let mut sum_g = IdentityCheck::new("sum_g");
    let ax = binomial_series(m_max + 1, true);
    let by = binomial_series(m_max + 1, false);
    for m in 0..=m_max + 1 {
        let mut coeff = BivarPoly::zero();
        for j in 0..=m {
            coeff = &coeff + &(&ax[j] * &by[m - j]);
        }
        sum_g.record(coeff == gs[m], || format!("coefficient M={m}"));
    }
    for m in 1..=m_max {
        let lhs = gs[m + 1].scale(&rat(m as i64 + 1));
        let yx = &BivarPoly::u() - &BivarPoly::x();
        let c = &(&BivarPoly::constant(rat(m as i64 - 1)) - &BivarPoly::x()) - &BivarPoly::u();
        let rhs = &(&yx * &gs[m]) + &(&c * &gs[m - 1]);
        sum_g.record(lhs == rhs, || format!("recursion M={m}"));
    }

    Ok(AppendixReport {
        checks: vec![rec, at_m, assembly, parity, id_phi, phi1, phi2, phi3, sum_g],
    })
}

/// Coefficients of `(1−T)^x` (in `X`) or `(1+T)^y` (in `u`) from the
/// first-order equations `(1∓T)A' = ∓x A`, without binomial formulas.
fn binomial_series(len: usize, minus: bool) -> Vec<BivarPoly> {
    let var = if minus { BivarPoly::x() } else { BivarPoly::u() };
    let mut c = vec![BivarPoly::one()];
    // (m+1)c_{m+1} = (±var − (±)m) c_m, sign + for (1+T)^y
    for m in 0..len {
        let next = if minus {
            // (1−T)A' = −xA: (m+1)c_{m+1} − m c_m = −x c_m
            &(&BivarPoly::constant(rat(m as i64)) - &var) * &c[m]
        } else {
            // (1+T)A' = yA: (m+1)c_{m+1} + m c_m = y c_m
            &(&var - &BivarPoly::constant(rat(m as i64))) * &c[m]
        };
        c.push(next.scale(&(BigRational::one() / rat(m as i64 + 1))));
    }
    c
}

fn binom(n: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i as i64 + 1);
    }
    r
}

/// `e_j` of the leading-order sum in the moment recurrence against the
/// squared-odd-part side: `e_j = (-1)^j · rhs_j`.
pub fn char_poly_bridge(n: usize) -> Result<bool> {
    let cp = char_poly(n);
    let lam = walk_order(n);
    for j in 1..=lam.min(MAX_ZAGIER_J) {
        let (lhs, rhs) = zagier_sides(n, j)?;
        let e = cp.coeff(lam - j);
        let signed = if j % 2 == 0 { rhs.clone() } else { -rhs.clone() };
        if lhs != rhs || e != BigRational::from_integer(signed) {
            return Ok(false);
        }
    }
    Ok(true)
}
