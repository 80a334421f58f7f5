use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Result, WalkError};
use crate::holonomic::verrill_operator;

pub const MAX_EXACT_N: usize = 10;
pub const MAX_EXACT_K: usize = 30;

/// `W_n(2k) = Σ_{a_1+…+a_n=k} multinomial(k; a)²`, exactly.
pub fn even_moment_exact(n: usize, k: usize) -> Result<BigInt> {
    if n < 1 || n > MAX_EXACT_N || k > MAX_EXACT_K {
        return Err(WalkError::GuardExceeded(format!(
            "even_moment_exact({n}, {k}) outside 1 ≤ n ≤ {MAX_EXACT_N}, k ≤ {MAX_EXACT_K}"
        )));
    }
    // (k!)² · [t^k] (Σ_j t^j / j!²)^n
    let mut fact = vec![BigInt::one()];
    for j in 1..=k {
        let f = &fact[j - 1] * BigInt::from(j);
        fact.push(f);
    }
    let base: Vec<BigRational> = fact
        .iter()
        .map(|f| BigRational::new(BigInt::one(), f * f))
        .collect();
    let mut acc = vec![BigRational::zero(); k + 1];
    acc[0] = BigRational::one();
    for _ in 0..n {
        let mut next = vec![BigRational::zero(); k + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in base.iter().enumerate().take(k + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    let v = &acc[k] * BigRational::from_integer(&fact[k] * &fact[k]);
    debug_assert!(v.is_integer());
    Ok(v.to_integer())
}

/// `W_n(0), …, W_n(2(len-1))` exactly, seeded by the multinomial sum and
/// continued with the moment recurrence.
pub fn even_moments(n: usize, len: usize) -> Result<Vec<BigInt>> {
    let op = verrill_operator(n);
    let lam = op.order();
    let mut f: Vec<BigRational> = Vec::with_capacity(len);
    for k in 0..len.min(lam.max(1)) {
        f.push(BigRational::from_integer(even_moment_exact(n, k)?));
    }
    while f.len() < len {
        let k = f.len() - lam;
        let kk = BigRational::from_integer(BigInt::from(k));
        let mut s = BigRational::zero();
        for j in 0..lam {
            s += op.coeffs()[j].eval(&kk) * &f[k + j];
        }
        let lead = op.coeffs()[lam].eval(&kk);
        f.push(-s / lead);
    }
    f.into_iter()
        .map(|v| {
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(WalkError::NonConvergence { what: "non-integral even moment", terms: 0 })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, k: usize) -> BigInt {
        fn rec(n: usize, k: usize, acc: &mut Vec<usize>, out: &mut BigInt, total: usize) {
            if n == 1 {
                acc.push(k);
                let mut m = (1..=total).fold(BigInt::one(), |a, i| a * BigInt::from(i));
                for &a in acc.iter() {
                    m /= (1..=a).fold(BigInt::one(), |x, i| x * BigInt::from(i));
                }
                *out += &m * &m;
                acc.pop();
                return;
            }
            for a in 0..=k {
                acc.push(a);
                rec(n - 1, k - a, acc, out, total);
                acc.pop();
            }
        }
        let mut out = BigInt::zero();
        rec(n, k, &mut vec![], &mut out, k);
        out
    }

    #[test]
    fn known_values() {
        for n in 2..=8 {
            assert_eq!(even_moment_exact(n, 1).unwrap(), BigInt::from(n));
        }
        let w3: Vec<i64> = (0..4).map(|k| even_moment_exact(3, k).unwrap().try_into().unwrap()).collect();
        assert_eq!(w3, vec![1, 3, 15, 93]);
        let w4: Vec<i64> = (0..4).map(|k| even_moment_exact(4, k).unwrap().try_into().unwrap()).collect();
        assert_eq!(w4, vec![1, 4, 28, 256]);
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=5 {
            for k in 0..=6 {
                assert_eq!(even_moment_exact(n, k).unwrap(), brute(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn guard() {
        assert!(matches!(even_moment_exact(11, 2), Err(WalkError::GuardExceeded(_))));
        assert!(matches!(even_moment_exact(3, 31), Err(WalkError::GuardExceeded(_))));
    }

    #[test]
    fn recurrence_extension_agrees() {
        for n in 2..=6 {
            let v = even_moments(n, 25).unwrap();
            for (k, x) in v.iter().enumerate() {
                assert_eq!(*x, even_moment_exact(n, k).unwrap(), "n={n} k={k}");
            }
        }
    }
}
