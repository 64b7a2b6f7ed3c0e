//! Integer factorization: trial division, Brent's variant of Pollard rho
//! with fixed seeds, and primality certification of the cofactors.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::prime::{is_prime_big, mul_mod, trial_primes};
use super::{moebius_u64, Factorization};
use crate::error::{domain, Error, Result};

/// Work limits for [`factorize_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorOptions {
    /// Rho iterations allowed per composite cofactor, summed over restarts.
    pub rho_iterations: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            rho_iterations: 1 << 26,
        }
    }
}

/// Factors `n` with the default budget.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    factorize_with(n, &FactorOptions::default())
}

pub fn factorize_u64(n: u64) -> Result<Factorization> {
    factorize(&BigUint::from(n))
}

pub fn factorize_with(n: &BigUint, opts: &FactorOptions) -> Result<Factorization> {
    if n.is_zero() {
        return domain("cannot factor 0");
    }
    let mut primes = Vec::new();
    let cofactor = strip_small(n.clone(), &mut primes);
    split_fully(cofactor, opts, &mut primes)?;
    Ok(Factorization::from_primes(n.clone(), primes))
}

/// Factors p^k − 1 by first splitting it into cyclotomic values
/// Φ_d(p), d | k, each of which is factored separately.
pub fn factor_prime_power_minus_one(p: u64, k: u32, opts: &FactorOptions) -> Result<Factorization> {
    if k == 0 {
        return domain("k must be positive");
    }
    let value = BigUint::from(p).pow(k) - 1u32;
    if value.is_zero() {
        return domain("p^k − 1 = 0");
    }
    let mut primes = Vec::new();
    for d in (1..=k).filter(|d| k % d == 0) {
        let part = cyclotomic_value(p, d);
        let cofactor = strip_small(part, &mut primes);
        split_fully(cofactor, opts, &mut primes)?;
    }
    Ok(Factorization::from_primes(value, primes))
}

/// Φ_d(p) = ∏_{e | d} (p^e − 1)^{μ(d/e)}.
pub fn cyclotomic_value(p: u64, d: u32) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in (1..=d).filter(|e| d % e == 0) {
        let term = BigUint::from(p).pow(e) - 1u32;
        match moebius_u64(u64::from(d / e)) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

fn strip_small(mut n: BigUint, out: &mut Vec<BigUint>) -> BigUint {
    for &p in trial_primes() {
        if n.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        while (&n % p).is_zero() {
            n /= p;
            out.push(pb.clone());
        }
    }
    n
}

fn split_fully(n: BigUint, opts: &FactorOptions, out: &mut Vec<BigUint>) -> Result<()> {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime_big(&m) {
            out.push(m);
            continue;
        }
        if let Some(r) = exact_root(&m) {
            let (root, e) = r;
            for _ in 0..e {
                stack.push(root.clone());
            }
            continue;
        }
        let d = find_divisor(&m, opts)?;
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    Ok(())
}

/// Returns (r, e) with r^e = n and e ≥ 2 when n is a perfect power.
fn exact_root(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    for e in 2..=bits {
        let r = n.nth_root(e);
        if r <= BigUint::one() {
            break;
        }
        if &r.pow(e) == n {
            return Some((r, e));
        }
    }
    None
}

fn find_divisor(n: &BigUint, opts: &FactorOptions) -> Result<BigUint> {
    if let Some(small) = n.to_u64() {
        return rho_u64(small, opts.rho_iterations)
            .map(BigUint::from)
            .ok_or_else(|| budget_error(n));
    }
    rho_big(n, opts.rho_iterations).ok_or_else(|| budget_error(n))
}

fn budget_error(n: &BigUint) -> Error {
    Error::Budget(format!("could not split the composite {n} within the rho budget"))
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent-rho with seeds c = 1, 2, ...; deterministic.
fn rho_u64(n: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1..u64::MAX {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += M;
            }
            spent += r;
            r *= 2;
            if spent > budget {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let two = BigUint::from(2u32);
        let (mut x, mut y, mut ys) = (two.clone(), two.clone(), two);
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        const M: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += M;
            }
            spent += r;
            r *= 2;
            if spent > budget {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}
