use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{capacity, domain, Result};

/// Largest bound accepted by [`primes_below`].
pub const PRIMES_BELOW_CAP: u64 = 1 << 24;

/// Trial-division primes are taken below this bound.
pub(crate) const TRIAL_BOUND: u64 = 1_000_000;

/// Miller-Rabin bases. With the first 13 of them the test is exact for
/// n < 3.317e24; above that it is probabilistic with all 24 rounds.
const MR_BASES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Numbers below this are decided deterministically by [`is_prime_big`].
const MR_DETERMINISTIC_BELOW: u128 = 3_317_044_064_679_887_385_961_981;

/// All primes strictly below `bound`, ascending.
pub fn primes_below(bound: u64) -> Result<Vec<u64>> {
    if bound > PRIMES_BELOW_CAP {
        return capacity(format!(
            "primes_below({bound}) exceeds the supported bound {PRIMES_BELOW_CAP}"
        ));
    }
    Ok(sieve(bound))
}

fn sieve(bound: u64) -> Vec<u64> {
    if bound <= 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub(crate) fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_BOUND))
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES[..12] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary precision integers. Exact below ~3.3e24,
/// Miller-Rabin with 24 fixed prime bases above.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let rounds = if n.to_u128().is_some_and(|v| v < MR_DETERMINISTIC_BELOW) {
        13
    } else {
        MR_BASES.len()
    };
    'bases: for &a in &MR_BASES[..rounds] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Lucas–Lehmer: whether 2^k − 1 is prime. Exact for every k.
pub fn is_mersenne_prime(k: u32) -> bool {
    match k {
        0 | 1 => false,
        2 => true,
        _ if !is_prime_u64(u64::from(k)) => false,
        _ => {
            let m = (BigUint::one() << k as usize) - 1u32;
            let two = BigUint::from(2u32);
            let mut s = BigUint::from(4u32);
            for _ in 0..k - 2 {
                s = (&s * &s + &m - &two) % &m;
            }
            s.is_zero()
        }
    }
}

/// Whether [`is_prime_big`] answers deterministically for `n`.
pub fn primality_is_exact(n: &BigUint) -> bool {
    n.to_u128().is_some_and(|v| v < MR_DETERMINISTIC_BELOW)
}

/// Checks that `p` is prime, as a precondition.
pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        domain(format!("{p} is not prime"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mersenne_exponents() {
        let known = [2u32, 3, 5, 7, 13, 17, 19, 31, 61, 89];
        for k in 0..=100 {
            assert_eq!(is_mersenne_prime(k), known.contains(&k), "k={k}");
        }
        for k in 2..=64 {
            let m = (BigUint::one() << k as usize) - 1u32;
            assert_eq!(is_mersenne_prime(k), is_prime_big(&m));
        }
    }

    #[test]
    fn small_bounds() {
        assert_eq!(primes_below(10).unwrap(), vec![2, 3, 5, 7]);
        assert!(primes_below(2).unwrap().is_empty());
        let p64 = primes_below(64).unwrap();
        assert_eq!(p64.len(), 18);
        assert_eq!(*p64.last().unwrap(), 61);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(primes_below(PRIMES_BELOW_CAP).is_ok());
        assert!(matches!(
            primes_below(PRIMES_BELOW_CAP + 1),
            Err(crate::Error::Capacity(_))
        ));
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let naive: Vec<u64> = (2..2000u64)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(primes_below(2000).unwrap(), naive);
        for n in 0..2000u64 {
            assert_eq!(is_prime_u64(n), naive.binary_search(&n).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn large_primes() {
        assert!(is_prime_u64((1u64 << 61) - 1));
        assert!(!is_prime_u64((1u64 << 59) - 1));
        // Strong pseudoprime to bases 2..37 would need > 3.3e24; check a Carmichael number.
        assert!(!is_prime_u64(3_215_031_751));
        let m89 = (BigUint::one() << 89usize) - 1u32;
        assert!(is_prime_big(&m89));
        let m97 = (BigUint::one() << 97usize) - 1u32;
        assert!(!is_prime_big(&m97));
        assert!(!primality_is_exact(&m89));
    }
}
