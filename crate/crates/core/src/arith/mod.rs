//! Exact integer number theory: factorization and the multiplicative
//! functions (φ, μ, ω, W, θ) the membership criteria are built from.

mod factor;
mod prime;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use factor::{
    cyclotomic_value, factor_prime_power_minus_one, factorize, factorize_u64, factorize_with,
    FactorOptions,
};
pub use prime::{
    is_mersenne_prime, is_prime_big, is_prime_u64, primality_is_exact, primes_below, PRIMES_BELOW_CAP,
};
pub(crate) use prime::{pow_mod, require_prime};

use crate::error::{domain, Result};

/// Prime factorization of a positive integer, primes strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub(crate) fn from_primes(value: BigUint, mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((last, e)) if *last == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        debug_assert_eq!(
            factors
                .iter()
                .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e)),
            value
        );
        Factorization { value, factors }
    }

    /// Builds a factorization from explicit parts, checking every invariant.
    pub fn from_parts(value: BigUint, factors: Vec<(BigUint, u32)>) -> Result<Self> {
        if factors.windows(2).any(|w| w[0].0 >= w[1].0) {
            return domain("primes must be strictly ascending");
        }
        if factors.iter().any(|(_, e)| *e == 0) {
            return domain("exponents must be positive");
        }
        if let Some((p, _)) = factors.iter().find(|(p, _)| !is_prime_big(p)) {
            return domain(format!("{p} is not prime"));
        }
        let product = factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        if product != value {
            return domain(format!("factors multiply to {product}, not {value}"));
        }
        Ok(Factorization { value, factors })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Distinct primes as machine integers, when they all fit.
    pub fn primes_u64(&self) -> Option<Vec<u64>> {
        self.primes().map(|p| p.to_u64()).collect()
    }

    pub fn euler_phi(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| {
            acc * (p - 1u32) * p.pow(e - 1)
        })
    }

    pub fn moebius(&self) -> i8 {
        if self.factors.iter().any(|(_, e)| *e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// ω(n), the number of distinct primes.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// W(n) = 2^ω(n), the number of square-free divisors.
    pub fn w(&self) -> BigUint {
        BigUint::one() << self.factors.len()
    }

    pub fn omega_and_w(&self) -> (u32, BigUint) {
        (self.omega(), self.w())
    }

    /// θ(n) = φ(n)/n in lowest terms.
    pub fn theta(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.euler_phi()),
            BigInt::from(self.value.clone()),
        )
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigUint {
        self.primes().fold(BigUint::one(), |acc, p| acc * p)
    }

    /// All 2^ω square-free divisors with their Möbius values, ascending.
    pub fn squarefree_divisors(&self) -> Vec<(BigUint, i8)> {
        let mut out = vec![(BigUint::one(), 1i8)];
        for p in self.primes() {
            let extra: Vec<_> = out.iter().map(|(d, mu)| (d * p, -mu)).collect();
            out.extend(extra);
        }
        out.sort();
        out
    }

    /// Restriction to the given primes (which must all occur here).
    pub fn restrict(&self, keep: impl Fn(&BigUint) -> bool) -> Factorization {
        let factors: Vec<_> = self
            .factors
            .iter()
            .filter(|(p, _)| keep(p))
            .cloned()
            .collect();
        let value = factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        Factorization { value, factors }
    }

    /// Whether Miller-Rabin answered deterministically for every prime.
    pub fn primality_exact(&self) -> bool {
        self.primes().all(primality_is_exact)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

#[derive(Serialize, Deserialize)]
struct FactorizationJson {
    value: String,
    factors: Vec<(String, String)>,
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactorizationJson {
            value: self.value.to_string(),
            factors: self
                .factors
                .iter()
                .map(|(p, e)| (p.to_string(), e.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Factorization {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FactorizationJson::deserialize(d)?;
        let value: BigUint = raw.value.parse().map_err(D::Error::custom)?;
        let factors = raw
            .factors
            .into_iter()
            .map(|(p, e)| Ok((p.parse().map_err(D::Error::custom)?, e.parse().map_err(D::Error::custom)?)))
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Factorization::from_parts(value, factors).map_err(D::Error::custom)
    }
}

/// Möbius function of a machine integer, by trial division.
pub(crate) fn moebius_u64(mut n: u64) -> i8 {
    let mut mu = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// φ of a machine integer.
pub fn euler_phi_u64(n: u64) -> u64 {
    factorize_u64(n)
        .map(|f| f.euler_phi().to_u64().unwrap_or(0))
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fz(n: u64) -> Factorization {
        factorize_u64(n).unwrap()
    }

    fn phi_oracle(n: u64) -> u64 {
        (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64
    }

    #[test]
    fn phi_examples() {
        assert_eq!(fz(7).euler_phi(), BigUint::from(6u32));
        assert_eq!(fz(1).euler_phi(), BigUint::one());
        assert_eq!(fz(511).euler_phi(), BigUint::from(432u32));
        assert_eq!(phi_oracle(511), 432);
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(fz(1).moebius(), 1);
        assert_eq!(fz(12).moebius(), 0);
        assert_eq!(fz(2047).moebius(), 1);
        assert_eq!(moebius_u64(2047), 1);
        assert_eq!(moebius_u64(30), -1);
    }

    #[test]
    fn omega_w_examples() {
        assert_eq!(fz(2047).omega_and_w(), (2, BigUint::from(4u32)));
        assert_eq!(fz(1).omega_and_w(), (0, BigUint::one()));
        assert_eq!(fz((1 << 36) - 1).omega_and_w(), (8, BigUint::from(256u32)));
        // Square-free divisors of 2047 by enumeration.
        let count = (1..=2047u64)
            .filter(|d| 2047 % d == 0 && moebius_u64(*d) != 0)
            .count();
        assert_eq!(count, 4);
    }

    #[test]
    fn theta_examples() {
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(fz(1).theta(), r(1, 1));
        assert_eq!(fz(2).theta(), r(1, 2));
        assert_eq!(fz(6).theta(), r(1, 3));
    }

    #[test]
    fn squarefree_divisor_examples() {
        let sd = |n| {
            fz(n)
                .squarefree_divisors()
                .into_iter()
                .map(|(d, m)| (d.to_u64().unwrap(), m))
                .collect::<Vec<_>>()
        };
        assert_eq!(sd(12), vec![(1, 1), (2, -1), (3, -1), (6, 1)]);
        assert_eq!(sd(1), vec![(1, 1)]);
        assert_eq!(sd(2047), vec![(1, 1), (23, -1), (89, -1), (2047, 1)]);
    }

    #[test]
    fn json_shape() {
        let f = fz(2047);
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(js, r#"{"value":"2047","factors":[["23","1"],["89","1"]]}"#);
        let back: Factorization = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"value":"2048","factors":[["23","1"],["89","1"]]}"#;
        assert!(serde_json::from_str::<Factorization>(bad).is_err());
    }

    #[test]
    fn reconstructs_every_small_n() {
        for n in 1..=20_000u64 {
            let f = fz(n);
            let prod = f
                .factors()
                .iter()
                .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(prod, BigUint::from(n));
            assert!(f.factors().iter().all(|(p, e)| is_prime_big(p) && *e >= 1));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn factorization_and_phi(n in 1u64..=1_000_000) {
            let f = fz(n);
            prop_assert_eq!(f.value(), &BigUint::from(n));
            let prod = f.factors().iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            prop_assert_eq!(prod, BigUint::from(n));
            if n <= 50_000 {
                prop_assert_eq!(f.euler_phi().to_u64().unwrap(), phi_oracle(n));
            }
            let w = f.w();
            let mu_abs: usize = f.squarefree_divisors().iter().filter(|(_, m)| *m != 0).count();
            prop_assert_eq!(BigUint::from(mu_abs), w);
        }

        #[test]
        fn multiplicative(a in 1u64..5000, b in 1u64..5000) {
            prop_assume!(gcd(a, b) == 1);
            let (fa, fb, fab) = (fz(a), fz(b), fz(a * b));
            prop_assert_eq!(fab.euler_phi(), fa.euler_phi() * fb.euler_phi());
            prop_assert_eq!(fab.moebius(), fa.moebius() * fb.moebius());
        }
    }
}
