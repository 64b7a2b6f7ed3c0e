//! Sufficient and excluding conditions for k ∈ Γ_p(m1, m2), with exact
//! certificates, and the cascade that combines them.

mod classify;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{
    factor_prime_power_minus_one, is_mersenne_prime, primes_below, require_prime, FactorOptions,
    Factorization,
};
use crate::error::{domain, Result};

pub use classify::{
    classify, gamma_table, ClassifyOptions, GammaTable, Reason, Status, TableSummary, Verdict,
    DEFAULT_BRUTE_CAP, DEFAULT_KMAX_LIMIT,
};

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn big_q(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

type FactorCache = Mutex<HashMap<(u64, u32), Arc<Factorization>>>;

fn factor_cache() -> &'static FactorCache {
    static CACHE: OnceLock<FactorCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Factorization of p^k − 1, memoized per process. Budget failures are not
/// cached so a later call with a larger budget can still succeed.
pub fn qm1_factorization(p: u64, k: u32, opts: &FactorOptions) -> Result<Arc<Factorization>> {
    if let Some(f) = factor_cache().lock().expect("cache lock").get(&(p, k)) {
        return Ok(f.clone());
    }
    let f = Arc::new(factor_prime_power_minus_one(p, k, opts)?);
    factor_cache().lock().expect("cache lock").insert((p, k), f.clone());
    Ok(f)
}

/// Seeds the memo with a factorization obtained elsewhere (e.g. a disk cache).
pub fn seed_factorization(p: u64, k: u32, f: Factorization) -> Result<()> {
    if f.value() != &(big_q(p, k) - 1u32) {
        return domain(format!("factorization is not of {p}^{k} - 1"));
    }
    factor_cache().lock().expect("cache lock").insert((p, k), Arc::new(f));
    Ok(())
}

/// Memoized factorization without computing it.
pub fn cached_factorization(p: u64, k: u32) -> Option<Arc<Factorization>> {
    factor_cache().lock().expect("cache lock").get(&(p, k)).cloned()
}

/// q ≥ 4 and q > ((m1 + m2)·W(q − 1)²)², as exact integers.
pub fn check_corollary(p: u64, k: u32, m1: u64, m2: u64) -> Result<bool> {
    let qm1 = qm1_factorization(p, k, &FactorOptions::default())?;
    Ok(corollary_holds(&big_q(p, k), m1 + m2, &qm1))
}

pub(crate) fn corollary_holds(q: &BigUint, m: u64, qm1: &Factorization) -> bool {
    let w = qm1.w();
    let rhs = BigUint::from(m) * &w * &w;
    q >= &BigUint::from(4u32) && q > &(&rhs * &rhs)
}

/// A split of the primes of q − 1 into ℓ (kept) and p_1 < … < p_r (sieved).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveCertificate {
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub q: BigUint,
    /// m1 + m2.
    pub m: u64,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub ell_radical: BigUint,
    #[serde(serialize_with = "crate::serde_util::decimal_seq")]
    pub ell_primes: Vec<BigUint>,
    #[serde(serialize_with = "crate::serde_util::decimal_seq")]
    pub sieve_primes: Vec<BigUint>,
    /// δ = 1 − 2 Σ 1/p_i.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub delta: BigRational,
    /// Δ = (2r − 1)/δ + 2.
    #[serde(rename = "Delta", serialize_with = "crate::serde_util::rational")]
    pub big_delta: BigRational,
    /// q > (m·W(ℓ)²·Δ)².
    pub bound_ok: bool,
}

impl SieveCertificate {
    /// Builds the certificate for the given split; `None` when δ ≤ 0.
    pub fn for_split(
        q: &BigUint,
        m: u64,
        ell_primes: Vec<BigUint>,
        sieve_primes: Vec<BigUint>,
    ) -> Option<Self> {
        let (delta, big_delta) = sieve_constants(&sieve_primes)?;
        let bound_ok = sieve_bound_holds(q, m, ell_primes.len(), &big_delta);
        Some(SieveCertificate {
            q: q.clone(),
            m,
            ell_radical: ell_primes.iter().product(),
            ell_primes,
            sieve_primes,
            delta,
            big_delta,
            bound_ok,
        })
    }

    /// Recomputes δ, Δ, the radical and the inequality from the stored primes.
    pub fn verify(&self) -> bool {
        let Some((delta, big_delta)) = sieve_constants(&self.sieve_primes) else {
            return false;
        };
        delta == self.delta
            && big_delta == self.big_delta
            && self.ell_radical == self.ell_primes.iter().product::<BigUint>()
            && self.bound_ok == sieve_bound_holds(&self.q, self.m, self.ell_primes.len(), &big_delta)
    }

    /// [`verify`](Self::verify) plus: the two prime lists partition the
    /// primes of q − 1.
    pub fn verify_against(&self, qm1: &Factorization) -> bool {
        let mut all: Vec<BigUint> = self
            .ell_primes
            .iter()
            .chain(&self.sieve_primes)
            .cloned()
            .collect();
        all.sort();
        let expected: Vec<BigUint> = qm1.primes().cloned().collect();
        qm1.value() + 1u32 == self.q && all == expected && self.verify()
    }
}

fn sieve_constants(sieve_primes: &[BigUint]) -> Option<(BigRational, BigRational)> {
    let sum = sieve_primes
        .iter()
        .fold(BigRational::zero(), |acc, p| acc + BigRational::new(BigInt::one(), BigInt::from(p.clone())));
    let delta = int(1) - int(2) * sum;
    if !delta.is_positive() {
        return None;
    }
    let r = sieve_primes.len() as i64;
    let big_delta = int(2 * r - 1) / &delta + int(2);
    Some((delta, big_delta))
}

/// q > (m·W(ℓ)²·Δ)² with W(ℓ) = 2^{ω(ℓ)}.
fn sieve_bound_holds(q: &BigUint, m: u64, ell_omega: usize, big_delta: &BigRational) -> bool {
    let w = BigUint::one() << ell_omega;
    let rhs = int(BigUint::from(m) * &w * &w) * big_delta;
    int(q.clone()) > &rhs * &rhs
}

/// Every ascending-prefix split (ℓ = first s primes, s = 0..=ω) whose
/// certificate passes, in increasing s.
pub fn sieve_certificates_for(q: &BigUint, m: u64, qm1: &Factorization) -> Vec<SieveCertificate> {
    let primes: Vec<BigUint> = qm1.primes().cloned().collect();
    (0..=primes.len())
        .filter_map(|s| {
            SieveCertificate::for_split(q, m, primes[..s].to_vec(), primes[s..].to_vec())
        })
        .filter(|c| c.bound_ok)
        .collect()
}

pub fn sieve_certificates(p: u64, k: u32, m1: u64, m2: u64) -> Result<Vec<SieveCertificate>> {
    let qm1 = qm1_factorization(p, k, &FactorOptions::default())?;
    Ok(sieve_certificates_for(&big_q(p, k), m1 + m2, &qm1))
}

/// The first passing prefix split, if any.
pub fn sieve_search(p: u64, k: u32, m1: u64, m2: u64) -> Result<Option<SieveCertificate>> {
    Ok(sieve_certificates(p, k, m1, m2)?.into_iter().next())
}

/// The certificate for an arbitrary choice of ℓ's primes (the rest of the
/// primes of q − 1 are sieved); `None` when δ ≤ 0.
pub fn check_sieve_split(
    p: u64,
    k: u32,
    m1: u64,
    m2: u64,
    ell_primes: &[u64],
) -> Result<Option<SieveCertificate>> {
    let qm1 = qm1_factorization(p, k, &FactorOptions::default())?;
    let keep: Vec<BigUint> = ell_primes.iter().map(|&p| BigUint::from(p)).collect();
    for e in &keep {
        if !qm1.primes().any(|p| p == e) {
            return domain(format!("{e} does not divide {p}^{k} - 1"));
        }
    }
    let mut ell: Vec<BigUint> = keep.clone();
    ell.sort();
    ell.dedup();
    let sieve: Vec<BigUint> = qm1.primes().filter(|p| !ell.contains(p)).cloned().collect();
    Ok(SieveCertificate::for_split(&big_q(p, k), m1 + m2, ell, sieve))
}

/// Outcome of the asymptotic bound q ≥ ((m1 + m2)·A_t²)^{2t/(t−4)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CotaT {
    pub t: f64,
    /// The threshold in floating point (advisory).
    pub threshold: f64,
    /// q ≥ threshold·(1 + guard) in floating point.
    pub passes: bool,
    /// The exact decision, available for integer t.
    pub exact: Option<bool>,
}

/// Default relative guard applied to the floating-point threshold.
pub const COTA_GUARD: f64 = 1e-9;

/// A_t = ∏_{s prime, s < 2^t} 2/s^{1/t}, via logarithms.
pub fn cota_threshold(t: f64, m: u64) -> Result<f64> {
    if !(t > 4.0) {
        return domain("t must exceed 4");
    }
    let primes = primes_below(2f64.powf(t).ceil() as u64)?;
    let bound = 2f64.powf(t);
    let ln_a: f64 = primes
        .iter()
        .filter(|&&s| (s as f64) < bound)
        .map(|&s| std::f64::consts::LN_2 - (s as f64).ln() / t)
        .sum();
    let ln_base = (m as f64).ln() + 2.0 * ln_a;
    Ok((ln_base * 2.0 * t / (t - 4.0)).exp())
}

pub fn check_cota_t(p: u64, k: u32, m1: u64, m2: u64, t: f64) -> Result<CotaT> {
    check_cota_t_guarded(p, k, m1, m2, t, COTA_GUARD)
}

pub fn check_cota_t_guarded(p: u64, k: u32, m1: u64, m2: u64, t: f64, guard: f64) -> Result<CotaT> {
    let threshold = cota_threshold(t, m1 + m2)?;
    let q = big_q(p, k);
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    let exact = (t.fract() == 0.0 && t <= 32.0).then(|| cota_exact(&q, m1 + m2, t as u32));
    Ok(CotaT {
        t,
        threshold,
        passes: qf >= threshold * (1.0 + guard),
        exact: exact.transpose()?,
    })
}

/// For integer t the bound is q^{t−4}·P⁴ ≥ m^{2t}·16^{t·π(2^t)}, where P is
/// the product of the primes below 2^t.
fn cota_exact(q: &BigUint, m: u64, t: u32) -> Result<bool> {
    let primes = primes_below(1u64 << t)?;
    let product: BigUint = primes.iter().map(|&s| BigUint::from(s)).product();
    let lhs = q.pow(t - 4) * product.pow(4);
    let rhs = BigUint::from(m).pow(2 * t) * BigUint::from(16u32).pow(t * primes.len() as u32);
    Ok(lhs >= rhs)
}

/// φ(q − 1) ≤ m1 + m2 + 1 excludes k.
pub fn check_no_gamma(p: u64, k: u32, m1: u64, m2: u64) -> Result<bool> {
    let limit = m1 + m2 + 1;
    if no_gamma_ruled_out(&(big_q(p, k) - 1u32), limit) {
        return Ok(false);
    }
    let qm1 = qm1_factorization(p, k, &FactorOptions::default())?;
    Ok(qm1.euler_phi() <= BigUint::from(limit))
}

/// φ(n) ≥ √(n/2) for every n ≥ 1, so n > 2·limit² already forces φ(n) > limit.
pub(crate) fn no_gamma_ruled_out(n: &BigUint, limit: u64) -> bool {
    let l = BigUint::from(limit);
    n > &(BigUint::from(2u32) * &l * &l)
}

/// p = 2: 2^k − 1 prime and 2^k − 2 > m1 + m2 + max(m1, m2).
pub fn check_mersenne(k: u32, m1: u64, m2: u64) -> bool {
    if !is_mersenne_prime(k) {
        return false;
    }
    big_q(2, k) - 2u32 > BigUint::from(m1 + m2 + m1.max(m2))
}

/// p = 2: φ(q − 1)·(1 + 1/m) > q with m = max(m1, m2).
pub fn check_phi_density(p: u64, k: u32, m1: u64, m2: u64) -> Result<bool> {
    if p != 2 {
        return domain("the φ-density criterion only holds for p = 2");
    }
    let qm1 = qm1_factorization(p, k, &FactorOptions::default())?;
    Ok(phi_density_holds(&big_q(p, k), m1.max(m2), &qm1))
}

pub(crate) fn phi_density_holds(q: &BigUint, m: u64, qm1: &Factorization) -> bool {
    let phi = int(qm1.euler_phi());
    let lhs = &phi + &phi / int(m);
    lhs > int(q.clone())
}

pub(crate) fn validate(p: u64, k: u32, m1: u64, m2: u64) -> Result<()> {
    require_prime(p)?;
    if k == 0 {
        return domain("k must be at least 1");
    }
    if m1 == 0 || m2 == 0 {
        return domain("m1 and m2 must be at least 1");
    }
    Ok(())
}
