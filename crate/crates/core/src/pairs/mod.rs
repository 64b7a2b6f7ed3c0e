//! Free-pair counts N_f(l1, l2), multiplicative characters, the character
//! sum expression for N_f, and the numeric bounds derived from it.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{euler_phi_u64, factorize_u64, gcd, Factorization};
use crate::error::{capacity, domain, Result};
use crate::ff::{FieldContext, FieldElement};
use crate::polyff::{factor_poly, PolyQ, RationalFunction};

/// Largest Σ d·φ(d) a [`CharacterTable`] may tabulate.
pub const CHARACTER_TABLE_CAP: u64 = 1 << 30;

/// χ_n(g^a) = exp(2πi·n·a/(q−1)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterIndex {
    pub n: u64,
    pub order: u64,
}

impl CharacterIndex {
    pub fn new(ctx: &FieldContext, n: u64) -> Result<Self> {
        let m = ctx.order();
        if n >= m {
            return domain(format!("character index {n} is not below q - 1 = {m}"));
        }
        Ok(CharacterIndex {
            n,
            order: m / gcd(n, m),
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 0
    }

    /// χ(g^l) for an exponent l.
    pub fn at_log(&self, ctx: &FieldContext, l: u64) -> Complex64 {
        let m = ctx.order();
        let r = (u128::from(self.n) * u128::from(l) % u128::from(m)) as f64;
        Complex64::from_polar(1.0, TAU * r / m as f64)
    }

    /// χ(a); characters vanish at 0 by convention.
    pub fn eval(&self, ctx: &FieldContext, a: FieldElement) -> Complex64 {
        match ctx.log_of(a) {
            Some(l) => self.at_log(ctx, u64::from(l)),
            None => Complex64::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreePairCount {
    pub l1: u64,
    pub l2: u64,
    pub count: u64,
    /// The guaranteed minimum for Υ(deg f1, deg f2) membership; `None` when q < 4.
    pub lower_bound: Option<BigRational>,
}

/// Discrete logs (log α, log f(α)) for every α outside S_f, ascending in α.
pub fn pair_logs(ctx: &FieldContext, f: &RationalFunction) -> Vec<(u32, u32)> {
    // One evaluation of f1 and f2 per α; S_f membership falls out of it.
    ctx.elements()
        .skip(1)
        .filter_map(|a| {
            let la = ctx.log_of(a)?;
            let l1 = ctx.log_of(f.numerator().eval(ctx, a))?;
            let l2 = ctx.log_of(f.denominator().eval(ctx, a))?;
            let m = ctx.order() as u32;
            Some((la, (l1 + m - l2) % m))
        })
        .collect()
}

/// Counts pairs in precomputed logs; both divisors already validated.
pub(crate) fn count_in_logs(ctx: &FieldContext, logs: &[(u32, u32)], l1: u64, l2: u64) -> u64 {
    let p1 = primes_dividing(ctx, l1);
    let p2 = primes_dividing(ctx, l2);
    logs.iter()
        .filter(|&&(a, b)| {
            p1.iter().all(|&d| a % d != 0) && p2.iter().all(|&d| b % d != 0)
        })
        .count() as u64
}

fn primes_dividing(ctx: &FieldContext, l: u64) -> Vec<u32> {
    ctx.qm1_primes()
        .iter()
        .copied()
        .filter(|&d| l % u64::from(d) == 0)
        .collect()
}

/// N_f(l1, l2): α ∈ F_q \ S_f with α l1-free and f(α) l2-free.
pub fn count_free_pairs(
    ctx: &FieldContext,
    f: &RationalFunction,
    l1: u64,
    l2: u64,
) -> Result<FreePairCount> {
    ctx.check_divisor(l1)?;
    ctx.check_divisor(l2)?;
    let count = count_in_logs(ctx, &pair_logs(ctx, f), l1, l2);
    let lower_bound = if ctx.q() >= 4 {
        let m1 = f.numerator().degree().unwrap_or(0);
        let m2 = f.denominator().degree().unwrap_or(0);
        Some(nf_lower_bound(
            &BigUint::from(ctx.q()),
            m1 as u64,
            m2 as u64,
            &factorize_u64(l1)?,
            &factorize_u64(l2)?,
        )?)
    } else {
        None
    };
    Ok(FreePairCount {
        l1,
        l2,
        count,
        lower_bound,
    })
}

/// The φ(d) characters of exact order d: n = (q−1)/d · j, gcd(j, d) = 1.
pub fn characters_of_order(ctx: &FieldContext, d: u64) -> Result<Vec<CharacterIndex>> {
    ctx.check_divisor(d)?;
    let step = ctx.order() / d;
    Ok((0..d)
        .filter(|&j| gcd(j, d) == 1)
        .map(|j| CharacterIndex { n: step * j, order: d })
        .collect())
}

/// Square-free divisors of s (s | q − 1) with their Möbius values.
fn squarefree_divisors(ctx: &FieldContext, s: u64) -> Vec<(u64, i8)> {
    let mut out = vec![(1u64, 1i8)];
    for d in primes_dividing(ctx, s) {
        let extra: Vec<_> = out.iter().map(|&(e, mu)| (e * u64::from(d), -mu)).collect();
        out.extend(extra);
    }
    out.sort_unstable();
    out
}

fn theta(s: u64, ctx: &FieldContext) -> f64 {
    primes_dividing(ctx, s)
        .iter()
        .map(|&d| 1.0 - 1.0 / f64::from(d))
        .product()
}

/// ρ_s(a) = θ(s) Σ_{d | s} μ(d)/φ(d) Σ_{ord χ = d} χ(a): ≈ 1 if a is s-free, else ≈ 0.
pub fn rho_s(ctx: &FieldContext, a: FieldElement, s: u64) -> Result<Complex64> {
    ctx.check_divisor(s)?;
    let l = ctx.dlog(a)?;
    let mut total = Complex64::zero();
    for (d, mu) in squarefree_divisors(ctx, s) {
        let inner: Complex64 = characters_of_order(ctx, d)?
            .iter()
            .map(|chi| chi.at_log(ctx, l))
            .sum();
        total += inner * (f64::from(mu) / euler_phi_u64(d) as f64);
    }
    Ok(total * theta(s, ctx))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterSum {
    pub value: Complex64,
    /// (Σ deg h_j − 1)·√q.
    pub weil_budget: f64,
    /// Some irreducible factor of h has exponent not divisible by ord χ.
    pub hypothesis_holds: bool,
}

/// Σ χ(h(α)) over α with h(α) ≠ 0, ∞, where h = ∏ h_j^{e_j}.
pub fn character_sum(
    ctx: &FieldContext,
    h_factors: &[(PolyQ, i64)],
    chi: CharacterIndex,
) -> Result<CharacterSum> {
    if chi.is_trivial() {
        return domain("the character sum bound needs a nontrivial character");
    }
    if h_factors.iter().any(|(h, _)| h.is_zero()) {
        return domain("h has a zero factor");
    }
    let m = ctx.order() as i128;
    let mut value = Complex64::zero();
    'alpha: for a in ctx.elements() {
        let mut l: i128 = 0;
        for (h, e) in h_factors {
            match ctx.log_of(h.eval(ctx, a)) {
                Some(lh) => l += i128::from(lh) * i128::from(*e),
                None => continue 'alpha,
            }
        }
        value += chi.at_log(ctx, l.rem_euclid(m) as u64);
    }

    let mut exponents: BTreeMap<PolyQ, i64> = BTreeMap::new();
    for (h, e) in h_factors {
        for (g, n) in factor_poly(ctx, h)?.factors {
            *exponents.entry(g).or_default() += e * i64::from(n);
        }
    }
    let order = chi.order as i64;
    let hypothesis_holds = exponents.values().any(|&e| e % order != 0);
    let degrees: usize = h_factors.iter().map(|(h, _)| h.degree().unwrap_or(0)).sum();
    let weil_budget = (degrees as f64 - 1.0) * (ctx.q() as f64).sqrt();
    Ok(CharacterSum {
        value,
        weil_budget,
        hypothesis_holds,
    })
}

/// χ̃(χ1, χ2) = Σ_{α ∉ S_f} χ1(α)·χ2(f(α)).
pub fn character_pair_sum(
    ctx: &FieldContext,
    f: &RationalFunction,
    chi1: CharacterIndex,
    chi2: CharacterIndex,
) -> Complex64 {
    pair_logs(ctx, f)
        .iter()
        .map(|&(a, b)| chi1.at_log(ctx, u64::from(a)) * chi2.at_log(ctx, u64::from(b)))
        .sum()
}

/// For each square-free d | q − 1, the grouped values
/// c_d(a) = Σ_{ord χ = d} χ(g^a), indexed by a mod d.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    grouped: BTreeMap<u64, Vec<Complex64>>,
}

impl CharacterTable {
    /// Tables for the square-free divisors of `s`.
    pub fn new(ctx: &FieldContext, s: u64) -> Result<Self> {
        ctx.check_divisor(s)?;
        let divisors = squarefree_divisors(ctx, s);
        let work: u64 = divisors.iter().map(|&(d, _)| d * euler_phi_u64(d)).sum();
        if work > CHARACTER_TABLE_CAP {
            return capacity(format!(
                "character table for s = {s} needs {work} evaluations (cap {CHARACTER_TABLE_CAP})"
            ));
        }
        let mut grouped = BTreeMap::new();
        for (d, _) in divisors {
            let chars = characters_of_order(ctx, d)?;
            // χ(g^a) only depends on a mod d since d = ord χ.
            let values = (0..d)
                .map(|a| chars.iter().map(|chi| chi.at_log(ctx, a)).sum())
                .collect();
            grouped.insert(d, values);
        }
        Ok(CharacterTable { grouped })
    }

    /// Σ_{ord χ = d} χ(g^l); `None` if d was not tabulated.
    pub fn grouped(&self, d: u64, l: u64) -> Option<Complex64> {
        self.grouped.get(&d).map(|v| v[(l % d) as usize])
    }
}

/// N_f(l1, l2) through the character sum expression
/// θ(l1)θ(l2) Σ_{d1|l1, d2|l2} μ(d1)μ(d2)/(φ(d1)φ(d2)) Σ_{ord χi = di} χ̃(χ1, χ2).
pub fn n_f_via_characters(
    ctx: &FieldContext,
    f: &RationalFunction,
    l1: u64,
    l2: u64,
) -> Result<Complex64> {
    ctx.check_divisor(l1)?;
    ctx.check_divisor(l2)?;
    let table = CharacterTable::new(ctx, lcm(l1, l2))?;
    Ok(n_f_with_table(ctx, &table, &pair_logs(ctx, f), l1, l2))
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Same as [`n_f_via_characters`] with precomputed logs and table.
pub fn n_f_with_table(
    ctx: &FieldContext,
    table: &CharacterTable,
    logs: &[(u32, u32)],
    l1: u64,
    l2: u64,
) -> Complex64 {
    let mut total = Complex64::zero();
    for (d1, mu1) in squarefree_divisors(ctx, l1) {
        for (d2, mu2) in squarefree_divisors(ctx, l2) {
            let inner: Complex64 = logs
                .iter()
                .map(|&(a, b)| {
                    table.grouped(d1, u64::from(a)).expect("tabulated")
                        * table.grouped(d2, u64::from(b)).expect("tabulated")
                })
                .sum();
            let weight = f64::from(mu1 * mu2) / (euler_phi_u64(d1) * euler_phi_u64(d2)) as f64;
            total += inner * weight;
        }
    }
    total * theta(l1, ctx) * theta(l2, ctx)
}

/// [`n_f_with_table`] for every pair of tabulated divisors at once: the
/// inner sums over α are shared, so the cost is (#divisors)²·q instead of
/// that per pair.
pub fn n_f_grid(
    ctx: &FieldContext,
    table: &CharacterTable,
    logs: &[(u32, u32)],
) -> BTreeMap<(u64, u64), Complex64> {
    let ds: Vec<u64> = table.grouped.keys().copied().collect();
    let mut inner = BTreeMap::new();
    for &d1 in &ds {
        let v1 = &table.grouped[&d1];
        for &d2 in &ds {
            let v2 = &table.grouped[&d2];
            let sum: Complex64 = logs
                .iter()
                .map(|&(a, b)| v1[(u64::from(a) % d1) as usize] * v2[(u64::from(b) % d2) as usize])
                .sum();
            inner.insert((d1, d2), sum);
        }
    }
    let mut grid = BTreeMap::new();
    for &l1 in &ds {
        for &l2 in &ds {
            let mut total = Complex64::zero();
            for (d1, mu1) in squarefree_divisors(ctx, l1) {
                for (d2, mu2) in squarefree_divisors(ctx, l2) {
                    let weight =
                        f64::from(mu1 * mu2) / (euler_phi_u64(d1) * euler_phi_u64(d2)) as f64;
                    total += inner[&(d1, d2)] * weight;
                }
            }
            grid.insert((l1, l2), total * theta(l1, ctx) * theta(l2, ctx));
        }
    }
    grid
}

/// Denominator scale for the rational upper approximation of √q.
const SQRT_SCALE: u64 = 10_000_000_000;

/// A rational r ≥ √q, exact when q is a perfect square, otherwise with
/// r − √q ≤ 10^{-10}.
pub fn sqrt_upper(q: &BigUint) -> BigRational {
    let root = q.sqrt();
    if &(&root * &root) == q {
        return BigRational::from_integer(BigInt::from(root));
    }
    let d = BigUint::from(SQRT_SCALE);
    let scaled = q * &d * &d;
    let mut r = scaled.sqrt();
    if &r * &r < scaled {
        r += 1u32;
    }
    BigRational::new(BigInt::from(r), BigInt::from(d))
}

/// θ(l1)θ(l2)·(q − (m1+m2+1) − (m1+m2)·√q·(W(l1)W(l2) − 1)) with √q
/// replaced by an upper bound, so the result never exceeds the true value.
pub fn nf_lower_bound(
    q: &BigUint,
    m1: u64,
    m2: u64,
    l1: &Factorization,
    l2: &Factorization,
) -> Result<BigRational> {
    if q < &BigUint::from(4u32) {
        return domain("the bound needs q ≥ 4");
    }
    let int = |n: BigUint| BigRational::from_integer(BigInt::from(n));
    let m = BigUint::from(m1 + m2);
    let ww = l1.w() * l2.w() - 1u32;
    let sqrt_term = if ww.is_zero() {
        BigRational::zero()
    } else {
        int(&m * ww) * sqrt_upper(q)
    };
    let inner = int(q.clone()) - int(&m + 1u32) - sqrt_term;
    Ok(l1.theta() * l2.theta() * inner)
}

/// Both sides of the sieve inequality
/// N_f(q−1, q−1) ≥ Σ N_f(p_i ℓ, ℓ) + Σ N_f(ℓ, p_i ℓ) − (2r − 1)·N_f(ℓ, ℓ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveSides {
    pub lhs: i128,
    pub rhs: i128,
}

impl SieveSides {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }
}

pub fn sieve_inequality_check(
    ctx: &FieldContext,
    f: &RationalFunction,
    ell: u64,
    sieve_primes: &[u64],
) -> Result<SieveSides> {
    ctx.check_divisor(ell)?;
    let mut expected: Vec<u64> = ctx
        .qm1_primes()
        .iter()
        .map(|&d| u64::from(d))
        .filter(|d| ell % d != 0)
        .collect();
    let mut given = sieve_primes.to_vec();
    expected.sort_unstable();
    given.sort_unstable();
    if expected != given {
        return domain(format!(
            "sieve primes {given:?} must be exactly the primes of q - 1 not dividing ℓ, {expected:?}"
        ));
    }
    let logs = pair_logs(ctx, f);
    let n = |a: u64, b: u64| i128::from(count_in_logs(ctx, &logs, a, b));
    let lhs = n(ctx.order(), ctx.order());
    let base = n(ell, ell);
    if given.is_empty() {
        return Ok(SieveSides { lhs, rhs: base });
    }
    let r = given.len() as i128;
    let rhs = given
        .iter()
        .map(|&p| n(p * ell, ell) + n(ell, p * ell))
        .sum::<i128>()
        - (2 * r - 1) * base;
    Ok(SieveSides { lhs, rhs })
}

impl FreePairCount {
    /// Whether the exact count meets its guaranteed minimum (vacuous when
    /// there is none).
    pub fn meets_bound(&self) -> bool {
        match &self.lower_bound {
            Some(b) => BigRational::from_integer(BigInt::from(self.count)) >= *b,
            None => true,
        }
    }

    pub fn lower_bound_f64(&self) -> Option<f64> {
        self.lower_bound.as_ref().and_then(|b| b.to_f64())
    }
}
