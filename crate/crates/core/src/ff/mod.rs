//! Explicit finite fields F_{p^k} with full discrete-log tables.
//!
//! Elements are stored as packed base-p digit strings (coordinate `i` of
//! the power basis is digit `i`), so the field is the integer range
//! `0..q`. Multiplication, inversion and powers go through the log/exp
//! tables; addition is a digit-wise XOR for p = 2 and a Zech-logarithm
//! lookup otherwise. All counting done elsewhere in the crate reduces to
//! integer arithmetic on discrete logarithms.

mod fp_poly;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize_u64, gcd, require_prime, Factorization};
use crate::error::{capacity, domain, Error, Result};

/// Default cap on the number of field elements.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 26;

const NO_LOG: u32 = u32::MAX;

/// An element of a [`FieldContext`], packed as base-p digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The packed index in `0..q`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable description of a field: enough to rebuild its tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u64>,
    pub generator: Vec<u32>,
}

/// A fully materialized F_{p^k}.
#[derive(Debug, Clone)]
pub struct FieldContext {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u64>,
    generator: FieldElement,
    qm1: Factorization,
    qm1_primes: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

/// Builds F_{p^k} with the default element cap.
pub fn build_field(p: u64, k: u32) -> Result<FieldContext> {
    FieldContext::new(p, k)
}

impl FieldContext {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_cap(p, k, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(p: u64, k: u32, cap: u64) -> Result<Self> {
        require_prime(p)?;
        if k == 0 {
            return domain("extension degree must be positive");
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= cap && q <= u64::from(u32::MAX / 2))
            .ok_or_else(|| {
                Error::Capacity(format!("field {p}^{k} exceeds the table cap of {cap} elements"))
            })?;
        let modulus = fp_poly::smallest_irreducible(p, k);
        let mut ctx = FieldContext {
            p: p as u32,
            k,
            q: q as u32,
            modulus,
            generator: FieldElement::ONE,
            qm1: factorize_u64(q - 1)?,
            qm1_primes: Vec::new(),
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
        };
        ctx.qm1_primes = ctx
            .qm1
            .primes_u64()
            .expect("q - 1 fits in 64 bits")
            .into_iter()
            .map(|r| r as u32)
            .collect();
        ctx.generator = ctx.find_generator();
        ctx.build_tables();
        Ok(ctx)
    }

    /// Rebuilds a field from its serialized description, checking that the
    /// stored modulus and generator are the canonical ones.
    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        let ctx = Self::new(spec.p, spec.k)?;
        if ctx.modulus != spec.modulus {
            return domain(format!(
                "modulus {:?} is not the canonical modulus {:?}",
                spec.modulus, ctx.modulus
            ));
        }
        if ctx.coords(ctx.generator) != spec.generator {
            return domain("generator does not match the canonical generator");
        }
        Ok(ctx)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: u64::from(self.p),
            k: self.k,
            modulus: self.modulus.clone(),
            generator: self.coords(self.generator),
        }
    }

    pub fn p(&self) -> u64 {
        u64::from(self.p)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        u64::from(self.q)
    }

    /// q − 1, the order of the multiplicative group.
    pub fn order(&self) -> u64 {
        u64::from(self.q) - 1
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn qm1_factorization(&self) -> &Factorization {
        &self.qm1
    }

    /// Distinct primes dividing q − 1.
    pub fn qm1_primes(&self) -> &[u32] {
        &self.qm1_primes
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with the given packed index; panics when out of range.
    pub fn element(&self, index: u32) -> FieldElement {
        assert!(index < self.q, "index {index} outside F_{}", self.q);
        FieldElement(index)
    }

    /// The prime-field element `c mod p`.
    pub fn from_int(&self, c: u64) -> FieldElement {
        FieldElement((c % self.p()) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.k as usize {
            return domain(format!("expected {} coordinates, got {}", self.k, coords.len()));
        }
        if coords.iter().any(|&c| c >= self.p) {
            return domain(format!("coordinates must lie in [0, {})", self.p));
        }
        Ok(FieldElement(
            coords.iter().rev().fold(0u32, |acc, &c| acc * self.p + c),
        ))
    }

    pub fn coords(&self, a: FieldElement) -> Vec<u32> {
        let mut rest = a.0;
        (0..self.k)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect()
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        // a + b = a (1 + b/a)
        let n = self.order() as u32;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let z = self.zech[((lb + n - la) % n) as usize];
        if z == NO_LOG {
            FieldElement::ZERO
        } else {
            FieldElement(self.exp[((la + z) % n) as usize])
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        let n = self.order() as u32;
        let la = self.log[a.0 as usize];
        FieldElement(self.exp[((la + n / 2) % n) as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.order() as u32;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return domain("0 has no inverse");
        }
        let n = self.order() as u32;
        let la = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - la) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.order();
        let l = u64::from(self.log[a.0 as usize]);
        FieldElement(self.exp[((l as u128 * e as u128) % n as u128) as usize])
    }

    /// Multiplication by the schoolbook product of coordinate polynomials
    /// reduced modulo the modulus. Independent of the log tables.
    pub fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p();
        let ca: Vec<u64> = self.coords(a).into_iter().map(u64::from).collect();
        let cb: Vec<u64> = self.coords(b).into_iter().map(u64::from).collect();
        let mut prod = vec![0u64; 2 * self.k as usize - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let r = fp_poly::rem(&prod, &self.modulus, p);
        let mut coords = vec![0u32; self.k as usize];
        for (i, c) in r.into_iter().enumerate() {
            coords[i] = c as u32;
        }
        self.from_coords(&coords).expect("reduced coordinates")
    }

    /// g^n for the fixed generator g.
    pub fn exp(&self, n: u64) -> FieldElement {
        FieldElement(self.exp[(n % self.order()) as usize])
    }

    /// Discrete logarithm to the base of the fixed generator.
    pub fn dlog(&self, a: FieldElement) -> Result<u64> {
        match self.log.get(a.0 as usize) {
            Some(&l) if l != NO_LOG => Ok(u64::from(l)),
            Some(_) => domain("discrete log of 0 is undefined"),
            None => domain(format!("index {} outside the field", a.0)),
        }
    }

    /// Raw log lookup; `None` for zero.
    pub(crate) fn log_of(&self, a: FieldElement) -> Option<u32> {
        let l = self.log[a.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    pub fn is_primitive(&self, a: FieldElement) -> bool {
        match self.log_of(a) {
            None => false,
            Some(l) => gcd(u64::from(l), self.order()) == 1,
        }
    }

    /// α is s-free iff no prime d | s divides dlog(α).
    pub fn is_s_free(&self, a: FieldElement, s: u64) -> Result<bool> {
        self.check_divisor(s)?;
        let l = self.dlog(a)?;
        Ok(self.is_s_free_log(l, s))
    }

    pub(crate) fn is_s_free_log(&self, l: u64, s: u64) -> bool {
        self.qm1_primes
            .iter()
            .map(|&d| u64::from(d))
            .filter(|d| s % d == 0)
            .all(|d| l % d != 0)
    }

    pub(crate) fn check_divisor(&self, s: u64) -> Result<()> {
        if s == 0 || self.order() % s != 0 {
            return domain(format!("{s} does not divide q - 1 = {}", self.order()));
        }
        Ok(())
    }

    /// Lexicographically smallest (constant coordinate first) element of
    /// multiplicative order q − 1.
    fn find_generator(&self) -> FieldElement {
        let n = self.order();
        let cofactors: Vec<u64> = self.qm1_primes.iter().map(|&r| n / u64::from(r)).collect();
        let p = self.p();
        let k = self.k as usize;
        for t in 1..u64::from(self.q) {
            let mut coords = vec![0u32; k];
            let mut rest = t;
            for i in (0..k).rev() {
                coords[i] = (rest % p) as u32;
                rest /= p;
            }
            let g = self.from_coords(&coords).expect("valid coordinates");
            if cofactors
                .iter()
                .all(|&c| self.pow_slow(g, c) != FieldElement::ONE)
            {
                return g;
            }
        }
        unreachable!("the multiplicative group is cyclic")
    }

    fn pow_slow(&self, mut base: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let n = q - 1;
        let k = self.k as usize;
        let p = self.p;
        // images of the basis vectors x^i under multiplication by g
        let basis: Vec<FieldElement> = (0..k)
            .map(|i| {
                let mut c = vec![0u32; k];
                c[i] = 1;
                let xi = self.from_coords(&c).expect("basis vector");
                self.mul_poly(xi, self.generator)
            })
            .collect();
        let basis_coords: Vec<Vec<u32>> = basis.iter().map(|&b| self.coords(b)).collect();
        let mut exp = vec![0u32; n];
        let mut log = vec![NO_LOG; q];
        let mut cur = FieldElement::ONE;
        for (a, slot) in exp.iter_mut().enumerate().take(n) {
            *slot = cur.0;
            log[cur.0 as usize] = a as u32;
            cur = if p == 2 {
                let mut acc = 0u32;
                for (i, b) in basis.iter().enumerate() {
                    if cur.0 >> i & 1 == 1 {
                        acc ^= b.0;
                    }
                }
                FieldElement(acc)
            } else {
                let c = self.coords(cur);
                let mut out = vec![0u32; k];
                for (i, &ci) in c.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    for (j, slot) in out.iter_mut().enumerate() {
                        *slot = (*slot + ci * basis_coords[i][j]) % p;
                    }
                }
                self.from_coords(&out).expect("reduced coordinates")
            };
        }
        let mut zech = Vec::new();
        if p != 2 {
            zech = exp
                .iter()
                .map(|&e| {
                    // adding 1 only touches the constant digit
                    let plus_one = if e % p == p - 1 { e - (p - 1) } else { e + 1 };
                    log[plus_one as usize]
                })
                .collect();
        }
        self.exp = exp;
        self.log = log;
        self.zech = zech;
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for FieldContext {}

/// Checks a field cap without building the field.
pub fn field_size(p: u64, k: u32, cap: u64) -> Result<u64> {
    match p.checked_pow(k).filter(|&q| q <= cap) {
        Some(q) => Ok(q),
        None => capacity(format!("field {p}^{k} exceeds the cap of {cap} elements")),
    }
}

/// Number of primitive elements, φ(q − 1).
pub fn primitive_count(ctx: &FieldContext) -> u64 {
    ctx.qm1.euler_phi().to_u64().expect("fits")
}
