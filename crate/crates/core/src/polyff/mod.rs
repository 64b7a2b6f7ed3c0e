//! Polynomials and rational functions over F_q, and the admissibility
//! tests Λ_q(f1, f2) ≠ ∅ and f ∈ Υ_q(m1, m2).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{capacity, domain, Result};
use crate::ff::{FieldContext, FieldElement};

/// Default cap on the number of candidates `monic_irreducibles` may scan.
pub const DEFAULT_ENUMERATION_CAP: u64 = 20_000_000;

/// Default degree cap for [`factor_poly`].
pub const DEFAULT_FACTOR_DEGREE_CAP: usize = 12;

/// A polynomial over F_q, constant term first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PolyQ {
    coeffs: Vec<FieldElement>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyQ::constant(FieldElement::ONE)
    }

    pub fn x() -> Self {
        PolyQ {
            coeffs: vec![FieldElement::ZERO, FieldElement::ONE],
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        PolyQ::new(vec![c])
    }

    /// x − a.
    pub fn linear(ctx: &FieldContext, root: FieldElement) -> Self {
        PolyQ::new(vec![ctx.neg(root), FieldElement::ONE])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// deg(self) ≤ bound. The zero polynomial satisfies every bound.
    pub fn degree_at_most(&self, bound: usize) -> bool {
        self.degree().map_or(true, |d| d <= bound)
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FieldElement::ONE)
    }

    pub fn is_x(&self) -> bool {
        self.coeffs == [FieldElement::ZERO, FieldElement::ONE]
    }

    pub fn monic(&self, ctx: &FieldContext) -> PolyQ {
        match self.leading() {
            None => PolyQ::zero(),
            Some(lc) => self.scale(ctx, ctx.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, ctx: &FieldContext, c: FieldElement) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn add(&self, ctx: &FieldContext, other: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyQ::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
                    let b = other.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
                    ctx.add(a, b)
                })
                .collect(),
        )
    }

    pub fn sub(&self, ctx: &FieldContext, other: &PolyQ) -> PolyQ {
        self.add(ctx, &other.scale(ctx, ctx.neg(FieldElement::ONE)))
    }

    pub fn mul(&self, ctx: &FieldContext, other: &PolyQ) -> PolyQ {
        if self.is_zero() || other.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        PolyQ::new(out)
    }

    pub fn pow(&self, ctx: &FieldContext, e: u32) -> PolyQ {
        (0..e).fold(PolyQ::one(), |acc, _| acc.mul(ctx, self))
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, ctx: &FieldContext, divisor: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        let Some(dd) = divisor.degree() else {
            return domain("division by the zero polynomial");
        };
        let lc_inv = ctx.inv(divisor.leading().expect("nonzero"))?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((PolyQ::zero(), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = ctx.mul(rem[top], lc_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = ctx.sub(rem[idx], ctx.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((PolyQ::new(quot), PolyQ::new(rem)))
    }

    /// Horner evaluation.
    pub fn eval(&self, ctx: &FieldContext, a: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| ctx.add(ctx.mul(acc, a), c))
    }

    /// Coordinates of every coefficient, constant term first.
    pub fn to_repr(&self, ctx: &FieldContext) -> Vec<Vec<u32>> {
        self.coeffs.iter().map(|&c| ctx.coords(c)).collect()
    }

    pub fn from_repr(ctx: &FieldContext, repr: &[Vec<u32>]) -> Result<PolyQ> {
        let coeffs = repr
            .iter()
            .map(|c| ctx.from_coords(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyQ::new(coeffs))
    }

    pub fn display<'a>(&'a self, ctx: &'a FieldContext) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, ctx }
    }
}

/// Human-readable rendering; field elements print as coordinate tuples
/// when k > 1.
pub struct PolyDisplay<'a> {
    poly: &'a PolyQ,
    ctx: &'a FieldContext,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = if self.ctx.k() == 1 {
                self.ctx.coords(c)[0].to_string()
            } else {
                format!("{:?}", self.ctx.coords(c))
            };
            terms.push(match (i, c == FieldElement::ONE) {
                (0, _) => coeff,
                (1, true) => "x".to_string(),
                (1, false) => format!("{coeff}*x"),
                (_, true) => format!("x^{i}"),
                (_, false) => format!("{coeff}*x^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// Monic gcd; errors when both inputs are zero.
pub fn poly_gcd(ctx: &FieldContext, a: &PolyQ, b: &PolyQ) -> Result<PolyQ> {
    if a.is_zero() && b.is_zero() {
        return domain("gcd(0, 0) is undefined");
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(ctx, &b)?;
        a = b;
        b = r;
    }
    Ok(a.monic(ctx))
}

pub fn eval(ctx: &FieldContext, f: &PolyQ, a: FieldElement) -> FieldElement {
    f.eval(ctx, a)
}

/// All monic polynomials of exactly degree `d`, coefficient vectors in
/// lexicographic order (constant term compared first).
pub fn monic_of_degree(ctx: &FieldContext, d: usize) -> impl Iterator<Item = PolyQ> + '_ {
    let q = ctx.q();
    let total = q.pow(d as u32);
    (0..total).map(move |t| {
        let mut coeffs = vec![FieldElement::ZERO; d + 1];
        let mut rest = t;
        for i in (0..d).rev() {
            coeffs[i] = ctx.element((rest % q) as u32);
            rest /= q;
        }
        coeffs[d] = FieldElement::ONE;
        PolyQ::new(coeffs)
    })
}

/// Every monic irreducible of degree 1..=max_degree, ascending by
/// (degree, coefficient vector).
pub fn monic_irreducibles(ctx: &FieldContext, max_degree: usize) -> Result<Vec<PolyQ>> {
    monic_irreducibles_with_cap(ctx, max_degree, DEFAULT_ENUMERATION_CAP)
}

pub fn monic_irreducibles_with_cap(
    ctx: &FieldContext,
    max_degree: usize,
    cap: u64,
) -> Result<Vec<PolyQ>> {
    let work = ctx.q().checked_pow(max_degree as u32 + 1);
    if work.map_or(true, |w| w > cap) {
        return capacity(format!(
            "enumerating irreducibles of degree ≤ {max_degree} over F_{} exceeds the cap {cap}",
            ctx.q()
        ));
    }
    let mut found: Vec<PolyQ> = Vec::new();
    for d in 1..=max_degree {
        let smaller: Vec<PolyQ> = found
            .iter()
            .filter(|g| g.degree().is_some_and(|gd| 2 * gd <= d))
            .cloned()
            .collect();
        for cand in monic_of_degree(ctx, d) {
            let reducible = if d == 1 {
                false
            } else if has_root(ctx, &cand) {
                true
            } else {
                smaller.iter().filter(|g| g.degree() != Some(1)).any(|g| {
                    cand.div_rem(ctx, g)
                        .map(|(_, r)| r.is_zero())
                        .unwrap_or(false)
                })
            };
            if !reducible {
                found.push(cand);
            }
        }
    }
    Ok(found)
}

fn cached_irreducibles(ctx: &FieldContext, max_degree: usize) -> Result<Arc<Vec<PolyQ>>> {
    type Cache = Mutex<HashMap<(u64, u32, usize), Arc<Vec<PolyQ>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (ctx.p(), ctx.k(), max_degree);
    if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let list = Arc::new(monic_irreducibles(ctx, max_degree)?);
    cache
        .lock()
        .expect("cache lock")
        .insert(key, Arc::clone(&list));
    Ok(list)
}

fn has_root(ctx: &FieldContext, f: &PolyQ) -> bool {
    ctx.elements().any(|a| f.eval(ctx, a).is_zero())
}

/// Factorization into a leading unit and monic irreducibles with
/// multiplicities, ordered by (degree, coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFactorization {
    pub unit: FieldElement,
    pub factors: Vec<(PolyQ, u32)>,
}

impl PolyFactorization {
    pub fn expand(&self, ctx: &FieldContext) -> PolyQ {
        self.factors
            .iter()
            .fold(PolyQ::constant(self.unit), |acc, (g, e)| {
                acc.mul(ctx, &g.pow(ctx, *e))
            })
    }
}

pub fn factor_poly(ctx: &FieldContext, f: &PolyQ) -> Result<PolyFactorization> {
    factor_poly_with_cap(ctx, f, DEFAULT_FACTOR_DEGREE_CAP)
}

/// Root extraction for linear factors, then trial division by the
/// enumerated irreducibles of degree 2..=deg/2; what survives is irreducible.
pub fn factor_poly_with_cap(
    ctx: &FieldContext,
    f: &PolyQ,
    degree_cap: usize,
) -> Result<PolyFactorization> {
    let Some(deg) = f.degree() else {
        return domain("cannot factor the zero polynomial");
    };
    if deg > degree_cap {
        return capacity(format!("degree {deg} exceeds the factoring cap {degree_cap}"));
    }
    let unit = f.leading().expect("nonzero");
    let mut rest = f.monic(ctx);
    let mut factors: Vec<(PolyQ, u32)> = Vec::new();

    for a in ctx.elements() {
        if rest.degree() == Some(0) {
            break;
        }
        let lin = PolyQ::linear(ctx, a);
        let e = strip(ctx, &mut rest, &lin);
        if e > 0 {
            factors.push((lin, e));
        }
    }
    let remaining = rest.degree().unwrap_or(0);
    if remaining >= 4 {
        let irr = cached_irreducibles(ctx, remaining / 2)?;
        for g in irr.iter().filter(|g| g.degree() != Some(1)) {
            if rest.degree().unwrap_or(0) < 2 * g.degree().unwrap_or(0) {
                break;
            }
            let e = strip(ctx, &mut rest, g);
            if e > 0 {
                factors.push((g.clone(), e));
            }
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        factors.push((rest, 1));
    }
    factors.sort_by(|(a, _), (b, _)| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
    Ok(PolyFactorization { unit, factors })
}

fn strip(ctx: &FieldContext, f: &mut PolyQ, g: &PolyQ) -> u32 {
    let mut e = 0;
    loop {
        let (quot, r) = f.div_rem(ctx, g).expect("nonzero divisor");
        if !r.is_zero() {
            return e;
        }
        *f = quot;
        e += 1;
    }
}

/// A witness (n, g) for Λ_q(f1, f2) ≠ ∅.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaWitness {
    pub multiplicity: u32,
    pub factor: PolyQ,
}

/// Some monic irreducible g ≠ x divides f1·f2 exactly n times with
/// gcd(n, q − 1) = 1. Returns the first such factor in factor order.
pub fn lambda_nonempty(ctx: &FieldContext, f1: &PolyQ, f2: &PolyQ) -> Result<Option<LambdaWitness>> {
    let prod = f1.mul(ctx, f2);
    if prod.is_zero() {
        return domain("Λ is undefined when f1·f2 = 0");
    }
    let fact = factor_poly_with_cap(ctx, &prod, usize::MAX)?;
    Ok(fact
        .factors
        .into_iter()
        .find(|(g, n)| !g.is_x() && gcd(u64::from(*n), ctx.order()) == 1)
        .map(|(factor, multiplicity)| LambdaWitness {
            multiplicity,
            factor,
        }))
}

/// A rational function f1/f2 in canonical form: coprime, f2 monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    f1: PolyQ,
    f2: PolyQ,
}

/// Context-free serialized form: coordinate vectors of each coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionRepr {
    pub f1: Vec<Vec<u32>>,
    pub f2: Vec<Vec<u32>>,
}

impl RationalFunction {
    /// Canonicalizes f1/f2: errors if f2 = 0 or gcd(f1, f2) ≠ 1.
    pub fn new(ctx: &FieldContext, f1: PolyQ, f2: PolyQ) -> Result<Self> {
        let Some(lc) = f2.leading() else {
            return domain("denominator is the zero polynomial");
        };
        let g = poly_gcd(ctx, &f1, &f2)?;
        if g.degree() != Some(0) {
            return domain("numerator and denominator are not coprime");
        }
        let s = ctx.inv(lc)?;
        Ok(RationalFunction {
            f1: f1.scale(ctx, s),
            f2: f2.scale(ctx, s),
        })
    }

    /// Assumes the caller already holds a coprime pair with f2 monic.
    pub(crate) fn from_canonical(f1: PolyQ, f2: PolyQ) -> Self {
        debug_assert!(f2.is_monic());
        RationalFunction { f1, f2 }
    }

    pub fn numerator(&self) -> &PolyQ {
        &self.f1
    }

    pub fn denominator(&self) -> &PolyQ {
        &self.f2
    }

    /// f(a), or `None` where f2(a) = 0.
    pub fn eval(&self, ctx: &FieldContext, a: FieldElement) -> Option<FieldElement> {
        let d = self.f2.eval(ctx, a);
        (!d.is_zero()).then(|| ctx.mul(self.f1.eval(ctx, a), ctx.inv(d).expect("nonzero")))
    }

    /// β·f, a different rational function unless β = 1.
    pub fn scale_numerator(&self, ctx: &FieldContext, beta: FieldElement) -> Result<Self> {
        if beta.is_zero() {
            return domain("scaling by zero");
        }
        Ok(RationalFunction {
            f1: self.f1.scale(ctx, beta),
            f2: self.f2.clone(),
        })
    }

    /// 1/f, canonicalized.
    pub fn reciprocal(&self, ctx: &FieldContext) -> Result<Self> {
        RationalFunction::new(ctx, self.f2.clone(), self.f1.clone())
    }

    /// S_f = {β : f1(β) = 0 or f2(β) = 0} ∪ {0}.
    pub fn in_exceptional_set(&self, ctx: &FieldContext, a: FieldElement) -> bool {
        a.is_zero() || self.f1.eval(ctx, a).is_zero() || self.f2.eval(ctx, a).is_zero()
    }

    pub fn to_repr(&self, ctx: &FieldContext) -> RationalFunctionRepr {
        RationalFunctionRepr {
            f1: self.f1.to_repr(ctx),
            f2: self.f2.to_repr(ctx),
        }
    }

    pub fn from_repr(ctx: &FieldContext, repr: &RationalFunctionRepr) -> Result<Self> {
        RationalFunction::new(
            ctx,
            PolyQ::from_repr(ctx, &repr.f1)?,
            PolyQ::from_repr(ctx, &repr.f2)?,
        )
    }

    pub fn display<'a>(&'a self, ctx: &'a FieldContext) -> String {
        format!("({}) / ({})", self.f1.display(ctx), self.f2.display(ctx))
    }
}

/// f ∈ Υ_q(m1, m2): degree bounds plus Λ_q(f1, f2) ≠ ∅ (coprimality holds
/// by construction).
pub fn in_upsilon(ctx: &FieldContext, f: &RationalFunction, m1: usize, m2: usize) -> bool {
    f.f1.degree_at_most(m1)
        && f.f2.degree_at_most(m2)
        && !f.f1.is_zero()
        && matches!(lambda_nonempty(ctx, &f.f1, &f.f2), Ok(Some(_)))
}
