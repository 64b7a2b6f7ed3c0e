//! Exhaustive ground truth for small fields: is every f ∈ Υ_q(m1, m2)
//! guaranteed a primitive pair (α, f(α))?

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capacity, domain, Error, Result};
use crate::ff::{FieldContext, FieldElement, FieldSpec};
use crate::polyff::{
    in_upsilon, lambda_nonempty, monic_of_degree, poly_gcd, PolyQ, RationalFunction,
    RationalFunctionRepr,
};

/// Default limit on (f1, f2) candidate pairs for [`enumerate_upsilon`].
pub const DEFAULT_PAIR_CAP: u64 = 100_000_000;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertifyStatus {
    Member,
    NonMember,
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    pub pair_cap: u64,
    /// Also count |Υ| exactly (factors every candidate; slow).
    pub count_upsilon: bool,
    /// How many (f, α) spot checks to keep.
    pub samples: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            jobs: None,
            pair_cap: DEFAULT_PAIR_CAP,
            count_upsilon: false,
            samples: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifyStats {
    /// Candidate pairs (f1 ≠ 0, f2 monic) visited, in enumeration order.
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub functions_examined: u64,
    #[serde(serialize_with = "crate::serde_util::decimal_opt")]
    pub functions_in_upsilon: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// A member f of Υ together with an α making (α, f(α)) primitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpotCheck {
    pub f: RationalFunctionRepr,
    pub alpha: Vec<u32>,
    pub f_alpha: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifyResult {
    pub field: FieldSpec,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub m1: usize,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub m2: usize,
    pub status: CertifyStatus,
    pub counterexample: Option<RationalFunctionRepr>,
    pub stats: CertifyStats,
    pub samples: Vec<SpotCheck>,
}

/// Number of (f1, f2) candidates: nonzero f1 of degree ≤ m1 times monic
/// f2 of degree ≤ m2. `None` on overflow.
pub fn candidate_pairs(q: u64, m1: usize, m2: usize) -> Option<u64> {
    let n1 = q.checked_pow(u32::try_from(m1 + 1).ok()?)? - 1;
    let n2 = monic_count(q, m2)?;
    n1.checked_mul(n2)
}

fn monic_count(q: u64, m2: usize) -> Option<u64> {
    (0..=m2).try_fold(0u64, |acc, d| acc.checked_add(q.checked_pow(d as u32)?))
}

fn check_cap(ctx: &FieldContext, m1: usize, m2: usize, cap: u64) -> Result<u64> {
    match candidate_pairs(ctx.q(), m1, m2) {
        Some(n) if n <= cap => Ok(n),
        Some(n) => capacity(format!(
            "Υ_{}({m1},{m2}) has {n} candidate pairs, above the cap of {cap}",
            ctx.q()
        )),
        None => capacity(format!(
            "Υ_{}({m1},{m2}) candidate count overflows 64 bits",
            ctx.q()
        )),
    }
}

/// f1 with coefficient i equal to base-q digit i of `index`.
fn numerator_at(ctx: &FieldContext, mut index: u64, m1: usize) -> PolyQ {
    let q = ctx.q();
    let mut coeffs = Vec::with_capacity(m1 + 1);
    for _ in 0..=m1 {
        coeffs.push(ctx.element((index % q) as u32));
        index /= q;
    }
    PolyQ::new(coeffs)
}

fn denominators(ctx: &FieldContext, m2: usize) -> Vec<PolyQ> {
    (0..=m2).flat_map(|d| monic_of_degree(ctx, d)).collect()
}

/// Canonical members of Υ_q(m1, m2): f1 ranges over nonzero polynomials
/// of degree ≤ m1 by base-q index (constant digit least significant),
/// f2 over monic polynomials by degree then lexicographically.
pub fn enumerate_upsilon(
    ctx: &FieldContext,
    m1: usize,
    m2: usize,
) -> Result<impl Iterator<Item = RationalFunction> + '_> {
    enumerate_upsilon_with_cap(ctx, m1, m2, DEFAULT_PAIR_CAP)
}

pub fn enumerate_upsilon_with_cap(
    ctx: &FieldContext,
    m1: usize,
    m2: usize,
    cap: u64,
) -> Result<impl Iterator<Item = RationalFunction> + '_> {
    check_cap(ctx, m1, m2, cap)?;
    let n1 = ctx.q().pow(m1 as u32 + 1);
    let dens = denominators(ctx, m2);
    Ok((1..n1).flat_map(move |t| {
        let f1 = numerator_at(ctx, t, m1);
        dens.clone()
            .into_iter()
            .filter_map(move |f2| canonical_member(ctx, &f1, f2, m1, m2))
    }))
}

/// `n` independent uniform draws from Υ_q(m1, m2) by rejection: a random
/// nonzero polynomial of degree ≤ m2 made monic is uniform over the monic
/// denominators.
pub fn sample_upsilon<R: Rng + ?Sized>(
    ctx: &FieldContext,
    m1: usize,
    m2: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<RationalFunction>> {
    let q = ctx.q() as u32;
    let mut random_poly = |deg: usize| loop {
        let g = PolyQ::new((0..=deg).map(|_| ctx.element(rng.gen_range(0..q))).collect());
        if !g.is_zero() {
            return g;
        }
    };
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 1000 * (n + 1) {
            return domain(format!("no members of Υ found after {attempts} draws"));
        }
        let f1 = random_poly(m1);
        let f2 = random_poly(m2).monic(ctx);
        if let Some(f) = canonical_member(ctx, &f1, f2, m1, m2) {
            out.push(f);
        }
    }
    Ok(out)
}

fn canonical_member(
    ctx: &FieldContext,
    f1: &PolyQ,
    f2: PolyQ,
    m1: usize,
    m2: usize,
) -> Option<RationalFunction> {
    let coprime = poly_gcd(ctx, f1, &f2).ok()?.degree() == Some(0);
    if !coprime {
        return None;
    }
    let f = RationalFunction::from_canonical(f1.clone(), f2);
    in_upsilon(ctx, &f, m1, m2).then_some(f)
}

/// Shared lookup tables for the search: primitive elements in ascending
/// dlog order and a primitivity flag per exponent.
struct Search<'a> {
    ctx: &'a FieldContext,
    primitives: Vec<FieldElement>,
    primitive_log: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(ctx: &'a FieldContext) -> Self {
        let m = ctx.order();
        let primitive_log: Vec<bool> = (0..m).map(|l| crate::arith::gcd(l, m) == 1).collect();
        let primitives = (0..m)
            .filter(|&l| primitive_log[l as usize])
            .map(|l| ctx.exp(l))
            .collect();
        Search {
            ctx,
            primitives,
            primitive_log,
        }
    }

    fn logs_at_primitives(&self, f: &PolyQ) -> Vec<u32> {
        self.primitives
            .iter()
            .map(|&a| self.ctx.log_of(f.eval(self.ctx, a)).unwrap_or(NO_LOG))
            .collect()
    }

    /// Position (in `primitives`) of the first α with f1(α)/f2(α) primitive.
    fn first_good(&self, la: &[u32], lb: &[u32]) -> Option<usize> {
        let m = self.ctx.order();
        la.iter().zip(lb).position(|(&a, &b)| {
            a != NO_LOG
                && b != NO_LOG
                && self.primitive_log[((u64::from(a) + m - u64::from(b)) % m) as usize]
        })
    }
}

/// Decides whether every f ∈ Υ_q(m1, m2) has some α with α and f(α) both
/// primitive. The first failing f in enumeration order is returned.
pub fn certify_k(
    ctx: &FieldContext,
    m1: usize,
    m2: usize,
    opts: &CertifyOptions,
) -> Result<CertifyResult> {
    let total = check_cap(ctx, m1, m2, opts.pair_cap)?;
    let start = Instant::now();
    match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Capacity(format!("cannot start {jobs} workers: {e}")))?
            .install(|| run_certify(ctx, m1, m2, opts, total, start)),
        None => run_certify(ctx, m1, m2, opts, total, start),
    }
}

fn run_certify(
    ctx: &FieldContext,
    m1: usize,
    m2: usize,
    opts: &CertifyOptions,
    total: u64,
    start: Instant,
) -> Result<CertifyResult> {
    let search = Search::new(ctx);
    let dens = denominators(ctx, m2);
    let den_logs: Vec<Vec<u32>> = dens.iter().map(|f2| search.logs_at_primitives(f2)).collect();
    let n1 = ctx.q().pow(m1 as u32 + 1);

    let failing = (1..n1).into_par_iter().find_map_first(|t| {
        let f1 = numerator_at(ctx, t, m1);
        let la = search.logs_at_primitives(&f1);
        den_logs.iter().enumerate().find_map(|(pos, lb)| {
            if search.first_good(&la, lb).is_some() {
                return None;
            }
            let f = canonical_member(ctx, &f1, dens[pos].clone(), m1, m2)?;
            Some((t, pos, f))
        })
    });

    let (status, counterexample, examined) = match failing {
        None => (CertifyStatus::Member, None, total),
        Some((t, pos, f)) => {
            let fresh = FieldContext::from_spec(&ctx.spec())?;
            let repr = f.to_repr(ctx);
            let again = RationalFunction::from_repr(&fresh, &repr)?;
            if !verify_counterexample(&fresh, &again, m1, m2) {
                return domain("counterexample failed independent re-verification");
            }
            let examined = (t - 1) * dens.len() as u64 + pos as u64 + 1;
            (CertifyStatus::NonMember, Some(repr), examined)
        }
    };

    let functions_in_upsilon = if opts.count_upsilon {
        Some(count_upsilon(ctx, m1, m2, &dens))
    } else {
        None
    };
    let samples = spot_checks(ctx, &search, m1, m2, &dens, opts.samples);
    Ok(CertifyResult {
        field: ctx.spec(),
        m1,
        m2,
        status,
        counterexample,
        stats: CertifyStats {
            functions_examined: examined,
            functions_in_upsilon,
            wall_time_ms: Some(start.elapsed().as_millis() as u64),
        },
        samples,
    })
}

fn count_upsilon(ctx: &FieldContext, m1: usize, m2: usize, dens: &[PolyQ]) -> u64 {
    let n1 = ctx.q().pow(m1 as u32 + 1);
    (1..n1)
        .into_par_iter()
        .map(|t| {
            let f1 = numerator_at(ctx, t, m1);
            dens.iter()
                .filter(|f2| canonical_member(ctx, &f1, (*f2).clone(), m1, m2).is_some())
                .count() as u64
        })
        .sum()
}

fn spot_checks(
    ctx: &FieldContext,
    search: &Search,
    m1: usize,
    m2: usize,
    dens: &[PolyQ],
    wanted: usize,
) -> Vec<SpotCheck> {
    let mut out = Vec::new();
    let n1 = ctx.q().pow(m1 as u32 + 1);
    'outer: for t in 1..n1 {
        let f1 = numerator_at(ctx, t, m1);
        let la = search.logs_at_primitives(&f1);
        for f2 in dens {
            if out.len() >= wanted {
                break 'outer;
            }
            let Some(f) = canonical_member(ctx, &f1, f2.clone(), m1, m2) else {
                continue;
            };
            if let Some(j) = search.first_good(&la, &search.logs_at_primitives(f2)) {
                let alpha = search.primitives[j];
                let fa = f.eval(ctx, alpha).expect("α ∉ S_f");
                out.push(SpotCheck {
                    f: f.to_repr(ctx),
                    alpha: ctx.coords(alpha),
                    f_alpha: ctx.coords(fa),
                });
            }
        }
    }
    out
}

/// f ∈ Υ_q(m1, m2) and no α gives a primitive pair (α, f(α)).
pub fn verify_counterexample(ctx: &FieldContext, f: &RationalFunction, m1: usize, m2: usize) -> bool {
    in_upsilon(ctx, f, m1, m2) && kills_every_alpha(ctx, f)
}

fn kills_every_alpha(ctx: &FieldContext, f: &RationalFunction) -> bool {
    ctx.elements().all(|a| {
        !ctx.is_primitive(a)
            || f.in_exceptional_set(ctx, a)
            || !ctx.is_primitive(f.eval(ctx, a).expect("α ∉ S_f"))
    })
}

/// The explicit construction for fields with φ(q − 1) ≤ m1 + m2 + 1: zeros
/// of f1 and f2 on all but one primitive element, then a scalar making f
/// equal to 1 at the last one. Auxiliary monic factors u, v (smallest
/// first) are added when needed to land in Υ.
pub fn build_nogamma_witness(
    ctx: &FieldContext,
    m1: usize,
    m2: usize,
) -> Result<Option<RationalFunction>> {
    let search = Search::new(ctx);
    let phi = search.primitives.len();
    if phi > m1 + m2 + 1 {
        return domain(format!(
            "φ(q − 1) = {phi} exceeds m1 + m2 + 1 = {}",
            m1 + m2 + 1
        ));
    }
    let prims = &search.primitives;
    // Over F_2 the only primitive element is 1 = f(1) itself, so it has to
    // be killed by a zero instead of by scaling.
    let spare = usize::from(ctx.q() > 2);
    let a = m1.min(phi - spare);
    let b = m2.min(phi - spare - a);
    let vanish = |roots: &[FieldElement]| {
        roots
            .iter()
            .fold(PolyQ::one(), |acc, &r| acc.mul(ctx, &PolyQ::linear(ctx, r)))
    };
    let p1 = vanish(&prims[..a]);
    let p2 = vanish(&prims[a..a + b]);
    let last = prims.get(a + b).copied();

    let us: Vec<PolyQ> = (0..=m1 - a).flat_map(|d| monic_of_degree(ctx, d)).collect();
    let vs: Vec<PolyQ> = (0..=m2 - b).flat_map(|d| monic_of_degree(ctx, d)).collect();
    for u in &us {
        for v in &vs {
            let f1 = p1.mul(ctx, u);
            let f2 = p2.mul(ctx, v);
            let Ok(f) = RationalFunction::new(ctx, f1, f2) else {
                continue;
            };
            let f = match last {
                Some(alpha) if !f.in_exceptional_set(ctx, alpha) => {
                    let beta = ctx.inv(f.eval(ctx, alpha).expect("α ∉ S_f"))?;
                    f.scale_numerator(ctx, beta)?
                }
                _ => f,
            };
            if lambda_nonempty(ctx, f.numerator(), f.denominator())?.is_some()
                && verify_counterexample(ctx, &f, m1, m2)
            {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}
