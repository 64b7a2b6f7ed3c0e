use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    big_q, check_cota_t_guarded, check_mersenne, corollary_holds, no_gamma_ruled_out,
    phi_density_holds, qm1_factorization, sieve_certificates_for, validate, SieveCertificate,
    COTA_GUARD,
};
use crate::arith::{FactorOptions, Factorization};
use crate::certify::{
    candidate_pairs, certify_k, verify_counterexample, CertifyOptions, CertifyStatus,
};
use crate::error::{capacity, Error, Result};
use crate::ff::{FieldContext, FieldSpec};
use crate::polyff::{PolyQ, RationalFunction, RationalFunctionRepr};

/// Candidate-pair budget for the brute-force fallback when no q cap is given.
pub const DEFAULT_BRUTE_CAP: u64 = 20_000_000;
pub const DEFAULT_KMAX_LIMIT: u32 = 100;
/// Fields with q above 2^DESK_BITS skip factoring q − 1 when the
/// asymptotic bound already decides.
const DESK_BITS: u64 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    InGamma,
    NotInGamma,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Reason {
    Corollary {
        #[serde(serialize_with = "crate::serde_util::decimal")]
        w: BigUint,
    },
    Sieve(SieveCertificate),
    CotaT {
        t: u32,
        threshold: f64,
    },
    Mersenne,
    PhiDensity {
        #[serde(serialize_with = "crate::serde_util::decimal")]
        phi: BigUint,
    },
    PhiTooSmall {
        #[serde(serialize_with = "crate::serde_util::decimal")]
        phi: BigUint,
    },
    Witness {
        field: FieldSpec,
        f: RationalFunctionRepr,
    },
    BruteForce {
        field: FieldSpec,
        counterexample: Option<RationalFunctionRepr>,
        #[serde(serialize_with = "crate::serde_util::decimal")]
        examined: u64,
    },
}

impl Reason {
    pub fn name(&self) -> &'static str {
        match self {
            Reason::Corollary { .. } => "corollary",
            Reason::Sieve(_) => "sieve",
            Reason::CotaT { .. } => "cota-t",
            Reason::Mersenne => "mersenne",
            Reason::PhiDensity { .. } => "phi-density",
            Reason::PhiTooSmall { .. } => "phi-too-small",
            Reason::Witness { .. } => "witness",
            Reason::BruteForce { .. } => "brute-force",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub p: u64,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub k: u32,
    /// Normalized so that m1 ≥ m2.
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub m1: u64,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub m2: u64,
    pub status: Status,
    pub reason: Option<Reason>,
    /// Criteria tried, in order, up to and including the deciding one.
    pub attempted: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Brute force only when q ≤ this; `None` means "when the candidate
    /// count is at most [`DEFAULT_BRUTE_CAP`]", `Some(0)` disables it.
    pub brute_cap: Option<u64>,
    pub t: f64,
    pub cota_guard: f64,
    pub factor: FactorOptions,
    pub jobs: Option<usize>,
    pub kmax_limit: u32,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            brute_cap: None,
            t: 6.0,
            cota_guard: COTA_GUARD,
            factor: FactorOptions {
                rho_iterations: 1 << 22,
            },
            jobs: None,
            kmax_limit: DEFAULT_KMAX_LIMIT,
        }
    }
}

struct Cascade {
    p: u64,
    k: u32,
    m1: u64,
    m2: u64,
    attempted: Vec<String>,
}

impl Cascade {
    fn try_(&mut self, name: &str) {
        self.attempted.push(name.to_string());
    }

    fn done(self, status: Status, reason: Option<Reason>) -> Verdict {
        Verdict {
            p: self.p,
            k: self.k,
            m1: self.m1,
            m2: self.m2,
            status,
            reason,
            attempted: self.attempted,
        }
    }
}

/// The rational function (gx + 1)/(x + g) over F_16, g the fixed generator.
pub(crate) fn f16_witness(ctx: &FieldContext) -> Result<RationalFunction> {
    let g = ctx.generator();
    RationalFunction::new(
        ctx,
        PolyQ::new(vec![ctx.one(), g]),
        PolyQ::new(vec![g, ctx.one()]),
    )
}

fn factor_or_skip(p: u64, k: u32, opts: &FactorOptions) -> Result<Option<std::sync::Arc<Factorization>>> {
    match qm1_factorization(p, k, opts) {
        Ok(f) => Ok(Some(f)),
        Err(Error::Budget(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs the criteria in order: exclusion by φ, the known F_16 witness, the
/// corollary, the sieve, the p = 2 propositions, the asymptotic bound, and
/// finally exhaustive search on small fields.
pub fn classify(p: u64, k: u32, m1: u64, m2: u64, opts: &ClassifyOptions) -> Result<Verdict> {
    validate(p, k, m1, m2)?;
    let (m1, m2) = (m1.max(m2), m1.min(m2));
    let m = m1 + m2;
    let q = big_q(p, k);
    let mut c = Cascade {
        p,
        k,
        m1,
        m2,
        attempted: Vec::new(),
    };
    let cota = check_cota_t_guarded(p, k, m1, m2, opts.t, opts.cota_guard)?;
    let cota_reason = || Reason::CotaT {
        t: opts.t as u32,
        threshold: cota.threshold,
    };

    if q.bits() > DESK_BITS && cota.exact == Some(true) {
        c.try_("cota-t");
        return Ok(c.done(Status::InGamma, Some(cota_reason())));
    }

    let qm1 = factor_or_skip(p, k, &opts.factor)?;
    if qm1.is_none() {
        c.try_("factorization (budget exceeded)");
    }

    c.try_("no-gamma");
    if !no_gamma_ruled_out(&(&q - 1u32), m + 1) {
        let qm1 = qm1.as_ref().expect("small q − 1 always factors");
        let phi = qm1.euler_phi();
        if phi <= BigUint::from(m + 1) {
            return Ok(c.done(Status::NotInGamma, Some(Reason::PhiTooSmall { phi })));
        }
    }

    if p == 2 && k == 4 {
        c.try_("witness");
        let ctx = FieldContext::new(2, 4)?;
        let f = f16_witness(&ctx)?;
        if verify_counterexample(&ctx, &f, m1 as usize, m2 as usize) {
            return Ok(c.done(
                Status::NotInGamma,
                Some(Reason::Witness {
                    field: ctx.spec(),
                    f: f.to_repr(&ctx),
                }),
            ));
        }
    }

    if let Some(qm1) = &qm1 {
        c.try_("corollary");
        if corollary_holds(&q, m, qm1) {
            return Ok(c.done(Status::InGamma, Some(Reason::Corollary { w: qm1.w() })));
        }
        c.try_("sieve");
        if let Some(cert) = sieve_certificates_for(&q, m, qm1).into_iter().next() {
            return Ok(c.done(Status::InGamma, Some(Reason::Sieve(cert))));
        }
    }

    if p == 2 {
        c.try_("mersenne");
        if check_mersenne(k, m1, m2) {
            return Ok(c.done(Status::InGamma, Some(Reason::Mersenne)));
        }
        if let Some(qm1) = &qm1 {
            c.try_("phi-density");
            if phi_density_holds(&q, m1, qm1) {
                return Ok(c.done(
                    Status::InGamma,
                    Some(Reason::PhiDensity {
                        phi: qm1.euler_phi(),
                    }),
                ));
            }
        }
    }

    if cota.exact.is_some() {
        c.try_("cota-t");
        if cota.exact == Some(true) {
            return Ok(c.done(Status::InGamma, Some(cota_reason())));
        }
    }

    if let Some((status, reason)) = brute_force(&mut c, &q, opts)? {
        return Ok(c.done(status, Some(reason)));
    }
    Ok(c.done(Status::Unknown, None))
}

fn brute_force(
    c: &mut Cascade,
    q: &BigUint,
    opts: &ClassifyOptions,
) -> Result<Option<(Status, Reason)>> {
    let (m1, m2) = (c.m1 as usize, c.m2 as usize);
    let Some(q64) = q.to_u64().filter(|&v| v <= u64::from(u32::MAX)) else {
        return Ok(None);
    };
    let pairs = candidate_pairs(q64, m1, m2);
    let allowed = match opts.brute_cap {
        Some(cap) => q64 <= cap,
        None => pairs.is_some_and(|n| n <= DEFAULT_BRUTE_CAP),
    };
    let Some(pairs) = pairs.filter(|_| allowed) else {
        return Ok(None);
    };
    c.try_("brute-force");
    let ctx = FieldContext::new(c.p, c.k)?;
    let result = certify_k(
        &ctx,
        m1,
        m2,
        &CertifyOptions {
            jobs: opts.jobs,
            pair_cap: pairs,
            count_upsilon: false,
            samples: 0,
        },
    )?;
    let status = match result.status {
        CertifyStatus::Member => Status::InGamma,
        CertifyStatus::NonMember => Status::NotInGamma,
    };
    let reason = Reason::BruteForce {
        field: result.field,
        counterexample: result.counterexample,
        examined: result.stats.functions_examined,
    };
    Ok(Some((status, reason)))
}

impl Verdict {
    /// Re-derives the deciding criterion from scratch. Unknown verdicts
    /// recheck trivially.
    pub fn recheck(&self) -> Result<bool> {
        let (p, k, m1, m2) = (self.p, self.k, self.m1, self.m2);
        let q = big_q(p, k);
        let Some(reason) = &self.reason else {
            return Ok(self.status == Status::Unknown);
        };
        let qm1 = || qm1_factorization(p, k, &FactorOptions::default());
        Ok(match (self.status, reason) {
            (Status::InGamma, Reason::Corollary { w }) => {
                let f = qm1()?;
                &f.w() == w && corollary_holds(&q, m1 + m2, &f)
            }
            (Status::InGamma, Reason::Sieve(cert)) => {
                cert.bound_ok && cert.m == m1 + m2 && cert.verify_against(&*qm1()?)
            }
            (Status::InGamma, Reason::CotaT { t, .. }) => {
                check_cota_t_guarded(p, k, m1, m2, f64::from(*t), 0.0)?.exact == Some(true)
            }
            (Status::InGamma, Reason::Mersenne) => p == 2 && check_mersenne(k, m1, m2),
            (Status::InGamma, Reason::PhiDensity { .. }) => {
                p == 2 && phi_density_holds(&q, m1, &*qm1()?)
            }
            (Status::NotInGamma, Reason::PhiTooSmall { phi }) => {
                let f = qm1()?;
                &f.euler_phi() == phi && phi <= &BigUint::from(m1 + m2 + 1)
            }
            (Status::NotInGamma, Reason::Witness { field, f })
            | (
                Status::NotInGamma,
                Reason::BruteForce {
                    field,
                    counterexample: Some(f),
                    ..
                },
            ) => {
                let ctx = FieldContext::from_spec(field)?;
                let f = RationalFunction::from_repr(&ctx, f)?;
                ctx.p() == p
                    && ctx.k() == k
                    && verify_counterexample(&ctx, &f, m1 as usize, m2 as usize)
            }
            (Status::InGamma, Reason::BruteForce { field, .. }) => {
                let ctx = FieldContext::from_spec(field)?;
                let pairs = candidate_pairs(ctx.q(), m1 as usize, m2 as usize).unwrap_or(u64::MAX);
                let opts = CertifyOptions {
                    pair_cap: pairs,
                    samples: 0,
                    ..CertifyOptions::default()
                };
                certify_k(&ctx, m1 as usize, m2 as usize, &opts)?.status == CertifyStatus::Member
            }
            _ => false,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TableSummary {
    #[serde(serialize_with = "crate::serde_util::decimal_seq")]
    pub in_gamma: Vec<u32>,
    #[serde(serialize_with = "crate::serde_util::decimal_seq")]
    pub not_in_gamma: Vec<u32>,
    #[serde(serialize_with = "crate::serde_util::decimal_seq")]
    pub unknown: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaTable {
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub p: u64,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub m1: u64,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub m2: u64,
    pub rows: Vec<Verdict>,
    pub summary: TableSummary,
}

/// One verdict per k in 1..=k_max, computed in parallel, ordered by k.
pub fn gamma_table(p: u64, m1: u64, m2: u64, k_max: u32, opts: &ClassifyOptions) -> Result<GammaTable> {
    validate(p, 1, m1, m2)?;
    if k_max > opts.kmax_limit {
        return capacity(format!(
            "k_max = {k_max} exceeds the configured limit {}",
            opts.kmax_limit
        ));
    }
    let rows = (1..=k_max)
        .into_par_iter()
        .map(|k| classify(p, k, m1, m2, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = TableSummary::default();
    for v in &rows {
        match v.status {
            Status::InGamma => summary.in_gamma.push(v.k),
            Status::NotInGamma => summary.not_in_gamma.push(v.k),
            Status::Unknown => summary.unknown.push(v.k),
        }
    }
    Ok(GammaTable {
        p,
        m1: m1.max(m2),
        m2: m1.min(m2),
        rows,
        summary,
    })
}
