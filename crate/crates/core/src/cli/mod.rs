//! The `primpair` command line: argument parsing, cap validation, the
//! factorization disk cache and report rendering.

mod cache;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{factorize_with, FactorOptions};
use crate::certify::{candidate_pairs, certify_k, sample_upsilon, CertifyOptions, DEFAULT_PAIR_CAP};
use crate::criteria::{classify, gamma_table, qm1_factorization, ClassifyOptions, DEFAULT_KMAX_LIMIT};
use crate::error::{capacity, domain, Error, Result};
use crate::ff::{field_size, FieldContext, DEFAULT_TABLE_CAP};
use crate::pairs::{count_in_logs, nf_lower_bound, n_f_with_table, pair_logs, sieve_inequality_check, CharacterTable};

pub use report::{CheckRecord, FactorReport, TableRow};

/// Largest pair budget accepted without `--unsafe-cap`.
pub const HARD_PAIR_CAP: u64 = 10_000_000_000;
/// Largest field `verify` accepts without `--unsafe-cap`.
pub const VERIFY_FIELD_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "primpair", version, about = "Primitive pairs (α, f(α)) over finite fields")]
pub struct RunConfig {
    /// Output format: JSON lines, CSV, or an aligned table.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Lift the safety caps on field size, pair budget and k range.
    #[arg(long, global = true)]
    pub unsafe_cap: bool,
    /// Directory for cached factorizations of p^k − 1.
    #[arg(long, global = true, env = "PRIMPAIR_CACHE_DIR", value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide k ∈ Γ_p(m1, m2) with the criteria cascade.
    Classify(ClassifyArgs),
    /// Classify every k up to --kmax.
    Table(TableArgs),
    /// Exhaustive search over Υ_q(m1, m2).
    Certify(CertifyArgs),
    /// Check counts against the character expression, the lower bound and the sieve inequality.
    Verify(VerifyArgs),
    /// Factor an integer, or p^k − 1 with -p/-k.
    Factor(FactorArgs),
}

#[derive(Debug, Args)]
pub struct Degrees {
    #[arg(long, default_value_t = 3)]
    pub m1: u64,
    #[arg(long, default_value_t = 2)]
    pub m2: u64,
}

#[derive(Debug, Args)]
pub struct CriteriaArgs {
    /// Allow exhaustive search for q up to this bound (0 disables it).
    #[arg(long)]
    pub brute_cap: Option<u64>,
    /// Exponent of the asymptotic bound; must exceed 4.
    #[arg(long, default_value_t = 6.0)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub k: u32,
    #[command(flatten)]
    pub degrees: Degrees,
    #[command(flatten)]
    pub criteria: CriteriaArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(short)]
    pub p: u64,
    #[command(flatten)]
    pub degrees: Degrees,
    #[arg(long)]
    pub kmax: u32,
    #[command(flatten)]
    pub criteria: CriteriaArgs,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub k: u32,
    #[command(flatten)]
    pub degrees: Degrees,
    /// Maximum number of (f1, f2) candidates to examine.
    #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
    pub cap: u64,
    /// Spot checks to report for a member.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    /// Also count |Υ| (slower: no early exit on Λ).
    #[arg(long)]
    pub count_upsilon: bool,
    /// Include wall time (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub m1: u64,
    #[arg(long, default_value_t = 1)]
    pub m2: u64,
    /// Random functions drawn from Υ.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    /// Decimal integer to factor.
    #[arg(required_unless_present_all = ["p", "k"], conflicts_with_all = ["p", "k"])]
    pub n: Option<String>,
    #[arg(short, requires = "k")]
    pub p: Option<u64>,
    #[arg(short, requires = "p")]
    pub k: Option<u32>,
    /// Rho iterations per composite cofactor.
    #[arg(long)]
    pub budget: Option<u64>,
}

/// Exit status for an error: usage problems are 1, exhausted caps or
/// budgets are 2.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Io(_) => 1,
        Error::Capacity(_) | Error::Budget(_) => 2,
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// status. Reports go to `out`, diagnostics to `err`.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&config, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "primpair: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let pool = match config.jobs {
        Some(0) => return domain("--jobs must be positive"),
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Domain(e.to_string()))?,
        ),
        None => None,
    };
    // Reports are small; render into a buffer so the work can move to the pool.
    let mut buf = Vec::new();
    match pool {
        Some(pool) => pool.install(|| dispatch(config, &mut buf))?,
        None => dispatch(config, &mut buf)?,
    }
    out.write_all(&buf)
        .and_then(|()| out.flush())
        .map_err(|e| Error::Io(e.to_string()))
}

fn dispatch(config: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    let format = config.format;
    let cache_dir = config.cache_dir.as_deref().filter(|d| !d.as_os_str().is_empty());
    match &config.command {
        Command::Classify(a) => {
            let opts = classify_options(config, &a.criteria)?;
            check_brute_cap(config, a.p, a.k, &a.degrees, &opts)?;
            cache::load(cache_dir, a.p, a.k..=a.k);
            let v = classify(a.p, a.k, a.degrees.m1, a.degrees.m2, &opts)?;
            cache::store(cache_dir, a.p, a.k..=a.k);
            report::emit(out, format, &[v])
        }
        Command::Table(a) => {
            let mut opts = classify_options(config, &a.criteria)?;
            if a.kmax == 0 {
                return domain("--kmax must be at least 1");
            }
            if config.unsafe_cap {
                opts.kmax_limit = u32::MAX;
            } else if a.kmax > DEFAULT_KMAX_LIMIT {
                return capacity(format!(
                    "--kmax {} exceeds {DEFAULT_KMAX_LIMIT}; pass --unsafe-cap to lift it",
                    a.kmax
                ));
            }
            for k in 1..=a.kmax {
                check_brute_cap(config, a.p, k, &a.degrees, &opts)?;
            }
            cache::load(cache_dir, a.p, 1..=a.kmax);
            let table = gamma_table(a.p, a.degrees.m1, a.degrees.m2, a.kmax, &opts)?;
            cache::store(cache_dir, a.p, 1..=a.kmax);
            let rows: Vec<TableRow> = table.rows.iter().map(TableRow::from_verdict).collect();
            report::emit(out, format, &rows)
        }
        Command::Certify(a) => {
            let (m1, m2) = (a.degrees.m1 as usize, a.degrees.m2 as usize);
            check_field(config, a.p, a.k, DEFAULT_TABLE_CAP)?;
            if a.cap > HARD_PAIR_CAP && !config.unsafe_cap {
                return capacity(format!(
                    "--cap {} exceeds {HARD_PAIR_CAP}; pass --unsafe-cap to lift it",
                    a.cap
                ));
            }
            let ctx = FieldContext::new(a.p, a.k)?;
            let mut r = certify_k(
                &ctx,
                m1,
                m2,
                &CertifyOptions {
                    jobs: None,
                    pair_cap: a.cap,
                    count_upsilon: a.count_upsilon,
                    samples: a.samples,
                },
            )?;
            if !a.timing {
                r.stats.wall_time_ms = None;
            }
            report::emit(out, format, &[r])
        }
        Command::Verify(a) => {
            check_field(config, a.p, a.k, VERIFY_FIELD_CAP)?;
            let ctx = FieldContext::new(a.p, a.k)?;
            let records = verify_records(&ctx, a)?;
            report::emit(out, format, &records)
        }
        Command::Factor(a) => {
            let fopts = a
                .budget
                .map(|rho_iterations| FactorOptions { rho_iterations })
                .unwrap_or_default();
            let f = match (&a.n, a.p, a.k) {
                (Some(n), _, _) => {
                    let n: BigUint = n
                        .trim()
                        .parse()
                        .map_err(|_| Error::Domain(format!("not a positive integer: {n:?}")))?;
                    factorize_with(&n, &fopts)?
                }
                (None, Some(p), Some(k)) => {
                    cache::load(cache_dir, p, k..=k);
                    let f = qm1_factorization(p, k, &fopts)?;
                    cache::store(cache_dir, p, k..=k);
                    (*f).clone()
                }
                _ => return domain("give an integer or both -p and -k"),
            };
            report::emit(out, format, &[FactorReport(f)])
        }
    }
}

fn classify_options(config: &RunConfig, c: &CriteriaArgs) -> Result<ClassifyOptions> {
    if !(c.t > 4.0) || !c.t.is_finite() {
        return domain(format!("--t must be a finite number above 4, got {}", c.t));
    }
    Ok(ClassifyOptions {
        brute_cap: c.brute_cap,
        t: c.t,
        jobs: config.jobs,
        ..ClassifyOptions::default()
    })
}

/// A q cap on brute force must not admit a search beyond the pair cap.
fn check_brute_cap(config: &RunConfig, p: u64, k: u32, d: &Degrees, opts: &ClassifyOptions) -> Result<()> {
    let Some(cap) = opts.brute_cap.filter(|&c| c > 0) else {
        return Ok(());
    };
    if config.unsafe_cap {
        return Ok(());
    }
    if cap > DEFAULT_TABLE_CAP {
        return capacity(format!(
            "--brute-cap {cap} exceeds the field table cap {DEFAULT_TABLE_CAP}"
        ));
    }
    let Ok(q) = field_size(p, k, cap) else {
        return Ok(());
    };
    if q > cap {
        return Ok(());
    }
    let (m1, m2) = (d.m1.max(d.m2) as usize, d.m1.min(d.m2) as usize);
    match candidate_pairs(q, m1, m2) {
        Some(n) if n <= HARD_PAIR_CAP => Ok(()),
        _ => capacity(format!(
            "brute force over F_{q} at ({m1}, {m2}) exceeds {HARD_PAIR_CAP} candidates; lower --brute-cap or pass --unsafe-cap"
        )),
    }
}

fn check_field(config: &RunConfig, p: u64, k: u32, cap: u64) -> Result<()> {
    let cap = if config.unsafe_cap { DEFAULT_TABLE_CAP } else { cap };
    field_size(p, k, cap).map(|_| ())
}

/// Seeded checks on sampled members of Υ: exact count vs. the character
/// expression and vs. the lower bound for every square-free (l1, l2), and
/// the sieve inequality for every split of the primes of q − 1 into an
/// ascending prefix ℓ and the remaining sieve primes.
fn verify_records(ctx: &FieldContext, a: &VerifyArgs) -> Result<Vec<CheckRecord>> {
    let (m1, m2) = (a.m1 as usize, a.m2 as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let fs = sample_upsilon(ctx, m1, m2, a.samples, &mut rng)?;
    let q = ctx.q();
    let primes: Vec<u64> = ctx.qm1_primes().iter().map(|&p| u64::from(p)).collect();
    let radical: u64 = primes.iter().product();
    let divisors: Vec<u64> = (0..1u32 << primes.len())
        .map(|mask| {
            primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p)
                .product()
        })
        .collect();
    let table = CharacterTable::new(ctx, radical)?;
    let tolerance = 1e-6 * q as f64;
    let mut records = Vec::new();
    for f in &fs {
        let repr = f.to_repr(ctx);
        let logs = pair_logs(ctx, f);
        let d1 = f.numerator().degree().unwrap_or(0) as u64;
        let d2 = f.denominator().degree().unwrap_or(0) as u64;
        for &l1 in &divisors {
            for &l2 in &divisors {
                let count = count_in_logs(ctx, &logs, l1, l2);
                let chi: Complex64 = n_f_with_table(ctx, &table, &logs, l1, l2);
                records.push(CheckRecord {
                    check: "characters",
                    q,
                    f: repr.clone(),
                    l1,
                    l2,
                    lhs: count.to_string(),
                    rhs: format!("{:.6}", chi.re),
                    pass: (chi.re - count as f64).abs() < tolerance && chi.im.abs() < tolerance,
                });
                if q >= 4 {
                    let bound = nf_lower_bound(
                        &BigUint::from(q),
                        d1,
                        d2,
                        &crate::arith::factorize_u64(l1)?,
                        &crate::arith::factorize_u64(l2)?,
                    )?;
                    records.push(CheckRecord {
                        check: "lower_bound",
                        q,
                        f: repr.clone(),
                        l1,
                        l2,
                        lhs: count.to_string(),
                        rhs: bound.to_string(),
                        pass: num_rational::BigRational::from_integer(count.into()) >= bound,
                    });
                }
            }
        }
        for split in 0..=primes.len() {
            let ell: u64 = primes[..split].iter().product();
            let sides = sieve_inequality_check(ctx, f, ell, &primes[split..])?;
            records.push(CheckRecord {
                check: "sieve",
                q,
                f: repr.clone(),
                l1: ell,
                l2: ell,
                lhs: sides.lhs.to_string(),
                rhs: sides.rhs.to_string(),
                pass: sides.holds(),
            });
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests;
