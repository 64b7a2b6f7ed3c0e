//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so that every criterion executes and reports even when
//! an earlier one fails; the process exits non-zero if any failed.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use primpair::arith::is_prime_u64;
use primpair::certify::{
    candidate_pairs, certify_k, enumerate_upsilon, sample_upsilon, verify_counterexample,
    CertifyOptions, CertifyStatus,
};
use primpair::criteria::{
    check_corollary, check_cota_t, cota_threshold, gamma_table, sieve_certificates,
    sieve_search, ClassifyOptions,
};
use primpair::ff::{build_field, FieldContext};
use primpair::pairs::{
    character_sum, count_free_pairs, n_f_grid, n_f_via_characters, pair_logs, sieve_inequality_check,
    CharacterIndex, CharacterTable,
};
use primpair::polyff::{monic_irreducibles, PolyQ, RationalFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big_list(xs: &[u64]) -> Vec<BigUint> {
    xs.iter().map(|&x| BigUint::from(x)).collect()
}

fn show(xs: &[BigUint]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// (k, ℓ radical, sieve primes) for p = 2.
const TABLE1: &[(u32, u64, &[u64])] = &[
    (11, 1, &[23, 89]),
    (14, 3, &[43, 127]),
    (15, 1, &[7, 31, 151]),
    (16, 3, &[5, 17, 257]),
    (18, 3, &[7, 19, 73]),
    (20, 15, &[11, 31, 41]),
    (24, 15, &[7, 13, 17, 241]),
    (28, 15, &[29, 43, 113, 127]),
    (36, 15, &[7, 13, 19, 37, 73, 109]),
];

/// (p, k, ℓ radical, sieve primes). Two rows differ from the printed
/// tables where the arithmetic forces it: 3 | 5^12 − 1 makes the ℓ radical
/// of the (5, 12) split 6, and 7^7 − 1 = 2·3·29·4733.
const TABLES_3_TO_5: &[(u64, u32, u64, &[u64])] = &[
    (3, 9, 2, &[13, 757]),
    (3, 10, 2, &[11, 61]),
    (3, 18, 2, &[7, 13, 19, 37, 757]),
    (5, 7, 2, &[19531]),
    (5, 8, 2, &[3, 13, 313]),
    (5, 10, 2, &[3, 11, 71, 521]),
    (5, 12, 6, &[7, 13, 31, 601]),
    (7, 7, 6, &[29, 4733]),
];

fn sieve_rows(rows: &[(u64, u32, u64, &[u64])]) -> Result<String, String> {
    let mut picks = Vec::new();
    for &(p, k, ell, primes) in rows {
        let want = big_list(primes);
        let certs = sieve_certificates(p, k, 3, 2).map_err(|e| e.to_string())?;
        ensure(
            certs.iter().any(|c| {
                c.ell_radical == BigUint::from(ell) && c.sieve_primes == want && c.bound_ok && c.verify()
            }),
            || format!("p={p} k={k}: no certificate with ℓ radical {ell} and {}", show(&want)),
        )?;
        let first = sieve_search(p, k, 3, 2)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("p={p} k={k}: sieve_search found nothing"))?;
        picks.push(format!("{p}^{k}:ℓ={}", first.ell_radical));
    }
    Ok(format!("all rows certified; first-pass splits {}", picks.join(" ")))
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let rows: Vec<(u64, u32, u64, &[u64])> = TABLE1.iter().map(|&(k, l, s)| (2, k, l, s)).collect();
    let detail = sieve_rows(&rows)?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:.2?}"))?;
    Ok(format!("{detail} ({took:.2?})"))
}

fn criterion_2() -> Result<String, String> {
    let expect = |p: u64, end: u32| -> BTreeSet<u32> {
        let all = 1..=end;
        match p {
            2 => all.filter(|k| [13, 17, 19].contains(k) || (*k >= 21 && ![24, 28, 36].contains(k))).collect(),
            3 => all.filter(|k| *k >= 11 && ![12, 18].contains(k)).collect(),
            5 => all.filter(|k| *k >= 7 && ![8, 10, 12].contains(k)).collect(),
            _ => all.filter(|k| *k >= 8).collect(),
        }
    };
    for (p, end) in [(2u64, 76u32), (3, 48), (5, 33), (7, 28)] {
        let got: BTreeSet<u32> = (1..=end)
            .filter(|&k| check_corollary(p, k, 3, 2).unwrap())
            .collect();
        let want = expect(p, end);
        ensure(got == want, || {
            let extra: Vec<_> = got.difference(&want).collect();
            let missing: Vec<_> = want.difference(&got).collect();
            format!("p={p}: unexpected {extra:?}, missing {missing:?}")
        })?;
    }
    Ok("exact sets for p=2 (k≤76), 3 (k≤48), 5 (k≤33), 7 (k≤28)".into())
}

fn criterion_3() -> Result<String, String> {
    let detail = sieve_rows(TABLES_3_TO_5)?;
    // The printed p = 7 set {29, 43} does not partition 7^7 − 1 = 2·3·29·4733.
    let printed = big_list(&[29, 43]);
    let certs = sieve_certificates(7, 7, 3, 2).map_err(|e| e.to_string())?;
    ensure(certs.iter().all(|c| c.sieve_primes != printed), || {
        "{29,43} unexpectedly certified".into()
    })?;
    Ok(detail)
}

fn criterion_4() -> Result<String, String> {
    let mut parts = Vec::new();
    for (m, published) in [(3u64, 5.6e21), (4, 3.2e22), (5, 1.2e23)] {
        let t = cota_threshold(6.0, m).map_err(|e| e.to_string())?;
        let rel = (t - published as f64).abs() / published;
        ensure(rel < 0.1, || format!("m={m}: {t:.3e} vs {published:.1e} ({rel:.3})"))?;
        parts.push(format!("m={m}: {t:.3e}"));
    }
    let at = check_cota_t(3, 49, 3, 2, 6.0).map_err(|e| e.to_string())?;
    ensure(at.passes, || "3^49 should clear the m=5 threshold".into())?;
    Ok(parts.join(", "))
}

fn criterion_5() -> Result<String, String> {
    let opts = ClassifyOptions::default();
    let upto = |from: u32| (from..=100).collect::<Vec<u32>>();
    let cases: [(u64, Vec<u32>, Vec<u32>); 4] = [
        (2, vec![1, 2, 3, 4], {
            (5..=100).filter(|k| ![6, 8, 10, 12].contains(k)).collect()
        }),
        (3, vec![1, 2], [vec![9, 10, 11], upto(13)].concat()),
        (5, vec![1], upto(7)),
        (7, vec![1], upto(7)),
    ];
    let mut parts = Vec::new();
    for (p, excluded, included) in cases {
        let t = gamma_table(p, 3, 2, 100, &opts).map_err(|e| e.to_string())?;
        ensure(t.summary.not_in_gamma == excluded, || {
            format!("p={p}: excluded {:?}", t.summary.not_in_gamma)
        })?;
        ensure(t.summary.in_gamma == included, || {
            format!("p={p}: included {:?}", t.summary.in_gamma)
        })?;
        for row in &t.rows {
            ensure(row.recheck().unwrap_or(false), || format!("p={p} k={}: recheck failed", row.k))?;
        }
        if p == 2 {
            ensure(t.summary.unknown == [6, 8, 10, 12], || format!("{:?}", t.summary.unknown))?;
        }
        parts.push(format!("p={p} open {:?}", t.summary.unknown));
    }
    Ok(parts.join("; "))
}

fn certify_case(k: u32, m1: usize, m2: usize, want: CertifyStatus) -> Result<String, String> {
    let ctx = build_field(2, k).map_err(|e| e.to_string())?;
    let pairs = candidate_pairs(ctx.q(), m1, m2).ok_or("overflow")?;
    let start = Instant::now();
    let r = certify_k(
        &ctx,
        m1,
        m2,
        &CertifyOptions {
            pair_cap: pairs,
            ..CertifyOptions::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(r.status == want, || format!("2^{k} ({m1},{m2}): {:?}", r.status))?;
    ensure(took < Duration::from_secs(300), || format!("2^{k} ({m1},{m2}) took {took:.2?}"))?;
    if want == CertifyStatus::NonMember {
        let f = RationalFunction::from_repr(&ctx, r.counterexample.as_ref().ok_or("no witness")?)
            .map_err(|e| e.to_string())?;
        ensure(verify_counterexample(&ctx, &f, m1, m2), || format!("2^{k}: bad witness"))?;
    }
    Ok(format!("2^{k}({m1},{m2}) {:?} [{} f, {took:.1?}]", r.status, r.stats.functions_examined))
}

fn criterion_6() -> Result<String, String> {
    use CertifyStatus::*;
    let mut parts = Vec::new();
    for (k, m1, m2, want) in [
        (1, 3, 2, NonMember),
        (2, 3, 2, NonMember),
        (3, 3, 2, NonMember),
        (4, 1, 1, NonMember),
        (1, 2, 1, NonMember),
        (2, 2, 1, NonMember),
        (4, 2, 1, NonMember),
        (3, 2, 1, Member),
        (5, 2, 1, Member),
        (6, 2, 1, Member),
        (5, 3, 2, Member),
    ] {
        parts.push(certify_case(k, m1, m2, want)?);
    }
    Ok(parts.join(", "))
}

fn prime_powers_up_to(bound: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in (2..=bound).filter(|&p| is_prime_u64(p)) {
        let mut q = p;
        let mut k = 1;
        while q <= bound {
            out.push((p, k));
            q *= p;
            k += 1;
        }
    }
    out
}

fn squarefree_divisors(ctx: &FieldContext) -> Vec<u64> {
    let primes = ctx.qm1_primes();
    (0..1u32 << primes.len())
        .map(|mask| {
            primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| u64::from(p))
                .product()
        })
        .collect()
}

fn criterion_7() -> Result<String, String> {
    let mut fields = 0;
    let mut comparisons = 0u64;
    let mut worst = 0f64;
    for (p, k) in prime_powers_up_to(512) {
        let ctx = build_field(p, k).map_err(|e| e.to_string())?;
        let q = ctx.q() as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.q());
        let fs = sample_upsilon(&ctx, 3, 2, 200, &mut rng).map_err(|e| e.to_string())?;
        let table = CharacterTable::new(&ctx, ctx.order()).map_err(|e| e.to_string())?;
        let radical: u64 = ctx.qm1_primes().iter().map(|&d| u64::from(d)).product();
        for (i, f) in fs.iter().enumerate() {
            let logs = pair_logs(&ctx, f);
            let grid = n_f_grid(&ctx, &table, &logs);
            ensure(grid.len() == squarefree_divisors(&ctx).len().pow(2), || "grid size".into())?;
            for (&(l1, l2), via) in &grid {
                let exact = count_free_pairs(&ctx, f, l1, l2).map_err(|e| e.to_string())?.count;
                let err = (via - Complex64::new(exact as f64, 0.0)).norm();
                worst = worst.max(err / q);
                ensure(err < 1e-6 * q, || {
                    format!("q={} f={} ({l1},{l2}): {exact} vs {via}", ctx.q(), f.display(&ctx))
                })?;
                comparisons += 1;
            }
            // The standalone entry point, on a subset.
            if i % 20 == 0 {
                let via = n_f_via_characters(&ctx, f, radical, radical).map_err(|e| e.to_string())?;
                let exact = count_free_pairs(&ctx, f, radical, radical).map_err(|e| e.to_string())?.count;
                ensure((via - Complex64::new(exact as f64, 0.0)).norm() < 1e-6 * q, || {
                    format!("q={} f={}: {exact} vs {via}", ctx.q(), f.display(&ctx))
                })?;
            }
        }
        fields += 1;
    }
    Ok(format!("{fields} fields, {comparisons} comparisons, worst |Δ|/q = {worst:.1e}"))
}

fn criterion_8() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut skipped = 0;
    for (p, k) in [(2, 3), (3, 2), (2, 4), (5, 2), (3, 3)] {
        let ctx = build_field(p, k).map_err(|e| e.to_string())?;
        let irr = monic_irreducibles(&ctx, 3).map_err(|e| e.to_string())?;
        let mut checked = 0;
        while checked < 1000 {
            let chi = CharacterIndex::new(&ctx, rng.gen_range(1..ctx.order())).map_err(|e| e.to_string())?;
            let mut h: Vec<(PolyQ, i64)> = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let g = irr[rng.gen_range(0..irr.len())].clone();
                if h.iter().all(|(e, _)| *e != g) {
                    h.push((g, rng.gen_range(-4i64..=4)));
                }
            }
            let s = character_sum(&ctx, &h, chi).map_err(|e| e.to_string())?;
            if !s.hypothesis_holds {
                skipped += 1;
                continue;
            }
            ensure(s.value.norm() <= s.weil_budget + 1e-9, || {
                format!("q={}: |S| = {} > {} for {chi:?}", ctx.q(), s.value.norm(), s.weil_budget)
            })?;
            checked += 1;
        }
    }
    Ok(format!("5000 admissible samples, 0 violations ({skipped} inadmissible draws skipped)"))
}

fn criterion_9() -> Result<String, String> {
    let mut parts = Vec::new();
    for (p, k) in [(2, 3), (3, 2), (2, 4)] {
        let ctx = build_field(p, k).map_err(|e| e.to_string())?;
        let divisors = squarefree_divisors(&ctx);
        let primes: Vec<u64> = ctx.qm1_primes().iter().map(|&d| u64::from(d)).collect();
        let mut functions = 0;
        for f in enumerate_upsilon(&ctx, 2, 1).map_err(|e| e.to_string())? {
            for &l1 in &divisors {
                for &l2 in &divisors {
                    let n = count_free_pairs(&ctx, &f, l1, l2).map_err(|e| e.to_string())?;
                    ensure(n.lower_bound.is_some() && n.meets_bound(), || {
                        format!("q={} f={} ({l1},{l2}): {} below bound", ctx.q(), f.display(&ctx), n.count)
                    })?;
                }
            }
            for &ell in &divisors {
                let rest: Vec<u64> = primes.iter().copied().filter(|d| ell % d != 0).collect();
                let sides = sieve_inequality_check(&ctx, &f, ell, &rest).map_err(|e| e.to_string())?;
                ensure(sides.holds(), || {
                    format!("q={} f={} ℓ={ell}: {} < {}", ctx.q(), f.display(&ctx), sides.lhs, sides.rhs)
                })?;
            }
            functions += 1;
        }
        parts.push(format!("q={}: {functions} f", ctx.q()));
    }
    Ok(parts.join(", "))
}

fn criterion_10() -> Result<String, String> {
    let mut fields = 0;
    let mut checks = 0u64;
    for (p, k) in prime_powers_up_to(1024) {
        let ctx = build_field(p, k).map_err(|e| e.to_string())?;
        let n = ctx.order();
        let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        // d-th powers of F_q^*, found by raising every β.
        let powers: Vec<Vec<bool>> = divisors
            .iter()
            .map(|&d| {
                let mut hit = vec![false; ctx.q() as usize];
                for b in ctx.elements().skip(1) {
                    hit[ctx.pow(b, d).index() as usize] = true;
                }
                hit
            })
            .collect();
        for &s in &divisors {
            for a in ctx.elements().skip(1) {
                let oracle = divisors
                    .iter()
                    .zip(&powers)
                    .filter(|(&d, _)| d > 1 && s % d == 0)
                    .all(|(_, hit)| !hit[a.index() as usize]);
                let fast = ctx.is_s_free(a, s).map_err(|e| e.to_string())?;
                ensure(fast == oracle, || format!("q={} a={} s={s}", ctx.q(), a.index()))?;
                checks += 1;
            }
            ensure(ctx.is_s_free(ctx.zero(), s).is_err(), || "0 accepted".into())?;
        }
        fields += 1;
    }
    Ok(format!("{fields} fields, {checks} (α, s) pairs"))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("sieve rows, p = 2", criterion_1),
        ("corollary ranges", criterion_2),
        ("sieve rows, p = 3, 5, 7", criterion_3),
        ("asymptotic thresholds", criterion_4),
        ("Γ endpoint sets up to k = 100", criterion_5),
        ("brute-force ground truth", criterion_6),
        ("character identity", criterion_7),
        ("Weil bound", criterion_8),
        ("lower bound and sieve inequality", criterion_9),
        ("s-free oracle", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.ends_with(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {id:>12} | {name}: {detail} [{took:.1?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>12} | {name}: {why} [{took:.1?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
