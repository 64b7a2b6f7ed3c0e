//! Exhaustive search: does every f ∈ Υ_q(m1, m2) have α with α and f(α)
//! both primitive? Prints the first counterexample or a few spot checks.
//!
//!     cargo run --release --example certify -- 2 4 1 1

use primpair::certify::{candidate_pairs, certify_k, CertifyOptions, CertifyStatus};
use primpair::ff::build_field;
use primpair::polyff::RationalFunction;

fn main() -> primpair::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (p, k, m1, m2) = match args[..] {
        [p, k, m1, m2] => (p, k as u32, m1 as usize, m2 as usize),
        _ => (2, 4, 1, 1),
    };
    let ctx = build_field(p, k)?;
    let pairs = candidate_pairs(ctx.q(), m1, m2).expect("fits in u64");
    println!("F_{}, degrees ({m1}, {m2}): {pairs} candidate (f1, f2)", ctx.q());
    let r = certify_k(&ctx, m1, m2, &CertifyOptions { pair_cap: pairs, ..CertifyOptions::default() })?;
    println!("{:?} after {} functions", r.status, r.stats.functions_examined);
    match r.status {
        CertifyStatus::NonMember => {
            let f = RationalFunction::from_repr(&ctx, r.counterexample.as_ref().expect("witness"))?;
            println!("no primitive pair for f = {}", f.display(&ctx));
        }
        CertifyStatus::Member => {
            for s in &r.samples {
                let f = RationalFunction::from_repr(&ctx, &s.f)?;
                println!("  f = {}: α = {:?}, f(α) = {:?}", f.display(&ctx), s.alpha, s.f_alpha);
            }
        }
    }
    Ok(())
}
