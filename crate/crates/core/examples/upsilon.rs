//! Walks Υ_q(m1, m2) for a small field: canonical forms, the factor that
//! witnesses Λ ≠ ∅, and how many members there are.
//!
//!     cargo run --example upsilon -- 3 1 2 1

use primpair::certify::enumerate_upsilon;
use primpair::ff::build_field;
use primpair::polyff::{factor_poly, lambda_nonempty};

fn main() -> primpair::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (p, k, m1, m2) = match args[..] {
        [p, k, m1, m2] => (p, k as u32, m1 as usize, m2 as usize),
        _ => (3, 1, 2, 1),
    };
    let ctx = build_field(p, k)?;
    let members: Vec<_> = enumerate_upsilon(&ctx, m1, m2)?.collect();
    println!("|Υ_{}({m1}, {m2})| = {}", ctx.q(), members.len());
    for f in members.iter().take(12) {
        let w = lambda_nonempty(&ctx, f.numerator(), f.denominator())?.expect("member");
        let product = f.numerator().mul(&ctx, f.denominator());
        let factors: Vec<String> = factor_poly(&ctx, &product)?
            .factors
            .iter()
            .map(|(g, e)| format!("({})^{e}", g.display(&ctx)))
            .collect();
        println!(
            "  {:<28} f1·f2 = {:<30} Λ witness ({})^{}",
            f.display(&ctx),
            factors.join(""),
            w.factor.display(&ctx),
            w.multiplicity
        );
    }
    if members.len() > 12 {
        println!("  ...");
    }
    Ok(())
}
