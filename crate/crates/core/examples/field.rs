//! Builds F_{p^k} and shows its modulus, generator, discrete logs and
//! which elements are primitive or s-free.
//!
//!     cargo run --example field -- 3 2

use primpair::ff::{build_field, primitive_count};

fn main() -> primpair::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (p, k) = match args[..] {
        [p, k] => (p, k as u32),
        _ => (2, 4),
    };
    let ctx = build_field(p, k)?;
    let spec = ctx.spec();
    println!("F_{} = F_{p}[x]/(modulus {:?}), generator {:?}", ctx.q(), spec.modulus, spec.generator);
    println!("q − 1 = {} has primes {:?}; {} primitive elements", ctx.order(), ctx.qm1_primes(), primitive_count(&ctx));

    let divisors: Vec<u64> = (1..=ctx.order()).filter(|d| ctx.order() % d == 0).collect();
    println!("\n{:>8}  {:>5}  primitive  s-free for s in {divisors:?}", "coords", "dlog");
    for a in ctx.elements().skip(1) {
        let free: Vec<char> = divisors
            .iter()
            .map(|&s| if ctx.is_s_free(a, s).unwrap() { '+' } else { '.' })
            .collect();
        println!(
            "{:>8}  {:>5}  {:^9}  {}",
            format!("{:?}", ctx.coords(a)),
            ctx.dlog(a)?,
            if ctx.is_primitive(a) { "yes" } else { "" },
            free.iter().collect::<String>()
        );
    }
    Ok(())
}
