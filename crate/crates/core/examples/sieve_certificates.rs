//! Every passing split of q − 1 = ℓ·(sieve primes) for the sieve
//! criterion, with the exact constants δ and Δ.
//!
//!     cargo run --example sieve_certificates -- 2 24

use primpair::criteria::sieve_certificates;

fn main() -> primpair::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let rows: Vec<(u64, u32)> = match args[..] {
        [p, k] => vec![(p, k as u32)],
        _ => vec![(2, 11), (2, 14), (2, 24), (2, 36), (3, 18), (5, 12), (7, 7)],
    };
    for (p, k) in rows {
        let certs = sieve_certificates(p, k, 3, 2)?;
        println!("{p}^{k}: {} passing split(s)", certs.len());
        for c in certs {
            let primes: Vec<String> = c.sieve_primes.iter().map(|x| x.to_string()).collect();
            println!(
                "  ℓ radical {:<6} sieve {{{}}}  δ = {}  Δ = {}  (verified: {})",
                c.ell_radical.to_string(),
                primes.join(", "),
                c.delta,
                c.big_delta,
                c.verify()
            );
        }
    }
    Ok(())
}
