//! Factors p^k − 1 (via its cyclotomic pieces) and arbitrary integers.
//!
//!     cargo run --example factor -- 2 36
//!     cargo run --example factor -- 68719476735

use num_bigint::BigUint;
use primpair::arith::{factor_prime_power_minus_one, factorize, FactorOptions};

fn main() -> primpair::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let f = match &args[..] {
        [p, k] => factor_prime_power_minus_one(
            p.parse().expect("prime"),
            k.parse().expect("exponent"),
            &FactorOptions::default(),
        )?,
        [n] => factorize(&n.parse::<BigUint>().expect("positive integer"))?,
        _ => factor_prime_power_minus_one(2, 36, &FactorOptions::default())?,
    };
    println!("{} = {}", f.value(), f);
    println!("  ω = {}, W = 2^ω = {}", f.omega(), f.w());
    println!("  φ = {}", f.euler_phi());
    println!("  radical = {}", f.radical());
    println!("  θ = ∏(1 − 1/p) = {}", f.theta());
    Ok(())
}
