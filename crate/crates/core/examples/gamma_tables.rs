//! Classifies k = 1..=k_max for each characteristic and prints the summary.
//!
//!     cargo run --release --example gamma_tables -- 3 2 60

use std::time::Instant;

use primpair::criteria::{gamma_table, ClassifyOptions};

fn main() -> primpair::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (m1, m2, k_max) = match args[..] {
        [m1, m2, k] => (m1, m2, k as u32),
        _ => (3, 2, 100),
    };
    for p in [2, 3, 5, 7] {
        let start = Instant::now();
        let table = gamma_table(p, m1, m2, k_max, &ClassifyOptions::default())?;
        println!("p = {p}  ({:.2?})", start.elapsed());
        println!("  in Γ:      {:?}", table.summary.in_gamma);
        println!("  not in Γ:  {:?}", table.summary.not_in_gamma);
        println!("  unknown:   {:?}", table.summary.unknown);
    }
    Ok(())
}
