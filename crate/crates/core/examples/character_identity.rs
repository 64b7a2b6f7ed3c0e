//! Counts α with α l1-free and f(α) l2-free directly and through the
//! character sum expression, next to the guaranteed lower bound.
//!
//!     cargo run --example character_identity -- 2 4

use primpair::certify::sample_upsilon;
use primpair::ff::build_field;
use primpair::pairs::{count_free_pairs, n_f_grid, pair_logs, CharacterTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> primpair::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (p, k) = match args[..] {
        [p, k] => (p, k as u32),
        _ => (2, 4),
    };
    let ctx = build_field(p, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let table = CharacterTable::new(&ctx, ctx.order())?;
    for f in sample_upsilon(&ctx, 2, 1, 3, &mut rng)? {
        println!("f = {}", f.display(&ctx));
        println!("  {:>4} {:>4} {:>6} {:>12} {:>12}", "l1", "l2", "count", "characters", "lower bound");
        for ((l1, l2), via) in n_f_grid(&ctx, &table, &pair_logs(&ctx, &f)) {
            let n = count_free_pairs(&ctx, &f, l1, l2)?;
            let bound = n.lower_bound_f64().map_or("-".into(), |b| format!("{b:.3}"));
            println!("  {l1:>4} {l2:>4} {:>6} {:>12.6} {bound:>12}", n.count, via.re);
        }
    }
    Ok(())
}
