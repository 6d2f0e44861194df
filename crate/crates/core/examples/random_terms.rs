//! Seeded generators: untyped terms, well-typed terms, and SN-certified
//! terms. The same seed always gives the same terms.
//!
//! ```text
//! cargo run --example random_terms -- 42
//! ```

use lambdamu::gen::{random_sn_term, random_term, random_well_typed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    println!("untyped:");
    for _ in 0..4 {
        println!("  {}", random_term(&mut rng, 14));
    }
    println!("well typed:");
    for _ in 0..4 {
        let w = random_well_typed(&mut rng, 14);
        println!("  {} : {}", w.term, w.ty);
    }
    println!("strongly normalizing:");
    for _ in 0..4 {
        let (t, eta) = random_sn_term(&mut rng, 10, 2_000);
        println!("  {t}   (longest reduction {eta})");
    }
}
