//! The μ/μ' critical pair: one term, two normal forms.
//!
//! ```text
//! cargo run --example critical_pair
//! ```

use lambdamu::reduce::{is_normal, normalize, Strategy};
use lambdamu::{parse, successors};

fn show(src: &str) {
    let t = parse(src).unwrap();
    println!("{t}");
    for (r, u) in successors(&t) {
        let tag = if is_normal(&u) { "normal" } else { "" };
        println!("  {r:<12} -> {u}  {tag}");
    }
}

fn main() {
    show("(mu a. x) (mu b. y)");
    show(r"(\z. x) (mu b. y)");

    // Different strategies can end in different normal forms.
    let t = parse(r"(mu a. [a] p) (mu b. [b] q)").unwrap();
    println!("\n{t}");
    for seed in 0..6 {
        let (nf, tr) = normalize(&t, Strategy::SeededRandom(seed), 100).unwrap();
        println!("  seed {seed}: {nf}  in {} steps", tr.len());
    }
}
