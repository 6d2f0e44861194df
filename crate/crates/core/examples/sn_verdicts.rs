//! Strong normalization by graph exploration: verdicts, witnesses, η, and
//! how much the ample-set reduction saves.
//!
//! ```text
//! cargo run --release --example sn_verdicts
//! ```

use lambdamu::sn::{explore, explore_reduced, sn_verdict, SnVerdict};
use lambdamu::parse;

fn main() {
    for src in [
        r"(\x. x x) (\x. x x)",
        r"(\x. \y. y) ((\x. x x) (\x. x x))",
        r"(\f. f (f z)) (\x. (\y. y) x)",
        r"(mu a. [a] (\x. x x)) (mu b. [b] (\x. x x))",
        r"(\z. z z) (mu a. [a] (\x. x))",
    ] {
        let t = parse(src).unwrap();
        let v = sn_verdict(&t, 100_000);
        println!("{t}\n  {v}");
        if let SnVerdict::NonSn { witness, .. } = &v {
            assert!(witness.check());
            for (i, u) in witness.trace.terms.iter().enumerate() {
                let mark = if i == witness.repeat_from { "   <- cycle starts" } else { "" };
                println!("    {u}{mark}");
            }
        }
    }

    // Independent reductions in different arguments interleave freely; the
    // reduced graph fires them in one order only.
    let t = parse(r"x ((\y. y) z) ((\y. y) z) ((\y. y) z) ((\y. y) z)").unwrap();
    let full = explore(&t, 10_000);
    let reduced = explore_reduced(&t, 10_000);
    println!(
        "\n{t}\n  full graph {} nodes, reduced {} nodes, longest path {:?} vs {:?}",
        full.len(),
        reduced.len(),
        full.longest_path(),
        reduced.longest_path()
    );
}
