//! The named counterexample terms and every claim made about them:
//! non-confluence, non-SN applications of SN terms, and substitutions that
//! are SN while the corresponding redex is not.
//!
//! ```text
//! cargo run --release --example counterexamples
//! ```

use std::time::Instant;

use lambdamu::sn::{catalog, run_claim_suite, DEFAULT_MAX_NODES};

fn main() {
    for (name, t) in catalog().entries() {
        println!("{name:>7} = {t}");
    }
    println!();
    let start = Instant::now();
    let report = run_claim_suite(DEFAULT_MAX_NODES);
    print!("{report}");
    println!("{} claims in {:.1?}", report.claims.len(), start.elapsed());
    if !report.all_pass() {
        std::process::exit(1);
    }
}
