//! Simple types: inference, checking with a derivation, and subject
//! reduction over everything reachable from a term.
//!
//! ```text
//! cargo run --example typing
//! ```

use lambdamu::typing::{check, check_subject_reduction, infer, parse_type, verify_derivation, Context};
use lambdamu::parse;

fn main() {
    // Peirce's law.
    let peirce = parse(r"\f. mu a. [a] (f (\x. mu b. [a] x))").unwrap();
    println!("{peirce} : {}", infer(&Context::new(), &peirce).unwrap());

    let ctx = Context::parse("p:A, k:A -> B").unwrap();
    let t = parse(r"(mu a. [a] k) (mu b. [b] p)").unwrap();
    let ty = parse_type("B").unwrap();
    let d = check(&ctx, &t, &ty).unwrap();
    verify_derivation(&d).unwrap();
    print!("{d}");

    let report = check_subject_reduction(&ctx, &t, &ty, 1000).unwrap();
    println!(
        "subject reduction: {} terms, {} reducts rechecked, holds: {}",
        report.checked,
        report.reducts,
        report.holds()
    );

    match infer(&Context::new(), &parse(r"\x. x x").unwrap()) {
        Ok(ty) => println!("unexpected type {ty}"),
        Err(e) => println!("\\x. x x: {e}"),
    }
}
