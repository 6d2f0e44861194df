//! Parsing, printing, alpha-equivalence and the three substitutions.
//!
//! ```text
//! cargo run --example terms
//! ```

use lambdamu::subst::{subst_lambda, subst_mu_left, subst_mu_right};
use lambdamu::{alpha_eq, canonical_key, parse, Name};

fn main() {
    let t = parse(r"\x. mu a. [a] (x (mu b. [a] y))").unwrap();
    let fv = t.free_vars();
    println!("term        {t}");
    println!("cxty        {}", t.cxty());
    println!("free λ      {:?}", fv.lambda.iter().map(Name::as_str).collect::<Vec<_>>());
    println!("canonical   {}", canonical_key(&t));

    // λ- and μ-variables live in separate namespaces, so renaming one kind
    // of binder never clashes with the other.
    let u = parse(r"\z. mu c. [c] (z (mu d. [c] y))").unwrap();
    println!("alpha-equal to {u}: {}", alpha_eq(&t, &u));

    let m = parse(r"\y. x y").unwrap();
    let captured = subst_lambda(&m, &Name::new("x"), &parse("y").unwrap());
    println!("(\\y. x y)[x:=y]       = {captured}");

    let s = parse(r"mu b. [a] u ([a] v)").unwrap();
    let n = parse("w").unwrap();
    println!("{s} [a=r w]  = {}", subst_mu_right(&s, &Name::new("a"), &n));
    println!("{s} [a=l w]  = {}", subst_mu_left(&s, &Name::new("a"), &n));
}
