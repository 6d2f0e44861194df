//! Standard reductions: checking a trace, turning a non-standard one into a
//! standard one with the same endpoints, and lifting certificates.
//!
//! ```text
//! cargo run --example standardize
//! ```

use lambdamu::reduce::Rule;
use lambdamu::standard::{is_standard, lift_standard, standardize, Lift};
use lambdamu::{parse, Name, Path, RedexRef, ReductionTrace, Selector};

fn main() {
    // Reduce the argument first, then the head redex: not standard.
    let t = parse(r"(\x. x x) ((\y. y) z)").unwrap();
    let inner = RedexRef::new(Path(vec![Selector::AppArg]), Rule::Beta);
    let tr = ReductionTrace::from_steps(t, &[inner, RedexRef::root(Rule::Beta)]).unwrap();
    println!("input:");
    for u in &tr.terms {
        println!("  {u}");
    }
    match is_standard(&tr) {
        Ok(_) => println!("standard"),
        Err(e) => println!("{e}"),
    }

    let (std_tr, cert) = standardize(&tr).unwrap();
    println!("standardized ({} steps):", std_tr.len());
    for u in &std_tr.terms {
        println!("  {u}");
    }
    print!("certificate:\n{cert}");
    assert!(is_standard(&std_tr).is_ok());

    // Substituting one standard reduction into another.
    let m = ReductionTrace::from_steps(parse(r"f x ((\w. w) x)").unwrap(), &[RedexRef::new(
        Path(vec![Selector::AppArg]),
        Rule::Beta,
    )])
    .unwrap();
    let n = ReductionTrace::from_steps(parse(r"(\v. v) q").unwrap(), &[RedexRef::root(Rule::Beta)]).unwrap();
    let (cm, cn) = (is_standard(&m).unwrap(), is_standard(&n).unwrap());
    let lifted = lift_standard(Lift::SubstLambda(&Name::new("x"), &cm, &cn));
    println!("\nM[x:=N] ▷st P[x:=Q]:");
    for u in &lifted.trace().terms {
        println!("  {u}");
    }
    assert!(is_standard(&lifted.trace()).is_ok());
}
