//! A workbench for the symmetric λμ-calculus.
//!
//! Terms follow the liberal syntax
//!
//! ```text
//! M ::= x | \x. M | M N | mu a. M | [a] M
//! ```
//!
//! and reduce by three rules:
//!
//! ```text
//! (\x.M) N      ▷  M[x:=N]
//! (mu a.M) N    ▷  mu a. M[a=r N]      every [a] U becomes [a] (U N)
//! M (mu a.N)    ▷  mu a. N[a=l M]      every [a] U becomes [a] (M U)
//! ```
//!
//! The last rule makes the calculus non-confluent. The crate provides
//!
//! * [`term`]: syntax, printing, alpha-equivalence and canonical forms,
//! * [`subst`]: ordinary and structural substitutions,
//! * [`reduce`]: redexes, one-step reduction, strategies and traces,
//! * [`typing`]: simple types with unification-based inference,
//! * [`sn`]: reduction graphs, strong-normalization verdicts and the
//!   counterexample catalog,
//! * [`standard`]: standard reduction sequences and the standardizer,
//! * [`gen`]: seeded random term generators used by the test harnesses.
//!
//! ```
//! use lambdamu::{parse, reduce::successors};
//!
//! let t = parse("(mu a. x) (mu b. y)").unwrap();
//! let reducts: Vec<String> = successors(&t).into_iter().map(|(_, u)| u.to_string()).collect();
//! assert_eq!(reducts, ["mu a. x", "mu b. y"]);
//! ```

pub mod gen;
pub mod reduce;
pub mod sn;
pub mod standard;
pub mod subst;
pub mod term;
pub mod typing;

pub use reduce::{redexes, step, successors, RedexRef, ReductionTrace, Rule};
pub use term::{alpha_eq, canonical_key, parse, Name, Node, Path, Selector, Term};
