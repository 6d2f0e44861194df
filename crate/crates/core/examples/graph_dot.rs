//! Writes a reduction graph in DOT. Pass a term, or get the graph of
//! `(M0 M1)`, which has a cycle through `(delta delta)`.
//!
//! ```text
//! cargo run --example graph_dot -- "(mu a. x) (mu b. y)" > g.dot
//! dot -Tsvg g.dot > g.svg
//! ```

use lambdamu::sn::{catalog, explore, to_dot};
use lambdamu::{parse, Term};

fn main() {
    let c = catalog();
    let t = match std::env::args().nth(1) {
        Some(src) => c.expand(&parse(&src).unwrap_or_else(|e| panic!("{e}"))),
        None => Term::app(c.m0.clone(), c.m1.clone()),
    };
    let g = explore(&t, 2_000);
    print!("{}", to_dot(&g));
    eprintln!("{} nodes, {} edges, complete: {}", g.len(), g.edge_count(), g.is_complete());
}
