//! Graphviz export of reduction graphs.

use std::fmt::Write;

use super::graph::ReductionGraph;

const LABEL_WIDTH: usize = 80;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

fn truncate(s: &str) -> String {
    if s.chars().count() <= LABEL_WIDTH {
        s.to_string()
    } else {
        let mut t: String = s.chars().take(LABEL_WIDTH - 3).collect();
        t.push_str("...");
        t
    }
}

/// DOT source for `g`. Nodes on a cycle are drawn red and bold, unexpanded
/// frontier nodes dashed and the root doubled.
pub fn to_dot(g: &ReductionGraph) -> String {
    let cyclic = g.cyclic_nodes();
    let mut out = String::from("digraph reductions {\n  node [shape=box, fontname=\"monospace\"];\n");
    for n in 0..g.len() {
        let full = g.term(n).to_string();
        let mut attrs = format!("label=\"{}\", tooltip=\"{}\"", escape(&truncate(&full)), escape(&full));
        if cyclic[n] {
            attrs.push_str(", color=red, style=bold");
        } else if !g.is_expanded(n) {
            attrs.push_str(", style=dashed");
        }
        if n == g.root() {
            attrs.push_str(", peripheries=2");
        }
        writeln!(out, "  n{n} [{attrs}];").unwrap();
    }
    for n in 0..g.len() {
        for (r, v) in g.edges(n) {
            writeln!(out, "  n{n} -> n{v} [label=\"{}\"];", r.rule.label()).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sn::explore;
    use crate::term::parse;

    #[test]
    fn critical_pair_dot() {
        let g = explore(&parse("(mu a.x) (mu b.y)").unwrap(), 10);
        let d = to_dot(&g);
        assert!(d.contains("n0 -> n1 [label=\"mu\"]"));
        assert!(d.contains("n0 -> n2 [label=\"mu_prime\"]"));
        assert!(d.contains("label=\"mu a. x\""));
    }

    #[test]
    fn marks_cycles_and_escapes() {
        let g = explore(&parse(r"(\x.x x) (\x.x x)").unwrap(), 10);
        let d = to_dot(&g);
        assert!(d.contains("color=red"));
        assert!(d.contains(r#"label="(\\x. x x) (\\x. x x)""#));
        assert!(d.contains("n0 -> n0 [label=\"beta\"]"));
    }

    #[test]
    fn long_labels_are_truncated() {
        let long = format!("{}", "(\\x.x) ".repeat(20) + "y");
        let g = explore(&parse(&long).unwrap(), 1);
        let d = to_dot(&g);
        let label = d.split("label=\"").nth(1).unwrap().split('"').next().unwrap();
        assert!(label.ends_with("..."));
        assert!(label.chars().count() <= LABEL_WIDTH + 20);
    }
}
