use std::fmt;

use super::{Node, Term};

fn atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t.node() {
        Node::Var(x) => write!(f, "{}", x),
        Node::Named(a, m) => {
            write!(f, "[{}] ", a)?;
            atom(m, f)
        }
        _ => write!(f, "({})", t),
    }
}

fn app_fun(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t.node() {
        Node::App(m, n) => {
            app_fun(m, f)?;
            f.write_str(" ")?;
            atom(n, f)
        }
        _ => atom(t, f),
    }
}

/// Prints in the concrete syntax accepted by [`super::parse`], with the
/// fewest parentheses that still parse back to the same tree.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Lam(x, m) => write!(f, "\\{}. {}", x, m),
            Node::Mu(a, m) => write!(f, "mu {}. {}", a, m),
            Node::App(..) => app_fun(self, f),
            Node::Var(_) | Node::Named(..) => atom(self, f),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::term::{parse, Term};

    #[test]
    fn prints_syntax_examples() {
        assert_eq!(Term::lam("x", Term::var("x")).to_string(), r"\x. x");
        assert_eq!(Term::mu("a", Term::named("a", Term::var("y"))).to_string(), "mu a. [a] y");
    }

    #[test]
    fn parenthesizes_where_needed() {
        for src in [
            "x (y z)",
            "(\\x. x) y",
            "[a] (x y)",
            "[a] x y",
            "f [a] x",
            "(mu a. x) (mu b. y)",
            "[a] (\\z. [a] z)",
            "\\f. f (\\x. x) y",
            "[a] [b] x y",
        ] {
            let t = parse(src).unwrap();
            let printed = t.to_string();
            assert_eq!(printed, src);
            assert!(parse(&printed).unwrap().syn_eq(&t));
        }
    }
}
