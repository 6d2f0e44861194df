//! Nameless canonical forms.
//!
//! Bound λ-variables become de Bruijn indices over λ-binders only, bound
//! μ-variables become indices over μ-binders only; free names are kept.
//! Two terms get the same key (or id) iff they are alpha-equivalent.

use std::collections::HashMap;
use std::fmt::Write;

use super::{Name, Node, Term};

fn index_of(env: &[Name], x: &Name) -> Option<usize> {
    env.iter().rev().position(|b| b == x)
}

/// Canonical string key: prefix notation with `#i` for bound occurrences.
pub fn canonical_key(t: &Term) -> String {
    fn go(t: &Term, lams: &mut Vec<Name>, mus: &mut Vec<Name>, out: &mut String) {
        match t.node() {
            Node::Var(x) => match index_of(lams, x) {
                Some(i) => write!(out, "#{}", i).unwrap(),
                None => out.push_str(x.as_str()),
            },
            Node::Lam(x, m) => {
                out.push_str("\\.");
                lams.push(x.clone());
                go(m, lams, mus, out);
                lams.pop();
            }
            Node::Mu(a, m) => {
                out.push_str("mu.");
                mus.push(a.clone());
                go(m, lams, mus, out);
                mus.pop();
            }
            Node::Named(a, m) => {
                match index_of(mus, a) {
                    Some(i) => write!(out, "[#{}]", i).unwrap(),
                    None => write!(out, "[{}]", a).unwrap(),
                }
                go(m, lams, mus, out);
            }
            Node::App(m, n) => {
                out.push('(');
                go(m, lams, mus, out);
                out.push(' ');
                go(n, lams, mus, out);
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(t, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Identifier of a hash-consed canonical form inside one [`Interner`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Ref {
    Bound(u32),
    Free(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Shape {
    Var(Ref),
    Lam(CanonId),
    App(CanonId, CanonId),
    Mu(CanonId),
    Named(Ref, CanonId),
}

/// Hash-consing table of nameless canonical forms. Interning a term costs
/// one hash lookup per node and makes alpha-equivalence an id comparison.
#[derive(Default)]
pub struct Interner {
    shapes: HashMap<Shape, CanonId>,
    symbols: HashMap<Name, u32>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of distinct canonical subterms seen so far.
    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn intern(&mut self, t: &Term) -> CanonId {
        let mut lams = Vec::new();
        let mut mus = Vec::new();
        self.go(t, &mut lams, &mut mus)
    }

    fn reference(&mut self, env: &[Name], x: &Name) -> Ref {
        match index_of(env, x) {
            Some(i) => Ref::Bound(i as u32),
            None => {
                let next = self.symbols.len() as u32;
                Ref::Free(*self.symbols.entry(x.clone()).or_insert(next))
            }
        }
    }

    fn shape(&mut self, s: Shape) -> CanonId {
        let next = CanonId(self.shapes.len() as u32);
        *self.shapes.entry(s).or_insert(next)
    }

    fn go(&mut self, t: &Term, lams: &mut Vec<Name>, mus: &mut Vec<Name>) -> CanonId {
        let s = match t.node() {
            Node::Var(x) => Shape::Var(self.reference(lams, x)),
            Node::Lam(x, m) => {
                lams.push(x.clone());
                let b = self.go(m, lams, mus);
                lams.pop();
                Shape::Lam(b)
            }
            Node::Mu(a, m) => {
                mus.push(a.clone());
                let b = self.go(m, lams, mus);
                mus.pop();
                Shape::Mu(b)
            }
            Node::Named(a, m) => {
                let r = self.reference(mus, a);
                Shape::Named(r, self.go(m, lams, mus))
            }
            Node::App(m, n) => {
                let f = self.go(m, lams, mus);
                Shape::App(f, self.go(n, lams, mus))
            }
        };
        self.shape(s)
    }
}
