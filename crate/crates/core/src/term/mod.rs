//! λμ-terms: representation, structural measures, subterm positions,
//! free variables and alpha-equivalence.
//!
//! Terms are immutable and reference counted, so reducts share every
//! subtree they do not touch with the term they came from.

mod canon;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use canon::{canonical_key, CanonId, Interner};
pub use parse::{parse, ParseError};

/// A variable name. λ-variables and μ-variables use the same type but live
/// in separate namespaces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Which namespace a name belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Namespace {
    Lambda,
    Mu,
}

/// One node of a term.
#[derive(Clone)]
pub enum Node {
    /// A λ-variable occurrence `x`.
    Var(Name),
    /// `\x. M`
    Lam(Name, Term),
    /// `(M N)`
    App(Term, Term),
    /// `mu a. M`
    Mu(Name, Term),
    /// `[a] M`, the naming `(α M)`.
    Named(Name, Term),
}

/// A λμ-term.
///
/// `==` on terms is alpha-equivalence; use [`Term::syn_eq`] for raw
/// syntactic identity including bound names.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    pub fn from_node(node: Node) -> Self {
        Term(Arc::new(node))
    }

    pub fn var(x: impl Into<Name>) -> Self {
        Term::from_node(Node::Var(x.into()))
    }

    pub fn lam(x: impl Into<Name>, body: Term) -> Self {
        Term::from_node(Node::Lam(x.into(), body))
    }

    pub fn app(fun: Term, arg: Term) -> Self {
        Term::from_node(Node::App(fun, arg))
    }

    /// Left-associated application spine `(head a1 a2 ... an)`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Self {
        args.into_iter().fold(head, Term::app)
    }

    pub fn mu(a: impl Into<Name>, body: Term) -> Self {
        Term::from_node(Node::Mu(a.into(), body))
    }

    pub fn named(a: impl Into<Name>, body: Term) -> Self {
        Term::from_node(Node::Named(a.into(), body))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_lambda(&self) -> bool {
        matches!(self.node(), Node::Lam(..))
    }

    pub fn is_mu(&self) -> bool {
        matches!(self.node(), Node::Mu(..))
    }

    /// Raw structural equality, bound names included.
    pub fn syn_eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.node(), other.node()) {
            (Node::Var(x), Node::Var(y)) => x == y,
            (Node::Lam(x, m), Node::Lam(y, n))
            | (Node::Mu(x, m), Node::Mu(y, n))
            | (Node::Named(x, m), Node::Named(y, n)) => x == y && m.syn_eq(n),
            (Node::App(m1, n1), Node::App(m2, n2)) => m1.syn_eq(m2) && n1.syn_eq(n2),
            _ => false,
        }
    }

    /// Number of symbols: every node counts one.
    pub fn cxty(&self) -> usize {
        match self.node() {
            Node::Var(_) => 1,
            Node::Lam(_, m) | Node::Mu(_, m) | Node::Named(_, m) => 1 + m.cxty(),
            Node::App(m, n) => 1 + m.cxty() + n.cxty(),
        }
    }

    /// All `(path, subterm)` pairs in preorder, starting with the term
    /// itself at the empty path.
    pub fn subterms(&self) -> Vec<(Path, Term)> {
        fn go(t: &Term, path: &mut Vec<Selector>, out: &mut Vec<(Path, Term)>) {
            out.push((Path(path.clone()), t.clone()));
            for (sel, child) in t.children() {
                path.push(sel);
                go(child, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// `N ≤ M`: `other` is alpha-equal to some subterm of `self`.
    pub fn has_subterm(&self, other: &Term) -> bool {
        self == other || self.children().into_iter().any(|(_, c)| c.has_subterm(other))
    }

    /// `N < M`: `other` is alpha-equal to a strict subterm of `self`.
    pub fn has_strict_subterm(&self, other: &Term) -> bool {
        self.children().into_iter().any(|(_, c)| c.has_subterm(other))
    }

    pub fn children(&self) -> Vec<(Selector, &Term)> {
        match self.node() {
            Node::Var(_) => vec![],
            Node::Lam(_, m) => vec![(Selector::LamBody, m)],
            Node::Mu(_, m) => vec![(Selector::MuBody, m)],
            Node::Named(_, m) => vec![(Selector::NamedBody, m)],
            Node::App(m, n) => vec![(Selector::AppFun, m), (Selector::AppArg, n)],
        }
    }

    pub fn child(&self, sel: Selector) -> Option<&Term> {
        match (self.node(), sel) {
            (Node::Lam(_, m), Selector::LamBody)
            | (Node::Mu(_, m), Selector::MuBody)
            | (Node::Named(_, m), Selector::NamedBody)
            | (Node::App(m, _), Selector::AppFun)
            | (Node::App(_, m), Selector::AppArg) => Some(m),
            _ => None,
        }
    }

    pub fn at(&self, path: &Path) -> Option<&Term> {
        path.0.iter().try_fold(self, |t, &sel| t.child(sel))
    }

    /// Replaces the subterm at `path`; `None` if the path leaves the tree.
    pub fn replace_at(&self, path: &[Selector], new: Term) -> Option<Term> {
        let Some((&sel, rest)) = path.split_first() else {
            return Some(new);
        };
        let child = self.child(sel)?.replace_at(rest, new)?;
        Some(match (self.node(), sel) {
            (Node::Lam(x, _), _) => Term::lam(x.clone(), child),
            (Node::Mu(a, _), _) => Term::mu(a.clone(), child),
            (Node::Named(a, _), _) => Term::named(a.clone(), child),
            (Node::App(_, n), Selector::AppFun) => Term::app(child, n.clone()),
            (Node::App(m, _), _) => Term::app(m.clone(), child),
            (Node::Var(_), _) => unreachable!(),
        })
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut fv);
        fv
    }

    fn collect_free(&self, lams: &mut Vec<Name>, mus: &mut Vec<Name>, fv: &mut FreeVars) {
        match self.node() {
            Node::Var(x) => {
                if !lams.contains(x) {
                    fv.lambda.insert(x.clone());
                }
            }
            Node::Lam(x, m) => {
                lams.push(x.clone());
                m.collect_free(lams, mus, fv);
                lams.pop();
            }
            Node::Mu(a, m) => {
                mus.push(a.clone());
                m.collect_free(lams, mus, fv);
                mus.pop();
            }
            Node::Named(a, m) => {
                if !mus.contains(a) {
                    fv.mu.insert(a.clone());
                }
                m.collect_free(lams, mus, fv);
            }
            Node::App(m, n) => {
                m.collect_free(lams, mus, fv);
                n.collect_free(lams, mus, fv);
            }
        }
    }

    pub fn has_free(&self, ns: Namespace, name: &Name) -> bool {
        match self.node() {
            Node::Var(x) => ns == Namespace::Lambda && x == name,
            Node::Lam(x, m) => !(ns == Namespace::Lambda && x == name) && m.has_free(ns, name),
            Node::Mu(a, m) => !(ns == Namespace::Mu && a == name) && m.has_free(ns, name),
            Node::Named(a, m) => (ns == Namespace::Mu && a == name) || m.has_free(ns, name),
            Node::App(m, n) => m.has_free(ns, name) || n.has_free(ns, name),
        }
    }

    /// Every name occurring in the term, bound or free, in either namespace.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self.node() {
            Node::Var(x) => {
                out.insert(x.clone());
            }
            Node::Lam(x, m) | Node::Mu(x, m) | Node::Named(x, m) => {
                out.insert(x.clone());
                m.all_names(out);
            }
            Node::App(m, n) => {
                m.all_names(out);
                n.all_names(out);
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        alpha_eq(self, other)
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self)
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub lambda: BTreeSet<Name>,
    pub mu: BTreeSet<Name>,
}

impl FreeVars {
    pub fn contains(&self, ns: Namespace, name: &Name) -> bool {
        match ns {
            Namespace::Lambda => self.lambda.contains(name),
            Namespace::Mu => self.mu.contains(name),
        }
    }

    pub fn extend(&mut self, other: FreeVars) {
        self.lambda.extend(other.lambda);
        self.mu.extend(other.mu);
    }
}

/// One step down the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Selector {
    AppFun,
    AppArg,
    LamBody,
    MuBody,
    NamedBody,
}

/// A position in a term, as a sequence of selectors from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<Selector>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefixed(&self, sel: Selector) -> Path {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(sel);
        v.extend_from_slice(&self.0);
        Path(v)
    }

    pub fn is_valid_for(&self, t: &Term) -> bool {
        t.at(self).is_some()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|s| match s {
                Selector::AppFun => "fun",
                Selector::AppArg => "arg",
                Selector::LamBody => "lam",
                Selector::MuBody => "mu",
                Selector::NamedBody => "named",
            })
            .collect();
        f.write_str(&parts.join("."))
    }
}

/// True iff the two terms differ only in the names of bound variables.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    fn lookup(env: &[(Name, Name)], x: &Name, y: &Name) -> bool {
        let ix = env.iter().rposition(|(l, _)| l == x);
        let iy = env.iter().rposition(|(_, r)| r == y);
        match (ix, iy) {
            (None, None) => x == y,
            (Some(i), Some(j)) => i == j,
            _ => false,
        }
    }
    fn go(a: &Term, b: &Term, lams: &mut Vec<(Name, Name)>, mus: &mut Vec<(Name, Name)>) -> bool {
        if a.ptr_eq(b) && lams.is_empty() && mus.is_empty() {
            return true;
        }
        match (a.node(), b.node()) {
            (Node::Var(x), Node::Var(y)) => lookup(lams, x, y),
            (Node::Lam(x, m), Node::Lam(y, n)) => {
                lams.push((x.clone(), y.clone()));
                let r = go(m, n, lams, mus);
                lams.pop();
                r
            }
            (Node::Mu(x, m), Node::Mu(y, n)) => {
                mus.push((x.clone(), y.clone()));
                let r = go(m, n, lams, mus);
                mus.pop();
                r
            }
            (Node::Named(x, m), Node::Named(y, n)) => lookup(mus, x, y) && go(m, n, lams, mus),
            (Node::App(m1, n1), Node::App(m2, n2)) => go(m1, m2, lams, mus) && go(n1, n2, lams, mus),
            _ => false,
        }
    }
    go(t1, t2, &mut Vec::new(), &mut Vec::new())
}

/// First of `base'`, `base''`, ... rejected by `taken`.
pub fn fresh_name(base: &Name, taken: impl Fn(&Name) -> bool) -> Name {
    let mut candidate = format!("{}'", base);
    loop {
        let name = Name::new(&candidate);
        if !taken(&name) {
            return name;
        }
        candidate.push('\'');
    }
}
