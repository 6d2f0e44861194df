//! Capture-avoiding substitutions.
//!
//! Besides ordinary substitution `M[x:=N]` there are the structural
//! substitutions, which rewrite every naming `[a] U` of a μ-variable:
//!
//! * `M[a=r N]` turns `[a] U` into `[a] (U N)`,
//! * `M[a=l N]` turns `[a] U` into `[a] (N U)`,
//! * `M[a=i (M1 .. Mn)]` turns `[a] U` into `[a] (x M1 .. M(i-1) U M(i+1) .. Mn)`.
//!
//! `U` itself is rewritten first; the application inserted around it is
//! never revisited. Binders of `M` that would capture a free variable of an
//! inserted term are renamed.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::term::{fresh_name, FreeVars, Name, Node, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("μ-variable `{0}` has more than one entry in a simultaneous substitution")]
    DuplicateMuVar(Name),
    #[error("head substitution index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// One component `a =i (M1 .. Mn)` of a simultaneous head substitution,
/// with head variable `x`.
#[derive(Clone, Debug)]
pub struct HeadSubstitutionEntry {
    pub mu_var: Name,
    /// 1-based position of the hole.
    pub index: usize,
    pub head: Name,
    pub args: Vec<Term>,
}

impl HeadSubstitutionEntry {
    pub fn new(mu_var: impl Into<Name>, index: usize, head: impl Into<Name>, args: Vec<Term>) -> Result<Self, SubstError> {
        if index == 0 || index > args.len() {
            return Err(SubstError::IndexOutOfRange { index, len: args.len() });
        }
        Ok(Self {
            mu_var: mu_var.into(),
            index,
            head: head.into(),
            args,
        })
    }

    fn spine(&self, hole: Term) -> Term {
        let mut args = self.args.clone();
        args[self.index - 1] = hole;
        Term::apps(Term::var(self.head.clone()), args)
    }

    fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        fv.lambda.insert(self.head.clone());
        for (i, a) in self.args.iter().enumerate() {
            if i + 1 != self.index {
                fv.extend(a.free_vars());
            }
        }
        fv
    }
}

/// `M[x:=N]`.
pub fn subst_lambda(m: &Term, x: &Name, n: &Term) -> Term {
    let fv = n.free_vars();
    lambda_go(m, x, n, &fv).unwrap_or_else(|| m.clone())
}

fn lambda_go(m: &Term, x: &Name, n: &Term, fv: &FreeVars) -> Option<Term> {
    match m.node() {
        Node::Var(y) => (y == x).then(|| n.clone()),
        Node::App(p, q) => {
            let p2 = lambda_go(p, x, n, fv);
            let q2 = lambda_go(q, x, n, fv);
            if p2.is_none() && q2.is_none() {
                return None;
            }
            Some(Term::app(p2.unwrap_or_else(|| p.clone()), q2.unwrap_or_else(|| q.clone())))
        }
        Node::Named(a, b) => lambda_go(b, x, n, fv).map(|b| Term::named(a.clone(), b)),
        Node::Lam(y, b) => {
            if y == x {
                return None;
            }
            let b2 = lambda_go(b, x, n, fv)?;
            if !fv.lambda.contains(y) {
                return Some(Term::lam(y.clone(), b2));
            }
            let bfv = b.free_vars();
            let y2 = fresh_name(y, |c| c == x || fv.lambda.contains(c) || bfv.lambda.contains(c));
            let renamed = subst_lambda(b, y, &Term::var(y2.clone()));
            Some(Term::lam(y2, lambda_go(&renamed, x, n, fv).unwrap_or(renamed)))
        }
        Node::Mu(c, b) => {
            let b2 = lambda_go(b, x, n, fv)?;
            if !fv.mu.contains(c) {
                return Some(Term::mu(c.clone(), b2));
            }
            let bfv = b.free_vars();
            let c2 = fresh_name(c, |k| fv.mu.contains(k) || bfv.mu.contains(k));
            let renamed = rename_mu(b, c, &c2);
            Some(Term::mu(c2, lambda_go(&renamed, x, n, fv).unwrap_or(renamed)))
        }
    }
}

#[derive(Clone)]
enum Rewrite<'a> {
    Right(&'a Term),
    Left(&'a Term),
    Head(&'a HeadSubstitutionEntry),
    Rename(&'a Name),
}

impl Rewrite<'_> {
    fn apply(&self, tag: &Name, u: Term) -> Term {
        match self {
            Rewrite::Right(n) => Term::named(tag.clone(), Term::app(u, (*n).clone())),
            Rewrite::Left(n) => Term::named(tag.clone(), Term::app((*n).clone(), u)),
            Rewrite::Head(e) => Term::named(tag.clone(), e.spine(u)),
            Rewrite::Rename(new) => Term::named((*new).clone(), u),
        }
    }
}

struct Structural<'a> {
    rules: Vec<(Name, Rewrite<'a>)>,
    avoid: FreeVars,
}

impl<'a> Structural<'a> {
    fn new(rules: Vec<(Name, Rewrite<'a>)>) -> Self {
        let mut avoid = FreeVars::default();
        for (_, r) in &rules {
            match r {
                Rewrite::Right(n) | Rewrite::Left(n) => avoid.extend(n.free_vars()),
                Rewrite::Head(e) => avoid.extend(e.free_vars()),
                Rewrite::Rename(new) => {
                    avoid.mu.insert((*new).clone());
                }
            }
        }
        Structural { rules, avoid }
    }

    fn run(&self, m: &Term) -> Term {
        if self.rules.is_empty() {
            return m.clone();
        }
        self.go(m).unwrap_or_else(|| m.clone())
    }

    fn go(&self, m: &Term) -> Option<Term> {
        match m.node() {
            Node::Var(_) => None,
            Node::App(p, q) => {
                let p2 = self.go(p);
                let q2 = self.go(q);
                if p2.is_none() && q2.is_none() {
                    return None;
                }
                Some(Term::app(p2.unwrap_or_else(|| p.clone()), q2.unwrap_or_else(|| q.clone())))
            }
            Node::Named(a, u) => {
                let rule = self.rules.iter().find(|(k, _)| k == a).map(|(_, r)| r);
                let u2 = self.go(u);
                match rule {
                    Some(r) => Some(r.apply(a, u2.unwrap_or_else(|| u.clone()))),
                    None => u2.map(|u2| Term::named(a.clone(), u2)),
                }
            }
            Node::Lam(y, b) => {
                let b2 = self.go(b)?;
                if !self.avoid.lambda.contains(y) {
                    return Some(Term::lam(y.clone(), b2));
                }
                let bfv = b.free_vars();
                let y2 = fresh_name(y, |c| self.avoid.lambda.contains(c) || bfv.lambda.contains(c));
                let renamed = subst_lambda(b, y, &Term::var(y2.clone()));
                Some(Term::lam(y2, self.go(&renamed).unwrap_or(renamed)))
            }
            Node::Mu(c, b) => {
                if self.rules.iter().any(|(k, _)| k == c) {
                    let inner = Structural {
                        rules: self.rules.iter().filter(|(k, _)| k != c).cloned().collect(),
                        avoid: self.avoid.clone(),
                    };
                    if inner.rules.is_empty() {
                        return None;
                    }
                    return inner.go(b).map(|b2| Term::mu(c.clone(), b2)).map(|t| inner.fix_mu_capture(t, b));
                }
                self.go(b).map(|b2| self.fix_mu_capture(Term::mu(c.clone(), b2), b))
            }
        }
    }

    /// `t` is `mu c. b'` with `b'` the rewritten `b`. Redo the rewrite under
    /// a fresh binder when `c` would capture a free μ-variable of an
    /// inserted term.
    fn fix_mu_capture(&self, t: Term, b: &Term) -> Term {
        let Node::Mu(c, _) = t.node() else { unreachable!() };
        if !self.avoid.mu.contains(c) {
            return t;
        }
        let bfv = b.free_vars();
        let c2 = fresh_name(c, |k| {
            self.avoid.mu.contains(k) || bfv.mu.contains(k) || self.rules.iter().any(|(r, _)| r == k)
        });
        let renamed = rename_mu(b, c, &c2);
        Term::mu(c2, self.go(&renamed).unwrap_or(renamed))
    }
}

/// `M[a=r N]`.
pub fn subst_mu_right(m: &Term, a: &Name, n: &Term) -> Term {
    Structural::new(vec![(a.clone(), Rewrite::Right(n))]).run(m)
}

/// `M[a=l N]`: each `[a] U` becomes `[a] (N U)`.
pub fn subst_mu_left(m: &Term, a: &Name, n: &Term) -> Term {
    Structural::new(vec![(a.clone(), Rewrite::Left(n))]).run(m)
}

/// `M[a=i (M1 .. Mn)]` with head variable `x`.
pub fn subst_head(m: &Term, entry: &HeadSubstitutionEntry) -> Term {
    Structural::new(vec![(entry.mu_var.clone(), Rewrite::Head(entry))]).run(m)
}

/// A simultaneous family of head substitutions, applied in one traversal.
pub fn subst_simultaneous(m: &Term, sigma: &[HeadSubstitutionEntry]) -> Result<Term, SubstError> {
    let mut seen = BTreeSet::new();
    for e in sigma {
        if !seen.insert(e.mu_var.clone()) {
            return Err(SubstError::DuplicateMuVar(e.mu_var.clone()));
        }
    }
    let rules = sigma.iter().map(|e| (e.mu_var.clone(), Rewrite::Head(e))).collect();
    Ok(Structural::new(rules).run(m))
}

/// Renames the free μ-variable `old` to `new`.
pub fn rename_mu(m: &Term, old: &Name, new: &Name) -> Term {
    if old == new {
        return m.clone();
    }
    Structural::new(vec![(old.clone(), Rewrite::Rename(new))]).run(m)
}

/// Renames the free λ-variable `old` to `new`.
pub fn rename_lambda(m: &Term, old: &Name, new: &Name) -> Term {
    if old == new {
        return m.clone();
    }
    subst_lambda(m, old, &Term::var(new.clone()))
}
