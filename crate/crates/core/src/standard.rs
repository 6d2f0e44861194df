//! Standard reduction sequences and the standardizer.
//!
//! A sequence `M1 ▷ ... ▷ Mn` is standard when it decomposes by one of the
//! clauses below, recursively, down to length-one sequences:
//!
//! * it stays under one constructor (`\x. _`, `mu a. _`, `x _`, `[a] _`)
//!   and the bodies form a standard sequence;
//! * it is `(N_i P_1)` for `i ≤ k` and then `(N_k P_i)`: a standard
//!   reduction of the function followed by one of the argument;
//! * the function (or, for `μ'`, the argument) reduces standardly with the
//!   other side fixed until it first becomes λ- or μ-headed, the head redex
//!   fires at once, and a standard sequence follows.
//!
//! [`StandardCertificate`] is the tree of such a decomposition. It is both
//! what [`is_standard`] returns and what the standardizer builds: every
//! reduction can be absorbed into a certificate step by step
//! ([`absorb_step`]), lifting certificates through substitutions where a
//! head redex has to be moved forward ([`lift_standard`]).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::reduce::{contract, step, RedexRef, ReductionTrace, Rule, TraceError};
use crate::subst::{rename_lambda, rename_mu, subst_lambda, subst_mu_left, subst_mu_right};
use crate::term::{alpha_eq, canonical_key, fresh_name, Name, Namespace, Node, Selector, Term};

/// A decomposition of a standard sequence.
#[derive(Clone, Debug)]
pub enum StandardCertificate {
    /// The one-term sequence.
    Leaf(Term),
    Lambda { var: Name, body: Box<StandardCertificate> },
    Mu { var: Name, body: Box<StandardCertificate> },
    /// `(x N_i)` with `N_i` standard.
    VarApp { head: Name, arg: Box<StandardCertificate> },
    Named { var: Name, body: Box<StandardCertificate> },
    /// Function phase, then argument phase.
    Split { fun: Box<StandardCertificate>, arg: Box<StandardCertificate> },
    /// `phase` runs on the function (on the argument for `MuPrime`) with the
    /// other side `fixed`, ending at the first λ- or μ-headed term; then the
    /// root redex fires and `rest` continues from its contractum.
    Head { rule: Rule, phase: Box<StandardCertificate>, fixed: Term, rest: Box<StandardCertificate> },
}

use StandardCertificate as Cert;

fn bx(c: Cert) -> Box<Cert> {
    Box::new(c)
}

impl StandardCertificate {
    pub fn start(&self) -> Term {
        match self {
            Cert::Leaf(t) => t.clone(),
            Cert::Lambda { var, body } => Term::lam(var.clone(), body.start()),
            Cert::Mu { var, body } => Term::mu(var.clone(), body.start()),
            Cert::VarApp { head, arg } => Term::app(Term::var(head.clone()), arg.start()),
            Cert::Named { var, body } => Term::named(var.clone(), body.start()),
            Cert::Split { fun, arg } => Term::app(fun.start(), arg.start()),
            Cert::Head { rule: Rule::MuPrime, phase, fixed, .. } => Term::app(fixed.clone(), phase.start()),
            Cert::Head { phase, fixed, .. } => Term::app(phase.start(), fixed.clone()),
        }
    }

    pub fn end(&self) -> Term {
        match self {
            Cert::Leaf(t) => t.clone(),
            Cert::Lambda { var, body } => Term::lam(var.clone(), body.end()),
            Cert::Mu { var, body } => Term::mu(var.clone(), body.end()),
            Cert::VarApp { head, arg } => Term::app(Term::var(head.clone()), arg.end()),
            Cert::Named { var, body } => Term::named(var.clone(), body.end()),
            Cert::Split { fun, arg } => Term::app(fun.end(), arg.end()),
            Cert::Head { rest, .. } => rest.end(),
        }
    }

    /// The certified reduction, with the redex fired at each step.
    pub fn trace(&self) -> ReductionTrace {
        match self {
            Cert::Leaf(t) => ReductionTrace::new(t.clone()),
            Cert::Lambda { var, body } => body.trace().map_context(Selector::LamBody, |u| Term::lam(var.clone(), u.clone())),
            Cert::Mu { var, body } => body.trace().map_context(Selector::MuBody, |u| Term::mu(var.clone(), u.clone())),
            Cert::Named { var, body } => {
                body.trace().map_context(Selector::NamedBody, |u| Term::named(var.clone(), u.clone()))
            }
            Cert::VarApp { head, arg } => {
                arg.trace().map_context(Selector::AppArg, |u| Term::app(Term::var(head.clone()), u.clone()))
            }
            Cert::Split { fun, arg } => {
                let a0 = arg.start();
                let mut tr = fun.trace().map_context(Selector::AppFun, |u| Term::app(u.clone(), a0.clone()));
                let f1 = fun.end();
                tr.extend(&arg.trace().map_context(Selector::AppArg, |u| Term::app(f1.clone(), u.clone())));
                tr
            }
            Cert::Head { rule, phase, fixed, rest } => {
                let mut tr = if *rule == Rule::MuPrime {
                    phase.trace().map_context(Selector::AppArg, |u| Term::app(fixed.clone(), u.clone()))
                } else {
                    phase.trace().map_context(Selector::AppFun, |u| Term::app(u.clone(), fixed.clone()))
                };
                let rest_tr = rest.trace();
                tr.push(RedexRef::root(*rule), rest_tr.first().clone());
                tr.extend(&rest_tr);
                tr
            }
        }
    }

    /// Number of reduction steps.
    pub fn lg(&self) -> usize {
        match self {
            Cert::Leaf(_) => 0,
            Cert::Lambda { body, .. } | Cert::Mu { body, .. } | Cert::Named { body, .. } => body.lg(),
            Cert::VarApp { arg, .. } => arg.lg(),
            Cert::Split { fun, arg } => fun.lg() + arg.lg(),
            Cert::Head { phase, rest, .. } => phase.lg() + 1 + rest.lg(),
        }
    }

    /// Checks the side conditions of every node and that the certified
    /// sequence is a valid reduction.
    pub fn verify(&self) -> Result<(), String> {
        self.verify_nodes()?;
        self.trace().validate().map_err(|e| e.to_string())
    }

    fn verify_nodes(&self) -> Result<(), String> {
        match self {
            Cert::Leaf(_) => Ok(()),
            Cert::Lambda { body, .. } | Cert::Mu { body, .. } | Cert::Named { body, .. } => body.verify_nodes(),
            Cert::VarApp { arg, .. } => arg.verify_nodes(),
            Cert::Split { fun, arg } => {
                fun.verify_nodes()?;
                arg.verify_nodes()
            }
            Cert::Head { rule, phase, fixed, rest } => {
                phase.verify_nodes()?;
                rest.verify_nodes()?;
                let terms = phase.trace().terms;
                let want = |t: &Term| if *rule == Rule::Beta { t.is_lambda() } else { t.is_mu() };
                if !want(terms.last().unwrap()) {
                    return Err(format!("{rule} head phase does not end with the right head"));
                }
                if terms.len() >= 2 && want(&terms[terms.len() - 2]) {
                    return Err(format!("{rule} head fired later than its first appearance"));
                }
                let redex = if *rule == Rule::MuPrime {
                    Term::app(fixed.clone(), phase.end())
                } else {
                    Term::app(phase.end(), fixed.clone())
                };
                match contract(&redex, *rule) {
                    Some(c) if alpha_eq(&c, &rest.start()) => Ok(()),
                    _ => Err(format!("rest does not start at the contractum of `{redex}`")),
                }
            }
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Cert::Leaf(_) => "leaf",
            Cert::Lambda { .. } => "lambda",
            Cert::Mu { .. } => "mu",
            Cert::VarApp { .. } => "var-app",
            Cert::Named { .. } => "named",
            Cert::Split { .. } => "split",
            Cert::Head { rule: Rule::Beta, .. } => "head-beta",
            Cert::Head { rule: Rule::Mu, .. } => "head-mu",
            Cert::Head { rule: Rule::MuPrime, .. } => "head-mu-prime",
        }
    }

    /// Nested clause-tagged JSON.
    pub fn to_json(&self) -> Value {
        let tag = self.tag();
        match self {
            Cert::Leaf(t) => json!({ "clause": tag, "term": t.to_string() }),
            Cert::Lambda { var, body } | Cert::Mu { var, body } | Cert::Named { var, body } => {
                json!({ "clause": tag, "var": var.as_str(), "body": body.to_json() })
            }
            Cert::VarApp { head, arg } => json!({ "clause": tag, "head": head.as_str(), "arg": arg.to_json() }),
            Cert::Split { fun, arg } => json!({ "clause": tag, "fun": fun.to_json(), "arg": arg.to_json() }),
            Cert::Head { phase, fixed, rest, .. } => json!({
                "clause": tag,
                "phase": phase.to_json(),
                "fixed": fixed.to_string(),
                "rest": rest.to_json(),
            }),
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Cert::Leaf(t) => t.all_names(out),
            Cert::Lambda { var, body } | Cert::Mu { var, body } | Cert::Named { var, body } => {
                out.insert(var.clone());
                body.collect_names(out);
            }
            Cert::VarApp { head, arg } => {
                out.insert(head.clone());
                arg.collect_names(out);
            }
            Cert::Split { fun, arg } => {
                fun.collect_names(out);
                arg.collect_names(out);
            }
            Cert::Head { phase, fixed, rest, .. } => {
                phase.collect_names(out);
                fixed.all_names(out);
                rest.collect_names(out);
            }
        }
    }

    /// Renames free occurrences of `old` in every term of the certificate.
    /// `new` must not occur in it.
    fn rename_free(&self, ns: Namespace, old: &Name, new: &Name) -> Cert {
        let term = |t: &Term| match ns {
            Namespace::Lambda => rename_lambda(t, old, new),
            Namespace::Mu => rename_mu(t, old, new),
        };
        let rec = |c: &Cert| bx(c.rename_free(ns, old, new));
        match self {
            Cert::Leaf(t) => Cert::Leaf(term(t)),
            Cert::Lambda { var, .. } if ns == Namespace::Lambda && var == old => self.clone(),
            Cert::Mu { var, .. } if ns == Namespace::Mu && var == old => self.clone(),
            Cert::Lambda { var, body } => Cert::Lambda { var: var.clone(), body: rec(body) },
            Cert::Mu { var, body } => Cert::Mu { var: var.clone(), body: rec(body) },
            Cert::Named { var, body } => {
                let var = if ns == Namespace::Mu && var == old { new.clone() } else { var.clone() };
                Cert::Named { var, body: rec(body) }
            }
            Cert::VarApp { head, arg } => {
                let head = if ns == Namespace::Lambda && head == old { new.clone() } else { head.clone() };
                Cert::VarApp { head, arg: rec(arg) }
            }
            Cert::Split { fun, arg } => Cert::Split { fun: rec(fun), arg: rec(arg) },
            Cert::Head { rule, phase, fixed, rest } => {
                Cert::Head { rule: *rule, phase: rec(phase), fixed: term(fixed), rest: rec(rest) }
            }
        }
    }

    /// Leaves over compound terms are unfolded one level, so that every
    /// certificate can be handled by its outermost constructor.
    fn view(&self) -> Cert {
        let Cert::Leaf(t) = self else { return self.clone() };
        let leaf = |u: &Term| bx(Cert::Leaf(u.clone()));
        match t.node() {
            Node::Var(_) => self.clone(),
            Node::Lam(x, b) => Cert::Lambda { var: x.clone(), body: leaf(b) },
            Node::Mu(a, b) => Cert::Mu { var: a.clone(), body: leaf(b) },
            Node::Named(a, b) => Cert::Named { var: a.clone(), body: leaf(b) },
            Node::App(f, a) => Cert::Split { fun: leaf(f), arg: leaf(a) },
        }
    }
}

impl fmt::Display for StandardCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(c: &Cert, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let pad = "  ".repeat(depth);
            match c {
                Cert::Leaf(t) => writeln!(f, "{pad}leaf {t}"),
                Cert::Lambda { var, body } | Cert::Mu { var, body } | Cert::Named { var, body } => {
                    writeln!(f, "{pad}{} {var}", c.tag())?;
                    go(body, depth + 1, f)
                }
                Cert::VarApp { head, arg } => {
                    writeln!(f, "{pad}var-app {head}")?;
                    go(arg, depth + 1, f)
                }
                Cert::Split { fun, arg } => {
                    writeln!(f, "{pad}split")?;
                    go(fun, depth + 1, f)?;
                    go(arg, depth + 1, f)
                }
                Cert::Head { phase, fixed, rest, .. } => {
                    writeln!(f, "{pad}{} with fixed {fixed}", c.tag())?;
                    go(phase, depth + 1, f)?;
                    go(rest, depth + 1, f)
                }
            }
        }
        go(self, 0, f)
    }
}

/// Length of a certified reduction.
pub fn lg(tr: &ReductionTrace) -> usize {
    tr.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StandardError {
    #[error("invalid trace: {0}")]
    InvalidTrace(#[from] TraceError),
    #[error("not standard: {reason} (at a subsequence of {len} terms starting with `{first}`)")]
    NotStandard { reason: String, len: usize, first: String },
    #[error("cannot fire {0} on the certified end term")]
    InvalidStep(RedexRef),
    #[error("internal: the constructed reduction failed its own check: {0}")]
    Internal(String),
}

// ---------------------------------------------------------------------------
// Recognition

struct Failure {
    depth: usize,
    reason: String,
    len: usize,
    first: String,
}

struct Search {
    memo: HashMap<Vec<String>, Option<Cert>>,
    deepest: Option<Failure>,
}

fn is_head(t: &Term, rule: Rule) -> bool {
    match rule {
        Rule::Beta => t.is_lambda(),
        Rule::Mu | Rule::MuPrime => t.is_mu(),
    }
}

fn all_alpha_eq(ts: &[Term], t: &Term) -> bool {
    ts.iter().all(|u| alpha_eq(u, t))
}

/// Bodies of binders `\x_i. B_i` (or `mu a_i. B_i`) renamed to a common name.
fn common_bodies(seq: &[Term], ns: Namespace) -> (Name, Vec<Term>) {
    let split = |t: &Term| match t.node() {
        Node::Lam(x, b) | Node::Mu(x, b) => (x.clone(), b.clone()),
        _ => unreachable!(),
    };
    let (first, _) = split(&seq[0]);
    let clash = seq.iter().any(|t| t.has_free(ns, &first));
    let name = if clash {
        let mut taken = BTreeSet::new();
        seq.iter().for_each(|t| t.all_names(&mut taken));
        fresh_name(&first, |n| taken.contains(n))
    } else {
        first
    };
    let bodies = seq
        .iter()
        .map(|t| {
            let (x, b) = split(t);
            match ns {
                Namespace::Lambda => rename_lambda(&b, &x, &name),
                Namespace::Mu => rename_mu(&b, &x, &name),
            }
        })
        .collect();
    (name, bodies)
}

/// The fired redexes of a sequence, when known. Without them only the terms
/// are constrained.
type Steps = Option<Vec<RedexRef>>;

/// The steps below `sel`, or `None` if one of them is elsewhere.
fn steps_under(steps: &Steps, sel: Selector) -> Option<Steps> {
    let Some(rs) = steps else { return Some(None) };
    rs.iter()
        .map(|r| match r.path.0.split_first() {
            Some((s, rest)) if *s == sel => Some(RedexRef::new(crate::term::Path(rest.to_vec()), r.rule)),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .map(Some)
}

fn steps_slice(steps: &Steps, from: usize, to: usize) -> Steps {
    steps.as_ref().map(|rs| rs[from..to].to_vec())
}

impl Search {
    fn fail(&mut self, seq: &[Term], depth: usize, reason: impl Into<String>) {
        if self.deepest.as_ref().is_none_or(|f| depth > f.depth) {
            self.deepest = Some(Failure { depth, reason: reason.into(), len: seq.len(), first: seq[0].to_string() });
        }
    }

    fn search(&mut self, seq: &[Term], steps: &Steps, depth: usize) -> Option<Cert> {
        if seq.len() == 1 {
            return Some(Cert::Leaf(seq[0].clone()));
        }
        let mut key: Vec<String> = seq.iter().map(canonical_key).collect();
        if let Some(rs) = steps {
            key.extend(rs.iter().map(|r| r.to_string()));
        }
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let found = self.search_uncached(seq, steps, depth);
        self.memo.insert(key, found.clone());
        found
    }

    /// Recurses into the bodies of a constructor kept throughout.
    fn under(&mut self, seq: &[Term], bodies: &[Term], steps: &Steps, sel: Selector, depth: usize) -> Option<Cert> {
        match steps_under(steps, sel) {
            Some(inner) => self.search(bodies, &inner, depth + 1),
            None => {
                self.fail(seq, depth, "a step fires outside the common constructor");
                None
            }
        }
    }

    fn search_uncached(&mut self, seq: &[Term], steps: &Steps, depth: usize) -> Option<Cert> {
        let n = seq.len();
        if seq.iter().all(Term::is_lambda) {
            let (var, bodies) = common_bodies(seq, Namespace::Lambda);
            return self.under(seq, &bodies, steps, Selector::LamBody, depth).map(|b| Cert::Lambda { var, body: bx(b) });
        }
        if seq.iter().all(Term::is_mu) {
            let (var, bodies) = common_bodies(seq, Namespace::Mu);
            return self.under(seq, &bodies, steps, Selector::MuBody, depth).map(|b| Cert::Mu { var, body: bx(b) });
        }
        if let Node::Named(a, _) = seq[0].node() {
            let mut bodies = Vec::new();
            for t in seq {
                match t.node() {
                    Node::Named(b, u) if b == a => bodies.push(u.clone()),
                    _ => {
                        self.fail(seq, depth, format!("the name [{a}] is not kept throughout"));
                        return None;
                    }
                }
            }
            return self
                .under(seq, &bodies, steps, Selector::NamedBody, depth)
                .map(|b| Cert::Named { var: a.clone(), body: bx(b) });
        }
        // the applications before a head step (all of them if none fires)
        let mut funs = Vec::new();
        let mut args = Vec::new();
        for t in seq {
            let Node::App(f, a) = t.node() else { break };
            funs.push(f.clone());
            args.push(a.clone());
        }
        if funs.is_empty() {
            self.fail(seq, depth, "the outermost constructor changes without a head step");
            return None;
        }
        let all_apps = funs.len() == n;
        if let Node::Var(z) = funs[0].node() {
            if all_apps && all_alpha_eq(&funs, &funs[0]) {
                if let Some(inner) = steps_under(steps, Selector::AppArg) {
                    if let Some(c) = self.search(&args, &inner, depth + 1) {
                        return Some(Cert::VarApp { head: z.clone(), arg: bx(c) });
                    }
                }
            }
        }
        // head steps
        for rule in [Rule::Beta, Rule::Mu, Rule::MuPrime] {
            let (moving, fixed, side) = if rule == Rule::MuPrime {
                (&args, &funs, Selector::AppArg)
            } else {
                (&funs, &args, Selector::AppFun)
            };
            for k in 1..=funs.len().min(n - 1) {
                if !is_head(&moving[k - 1], rule) || (k >= 2 && is_head(&moving[k - 2], rule)) {
                    continue;
                }
                if !all_alpha_eq(&fixed[..k], &fixed[0]) {
                    continue;
                }
                if let Some(rs) = steps {
                    if rs[k - 1] != RedexRef::root(rule) {
                        continue;
                    }
                }
                match contract(&seq[k - 1], rule) {
                    Some(c) if alpha_eq(&c, &seq[k]) => {}
                    _ => continue,
                }
                let Some(phase_steps) = steps_under(&steps_slice(steps, 0, k - 1), side) else { continue };
                let Some(phase) = self.search(&moving[..k], &phase_steps, depth + 1) else { continue };
                let Some(rest) = self.search(&seq[k..], &steps_slice(steps, k, n - 1), depth + 1) else { continue };
                return Some(Cert::Head { rule, phase: bx(phase), fixed: fixed[0].clone(), rest: bx(rest) });
            }
        }
        if !all_apps {
            self.fail(seq, depth, "the outermost constructor changes without a head step");
            return None;
        }
        // function phase, then argument phase
        for k in 1..=n {
            if !all_alpha_eq(&args[..k], &args[k - 1]) || !all_alpha_eq(&funs[k - 1..], &funs[k - 1]) {
                continue;
            }
            let Some(fun_steps) = steps_under(&steps_slice(steps, 0, k - 1), Selector::AppFun) else { continue };
            let Some(arg_steps) = steps_under(&steps_slice(steps, k - 1, n - 1), Selector::AppArg) else { continue };
            let Some(fun) = self.search(&funs[..k], &fun_steps, depth + 1) else { continue };
            let Some(arg) = self.search(&args[k - 1..], &arg_steps, depth + 1) else { continue };
            return Some(Cert::Split { fun: bx(fun), arg: bx(arg) });
        }
        self.fail(seq, depth, "no decomposition applies to this application sequence");
        None
    }
}

fn run_search(seq: &[Term], steps: Steps) -> Result<Cert, StandardError> {
    assert!(!seq.is_empty(), "sequences are nonempty");
    let mut s = Search { memo: HashMap::new(), deepest: None };
    s.search(seq, &steps, 0).ok_or_else(|| {
        let f = s.deepest.unwrap_or(Failure {
            depth: 0,
            reason: "no decomposition applies".into(),
            len: seq.len(),
            first: seq[0].to_string(),
        });
        StandardError::NotStandard { reason: f.reason, len: f.len, first: f.first }
    })
}

/// Decides whether a valid reduction is standard. The decomposition has to
/// match the redexes actually fired, so of two reductions through the same
/// terms one may be standard and the other not.
pub fn is_standard(tr: &ReductionTrace) -> Result<Cert, StandardError> {
    tr.validate()?;
    run_search(&tr.terms, Some(tr.steps.clone()))
}

/// Whether some way of firing redexes along this sequence of terms is
/// standard. Consecutive terms need not be one step apart; the clauses
/// enforce it.
pub fn is_standard_sequence(seq: &[Term]) -> Result<Cert, StandardError> {
    run_search(seq, None)
}

// ---------------------------------------------------------------------------
// Lifting through substitutions

/// A substitution whose argument reduces standardly: `[x := N]`,
/// `[a =r N]` or `[a =l N]`, with `N ▷st Q` given by a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SubstKind {
    Lambda,
    MuRight,
    MuLeft,
}

struct Sigma<'a> {
    kind: SubstKind,
    var: &'a Name,
    /// Certificate for `N ▷st Q`.
    arg: &'a Cert,
    start: Term,
    free: crate::term::FreeVars,
}

impl<'a> Sigma<'a> {
    fn new(kind: SubstKind, var: &'a Name, arg: &'a Cert) -> Self {
        let start = arg.start();
        let free = start.free_vars();
        Sigma { kind, var, arg, start, free }
    }

    fn apply(&self, t: &Term, n: &Term) -> Term {
        match self.kind {
            SubstKind::Lambda => subst_lambda(t, self.var, n),
            SubstKind::MuRight => subst_mu_right(t, self.var, n),
            SubstKind::MuLeft => subst_mu_left(t, self.var, n),
        }
    }

    fn binds_var(&self, ns: Namespace, name: &Name) -> bool {
        name == self.var && (ns == Namespace::Lambda) == (self.kind == SubstKind::Lambda)
    }

    /// Renames the binder `var` of `body` if it would capture a free
    /// variable of the argument.
    fn unclash(&self, ns: Namespace, var: &Name, body: &Cert) -> (Name, Cert) {
        if !self.free.contains(ns, var) {
            return (var.clone(), body.clone());
        }
        let mut taken = BTreeSet::new();
        body.collect_names(&mut taken);
        self.arg.collect_names(&mut taken);
        taken.insert(self.var.clone());
        let fresh = fresh_name(var, |n| taken.contains(n));
        (fresh.clone(), body.rename_free(ns, var, &fresh))
    }

    /// `M ▷st P` to `M[σ:=N] ▷st P[σ:=Q]`.
    fn lift(&self, c: &Cert) -> Cert {
        if let (Cert::Leaf(n), Cert::Leaf(m)) = (self.arg, c) {
            return Cert::Leaf(self.apply(m, n));
        }
        match c.view() {
            Cert::Leaf(t) => match t.node() {
                Node::Var(x) if self.binds_var(Namespace::Lambda, x) => self.arg.clone(),
                _ => Cert::Leaf(t),
            },
            Cert::Lambda { var, body } => {
                if self.binds_var(Namespace::Lambda, &var) {
                    return c.clone();
                }
                let (var, body) = self.unclash(Namespace::Lambda, &var, &body);
                Cert::Lambda { var, body: bx(self.lift(&body)) }
            }
            Cert::Mu { var, body } => {
                if self.binds_var(Namespace::Mu, &var) {
                    return c.clone();
                }
                let (var, body) = self.unclash(Namespace::Mu, &var, &body);
                Cert::Mu { var, body: bx(self.lift(&body)) }
            }
            Cert::Named { var, body } => {
                let inner = bx(self.lift(&body));
                let body = if self.binds_var(Namespace::Mu, &var) {
                    match self.kind {
                        SubstKind::MuRight => Cert::Split { fun: inner, arg: bx(self.arg.clone()) },
                        _ => Cert::Split { fun: bx(self.arg.clone()), arg: inner },
                    }
                } else {
                    *inner
                };
                Cert::Named { var, body: bx(body) }
            }
            Cert::VarApp { head, arg } => {
                if self.binds_var(Namespace::Lambda, &head) {
                    Cert::Split { fun: bx(self.arg.clone()), arg: bx(self.lift(&arg)) }
                } else {
                    Cert::VarApp { head, arg: bx(self.lift(&arg)) }
                }
            }
            Cert::Split { fun, arg } => Cert::Split { fun: bx(self.lift(&fun)), arg: bx(self.lift(&arg)) },
            Cert::Head { rule, phase, fixed, rest } => {
                let leaf = Cert::Leaf(self.start.clone());
                let phase = Sigma::new(self.kind, self.var, &leaf).lift(&phase);
                Cert::Head {
                    rule,
                    phase: bx(phase),
                    fixed: self.apply(&fixed, &self.start),
                    rest: bx(self.lift(&rest)),
                }
            }
        }
    }
}

/// The constructions that keep reductions standard.
#[derive(Clone, Copy, Debug)]
pub enum Lift<'a> {
    /// `M ▷st P` gives `\x.M ▷st \x.P`.
    WrapLambda(&'a Name, &'a Cert),
    /// `M ▷st P` gives `mu a.M ▷st mu a.P`.
    WrapMu(&'a Name, &'a Cert),
    /// `M ▷st P` gives `[a] M ▷st [a] P`.
    WrapNamed(&'a Name, &'a Cert),
    /// `M ▷st P` and `N ▷st Q` give `M N ▷st P Q`.
    AppPair(&'a Cert, &'a Cert),
    /// `M ▷st P` and `N ▷st Q` give `M[x:=N] ▷st P[x:=Q]`.
    SubstLambda(&'a Name, &'a Cert, &'a Cert),
    /// `M ▷st P` and `N ▷st Q` give `M[a=r N] ▷st P[a=r Q]`.
    SubstMuRight(&'a Name, &'a Cert, &'a Cert),
    /// `M ▷st P` and `N ▷st Q` give `M[a=l N] ▷st P[a=l Q]`.
    SubstMuLeft(&'a Name, &'a Cert, &'a Cert),
}

pub fn lift_standard(l: Lift<'_>) -> Cert {
    match l {
        Lift::WrapLambda(x, c) => Cert::Lambda { var: x.clone(), body: bx(c.clone()) },
        Lift::WrapMu(a, c) => Cert::Mu { var: a.clone(), body: bx(c.clone()) },
        Lift::WrapNamed(a, c) => Cert::Named { var: a.clone(), body: bx(c.clone()) },
        Lift::AppPair(m, n) => Cert::Split { fun: bx(m.clone()), arg: bx(n.clone()) },
        Lift::SubstLambda(x, m, n) => Sigma::new(SubstKind::Lambda, x, n).lift(m),
        Lift::SubstMuRight(a, m, n) => Sigma::new(SubstKind::MuRight, a, n).lift(m),
        Lift::SubstMuLeft(a, m, n) => Sigma::new(SubstKind::MuLeft, a, n).lift(m),
    }
}

// ---------------------------------------------------------------------------
// Absorption

/// Splits a certificate whose end is λ-headed (`Beta`) or μ-headed (`Mu`)
/// at the first such term `\y.R1`: returns the certificate up to it, `y`,
/// and the certificate `R1 ▷st R` of the bodies.
fn cut_at_first_head(c: &Cert, rule: Rule) -> (Cert, Name, Cert) {
    match (c.view(), rule) {
        (Cert::Lambda { var, body }, Rule::Beta) | (Cert::Mu { var, body }, Rule::Mu) => {
            (Cert::Leaf(c.start()), var, *body)
        }
        (Cert::Head { rule: r, phase, fixed, rest }, _) => {
            let (prefix, var, suffix) = cut_at_first_head(&rest, rule);
            (Cert::Head { rule: r, phase, fixed, rest: bx(prefix) }, var, suffix)
        }
        (other, _) => unreachable!("{} does not end with a {rule} head", other.tag()),
    }
}

/// Extends `M ▷st P` by one step `P ▷ Q` fired at `r`.
pub fn absorb_step(c: &Cert, r: &RedexRef) -> Result<Cert, StandardError> {
    step(&c.end(), r).map_err(|_| StandardError::InvalidStep(r.clone()))?;
    Ok(absorb(c, &r.path.0, r.rule))
}

fn absorb(c: &Cert, path: &[Selector], rule: Rule) -> Cert {
    let under = |sel: Selector| {
        debug_assert_eq!(path.first(), Some(&sel));
        &path[1..]
    };
    match c.view() {
        Cert::Leaf(_) => unreachable!("variables have no redex"),
        Cert::Lambda { var, body } => Cert::Lambda { var, body: bx(absorb(&body, under(Selector::LamBody), rule)) },
        Cert::Mu { var, body } => Cert::Mu { var, body: bx(absorb(&body, under(Selector::MuBody), rule)) },
        Cert::Named { var, body } => Cert::Named { var, body: bx(absorb(&body, under(Selector::NamedBody), rule)) },
        Cert::VarApp { head, arg } if !path.is_empty() => {
            Cert::VarApp { head, arg: bx(absorb(&arg, under(Selector::AppArg), rule)) }
        }
        Cert::VarApp { head, arg } => absorb_root(&Cert::Leaf(Term::var(head)), &arg, rule),
        Cert::Head { rule: r, phase, fixed, rest } => {
            Cert::Head { rule: r, phase, fixed, rest: bx(absorb(&rest, path, rule)) }
        }
        Cert::Split { fun, arg } => match path.first() {
            Some(Selector::AppFun) => Cert::Split { fun: bx(absorb(&fun, &path[1..], rule)), arg },
            Some(Selector::AppArg) => Cert::Split { fun, arg: bx(absorb(&arg, &path[1..], rule)) },
            None => absorb_root(&fun, &arg, rule),
            Some(s) => unreachable!("selector {s:?} below an application"),
        },
    }
}

/// `(M1 M2) ▷st (N1 M2) ▷st (N1 N2)` followed by the root redex of
/// `(N1 N2)`: move the head step forward to where the head first appears.
fn absorb_root(fun: &Cert, arg: &Cert, rule: Rule) -> Cert {
    match rule {
        Rule::Beta => {
            let (prefix, y, suffix) = cut_at_first_head(fun, Rule::Beta);
            let rest = Sigma::new(SubstKind::Lambda, &y, arg).lift(&suffix);
            Cert::Head { rule, phase: bx(prefix), fixed: arg.start(), rest: bx(rest) }
        }
        Rule::Mu => {
            let (prefix, a, suffix) = cut_at_first_head(fun, Rule::Mu);
            let (a, suffix) = avoid_mu(&a, suffix, arg);
            let rest = Sigma::new(SubstKind::MuRight, &a, arg).lift(&suffix);
            Cert::Head { rule, phase: bx(prefix), fixed: arg.start(), rest: bx(Cert::Mu { var: a, body: bx(rest) }) }
        }
        Rule::MuPrime => {
            let (prefix, b, suffix) = cut_at_first_head(arg, Rule::Mu);
            let (b, suffix) = avoid_mu(&b, suffix, fun);
            let rest = Sigma::new(SubstKind::MuLeft, &b, fun).lift(&suffix);
            Cert::Head { rule, phase: bx(prefix), fixed: fun.start(), rest: bx(Cert::Mu { var: b, body: bx(rest) }) }
        }
    }
}

/// Renames the μ-binder `a` of a body certificate away from the free
/// μ-variables of `other`, which will be placed under it.
fn avoid_mu(a: &Name, body: Cert, other: &Cert) -> (Name, Cert) {
    if !other.start().free_vars().mu.contains(a) {
        return (a.clone(), body);
    }
    let mut taken = BTreeSet::new();
    body.collect_names(&mut taken);
    other.collect_names(&mut taken);
    let fresh = fresh_name(a, |n| taken.contains(n));
    let renamed = body.rename_free(Namespace::Mu, a, &fresh);
    (fresh, renamed)
}

/// Turns any valid reduction into a standard one with the same endpoints.
/// The result is checked by [`is_standard`] before it is returned.
pub fn standardize(tr: &ReductionTrace) -> Result<(ReductionTrace, Cert), StandardError> {
    tr.validate()?;
    let mut c = Cert::Leaf(tr.first().clone());
    for r in &tr.steps {
        c = absorb_step(&c, r)?;
    }
    let out = c.trace();
    out.validate().map_err(|e| StandardError::Internal(e.to_string()))?;
    if !alpha_eq(out.first(), tr.first()) || !alpha_eq(out.last(), tr.last()) {
        return Err(StandardError::Internal("endpoints moved".into()));
    }
    c.verify_nodes().map_err(StandardError::Internal)?;
    is_standard(&out).map_err(|e| StandardError::Internal(e.to_string()))?;
    Ok((out, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn seq(ts: &[&str]) -> Vec<Term> {
        ts.iter().map(|s| t(s)).collect()
    }

    fn trace_of(start: &str, steps: &[RedexRef]) -> ReductionTrace {
        ReductionTrace::from_steps(t(start), steps).unwrap()
    }

    fn at(path: &[Selector], rule: Rule) -> RedexRef {
        RedexRef::new(crate::term::Path(path.to_vec()), rule)
    }

    #[test]
    fn length_one_is_standard() {
        let c = is_standard_sequence(&seq(&["x"])).unwrap();
        assert!(matches!(c, Cert::Leaf(_)));
        assert_eq!(c.lg(), 0);
    }

    #[test]
    fn head_first_is_standard() {
        let c = is_standard_sequence(&seq(&[r"(\x.x) ((\y.y) z)", r"(\y.y) z", "z"])).unwrap();
        assert_eq!(c.tag(), "head-beta");
        let Cert::Head { rest, .. } = &c else { unreachable!() };
        assert_eq!(rest.tag(), "head-beta");
        assert_eq!(c.lg(), 2);
        c.verify().unwrap();
    }

    #[test]
    fn argument_first_is_not_standard() {
        let tr = trace_of(r"(\x.x) ((\y.y) z)", &[at(&[Selector::AppArg], Rule::Beta), RedexRef::root(Rule::Beta)]);
        let e = is_standard(&tr).unwrap_err();
        assert!(matches!(e, StandardError::NotStandard { .. }));
        // the same terms are reached by firing the head first
        assert!(is_standard_sequence(&tr.terms).is_ok());
    }

    #[test]
    fn standardize_moves_the_head_forward() {
        let tr = trace_of(r"(\x.x) ((\y.y) z)", &[at(&[Selector::AppArg], Rule::Beta), RedexRef::root(Rule::Beta)]);
        let (out, c) = standardize(&tr).unwrap();
        let printed: Vec<String> = out.terms.iter().map(|u| u.to_string()).collect();
        assert_eq!(printed, [r"(\x. x) ((\y. y) z)", r"(\y. y) z", "z"]);
        c.verify().unwrap();
    }

    #[test]
    fn standardize_mu_prime_step() {
        let tr = trace_of("(mu a.x) (mu b.y)", &[RedexRef::root(Rule::MuPrime)]);
        let (out, _) = standardize(&tr).unwrap();
        assert_eq!(out.len(), 1);
        assert!(alpha_eq(out.last(), &t("mu b.y")));
    }

    #[test]
    fn standardize_empty_trace() {
        let tr = ReductionTrace::new(t("x"));
        let (out, c) = standardize(&tr).unwrap();
        assert_eq!(out.len(), 0);
        assert!(matches!(c, Cert::Leaf(_)));
    }

    #[test]
    fn mu_head_after_left_phase() {
        // (M1 M2) ▷ (mu a.R M2) ▷ (mu a.R N2) ▷ root mu
        let start = r"((\w.mu a.[a] w) y) ((\v.v) z)";
        let tr = trace_of(
            start,
            &[at(&[Selector::AppFun], Rule::Beta), at(&[Selector::AppArg], Rule::Beta), RedexRef::root(Rule::Mu)],
        );
        assert!(is_standard(&tr).is_err());
        let (out, c) = standardize(&tr).unwrap();
        assert!(alpha_eq(out.last(), &t("mu a.[a] (y z)")));
        assert_eq!(c.tag(), "head-mu");
    }

    #[test]
    fn app_pair_example() {
        let left = is_standard(&trace_of(r"(\y.y) (\x.x)", &[RedexRef::root(Rule::Beta)])).unwrap();
        let right = Cert::Leaf(t("z"));
        let c = lift_standard(Lift::AppPair(&left, &right));
        let tr = c.trace();
        assert!(alpha_eq(tr.first(), &t(r"(\y.y) (\x.x) z")));
        assert!(alpha_eq(tr.last(), &t(r"(\x.x) z")));
        assert_eq!(is_standard(&tr).unwrap().tag(), "split");
    }

    #[test]
    fn wrap_mu_over_leaf() {
        let c = lift_standard(Lift::WrapMu(&Name::new("a"), &Cert::Leaf(t("x"))));
        assert_eq!(c.trace().terms.len(), 1);
        assert!(alpha_eq(&c.start(), &t("mu a.x")));
    }

    #[test]
    fn substitution_lifts() {
        let m = is_standard(&trace_of(r"(\y.x y) w", &[RedexRef::root(Rule::Beta)])).unwrap();
        let n = is_standard(&trace_of(r"(\v.v) (\u.u)", &[RedexRef::root(Rule::Beta)])).unwrap();
        let x = Name::new("x");
        let c = lift_standard(Lift::SubstLambda(&x, &m, &n));
        let tr = c.trace();
        tr.validate().unwrap();
        assert!(alpha_eq(tr.first(), &subst_lambda(&m.start(), &x, &n.start())));
        assert!(alpha_eq(tr.last(), &subst_lambda(&m.end(), &x, &n.end())));
        is_standard(&tr).unwrap();

        let m = is_standard(&trace_of(r"mu b.[a] ((\y.y) [a] z)", &[at(&[Selector::MuBody, Selector::NamedBody], Rule::Beta)]))
            .unwrap();
        let a = Name::new("a");
        for kind in [0, 1] {
            let c = if kind == 0 {
                lift_standard(Lift::SubstMuRight(&a, &m, &n))
            } else {
                lift_standard(Lift::SubstMuLeft(&a, &m, &n))
            };
            let tr = c.trace();
            tr.validate().unwrap();
            is_standard(&tr).unwrap();
        }
    }

    #[test]
    fn certificate_json() {
        let c = is_standard_sequence(&seq(&[r"(\x.x) y", "y"])).unwrap();
        let j = c.to_json();
        assert_eq!(j["clause"], "head-beta");
        assert_eq!(j["fixed"], "y");
        assert_eq!(j["rest"]["clause"], "leaf");
    }
}
