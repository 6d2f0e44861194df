//! One-step β/μ/μ' reduction, redex enumeration, strategies and traces.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subst::{rename_mu, subst_lambda, subst_mu_left, subst_mu_right};
use crate::term::{fresh_name, parse, Name, Node, ParseError, Path, Selector, Term};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `(\x.M) N ▷ M[x:=N]`
    Beta,
    /// `(mu a.M) N ▷ mu a.M[a=r N]`
    Mu,
    /// `M (mu a.N) ▷ mu a.N[a=l M]`
    MuPrime,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::Beta => "beta",
            Rule::Mu => "mu",
            Rule::MuPrime => "mu_prime",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A redex occurrence: where it is and which rule contracts it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RedexRef {
    pub path: Path,
    pub rule: Rule,
}

impl RedexRef {
    pub fn new(path: Path, rule: Rule) -> Self {
        RedexRef { path, rule }
    }

    pub fn root(rule: Rule) -> Self {
        RedexRef { path: Path::root(), rule }
    }

    pub fn under(&self, sel: Selector) -> Self {
        RedexRef {
            path: self.path.prefixed(sel),
            rule: self.rule,
        }
    }
}

impl fmt::Display for RedexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.rule, self.path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("path {0} does not exist in the term")]
    InvalidPath(Path),
    #[error("no {rule} redex at {path}")]
    RuleMismatch { path: Path, rule: Rule },
}

/// The root redexes of `t`, `Beta`/`Mu` before `MuPrime`.
pub fn root_rules(t: &Term) -> Vec<Rule> {
    let mut out = Vec::new();
    if let Node::App(m, n) = t.node() {
        match m.node() {
            Node::Lam(..) => out.push(Rule::Beta),
            Node::Mu(..) => out.push(Rule::Mu),
            _ => {}
        }
        if n.is_mu() {
            out.push(Rule::MuPrime);
        }
    }
    out
}

/// All redexes in preorder. At `(mu a.M) (mu b.N)` both the `Mu` and the
/// `MuPrime` redex are listed, in that order.
pub fn redexes(t: &Term) -> Vec<RedexRef> {
    fn go(t: &Term, path: &mut Vec<Selector>, out: &mut Vec<RedexRef>) {
        for rule in root_rules(t) {
            out.push(RedexRef::new(Path(path.clone()), rule));
        }
        for (sel, c) in t.children() {
            path.push(sel);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn redex_count(t: &Term) -> usize {
    root_rules(t).len() + t.children().into_iter().map(|(_, c)| redex_count(c)).sum::<usize>()
}

pub fn is_normal(t: &Term) -> bool {
    root_rules(t).is_empty() && t.children().into_iter().all(|(_, c)| is_normal(c))
}

/// Renames the μ-binder of `mu a.body` away from the free μ-variables of
/// `other`, which is about to be inserted under it.
fn open_mu(a: &Name, body: &Term, other: &Term) -> (Name, Term) {
    let ofv = other.free_vars();
    if !ofv.mu.contains(a) {
        return (a.clone(), body.clone());
    }
    let bfv = body.free_vars();
    let a2 = fresh_name(a, |k| ofv.mu.contains(k) || bfv.mu.contains(k));
    let body = rename_mu(body, a, &a2);
    (a2, body)
}

/// Contracts the redex at the root of `t` with `rule`.
pub fn contract(t: &Term, rule: Rule) -> Option<Term> {
    let Node::App(m, n) = t.node() else { return None };
    match (rule, m.node(), n.node()) {
        (Rule::Beta, Node::Lam(x, body), _) => Some(subst_lambda(body, x, n)),
        (Rule::Mu, Node::Mu(a, body), _) => {
            let (a, body) = open_mu(a, body, n);
            let r = subst_mu_right(&body, &a, n);
            Some(Term::mu(a, r))
        }
        (Rule::MuPrime, _, Node::Mu(a, body)) => {
            let (a, body) = open_mu(a, body, m);
            let r = subst_mu_left(&body, &a, m);
            Some(Term::mu(a, r))
        }
        _ => None,
    }
}

/// Fires the redex `r` of `t`.
pub fn step(t: &Term, r: &RedexRef) -> Result<Term, ReduceError> {
    let sub = t.at(&r.path).ok_or_else(|| ReduceError::InvalidPath(r.path.clone()))?;
    let reduct = contract(sub, r.rule).ok_or_else(|| ReduceError::RuleMismatch {
        path: r.path.clone(),
        rule: r.rule,
    })?;
    Ok(t.replace_at(&r.path.0, reduct).expect("path checked above"))
}

/// Every one-step reduct, in redex order.
pub fn successors(t: &Term) -> Vec<(RedexRef, Term)> {
    redexes(t)
        .into_iter()
        .map(|r| {
            let u = step(t, &r).expect("enumerated redex");
            (r, u)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// The first redex in preorder; `Mu` before `MuPrime` at a shared path.
    LeftmostOutermost,
    /// A uniformly random redex, drawn from a generator seeded once per run.
    SeededRandom(u64),
}

#[derive(Debug, Clone, Error)]
#[error("no normal form within {max_steps} steps")]
pub struct BudgetExceeded {
    pub max_steps: usize,
    pub partial: ReductionTrace,
}

/// Reduces with `strategy` until a normal form or `max_steps` steps.
pub fn normalize(t: &Term, strategy: Strategy, max_steps: usize) -> Result<(Term, ReductionTrace), BudgetExceeded> {
    let mut rng = match strategy {
        Strategy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::LeftmostOutermost => None,
    };
    let mut trace = ReductionTrace::new(t.clone());
    loop {
        let current = trace.last().clone();
        let rs = redexes(&current);
        if rs.is_empty() {
            return Ok((current, trace));
        }
        if trace.len() >= max_steps {
            return Err(BudgetExceeded {
                max_steps,
                partial: trace,
            });
        }
        let pick = match rng.as_mut() {
            Some(rng) => rng.gen_range(0..rs.len()),
            None => 0,
        };
        let r = rs[pick].clone();
        let next = step(&current, &r).expect("enumerated redex");
        trace.push(r, next);
    }
}

/// A reduction sequence `M0 ▷ M1 ▷ ... ▷ Mn` with the redex fired at each step.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub terms: Vec<Term>,
    pub steps: Vec<RedexRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("step {index} does not lead from term {index} to term {next}", next = .index + 1)]
    BadStep { index: usize },
    #[error("trace has {terms} terms but {steps} steps")]
    Shape { terms: usize, steps: usize },
    #[error("trace file: {0}")]
    Format(String),
    #[error("term {index} of the trace file: {source}")]
    Term { index: usize, source: ParseError },
}

#[derive(Serialize, Deserialize)]
struct TraceFile {
    terms: Vec<String>,
    steps: Vec<RedexRef>,
}

impl ReductionTrace {
    pub fn new(start: Term) -> Self {
        ReductionTrace {
            terms: vec![start],
            steps: Vec::new(),
        }
    }

    /// Builds a trace by firing `steps` one after another from `start`.
    pub fn from_steps(start: Term, steps: &[RedexRef]) -> Result<Self, ReduceError> {
        let mut tr = ReductionTrace::new(start);
        for r in steps {
            let next = step(tr.last(), r)?;
            tr.push(r.clone(), next);
        }
        Ok(tr)
    }

    pub fn push(&mut self, r: RedexRef, t: Term) {
        self.steps.push(r);
        self.terms.push(t);
    }

    pub fn first(&self) -> &Term {
        &self.terms[0]
    }

    pub fn last(&self) -> &Term {
        self.terms.last().expect("traces are nonempty")
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Checks every step up to alpha-equivalence; reports the first bad one.
    pub fn validate(&self) -> Result<(), TraceError> {
        if self.terms.is_empty() || self.terms.len() != self.steps.len() + 1 {
            return Err(TraceError::Shape {
                terms: self.terms.len(),
                steps: self.steps.len(),
            });
        }
        for (i, r) in self.steps.iter().enumerate() {
            match step(&self.terms[i], r) {
                Ok(next) if next == self.terms[i + 1] => {}
                _ => return Err(TraceError::BadStep { index: i }),
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Concatenates `other`, whose first term must be alpha-equal to our last.
    pub fn extend(&mut self, other: &ReductionTrace) {
        debug_assert!(other.first() == self.last());
        self.terms.extend(other.terms[1..].iter().cloned());
        self.steps.extend(other.steps.iter().cloned());
    }

    /// The trace inside a one-hole context: every term is wrapped by `wrap`
    /// and every redex path gets `sel` prepended.
    pub fn map_context(&self, sel: Selector, wrap: impl Fn(&Term) -> Term) -> ReductionTrace {
        ReductionTrace {
            terms: self.terms.iter().map(wrap).collect(),
            steps: self.steps.iter().map(|r| r.under(sel)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let file = TraceFile {
            terms: self.terms.iter().map(|t| t.to_string()).collect(),
            steps: self.steps.clone(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    /// Reads the JSON trace format. The result is not validated.
    pub fn from_json(src: &str) -> Result<Self, TraceError> {
        let file: TraceFile = serde_json::from_str(src).map_err(|e| TraceError::Format(e.to_string()))?;
        let terms = file
            .terms
            .iter()
            .enumerate()
            .map(|(index, s)| parse(s).map_err(|source| TraceError::Term { index, source }))
            .collect::<Result<Vec<_>, _>>()?;
        if terms.is_empty() || terms.len() != file.steps.len() + 1 {
            return Err(TraceError::Shape {
                terms: terms.len(),
                steps: file.steps.len(),
            });
        }
        Ok(ReductionTrace {
            terms,
            steps: file.steps,
        })
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "   {}", self.terms[0])?;
        for (r, t) in self.steps.iter().zip(&self.terms[1..]) {
            writeln!(f, "▷  {}    [{}]", t, r)?;
        }
        Ok(())
    }
}
