//! Strong normalization by reduction-graph exploration.
//!
//! A term is certified SN when its whole reachable graph has been explored
//! and is acyclic, and NonSN when an explicit cycle `u ▷⁺ u` is found. Cycles
//! that live inside a subterm are found by probing redex-bearing subterms
//! with small explorations of their own, then lifted back to a cycle of the
//! whole term.
//!
//! By default verdicts explore the reduced graph of [`ReductionGraph::reduced`],
//! which skips interleavings of independent redexes. It has an infinite path
//! iff the full graph does and the same longest path otherwise, so verdicts
//! and η are unchanged; [`SnOptions::reduce`] switches back to the full graph.

mod ample;
mod catalog;
mod dot;
mod graph;
mod suite;

use std::collections::HashMap;
use std::fmt;

pub use catalog::{catalog, pair, Catalog};
pub use dot::to_dot;
pub use ample::AmpleChooser;
pub use graph::{explore, explore_reduced, Expansion, NodeId, ReductionGraph};
pub use suite::{run_claim_suite, ClaimOutcome, ClaimResult, SuiteReport};

use crate::reduce::{redex_count, redexes, step, RedexRef, ReductionTrace};
use crate::term::{alpha_eq, canonical_key, Path, Term};

pub const DEFAULT_MAX_NODES: usize = 1_000_000;
/// Node budget for each subterm probe.
pub const DEFAULT_PROBE_NODES: usize = 4_000;
/// Node budget shared by all probes of one verdict.
pub const DEFAULT_PROBE_TOTAL: usize = 50_000;

/// A three-valued answer for questions decided by bounded exploration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "true",
            Answer::No => "false",
            Answer::Unknown => "unknown",
        })
    }
}

/// Which budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetKind {
    MaxNodes(usize),
}

impl fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetKind::MaxNodes(n) => write!(f, "node budget of {n} exhausted"),
        }
    }
}

/// A reduction whose last term is alpha-equal to the term at `repeat_from`.
#[derive(Clone, Debug)]
pub struct CycleWitness {
    pub trace: ReductionTrace,
    pub repeat_from: usize,
    /// Set when the cycle was found inside the subterm at this path.
    pub via_subterm: Option<Path>,
}

impl CycleWitness {
    /// Replays the trace and checks the repetition.
    pub fn check(&self) -> bool {
        self.trace.is_valid()
            && self.repeat_from < self.trace.terms.len() - 1
            && alpha_eq(&self.trace.terms[self.repeat_from], self.trace.last())
    }

    pub fn cycle_len(&self) -> usize {
        self.trace.len() - self.repeat_from
    }
}

pub enum SnVerdict {
    Sn { eta: usize, graph: ReductionGraph },
    NonSn { witness: CycleWitness, nodes: usize },
    Unknown { reason: BudgetKind, nodes: usize },
}

impl SnVerdict {
    pub fn is_sn(&self) -> bool {
        matches!(self, SnVerdict::Sn { .. })
    }

    pub fn is_non_sn(&self) -> bool {
        matches!(self, SnVerdict::NonSn { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SnVerdict::Unknown { .. })
    }

    pub fn eta(&self) -> Option<usize> {
        match self {
            SnVerdict::Sn { eta, .. } => Some(*eta),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&CycleWitness> {
        match self {
            SnVerdict::NonSn { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// Number of explored nodes when the verdict was reached.
    pub fn nodes(&self) -> usize {
        match self {
            SnVerdict::Sn { graph, .. } => graph.len(),
            SnVerdict::NonSn { nodes, .. } | SnVerdict::Unknown { nodes, .. } => *nodes,
        }
    }
}

impl fmt::Debug for SnVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnVerdict::Sn { eta, graph } => write!(f, "Sn {{ eta: {eta}, nodes: {} }}", graph.len()),
            SnVerdict::NonSn { witness, nodes } => write!(
                f,
                "NonSn {{ witness_len: {}, cycle_len: {}, nodes: {nodes} }}",
                witness.trace.len(),
                witness.cycle_len()
            ),
            SnVerdict::Unknown { reason, nodes } => write!(f, "Unknown {{ {reason}, nodes: {nodes} }}"),
        }
    }
}

impl fmt::Display for SnVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnVerdict::Sn { eta, graph } => write!(f, "SN (eta = {eta}, {} nodes)", graph.len()),
            SnVerdict::NonSn { witness, nodes } => {
                write!(f, "NonSN (witness of {} steps, cycle of {}", witness.trace.len(), witness.cycle_len())?;
                if let Some(p) = &witness.via_subterm {
                    write!(f, " inside subterm at {p}")?;
                }
                write!(f, ", {nodes} nodes explored)")
            }
            SnVerdict::Unknown { reason, nodes } => write!(f, "Unknown ({reason}, {nodes} nodes)"),
        }
    }
}

/// Tuning for [`sn_verdict_with`].
#[derive(Clone, Copy, Debug)]
pub struct SnOptions {
    pub max_nodes: usize,
    /// Budget of each subterm probe; 0 disables probing.
    pub probe_nodes: usize,
    /// Budget shared by all probes.
    pub probe_total: usize,
    /// Follow ample sets only (see [`ReductionGraph::reduced`]).
    pub reduce: bool,
}

impl Default for SnOptions {
    fn default() -> Self {
        SnOptions { max_nodes: DEFAULT_MAX_NODES, probe_nodes: DEFAULT_PROBE_NODES, probe_total: DEFAULT_PROBE_TOTAL, reduce: true }
    }
}

/// Default options, with the probe budgets capped at `max_nodes`.
pub fn sn_verdict(t: &Term, max_nodes: usize) -> SnVerdict {
    sn_verdict_with(
        t,
        SnOptions {
            max_nodes,
            probe_nodes: DEFAULT_PROBE_NODES.min(max_nodes),
            probe_total: DEFAULT_PROBE_TOTAL.min(max_nodes),
            ..SnOptions::default()
        },
    )
}

pub fn sn_verdict_with(t: &Term, opts: SnOptions) -> SnVerdict {
    let mut g = if opts.reduce { ReductionGraph::reduced(t) } else { ReductionGraph::new(t) };
    let mut probes = Prober::new(opts);
    if let Some(w) = probes.probe_node(&g, 0, None) {
        return SnVerdict::NonSn { witness: w, nodes: g.len() };
    }
    let mut next_check = 1024;
    loop {
        match g.expand_next(opts.max_nodes) {
            Expansion::Expanded { node, added } => {
                if g.has_self_loop(node) {
                    return SnVerdict::NonSn { witness: graph_cycle_witness(&g).unwrap(), nodes: g.len() };
                }
                for (r, v) in g.edges(node) {
                    if !added.contains(&v) {
                        continue;
                    }
                    if let Some(w) = probes.probe_node(&g, v, Some(&r.path)) {
                        return SnVerdict::NonSn { witness: w, nodes: g.len() };
                    }
                }
                if g.len() >= next_check {
                    next_check *= 2;
                    if let Some(w) = graph_cycle_witness(&g) {
                        return SnVerdict::NonSn { witness: w, nodes: g.len() };
                    }
                }
            }
            Expansion::Done => break,
            Expansion::Budget => {
                if let Some(w) = graph_cycle_witness(&g) {
                    return SnVerdict::NonSn { witness: w, nodes: g.len() };
                }
                return SnVerdict::Unknown { reason: BudgetKind::MaxNodes(opts.max_nodes), nodes: g.len() };
            }
        }
    }
    if let Some(w) = graph_cycle_witness(&g) {
        return SnVerdict::NonSn { witness: w, nodes: g.len() };
    }
    let eta = g.longest_path().expect("complete acyclic graph");
    SnVerdict::Sn { eta, graph: g }
}

/// Witness for a cycle of the explored graph: the BFS path to a cyclic node
/// followed by one trip around the cycle.
fn graph_cycle_witness(g: &ReductionGraph) -> Option<CycleWitness> {
    let cycle = g.find_cycle()?;
    let start = cycle[0].0;
    let mut trace = g.trace_to(start);
    let repeat_from = trace.len();
    for (u, i) in cycle {
        let r = redexes(g.term(u))[i as usize].clone();
        let next = step(trace.last(), &r).expect("graph edge");
        trace.push(r, next);
    }
    Some(CycleWitness { trace, repeat_from, via_subterm: None })
}

/// Memoized cycle search on subterms.
struct Prober {
    budget: usize,
    /// Nodes left for all further probes.
    left: usize,
    reduce: bool,
    /// Canonical key of a subterm to its cycle (as steps from the subterm
    /// and the index where the repetition starts), if any was found.
    memo: HashMap<String, Option<(Vec<RedexRef>, usize)>>,
}

impl Prober {
    fn new(opts: SnOptions) -> Self {
        Prober { budget: opts.probe_nodes, left: opts.probe_total, reduce: opts.reduce, memo: HashMap::new() }
    }

    /// Probes the redex subterms of node `v` that overlap the position where
    /// it was created (all of them for the root). Proper subterms only.
    fn probe_node(&mut self, g: &ReductionGraph, v: NodeId, created_at: Option<&Path>) -> Option<CycleWitness> {
        if self.budget == 0 || self.left == 0 {
            return None;
        }
        let term = g.term(v);
        let mut seen_paths: Vec<&Path> = Vec::new();
        let rs = redexes(term);
        for r in &rs {
            if r.path.is_root() || seen_paths.contains(&&r.path) {
                continue;
            }
            seen_paths.push(&r.path);
            if let Some(c) = created_at {
                let related = c.0.starts_with(&r.path.0) || r.path.0.starts_with(&c.0);
                if !related {
                    continue;
                }
            }
            let sub = term.at(&r.path).expect("redex path");
            if let Some((steps, repeat_from)) = self.probe(sub) {
                let mut trace = g.trace_to(v);
                let offset = trace.len();
                for s in steps {
                    let mut p = r.path.0.clone();
                    p.extend(s.path.0);
                    let lifted = RedexRef::new(Path(p), s.rule);
                    let next = step(trace.last(), &lifted).expect("lifted step");
                    trace.push(lifted, next);
                }
                return Some(CycleWitness { trace, repeat_from: offset + repeat_from, via_subterm: Some(r.path.clone()) });
            }
        }
        None
    }

    fn probe(&mut self, sub: &Term) -> Option<(Vec<RedexRef>, usize)> {
        let key = canonical_key(sub);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        if self.left == 0 {
            return None;
        }
        let mut g = if self.reduce { ReductionGraph::reduced(sub) } else { ReductionGraph::new(sub) };
        g.expand_all(self.budget.min(self.left));
        self.left = self.left.saturating_sub(g.len());
        let found = graph_cycle_witness(&g).map(|w| (w.trace.steps, w.repeat_from));
        self.memo.insert(key, found.clone());
        found
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaError {
    NotSn,
    Unknown(BudgetKind),
}

impl fmt::Display for EtaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaError::NotSn => f.write_str("term is not strongly normalizing"),
            EtaError::Unknown(b) => write!(f, "undetermined: {b}"),
        }
    }
}

impl std::error::Error for EtaError {}

/// Length of the longest reduction from an SN term.
pub fn eta(t: &Term, max_nodes: usize) -> Result<usize, EtaError> {
    match sn_verdict(t, max_nodes) {
        SnVerdict::Sn { eta, .. } => Ok(eta),
        SnVerdict::NonSn { .. } => Err(EtaError::NotSn),
        SnVerdict::Unknown { reason, .. } => Err(EtaError::Unknown(reason)),
    }
}

/// `U ↪ V`: every long enough reduction of `U` goes through `V`.
///
/// Decided by exploring `U` without expanding `V`: the answer is yes iff the
/// part that avoids `V` is finite, acyclic and has no normal form, since a
/// normal form avoiding `V` ends a maximal reduction that never meets it.
pub fn must_pass_through(u: &Term, v: &Term, max_nodes: usize) -> Answer {
    if alpha_eq(u, v) {
        return Answer::Yes;
    }
    let mut g = ReductionGraph::avoiding(u, v);
    g.expand_all(max_nodes);
    let target = g.find(v);
    let avoiding = |n: NodeId| Some(n) != target;
    let cyclic = g.cyclic_nodes();
    for n in (0..g.len()).filter(|&n| avoiding(n)) {
        if g.is_normal(n) || cyclic[n] {
            return Answer::No;
        }
    }
    if !g.is_complete() {
        return Answer::Unknown;
    }
    Answer::Yes
}

/// `U ↷ V`: `U` has exactly one redex and contracting it gives `V`.
pub fn single_redex_step(u: &Term, v: &Term) -> bool {
    let rs = redexes(u);
    rs.len() == 1 && step(u, &rs[0]).is_ok_and(|w| alpha_eq(&w, v))
}

/// `N ≺ M`: `N ≤ M'` for some `M ▷* M'` with `M ▷⁺ M'` or `N < M'`.
pub fn prec(n: &Term, m: &Term, max_nodes: usize) -> Answer {
    if m.has_strict_subterm(n) {
        return Answer::Yes;
    }
    let g = explore(m, max_nodes);
    let cyclic = g.cyclic_nodes();
    if cyclic[g.root()] && m.has_subterm(n) {
        return Answer::Yes;
    }
    if (1..g.len()).any(|i| g.term(i).has_subterm(n)) {
        return Answer::Yes;
    }
    if g.is_complete() {
        Answer::No
    } else {
        Answer::Unknown
    }
}

/// `N ⪯ M`, the reflexive closure of [`prec`].
pub fn prec_eq(n: &Term, m: &Term, max_nodes: usize) -> Answer {
    if alpha_eq(n, m) {
        Answer::Yes
    } else {
        prec(n, m, max_nodes)
    }
}

/// True when `t` has exactly one redex. Convenience for chain checks.
pub fn has_single_redex(t: &Term) -> bool {
    redex_count(t) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn omega_is_non_sn() {
        let v = sn_verdict(&t(r"(\x.x x) (\x.x x)"), 100);
        let w = v.witness().unwrap();
        assert!(w.check());
        assert_eq!(w.trace.len(), 1);
        assert_eq!(w.cycle_len(), 1);
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(&t(r"\x.x"), 10), Ok(0));
        assert_eq!(eta(&t(r"(\x.x) y"), 10), Ok(1));
        assert_eq!(eta(&t(r"(\x.x x) y"), 10), Ok(1));
        assert_eq!(eta(&t(r"(\x.x) ((\y.y) z)"), 10), Ok(2));
        assert_eq!(eta(&t(r"(\x.x x) (\x.x x)"), 10), Err(EtaError::NotSn));
        assert!(matches!(eta(&t(r"(\x.x x x) (\x.x x x)"), 5), Err(EtaError::Unknown(_))));
    }

    #[test]
    fn cycle_inside_subterm_is_lifted() {
        // the growing outer redex keeps BFS busy; the cycle sits in the argument
        let w = sn_verdict(&t(r"(\y.(\x.x x x) (\x.x x x)) ((\x.x x) (\x.x x))"), 1000);
        let w = w.witness().expect("non-sn");
        assert!(w.check());
    }

    #[test]
    fn must_pass_through_examples() {
        let u = t("(mu a.x) (mu b.y)");
        assert_eq!(must_pass_through(&u, &u, 10), Answer::Yes);
        assert_eq!(must_pass_through(&u, &t("mu a.x"), 10), Answer::No);
        assert_eq!(must_pass_through(&t(r"(\x.x) y"), &t("y"), 10), Answer::Yes);
        assert_eq!(must_pass_through(&t(r"(\x.x x) (\x.x x)"), &t("z"), 10), Answer::No);
    }

    #[test]
    fn single_redex_step_examples() {
        assert!(single_redex_step(&t(r"(\d.\x.\y.x) (\x.x x)"), &t(r"\x.\y.x")));
        assert!(single_redex_step(&t(r"(\x.x x) (\x.x x)"), &t(r"(\x.x x) (\x.x x)")));
        assert!(!single_redex_step(&t(r"(\x.x) ((\y.y) z)"), &t(r"(\y.y) z")));
    }

    #[test]
    fn prec_examples() {
        assert_eq!(prec(&t("y"), &t(r"(\x.x) y"), 10), Answer::Yes);
        let dd = t(r"(\x.x x) (\x.x x)");
        assert_eq!(prec(&dd, &dd, 10), Answer::Yes);
        let m = t(r"\x.x y");
        assert_eq!(prec(&m, &m, 10), Answer::No);
        assert_eq!(prec_eq(&m, &m, 10), Answer::Yes);
        assert_eq!(prec(&t("y"), &m, 10), Answer::Yes);
    }
}
