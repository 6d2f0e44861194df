//! Oracles and generators shared by the integration tests. Everything here
//! is written against the public API only and avoids the library's own
//! graph and standardness code, so it can check those.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use lambdamu::reduce::{redexes, step};
use lambdamu::sn::ReductionGraph;
use lambdamu::{alpha_eq, canonical_key, parse, successors, Node, ReductionTrace, Selector, Term};
use proptest::prelude::*;

pub fn t(s: &str) -> Term {
    parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Terms over `x y z` and `a b c`, so binders clash and shadow often.
/// Redex shapes are weighted up so that most terms reduce.
pub fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var);
    leaf.prop_recursive(8, 48, 2, |inner| {
        let lam = || prop::sample::select(vec!["x", "y", "z"]);
        let mu = || prop::sample::select(vec!["a", "b", "c"]);
        prop_oneof![
            2 => (lam(), inner.clone()).prop_map(|(x, b)| Term::lam(x, b)),
            2 => (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            1 => (mu(), inner.clone()).prop_map(|(a, b)| Term::mu(a, b)),
            2 => (mu(), inner.clone()).prop_map(|(a, b)| Term::named(a, b)),
            2 => (lam(), inner.clone(), inner.clone()).prop_map(|(x, m, n)| Term::app(Term::lam(x, m), n)),
            1 => (mu(), inner.clone(), inner.clone()).prop_map(|(a, m, n)| Term::app(Term::mu(a, m), n)),
            1 => (inner.clone(), mu(), inner).prop_map(|(m, a, n)| Term::app(m, Term::mu(a, n))),
        ]
    })
}

/// Every trace of exactly `len` steps from `t`.
pub fn traces_of_len(t: &Term, len: usize) -> Vec<ReductionTrace> {
    fn go(tr: &mut ReductionTrace, left: usize, out: &mut Vec<ReductionTrace>) {
        if left == 0 {
            out.push(tr.clone());
            return;
        }
        for r in redexes(tr.last()) {
            let next = step(tr.last(), &r).unwrap();
            tr.push(r, next);
            go(tr, left - 1, out);
            tr.terms.pop();
            tr.steps.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut ReductionTrace::new(t.clone()), len, &mut out);
    out
}

/// Every trace of 1 to `max_len` steps from `t`.
pub fn traces_up_to(t: &Term, max_len: usize) -> Vec<ReductionTrace> {
    (1..=max_len).flat_map(|n| traces_of_len(t, n)).collect()
}

/// Longest path from node 0 of a finite graph given as adjacency lists,
/// by Kahn's algorithm and a DP in reverse topological order. `None` if
/// the graph has a cycle.
pub fn longest_path_kahn(adj: &[Vec<usize>]) -> Option<usize> {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for vs in adj {
        for &v in vs {
            indeg[v] += 1;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut queue: VecDeque<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &adj[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if order.len() < n {
        return None;
    }
    let mut longest = vec![0usize; n];
    for &u in order.iter().rev() {
        longest[u] = adj[u].iter().map(|&v| longest[v] + 1).max().unwrap_or(0);
    }
    Some(longest[0])
}

/// [`longest_path_kahn`] over the edges a library graph recorded.
pub fn graph_longest_path(g: &ReductionGraph) -> Option<usize> {
    assert!(g.is_complete());
    let adj: Vec<Vec<usize>> = (0..g.len()).map(|n| g.out(n).iter().map(|&(_, v)| v as usize).collect()).collect();
    longest_path_kahn(&adj)
}

pub enum Reach {
    /// Finite and acyclic, with this longest reduction.
    Eta(usize),
    Cyclic,
    TooBig,
}

/// Explores every reduct of `t` (all redexes, alpha-classes keyed by
/// `canonical_key`) and returns the longest reduction.
pub fn full_longest_reduction(t: &Term, max_nodes: usize) -> Reach {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut terms = vec![t.clone()];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
    ids.insert(canonical_key(t), 0);
    let mut next = 0;
    while next < terms.len() {
        let u = terms[next].clone();
        for (_, v) in successors(&u) {
            let key = canonical_key(&v);
            let id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    if terms.len() == max_nodes {
                        return Reach::TooBig;
                    }
                    ids.insert(key, terms.len());
                    terms.push(v);
                    adj.push(Vec::new());
                    terms.len() - 1
                }
            };
            adj[next].push(id);
        }
        next += 1;
    }
    match longest_path_kahn(&adj) {
        Some(n) => Reach::Eta(n),
        None => Reach::Cyclic,
    }
}

/// All alpha-classes reachable from `t`, or `None` past `max_nodes`.
pub fn reachable(t: &Term, max_nodes: usize) -> Option<Vec<Term>> {
    let mut seen = HashMap::new();
    seen.insert(canonical_key(t), ());
    let mut out = vec![t.clone()];
    let mut next = 0;
    while next < out.len() {
        for (_, v) in successors(&out[next].clone()) {
            if seen.insert(canonical_key(&v), ()).is_none() {
                if out.len() == max_nodes {
                    return None;
                }
                out.push(v);
            }
        }
        next += 1;
    }
    Some(out)
}

pub fn reaches(from: &Term, to: &Term, max_nodes: usize) -> Option<bool> {
    reachable(from, max_nodes).map(|ts| ts.iter().any(|u| alpha_eq(u, to)))
}

/// Replays a cycle witness without the library's checker: every step is
/// refired and compared by canonical key, and the last term's key must
/// occur earlier.
pub fn replay_cycle(tr: &ReductionTrace, repeat_from: usize) -> bool {
    if tr.terms.len() != tr.steps.len() + 1 || repeat_from >= tr.steps.len() {
        return false;
    }
    let stepped = tr.steps.iter().enumerate().all(|(i, r)| {
        step(&tr.terms[i], r).is_ok_and(|u| canonical_key(&u) == canonical_key(&tr.terms[i + 1]))
    });
    stepped && canonical_key(&tr.terms[repeat_from]) == canonical_key(tr.last())
}

/// Classical standardness for pure λ-terms: a reduction is standard iff no
/// step contracts a residual of a redex lying to the left of an earlier
/// contracted redex. Residuals are tracked by marking the λ of every redex
/// to the left of the one being contracted; marks travel with copies.
pub mod classic {
    use super::*;

    #[derive(Clone, Debug)]
    enum L {
        Var(String),
        Lam(String, Box<L>, bool),
        App(Box<L>, Box<L>),
    }

    fn from_term(t: &Term) -> L {
        match t.node() {
            Node::Var(x) => L::Var(x.as_str().to_string()),
            Node::Lam(x, b) => L::Lam(x.as_str().to_string(), Box::new(from_term(b)), false),
            Node::App(f, a) => L::App(Box::new(from_term(f)), Box::new(from_term(a))),
            _ => panic!("not a pure λ-term: {t}"),
        }
    }

    fn to_term(l: &L) -> Term {
        match l {
            L::Var(x) => Term::var(x.as_str()),
            L::Lam(x, b, _) => Term::lam(x.as_str(), to_term(b)),
            L::App(f, a) => Term::app(to_term(f), to_term(a)),
        }
    }

    fn free(l: &L, x: &str) -> bool {
        match l {
            L::Var(y) => y == x,
            L::Lam(y, b, _) => y != x && free(b, x),
            L::App(f, a) => free(f, x) || free(a, x),
        }
    }

    fn names(l: &L, out: &mut Vec<String>) {
        match l {
            L::Var(y) => out.push(y.clone()),
            L::Lam(y, b, _) => {
                out.push(y.clone());
                names(b, out);
            }
            L::App(f, a) => {
                names(f, out);
                names(a, out);
            }
        }
    }

    fn subst(l: &L, x: &str, n: &L) -> L {
        match l {
            L::Var(y) if y == x => n.clone(),
            L::Var(_) => l.clone(),
            L::App(f, a) => L::App(Box::new(subst(f, x, n)), Box::new(subst(a, x, n))),
            L::Lam(y, _, _) if y == x => l.clone(),
            L::Lam(y, b, m) => {
                if free(n, y) && free(b, x) {
                    let mut taken = Vec::new();
                    names(b, &mut taken);
                    names(n, &mut taken);
                    taken.push(x.to_string());
                    let mut z = format!("{y}0");
                    while taken.contains(&z) {
                        z.push('0');
                    }
                    let b = subst(b, y, &L::Var(z.clone()));
                    L::Lam(z, Box::new(subst(&b, x, n)), *m)
                } else {
                    L::Lam(y.clone(), Box::new(subst(b, x, n)), *m)
                }
            }
        }
    }

    fn at<'l>(l: &'l mut L, path: &[Selector]) -> &'l mut L {
        match (l, path.split_first()) {
            (l, None) => l,
            (L::App(f, _), Some((Selector::AppFun, rest))) => at(f, rest),
            (L::App(_, a), Some((Selector::AppArg, rest))) => at(a, rest),
            (L::Lam(_, b, _), Some((Selector::LamBody, rest))) => at(b, rest),
            _ => panic!("bad path"),
        }
    }

    /// Preorder comparison of positions: a prefix comes first, otherwise the
    /// function side comes before the argument side.
    fn before(p: &[Selector], q: &[Selector]) -> bool {
        match p.iter().zip(q).find(|(a, b)| a != b) {
            Some((a, _)) => *a == Selector::AppFun,
            None => p.len() < q.len(),
        }
    }

    /// Marks the λ of every redex whose λ precedes position `lam`.
    fn mark_left(l: &mut L, here: &mut Vec<Selector>, lam: &[Selector]) {
        match l {
            L::Var(_) => {}
            L::Lam(_, b, _) => {
                here.push(Selector::LamBody);
                mark_left(b, here, lam);
                here.pop();
            }
            L::App(f, a) => {
                if let L::Lam(_, _, m) = &mut **f {
                    here.push(Selector::AppFun);
                    if before(here, lam) {
                        *m = true;
                    }
                    here.pop();
                }
                here.push(Selector::AppFun);
                mark_left(f, here, lam);
                here.pop();
                here.push(Selector::AppArg);
                mark_left(a, here, lam);
                here.pop();
            }
        }
    }

    /// Whether the β-reduction `tr` of pure λ-terms is standard.
    pub fn is_standard(tr: &ReductionTrace) -> bool {
        let mut cur = from_term(tr.first());
        for (i, r) in tr.steps.iter().enumerate() {
            let mut lam = r.path.0.clone();
            lam.push(Selector::AppFun);
            let L::App(f, _) = at(&mut cur, &r.path.0) else { panic!("not a redex") };
            if matches!(**f, L::Lam(_, _, true)) {
                return false;
            }
            mark_left(&mut cur, &mut Vec::new(), &lam);
            let L::App(f, a) = at(&mut cur, &r.path.0).clone() else { unreachable!() };
            let L::Lam(x, body, _) = *f else { panic!("not a β-redex") };
            *at(&mut cur, &r.path.0) = subst(&body, &x, &a);
            assert!(alpha_eq(&to_term(&cur), &tr.terms[i + 1]), "classic replay diverged from the trace");
        }
        true
    }
}
