//! Partial-order reduction for reduction graphs.
//!
//! Redexes at parallel positions commute: firing one leaves the other
//! untouched and both orders end in the same term. So when a subterm `S` at
//! position `p` cannot interact with its surroundings until one of its own
//! redexes fires, it is enough to explore the redexes inside `S` from the
//! current term. "Interact" means that some application above `p` becomes a
//! redex; that needs either a redex above `p` now, or a sibling on the way
//! up that turns into a λ or μ by reductions of its own.
//!
//! A single redex `R` is enough on its own when it is isolated in the same
//! sense and the part it copies or drops is a normal form that cannot
//! create a second redex at the same place: the argument of a β or μ redex
//! (normal, not a μ), or the function of a μ' redex (normal, not an
//! abstraction). Then every redex inside `R` has exactly one residual after
//! `R`, and `R` stays in place until it fires.
//!
//! Any infinite reduction can be rearranged to start with a step inside `S`
//! (move the first such step to the front, or prepend one if the reduction
//! never touches `S`), and any maximal finite one likewise without changing
//! its length. Hence the restricted graph has an infinite path iff the full
//! one does, and the same longest path when both are finite.

use std::collections::HashMap;

use super::graph::{Expansion, ReductionGraph};
use crate::reduce::{is_normal, RedexRef, Rule};
use crate::term::{canonical_key, Name, Node, Path, Selector, Term};

/// Budgets for deciding the head behavior of a sibling by exploration.
const SIBLING_NODES: usize = 256;
/// Larger siblings are left undecided.
const SIBLING_MAX_SIZE: usize = 128;
/// Edges weighted by the size of their source term.
const SIBLING_WORK: usize = 1 << 14;

/// What `t` can turn into: (never an abstraction, never a μ). Sound but
/// incomplete. `env` holds the same facts for the arguments of enclosing
/// β-redexes, keyed by their bound variables; other variables never change.
fn heads(t: &Term, env: &mut Vec<(Name, (bool, bool))>) -> (bool, bool) {
    match t.node() {
        Node::Var(x) => env.iter().rev().find(|(y, _)| y == x).map_or((true, true), |e| e.1),
        Node::Named(..) => (true, true),
        Node::Lam(..) => (false, true),
        Node::Mu(..) => (false, false),
        Node::App(f, a) => {
            let arg = heads(a, env);
            if !arg.1 {
                // a μ' redex may fire here
                return (false, false);
            }
            if let Node::Lam(x, body) = f.node() {
                // every reduct at the top is a reduct of body[x := a]
                env.push((x.clone(), arg));
                let r = heads(body, env);
                env.pop();
                return r;
            }
            if heads(f, env).0 {
                (true, true)
            } else {
                (false, false)
            }
        }
    }
}

fn never_abstraction(t: &Term) -> bool {
    heads(t, &mut Vec::new()).0
}

fn never_mu(t: &Term) -> bool {
    heads(t, &mut Vec::new()).1
}

/// If `r` copies or drops only a normal form and cannot overlap another
/// rule, that normal form.
fn linear<'t>(t: &'t Term, r: &RedexRef) -> Option<&'t Term> {
    let Some(Node::App(f, a)) = t.at(&r.path).map(Term::node) else { return None };
    let ok = match r.rule {
        Rule::Beta | Rule::Mu => !a.is_mu() && is_normal(a),
        Rule::MuPrime => !f.is_lambda() && !f.is_mu() && is_normal(f),
    };
    ok.then_some(if r.rule == Rule::MuPrime { f } else { a })
}

/// Chooses ample sets. Remembers, per alpha-class, what siblings can turn
/// into: the syntactic test above first, then a small exhaustive
/// exploration of the sibling's reducts.
#[derive(Default)]
pub struct AmpleChooser {
    /// (never an abstraction, never a μ), or `None` if undecided.
    heads: HashMap<String, Option<(bool, bool)>>,
}

impl AmpleChooser {
    pub fn new() -> Self {
        Self::default()
    }

    fn heads(&mut self, t: &Term) -> Option<(bool, bool)> {
        let key = canonical_key(t);
        if let Some(&h) = self.heads.get(&key) {
            return h;
        }
        if t.cxty() > SIBLING_MAX_SIZE {
            self.heads.insert(key, None);
            return None;
        }
        let mut g = ReductionGraph::new(t);
        let mut work = 0;
        while work < SIBLING_WORK {
            let Expansion::Expanded { node, .. } = g.expand_next(SIBLING_NODES) else { break };
            work += g.out(node).len() * g.term(node).cxty();
        }
        let h = g.is_complete().then(|| {
            let any_mu = g.terms().iter().any(Term::is_mu);
            (!any_mu && !g.terms().iter().any(Term::is_lambda), !any_mu)
        });
        self.heads.insert(key, h);
        h
    }

    fn never_abstraction(&mut self, t: &Term) -> bool {
        never_abstraction(t) || self.heads(t).is_some_and(|h| h.0)
    }

    fn never_mu(&mut self, t: &Term) -> bool {
        never_mu(t) || self.heads(t).is_some_and(|h| h.1)
    }

    /// The subterm at `p` is carried along unchanged, never copied or
    /// dropped, by every reduction that does not touch it. Applications on
    /// the way may fire only as μ or μ' steps with `p` inside the μ body;
    /// those move the subterm without changing it, given that it has no
    /// free μ-variable bound on the way and that the new applications they
    /// create at `[a] W` (with `W` on the way) obey the same rules.
    fn protected(&mut self, t: &Term, p: &Path) -> bool {
        let Some(binders) = self.binders_on_safe_path(t, p) else { return false };
        let fv = t.at(p).expect("redex path").free_vars();
        !binders.iter().any(|a| fv.mu.contains(a))
    }

    /// The μ-binders above `p`, if every node on the way satisfies the
    /// conditions of [`Self::protected`].
    fn binders_on_safe_path<'t>(&mut self, t: &'t Term, p: &Path) -> Option<Vec<&'t Name>> {
        let mut cur = t;
        let mut binders: Vec<&Name> = Vec::new();
        for &sel in &p.0 {
            match cur.node() {
                Node::App(f, a) => {
                    let ok = match sel {
                        Selector::AppFun => !f.is_lambda() && self.never_mu(a),
                        _ => self.never_abstraction(f),
                    };
                    if !ok {
                        return None;
                    }
                }
                Node::Mu(a, _) => binders.push(a),
                Node::Named(a, w) => {
                    if binders.contains(&a) && w.is_lambda() {
                        return None;
                    }
                }
                Node::Lam(..) | Node::Var(_) => {}
            }
            cur = cur.child(sel).expect("redex path");
        }
        Some(binders)
    }

    /// `r` is linear, on a safe path, and the part it copies has no free
    /// μ-variable bound on the way (so it stays normal).
    fn lone(&mut self, t: &Term, r: &RedexRef) -> bool {
        let Some(copied) = linear(t, r) else { return false };
        let Some(binders) = self.binders_on_safe_path(t, &r.path) else { return false };
        let fv = copied.free_vars();
        !binders.iter().any(|a| fv.mu.contains(a))
    }

    /// Indices into `rs` (the redexes of `t`, in order) that suffice for
    /// exploring `t`: a lone linear redex, else those inside the protected
    /// subterm with the fewest redexes, else all of them.
    pub fn choose(&mut self, t: &Term, rs: &[RedexRef]) -> Vec<usize> {
        if let Some(i) = rs.iter().position(|r| self.lone(t, r)) {
            return vec![i];
        }
        let mut best: Option<(&Path, usize)> = None;
        let mut tried: Vec<&Path> = Vec::new();
        for r in rs {
            let p = &r.path;
            if p.is_root() || tried.contains(&p) {
                continue;
            }
            tried.push(p);
            let inside = rs.iter().filter(|s| s.path.0.starts_with(&p.0)).count();
            if inside == rs.len() || best.is_some_and(|(_, n)| n <= inside) {
                continue;
            }
            if self.protected(t, p) {
                best = Some((p, inside));
                if inside == 1 {
                    break;
                }
            }
        }
        match best {
            Some((p, _)) => (0..rs.len()).filter(|&i| rs[i].path.0.starts_with(&p.0)).collect(),
            None => (0..rs.len()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::redexes;
    use crate::term::parse;

    fn ample(s: &str) -> Vec<String> {
        let t = parse(s).unwrap();
        let rs = redexes(&t);
        AmpleChooser::new().choose(&t, &rs).into_iter().map(|i| rs[i].to_string()).collect()
    }

    #[test]
    fn parallel_redexes_under_a_variable() {
        // x R1 R2: the arguments never interact with x
        let got = ample(r"x ((\y.y y) z) ((\y.y) (z z))");
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn linear_redexes_go_alone() {
        assert_eq!(ample(r"(\x.(\y.y) x) z").len(), 1);
        assert_eq!(ample(r"f (mu a.[a] ((\y.y) z))").len(), 1);
        // the argument still has a redex, so it may be copied
        assert_eq!(ample(r"(\x.x x) ((\y.y) z)").len(), 2);
        // a mu argument overlaps with mu'
        assert_eq!(ample(r"(\x.(\y.y) x) (mu a.z)").len(), 3);
    }

    #[test]
    fn head_analysis() {
        let h = |s: &str| heads(&parse(s).unwrap(), &mut Vec::new());
        assert_eq!(h("x y"), (true, true));
        assert_eq!(h(r"\x.x"), (false, true));
        assert_eq!(h(r"(\z.[a] z) w"), (true, true));
        assert_eq!(h(r"(\z.z) w"), (true, true));
        assert_eq!(h(r"(\z.z) (\w.w)"), (false, true));
        assert_eq!(h(r"(\z.z w) (\w.w)"), (false, false));
        assert_eq!(h(r"x (mu a.y)"), (false, false));
        assert_eq!(h(r"(\z.[a] z) (mu b.y)"), (false, false));
    }

    #[test]
    fn mu_arguments_are_not_isolated() {
        // the first argument may become a mu and then a mu' redex fires
        let t = parse(r"x ((\y.mu a.y) z) ((\y.y) z)").unwrap();
        let rs = redexes(&t);
        assert_eq!(AmpleChooser::new().choose(&t, &rs), vec![0]);
        assert_eq!(ample(r"x ((\y.mu a.y) z) ((\y.mu b.y) z)").len(), 2);
    }

    #[test]
    fn root_redex_forces_full_expansion() {
        assert_eq!(ample(r"(\x.x) ((\y.y) z)").len(), 2);
        assert_eq!(ample("(mu a.x) (mu b.y)").len(), 2);
    }

    #[test]
    fn function_side_needs_stable_argument() {
        // the function reduces to a lambda, so only its side is isolated,
        // and only while the argument cannot become a mu
        assert_eq!(ample(r"((\y.y) (\z.z)) ((\v.v) w)").len(), 1);
        assert_eq!(ample(r"((\y.y) (\z.z)) ((\v.mu a.v) w)").len(), 2);
    }
}
