mod common;

use std::collections::BTreeSet;

use lambdamu::reduce::{contract, is_normal, redexes, step, Rule};
use lambdamu::sn::{sn_verdict_with, SnOptions, SnVerdict};
use lambdamu::standard::{is_standard, standardize};
use lambdamu::subst::{rename_lambda, rename_mu, subst_lambda, subst_mu_left, subst_mu_right};
use lambdamu::term::{FreeVars, Namespace};
use lambdamu::typing::{check_with_default, infer, verify_derivation, Context, SimpleType};
use lambdamu::{alpha_eq, canonical_key, parse, successors, Name, Node, RedexRef, ReductionTrace, Selector, Term};
use proptest::prelude::*;

use common::{arb_term, graph_longest_path, replay_cycle};

/// Renames every binder to a name of the form `v<n>`, giving an
/// alpha-equivalent term with no binder names in common with the input.
fn freshen(t: &Term, next: &mut usize) -> Term {
    match t.node() {
        Node::Var(_) => t.clone(),
        Node::App(f, a) => Term::app(freshen(f, next), freshen(a, next)),
        Node::Named(a, m) => Term::named(a.clone(), freshen(m, next)),
        Node::Lam(x, m) => {
            *next += 1;
            let y = Name::new(&format!("v{next}"));
            let body = rename_lambda(m, x, &y);
            Term::lam(y, freshen(&body, next))
        }
        Node::Mu(a, m) => {
            *next += 1;
            let b = Name::new(&format!("k{next}"));
            let body = rename_mu(m, a, &b);
            Term::mu(b, freshen(&body, next))
        }
    }
}

fn variant(t: &Term, seed: usize) -> Term {
    let mut n = seed * 1000;
    freshen(t, &mut n)
}

/// Free `[a] _` occurrences.
fn free_namings(t: &Term, a: &Name) -> usize {
    match t.node() {
        Node::Var(_) => 0,
        Node::Lam(_, m) => free_namings(m, a),
        Node::Mu(b, m) => {
            if b == a {
                0
            } else {
                free_namings(m, a)
            }
        }
        Node::Named(b, m) => usize::from(b == a) + free_namings(m, a),
        Node::App(f, g) => free_namings(f, a) + free_namings(g, a),
    }
}

fn subset(sub: &FreeVars, sup_m: &FreeVars, minus: Option<(Namespace, &Name)>, sup_n: &FreeVars) -> bool {
    let ok = |ns: Namespace, s: &BTreeSet<Name>, m: &BTreeSet<Name>, n: &BTreeSet<Name>| {
        s.iter().all(|v| n.contains(v) || (m.contains(v) && minus != Some((ns, v))))
    };
    ok(Namespace::Lambda, &sub.lambda, &sup_m.lambda, &sup_n.lambda) && ok(Namespace::Mu, &sub.mu, &sup_m.mu, &sup_n.mu)
}

fn ground(ty: &SimpleType) -> SimpleType {
    match ty {
        SimpleType::Meta(n) => SimpleType::atom(&format!("T{n}")),
        SimpleType::Arrow(a, b) => SimpleType::arrow(ground(a), ground(b)),
        other => other.clone(),
    }
}

fn random_walk(t: &Term, picks: &[usize]) -> ReductionTrace {
    let mut tr = ReductionTrace::new(t.clone());
    for &k in picks {
        let rs = redexes(tr.last());
        if rs.is_empty() {
            break;
        }
        let r = rs[k % rs.len()].clone();
        let next = step(tr.last(), &r).unwrap();
        tr.push(r, next);
    }
    tr
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn alpha_is_an_equivalence(t in arb_term(), u in arb_term()) {
        let (v1, v2) = (variant(&t, 1), variant(&t, 2));
        prop_assert!(alpha_eq(&t, &t));
        prop_assert!(alpha_eq(&t, &v1) && alpha_eq(&v1, &v2) && alpha_eq(&t, &v2));
        prop_assert_eq!(alpha_eq(&t, &u), alpha_eq(&u, &t));
    }

    #[test]
    fn print_then_parse_round_trips(t in arb_term()) {
        let back = parse(&t.to_string()).unwrap();
        prop_assert!(alpha_eq(&back, &t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn cxty_counts_subterms_and_shrinks(t in arb_term()) {
        let subs = t.subterms();
        prop_assert!(t.cxty() >= 1);
        prop_assert_eq!(subs.len(), t.cxty());
        for (p, s) in &subs {
            if !p.is_root() {
                prop_assert!(s.cxty() < t.cxty());
            }
        }
    }

    #[test]
    fn keys_decide_alpha(t in arb_term(), u in arb_term()) {
        let v = variant(&t, 3);
        prop_assert_eq!(canonical_key(&t), canonical_key(&v));
        prop_assert_eq!(canonical_key(&t) == canonical_key(&u), alpha_eq(&t, &u));
    }

    #[test]
    fn substituting_a_variable_for_itself(m in arb_term()) {
        let x = Name::new("x");
        prop_assert!(alpha_eq(&subst_lambda(&m, &x, &Term::var("x")), &m));
    }

    #[test]
    fn lambda_substitution_free_variables(m in arb_term(), n in arb_term()) {
        let x = Name::new("x");
        let r = subst_lambda(&m, &x, &n);
        let (fm, fn_, fr) = (m.free_vars(), n.free_vars(), r.free_vars());
        if !fn_.lambda.contains(&x) {
            prop_assert!(!fr.lambda.contains(&x));
        }
        prop_assert!(subset(&fr, &fm, Some((Namespace::Lambda, &x)), &fn_));
    }

    #[test]
    fn structural_substitutions_keep_namings(m in arb_term(), n in arb_term()) {
        let a = Name::new("a");
        prop_assume!(!n.free_vars().mu.contains(&a));
        for r in [subst_mu_right(&m, &a, &n), subst_mu_left(&m, &a, &n)] {
            prop_assert_eq!(free_namings(&r, &a), free_namings(&m, &a));
            prop_assert!(subset(&r.free_vars(), &m.free_vars(), None, &n.free_vars()));
            if !m.free_vars().mu.contains(&a) {
                prop_assert!(alpha_eq(&r, &m));
            }
        }
    }

    #[test]
    fn substitution_respects_alpha(m in arb_term(), n in arb_term()) {
        let (x, a) = (Name::new("x"), Name::new("a"));
        let (m2, n2) = (variant(&m, 4), variant(&n, 5));
        prop_assert!(alpha_eq(&subst_lambda(&m, &x, &n), &subst_lambda(&m2, &x, &n2)));
        prop_assert!(alpha_eq(&subst_mu_right(&m, &a, &n), &subst_mu_right(&m2, &a, &n2)));
        prop_assert!(alpha_eq(&subst_mu_left(&m, &a, &n), &subst_mu_left(&m2, &a, &n2)));
    }

    #[test]
    fn normal_forms_agree(t in arb_term()) {
        let n = is_normal(&t);
        prop_assert_eq!(n, redexes(&t).is_empty());
        prop_assert_eq!(n, successors(&t).is_empty());
    }

    #[test]
    fn root_steps_are_substitutions(f in arb_term(), g in arb_term()) {
        let t = Term::app(f.clone(), g.clone());
        for rule in [Rule::Beta, Rule::Mu, Rule::MuPrime] {
            let Some(got) = contract(&t, rule) else { continue };
            let want = match (rule, f.node(), g.node()) {
                (Rule::Beta, Node::Lam(x, m), _) => subst_lambda(m, x, &g),
                (Rule::Mu, Node::Mu(a, m), _) => {
                    prop_assume!(!g.free_vars().mu.contains(a));
                    Term::mu(a.clone(), subst_mu_right(m, a, &g))
                }
                (Rule::MuPrime, _, Node::Mu(a, m)) => {
                    prop_assume!(!f.free_vars().mu.contains(a));
                    Term::mu(a.clone(), subst_mu_left(m, a, &f))
                }
                _ => panic!("{rule} fired on {t}"),
            };
            prop_assert!(alpha_eq(&got, &want), "{} by {}: {} vs {}", t, rule, got, want);
        }
    }

    #[test]
    fn reduction_is_closed_under_contexts(t in arb_term(), other in arb_term()) {
        let wraps: [(Selector, Box<dyn Fn(Term) -> Term>); 5] = [
            (Selector::LamBody, Box::new(|u| Term::lam("x", u))),
            (Selector::MuBody, Box::new(|u| Term::mu("a", u))),
            (Selector::NamedBody, Box::new(|u| Term::named("b", u))),
            (Selector::AppFun, Box::new(|u| Term::app(u, other.clone()))),
            (Selector::AppArg, Box::new(|u| Term::app(other.clone(), u))),
        ];
        for r in redexes(&t) {
            let inner = step(&t, &r).unwrap();
            for (sel, wrap) in &wraps {
                let outer = step(&wrap(t.clone()), &r.under(*sel)).unwrap();
                prop_assert!(alpha_eq(&outer, &wrap(inner.clone())));
            }
        }
    }

    #[test]
    fn inferred_types_check(t in arb_term()) {
        let closed = Term::lam("x", Term::lam("y", Term::lam("z", t)));
        prop_assume!(closed.free_vars().mu.is_empty());
        let ctx = Context::new();
        if let Ok(ty) = infer(&ctx, &closed) {
            let d = check_with_default(&ctx, &closed, &ground(&ty), &SimpleType::Bottom).unwrap();
            prop_assert!(verify_derivation(&d).is_ok());
        }
    }

    #[test]
    fn random_walks_standardize(t in arb_term(), picks in prop::collection::vec(0usize..8, 0..5)) {
        let tr = random_walk(&t, &picks);
        let (out, cert) = standardize(&tr).unwrap();
        prop_assert!(alpha_eq(out.first(), tr.first()) && alpha_eq(out.last(), tr.last()));
        prop_assert!(out.is_valid());
        prop_assert!(cert.verify().is_ok());
        prop_assert!(is_standard(&out).is_ok());
    }

    #[test]
    fn certified_traces_replay(t in arb_term(), picks in prop::collection::vec(0usize..8, 0..4)) {
        let tr = random_walk(&t, &picks);
        if let Ok(cert) = is_standard(&tr) {
            let again = cert.trace();
            prop_assert!(again.is_valid());
            prop_assert_eq!(again.terms.len(), tr.terms.len());
            for (u, v) in again.terms.iter().zip(&tr.terms) {
                prop_assert!(alpha_eq(u, v));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    /// Exploring only ample sets gives the same verdict and the same η as
    /// exploring every redex.
    #[test]
    fn reduced_exploration_agrees(t in arb_term()) {
        let base = SnOptions { max_nodes: 20_000, ..SnOptions::default() };
        let full = sn_verdict_with(&t, SnOptions { reduce: false, ..base });
        let reduced = sn_verdict_with(&t, base);
        match (&full, &reduced) {
            (SnVerdict::Sn { eta: a, graph }, SnVerdict::Sn { eta: b, graph: small }) => {
                prop_assert_eq!(a, b);
                prop_assert!(small.len() <= graph.len());
                prop_assert_eq!(graph_longest_path(small), Some(*b));
            }
            (SnVerdict::NonSn { .. }, SnVerdict::NonSn { witness, .. }) => {
                prop_assert!(replay_cycle(&witness.trace, witness.repeat_from));
            }
            (SnVerdict::Unknown { .. }, _) | (_, SnVerdict::Unknown { .. }) => {}
            _ => prop_assert!(false, "{}: full {} vs reduced {}", t, full, reduced),
        }
    }
}

#[test]
fn closure_under_contexts_uses_shifted_paths() {
    let t = common::t(r"(\x.x) y");
    let r = RedexRef::root(Rule::Beta).under(Selector::LamBody);
    assert_eq!(r.path.0, vec![Selector::LamBody]);
    assert!(alpha_eq(&step(&Term::lam("z", t), &r).unwrap(), &common::t(r"\z.y")));
}
