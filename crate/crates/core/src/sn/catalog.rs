//! The named counterexample terms.

use std::collections::BTreeSet;

use crate::subst::subst_lambda;
use crate::term::{fresh_name, parse, Name, Term};

/// The built-in terms. `n` has the free μ-variable `a`, `mpair` the free
/// λ-variable `x` and `mprime` the free μ-variable `b`.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub zero: Term,
    pub one: Term,
    pub delta: Term,
    pub p: Term,
    pub m0: Term,
    pub m1: Term,
    pub n: Term,
    pub mpair: Term,
    pub mprime: Term,
}

/// `⟨t1, t0⟩ = \f. f t1 t0` with `f` fresh for both components.
pub fn pair(t1: &Term, t0: &Term) -> Term {
    let mut taken = BTreeSet::new();
    t1.all_names(&mut taken);
    t0.all_names(&mut taken);
    let f = fresh_name(&Name::new("f"), |n| taken.contains(n));
    Term::lam(f.clone(), Term::apps(Term::var(f), [t1.clone(), t0.clone()]))
}

pub fn catalog() -> Catalog {
    let zero = parse(r"\x.\y.y").unwrap();
    let one = parse(r"\x.\y.x").unwrap();
    let delta = parse(r"\x.x x").unwrap();
    let mut c = Catalog {
        zero: zero.clone(),
        one: one.clone(),
        delta: delta.clone(),
        p: zero.clone(),
        m0: zero.clone(),
        m1: zero.clone(),
        n: parse(r"[a] (\z.[a] z)").unwrap(),
        mpair: zero.clone(),
        mprime: zero,
    };
    c.p = c.expand_str(r"\x.\y.\z.y (z one zero) (z zero one) (\d.one) delta delta");
    c.m0 = c.expand_str(r"\x.x P zero");
    c.m1 = c.expand_str(r"\x.x P one");
    c.mpair = pair(&c.expand_str("x M1"), &c.expand_str("x M0"));
    c.mprime = pair(&c.expand_str(r"[b] \x.x M1"), &c.expand_str(r"[b] \x.x M0"));
    c
}

impl Catalog {
    /// Entries in display order, under the names [`Catalog::expand`] knows.
    pub fn entries(&self) -> Vec<(&'static str, &Term)> {
        vec![
            ("zero", &self.zero),
            ("one", &self.one),
            ("delta", &self.delta),
            ("P", &self.p),
            ("M0", &self.m0),
            ("M1", &self.m1),
            ("N", &self.n),
            ("Mpair", &self.mpair),
            ("Mprime", &self.mprime),
        ]
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.entries().into_iter().find(|(k, _)| *k == name).map(|(_, t)| t)
    }

    /// Replaces free λ-variables named like an entry by that entry.
    pub fn expand(&self, t: &Term) -> Term {
        let free = t.free_vars().lambda;
        let mut out = t.clone();
        for (name, term) in self.entries() {
            let x = Name::new(name);
            if free.contains(&x) {
                out = subst_lambda(&out, &x, term);
            }
        }
        out
    }

    fn expand_str(&self, src: &str) -> Term {
        self.expand(&parse(src).expect("catalog source parses"))
    }
}
