//! Seeded random terms for property tests and benchmarks.
//!
//! All generators draw from a caller-supplied RNG, so a seed fixes the
//! output. λ-variables come from `x, y, z` and μ-variables from `a, b, c`,
//! which keeps shadowing and capture situations frequent.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::sn::{sn_verdict, SnVerdict};
use crate::term::{Name, Term};
use crate::typing::{Context, SimpleType};

const LAMBDA_NAMES: [&str; 3] = ["x", "y", "z"];
const MU_NAMES: [&str; 3] = ["a", "b", "c"];

fn pick<R: Rng>(rng: &mut R, names: &[&str]) -> Name {
    Name::new(names.choose(rng).unwrap())
}

/// A random term with exactly `size` nodes (`size ≥ 1`), free variables
/// allowed. Applications favor λ- and μ-headed functions and μ arguments so
/// that redexes are common.
pub fn random_term_of_size<R: Rng>(rng: &mut R, size: usize) -> Term {
    assert!(size >= 1);
    if size == 1 {
        return Term::var(pick(rng, &LAMBDA_NAMES));
    }
    let roll = rng.gen_range(0..10);
    if size >= 3 && roll < 5 {
        let left = rng.gen_range(1..size - 1);
        let right = size - 1 - left;
        return Term::app(random_term_of_size(rng, left), random_term_of_size(rng, right));
    }
    let body = random_term_of_size(rng, size - 1);
    match roll {
        0..=6 => Term::lam(pick(rng, &LAMBDA_NAMES), body),
        7 | 8 => Term::mu(pick(rng, &MU_NAMES), body),
        _ => Term::named(pick(rng, &MU_NAMES), body),
    }
}

/// A random term with between 1 and `max_size` nodes.
pub fn random_term<R: Rng>(rng: &mut R, max_size: usize) -> Term {
    let size = rng.gen_range(1..=max_size.max(1));
    random_term_of_size(rng, size)
}

/// A random term of at most `max_size` nodes that is certified SN within
/// `max_nodes` explored nodes. Retries until one is found.
pub fn random_sn_term<R: Rng>(rng: &mut R, max_size: usize, max_nodes: usize) -> (Term, usize) {
    loop {
        let t = random_term(rng, max_size);
        if let SnVerdict::Sn { eta, .. } = sn_verdict(&t, max_nodes) {
            return (t, eta);
        }
    }
}

/// A term together with a context and a type it checks at.
#[derive(Clone, Debug)]
pub struct WellTyped {
    pub ctx: Context,
    pub term: Term,
    pub ty: SimpleType,
}

/// The free variables of generated typed terms: `p : A`, `q : B`,
/// `r : _|_`, `k : A -> B`.
pub fn base_context() -> Context {
    Context::new()
        .with_lambda("p", SimpleType::atom("A"))
        .with_lambda("q", SimpleType::atom("B"))
        .with_lambda("r", SimpleType::Bottom)
        .with_lambda("k", SimpleType::arrow(SimpleType::atom("A"), SimpleType::atom("B")))
}

fn random_type<R: Rng>(rng: &mut R, depth: usize) -> SimpleType {
    let roll = rng.gen_range(0..if depth == 0 { 3 } else { 5 });
    match roll {
        0 => SimpleType::atom("A"),
        1 => SimpleType::atom("B"),
        2 => SimpleType::Bottom,
        _ => SimpleType::arrow(random_type(rng, depth - 1), random_type(rng, depth - 1)),
    }
}

struct TypedGen<'r, R> {
    rng: &'r mut R,
    /// Innermost binding last.
    lambda: Vec<(Name, SimpleType)>,
    mu: Vec<(Name, SimpleType)>,
}

impl<R: Rng> TypedGen<'_, R> {
    fn visible<'a>(scope: &'a [(Name, SimpleType)], ty: &SimpleType) -> Vec<&'a Name> {
        let mut out: Vec<&Name> = Vec::new();
        for (i, (x, t)) in scope.iter().enumerate() {
            let shadowed = scope[i + 1..].iter().any(|(y, _)| y == x);
            if !shadowed && t == ty {
                out.push(x);
            }
        }
        out
    }

    /// Smallest term of type `ty` in the current scope: a variable, a λ over
    /// a smallest body, or the free `r : _|_` under a μ.
    fn minimal(&mut self, ty: &SimpleType) -> Term {
        if let Some(x) = Self::visible(&self.lambda, ty).choose(self.rng) {
            return Term::var((*x).clone());
        }
        match ty {
            SimpleType::Arrow(a, b) => {
                let x = pick(self.rng, &LAMBDA_NAMES);
                self.lambda.push((x.clone(), (**a).clone()));
                let body = self.minimal(b);
                self.lambda.pop();
                Term::lam(x, body)
            }
            _ => {
                // mu a.[?] r cannot name a : ~A with r : _|_ unless A = _|_;
                // use a throwaway binder around the bottom constant instead
                let a = pick(self.rng, &MU_NAMES);
                Term::mu(a, Term::var("r"))
            }
        }
    }

    fn gen(&mut self, ty: &SimpleType, fuel: usize) -> Term {
        if fuel <= 1 {
            return self.minimal(ty);
        }
        let roll = self.rng.gen_range(0..12);
        match roll {
            // redex: (\x.M) N or (mu a.M) N
            0..=3 => {
                let arg_ty = random_type(self.rng, 1);
                let split = self.rng.gen_range(1..fuel.max(2));
                let fun_ty = SimpleType::arrow(arg_ty.clone(), ty.clone());
                let fun = if roll < 2 { self.gen_lambda(&fun_ty, split) } else { self.gen_mu(&fun_ty, split) };
                let arg = if roll % 2 == 0 { self.gen_mu(&arg_ty, fuel - split) } else { self.gen(&arg_ty, fuel - split) };
                Term::app(fun, arg)
            }
            4 | 5 => {
                let arg_ty = random_type(self.rng, 1);
                let split = self.rng.gen_range(1..fuel.max(2));
                let fun = self.gen(&SimpleType::arrow(arg_ty.clone(), ty.clone()), split);
                let arg = self.gen(&arg_ty, fuel - split);
                Term::app(fun, arg)
            }
            6 | 7 => self.gen_mu(ty, fuel),
            8 if *ty == SimpleType::Bottom && !self.mu.is_empty() => {
                let (a, a_ty) = self.mu.choose(self.rng).unwrap().clone();
                if Self::visible(&self.mu, &a_ty).contains(&&a) {
                    let body = self.gen(&a_ty, fuel - 1);
                    Term::named(a, body)
                } else {
                    self.minimal(ty)
                }
            }
            _ => match ty {
                SimpleType::Arrow(..) => self.gen_lambda(ty, fuel),
                _ => self.minimal(ty),
            },
        }
    }

    fn gen_lambda(&mut self, ty: &SimpleType, fuel: usize) -> Term {
        let SimpleType::Arrow(a, b) = ty else { return self.gen(ty, fuel) };
        let x = pick(self.rng, &LAMBDA_NAMES);
        self.lambda.push((x.clone(), (**a).clone()));
        let body = self.gen(b, fuel.saturating_sub(1));
        self.lambda.pop();
        Term::lam(x, body)
    }

    /// `mu a.[a] M` or `mu a.[b] M` with `M` of the right type.
    fn gen_mu(&mut self, ty: &SimpleType, fuel: usize) -> Term {
        let a = pick(self.rng, &MU_NAMES);
        self.mu.push((a.clone(), ty.clone()));
        let body = if self.rng.gen_bool(0.7) {
            Term::named(a.clone(), self.gen(ty, fuel.saturating_sub(2)))
        } else {
            self.gen(&SimpleType::Bottom, fuel.saturating_sub(1))
        };
        self.mu.pop();
        Term::mu(a, body)
    }
}

/// A random term that checks in [`base_context`] at a random type, with at
/// most `max_size` nodes. The type derivation is by construction; callers
/// are expected to re-check it.
pub fn random_well_typed<R: Rng>(rng: &mut R, max_size: usize) -> WellTyped {
    let ctx = base_context();
    loop {
        let ty = random_type(rng, 2);
        let fuel = rng.gen_range(1..=max_size.max(1));
        let mut g = TypedGen {
            rng: &mut *rng,
            lambda: ctx.lambda.iter().map(|(x, t)| (x.clone(), t.clone())).collect(),
            mu: Vec::new(),
        };
        let term = g.gen(&ty, fuel);
        if term.cxty() <= max_size {
            return WellTyped { ctx, term, ty };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::{check_with_default, verify_derivation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for size in 1..30 {
            assert_eq!(random_term_of_size(&mut rng, size).cxty(), size);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_term(&mut ChaCha8Rng::seed_from_u64(7), 20);
        let b = random_term(&mut ChaCha8Rng::seed_from_u64(7), 20);
        assert!(a.syn_eq(&b));
    }

    #[test]
    fn typed_terms_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let w = random_well_typed(&mut rng, 25);
            assert!(w.term.cxty() <= 25);
            let d = check_with_default(&w.ctx, &w.term, &w.ty, &SimpleType::Bottom)
                .unwrap_or_else(|e| panic!("{} : {} fails: {e}", w.term, w.ty));
            verify_derivation(&d).unwrap();
        }
    }

    #[test]
    fn sn_terms_are_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (t, _) = random_sn_term(&mut rng, 10, 2000);
            assert!(t.cxty() <= 10);
        }
    }
}
