//! Simple types for λμ-terms.
//!
//! ```text
//! Γ, x:A ⊢ x : A                                       (ax)
//! Γ, x:A ⊢ M : B          ⟹  Γ ⊢ \x.M : A -> B         (->i)
//! Γ ⊢ M : A -> B, Γ ⊢ N : A ⟹ Γ ⊢ M N : B              (->e)
//! Γ, a:~A ⊢ M : _|_       ⟹  Γ ⊢ mu a.M : A            (_|_e)
//! Γ, a:~A ⊢ M : A         ⟹  Γ, a:~A ⊢ [a] M : _|_     (_|_i)
//! ```
//!
//! Binder types are not written in terms, so they are solved by first-order
//! unification over metavariables.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::reduce::{successors, RedexRef};
use crate::term::{canonical_key, Name, Node, Path, Selector, Term};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SimpleType {
    Atom(Name),
    Bottom,
    Arrow(Box<SimpleType>, Box<SimpleType>),
    /// A unification variable; never present in a finished derivation.
    Meta(u32),
}

impl SimpleType {
    pub fn atom(name: &str) -> Self {
        SimpleType::Atom(Name::new(name))
    }

    pub fn arrow(a: SimpleType, b: SimpleType) -> Self {
        SimpleType::Arrow(Box::new(a), Box::new(b))
    }

    /// `~A`, that is `A -> _|_`.
    pub fn not(a: SimpleType) -> Self {
        SimpleType::arrow(a, SimpleType::Bottom)
    }

    pub fn has_meta(&self) -> bool {
        match self {
            SimpleType::Meta(_) => true,
            SimpleType::Arrow(a, b) => a.has_meta() || b.has_meta(),
            _ => false,
        }
    }

    fn metas(&self, out: &mut Vec<u32>) {
        match self {
            SimpleType::Meta(m) => {
                if !out.contains(m) {
                    out.push(*m)
                }
            }
            SimpleType::Arrow(a, b) => {
                a.metas(out);
                b.metas(out);
            }
            _ => {}
        }
    }

    /// Renumbers metavariables `?0, ?1, ...` in order of first occurrence.
    pub fn normalize_metas(&self) -> SimpleType {
        let mut order = Vec::new();
        self.metas(&mut order);
        self.map_metas(&|m| SimpleType::Meta(order.iter().position(|k| *k == m).unwrap() as u32))
    }

    fn map_metas(&self, f: &impl Fn(u32) -> SimpleType) -> SimpleType {
        match self {
            SimpleType::Meta(m) => f(*m),
            SimpleType::Arrow(a, b) => SimpleType::arrow(a.map_metas(f), b.map_metas(f)),
            t => t.clone(),
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Atom(a) => write!(f, "{}", a),
            SimpleType::Bottom => f.write_str("_|_"),
            SimpleType::Meta(m) => write!(f, "?{}", m),
            SimpleType::Arrow(a, b) => {
                if matches!(**a, SimpleType::Arrow(..)) {
                    write!(f, "({}) -> {}", a, b)
                } else {
                    write!(f, "{} -> {}", a, b)
                }
            }
        }
    }
}

impl fmt::Debug for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type syntax error at offset {pos}: {msg}")]
pub struct TypeSyntaxError {
    pub pos: usize,
    pub msg: String,
}

struct TypeParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TypeParser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, TypeSyntaxError> {
        Err(TypeSyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn ty(&mut self) -> Result<SimpleType, TypeSyntaxError> {
        let lhs = self.prefix()?;
        if self.eat("->") {
            Ok(SimpleType::arrow(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn prefix(&mut self) -> Result<SimpleType, TypeSyntaxError> {
        if self.eat("~") {
            return Ok(SimpleType::not(self.prefix()?));
        }
        if self.eat("_|_") {
            return Ok(SimpleType::Bottom);
        }
        if self.eat("(") {
            let t = self.ty()?;
            if !self.eat(")") {
                return self.err("expected `)`");
            }
            return Ok(t);
        }
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphanumeric() || c == '_' || c == '\'') || (i == 0 && !c.is_ascii_alphabetic()))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if len == 0 {
            return self.err("expected a type");
        }
        self.pos += len;
        Ok(SimpleType::Atom(Name::new(&rest[..len])))
    }
}

/// Parses `A -> B -> C` (right-associative), `_|_`, `~A` and parentheses.
pub fn parse_type(src: &str) -> Result<SimpleType, TypeSyntaxError> {
    let mut p = TypeParser { src, pos: 0 };
    let t = p.ty()?;
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// Declarations `x : A` and `a : ~A`. For a μ-variable the map stores `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    pub lambda: BTreeMap<Name, SimpleType>,
    pub mu: BTreeMap<Name, SimpleType>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_lambda(mut self, x: &str, ty: SimpleType) -> Self {
        self.lambda.insert(Name::new(x), ty);
        self
    }

    /// Declares `a : ~ty`.
    pub fn with_mu(mut self, a: &str, ty: SimpleType) -> Self {
        self.mu.insert(Name::new(a), ty);
        self
    }

    /// Parses `x:A, a:~B`. A leading `~` makes the entry a μ-declaration
    /// of the type that follows it.
    pub fn parse(src: &str) -> Result<Context, TypeSyntaxError> {
        let mut ctx = Context::new();
        let mut offset = 0;
        for entry in src.split(',') {
            let here = offset;
            offset += entry.len() + 1;
            if entry.trim().is_empty() {
                continue;
            }
            let Some((name, ty)) = entry.split_once(':') else {
                return Err(TypeSyntaxError {
                    pos: here,
                    msg: format!("expected `name: type`, found {:?}", entry.trim()),
                });
            };
            let name = name.trim();
            let ty = ty.trim();
            let at = |e: TypeSyntaxError| TypeSyntaxError {
                pos: here + e.pos,
                msg: e.msg,
            };
            if let Some(rest) = ty.strip_prefix('~') {
                ctx.mu.insert(Name::new(name), parse_type(rest).map_err(at)?);
            } else {
                ctx.lambda.insert(Name::new(name), parse_type(ty).map_err(at)?);
            }
        }
        Ok(ctx)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.lambda.iter().map(|(x, t)| format!("{}:{}", x, t)).collect();
        parts.extend(self.mu.iter().map(|(a, t)| {
            if matches!(t, SimpleType::Arrow(..)) {
                format!("{}:~({})", a, t)
            } else {
                format!("{}:~{}", a, t)
            }
        }));
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypingRule {
    Axiom,
    ArrowIntro,
    ArrowElim,
    BottomElim,
    BottomIntro,
}

impl TypingRule {
    pub fn label(self) -> &'static str {
        match self {
            TypingRule::Axiom => "ax",
            TypingRule::ArrowIntro => "->i",
            TypingRule::ArrowElim => "->e",
            TypingRule::BottomElim => "_|_e",
            TypingRule::BottomIntro => "_|_i",
        }
    }
}

/// A typing derivation; each node instantiates one rule.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub rule: TypingRule,
    pub ctx: Context,
    pub term: Term,
    pub ty: SimpleType,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    fn render(&self, depth: usize, out: &mut String) {
        for p in &self.premises {
            p.render(depth + 1, out);
        }
        out.push_str(&format!(
            "{}{} ⊢ {} : {}   ({})\n",
            "  ".repeat(depth),
            self.ctx,
            self.term,
            self.ty,
            self.rule.label()
        ));
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch at {path}: cannot unify {left} with {right}")]
    Mismatch {
        path: Path,
        left: SimpleType,
        right: SimpleType,
    },
    #[error("occurs check failed at {path}: {meta} occurs in {ty}")]
    Occurs { path: Path, meta: SimpleType, ty: SimpleType },
    #[error("unbound {kind} variable `{name}` at {path}")]
    Unbound { path: Path, name: Name, kind: &'static str },
    #[error("binder types are not determined: {ty} still contains metavariables")]
    Ambiguous { ty: SimpleType },
}

struct Skeleton {
    rule: TypingRule,
    lambda: Vec<(Name, SimpleType)>,
    mu: Vec<(Name, SimpleType)>,
    term: Term,
    ty: SimpleType,
    premises: Vec<Skeleton>,
}

#[derive(Default)]
struct Unifier {
    metas: Vec<Option<SimpleType>>,
}

impl Unifier {
    fn fresh(&mut self) -> SimpleType {
        self.metas.push(None);
        SimpleType::Meta(self.metas.len() as u32 - 1)
    }

    fn shallow(&self, t: &SimpleType) -> SimpleType {
        let mut t = t.clone();
        while let SimpleType::Meta(m) = t {
            match &self.metas[m as usize] {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    }

    fn resolve(&self, t: &SimpleType) -> SimpleType {
        match self.shallow(t) {
            SimpleType::Arrow(a, b) => SimpleType::arrow(self.resolve(&a), self.resolve(&b)),
            t => t,
        }
    }

    fn occurs(&self, m: u32, t: &SimpleType) -> bool {
        match self.shallow(t) {
            SimpleType::Meta(k) => k == m,
            SimpleType::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &SimpleType, b: &SimpleType, path: &[Selector]) -> Result<(), TypeError> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (SimpleType::Meta(m), SimpleType::Meta(k)) if m == k => Ok(()),
            (SimpleType::Meta(m), t) | (t, SimpleType::Meta(m)) => {
                if self.occurs(*m, t) {
                    return Err(TypeError::Occurs {
                        path: Path(path.to_vec()),
                        meta: SimpleType::Meta(*m),
                        ty: self.resolve(t),
                    });
                }
                self.metas[*m as usize] = Some(t.clone());
                Ok(())
            }
            (SimpleType::Arrow(a1, b1), SimpleType::Arrow(a2, b2)) => {
                self.unify(a1, a2, path)?;
                self.unify(b1, b2, path)
            }
            (SimpleType::Bottom, SimpleType::Bottom) => Ok(()),
            (SimpleType::Atom(x), SimpleType::Atom(y)) if x == y => Ok(()),
            _ => Err(TypeError::Mismatch {
                path: Path(path.to_vec()),
                left: self.resolve(&a),
                right: self.resolve(&b),
            }),
        }
    }
}

struct Inference {
    u: Unifier,
    lambda: Vec<(Name, SimpleType)>,
    mu: Vec<(Name, SimpleType)>,
    path: Vec<Selector>,
}

fn lookup<'a>(env: &'a [(Name, SimpleType)], x: &Name) -> Option<&'a SimpleType> {
    env.iter().rev().find(|(n, _)| n == x).map(|(_, t)| t)
}

impl Inference {
    fn new(ctx: &Context) -> Self {
        Inference {
            u: Unifier::default(),
            lambda: ctx.lambda.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            mu: ctx.mu.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            path: Vec::new(),
        }
    }

    fn node(&self, rule: TypingRule, term: &Term, ty: SimpleType, premises: Vec<Skeleton>) -> Skeleton {
        Skeleton {
            rule,
            lambda: self.lambda.clone(),
            mu: self.mu.clone(),
            term: term.clone(),
            ty,
            premises,
        }
    }

    fn under<T>(&mut self, sel: Selector, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(sel);
        let r = f(self);
        self.path.pop();
        r
    }

    fn infer(&mut self, t: &Term) -> Result<Skeleton, TypeError> {
        match t.node() {
            Node::Var(x) => {
                let ty = lookup(&self.lambda, x).cloned().ok_or_else(|| TypeError::Unbound {
                    path: Path(self.path.clone()),
                    name: x.clone(),
                    kind: "λ",
                })?;
                Ok(self.node(TypingRule::Axiom, t, ty, vec![]))
            }
            Node::Lam(x, m) => {
                let a = self.u.fresh();
                self.lambda.push((x.clone(), a.clone()));
                let body = self.under(Selector::LamBody, |s| s.infer(m));
                self.lambda.pop();
                let body = body?;
                let ty = SimpleType::arrow(a, body.ty.clone());
                Ok(self.node(TypingRule::ArrowIntro, t, ty, vec![body]))
            }
            Node::App(m, n) => {
                let f = self.under(Selector::AppFun, |s| s.infer(m))?;
                let a = self.under(Selector::AppArg, |s| s.infer(n))?;
                let b = self.u.fresh();
                let expected = SimpleType::arrow(a.ty.clone(), b.clone());
                self.u.unify(&f.ty, &expected, &self.path)?;
                Ok(self.node(TypingRule::ArrowElim, t, b, vec![f, a]))
            }
            Node::Mu(a, m) => {
                let ty = self.u.fresh();
                self.mu.push((a.clone(), ty.clone()));
                let body = self.under(Selector::MuBody, |s| {
                    let body = s.infer(m)?;
                    s.u.unify(&body.ty, &SimpleType::Bottom, &s.path)?;
                    Ok(body)
                });
                self.mu.pop();
                Ok(self.node(TypingRule::BottomElim, t, ty, vec![body?]))
            }
            Node::Named(a, m) => {
                let declared = lookup(&self.mu, a).cloned().ok_or_else(|| TypeError::Unbound {
                    path: Path(self.path.clone()),
                    name: a.clone(),
                    kind: "μ",
                })?;
                let body = self.under(Selector::NamedBody, |s| {
                    let body = s.infer(m)?;
                    s.u.unify(&body.ty, &declared, &s.path)?;
                    Ok(body)
                })?;
                Ok(self.node(TypingRule::BottomIntro, t, SimpleType::Bottom, vec![body]))
            }
        }
    }

    fn finish(&self, s: &Skeleton, fill: Option<&SimpleType>) -> Result<Derivation, TypeError> {
        let ground = |t: &SimpleType| -> Result<SimpleType, TypeError> {
            let r = self.u.resolve(t);
            match fill {
                Some(f) => Ok(r.map_metas(&|_| f.clone())),
                None if r.has_meta() => Err(TypeError::Ambiguous { ty: r.normalize_metas() }),
                None => Ok(r),
            }
        };
        let env = |v: &[(Name, SimpleType)]| -> Result<BTreeMap<Name, SimpleType>, TypeError> {
            v.iter().map(|(k, t)| Ok((k.clone(), ground(t)?))).collect()
        };
        Ok(Derivation {
            rule: s.rule,
            ctx: Context {
                lambda: env(&s.lambda)?,
                mu: env(&s.mu)?,
            },
            term: s.term.clone(),
            ty: ground(&s.ty)?,
            premises: s
                .premises
                .iter()
                .map(|p| self.finish(p, fill))
                .collect::<Result<_, _>>()?,
        })
    }
}

/// Builds a derivation of `ctx ⊢ t : ty`. Fails with
/// [`TypeError::Ambiguous`] if some binder type is left undetermined.
pub fn check(ctx: &Context, t: &Term, ty: &SimpleType) -> Result<Derivation, TypeError> {
    derive(ctx, t, ty, None)
}

/// Like [`check`], but instantiates undetermined binder types with `fill`.
/// Any instance of a valid derivation is valid, so this never invents a
/// typing that does not exist.
pub fn check_with_default(ctx: &Context, t: &Term, ty: &SimpleType, fill: &SimpleType) -> Result<Derivation, TypeError> {
    derive(ctx, t, ty, Some(fill))
}

fn derive(ctx: &Context, t: &Term, ty: &SimpleType, fill: Option<&SimpleType>) -> Result<Derivation, TypeError> {
    let mut inf = Inference::new(ctx);
    let sk = inf.infer(t)?;
    inf.u.unify(&sk.ty, ty, &[])?;
    inf.finish(&sk, fill)
}

/// The principal type of `t` in `ctx`, metavariables numbered `?0, ?1, ...`.
pub fn infer(ctx: &Context, t: &Term) -> Result<SimpleType, TypeError> {
    let mut inf = Inference::new(ctx);
    let sk = inf.infer(t)?;
    Ok(inf.u.resolve(&sk.ty).normalize_metas())
}

/// Replays a derivation rule by rule, independently of the inference code.
pub fn verify_derivation(d: &Derivation) -> Result<(), String> {
    let fail = |msg: &str| Err(format!("{} at `{}` ({}): {}", d.rule.label(), d.term, d.ty, msg));
    let prem = |i: usize| &d.premises[i];
    let arity = match d.rule {
        TypingRule::Axiom => 0,
        TypingRule::ArrowElim => 2,
        _ => 1,
    };
    if d.premises.len() != arity {
        return fail("wrong number of premises");
    }
    match (d.rule, d.term.node()) {
        (TypingRule::Axiom, Node::Var(x)) => {
            if d.ctx.lambda.get(x) != Some(&d.ty) {
                return fail("variable not declared with this type");
            }
        }
        (TypingRule::ArrowIntro, Node::Lam(x, m)) => {
            let SimpleType::Arrow(a, b) = &d.ty else { return fail("type is not an arrow") };
            let p = prem(0);
            let mut expected = d.ctx.clone();
            expected.lambda.insert(x.clone(), (**a).clone());
            if p.ctx != expected || !p.term.syn_eq(m) || p.ty != **b {
                return fail("premise does not match");
            }
        }
        (TypingRule::ArrowElim, Node::App(m, n)) => {
            let (f, a) = (prem(0), prem(1));
            if f.ctx != d.ctx || a.ctx != d.ctx || !f.term.syn_eq(m) || !a.term.syn_eq(n) {
                return fail("premise does not match");
            }
            if f.ty != SimpleType::arrow(a.ty.clone(), d.ty.clone()) {
                return fail("function type does not match argument and result");
            }
        }
        (TypingRule::BottomElim, Node::Mu(a, m)) => {
            let p = prem(0);
            let mut expected = d.ctx.clone();
            expected.mu.insert(a.clone(), d.ty.clone());
            if p.ctx != expected || !p.term.syn_eq(m) || p.ty != SimpleType::Bottom {
                return fail("premise does not match");
            }
        }
        (TypingRule::BottomIntro, Node::Named(a, m)) => {
            let p = prem(0);
            let Some(declared) = d.ctx.mu.get(a) else { return fail("μ-variable not declared") };
            if d.ty != SimpleType::Bottom || p.ctx != d.ctx || !p.term.syn_eq(m) || p.ty != *declared {
                return fail("premise does not match");
            }
        }
        _ => return fail("rule does not apply to this term"),
    }
    d.premises.iter().try_for_each(verify_derivation)
}

/// Typability of `t` at `ty` in `ctx`: some derivation exists.
pub fn typable_at(ctx: &Context, t: &Term, ty: &SimpleType) -> bool {
    check_with_default(ctx, t, ty, &SimpleType::Bottom).is_ok()
}

#[derive(Clone, Debug)]
pub struct SubjectReductionReport {
    /// Terms whose whole one-step neighborhood was rechecked.
    pub checked: usize,
    /// Reducts that were rechecked.
    pub reducts: usize,
    /// A reduct that failed to check: (term, redex, reduct).
    pub violation: Option<(Term, RedexRef, Term)>,
    /// False when the budget ran out before the reachable set was closed.
    pub complete: bool,
}

impl SubjectReductionReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, Error)]
pub enum SubjectReductionError {
    #[error("the starting term does not check: {0}")]
    NotTypable(TypeError),
}

/// Rechecks every one-step reduct of every term reachable from `t`, visiting
/// at most `budget` terms breadth-first.
pub fn check_subject_reduction(
    ctx: &Context,
    t: &Term,
    ty: &SimpleType,
    budget: usize,
) -> Result<SubjectReductionReport, SubjectReductionError> {
    let d = check_with_default(ctx, t, ty, &SimpleType::Bottom).map_err(SubjectReductionError::NotTypable)?;
    debug_assert!(verify_derivation(&d).is_ok());
    let mut seen = HashSet::new();
    seen.insert(canonical_key(t));
    let mut queue = VecDeque::from([t.clone()]);
    let mut report = SubjectReductionReport {
        checked: 0,
        reducts: 0,
        violation: None,
        complete: true,
    };
    while let Some(u) = queue.pop_front() {
        if report.checked == budget {
            report.complete = false;
            break;
        }
        report.checked += 1;
        for (r, v) in successors(&u) {
            report.reducts += 1;
            let ok = check_with_default(ctx, &v, ty, &SimpleType::Bottom)
                .map(|d| verify_derivation(&d).is_ok())
                .unwrap_or(false);
            if !ok {
                report.violation = Some((u.clone(), r, v));
                return Ok(report);
            }
            if seen.insert(canonical_key(&v)) {
                queue.push_back(v);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn ty(s: &str) -> SimpleType {
        parse_type(s).unwrap()
    }

    fn rules(d: &Derivation) -> Vec<&'static str> {
        let mut out: Vec<_> = d.premises.iter().flat_map(rules).collect();
        out.push(d.rule.label());
        out
    }

    #[test]
    fn type_syntax() {
        assert_eq!(ty("A -> B -> C"), SimpleType::arrow(ty("A"), ty("B -> C")));
        assert_eq!(ty("~A"), SimpleType::arrow(ty("A"), SimpleType::Bottom));
        assert_eq!(ty("((A->B)->A)->A").to_string(), "((A -> B) -> A) -> A");
        assert!(parse_type("A ->").is_err());
        assert!(parse_type("(A").is_err());
    }

    #[test]
    fn context_syntax() {
        let ctx = Context::parse("x:A, a:~A, f: A -> _|_").unwrap();
        assert_eq!(ctx.lambda[&Name::new("x")], ty("A"));
        assert_eq!(ctx.mu[&Name::new("a")], ty("A"));
        assert_eq!(ctx.lambda[&Name::new("f")], ty("~A"));
        assert!(Context::parse("x A").is_err());
        assert_eq!(Context::parse("").unwrap(), Context::new());
    }

    #[test]
    fn identity_checks() {
        let d = check(&Context::new(), &t(r"\x.x"), &ty("A -> A")).unwrap();
        assert_eq!(rules(&d), ["ax", "->i"]);
        verify_derivation(&d).unwrap();
    }

    #[test]
    fn mu_around_named_variable() {
        let d = check(&Context::new(), &t(r"\y. mu a.[a] y"), &ty("A -> A")).unwrap();
        assert_eq!(rules(&d), ["ax", "_|_i", "_|_e", "->i"]);
        // hand-built: y:A, a:~A ⊢ [a] y : _|_
        let named = &d.premises[0].premises[0];
        assert_eq!(named.ctx, Context::new().with_lambda("y", ty("A")).with_mu("a", ty("A")));
        assert_eq!(named.ty, SimpleType::Bottom);
        verify_derivation(&d).unwrap();
    }

    #[test]
    fn peirce_law() {
        let d = check(
            &Context::new(),
            &t(r"\f. mu a.[a](f \y. mu b.[a] y)"),
            &ty("((A -> B) -> A) -> A"),
        )
        .unwrap();
        verify_derivation(&d).unwrap();
        // the inner μ has the type B of the continuation that is thrown away
        let inner_mu = &d.premises[0].premises[0].premises[0].premises[1].premises[0];
        assert_eq!(inner_mu.rule, TypingRule::BottomElim);
        assert_eq!(inner_mu.ty, ty("B"));
        assert_eq!(inner_mu.premises[0].ctx.mu[&Name::new("a")], ty("A"));
    }

    #[test]
    fn principal_types() {
        assert_eq!(infer(&Context::new(), &t(r"\x.x")).unwrap().to_string(), "?0 -> ?0");
        assert!(matches!(infer(&Context::new(), &t(r"\x.x x")), Err(TypeError::Occurs { .. })));
        let ctx = Context::new().with_lambda("y", ty("A"));
        assert_eq!(infer(&ctx, &t("mu a.[a] y")).unwrap(), ty("A"));
    }

    #[test]
    fn check_errors() {
        let ctx = Context::new();
        assert!(matches!(check(&ctx, &t("x"), &ty("A")), Err(TypeError::Unbound { .. })));
        assert!(matches!(check(&ctx, &t("mu a.[b] x"), &ty("A")), Err(TypeError::Unbound { .. })));
        match check(&ctx, &t(r"\x.x"), &ty("A -> B")) {
            Err(TypeError::Mismatch { path, .. }) => assert!(path.is_root()),
            other => panic!("{:?}", other),
        }
        // the binder type of z is never constrained
        let ctx = Context::new().with_lambda("y", ty("A"));
        assert!(matches!(check(&ctx, &t(r"(\x.y) (\z.z)"), &ty("A")), Err(TypeError::Ambiguous { .. })));
        let d = check_with_default(&ctx, &t(r"(\x.y) (\z.z)"), &ty("A"), &SimpleType::Bottom).unwrap();
        verify_derivation(&d).unwrap();
    }

    #[test]
    fn replay_rejects_tampered_derivations() {
        let mut d = check(&Context::new(), &t(r"\x.x"), &ty("A -> A")).unwrap();
        d.premises[0].ty = ty("B");
        assert!(verify_derivation(&d).is_err());
    }

    #[test]
    fn subject_reduction_examples() {
        let ctx = Context::new().with_lambda("y", ty("A"));
        let r = check_subject_reduction(&ctx, &t(r"(\x.x) y"), &ty("A"), 10).unwrap();
        assert!(r.holds() && r.complete);

        let r = check_subject_reduction(&ctx, &t(r"(mu a.[a](\x.x)) y"), &ty("A"), 10).unwrap();
        assert!(r.holds());
        assert!(typable_at(&ctx, &t(r"mu a.[a]((\x.x) y)"), &ty("A")));

        let ctx = Context::new().with_lambda("x", SimpleType::Bottom).with_lambda("y", SimpleType::Bottom);
        let r = check_subject_reduction(&ctx, &t("(mu a.x)(mu b.y)"), &ty("C"), 10).unwrap();
        assert!(r.holds() && r.complete);
        assert_eq!(r.reducts, 2);
    }

    #[test]
    fn subject_reduction_budget_is_reported() {
        let ctx = Context::new().with_lambda("y", ty("A"));
        let r = check_subject_reduction(&ctx, &t(r"(\x.x) ((\x.x) y)"), &ty("A"), 1).unwrap();
        assert!(r.holds());
        assert!(!r.complete);
        assert!(check_subject_reduction(&ctx, &t("y y"), &ty("A"), 1).is_err());
    }
}
