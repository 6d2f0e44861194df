//! The counterexample claims, checked end to end.

use std::fmt;
use std::thread;

use super::catalog::{catalog, Catalog};
use super::{must_pass_through, single_redex_step, sn_verdict, Answer, SnVerdict};
use crate::reduce::{is_normal, successors};
use crate::subst::{subst_lambda, subst_mu_right};
use crate::term::{alpha_eq, parse, Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClaimOutcome {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for ClaimOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimOutcome::Pass => "PASS",
            ClaimOutcome::Fail => "FAIL",
            ClaimOutcome::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub name: String,
    pub outcome: ClaimOutcome,
    pub detail: String,
}

impl fmt::Display for ClaimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CLAIM {}: {} ({})", self.name, self.outcome, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub claims: Vec<ClaimResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.outcome == ClaimOutcome::Pass)
    }

    pub fn any_fail(&self) -> bool {
        self.claims.iter().any(|c| c.outcome == ClaimOutcome::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.claims {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn claim(name: &str, outcome: ClaimOutcome, detail: impl Into<String>) -> ClaimResult {
    ClaimResult { name: name.to_string(), outcome, detail: detail.into() }
}

fn expect_sn(name: &str, t: &Term, max_nodes: usize) -> ClaimResult {
    match sn_verdict(t, max_nodes) {
        v @ SnVerdict::Sn { .. } => claim(name, ClaimOutcome::Pass, v.to_string()),
        v @ SnVerdict::NonSn { .. } => claim(name, ClaimOutcome::Fail, v.to_string()),
        v @ SnVerdict::Unknown { .. } => claim(name, ClaimOutcome::Unknown, v.to_string()),
    }
}

/// NonSN with a replayable witness; `must_show` (if given) has to occur as a
/// subterm of some term of the witness.
fn expect_non_sn(name: &str, t: &Term, max_nodes: usize, must_show: Option<&Term>) -> ClaimResult {
    match sn_verdict(t, max_nodes) {
        SnVerdict::NonSn { witness, nodes } => {
            if !witness.check() {
                return claim(name, ClaimOutcome::Fail, "witness does not replay");
            }
            let mut detail = format!(
                "NonSN, witness of {} steps repeating after step {}, {nodes} nodes",
                witness.trace.len(),
                witness.repeat_from
            );
            if let Some(s) = must_show {
                match witness.trace.terms.iter().position(|u| u.has_subterm(s)) {
                    Some(i) => detail.push_str(&format!("; term {i} of the witness contains {s}")),
                    None => return claim(name, ClaimOutcome::Fail, format!("witness never contains {s}")),
                }
            }
            claim(name, ClaimOutcome::Pass, detail)
        }
        v @ SnVerdict::Sn { .. } => claim(name, ClaimOutcome::Fail, v.to_string()),
        v @ SnVerdict::Unknown { .. } => claim(name, ClaimOutcome::Unknown, v.to_string()),
    }
}

fn reducts_are(name: &str, t: &Term, expected: &[&str]) -> ClaimResult {
    let got: Vec<Term> = successors(t).into_iter().map(|(_, u)| u).collect();
    let want: Vec<Term> = expected.iter().map(|s| parse(s).unwrap()).collect();
    let same = got.len() == want.len() && want.iter().all(|w| got.iter().any(|g| alpha_eq(g, w)));
    let printed: Vec<String> = got.iter().map(|u| u.to_string()).collect();
    let normal = got.iter().all(is_normal);
    let outcome = if same && normal { ClaimOutcome::Pass } else { ClaimOutcome::Fail };
    claim(name, outcome, format!("reducts [{}], all normal: {normal}", printed.join(", ")))
}

fn link(kind: &str, u: &Term, v: &Term, ok: Answer) -> (bool, String, bool) {
    (ok == Answer::Yes, format!("{u} {kind} {v}: {ok}"), ok == Answer::Unknown)
}

/// `(Mi Mi) ↪ (one (\d.one) delta delta) ↷ ((\y.\d.one) delta delta) ↷ ((\d.one) delta) ↷ one`.
fn chain_claim(name: &str, c: &Catalog, mi: &Term, max_nodes: usize) -> ClaimResult {
    let start = Term::app(mi.clone(), mi.clone());
    let stages: Vec<Term> = [r"one (\d.one) delta delta", r"(\y.\d.one) delta delta", r"(\d.one) delta", "one"]
        .iter()
        .map(|s| c.expand(&parse(s).unwrap()))
        .collect();
    let mut links = vec![link("must pass through", &start, &stages[0], must_pass_through(&start, &stages[0], max_nodes))];
    for w in stages.windows(2) {
        links.push(link("single step", &w[0], &w[1], Answer::from_bool(single_redex_step(&w[0], &w[1]))));
    }
    let failed: Vec<&String> = links.iter().filter(|l| !l.0 && !l.2).map(|l| &l.1).collect();
    if let Some(f) = failed.first() {
        return claim(name, ClaimOutcome::Fail, format!("broken link: {f}"));
    }
    if links.iter().any(|l| l.2) {
        return claim(name, ClaimOutcome::Unknown, "a link is undetermined within the budget");
    }
    claim(name, ClaimOutcome::Pass, format!("{} links verified", links.len()))
}

/// `(mu a.N) Mi` goes through `mu a.[a][a](Mi Mi)` on its way, and so does
/// `(\x.x Mi) (mu a.N)`; both then reach `mu a.[a][a]one`.
fn mu_chain_claim(name: &str, c: &Catalog, mi: &Term, max_nodes: usize) -> ClaimResult {
    let e = |s: &str| {
        let t = parse(s).unwrap();
        let t = subst_lambda(&t, &Name::new("Mi"), mi);
        c.expand(&t)
    };
    let start = Term::app(Term::mu("a", c.n.clone()), mi.clone());
    let s1 = e(r"mu a.[a] ((\z.[a] (z Mi)) Mi)");
    let s2 = e(r"mu a.[a] [a] (Mi Mi)");
    let end = e(r"mu a.[a] [a] one");
    let other = Term::app(e(r"\x.x Mi"), Term::mu("a", c.n.clone()));
    let links = [
        link("single step", &start, &s1, Answer::from_bool(single_redex_step(&start, &s1))),
        link("single step", &s1, &s2, Answer::from_bool(single_redex_step(&s1, &s2))),
        link("must pass through", &s2, &end, must_pass_through(&s2, &end, max_nodes)),
        link("must pass through", &other, &end, must_pass_through(&other, &end, max_nodes)),
    ];
    if let Some(f) = links.iter().find(|l| !l.0 && !l.2) {
        return claim(name, ClaimOutcome::Fail, format!("broken link: {}", f.1));
    }
    if links.iter().any(|l| l.2) {
        return claim(name, ClaimOutcome::Unknown, "a link is undetermined within the budget");
    }
    claim(name, ClaimOutcome::Pass, format!("{} links verified", links.len()))
}

/// Evaluates every claim. Independent claims run on separate threads; the
/// report order is fixed.
pub fn run_claim_suite(max_nodes: usize) -> SuiteReport {
    let c = catalog();
    let dd = Term::app(c.delta.clone(), c.delta.clone());
    let mu_n = Term::mu("a", c.n.clone());
    let app = |a: &Term, b: &Term| Term::app(a.clone(), b.clone());
    let prop44_sn = subst_lambda(&c.mpair, &Name::new("x"), &mu_n);
    let prop44_bad = app(&Term::lam("x", c.mpair.clone()), &mu_n);
    let prop45_sn = subst_mu_right(&c.mprime, &Name::new("b"), &mu_n);
    let prop45_bad = app(&Term::mu("b", c.mprime.clone()), &mu_n);

    type Job<'a> = Box<dyn FnOnce() -> ClaimResult + Send + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| reducts_are("non-confluence (mu a.x) (mu b.y)", &parse("(mu a.x) (mu b.y)").unwrap(), &["mu a.x", "mu b.y"])),
        Box::new(|| reducts_are(r"non-confluence (\z.x) (mu b.y)", &parse(r"(\z.x) (mu b.y)").unwrap(), &["x", "mu b.y"])),
        Box::new(|| expect_non_sn("(M1 M0) not SN", &app(&c.m1, &c.m0), max_nodes, Some(&dd))),
        Box::new(|| expect_non_sn("(M0 M1) not SN", &app(&c.m0, &c.m1), max_nodes, Some(&dd))),
        Box::new(|| expect_sn("(M0 M0) SN", &app(&c.m0, &c.m0), max_nodes)),
        Box::new(|| expect_sn("(M1 M1) SN", &app(&c.m1, &c.m1), max_nodes)),
        Box::new(|| chain_claim("(M0 M0) chain to one", &c, &c.m0, max_nodes)),
        Box::new(|| chain_claim("(M1 M1) chain to one", &c, &c.m1, max_nodes)),
        Box::new(|| mu_chain_claim("(mu a.N) M0 chain", &c, &c.m0, max_nodes)),
        Box::new(|| mu_chain_claim("(mu a.N) M1 chain", &c, &c.m1, max_nodes)),
        Box::new(|| expect_sn("Mpair[x:=mu a.N] SN", &prop44_sn, max_nodes)),
        Box::new(|| expect_non_sn(r"(\x.Mpair) (mu a.N) not SN", &prop44_bad, max_nodes, Some(&dd))),
        Box::new(|| expect_sn("Mprime[b=r mu a.N] SN", &prop45_sn, max_nodes)),
        Box::new(|| expect_non_sn("(mu b.Mprime) (mu a.N) not SN", &prop45_bad, max_nodes, None)),
    ];
    let claims = thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|j| s.spawn(j)).collect();
        handles.into_iter().map(|h| h.join().expect("claim thread")).collect()
    });
    SuiteReport { claims }
}
