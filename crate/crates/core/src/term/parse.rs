//! Recursive-descent parser for the ASCII term syntax.
//!
//! ```text
//! term   := lam | mu | app
//! lam    := '\' IDENT '.' term
//! mu     := 'mu' IDENT '.' term
//! app    := atom+ [lam | mu]
//! atom   := IDENT | '[' IDENT ']' (atom | lam | mu) | '(' term ')'
//! ```
//!
//! A trailing `\` or `mu` in an application or after a naming extends as far
//! right as possible, so `f \y. y y` reads as `f (\y. y y)`.

use thiserror::Error;

use super::{Name, Namespace, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("offset {pos}: `{name}` is bound as a {bound_as} variable but used as a {used_as} variable")]
    Namespace {
        pos: usize,
        name: String,
        bound_as: &'static str,
        used_as: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Backslash,
    Dot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Mu,
    Ident(String),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            '\\' => Tok::Backslash,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                let word = &src[start..i];
                out.push((start, if word == "mu" { Tok::Mu } else { Tok::Ident(word.to_string()) }));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character {:?}", ch),
                });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    scope: Vec<(Name, Namespace)>,
}

fn ns_word(ns: Namespace) -> &'static str {
    match ns {
        Namespace::Lambda => "λ",
        Namespace::Mu => "μ",
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {}", what))
        }
    }

    fn ident(&mut self) -> Result<(usize, Name), ParseError> {
        match self.toks.get(self.pos) {
            Some((p, Tok::Ident(s))) => {
                let r = (*p, Name::new(s));
                self.pos += 1;
                Ok(r)
            }
            Some((_, Tok::Mu)) => self.err("`mu` is reserved and cannot be a variable name"),
            _ => self.err("expected identifier"),
        }
    }

    /// A use of `name` in namespace `ns` is rejected only when the name is
    /// bound in the other namespace and not in this one.
    fn check_use(&self, pos: usize, name: &Name, ns: Namespace) -> Result<(), ParseError> {
        let same = self.scope.iter().any(|(n, k)| n == name && *k == ns);
        if same {
            return Ok(());
        }
        if let Some((_, other)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return Err(ParseError::Namespace {
                pos,
                name: name.to_string(),
                bound_as: ns_word(*other),
                used_as: ns_word(ns),
            });
        }
        Ok(())
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Backslash) | Some(Tok::Mu) => self.binder(),
            _ => self.app(),
        }
    }

    fn binder(&mut self) -> Result<Term, ParseError> {
        let ns = if self.peek() == Some(&Tok::Backslash) {
            Namespace::Lambda
        } else {
            Namespace::Mu
        };
        self.pos += 1;
        let (_, name) = self.ident()?;
        self.expect(Tok::Dot, "`.` after binder")?;
        self.scope.push((name.clone(), ns));
        let body = self.term();
        self.scope.pop();
        let body = body?;
        Ok(match ns {
            Namespace::Lambda => Term::lam(name, body),
            Namespace::Mu => Term::mu(name, body),
        })
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::LParen) | Some(Tok::LBrack))
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        if !self.starts_atom() {
            return self.err("expected a term");
        }
        let mut t = self.atom()?;
        loop {
            if self.starts_atom() {
                let a = self.atom()?;
                t = Term::app(t, a);
            } else if matches!(self.peek(), Some(Tok::Backslash) | Some(Tok::Mu)) {
                let a = self.binder()?;
                return Ok(Term::app(t, a));
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let (p, x) = self.ident()?;
                self.check_use(p, &x, Namespace::Lambda)?;
                Ok(Term::var(x))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let (p, a) = self.ident()?;
                self.check_use(p, &a, Namespace::Mu)?;
                self.expect(Tok::RBrack, "`]`")?;
                let body = match self.peek() {
                    Some(Tok::Backslash) | Some(Tok::Mu) => self.binder()?,
                    _ if self.starts_atom() => self.atom()?,
                    _ => return self.err("expected a term after naming"),
                };
                Ok(Term::named(a, body))
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Parses the concrete syntax. Application is left-associative; the bodies
/// of `\x.` and `mu a.` extend as far right as possible.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        scope: Vec::new(),
    };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}
