//! Finite CCS: actions, terms, one-hole contexts and their concrete syntax.
//!
//! The concrete grammar (see `docs/grammar.md`) is
//!
//! ```text
//! term   ::= sum ( '|' term )?
//! sum    ::= unary ( '+' sum )?
//! unary  ::= '(' name ')' unary | action '.' unary | action | atom
//! atom   ::= '0' | '(' term ')' | '{' term '}' | '[]' | '[·]'
//! action ::= name | "'" name | 'tau'
//! ```
//!
//! Sums and parallel compositions associate to the right. A bare action `a`
//! abbreviates `a.0`.

mod collapse;
mod lts;
mod parser;
mod print;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use crate::encoding::detect_auto_conflict_or_concurrency;
pub use collapse::{collapse, collapse_with, is_collapsed, is_collapsed_with, CollapseOptions};
pub use lts::{canonical, ccs_congruent, ccs_steps};
pub use parser::{parse, parse_context, parse_context_with, parse_with, ParseOptions, SyntaxError};

/// A channel name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Self {
        Name(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Names starting with `#` are reserved for generated barb channels.
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with('#')
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Input(Name),
    Output(Name),
    Tau,
}

impl Action {
    pub fn input(n: impl AsRef<str>) -> Self {
        Action::Input(Name::new(n))
    }

    pub fn output(n: impl AsRef<str>) -> Self {
        Action::Output(Name::new(n))
    }

    pub fn dual(&self) -> Action {
        match self {
            Action::Input(n) => Action::Output(n.clone()),
            Action::Output(n) => Action::Input(n.clone()),
            Action::Tau => Action::Tau,
        }
    }

    pub fn name(&self) -> Option<&Name> {
        match self {
            Action::Input(n) | Action::Output(n) => Some(n),
            Action::Tau => None,
        }
    }

    pub fn rename(&self, from: &Name, to: &Name) -> Action {
        match self {
            Action::Input(n) if n == from => Action::Input(to.clone()),
            Action::Output(n) if n == from => Action::Output(to.clone()),
            other => other.clone(),
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    /// True when `a` is a visible action on channel `name`.
    pub fn mentions(&self, name: &Name) -> bool {
        self.name() == Some(name)
    }

    /// Two visible actions on the same channel with opposite polarity.
    pub fn is_dual_of(&self, other: &Action) -> bool {
        !self.is_tau() && self.dual() == *other
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Input(n) => write!(f, "{n}"),
            Action::Output(n) => write!(f, "'{n}"),
            Action::Tau => f.write_str("tau"),
        }
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Action {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "tau" {
            return Ok(Action::Tau);
        }
        let (out, rest) = match s.strip_prefix('\'') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        if !parser::is_name(rest) {
            return Err(SyntaxError::Unexpected {
                pos: 0,
                found: s.to_string(),
                expected: "an action",
            });
        }
        Ok(if out {
            Action::output(rest)
        } else {
            Action::input(rest)
        })
    }
}

impl Serialize for Action {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Action {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite CCS process. Sums are binary; both summands must be guarded
/// (a prefix or a further sum).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CcsTerm {
    Nil,
    Prefix(Action, Box<CcsTerm>),
    Sum(Box<CcsTerm>, Box<CcsTerm>),
    Par(Box<CcsTerm>, Box<CcsTerm>),
    Restrict(Name, Box<CcsTerm>),
}

impl CcsTerm {
    pub fn prefix(a: Action, p: CcsTerm) -> Self {
        CcsTerm::Prefix(a, Box::new(p))
    }

    pub fn sum(p: CcsTerm, q: CcsTerm) -> Self {
        CcsTerm::Sum(Box::new(p), Box::new(q))
    }

    pub fn par(p: CcsTerm, q: CcsTerm) -> Self {
        CcsTerm::Par(Box::new(p), Box::new(q))
    }

    pub fn restrict(n: impl Into<Name>, p: CcsTerm) -> Self {
        CcsTerm::Restrict(n.into(), Box::new(p))
    }

    /// Guarded terms may appear as summands.
    pub fn is_guarded(&self) -> bool {
        matches!(self, CcsTerm::Prefix(..) | CcsTerm::Sum(..))
    }

    /// The guarded summands of a sum, flattened left to right. A prefix is a
    /// single summand.
    pub fn summands(&self) -> Vec<(&Action, &CcsTerm)> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a CcsTerm, out: &mut Vec<(&'a Action, &'a CcsTerm)>) {
            match t {
                CcsTerm::Prefix(a, p) => out.push((a, p)),
                CcsTerm::Sum(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    /// Rebuilds a right-nested sum from guarded summands; `Nil` when empty.
    pub fn from_summands(mut summands: Vec<(Action, CcsTerm)>) -> CcsTerm {
        let Some((a, p)) = summands.pop() else {
            return CcsTerm::Nil;
        };
        let mut acc = CcsTerm::prefix(a, p);
        while let Some((a, p)) = summands.pop() {
            acc = CcsTerm::sum(CcsTerm::prefix(a, p), acc);
        }
        acc
    }

    /// Channel names occurring outside a matching restriction.
    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            CcsTerm::Nil => {}
            CcsTerm::Prefix(a, p) => {
                if let Some(n) = a.name() {
                    if !bound.contains(n) {
                        out.insert(n.clone());
                    }
                }
                p.collect_free(bound, out);
            }
            CcsTerm::Sum(p, q) | CcsTerm::Par(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            CcsTerm::Restrict(n, p) => {
                bound.push(n.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Replaces free occurrences of `from` by `to`. `to` must not be bound
    /// anywhere in the term.
    pub fn rename(&self, from: &Name, to: &Name) -> CcsTerm {
        match self {
            CcsTerm::Nil => CcsTerm::Nil,
            CcsTerm::Prefix(a, p) => CcsTerm::prefix(a.rename(from, to), p.rename(from, to)),
            CcsTerm::Sum(p, q) => CcsTerm::sum(p.rename(from, to), q.rename(from, to)),
            CcsTerm::Par(p, q) => CcsTerm::par(p.rename(from, to), q.rename(from, to)),
            CcsTerm::Restrict(n, _) if n == from => self.clone(),
            CcsTerm::Restrict(n, p) => CcsTerm::restrict(n.clone(), p.rename(from, to)),
        }
    }

    /// Every channel name in the term, bound or free.
    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            CcsTerm::Prefix(a, _) => {
                if let Some(n) = a.name() {
                    out.insert(n.clone());
                }
            }
            CcsTerm::Restrict(n, _) => {
                out.insert(n.clone());
            }
            _ => {}
        });
        out
    }

    /// Number of prefixes in the term.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if matches!(t, CcsTerm::Prefix(..)) {
                n += 1;
            }
        });
        n
    }

    fn visit(&self, f: &mut impl FnMut(&CcsTerm)) {
        f(self);
        match self {
            CcsTerm::Nil => {}
            CcsTerm::Prefix(_, p) | CcsTerm::Restrict(_, p) => p.visit(f),
            CcsTerm::Sum(p, q) | CcsTerm::Par(p, q) => {
                p.visit(f);
                q.visit(f);
            }
        }
    }
}

impl fmt::Display for CcsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_term(f, self, print::Level::Par)
    }
}

impl fmt::Debug for CcsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for CcsTerm {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Renders a term in the concrete syntax.
pub fn print(t: &CcsTerm) -> String {
    t.to_string()
}

pub fn free_names(t: &CcsTerm) -> BTreeSet<Name> {
    t.free_names()
}

/// A CCS term with exactly one hole.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Context {
    Hole,
    Prefix(Action, Box<Context>),
    /// `C + P`
    SumLeft(Box<Context>, Box<CcsTerm>),
    /// `P + C`
    SumRight(Box<CcsTerm>, Box<Context>),
    /// `C | P`
    ParLeft(Box<Context>, Box<CcsTerm>),
    /// `P | C`
    ParRight(Box<CcsTerm>, Box<Context>),
    Restrict(Name, Box<Context>),
}

impl Context {
    /// `P1 | (P2 | (... | [·]))`
    pub fn parallel_observers(observers: Vec<CcsTerm>) -> Context {
        observers.into_iter().rev().fold(Context::Hole, |acc, p| {
            Context::ParRight(Box::new(p), Box::new(acc))
        })
    }

    pub fn instantiate(&self, t: &CcsTerm) -> CcsTerm {
        match self {
            Context::Hole => t.clone(),
            Context::Prefix(a, c) => CcsTerm::prefix(a.clone(), c.instantiate(t)),
            Context::SumLeft(c, p) => CcsTerm::sum(c.instantiate(t), (**p).clone()),
            Context::SumRight(p, c) => CcsTerm::sum((**p).clone(), c.instantiate(t)),
            Context::ParLeft(c, p) => CcsTerm::par(c.instantiate(t), (**p).clone()),
            Context::ParRight(p, c) => CcsTerm::par((**p).clone(), c.instantiate(t)),
            Context::Restrict(n, c) => CcsTerm::restrict(n.clone(), c.instantiate(t)),
        }
    }

    /// Number of constructors, the hole excluded; used as a size bound.
    pub fn size(&self) -> usize {
        match self {
            Context::Hole => 0,
            Context::Prefix(_, c) | Context::Restrict(_, c) => 1 + c.size(),
            Context::SumLeft(c, p)
            | Context::SumRight(p, c)
            | Context::ParLeft(c, p)
            | Context::ParRight(p, c) => 1 + p.size() + c.size(),
        }
    }

    /// Channel names of the context outside the hole.
    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut c = self;
        loop {
            match c {
                Context::Hole => break,
                Context::Prefix(a, inner) => {
                    out.extend(a.name().cloned());
                    c = inner;
                }
                Context::Restrict(n, inner) => {
                    out.insert(n.clone());
                    c = inner;
                }
                Context::SumLeft(inner, p)
                | Context::SumRight(p, inner)
                | Context::ParLeft(inner, p)
                | Context::ParRight(p, inner) => {
                    out.extend(p.names());
                    c = inner;
                }
            }
        }
        out
    }

    /// A sum context is only well formed when what fills the hole is guarded.
    pub fn accepts(&self, t: &CcsTerm) -> bool {
        match self {
            Context::Hole => true,
            Context::Prefix(_, c) | Context::Restrict(_, c) => c.accepts(t),
            Context::SumLeft(c, _) | Context::SumRight(_, c) => match **c {
                Context::Hole => t.is_guarded(),
                _ => c.accepts(t),
            },
            Context::ParLeft(c, _) | Context::ParRight(_, c) => c.accepts(t),
        }
    }
}

pub fn instantiate(c: &Context, t: &CcsTerm) -> CcsTerm {
    c.instantiate(t)
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_context(f, self, print::Level::Par)
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
