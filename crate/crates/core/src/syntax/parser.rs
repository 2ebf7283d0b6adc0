use thiserror::Error;

use super::{Action, CcsTerm, Context, Name};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unexpected {found:?} at offset {pos}, expected {expected}")]
    Unexpected {
        pos: usize,
        found: String,
        expected: &'static str,
    },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("unguarded summand at offset {pos}: both sides of '+' must be prefixes or sums")]
    UnguardedSum { pos: usize },
    #[error("name {name:?} at offset {pos} is reserved for generated barbs")]
    ReservedName { pos: usize, name: String },
    #[error("expected exactly one hole, found {found}")]
    HoleCount { found: usize },
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept `#`-prefixed names (generated contexts use them).
    pub allow_reserved: bool,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Quote,
    Tau,
    Zero,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Dot,
    Plus,
    Bar,
    Hole,
}

impl Tok {
    fn starts_unary(&self) -> bool {
        matches!(
            self,
            Tok::Name(_)
                | Tok::Quote
                | Tok::Tau
                | Tok::Zero
                | Tok::LParen
                | Tok::LBrace
                | Tok::Hole
        )
    }

    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => n.clone(),
            Tok::Quote => "'".into(),
            Tok::Tau => "tau".into(),
            Tok::Zero => "0".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::LBrace => "{".into(),
            Tok::RBrace => "}".into(),
            Tok::Dot => ".".into(),
            Tok::Plus => "+".into(),
            Tok::Bar => "|".into(),
            Tok::Hole => "[]".into(),
        }
    }
}

pub(super) fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '#' => {}
        _ => return false,
    }
    s != "tau" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                it.next();
                continue;
            }
            '\'' => Tok::Quote,
            '0' => Tok::Zero,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '.' => Tok::Dot,
            '+' => Tok::Plus,
            '|' => Tok::Bar,
            '[' => {
                it.next();
                if matches!(it.peek(), Some((_, '·'))) {
                    it.next();
                }
                match it.peek() {
                    Some((_, ']')) => {}
                    Some(&(p, c)) => {
                        return Err(SyntaxError::Unexpected {
                            pos: p,
                            found: c.to_string(),
                            expected: "']'",
                        })
                    }
                    None => return Err(SyntaxError::UnexpectedEnd { expected: "']'" }),
                }
                Tok::Hole
            }
            c if c.is_ascii_alphabetic() || c == '_' || c == '#' => {
                let mut s = String::new();
                s.push(c);
                it.next();
                while let Some(&(_, c)) = it.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, if s == "tau" { Tok::Tau } else { Tok::Name(s) }));
                continue;
            }
            other => {
                return Err(SyntaxError::Unexpected {
                    pos,
                    found: other.to_string(),
                    expected: "a term",
                })
            }
        };
        it.next();
        out.push((pos, tok));
    }
    Ok(out)
}

/// Parse tree; terms and contexts share it.
#[derive(Debug, Clone)]
enum Tree {
    Nil,
    Hole,
    Prefix(Action, Box<Tree>),
    Sum(Box<Tree>, Box<Tree>),
    Par(Box<Tree>, Box<Tree>),
    Restrict(Name, Box<Tree>),
}

impl Tree {
    fn holes(&self) -> usize {
        match self {
            Tree::Nil => 0,
            Tree::Hole => 1,
            Tree::Prefix(_, t) | Tree::Restrict(_, t) => t.holes(),
            Tree::Sum(p, q) | Tree::Par(p, q) => p.holes() + q.holes(),
        }
    }

    fn into_term(self) -> CcsTerm {
        match self {
            Tree::Nil => CcsTerm::Nil,
            Tree::Hole => unreachable!("hole count checked before conversion"),
            Tree::Prefix(a, t) => CcsTerm::prefix(a, t.into_term()),
            Tree::Sum(p, q) => CcsTerm::sum(p.into_term(), q.into_term()),
            Tree::Par(p, q) => CcsTerm::par(p.into_term(), q.into_term()),
            Tree::Restrict(n, t) => CcsTerm::Restrict(n, Box::new(t.into_term())),
        }
    }

    fn into_context(self) -> Context {
        match self {
            Tree::Hole => Context::Hole,
            Tree::Nil => unreachable!("hole count checked before conversion"),
            Tree::Prefix(a, t) => Context::Prefix(a, Box::new(t.into_context())),
            Tree::Restrict(n, t) => Context::Restrict(n, Box::new(t.into_context())),
            Tree::Sum(p, q) if p.holes() == 1 => {
                Context::SumLeft(Box::new(p.into_context()), Box::new(q.into_term()))
            }
            Tree::Sum(p, q) => {
                Context::SumRight(Box::new(p.into_term()), Box::new(q.into_context()))
            }
            Tree::Par(p, q) if p.holes() == 1 => {
                Context::ParLeft(Box::new(p.into_context()), Box::new(q.into_term()))
            }
            Tree::Par(p, q) => {
                Context::ParRight(Box::new(p.into_term()), Box::new(q.into_context()))
            }
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    opts: ParseOptions,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(usize::MAX)
    }

    fn err(&self, expected: &'static str) -> SyntaxError {
        match self.toks.get(self.pos) {
            Some((pos, t)) => SyntaxError::Unexpected {
                pos: *pos,
                found: t.describe(),
                expected,
            },
            None => SyntaxError::UnexpectedEnd { expected },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn name(&mut self) -> Result<Name, SyntaxError> {
        let pos = self.offset();
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                if n.starts_with('#') && !self.opts.allow_reserved {
                    return Err(SyntaxError::ReservedName { pos, name: n });
                }
                self.pos += 1;
                Ok(Name::new(n))
            }
            _ => Err(self.err("a name")),
        }
    }

    fn term(&mut self) -> Result<Tree, SyntaxError> {
        let left = self.sum()?;
        if self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            let right = self.term()?;
            return Ok(Tree::Par(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn sum(&mut self) -> Result<Tree, SyntaxError> {
        let start = self.offset();
        let left = self.unary()?;
        if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            let right_pos = self.offset();
            let right = self.sum()?;
            if !summand_ok(&left) {
                return Err(SyntaxError::UnguardedSum { pos: start });
            }
            if !summand_ok(&right) {
                return Err(SyntaxError::UnguardedSum { pos: right_pos });
            }
            return Ok(Tree::Sum(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn action(&mut self) -> Result<Action, SyntaxError> {
        match self.peek() {
            Some(Tok::Tau) => {
                self.pos += 1;
                Ok(Action::Tau)
            }
            Some(Tok::Quote) => {
                self.pos += 1;
                Ok(Action::Output(self.name()?))
            }
            _ => Ok(Action::Input(self.name()?)),
        }
    }

    fn unary(&mut self) -> Result<Tree, SyntaxError> {
        match self.peek() {
            Some(Tok::LParen) => {
                let is_restriction = matches!(self.peek_at(1), Some(Tok::Name(_)))
                    && self.peek_at(2) == Some(&Tok::RParen)
                    && self.peek_at(3).is_some_and(Tok::starts_unary);
                self.pos += 1;
                if is_restriction {
                    let n = self.name()?;
                    self.pos += 1;
                    let body = self.unary()?;
                    Ok(Tree::Restrict(n, Box::new(body)))
                } else {
                    let t = self.term()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(t)
                }
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RBrace, "'}'")?;
                Ok(t)
            }
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(Tree::Nil)
            }
            Some(Tok::Hole) => {
                self.pos += 1;
                Ok(Tree::Hole)
            }
            Some(Tok::Name(_) | Tok::Quote | Tok::Tau) => {
                let a = self.action()?;
                if self.peek() == Some(&Tok::Dot) {
                    self.pos += 1;
                    let body = self.unary()?;
                    Ok(Tree::Prefix(a, Box::new(body)))
                } else {
                    Ok(Tree::Prefix(a, Box::new(Tree::Nil)))
                }
            }
            _ => Err(self.err("a term")),
        }
    }
}

/// A summand must be a prefix or a sum. In a context the hole is accepted,
/// the guard being checked again at instantiation.
fn summand_ok(t: &Tree) -> bool {
    matches!(t, Tree::Prefix(..) | Tree::Sum(..) | Tree::Hole)
}

fn parse_tree(src: &str, opts: ParseOptions) -> Result<Tree, SyntaxError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        opts,
    };
    let t = p.term()?;
    if p.pos < p.toks.len() {
        return Err(p.err("end of input"));
    }
    Ok(t)
}

pub fn parse(src: &str) -> Result<CcsTerm, SyntaxError> {
    parse_with(src, ParseOptions::default())
}

pub fn parse_with(src: &str, opts: ParseOptions) -> Result<CcsTerm, SyntaxError> {
    let tree = parse_tree(src, opts)?;
    match tree.holes() {
        0 => Ok(tree.into_term()),
        found => Err(SyntaxError::HoleCount { found }),
    }
}

pub fn parse_context(src: &str) -> Result<Context, SyntaxError> {
    parse_context_with(src, ParseOptions::default())
}

pub fn parse_context_with(src: &str, opts: ParseOptions) -> Result<Context, SyntaxError> {
    let tree = parse_tree(src, opts)?;
    match tree.holes() {
        1 => Ok(tree.into_context()),
        found => Err(SyntaxError::HoleCount { found }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::print;

    fn a(n: &str) -> Action {
        Action::input(n)
    }

    #[test]
    fn parses_parallel_of_prefixes() {
        let got = parse("a.0 | b.0").unwrap();
        let want = CcsTerm::par(
            CcsTerm::prefix(a("a"), CcsTerm::Nil),
            CcsTerm::prefix(a("b"), CcsTerm::Nil),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn parses_nil() {
        assert_eq!(parse("0").unwrap(), CcsTerm::Nil);
    }

    #[test]
    fn parses_guarded_sum() {
        let got = parse("a.b.0 + b.a.0").unwrap();
        let want = CcsTerm::sum(
            CcsTerm::prefix(a("a"), CcsTerm::prefix(a("b"), CcsTerm::Nil)),
            CcsTerm::prefix(a("b"), CcsTerm::prefix(a("a"), CcsTerm::Nil)),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn prints_canonical_forms() {
        assert_eq!(print(&CcsTerm::Nil), "0");
        assert_eq!(print(&parse("a.0|b.0").unwrap()), "a.0 | b.0");
        assert_eq!(
            print(&CcsTerm::restrict(
                "a",
                CcsTerm::prefix(a("a"), CcsTerm::Nil)
            )),
            "(a)a.0"
        );
        assert_eq!(print(&parse("(a){a.0 | 'a.0}").unwrap()), "(a)(a.0 | 'a.0)");
        assert_eq!(print(&parse("c.(a.0 + b.0)").unwrap()), "c.(a.0 + b.0)");
    }

    #[test]
    fn restriction_versus_grouping() {
        assert_eq!(parse("(a)").unwrap(), parse("a.0").unwrap());
        assert_eq!(parse("(a) | b").unwrap(), parse("a.0 | b.0").unwrap());
        assert!(matches!(parse("(a)a").unwrap(), CcsTerm::Restrict(..)));
        assert!(matches!(parse("(a)(b)0").unwrap(), CcsTerm::Restrict(..)));
    }

    #[test]
    fn n_ary_sums_nest_to_the_right() {
        let t = parse("a + b + c").unwrap();
        match t {
            CcsTerm::Sum(l, r) => {
                assert!(matches!(*l, CcsTerm::Prefix(..)));
                assert!(matches!(*r, CcsTerm::Sum(..)));
            }
            _ => panic!("expected a sum"),
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            parse("a.0 +"),
            Err(SyntaxError::UnexpectedEnd { .. })
        ));
        assert!(matches!(
            parse("0 + a.0"),
            Err(SyntaxError::UnguardedSum { .. })
        ));
        assert!(matches!(
            parse("a.0 + (b.0 | c.0)"),
            Err(SyntaxError::UnguardedSum { .. })
        ));
        assert!(matches!(
            parse("a.0 )"),
            Err(SyntaxError::Unexpected { .. })
        ));
        assert!(matches!(
            parse("#c0.0"),
            Err(SyntaxError::ReservedName { .. })
        ));
        assert!(matches!(
            parse("[] | a"),
            Err(SyntaxError::HoleCount { found: 1 })
        ));
        assert!(matches!(
            parse_context("a | b"),
            Err(SyntaxError::HoleCount { found: 0 })
        ));
        assert!(parse("a.0 ? b").is_err());
    }

    #[test]
    fn reserved_names_are_opt_in() {
        let opts = ParseOptions {
            allow_reserved: true,
        };
        assert!(parse_with("#c0.0 + 'a", opts).is_ok());
    }

    #[test]
    fn contexts_round_trip() {
        for src in [
            "[·]",
            "a.[·]",
            "[·] | b.0",
            "b.0 | [·]",
            "(a)[·]",
            "[·] + b.0",
            "a.0 + [·]",
        ] {
            let c = parse_context(src).unwrap();
            assert_eq!(parse_context(&c.to_string()).unwrap(), c, "{src}");
        }
    }
}
