use std::fmt::{self, Write};

use super::{CcsTerm, Context};

/// Binding strength of the surrounding position, weakest first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(super) enum Level {
    Par,
    Sum,
    Unary,
}

fn level_of(t: &CcsTerm) -> Level {
    match t {
        CcsTerm::Par(..) => Level::Par,
        CcsTerm::Sum(..) => Level::Sum,
        _ => Level::Unary,
    }
}

fn level_of_ctx(c: &Context) -> Level {
    match c {
        Context::ParLeft(..) | Context::ParRight(..) => Level::Par,
        Context::SumLeft(..) | Context::SumRight(..) => Level::Sum,
        _ => Level::Unary,
    }
}

pub(super) fn write_term(f: &mut fmt::Formatter<'_>, t: &CcsTerm, at: Level) -> fmt::Result {
    if level_of(t) < at {
        f.write_char('(')?;
        write_term(f, t, Level::Par)?;
        return f.write_char(')');
    }
    match t {
        CcsTerm::Nil => f.write_char('0'),
        CcsTerm::Prefix(a, p) => {
            write!(f, "{a}.")?;
            write_term(f, p, Level::Unary)
        }
        CcsTerm::Restrict(n, p) => {
            write!(f, "({n})")?;
            write_term(f, p, Level::Unary)
        }
        CcsTerm::Sum(p, q) => {
            write_term(f, p, Level::Unary)?;
            f.write_str(" + ")?;
            write_term(f, q, Level::Sum)
        }
        CcsTerm::Par(p, q) => {
            write_term(f, p, Level::Unary)?;
            f.write_str(" | ")?;
            write_par_tail(f, q)
        }
    }
}

pub(super) fn write_context(f: &mut fmt::Formatter<'_>, c: &Context, at: Level) -> fmt::Result {
    if level_of_ctx(c) < at {
        f.write_char('(')?;
        write_context(f, c, Level::Par)?;
        return f.write_char(')');
    }
    match c {
        Context::Hole => f.write_str("[·]"),
        Context::Prefix(a, c) => {
            write!(f, "{a}.")?;
            write_context(f, c, Level::Unary)
        }
        Context::Restrict(n, c) => {
            write!(f, "({n})")?;
            write_context(f, c, Level::Unary)
        }
        Context::SumLeft(c, p) => {
            write_context(f, c, Level::Unary)?;
            f.write_str(" + ")?;
            write_term(f, p, Level::Sum)
        }
        Context::SumRight(p, c) => {
            write_term(f, p, Level::Unary)?;
            f.write_str(" + ")?;
            write_context(f, c, Level::Sum)
        }
        Context::ParLeft(c, p) => {
            write_context(f, c, Level::Unary)?;
            f.write_str(" | ")?;
            write_par_tail(f, p)
        }
        Context::ParRight(p, c) => {
            write_term(f, p, Level::Unary)?;
            f.write_str(" | ")?;
            match **c {
                Context::SumLeft(..) | Context::SumRight(..) => write_context(f, c, Level::Unary),
                _ => write_context(f, c, Level::Par),
            }
        }
    }
}

/// Right operand of `|`: nested parallels stay flat, sums are bracketed
/// so that `(α.P + β.Q) | R` reads unambiguously.
fn write_par_tail(f: &mut fmt::Formatter<'_>, t: &CcsTerm) -> fmt::Result {
    match t {
        CcsTerm::Sum(..) => write_term(f, t, Level::Unary),
        _ => write_term(f, t, Level::Par),
    }
}
