use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use clap::Args;
use rccs_core::syntax::{parse_context_with, ParseOptions};
use rccs_core::{parse, CcsTerm, Context};

/// Terms given inline, with `--expr`, or one per line in `--file`.
#[derive(Args, Debug, Clone, Default)]
pub struct Terms {
    /// Terms in concrete syntax.
    #[arg(value_name = "TERM")]
    pub positional: Vec<String>,
    /// A term in concrete syntax; may be repeated.
    #[arg(long = "expr", value_name = "TERM")]
    pub expr: Vec<String>,
    /// A file with one term per line; blank lines are skipped.
    #[arg(long, value_name = "FILE")]
    pub file: Option<PathBuf>,
}

impl Terms {
    /// Source texts in order: positional, `--expr`, then file lines.
    pub fn texts(&self) -> Result<Vec<String>> {
        let mut out: Vec<String> = self.positional.iter().chain(&self.expr).cloned().collect();
        if let Some(path) = &self.file {
            out.extend(read_lines(path)?);
        }
        Ok(out)
    }

    pub fn parse_all(&self) -> Result<Vec<CcsTerm>> {
        self.texts()?.iter().map(|s| parse_term(s)).collect()
    }

    pub fn exactly<const N: usize>(&self) -> Result<[CcsTerm; N]> {
        let terms = self.parse_all()?;
        let n = terms.len();
        terms.try_into().or_else(|_| {
            bail!(
                "expected {N} term{}, got {n}",
                if N == 1 { "" } else { "s" }
            )
        })
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

pub fn parse_term(src: &str) -> Result<CcsTerm> {
    parse(src).with_context(|| format!("cannot parse `{src}`"))
}

/// One context per line; `#`-names are allowed.
pub fn read_contexts(path: &Path) -> Result<Vec<Context>> {
    let opts = ParseOptions {
        allow_reserved: true,
    };
    read_lines(path)?
        .iter()
        .map(|l| parse_context_with(l, opts).with_context(|| format!("cannot parse context `{l}`")))
        .collect()
}
