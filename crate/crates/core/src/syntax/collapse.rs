use super::{Action, CcsTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollapseOptions {
    /// Apply `α.P | α.Q ↦ α.P` when both continuations collapse to the same
    /// term. This drops a parallel component, so it is not
    /// behaviour-preserving; it can be switched off.
    pub parallel_rule: bool,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        CollapseOptions {
            parallel_rule: true,
        }
    }
}

/// Merges syntactically duplicated branches, bottom-up.
pub fn collapse(t: &CcsTerm) -> CcsTerm {
    collapse_with(t, CollapseOptions::default())
}

pub fn collapse_with(t: &CcsTerm, opts: CollapseOptions) -> CcsTerm {
    match t {
        CcsTerm::Nil => CcsTerm::Nil,
        CcsTerm::Prefix(a, p) => CcsTerm::prefix(a.clone(), collapse_with(p, opts)),
        CcsTerm::Restrict(n, p) => CcsTerm::Restrict(n.clone(), Box::new(collapse_with(p, opts))),
        CcsTerm::Sum(p, q) => {
            let (p, q) = (collapse_with(p, opts), collapse_with(q, opts));
            let merged = CcsTerm::sum(p, q);
            let summands = merged.summands();
            let mut distinct: Vec<(Action, CcsTerm)> = Vec::with_capacity(summands.len());
            for (a, c) in summands {
                if !distinct.iter().any(|(b, d)| b == a && d == c) {
                    distinct.push((a.clone(), c.clone()));
                }
            }
            if distinct.len() == merged.summands().len() {
                merged
            } else {
                CcsTerm::from_summands(distinct)
            }
        }
        CcsTerm::Par(p, q) => {
            let (p, q) = (collapse_with(p, opts), collapse_with(q, opts));
            if opts.parallel_rule {
                merge_twins(p, q, CcsTerm::par)
            } else {
                CcsTerm::par(p, q)
            }
        }
    }
}

/// `α.P | α.P ↦ α.P` on already collapsed operands.
fn merge_twins(p: CcsTerm, q: CcsTerm, rebuild: fn(CcsTerm, CcsTerm) -> CcsTerm) -> CcsTerm {
    match (&p, &q) {
        (CcsTerm::Prefix(a, pc), CcsTerm::Prefix(b, qc)) if a == b && pc == qc => p,
        _ => rebuild(p, q),
    }
}

pub fn is_collapsed(t: &CcsTerm) -> bool {
    is_collapsed_with(t, CollapseOptions::default())
}

pub fn is_collapsed_with(t: &CcsTerm, opts: CollapseOptions) -> bool {
    collapse_with(t, opts) == *t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn t(s: &str) -> CcsTerm {
        parse(s).unwrap()
    }

    #[test]
    fn duplicated_branches_merge() {
        assert_eq!(collapse(&t("a.b.0 + a.b.0")), t("a.b.0"));
        assert_eq!(collapse(&t("0")), t("0"));
        assert_eq!(collapse(&t("a.b.0 + b.a.0")), t("a.b.0 + b.a.0"));
        assert_eq!(collapse(&t("a.(b.0 + b.0) + a.b.0")), t("a.b.0"));
        assert_eq!(collapse(&t("(a.0 + b.0) + a.0")), t("a.0 + b.0"));
        assert!(is_collapsed(&t("(a.0 + b.0) + c.0")));
    }

    #[test]
    fn collapsed_predicate() {
        assert!(!is_collapsed(&t("a.b.0 + a.b.0")));
        assert!(is_collapsed(&t("a.0 | b.0")));
        assert!(is_collapsed(&t("0")));
    }

    #[test]
    fn parallel_rule_is_switchable() {
        assert_eq!(collapse(&t("a.0 | a.0")), t("a.0"));
        let off = CollapseOptions {
            parallel_rule: false,
        };
        assert_eq!(collapse_with(&t("a.0 | a.0"), off), t("a.0 | a.0"));
        assert!(is_collapsed_with(&t("a.0 | a.0"), off));
    }

    #[test]
    fn collapse_is_idempotent_on_nested_redexes() {
        let once = collapse(&t("(a.0 | a.0) | a.0"));
        assert_eq!(once, t("a.0"));
        assert_eq!(collapse(&once), once);
    }
}
