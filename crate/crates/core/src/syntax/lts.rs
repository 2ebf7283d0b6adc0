//! The plain forward CCS transition relation and a canonical form for
//! structural congruence.

use std::collections::BTreeSet;

use super::{Action, CcsTerm, Name};

/// One-step forward transitions of a CCS term.
pub fn ccs_steps(t: &CcsTerm) -> Vec<(Action, CcsTerm)> {
    match t {
        CcsTerm::Nil => Vec::new(),
        CcsTerm::Prefix(a, p) => vec![(a.clone(), (**p).clone())],
        CcsTerm::Sum(p, q) => {
            let mut out = ccs_steps(p);
            out.extend(ccs_steps(q));
            out
        }
        CcsTerm::Par(p, q) => {
            let left = ccs_steps(p);
            let right = ccs_steps(q);
            let mut out = Vec::new();
            for (a, p2) in &left {
                out.push((a.clone(), CcsTerm::par(p2.clone(), (**q).clone())));
            }
            for (b, q2) in &right {
                out.push((b.clone(), CcsTerm::par((**p).clone(), q2.clone())));
            }
            for (a, p2) in &left {
                for (b, q2) in &right {
                    if a.is_dual_of(b) {
                        out.push((Action::Tau, CcsTerm::par(p2.clone(), q2.clone())));
                    }
                }
            }
            out
        }
        CcsTerm::Restrict(n, p) => ccs_steps(p)
            .into_iter()
            .filter(|(a, _)| !a.mentions(n))
            .map(|(a, p2)| (a, CcsTerm::Restrict(n.clone(), Box::new(p2))))
            .collect(),
    }
}

/// Canonical representative up to associativity and commutativity of `+`
/// and `|`, `P | 0 = P`, renaming of bound names and scope extrusion:
/// every restriction is pushed as far inwards as guardedness allows and
/// dropped when unused. Binders are then named `#b1`, `#b2`, ... after
/// their nesting depth and everything is sorted again.
pub fn canonical(t: &CcsTerm) -> CcsTerm {
    let free = t.free_names();
    rename_by_level(&shape(t), &free, &mut Vec::new())
}

/// Narrowed and sorted, binders keeping their names.
fn shape(t: &CcsTerm) -> CcsTerm {
    match t {
        CcsTerm::Nil => CcsTerm::Nil,
        CcsTerm::Prefix(a, p) => CcsTerm::prefix(a.clone(), shape(p)),
        CcsTerm::Sum(..) => {
            let mut summands: Vec<(Action, CcsTerm)> = t
                .summands()
                .into_iter()
                .map(|(a, p)| (a.clone(), shape(p)))
                .collect();
            summands.sort();
            CcsTerm::from_summands(summands)
        }
        CcsTerm::Par(..) => {
            let mut parts = Vec::new();
            flatten_par(t, &mut parts);
            sorted_par(parts.into_iter().map(shape).collect())
        }
        CcsTerm::Restrict(n, p) => narrow(n, shape(p)),
    }
}

/// Name of the binder at nesting depth `depth` (from 1), avoiding `free`.
fn level_name(depth: usize, free: &BTreeSet<Name>) -> Name {
    (1..)
        .map(|k| Name::new(format!("#b{k}")))
        .filter(|n| !free.contains(n))
        .nth(depth - 1)
        .expect("unbounded")
}

/// Renames every binder after its depth and sorts bottom-up. `env` maps
/// the names in scope to their new names, innermost last.
fn rename_by_level(t: &CcsTerm, free: &BTreeSet<Name>, env: &mut Vec<(Name, Name)>) -> CcsTerm {
    let action = |a: &Action, env: &[(Name, Name)]| match a.name() {
        Some(n) => match env.iter().rev().find(|(old, _)| old == n) {
            Some((old, new)) => a.rename(old, new),
            None => a.clone(),
        },
        None => a.clone(),
    };
    match t {
        CcsTerm::Nil => CcsTerm::Nil,
        CcsTerm::Prefix(a, p) => CcsTerm::prefix(action(a, env), rename_by_level(p, free, env)),
        CcsTerm::Sum(..) => {
            let mut summands: Vec<(Action, CcsTerm)> = t
                .summands()
                .into_iter()
                .map(|(a, p)| (action(a, env), rename_by_level(p, free, env)))
                .collect();
            summands.sort();
            CcsTerm::from_summands(summands)
        }
        CcsTerm::Par(..) => {
            let mut parts = Vec::new();
            flatten_par(t, &mut parts);
            let parts = parts
                .into_iter()
                .map(|p| rename_by_level(p, free, env))
                .collect();
            sorted_par(parts)
        }
        CcsTerm::Restrict(n, p) => {
            let new = level_name(env.len() + 1, free);
            env.push((n.clone(), new.clone()));
            let body = rename_by_level(p, free, env);
            env.pop();
            CcsTerm::Restrict(new, Box::new(body))
        }
    }
}

/// Flattens, drops `0` and sorts already canonical components.
fn sorted_par(parts: Vec<CcsTerm>) -> CcsTerm {
    let mut flat: Vec<CcsTerm> = Vec::new();
    for p in &parts {
        let mut inner = Vec::new();
        flatten_par(p, &mut inner);
        flat.extend(inner.into_iter().filter(|q| **q != CcsTerm::Nil).cloned());
    }
    flat.sort();
    let Some(mut acc) = flat.pop() else {
        return CcsTerm::Nil;
    };
    while let Some(p) = flat.pop() {
        acc = CcsTerm::par(p, acc);
    }
    acc
}

fn bind(n: &Name, body: CcsTerm) -> CcsTerm {
    CcsTerm::Restrict(n.clone(), Box::new(body))
}

/// Places `(n)` over the smallest part of the canonical `body` that
/// contains every free occurrence of `n`.
fn narrow(n: &Name, body: CcsTerm) -> CcsTerm {
    if !body.free_names().contains(n) {
        return body;
    }
    match body {
        CcsTerm::Prefix(a, p) if !a.mentions(n) => CcsTerm::prefix(a, narrow(n, *p)),
        CcsTerm::Sum(..) => {
            let summands: Vec<(Action, CcsTerm)> = body
                .summands()
                .into_iter()
                .map(|(a, p)| (a.clone(), p.clone()))
                .collect();
            let users: Vec<usize> = (0..summands.len())
                .filter(|&i| summands[i].0.mentions(n) || summands[i].1.free_names().contains(n))
                .collect();
            match users.as_slice() {
                [i] if !summands[*i].0.mentions(n) => {
                    let mut summands = summands;
                    let (a, p) = summands[*i].clone();
                    summands[*i] = (a, narrow(n, p));
                    summands.sort();
                    CcsTerm::from_summands(summands)
                }
                _ => bind(n, body),
            }
        }
        CcsTerm::Par(..) => {
            let mut parts = Vec::new();
            flatten_par(&body, &mut parts);
            let (users, others): (Vec<CcsTerm>, Vec<CcsTerm>) = parts
                .into_iter()
                .cloned()
                .partition(|p| p.free_names().contains(n));
            if others.is_empty() {
                return bind(n, body);
            }
            let inner = if let [only] = users.as_slice() {
                narrow(n, only.clone())
            } else {
                bind(n, sorted_par(users))
            };
            let mut all = others;
            all.push(inner);
            sorted_par(all)
        }
        CcsTerm::Restrict(m, p) => {
            let inner = narrow(n, (*p).clone());
            if inner == bind(n, (*p).clone()) {
                bind(n, CcsTerm::Restrict(m, p))
            } else {
                bind(&m, inner)
            }
        }
        other => bind(n, other),
    }
}

fn flatten_par<'a>(t: &'a CcsTerm, out: &mut Vec<&'a CcsTerm>) {
    match t {
        CcsTerm::Par(p, q) => {
            flatten_par(p, out);
            flatten_par(q, out);
        }
        other => out.push(other),
    }
}

/// Structural congruence as decided by [`canonical`].
pub fn ccs_congruent(p: &CcsTerm, q: &CcsTerm) -> bool {
    canonical(p) == canonical(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn t(s: &str) -> CcsTerm {
        parse(s).unwrap()
    }

    #[test]
    fn synchronisation_produces_tau() {
        let steps = ccs_steps(&t("a.0 | 'a.0"));
        assert_eq!(steps.len(), 3);
        assert!(steps
            .iter()
            .any(|(a, p)| a.is_tau() && ccs_congruent(p, &t("0"))));
    }

    #[test]
    fn restriction_blocks_its_channel() {
        let steps = ccs_steps(&t("(a)(a.0 | 'a.0)"));
        assert_eq!(steps.len(), 1);
        assert!(steps[0].0.is_tau());
    }

    #[test]
    fn congruence_is_ac_with_unit() {
        assert!(ccs_congruent(&t("a.0 | b.0"), &t("b.0 | a.0")));
        assert!(ccs_congruent(
            &t("a.0 + (b.0 + c.0)"),
            &t("(c.0 + a.0) + b.0")
        ));
        assert!(ccs_congruent(&t("a.0 | 0"), &t("a.0")));
        assert!(ccs_congruent(&t("(c)a.0"), &t("a.0")));
        assert!(!ccs_congruent(&t("a.b.0"), &t("b.a.0")));
    }

    #[test]
    fn congruence_renames_and_extrudes_binders() {
        assert!(ccs_congruent(&t("(a)'a.0"), &t("(b)'b.0")));
        assert!(ccs_congruent(&t("(c)(b.c.0 + a.0)"), &t("b.(c)c.0 + a.0")));
        assert!(ccs_congruent(&t("(c)(c.0 | a.0)"), &t("a.0 | (c)c.0")));
        assert!(!ccs_congruent(&t("(c)(b.c.0 + c.0)"), &t("b.(c)c.0 + c.0")));
        let p = t("(a)(a.(b)(b.0 | 'a.0) | (a)a.0)");
        assert_eq!(canonical(&canonical(&p)), canonical(&p));
        for src in ["a.(c)(c)(c)(a)(c.0 + b.0)", "(a)(b)('b.0 | ('b.0 + a.0))"] {
            let p = t(src);
            assert_eq!(canonical(&canonical(&p)), canonical(&p), "{src}");
        }
        let p = canonical(&t("(a)(b)('b.0 | ('b.0 + a.0))"));
        assert!(ccs_congruent(&p, &t("(b)('b.0 | (a)('b.0 + a.0))")));
        assert!(!ccs_congruent(&p, &t("(b)('b.0 | (b)('b.0 + b.0))")));
    }
}
