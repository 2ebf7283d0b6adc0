//! Seeded generation of small processes and process pairs for property
//! checks and benchmarks.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoding::check_preconditions;
use crate::syntax::{canonical, Action, CcsTerm, Name};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusConfig {
    pub seed: u64,
    /// Number of distinct terms.
    pub terms: usize,
    /// Number of pairs.
    pub pairs: usize,
    pub max_prefixes: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0x5eed,
            terms: 500,
            pairs: 400,
            max_prefixes: 4,
        }
    }
}

const NAMES: [&str; 3] = ["a", "b", "c"];

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn action(&mut self) -> Action {
        if self.rng.gen_ratio(1, 12) {
            return Action::Tau;
        }
        let n = *NAMES.choose(&mut self.rng).expect("non-empty");
        if self.rng.gen_bool(0.5) {
            Action::input(n)
        } else {
            Action::output(n)
        }
    }

    fn split(&mut self, budget: usize) -> (usize, usize) {
        let l = self.rng.gen_range(1..budget);
        (l, budget - l)
    }

    /// A term with exactly `budget` prefixes.
    fn term(&mut self, budget: usize) -> CcsTerm {
        if budget == 0 {
            return CcsTerm::Nil;
        }
        match self.rng.gen_range(0..10) {
            0..=3 => self.guarded(budget),
            4..=7 if budget >= 2 => {
                let (l, r) = self.split(budget);
                CcsTerm::par(self.term(l), self.term(r))
            }
            8 | 9 => {
                let n = *NAMES.choose(&mut self.rng).expect("non-empty");
                CcsTerm::restrict(n, self.term(budget))
            }
            _ => self.guarded(budget),
        }
    }

    fn guarded(&mut self, budget: usize) -> CcsTerm {
        if budget >= 2 && self.rng.gen_ratio(1, 3) {
            let (l, r) = self.split(budget);
            CcsTerm::sum(self.guarded(l), self.guarded(r))
        } else {
            let a = self.action();
            CcsTerm::prefix(a, self.term(budget - 1))
        }
    }

    /// Rewrites `p` up to structural congruence: swaps operands of `+` and
    /// `|` and renames bound names apart.
    fn shuffle(&mut self, p: &CcsTerm, fresh: &mut usize) -> CcsTerm {
        match p {
            CcsTerm::Nil => CcsTerm::Nil,
            CcsTerm::Prefix(a, q) => CcsTerm::prefix(a.clone(), self.shuffle(q, fresh)),
            CcsTerm::Sum(l, r) => {
                let (l, r) = (self.shuffle(l, fresh), self.shuffle(r, fresh));
                if self.rng.gen_bool(0.5) {
                    CcsTerm::sum(r, l)
                } else {
                    CcsTerm::sum(l, r)
                }
            }
            CcsTerm::Par(l, r) => {
                let (l, r) = (self.shuffle(l, fresh), self.shuffle(r, fresh));
                if self.rng.gen_bool(0.5) {
                    CcsTerm::par(r, l)
                } else {
                    CcsTerm::par(l, r)
                }
            }
            CcsTerm::Restrict(n, q) => {
                let body = self.shuffle(q, fresh);
                if self.rng.gen_bool(0.5) {
                    let m = Name::new(format!("r{fresh}"));
                    *fresh += 1;
                    CcsTerm::restrict(m.clone(), body.rename(n, &m))
                } else {
                    CcsTerm::restrict(n.clone(), body)
                }
            }
        }
    }
}

/// `α.P | β.Q` rewritten as `α.(P | β.Q) + β.(α.P | Q)` at the first
/// parallel composition of two prefixes, when there is one.
pub fn interleave(p: &CcsTerm) -> Option<CcsTerm> {
    match p {
        CcsTerm::Par(l, r) => match (&**l, &**r) {
            (CcsTerm::Prefix(a, p1), CcsTerm::Prefix(b, q1)) => Some(CcsTerm::sum(
                CcsTerm::prefix(a.clone(), CcsTerm::par((**p1).clone(), (**r).clone())),
                CcsTerm::prefix(b.clone(), CcsTerm::par((**l).clone(), (**q1).clone())),
            )),
            _ => interleave(l)
                .map(|l2| CcsTerm::par(l2, (**r).clone()))
                .or_else(|| interleave(r).map(|r2| CcsTerm::par((**l).clone(), r2))),
        },
        CcsTerm::Prefix(a, q) => interleave(q).map(|q2| CcsTerm::prefix(a.clone(), q2)),
        CcsTerm::Restrict(n, q) => interleave(q).map(|q2| CcsTerm::restrict(n.clone(), q2)),
        CcsTerm::Sum(l, r) => interleave(l)
            .map(|l2| CcsTerm::sum(l2, (**r).clone()))
            .or_else(|| interleave(r).map(|r2| CcsTerm::sum((**l).clone(), r2))),
        CcsTerm::Nil => None,
    }
}

/// Distinct (up to structural congruence) collapsed, clash-free terms with
/// between one and `max_prefixes` prefixes.
pub fn generate_terms(cfg: &CorpusConfig) -> Vec<CcsTerm> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
    };
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(cfg.terms);
    let mut attempts = 0;
    while out.len() < cfg.terms && attempts < cfg.terms * 200 {
        attempts += 1;
        let n = g.rng.gen_range(1..=cfg.max_prefixes);
        let p = g.term(n);
        if check_preconditions(&p).is_ok() && seen.insert(canonical(&p)) {
            out.push(p);
        }
    }
    out
}

/// Pairs of precondition-satisfying terms. Roughly half are congruent
/// rearrangements of one term, a sixth replace a parallel composition by
/// its interleaving, and the rest are drawn independently.
pub fn generate_pairs(cfg: &CorpusConfig) -> Vec<(CcsTerm, CcsTerm)> {
    let terms = generate_terms(cfg);
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15),
    };
    let mut out = Vec::with_capacity(cfg.pairs);
    let mut fresh = 0;
    let mut attempts = 0;
    while out.len() < cfg.pairs && attempts < cfg.pairs * 50 && !terms.is_empty() {
        attempts += 1;
        let p = terms.choose(&mut g.rng).expect("non-empty").clone();
        let q = match g.rng.gen_range(0..6) {
            0..=2 => g.shuffle(&p, &mut fresh),
            3 => match interleave(&p) {
                Some(q) => q,
                None => continue,
            },
            _ => terms.choose(&mut g.rng).expect("non-empty").clone(),
        };
        if check_preconditions(&q).is_ok() {
            out.push((p, q));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = CorpusConfig {
            terms: 40,
            pairs: 30,
            ..CorpusConfig::default()
        };
        assert_eq!(generate_pairs(&cfg), generate_pairs(&cfg));
        assert_eq!(generate_terms(&cfg).len(), 40);
    }

    #[test]
    fn terms_satisfy_preconditions() {
        let cfg = CorpusConfig {
            terms: 100,
            ..CorpusConfig::default()
        };
        for p in generate_terms(&cfg) {
            assert!(check_preconditions(&p).is_ok(), "{p}");
            assert!(p.size() > 0);
        }
    }

    #[test]
    fn interleaving_of_two_prefixes() {
        let q = interleave(&parse("a.0 | b.0").unwrap()).unwrap();
        assert_eq!(
            canonical(&q),
            canonical(&parse("a.(0 | b.0) + b.(a.0 | 0)").unwrap())
        );
        assert!(interleave(&parse("a.b.0").unwrap()).is_none());
    }

    #[test]
    fn renaming_respects_binders() {
        let p = parse("a.0 | (a)(a.0)").unwrap();
        assert_eq!(
            p.rename(&Name::new("a"), &Name::new("b")).to_string(),
            "b.0 | (a)a.0"
        );
    }
}
