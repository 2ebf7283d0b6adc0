//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line
//! with its measured time against a pinned budget.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rccs_core::confstruct::{
    coproduct, is_isomorphic, parallel, prefix, product, ConfStruct, EventIdx, EventSet, Label,
};
use rccs_core::corpus::{generate_pairs, generate_terms, CorpusConfig};
use rccs_core::encoding::{check_operational_correspondence, encode_ccs, forward_trace};
use rccs_core::equivalences::{
    barbed_bf_bisim_structs, build_stratification, check_congruence_closure, context_family,
    discriminates, hhpb, hhpb_oracle, synthesize_context, EquivOptions, StratifiedRelation, Triple,
    Witness,
};
use rccs_core::rccs::{
    backward_steps, congruent, erase, forward_steps, lift, origin, reachable_states, RccsTerm,
};
use rccs_core::syntax::{parse, Action, CcsTerm};

/// Largest combined event count handed to the brute-force oracle here.
const ORACLE_BOUND: usize = 16;

fn corpus_config() -> CorpusConfig {
    CorpusConfig {
        seed: 2024,
        terms: 500,
        pairs: 400,
        max_prefixes: 4,
    }
}

fn t(s: &str) -> CcsTerm {
    parse(s).unwrap()
}

fn enc(s: &str) -> ConfStruct {
    encode_ccs(&t(s))
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn word(c: &ConfStruct, x: &EventSet) -> String {
    let mut ls: Vec<String> = x.iter().map(|e| c.label(e).to_string()).collect();
    ls.sort();
    ls.concat()
}

fn described(c1: &ConfStruct, c2: &ConfStruct, s: &[Triple]) -> Vec<(String, String)> {
    let mut out: Vec<_> = s
        .iter()
        .map(|t| (word(c1, &t.x1), word(c2, &t.x2)))
        .collect();
    out.sort();
    out
}

fn pairs_of(words: &[(&str, &str)]) -> Vec<(String, String)> {
    words
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn stratification_tables() -> Outcome {
    let (c3, c4) = (enc("a.b.0 + a.0"), enc("a.b.0 + a.b.0"));
    let s = build_stratification(&c3, &c4);
    ensure(s.f(2).len() == 2, || {
        format!("F2(C3,C4) has {}", s.f(2).len())
    })?;
    ensure(
        described(&c3, &c4, s.f(2)) == pairs_of(&[("ab", "ab"), ("ab", "ab")]),
        || "F2(C3,C4) pairs".into(),
    )?;
    ensure(StratifiedRelation::pairs(s.f(2)).len() == 2, || {
        "F2(C3,C4) not two distinct pairs".into()
    })?;
    ensure(s.f(1).len() == 2, || {
        format!("F1(C3,C4) has {}", s.f(1).len())
    })?;
    ensure(
        described(&c3, &c4, s.f(1)) == pairs_of(&[("a", "a"), ("a", "a")]),
        || "F1(C3,C4) pairs".into(),
    )?;
    ensure(
        s.f(1).iter().all(|tr| c3.extensions(&tr.x1).len() == 1),
        || "F1(C3,C4) uses the terminal a".into(),
    )?;
    ensure(s.f(0).is_empty(), || "F0(C3,C4) not empty".into())?;

    let (c1, c2) = (enc("a.0 | b.0"), enc("a.b.0 + b.a.0"));
    let s = build_stratification(&c1, &c2);
    ensure(s.f(2).len() == 2, || {
        format!("F2(C1,C2) has {}", s.f(2).len())
    })?;
    ensure(s.f(1).len() == 2, || {
        format!("F1(C1,C2) has {}", s.f(1).len())
    })?;
    ensure(s.f(0) == [Triple::empty()], || {
        "F0(C1,C2) is not {(∅,∅)}".into()
    })?;
    ensure(s.b(2).is_empty(), || "B2(C1,C2) not empty".into())?;
    ensure(
        described(&c1, &c2, s.b(1)) == pairs_of(&[("a", "a"), ("b", "b")]),
        || "B1(C1,C2) pairs".into(),
    )?;
    ensure(
        s.b(1)
            .iter()
            .all(|tr| c2.minimal_events().contains(&tr.x2.iter().next().unwrap())),
        || "B1(C1,C2) matches a non-initial event".into(),
    )?;
    ensure(s.b(0) == s.f(0), || "B0 differs from F0".into())?;
    Ok("F2/F1/F0 and B2/B1/B0 as listed".into())
}

fn figure_shapes() -> Outcome {
    let diamond = ConfStruct::from_labels(
        vec!["a".parse().unwrap(), "b".parse().unwrap()],
        vec![vec![], vec![0], vec![1], vec![0, 1]],
    );
    let two_chains = ConfStruct::from_labels(
        ["a", "b", "b", "a"]
            .iter()
            .map(|l| l.parse().unwrap())
            .collect(),
        vec![vec![], vec![0], vec![0, 1], vec![2], vec![2, 3]],
    );
    let c3 = ConfStruct::from_labels(
        ["a", "b", "a"].iter().map(|l| l.parse().unwrap()).collect(),
        vec![vec![], vec![0], vec![0, 1], vec![2]],
    );
    let c4 = ConfStruct::from_labels(
        ["a", "b", "a", "b"]
            .iter()
            .map(|l| l.parse().unwrap())
            .collect(),
        vec![vec![], vec![0], vec![0, 1], vec![2], vec![2, 3]],
    );
    let checks = [
        ("a.0 | b.0", &diamond, 4),
        ("a.b.0 + b.a.0", &two_chains, 5),
        ("a.0 + a.b.0", &c3, 4),
        ("a.b.0 + a.b.0", &c4, 5),
    ];
    for (src, shape, n) in checks {
        let c = enc(src);
        ensure(c.num_configurations() == n, || {
            format!("⟦{src}⟧ has {} configurations", c.num_configurations())
        })?;
        ensure(is_isomorphic(&c, shape), || {
            format!("⟦{src}⟧ has the wrong shape")
        })?;
    }
    Ok("diamond, two chains, C3, C4".into())
}

fn headline_separations() -> Outcome {
    let (p1, p2) = (t("a.0 | b.0"), t("a.b.0 + b.a.0"));
    ensure(
        rccs_core::equivalences::forward_strong_bisim(&p1, &p2),
        || "not strongly bisimilar".into(),
    )?;
    let v = hhpb(&encode_ccs(&p1), &encode_ccs(&p2));
    ensure(!v.related, || "interleaving judged hhpb".into())?;
    let v = hhpb(&enc("a.0 + a.b.0"), &enc("a.b.0 + a.b.0"));
    ensure(!v.related, || "C3/C4 judged hhpb".into())?;
    let stratum = match &v.witness {
        Witness::Unmatched { stratum, .. } => stratum.clone(),
        w => return Err(format!("unexpected witness {w:?}")),
    };
    ensure(stratum.starts_with('F'), || {
        format!("C3/C4 fails at {stratum}")
    })?;
    Ok(format!(
        "C1/C2 split by hhpb only; C3/C4 fails at {stratum}"
    ))
}

struct PairData {
    c1: ConfStruct,
    c2: ConfStruct,
    hhpb: bool,
}

fn oracle_agreement(pairs: &[(CcsTerm, CcsTerm)], data: &[PairData]) -> Outcome {
    let mut related = 0;
    for ((p, q), d) in pairs.iter().zip(data) {
        let o = hhpb_oracle(&d.c1, &d.c2, ORACLE_BOUND).map_err(|e| format!("{p} / {q}: {e}"))?;
        ensure(o.related == d.hhpb, || {
            format!("{p} / {q}: hhpb {} oracle {}", d.hhpb, o.related)
        })?;
        related += usize::from(o.related);
    }
    Ok(format!("{} pairs, {related} related", pairs.len()))
}

fn strata_match_largest_bisimulation(pairs: &[(CcsTerm, CcsTerm)], data: &[PairData]) -> Outcome {
    let mut checked = 0;
    for ((p, q), d) in pairs.iter().zip(data) {
        let o = hhpb_oracle(&d.c1, &d.c2, ORACLE_BOUND).map_err(|e| e.to_string())?;
        if !o.related {
            continue;
        }
        let s = build_stratification(&d.c1, &d.c2);
        let in_relation: BTreeSet<EventSet> = o.relation.iter().map(|t| t.x1).collect();
        for x1 in d.c1.configurations() {
            ensure(s.matched(x1) == in_relation.contains(x1), || {
                format!("{p} / {q}: {x1:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} configurations"))
}

fn states_of(p: &CcsTerm) -> Result<Vec<RccsTerm>, String> {
    Ok(reachable_states(&lift(p)).map_err(|e| e.to_string())?.nodes)
}

fn operational_correspondence(terms: &[CcsTerm]) -> Outcome {
    let mut states = 0;
    for p in terms {
        for r in states_of(p)? {
            check_operational_correspondence(&r).map_err(|e| format!("{p} at {r}: {e}"))?;
            states += 1;
        }
    }
    Ok(format!("{} terms, {states} states", terms.len()))
}

/// Counts the configurations one event above `x` whose future is that of
/// `target`, using only labels and isomorphism of residuals.
fn address_oracle(c: &ConfStruct, x: &EventSet, action: &Action, target: &RccsTerm) -> usize {
    let future = encode_ccs(&erase(target));
    c.configurations()
        .iter()
        .filter(|y| x.is_subset(y) && y.len() == x.len() + 1)
        .filter(|y| {
            let e = y.difference(x).iter().next().unwrap();
            c.label(e) == action && is_isomorphic(&c.residual(y).unwrap(), &future)
        })
        .count()
}

fn address_soundness(terms: &[CcsTerm]) -> Outcome {
    let mut steps = 0;
    for p in terms {
        let origin_c = encode_ccs(p);
        for r in states_of(p)? {
            let (o, trace) = forward_trace(&r).map_err(|e| e.to_string())?;
            let oc = if o == *p {
                origin_c.clone()
            } else {
                encode_ccs(&o)
            };
            let mut x = EventSet::EMPTY;
            for (label, target) in &trace {
                let n = address_oracle(&oc, &x, &label.action, target);
                ensure(n == 1, || format!("{p} at {r}: {n} candidates for {label}"))?;
                let next = oc
                    .configurations()
                    .iter()
                    .find(|y| {
                        x.is_subset(y)
                            && y.len() == x.len() + 1
                            && oc.label(y.difference(&x).iter().next().unwrap()) == &label.action
                            && is_isomorphic(&oc.residual(y).unwrap(), &encode_ccs(&erase(target)))
                    })
                    .copied()
                    .unwrap();
                x = next;
                steps += 1;
            }
            let future = encode_ccs(&erase(&r));
            ensure(is_isomorphic(&oc.residual(&x).unwrap(), &future), || {
                format!("{p} at {r}: residual")
            })?;
        }
    }
    Ok(format!("{steps} trace steps"))
}

fn maximal_backward_ends(
    r: &RccsTerm,
    out: &mut Vec<RccsTerm>,
    budget: &mut usize,
) -> Result<(), String> {
    *budget = budget.checked_sub(1).ok_or("path budget exhausted")?;
    let back = backward_steps(r).map_err(|e| e.to_string())?;
    if back.is_empty() {
        out.push(r.clone());
    }
    for (_, s) in back {
        maximal_backward_ends(&s, out, budget)?;
    }
    Ok(())
}

fn reversibility(terms: &[CcsTerm]) -> Outcome {
    let mut paths = 0;
    let mut round_trips = 0;
    for p in terms {
        for r in states_of(p)? {
            let o = origin(&r).map_err(|e| e.to_string())?;
            let mut ends = Vec::new();
            maximal_backward_ends(&r, &mut ends, &mut 100_000)?;
            for end in &ends {
                ensure(congruent(end, &lift(&o)), || {
                    format!("{p} at {r}: path ends in {end}")
                })?;
            }
            paths += ends.len();
            for (label, s) in forward_steps(&r).map_err(|e| e.to_string())? {
                let back = backward_steps(&s).map_err(|e| e.to_string())?;
                ensure(
                    back.iter().any(|(l, u)| {
                        l.id == label.id && l.action == label.action && congruent(u, &r)
                    }),
                    || format!("{p}: {label} from {r} cannot be undone"),
                )?;
                round_trips += 1;
            }
        }
    }
    Ok(format!(
        "{paths} maximal backward paths, {round_trips} round trips"
    ))
}

fn congruence_closure(pairs: &[(CcsTerm, CcsTerm)], data: &[PairData]) -> Outcome {
    let opts = EquivOptions::default();
    let (mut synthesised, mut families, mut contexts) = (0, 0, 0);
    for ((p, q), d) in pairs.iter().zip(data) {
        if d.hhpb {
            let family = context_family(p, q, &opts);
            let report = check_congruence_closure(p, q, &family).map_err(|e| e.to_string())?;
            ensure(report.scope == "over context family", || {
                "report scope".into()
            })?;
            if let Some(bad) = report
                .checks
                .iter()
                .find(|c| !(c.hhpb && c.barbed && c.terms))
            {
                return Err(format!("{p} / {q}: {} discriminates", bad.context));
            }
            families += 1;
            contexts += family.len();
        } else {
            let s = synthesize_context(p, q, &opts)
                .map_err(|e| format!("{p} / {q}: {e}"))?
                .ok_or_else(|| format!("{p} / {q}: no context found"))?;
            let c1 = encode_ccs(&s.context.instantiate(p));
            let c2 = encode_ccs(&s.context.instantiate(q));
            ensure(!barbed_bf_bisim_structs(&c1, &c2).related, || {
                format!("{p} / {q}: {} fails", s.context)
            })?;
            ensure(discriminates(&s.context, p, q), || {
                "discriminates disagrees".into()
            })?;
            synthesised += 1;
        }
    }
    Ok(format!(
        "{synthesised} contexts synthesised; {families} related pairs stable over context family ({contexts} contexts)"
    ))
}

/// `a <_x b` from the definition: every configuration inside `x` holding
/// `b` holds `a`, and `a ≠ b`.
fn strictly_below<L: Label>(c: &ConfStruct<L>, x: &EventSet, a: EventIdx, b: EventIdx) -> bool {
    a != b
        && c.configurations()
            .iter()
            .filter(|y| y.is_subset(x) && y.contains(b))
            .all(|y| y.contains(a))
}

fn axioms_and_products(terms: &[CcsTerm]) -> Outcome {
    let mut structures = 0;
    let mut check = |c: &ConfStruct, what: &dyn Fn() -> String| -> Result<(), String> {
        let v = c.validate();
        structures += 1;
        ensure(v.is_empty(), || format!("{}: {v:?}", what()))
    };
    let encs: Vec<ConfStruct> = terms.iter().map(encode_ccs).collect();
    for (p, c) in terms.iter().zip(&encs) {
        check(c, &|| format!("⟦{p}⟧"))?;
        for x in c.configurations() {
            check(&c.residual(x).unwrap(), &|| format!("⟦{p}⟧ after {x:?}"))?;
        }
        check(&prefix(Action::Tau, c), &|| format!("τ.⟦{p}⟧"))?;
        for n in p.free_names() {
            check(&c.restrict_name(&n), &|| format!("({n})⟦{p}⟧"))?;
        }
    }
    for (i, (p, c1)) in terms.iter().zip(&encs).enumerate().take(60) {
        let (q, c2) = (
            &terms[(i * 7 + 3) % terms.len()],
            &encs[(i * 7 + 3) % terms.len()],
        );
        check(&parallel(c1, c2), &|| format!("⟦{p}⟧ | ⟦{q}⟧"))?;
        check(&coproduct(c1, c2), &|| format!("⟦{p}⟧ + ⟦{q}⟧"))?;
    }

    let small: Vec<&ConfStruct> = encs
        .iter()
        .filter(|c| c.num_events() <= 6 && c.num_configurations() <= 8)
        .collect();
    let mut products = 0;
    let mut relations = 0;
    for (i, a) in small.iter().enumerate().take(40) {
        let b = small[(i * 11 + 5) % small.len()];
        let prod = product(a, b);
        let pc = &prod.structure;
        let v = pc.validate();
        ensure(v.is_empty(), || format!("product: {v:?}"))?;
        for x in pc.configurations() {
            let (x1, x2) = (prod.left.apply(x), prod.right.apply(x));
            let members = x.to_vec();
            let n = members.len();
            // Causality shown by one of the projections, closed transitively.
            let mut closure = vec![vec![false; n]; n];
            for (i, &e) in members.iter().enumerate() {
                for (j, &f) in members.iter().enumerate() {
                    let left = matches!((prod.left.get(e), prod.left.get(f)), (Some(a1), Some(b1)) if strictly_below(a, &x1, a1, b1));
                    let right = matches!((prod.right.get(e), prod.right.get(f)), (Some(a2), Some(b2)) if strictly_below(b, &x2, a2, b2));
                    closure[i][j] = left || right;
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        closure[i][j] |= closure[i][k] && closure[k][j];
                    }
                }
            }
            for (i, &e) in members.iter().enumerate() {
                for (j, &f) in members.iter().enumerate() {
                    let whole = strictly_below(pc, x, e, f);
                    ensure(whole == closure[i][j], || {
                        format!("causality of e{e}, e{f} in {x:?}")
                    })?;
                    relations += 1;
                }
            }
        }
        products += 1;
    }
    Ok(format!(
        "{structures} structures valid; {products} products, {relations} event pairs"
    ))
}

fn run(n: usize, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let took = start.elapsed();
    let ok = outcome.is_ok() && took <= budget;
    let detail = match outcome {
        Ok(d) => d,
        Err(e) => e,
    };
    println!(
        "{} criterion {n:>2}: {title}: {detail} [{:.2}s / budget {}s]",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

/// Runs without the libtest harness so the criterion lines are always shown.
fn main() {
    let cfg = corpus_config();
    let pairs = generate_pairs(&cfg);
    let terms = generate_terms(&cfg);
    assert!(pairs.len() >= 300, "corpus has {} pairs", pairs.len());
    assert_eq!(terms.len(), 500);
    let data: Vec<PairData> = pairs
        .iter()
        .map(|(p, q)| {
            let (c1, c2) = (encode_ccs(p), encode_ccs(q));
            let hhpb = hhpb(&c1, &c2).related;
            PairData { c1, c2, hhpb }
        })
        .collect();
    let secs = Duration::from_secs;
    let results = [
        run(1, "stratification tables", secs(1), stratification_tables),
        run(2, "denotation shapes", secs(1), figure_shapes),
        run(3, "headline separations", secs(1), headline_separations),
        run(4, "hhpb agrees with the oracle", secs(300), || {
            oracle_agreement(&pairs, &data)
        }),
        run(
            5,
            "stratification matches the largest bisimulation",
            secs(300),
            || strata_match_largest_bisimulation(&pairs, &data),
        ),
        run(6, "operational correspondence", secs(300), || {
            operational_correspondence(&terms)
        }),
        run(7, "address soundness", secs(300), || {
            address_soundness(&terms)
        }),
        run(8, "reversibility", secs(300), || reversibility(&terms)),
        run(
            9,
            "discriminating contexts (over context family)",
            secs(600),
            || congruence_closure(&pairs, &data),
        ),
        run(10, "axioms and product causality", secs(300), || {
            axioms_and_products(&terms)
        }),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed < results.len() {
        std::process::exit(1);
    }
}
