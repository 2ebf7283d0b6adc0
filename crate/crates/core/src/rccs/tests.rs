use super::*;
use crate::syntax::{ccs_congruent, ccs_steps, parse};

fn t(s: &str) -> CcsTerm {
    parse(s).unwrap()
}

fn act(s: &str) -> Action {
    s.parse().unwrap()
}

fn past(i: u32, a: &str, q: &str) -> MemoryEntry {
    MemoryEntry::Past {
        id: EventId(i),
        action: act(a),
        discarded: t(q),
    }
}

fn mem(entries: Vec<MemoryEntry>) -> Memory {
    // written top first
    Memory(entries.into_iter().rev().collect())
}

fn fire(r: &RccsTerm, a: &str) -> RccsTerm {
    forward_steps(r)
        .unwrap()
        .into_iter()
        .find(|(l, _)| l.action == act(a))
        .unwrap_or_else(|| panic!("{r} cannot fire {a}"))
        .1
}

#[test]
fn lift_and_erase() {
    assert_eq!(
        lift(&t("a.0")),
        RccsTerm::Monitored(Memory::empty(), t("a.0"))
    );
    assert_eq!(erase(&lift(&t("a.0 | b.0"))), t("a.0 | b.0"));
    let r = RccsTerm::Monitored(mem(vec![past(1, "a", "0")]), t("b.0"));
    assert_eq!(erase(&r), t("b.0"));
    let r = RccsTerm::restrict(
        "a",
        RccsTerm::Monitored(mem(vec![past(1, "b", "0")]), t("a.0")),
    );
    assert_eq!(erase(&r), t("(a)a.0"));
}

#[test]
fn normal_form_distributes_and_hoists() {
    let m = mem(vec![past(1, "c", "0")]);
    let r = normalize(&RccsTerm::Monitored(m.clone(), t("a.0 | b.0")));
    let forked = m.clone().push(MemoryEntry::Fork);
    assert_eq!(
        r,
        RccsTerm::par(
            RccsTerm::Monitored(forked.clone(), t("a.0")),
            RccsTerm::Monitored(forked, t("b.0"))
        )
    );
    let r = normalize(&RccsTerm::Monitored(m.clone(), t("(a)a.0")));
    assert_eq!(r, RccsTerm::restrict("a", RccsTerm::Monitored(m, t("a.0"))));
    assert_eq!(lift(&t("a.0")), normalize(&lift(&t("a.0"))));
}

#[test]
fn normal_form_renames_identifiers() {
    let a = RccsTerm::Monitored(mem(vec![past(7, "a", "0")]), t("0"));
    let b = RccsTerm::Monitored(mem(vec![past(1, "a", "0")]), t("0"));
    assert!(congruent(&a, &b));
}

#[test]
fn forward_on_a_sum_records_the_other_branch() {
    let steps = forward_steps(&lift(&t("a.c.0 + b.d.0"))).unwrap();
    assert_eq!(steps.len(), 2);
    let (l, s) = &steps[0];
    assert_eq!(l.to_string(), "1:a");
    assert_eq!(
        *s,
        RccsTerm::Monitored(mem(vec![past(1, "a", "b.d.0")]), t("c.0"))
    );
    assert_eq!(
        steps[1].1,
        RccsTerm::Monitored(mem(vec![past(1, "b", "a.c.0")]), t("d.0"))
    );
}

#[test]
fn synchronisation_and_restriction() {
    let steps = forward_steps(&lift(&t("a.0 | 'a.0"))).unwrap();
    assert_eq!(steps.len(), 3);
    assert!(steps
        .iter()
        .any(|(l, _)| l.action.is_tau() && l.id == EventId(1)));
    assert!(forward_steps(&lift(&t("(a)a.0"))).unwrap().is_empty());
    let only = forward_steps(&lift(&t("(a)(a.0 | 'a.0)"))).unwrap();
    assert_eq!(only.len(), 1);
    assert!(only[0].0.action.is_tau());
}

#[test]
fn backward_restores_the_sum() {
    let r = RccsTerm::Monitored(mem(vec![past(1, "a", "b.0")]), t("c.0"));
    let steps = backward_steps(&r).unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].0.to_string(), "1:a-");
    assert_eq!(steps[0].1, lift(&t("a.c.0 + b.0")));
    assert!(backward_steps(&lift(&t("a.0"))).unwrap().is_empty());
}

#[test]
fn half_a_synchronisation_cannot_backtrack_alone() {
    let r = lift(&t("a.0 | 'a.0"));
    let tau = forward_steps(&r)
        .unwrap()
        .into_iter()
        .find(|(l, _)| l.action.is_tau())
        .unwrap()
        .1;
    let back = backward_steps(&tau).unwrap();
    assert_eq!(back.len(), 1);
    assert!(back[0].0.action.is_tau());
    assert_eq!(back[0].1, r);
}

#[test]
fn coherence() {
    let left = RccsTerm::Monitored(
        Memory(vec![past(1, "a", "b.0"), MemoryEntry::Fork]),
        t("c.0"),
    );
    let right = RccsTerm::Monitored(mem(vec![past(2, "d", "e.0")]), t("f.0"));
    let broken = RccsTerm::par(left, right);
    assert!(!is_coherent(&broken));
    assert!(matches!(
        forward_steps(&broken),
        Err(RccsError::IncoherentTerm(_))
    ));
    assert!(is_coherent(&lift(&t("a.0"))));
    for (_, s) in forward_steps(&lift(&t("a.b.0 | 'a.0"))).unwrap() {
        assert!(is_coherent(&s));
    }
}

#[test]
fn origins() {
    let r = RccsTerm::Monitored(mem(vec![past(1, "a", "0")]), t("b.0"));
    assert_eq!(origin(&r).unwrap(), t("a.b.0"));
    assert_eq!(origin(&lift(&t("a.0 + b.0"))).unwrap(), t("a.0 + b.0"));
    let p = t("a.0 | b.0");
    let both = fire(&fire(&lift(&p), "a"), "b");
    assert!(ccs_congruent(&origin(&both).unwrap(), &p));
}

#[test]
fn restriction_below_a_memory_is_renamed_apart() {
    let p = t("a.(a)(a.0 | 'a.0)");
    let s = fire(&lift(&p), "a");
    assert!(s.to_string().starts_with("(a1)"), "{s}");
    let s = fire(&s, "tau");
    assert!(ccs_congruent(&origin(&s).unwrap(), &p));
}

#[test]
fn restriction_keeps_its_scope_over_discarded_branches() {
    let p = t("(c)(b.0 + 'c.0)");
    let s = fire(&lift(&p), "b");
    let back = backward_steps(&s).unwrap();
    assert_eq!(back.len(), 1);
    assert!(congruent(&back[0].1, &lift(&p)));
    assert!(ccs_congruent(&origin(&s).unwrap(), &p));
}

#[test]
fn barbs_follow_forward_steps() {
    assert!(barb(&lift(&t("a.0")), &act("a")).unwrap());
    assert!(!barb(&lift(&t("(a)a.0")), &act("a")).unwrap());
    let r = RccsTerm::Monitored(mem(vec![past(1, "a", "0")]), t("b.0"));
    assert!(barb(&r, &act("b")).unwrap());
    assert!(!barb(&r, &act("a")).unwrap());
}

#[test]
fn state_graphs() {
    let g = reachable_states(&lift(&t("0"))).unwrap();
    assert_eq!((g.len(), g.edges.len()), (1, 0));
    let g = reachable_states(&lift(&t("a.0"))).unwrap();
    assert_eq!((g.len(), g.forward_edges(), g.backward_edges()), (2, 1, 1));
    let g = reachable_states(&lift(&t("a.0 | b.0"))).unwrap();
    assert_eq!(g.len(), 4);
    let dot = g.to_dot();
    assert!(dot.contains("1:a\"") && dot.contains("1:a-\""));
}

#[test]
fn erasure_commutes_with_forward_steps() {
    for src in ["a.b.0 + b.a.0", "(a)(a.b.0 | 'a.0)", "a.0 | 'a.c.0 | a.0"] {
        let g = reachable_states(&lift(&t(src))).unwrap();
        for e in &g.edges {
            if e.label.direction != Direction::Forward {
                continue;
            }
            let before = erase(&g.nodes[e.from]);
            let after = erase(&g.nodes[e.to]);
            assert!(ccs_steps(&before)
                .iter()
                .any(|(a, q)| *a == e.label.action && ccs_congruent(q, &after)));
        }
    }
}
