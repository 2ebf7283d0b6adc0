use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use rccs_core::corpus::{generate_pairs, CorpusConfig};
use rccs_core::encoding::{address, detect_auto_conflict_or_concurrency, forward_trace};
use rccs_core::equivalences::{
    barbed_bf_bisim_structs, check_congruence_closure, context_family, forward_strong_bisim, hhpb,
    hhpb_oracle, synthesize_context, Side,
};
use rccs_core::syntax::{collapse_with, is_collapsed_with, CollapseOptions};
use rccs_core::{
    encode_ccs, lift, CcsTerm, ConfStruct, EquivOptions, EquivalenceVerdict, EventSet, RccsTerm,
    Witness,
};

use crate::input::read_contexts;
use crate::script::{apply, parse_script};
use crate::{CheckKind, Cli, Command, Format, RunConfig};

const RELATED: u8 = 0;
const NOT_RELATED: u8 = 1;

impl RunConfig {
    fn collapse(&self) -> CollapseOptions {
        CollapseOptions {
            parallel_rule: !self.no_par_collapse,
        }
    }

    fn options(&self) -> EquivOptions {
        EquivOptions {
            max_events: self.max_events as usize,
            max_context: self.max_context as usize,
            check_preconditions: true,
            collapse: self.collapse(),
        }
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = &cli.config;
    let code = match &cli.command {
        Command::Parse { terms } => {
            for t in terms.parse_all()? {
                print!("{}", dump(&t, cfg.format));
            }
            RELATED
        }
        Command::Encode { terms } => {
            let [p] = terms.exactly::<1>()?;
            preconditions(&p, cfg)?;
            print!("{}", render(&encode_ccs(&p), cfg.format));
            RELATED
        }
        Command::Step { terms, script } => {
            let [p] = terms.exactly::<1>()?;
            step(&p, script, cfg)?
        }
        Command::Check { kind, terms } => {
            let [p1, p2] = terms.exactly::<2>()?;
            let v = decide(*kind, &p1, &p2, cfg)?;
            println!("{}", v.to_json());
            verdict_code(v.related)
        }
        Command::Discriminate { terms } => {
            let [p1, p2] = terms.exactly::<2>()?;
            discriminate(&p1, &p2, cfg)?
        }
        Command::Congruence { terms } => {
            let [p1, p2] = terms.exactly::<2>()?;
            congruence(&p1, &p2, cfg)?
        }
        Command::Batch {
            kind,
            terms,
            seed,
            pairs,
        } => batch(*kind, terms, *seed, *pairs, cfg)?,
    };
    Ok(ExitCode::from(code))
}

fn verdict_code(related: bool) -> u8 {
    if related {
        RELATED
    } else {
        NOT_RELATED
    }
}

/// Collapsed under the configured rules and free of auto-concurrency and
/// auto-conflict; every violation is listed.
fn preconditions(p: &CcsTerm, cfg: &RunConfig) -> Result<()> {
    let mut problems = Vec::new();
    if !is_collapsed_with(p, cfg.collapse()) {
        problems.push(format!(
            "not collapsed; it collapses to {}",
            collapse_with(p, cfg.collapse())
        ));
    }
    problems.extend(
        detect_auto_conflict_or_concurrency(p)
            .iter()
            .map(|c| c.to_string()),
    );
    if problems.is_empty() {
        return Ok(());
    }
    let mut msg = format!("precondition violated for {p}:");
    for line in problems {
        let _ = write!(msg, "\n  {line}");
    }
    bail!(msg)
}

fn dump(t: &CcsTerm, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", ast_json(t)),
        _ => {
            let mut out = String::new();
            ast_tree(t, 0, &mut out);
            out
        }
    }
}

fn ast_tree(t: &CcsTerm, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match t {
        CcsTerm::Nil => {
            let _ = writeln!(out, "{pad}Nil");
        }
        CcsTerm::Prefix(a, p) => {
            let _ = writeln!(out, "{pad}Prefix {a}");
            ast_tree(p, depth + 1, out);
        }
        CcsTerm::Sum(l, r) | CcsTerm::Par(l, r) => {
            let op = if matches!(t, CcsTerm::Sum(..)) {
                "Sum"
            } else {
                "Par"
            };
            let _ = writeln!(out, "{pad}{op}");
            ast_tree(l, depth + 1, out);
            ast_tree(r, depth + 1, out);
        }
        CcsTerm::Restrict(n, p) => {
            let _ = writeln!(out, "{pad}Restrict {n}");
            ast_tree(p, depth + 1, out);
        }
    }
}

fn ast_json(t: &CcsTerm) -> Value {
    match t {
        CcsTerm::Nil => json!("nil"),
        CcsTerm::Prefix(a, p) => json!({"prefix": {"action": a.to_string(), "then": ast_json(p)}}),
        CcsTerm::Sum(l, r) => json!({"sum": [ast_json(l), ast_json(r)]}),
        CcsTerm::Par(l, r) => json!({"par": [ast_json(l), ast_json(r)]}),
        CcsTerm::Restrict(n, p) => json!({"restrict": {"name": n.as_str(), "body": ast_json(p)}}),
    }
}

fn events_line(c: &ConfStruct) -> String {
    let events: Vec<String> = (0..c.num_events())
        .map(|e| format!("e{e}:{}", c.label(e)))
        .collect();
    format!("events: {}", events.join(" "))
}

fn render(c: &ConfStruct, format: Format) -> String {
    match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string(&c.to_json()).expect("structures serialise")
        ),
        Format::Dot => c.to_dot(),
        Format::Text => {
            let mut out = events_line(c);
            out.push('\n');
            let configs: Vec<String> = c
                .configurations()
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            let _ = writeln!(out, "configurations: {}", configs.join(" "));
            for (x, e) in c.covering_edges() {
                let _ = writeln!(out, "{x:?} -{}-> {:?}", c.label(e), x.with(e));
            }
            out
        }
    }
}

fn step(p: &CcsTerm, script: &str, cfg: &RunConfig) -> Result<u8> {
    preconditions(p, cfg)?;
    let commands = parse_script(script)?;
    let denotation = encode_ccs(p);
    let mut state = lift(p);
    let mut rows = vec![state_row(None, &state, &denotation)?];
    for cmd in &commands {
        let (label, next) = apply(&state, cmd)?;
        state = next;
        rows.push(state_row(Some(label.to_string()), &state, &denotation)?);
    }
    match cfg.format {
        Format::Json => println!("{}", Value::Array(rows)),
        _ => {
            println!("{}", events_line(&denotation));
            for (i, row) in rows.iter().enumerate() {
                let str_list = |v: &Value| -> String {
                    let items: Vec<&str> = v
                        .as_array()
                        .into_iter()
                        .flatten()
                        .filter_map(Value::as_str)
                        .collect();
                    items.join(", ")
                };
                match row["step"].as_str() {
                    Some(l) => println!(
                        "state {i} after {l}: {}",
                        row["term"].as_str().unwrap_or_default()
                    ),
                    None => println!("state {i}: {}", row["term"].as_str().unwrap_or_default()),
                }
                println!("  memory: [{}]", str_list(&row["memory"]));
                println!("  address: {{{}}}", str_list(&row["address"]));
            }
        }
    }
    Ok(RELATED)
}

/// The configuration of `⟦p⟧` reached by `state`, via a forward trace
/// from its origin.
fn state_row(step: Option<String>, state: &RccsTerm, denotation: &ConfStruct) -> Result<Value> {
    let (_, trace) = forward_trace(state)?;
    let x = address(denotation, &trace)?;
    let memory: Vec<String> = state
        .memory_entries()
        .iter()
        .map(|(i, a)| format!("{i}:{a}"))
        .collect();
    let current: Vec<String> = x.iter().map(|e| format!("e{e}")).collect();
    Ok(json!({"step": step, "term": state.to_string(), "memory": memory, "address": current}))
}

fn decide(
    kind: CheckKind,
    p1: &CcsTerm,
    p2: &CcsTerm,
    cfg: &RunConfig,
) -> Result<EquivalenceVerdict> {
    if kind == CheckKind::Strong {
        return Ok(if forward_strong_bisim(p1, p2) {
            EquivalenceVerdict::related(Witness::None)
        } else {
            EquivalenceVerdict::unrelated(Witness::None)
        });
    }
    preconditions(p1, cfg)?;
    preconditions(p2, cfg)?;
    let (c1, c2) = (encode_ccs(p1), encode_ccs(p2));
    Ok(match kind {
        CheckKind::Hhpb => hhpb(&c1, &c2),
        CheckKind::Bfbarb => barbed_bf_bisim_structs(&c1, &c2),
        CheckKind::Oracle => {
            let o = hhpb_oracle(&c1, &c2, cfg.max_events as usize)?;
            if o.related {
                EquivalenceVerdict::related(Witness::Relation {
                    triples: o.relation,
                })
            } else {
                EquivalenceVerdict::unrelated(Witness::None)
            }
        }
        CheckKind::Strong => unreachable!("handled above"),
    })
}

fn barb_list(c: &ConfStruct) -> String {
    let barbs: Vec<String> = c
        .barbs(&EventSet::EMPTY)
        .iter()
        .map(ToString::to_string)
        .collect();
    format!("{{{}}}", barbs.join(", "))
}

fn discriminate(p1: &CcsTerm, p2: &CcsTerm, cfg: &RunConfig) -> Result<u8> {
    let Some(s) = synthesize_context(p1, p2, &cfg.options())? else {
        eprintln!(
            "no discriminating context with at most {} observers; try a larger --max-context",
            cfg.max_context
        );
        return Ok(NOT_RELATED);
    };
    let (q1, q2) = (s.context.instantiate(p1), s.context.instantiate(p2));
    let (d1, d2) = (encode_ccs(&q1), encode_ccs(&q2));
    let barbed = barbed_bf_bisim_structs(&d1, &d2).related;
    let source = s.source.map(|(side, x)| {
        let side = match side {
            Side::Left => "left",
            Side::Right => "right",
        };
        (side, format!("{x:?}"))
    });
    match cfg.format {
        Format::Json => {
            let j = json!({
                "context": s.context.to_string(),
                "stratum": s.stratum,
                "source": source.as_ref().map(|(side, x)| json!({"side": side, "configuration": x})),
                "instances": [q1.to_string(), q2.to_string()],
                "barbs": [barb_list(&d1), barb_list(&d2)],
                "barbed_related": barbed,
                "discriminates": !barbed,
            });
            println!("{j}");
        }
        _ => {
            println!("context: {}", s.context);
            if let Some(st) = &s.stratum {
                println!("failing stratum: {st}");
            }
            if let Some((side, x)) = &source {
                println!("read from: {side} configuration {x}");
            }
            println!("C[P1] = {q1}");
            println!("C[P2] = {q2}");
            println!("initial barbs: {} vs {}", barb_list(&d1), barb_list(&d2));
            println!(
                "barbed back-and-forth bisimilar: {}",
                if barbed { "yes" } else { "no" }
            );
            println!(
                "{}",
                if barbed {
                    "not verified"
                } else {
                    "verified: the context discriminates"
                }
            );
        }
    }
    if barbed {
        bail!("synthesised context does not discriminate");
    }
    Ok(RELATED)
}

fn congruence(p1: &CcsTerm, p2: &CcsTerm, cfg: &RunConfig) -> Result<u8> {
    preconditions(p1, cfg)?;
    preconditions(p2, cfg)?;
    let mut family = context_family(p1, p2, &cfg.options());
    if let Some(path) = &cfg.contexts {
        for ctx in read_contexts(path)? {
            if !(ctx.accepts(p1) && ctx.accepts(p2)) {
                bail!("context {ctx} cannot be filled with both terms");
            }
            if !family.contains(&ctx) {
                family.push(ctx);
            }
        }
    }
    let report = check_congruence_closure(p1, p2, &family)?;
    match cfg.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(&report).expect("reports serialise")
        ),
        _ => {
            println!("hhpb: {}, barbed: {}", report.base_hhpb, report.base_barbed);
            for c in &report.checks {
                println!(
                    "{}  hhpb={} barbed={} terms={}",
                    c.context, c.hhpb, c.barbed, c.terms
                );
            }
            println!(
                "{} contexts checked {}: {}",
                report.checks.len(),
                report.scope,
                if report.consistent {
                    "consistent"
                } else {
                    "INCONSISTENT"
                }
            );
        }
    }
    Ok(verdict_code(report.consistent))
}

fn batch(
    kind: CheckKind,
    terms: &crate::input::Terms,
    seed: u64,
    pairs: usize,
    cfg: &RunConfig,
) -> Result<u8> {
    let given = terms.parse_all()?;
    let work: Vec<(CcsTerm, CcsTerm)> = if given.is_empty() {
        generate_pairs(&CorpusConfig {
            seed,
            pairs,
            ..CorpusConfig::default()
        })
    } else {
        let mut out = Vec::new();
        for (i, p) in given.iter().enumerate() {
            for q in &given[i + 1..] {
                out.push((p.clone(), q.clone()));
            }
        }
        out
    };
    let results: Vec<Value> = work
        .par_iter()
        .map(|(p, q)| {
            let mut row = json!({"p1": p.to_string(), "p2": q.to_string()});
            match decide(kind, p, q, cfg) {
                Ok(v) => row["related"] = json!(v.related),
                Err(e) => row["error"] = json!(format!("{e:#}")),
            }
            row
        })
        .collect();
    let related = results
        .iter()
        .filter(|r| r["related"] == json!(true))
        .count();
    let errors = results.iter().filter(|r| r.get("error").is_some()).count();
    for r in &results {
        println!("{r}");
    }
    eprintln!(
        "{} pairs: {related} related, {} not related, {errors} errors",
        results.len(),
        results.len() - related - errors
    );
    Ok(if errors > 0 { 2 } else { RELATED })
}
