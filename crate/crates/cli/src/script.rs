//! Replay scripts: `fwd a; fwd 2:'b; bwd; bwd 1`.

use anyhow::{bail, Context as _, Result};
use rccs_core::rccs::{backward_steps, forward_steps, EventId};
use rccs_core::{parse, Action, CcsTerm, RccsTerm, TransitionLabel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Fire `action`; when `id` is given it must be the identifier assigned.
    Fwd { id: Option<u32>, action: Action },
    /// Undo event `id`, or the most recent event.
    Bwd { id: Option<u32> },
}

fn action(src: &str) -> Result<Action> {
    match parse(src).with_context(|| format!("bad action `{src}`"))? {
        CcsTerm::Prefix(a, rest) if *rest == CcsTerm::Nil => Ok(a),
        _ => bail!("bad action `{src}`"),
    }
}

fn id(src: &str) -> Result<u32> {
    src.parse()
        .with_context(|| format!("bad event identifier `{src}`"))
}

pub fn parse_script(src: &str) -> Result<Vec<Command>> {
    let mut out = Vec::new();
    for cmd in src.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        let (verb, arg) = match cmd.split_once(char::is_whitespace) {
            Some((v, a)) => (v, Some(a.trim())),
            None => (cmd, None),
        };
        out.push(match (verb, arg) {
            ("fwd", Some(arg)) => match arg.split_once(':') {
                Some((i, a)) => Command::Fwd {
                    id: Some(id(i.trim())?),
                    action: action(a.trim())?,
                },
                None => Command::Fwd {
                    id: None,
                    action: action(arg)?,
                },
            },
            ("fwd", None) => bail!("`fwd` needs an action"),
            ("bwd", None) => Command::Bwd { id: None },
            ("bwd", Some(i)) => Command::Bwd { id: Some(id(i)?) },
            _ => bail!("unknown script command `{cmd}`"),
        });
    }
    Ok(out)
}

/// Applies one command, returning the label taken and the new state.
pub fn apply(r: &RccsTerm, cmd: &Command) -> Result<(TransitionLabel, RccsTerm)> {
    match cmd {
        Command::Fwd { id, action } => {
            let fresh = r.fresh_id();
            if let Some(i) = id {
                if EventId(*i) != fresh {
                    bail!("next event identifier is {fresh}, not {i}");
                }
            }
            forward_steps(r)?
                .into_iter()
                .find(|(l, _)| &l.action == action)
                .with_context(|| format!("no forward transition on {action}"))
        }
        Command::Bwd { id } => {
            let steps = backward_steps(r)?;
            let target = match id {
                Some(i) => EventId(*i),
                None => match r.ids().last() {
                    Some(&i) => i,
                    None => bail!("no backward transition: the memory is empty"),
                },
            };
            steps
                .into_iter()
                .find(|(l, _)| l.id == target)
                .with_context(|| format!("event {target} cannot be undone"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let s = parse_script("fwd a; fwd 2:'b ;bwd; bwd 1; fwd tau;").unwrap();
        assert_eq!(
            s,
            vec![
                Command::Fwd {
                    id: None,
                    action: Action::input("a")
                },
                Command::Fwd {
                    id: Some(2),
                    action: Action::output("b")
                },
                Command::Bwd { id: None },
                Command::Bwd { id: Some(1) },
                Command::Fwd {
                    id: None,
                    action: Action::Tau
                },
            ]
        );
        assert!(parse_script("").unwrap().is_empty());
        assert!(parse_script("jump a").is_err());
        assert!(parse_script("fwd a.b").is_err());
    }
}
