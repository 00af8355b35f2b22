//! Line-oriented text format for a DES.
//!
//! ```text
//! # comment
//! des <name>
//! events: <tok> ...
//! unobservable: <tok> ...
//! states: <tok> ...
//! initial: <tok> ...
//! secret: <tok> ...
//! nonsecret: <tok> ...
//! marked: <tok> ...
//! trans:
//! <src> <event> <dst>
//! ```
//!
//! A token starting with `#` begins a comment that runs to the end of the
//! line. [`serialize`] writes sections in the order above with sorted tokens
//! and omits `unobservable:` and `marked:` when they are empty.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::automaton::{valid_token, Automaton, Des};
use crate::error::{Error, Result};

const SECTIONS: [&str; 7] = [
    "events",
    "unobservable",
    "states",
    "initial",
    "secret",
    "nonsecret",
    "marked",
];

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace()
        .take_while(|t| !t.starts_with('#'))
        .collect()
}

pub fn parse(text: &str) -> Result<Des> {
    let mut name: Option<String> = None;
    let mut sections: HashMap<&'static str, (usize, Vec<String>)> = HashMap::new();
    let mut trans: Vec<(usize, [String; 3])> = Vec::new();
    let mut in_trans = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(&head) = toks.first() else {
            continue;
        };
        if in_trans {
            match toks.as_slice() {
                [s, e, d] => trans.push((line, [s.to_string(), e.to_string(), d.to_string()])),
                _ => {
                    return Err(syntax(
                        line,
                        format!("expected `<src> <event> <dst>`, found {} tokens", toks.len()),
                    ))
                }
            }
            continue;
        }
        if name.is_none() {
            match toks.as_slice() {
                ["des", n] => {
                    name = Some(n.to_string());
                    continue;
                }
                _ => return Err(syntax(line, "expected `des <name>`")),
            }
        }
        let Some(key) = head.strip_suffix(':') else {
            return Err(syntax(line, format!("expected a section header, found `{head}`")));
        };
        if key == "trans" {
            if toks.len() > 1 {
                return Err(syntax(line, "transitions start on the line after `trans:`"));
            }
            in_trans = true;
            continue;
        }
        let Some(&key) = SECTIONS.iter().find(|&&s| s == key) else {
            return Err(syntax(line, format!("unknown section `{key}`")));
        };
        if sections.contains_key(key) {
            return Err(syntax(line, format!("section `{key}` given twice")));
        }
        let values = toks[1..].iter().map(|t| t.to_string()).collect();
        sections.insert(key, (line, values));
    }
    let Some(name) = name else {
        return Err(syntax(text.lines().count().max(1), "missing `des <name>` header"));
    };

    let take = |key: &str| sections.get(key).cloned().unwrap_or((0, Vec::new()));
    let mut a = Automaton::new();

    let (line, events) = take("events");
    let (uline, unobservable) = take("unobservable");
    let hidden: BTreeSet<&String> = unobservable.iter().collect();
    for e in &unobservable {
        if !events.contains(e) {
            return Err(syntax(uline, format!("unobservable event `{e}` is not declared")));
        }
    }
    for e in &events {
        a.add_event(e.as_str(), !hidden.contains(e))
            .map_err(|_| syntax(line, format!("duplicate event `{e}`")))?;
    }
    let (line, states) = take("states");
    for s in &states {
        a.add_state(s.as_str())
            .map_err(|_| syntax(line, format!("duplicate state `{s}`")))?;
    }
    let mut d_sets: Vec<Vec<usize>> = Vec::new();
    for key in ["initial", "secret", "nonsecret", "marked"] {
        let (line, names) = take(key);
        let mut ids = Vec::new();
        for s in &names {
            let id = a
                .state_id(s)
                .ok_or_else(|| syntax(line, format!("unknown state `{s}` in `{key}`")))?;
            ids.push(id);
        }
        d_sets.push(ids);
    }
    for (line, [s, e, t]) in &trans {
        let src = a
            .state_id(s)
            .ok_or_else(|| syntax(*line, format!("unknown state `{s}`")))?;
        let ev = a
            .event_id(e)
            .ok_or_else(|| syntax(*line, format!("unknown event `{e}`")))?;
        let dst = a
            .state_id(t)
            .ok_or_else(|| syntax(*line, format!("unknown state `{t}`")))?;
        if !a.add_transition(src, ev, dst) {
            return Err(syntax(*line, format!("duplicate transition `{s} {e} {t}`")));
        }
    }
    for &q in &d_sets[0] {
        a.set_initial(q);
    }
    for &q in &d_sets[3] {
        a.set_marked(q);
    }
    let mut d = Des::new(name, a);
    d.secret = d_sets[1].iter().copied().collect();
    d.nonsecret = d_sets[2].iter().copied().collect();
    d.ensure_valid()?;
    Ok(d)
}

fn section(out: &mut String, key: &str, mut names: Vec<&str>) {
    names.sort_unstable();
    out.push_str(key);
    out.push(':');
    for n in names {
        out.push(' ');
        out.push_str(n);
    }
    out.push('\n');
}

pub fn serialize(d: &Des) -> String {
    let a = &d.automaton;
    let state_names = |ids: &mut dyn Iterator<Item = usize>| -> Vec<&str> {
        ids.map(|q| a.state_name(q)).collect()
    };
    let name = if valid_token(&d.name) {
        d.name.clone()
    } else if d.name.trim().is_empty() {
        "des".to_string()
    } else {
        d.name.split_whitespace().collect::<Vec<_>>().join("_")
    };
    let mut out = String::new();
    let _ = writeln!(out, "des {name}");
    section(
        &mut out,
        "events",
        a.events().iter().map(|e| e.name.as_str()).collect(),
    );
    let hidden: Vec<&str> = a
        .events()
        .iter()
        .filter(|e| !e.observable)
        .map(|e| e.name.as_str())
        .collect();
    if !hidden.is_empty() {
        section(&mut out, "unobservable", hidden);
    }
    section(&mut out, "states", a.state_names().iter().map(String::as_str).collect());
    section(&mut out, "initial", state_names(&mut a.initial().iter().copied()));
    section(&mut out, "secret", state_names(&mut d.secret.iter().copied()));
    section(&mut out, "nonsecret", state_names(&mut d.nonsecret.iter().copied()));
    if !a.marked().is_empty() {
        section(&mut out, "marked", state_names(&mut a.marked().iter().copied()));
    }
    out.push_str("trans:\n");
    let mut lines: Vec<(&str, &str, &str)> = a
        .transitions()
        .iter()
        .map(|t| (a.state_name(t.src), a.event(t.event).name.as_str(), a.state_name(t.dst)))
        .collect();
    lines.sort_unstable();
    for (s, e, t) in lines {
        let _ = writeln!(out, "{s} {e} {t}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step_bound::StepBound;
    use crate::verify::verify_kso;

    const CHAIN: &str = "\
# eight states in a row
des chain8
events: a
states: 1 2 3 4 5 6 7 8
initial: 1 2
secret: 1
nonsecret: 2
trans:
1 a 2
2 a 3
3 a 4
4 a 5
5 a 6
6 a 7
7 a 8
";

    #[test]
    fn minimal_document() {
        let d = parse("des one\nstates: q\ninitial: q\n").unwrap();
        assert_eq!(d.num_states(), 1);
        assert_eq!(d.automaton.num_transitions(), 0);
        assert_eq!(parse(&serialize(&d)).unwrap().num_states(), 1);
    }

    #[test]
    fn chain_parses_and_is_six_step_opaque() {
        let d = parse(CHAIN).unwrap();
        assert!(verify_kso(&d, &StepBound::finite(6)).unwrap().opaque);
        assert_eq!(serialize(&d), CHAIN.split_once('\n').unwrap().1);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "des x # trailing\n\nevents: a u # two\nunobservable: u\nstates: 1 2\ninitial: 1\ntrans:\n1 u 2 # hidden\n";
        let d = parse(text).unwrap();
        let u = d.automaton.event_id("u").unwrap();
        assert!(!d.automaton.is_observable(u));
        assert_eq!(d.automaton.num_transitions(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "des x\nevents: a\nstates: 1\ntrans:\n1 a 2\n";
        match parse(bad) {
            Err(Error::Syntax { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("unknown state"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("events: a\n"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(
            parse("des x\nstates: 1\nsecrets: 1\n"),
            Err(Error::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse("des x\nevents: a\nstates: 1\ntrans:\n1 a\n"),
            Err(Error::Syntax { line: 5, .. })
        ));
    }

    #[test]
    fn overlap_is_a_validation_error() {
        let text = "des x\nstates: 1\nsecret: 1\nnonsecret: 1\n";
        assert!(matches!(parse(text), Err(Error::Invalid(_))));
    }

    #[test]
    fn pair_events_round_trip() {
        let text = "des p\nevents: a,c a,a1\nstates: 1 2\ninitial: 1\ntrans:\n1 a,c 2\n";
        let d = parse(text).unwrap();
        let again = parse(&serialize(&d)).unwrap();
        assert!(again.same_structure(&d));
    }
}
