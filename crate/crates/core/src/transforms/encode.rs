use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::automaton::{Des, Label};
use crate::error::{Error, Result};

use super::{Builder, Claim, Notion, Origin, TransformResult};

/// `⌈log2 n⌉`, with 0 for `n <= 1`.
pub fn code_width(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// The `i`-th word is `i` in binary, padded to `⌈log2 n⌉` digits.
pub fn default_code(n: usize) -> Vec<String> {
    let width = code_width(n).max(1);
    (0..n).map(|i| format!("{i:0width$b}")).collect()
}

/// Replaces every observable event in `code` by a chain of `0`/`1`
/// transitions spelling its code word. Intermediate states `p.<prefix>` are
/// shared between transitions leaving the same state and are non-secret.
pub fn encode_events(d: &Des, code: &BTreeMap<String, String>) -> Result<TransformResult> {
    d.ensure_valid()?;
    if code.len() < 3 {
        return Err(Error::Encoding(format!(
            "at least three events must be encoded, got {}",
            code.len()
        )));
    }
    for name in code.keys() {
        match d.automaton.event_id(name) {
            Some(e) if d.automaton.is_observable(e) => {}
            _ => {
                return Err(Error::Precondition(format!(
                    "`{name}` is not an observable event"
                )))
            }
        }
    }
    let mut lengths = BTreeSet::new();
    let mut seen = HashMap::new();
    for (name, word) in code {
        if word.is_empty() || !word.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::Encoding(format!("`{word}` is not a binary word")));
        }
        if let Some(other) = seen.insert(word.as_str(), name.as_str()) {
            return Err(Error::Encoding(format!(
                "`{other}` and `{name}` share the word `{word}`"
            )));
        }
        lengths.insert(word.len());
    }
    if lengths.len() != 1 {
        return Err(Error::Encoding("code words differ in length".to_string()));
    }
    let len = *lengths.first().expect("nonempty");
    let bound = code_width(code.len()) + 1;
    if len > bound {
        return Err(Error::Encoding(format!(
            "code words of length {len} exceed the bound {bound}"
        )));
    }
    encode_unchecked(d, code)
}

pub(crate) fn encode_unchecked(d: &Des, code: &BTreeMap<String, String>) -> Result<TransformResult> {
    let src = &d.automaton;
    let mut b = Builder::new();
    let ids = (0..src.num_states())
        .map(|q| b.state(src.state_name(q).to_string(), Origin::Original(q), d.label(q)))
        .collect::<Result<Vec<_>>>()?;
    let mut ev = Vec::with_capacity(src.num_events());
    for e in src.events() {
        ev.push((!code.contains_key(&e.name)).then(|| b.event(&e.name, e.observable)));
    }
    let bits = [b.fresh_event("0", true)?, b.fresh_event("1", true)?];
    let mut chain: HashMap<(usize, String), usize> = HashMap::new();
    for t in src.transitions() {
        let name = &src.event(t.event).name;
        let Some(word) = code.get(name) else {
            b.trans(ids[t.src], ev[t.event].expect("kept"), ids[t.dst]);
            continue;
        };
        let digits = word.as_bytes();
        let mut at = ids[t.src];
        for i in 1..digits.len() {
            let prefix = &word[..i];
            let key = (t.src, prefix.to_string());
            let next = match chain.get(&key) {
                Some(&s) => s,
                None => {
                    let s = b.state(
                        format!("{}.{prefix}", src.state_name(t.src)),
                        Origin::Encoder {
                            state: t.src,
                            prefix: prefix.to_string(),
                        },
                        Label::NonSecret,
                    )?;
                    chain.insert(key, s);
                    s
                }
            };
            b.trans(at, bits[(digits[i - 1] - b'0') as usize], next);
            at = next;
        }
        b.trans(at, bits[(digits[digits.len() - 1] - b'0') as usize], ids[t.dst]);
    }
    for &q in src.initial() {
        b.initial(ids[q]);
    }
    for &q in src.marked() {
        b.marked(ids[q]);
    }
    Ok(b.finish(format!("{}.bin", d.name), Claim::new(Notion::Cso, Notion::Cso)))
}
