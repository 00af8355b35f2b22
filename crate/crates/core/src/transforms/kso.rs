use std::collections::HashMap;

use num_bigint::BigUint;

use crate::automaton::{Automaton, Des, Label};
use crate::counter::build_counter;
use crate::error::{Error, Result};
use crate::product::sync_product;
use crate::step_bound::StepBound;
use crate::verify::verify_kso;

use super::graph::{observable_depths, ObservableDepth};
use super::{
    no_neutral, require_finite, single_observable, Builder, Claim, Notion, Origin,
    TransformResult, AT,
};

/// Name of the event that pairs `sigma` with the counter event `gamma`.
pub fn pair_event(sigma: &str, gamma: &str) -> String {
    format!("{sigma},{gamma}")
}

fn names_sorted(a: &Automaton, observable_only: bool) -> Vec<String> {
    let mut names: Vec<String> = a
        .events()
        .iter()
        .filter(|e| e.observable || !observable_only)
        .map(|e| e.name.clone())
        .collect();
    names.sort();
    names
}

fn pairing(
    a: &Automaton,
    pair_for: impl Fn(&str) -> Vec<String>,
    reserved: &[String],
) -> Result<(Automaton, usize)> {
    let mut out = Automaton::new();
    for q in 0..a.num_states() {
        out.add_state(a.state_name(q))?;
    }
    let mut map: Vec<Vec<usize>> = Vec::with_capacity(a.num_events());
    let mut pairs = 0;
    for e in a.events() {
        let lifted = pair_for(&e.name);
        if lifted.is_empty() {
            map.push(vec![out.add_event(e.name.as_str(), e.observable)?]);
            continue;
        }
        let mut ids = Vec::with_capacity(lifted.len());
        for name in lifted {
            if reserved.contains(&name) {
                return Err(Error::NameCollision(name));
            }
            ids.push(out.add_event(name, true)?);
            pairs += 1;
        }
        map.push(ids);
    }
    for t in a.transitions() {
        for &e in &map[t.event] {
            out.add_transition(t.src, e, t.dst);
        }
    }
    for &q in a.initial() {
        out.set_initial(q);
    }
    for &q in a.marked() {
        out.set_marked(q);
    }
    Ok((out, pairs))
}

/// Replaces every observable `σ`-transition by one `(σ,γ)`-transition per
/// `γ ∈ gamma`; unobservable transitions are kept.
pub fn lift_alphabet(a: &Automaton, gamma: &[String]) -> Result<Automaton> {
    for g in gamma {
        if a.event_id(g).is_some() {
            return Err(Error::AlphabetOverlap(g.clone()));
        }
    }
    let reserved: Vec<String> = a.events().iter().map(|e| e.name.clone()).collect();
    let lifted = pairing(
        a,
        |name| {
            let e = a.event_id(name).expect("own event");
            if a.is_observable(e) {
                gamma.iter().map(|g| pair_event(name, g)).collect()
            } else {
                Vec::new()
            }
        },
        &reserved,
    )?;
    Ok(lifted.0)
}

/// Replaces every `γ`-transition of a counter by one `(σ,γ)`-transition per
/// `σ ∈ sigma`.
pub fn lift_counter(a: &Automaton, sigma: &[String]) -> Result<Automaton> {
    let lifted = pairing(
        a,
        |name| sigma.iter().map(|s| pair_event(s, name)).collect(),
        &[],
    )?;
    Ok(lifted.0)
}

/// The input, a copy `q+` of it whose states are secret, and a copy `q-`
/// whose states are non-secret, joined by `@` from secret and non-secret
/// states respectively.
pub fn inso_to_cso(d: &Des) -> Result<TransformResult> {
    d.ensure_valid()?;
    let mut b = Builder::new();
    let ids = b.copy(d, "", Origin::Original, |_| Label::NonSecret)?;
    let at = b.fresh_event(AT, true)?;
    let plus = b.copy(d, "+", Origin::Plus, |_| Label::Secret)?;
    let minus = b.copy(d, "-", Origin::Minus, |_| Label::NonSecret)?;
    for &q in &d.secret {
        b.trans(ids[q], at, plus[q]);
    }
    for &q in &d.nonsecret {
        b.trans(ids[q], at, minus[q]);
    }
    finish(b, d, &ids, "cso", Claim::new(Notion::Inso, Notion::Cso))
}

fn finish(mut b: Builder, d: &Des, ids: &[usize], tag: &str, claim: Claim) -> Result<TransformResult> {
    for &q in d.automaton.initial() {
        b.initial(ids[q]);
    }
    for &q in d.automaton.marked() {
        b.marked(ids[q]);
    }
    Ok(b.finish(format!("{}.{tag}", d.name), claim))
}

struct Lifted {
    system: Automaton,
    counter: Automaton,
    counter_initial: usize,
}

/// Renames the counter's events apart from the system's by appending `'`.
fn counter_apart(counter: &Automaton, system: &Automaton) -> Result<Automaton> {
    let mut suffix = String::new();
    while counter
        .events()
        .iter()
        .any(|e| system.event_id(&format!("{}{suffix}", e.name)).is_some())
    {
        suffix.push('\'');
    }
    if suffix.is_empty() {
        return Ok(counter.clone());
    }
    let mut out = Automaton::new();
    for q in 0..counter.num_states() {
        out.add_state(counter.state_name(q))?;
    }
    for e in counter.events() {
        out.add_event(format!("{}{suffix}", e.name), e.observable)?;
    }
    for t in counter.transitions() {
        out.add_transition(t.src, t.event, t.dst);
    }
    for &q in counter.initial() {
        out.set_initial(q);
    }
    for &q in counter.marked() {
        out.set_marked(q);
    }
    Ok(out)
}

fn lifted_parts(d: &Des, k: &BigUint) -> Result<Lifted> {
    let mut counter = build_counter(k);
    counter.automaton = counter_apart(&counter.automaton, &d.automaton)?;
    let gamma = names_sorted(&counter.automaton, false);
    let sigma = names_sorted(&d.automaton, true);
    Ok(Lifted {
        system: lift_alphabet(&d.automaton, &gamma)?,
        counter: lift_counter(&counter.automaton, &sigma)?,
        counter_initial: counter.initial,
    })
}

/// The construction with neutral states: the input (neutral), secret and
/// non-secret lifted copies, and the lifted counter whose marked states are
/// non-secret. Secret states enter both the secret copy and the counter.
pub fn kso_to_cso_neutral(d: &Des, k: &StepBound) -> Result<TransformResult> {
    d.ensure_valid()?;
    require_finite(k)?;
    let parts = lifted_parts(d, k.as_finite().expect("finite"))?;
    let mut b = Builder::new();
    let ids = b.copy(d, "", Origin::Original, |_| Label::Neutral)?;
    let at = b.fresh_event(AT, true)?;
    let plus = b.copy_automaton(&parts.system, "+", Origin::Plus, |_| Label::Secret)?;
    let minus = b.copy_automaton(&parts.system, "-", Origin::Minus, |_| Label::NonSecret)?;
    let counter = &parts.counter;
    let cnt = b.copy_automaton(
        counter,
        "",
        |q| Origin::Counter(counter.state_name(q).to_string()),
        |q| {
            if counter.marked().contains(&q) {
                Label::NonSecret
            } else {
                Label::Neutral
            }
        },
    )?;
    for &q in &d.secret {
        b.trans(ids[q], at, plus[q]);
        b.trans(ids[q], at, cnt[parts.counter_initial]);
    }
    for &q in &d.nonsecret {
        b.trans(ids[q], at, minus[q]);
    }
    finish(b, d, &ids, "cso", Claim::new(Notion::Kso(k.clone()), Notion::Cso))
}

/// The construction without neutral states: the input, a non-secret lifted
/// copy `q-`, and the synchronous product of a lifted copy `q+` with the
/// lifted counter, whose states are secret exactly when the counter part is
/// not marked. Infinite `K` falls back to [`inso_to_cso`].
pub fn kso_to_cso(d: &Des, k: &StepBound) -> Result<TransformResult> {
    d.ensure_valid()?;
    let Some(kf) = k.as_finite() else {
        return inso_to_cso(d);
    };
    let parts = lifted_parts(d, kf)?;

    let sys = &parts.system;
    let mut plus = Automaton::new();
    for q in 0..sys.num_states() {
        let id = plus.add_state(format!("{}+", sys.state_name(q)))?;
        plus.set_initial(id);
        plus.set_marked(id);
    }
    for e in sys.events() {
        plus.add_event(e.name.as_str(), e.observable)?;
    }
    for t in sys.transitions() {
        plus.add_transition(t.src, t.event, t.dst);
    }
    let counter = &parts.counter;
    let product = sync_product(&plus, counter);
    let pa = &product.automaton;

    let mut b = Builder::new();
    let ids = b.copy(d, "", Origin::Original, |_| Label::NonSecret)?;
    let at = b.fresh_event(AT, true)?;
    let minus = b.copy_automaton(sys, "-", Origin::Minus, |_| Label::NonSecret)?;
    let prod = b.copy_automaton(
        pa,
        "",
        |x| {
            let (p, r) = product.pairs[x];
            Origin::Pair(p, counter.state_name(r).to_string())
        },
        |x| {
            if pa.marked().contains(&x) {
                Label::NonSecret
            } else {
                Label::Secret
            }
        },
    )?;
    let entry: HashMap<usize, usize> = product
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, &(_, r))| r == parts.counter_initial)
        .map(|(x, &(p, _))| (p, prod[x]))
        .collect();
    for &q in &d.secret {
        b.trans(ids[q], at, entry[&q]);
    }
    for &q in &d.nonsecret {
        b.trans(ids[q], at, minus[q]);
    }
    finish(b, d, &ids, "cso", Claim::new(Notion::Kso(k.clone()), Notion::Cso))
}

/// For a single observable event: relabels the input so that it is CSO iff
/// the input is K-step opaque. With bounded observations the verdict is
/// decided directly; otherwise a non-secret state stays non-secret only if
/// it can still make `K` observable steps.
pub fn kso_to_cso_single_event(d: &Des, k: &StepBound) -> Result<TransformResult> {
    d.ensure_valid()?;
    single_observable(d)?;
    no_neutral(d)?;
    let a = &d.automaton;
    let depths = observable_depths(a);
    let unbounded = a
        .initial()
        .iter()
        .any(|&q| depths[q] == ObservableDepth::Unbounded);
    let mut output = d.clone();
    output.name = format!("{}.cso", d.name);
    if !unbounded {
        if !verify_kso(d, k)?.opaque {
            for q in 0..a.num_states() {
                output.set_label(q, Label::Secret);
            }
        }
    } else {
        for (q, &depth) in depths.iter().enumerate() {
            let keeps_up = match (depth, k) {
                (ObservableDepth::Unbounded, _) => true,
                (ObservableDepth::Finite(_), StepBound::Infinite) => false,
                (ObservableDepth::Finite(m), StepBound::Finite(kf)) => BigUint::from(m) >= *kf,
            };
            let label = if d.label(q) == Label::NonSecret && keeps_up {
                Label::NonSecret
            } else {
                Label::Secret
            };
            output.set_label(q, label);
        }
    }
    Ok(TransformResult {
        output,
        claim: Claim::new(Notion::Kso(k.clone()), Notion::Cso),
        origin: (0..a.num_states()).map(Origin::Original).collect(),
    })
}
