use std::collections::BTreeMap;

use crate::automaton::{Des, Label};
use crate::error::Result;
use crate::observer::Projection;

use super::encode::encode_unchecked;
use super::graph::{observable_depths, ObservableDepth};
use super::{no_neutral, single_observable, Builder, Claim, Notion, Origin, TransformResult, AT};

/// Adds `@`-transitions from every secret state to a fresh sink `q.s` and
/// from every non-secret state to a fresh sink `q.ns`. Only `q.s` is secret
/// in the output.
pub fn cso_to_kso(d: &Des) -> Result<TransformResult> {
    d.ensure_valid()?;
    let mut b = Builder::new();
    let ids = b.copy(d, "", Origin::Original, |q| match d.label(q) {
        Label::Neutral => Label::Neutral,
        _ => Label::NonSecret,
    })?;
    let at = b.fresh_event(AT, true)?;
    let qs = b.state("q.s".into(), Origin::Fresh("q.s"), Label::Secret)?;
    let qns = b.state("q.ns".into(), Origin::Fresh("q.ns"), Label::NonSecret)?;
    for &q in &d.secret {
        b.trans(ids[q], at, qs);
    }
    for &q in &d.nonsecret {
        b.trans(ids[q], at, qns);
    }
    finish(b, d, &ids, "kso", Claim::new(Notion::Cso, Notion::KsoEvery))
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

/// [`cso_to_kso`] followed by a binary encoding that writes every original
/// observable event as `0` followed by its index in binary and `@` as a
/// block of `1`s, leaving two observable events.
pub fn cso_to_kso_binary(d: &Des) -> Result<TransformResult> {
    let first = cso_to_kso(d)?;
    let mut names: Vec<String> = d
        .automaton
        .observable_events()
        .into_iter()
        .map(|e| d.automaton.event(e).name.clone())
        .collect();
    names.sort();
    let width = super::encode::code_width(names.len()).max(1);
    let mut code = BTreeMap::new();
    for (i, name) in names.iter().enumerate() {
        code.insert(name.clone(), format!("0{i:0width$b}"));
    }
    code.insert(AT.to_string(), "1".repeat(width + 1));
    let second = encode_unchecked(&first.output, &code)?;
    let origin = second
        .origin
        .into_iter()
        .map(|o| match o {
            Origin::Original(q) => first.origin[q].clone(),
            other => other,
        })
        .collect();
    Ok(TransformResult {
        output: second.output,
        claim: Claim::new(Notion::Cso, Notion::KsoEvery),
        origin,
    })
}

/// The construction for a single observable event `a`: fresh unobservable
/// `u` and states `q0*`, `q1*`, `q2*`. When the observations are bounded by
/// `m`, `q0*` must enter the estimate after exactly `m+1` observations. The
/// states reachable by `a^m` get an `a`-move to `q0*` if none of them is
/// also reachable with fewer observations; otherwise a fresh secret chain
/// `p0* -a-> ... -a-> pm* -a-> q0*` with `p0*` initial does the counting.
pub fn cso_to_kso_single_event(d: &Des) -> Result<TransformResult> {
    d.ensure_valid()?;
    let a_ev = single_observable(d)?;
    no_neutral(d)?;
    let src = &d.automaton;
    let a_name = src.event(a_ev).name.clone();

    let mut b = Builder::new();
    let ids = b.copy(d, "", Origin::Original, |q| d.label(q))?;
    let u = b.fresh_event("u", false)?;
    let a = b.event(&a_name, true);
    let q0 = b.state("q0*".into(), Origin::Fresh("q0*"), Label::NonSecret)?;
    let q1 = b.state("q1*".into(), Origin::Fresh("q1*"), Label::NonSecret)?;
    let q2 = b.state("q2*".into(), Origin::Fresh("q2*"), Label::Secret)?;
    for &q in &d.nonsecret {
        b.trans(ids[q], u, q1);
    }
    b.trans(q1, a, q2);
    b.trans(q0, a, q0);
    b.trans(q2, a, q2);

    let depths = observable_depths(src);
    let bounded: Option<usize> = src
        .initial()
        .iter()
        .map(|&q| match depths[q] {
            ObservableDepth::Finite(m) => Some(m),
            ObservableDepth::Unbounded => None,
        })
        .try_fold(0usize, |acc, m| m.map(|m| acc.max(m)));
    if let (Some(m), false) = (bounded, src.initial().is_empty()) {
        let proj = Projection::new(src);
        let mut estimates = vec![proj.initial().clone()];
        for j in 0..m {
            estimates.push(proj.step(&estimates[j], 0));
        }
        let q_max = &estimates[m];
        if estimates[..m].iter().all(|x| !x.intersects(q_max)) {
            for q in q_max.iter() {
                b.trans(ids[q], a, q0);
            }
        } else {
            let mut prev = None;
            for i in 0..=m {
                let p = b.state(format!("p{i}*"), Origin::Fresh("p*"), Label::Secret)?;
                match prev {
                    None => b.initial(p),
                    Some(r) => b.trans(r, a, p),
                }
                prev = Some(p);
            }
            b.trans(prev.expect("m >= 0"), a, q0);
        }
    }
    finish(b, d, &ids, "kso", Claim::new(Notion::Cso, Notion::KsoEvery))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::DesBuilder;
    use crate::step_bound::StepBound;
    use crate::verify::verify_kso;

    fn two_state() -> Des {
        DesBuilder::new("g")
            .observable(&["a"])
            .transitions(&[("1", "a", "2")])
            .initial(&["1"])
            .secret(&["2"])
            .nonsecret(&["1"])
            .build()
            .unwrap()
    }

    #[test]
    fn cso_to_kso_adds_two_sinks() {
        let d = two_state();
        let r = cso_to_kso(&d).unwrap();
        let out = &r.output;
        assert_eq!(out.num_states(), d.num_states() + 2);
        assert_eq!(
            out.automaton.num_transitions(),
            d.automaton.num_transitions() + d.secret.len() + d.nonsecret.len()
        );
        let qs = out.automaton.state_id("q.s").unwrap();
        assert!(out.automaton.successors(qs).is_empty());
        assert_eq!(out.secret.iter().copied().collect::<Vec<_>>(), vec![qs]);
        assert!(out.neutral_states().is_empty());
    }

    #[test]
    fn at_collision_is_reported() {
        let d = DesBuilder::new("g")
            .observable(&["@"])
            .states(&["1"])
            .initial(&["1"])
            .build()
            .unwrap();
        assert!(matches!(
            cso_to_kso(&d),
            Err(crate::Error::NameCollision(n)) if n == "@"
        ));
    }

    #[test]
    fn single_event_finite_chain_gets_dashed_transition() {
        let d = two_state();
        let r = cso_to_kso_single_event(&d).unwrap();
        let a = &r.output.automaton;
        let ev = a.event_id("a").unwrap();
        let two = a.state_id("2").unwrap();
        let q0 = a.state_id("q0*").unwrap();
        assert!(a.successors(two).contains(&(ev, q0)));
        assert_eq!(a.num_states(), 5);
    }

    #[test]
    fn single_event_early_max_state_uses_a_chain() {
        // 3 is reachable after no observation and after one
        let d = DesBuilder::new("g")
            .observable(&["a"])
            .unobservable(&["u1"])
            .transitions(&[("1", "a", "3"), ("1", "u1", "3")])
            .initial(&["1"])
            .secret(&["3"])
            .nonsecret(&["1"])
            .build()
            .unwrap();
        assert!(!verify_kso(&d, &StepBound::zero()).unwrap().opaque);
        let r = cso_to_kso_single_event(&d).unwrap();
        let a = &r.output.automaton;
        let three = a.state_id("3").unwrap();
        assert!(a.successors(three).is_empty());
        assert!(a.state_id("p1*").is_some());
        for k in [StepBound::zero(), StepBound::finite(3), StepBound::Infinite] {
            assert!(!verify_kso(&r.output, &k).unwrap().opaque);
        }
    }

    #[test]
    fn single_event_loop_has_no_dashed_transitions() {
        let d = DesBuilder::new("g")
            .observable(&["a"])
            .transitions(&[("1", "a", "1"), ("1", "a", "2")])
            .initial(&["1"])
            .secret(&["2"])
            .nonsecret(&["1"])
            .build()
            .unwrap();
        let r = cso_to_kso_single_event(&d).unwrap();
        let a = &r.output.automaton;
        let q0 = a.state_id("q0*").unwrap();
        let into_q0 = a.transitions().iter().filter(|t| t.dst == q0).count();
        assert_eq!(into_q0, 1);
    }

    #[test]
    fn single_event_rejects_neutral_and_many_events() {
        let neutral = DesBuilder::new("g")
            .observable(&["a"])
            .states(&["1"])
            .initial(&["1"])
            .build()
            .unwrap();
        assert!(cso_to_kso_single_event(&neutral).is_err());
        let two = DesBuilder::new("g")
            .observable(&["a", "b"])
            .states(&["1"])
            .initial(&["1"])
            .nonsecret(&["1"])
            .build()
            .unwrap();
        assert!(cso_to_kso_single_event(&two).is_err());
    }

    #[test]
    fn binary_pipeline_leaves_two_observable_events() {
        let d = DesBuilder::new("g")
            .observable(&["a", "b"])
            .transitions(&[("1", "a", "2"), ("1", "b", "3")])
            .initial(&["1"])
            .secret(&["2"])
            .nonsecret(&["1", "3"])
            .build()
            .unwrap();
        let r = cso_to_kso_binary(&d).unwrap();
        let a = &r.output.automaton;
        let obs: Vec<&str> = a
            .observable_events()
            .into_iter()
            .map(|e| a.event(e).name.as_str())
            .collect();
        assert_eq!(obs, vec!["0", "1"]);
        for k in [StepBound::zero(), StepBound::finite(2), StepBound::Infinite] {
            assert_eq!(
                verify_kso(&r.output, &k).unwrap().opaque,
                verify_kso(&d, &StepBound::zero()).unwrap().opaque
            );
        }
    }
}
