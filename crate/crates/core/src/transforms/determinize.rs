use crate::automaton::{Des, Label};
use crate::error::Result;

use super::{Builder, Claim, Notion, Origin, TransformResult};

/// Makes the automaton deterministic without changing K-step opacity.
///
/// Each transition `(p,a,q)` whose `(p,a)` has several successors becomes
/// `p -u(p,a,q)-> p'(a,q) -a-> q` with a fresh unobservable event and a fresh
/// state carrying the label of `p`. Several initial states are replaced by a
/// fresh initial state `init'` that moves to each of them by its own fresh
/// unobservable event; it is secret if all of them are, non-secret if all of
/// them are, and neutral otherwise.
pub fn determinize_preserving(d: &Des) -> Result<TransformResult> {
    d.ensure_valid()?;
    let src = &d.automaton;
    let name = if src.is_deterministic() {
        d.name.clone()
    } else {
        format!("{}.det", d.name)
    };
    let mut b = Builder::new();
    let ids = (0..src.num_states())
        .map(|q| b.state(src.state_name(q).to_string(), Origin::Original(q), d.label(q)))
        .collect::<Result<Vec<_>>>()?;
    let ev = b.events_of(src);
    for q in 0..src.num_states() {
        let succ = src.successors(q);
        for &(e, r) in succ {
            let fanout = succ.iter().filter(|&&(f, _)| f == e).count();
            if fanout == 1 {
                b.trans(ids[q], ev[e], ids[r]);
                continue;
            }
            let p = src.state_name(q);
            let a = &src.event(e).name;
            let t = src.state_name(r);
            let u = b.fresh_event(&format!("u({p},{a},{t})"), false)?;
            let mid = b.state(
                format!("{p}'({a},{t})"),
                Origin::Split {
                    state: q,
                    event: e,
                    target: r,
                },
                d.label(q),
            )?;
            b.trans(ids[q], u, mid);
            b.trans(mid, ev[e], ids[r]);
        }
    }
    let initial: Vec<usize> = src.initial().iter().copied().collect();
    if initial.len() > 1 {
        let all = |l: Label| initial.iter().all(|&q| d.label(q) == l);
        let label = if all(Label::Secret) {
            Label::Secret
        } else if all(Label::NonSecret) {
            Label::NonSecret
        } else {
            Label::Neutral
        };
        let init = b.state("init'".to_string(), Origin::Fresh("init'"), label)?;
        for &q in &initial {
            let u = b.fresh_event(&format!("u(init',{})", src.state_name(q)), false)?;
            b.trans(init, u, ids[q]);
        }
        b.initial(init);
    } else {
        for &q in &initial {
            b.initial(ids[q]);
        }
    }
    for &q in src.marked() {
        b.marked(ids[q]);
    }
    Ok(b.finish(name, Claim::new(Notion::KsoEvery, Notion::KsoEvery)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::DesBuilder;

    #[test]
    fn deterministic_input_is_unchanged() {
        let d = DesBuilder::new("g")
            .observable(&["a"])
            .transitions(&[("1", "a", "2"), ("2", "a", "1")])
            .initial(&["1"])
            .secret(&["2"])
            .build()
            .unwrap();
        let r = determinize_preserving(&d).unwrap();
        assert!(r.output.same_structure(&d));
    }

    #[test]
    fn two_successors_become_two_branches() {
        let d = DesBuilder::new("g")
            .observable(&["a"])
            .transitions(&[("p", "a", "q"), ("p", "a", "r")])
            .initial(&["p"])
            .secret(&["p"])
            .build()
            .unwrap();
        let r = determinize_preserving(&d).unwrap();
        let a = &r.output.automaton;
        assert!(a.is_deterministic());
        assert_eq!(a.num_states(), 5);
        assert_eq!(a.num_events(), 3);
        let mid = a.state_id("p'(a,q)").unwrap();
        assert_eq!(r.output.label(mid), Label::Secret);
        assert!(!a.is_observable(a.event_id("u(p,a,r)").unwrap()));
    }

    #[test]
    fn several_initial_states_get_a_fresh_root() {
        let d = DesBuilder::new("g")
            .observable(&["a"])
            .states(&["1", "2"])
            .initial(&["1", "2"])
            .secret(&["1"])
            .nonsecret(&["2"])
            .build()
            .unwrap();
        let r = determinize_preserving(&d).unwrap();
        let a = &r.output.automaton;
        assert!(a.is_deterministic());
        let init = a.state_id("init'").unwrap();
        assert_eq!(a.initial().iter().copied().collect::<Vec<_>>(), vec![init]);
        assert_eq!(r.output.label(init), Label::Neutral);
    }
}
