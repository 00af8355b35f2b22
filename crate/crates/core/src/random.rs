//! Seeded random DES instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Automaton, Des, Label};

#[derive(Clone, Debug, PartialEq)]
pub struct RandomSpec {
    pub n_states: usize,
    /// Total number of events, observable and unobservable.
    pub n_events: usize,
    pub n_unobservable: usize,
    /// Probability that a `(state, event)` pair has a transition, in `(0, 1]`.
    pub density: f64,
    pub secret_fraction: f64,
    pub nonsecret_fraction: f64,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            n_states: 4,
            n_events: 3,
            n_unobservable: 1,
            density: 0.5,
            secret_fraction: 0.3,
            nonsecret_fraction: 0.5,
            seed: 0,
        }
    }
}

fn observable_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("e{i}")
    }
}

/// States are `1..=n`; observable events `a, b, ...`; unobservable events
/// `u1, u2, ...`. Each `(state, event)` pair gets a uniformly chosen target
/// with probability `density`, and each further target with probability
/// `density / (2n)`. State `1` is always initial; every other state is
/// initial with probability `1/n`. Reachability is not enforced.
pub fn gen_random(spec: &RandomSpec) -> Des {
    assert!(spec.n_states >= 1, "a DES needs a state");
    assert!(spec.n_unobservable <= spec.n_events);
    assert!(spec.density > 0.0 && spec.density <= 1.0);
    assert!(spec.secret_fraction >= 0.0 && spec.nonsecret_fraction >= 0.0);
    assert!(spec.secret_fraction + spec.nonsecret_fraction <= 1.0 + 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n_states;
    let mut a = Automaton::new();
    for q in 1..=n {
        a.add_state(q.to_string()).expect("distinct");
    }
    let n_obs = spec.n_events - spec.n_unobservable;
    for i in 0..n_obs {
        a.add_event(observable_name(i), true).expect("distinct");
    }
    for i in 1..=spec.n_unobservable {
        a.add_event(format!("u{i}"), false).expect("distinct");
    }
    let extra = spec.density / (2.0 * n as f64);
    for q in 0..n {
        for e in 0..spec.n_events {
            if rng.gen_bool(spec.density) {
                a.add_transition(q, e, rng.gen_range(0..n));
            }
            for r in 0..n {
                if rng.gen_bool(extra) {
                    a.add_transition(q, e, r);
                }
            }
        }
    }
    a.set_initial(0);
    for q in 1..n {
        if rng.gen_bool(1.0 / n as f64) {
            a.set_initial(q);
        }
    }
    let mut d = Des::new(format!("random{}", spec.seed), a);
    for q in 0..n {
        let x: f64 = rng.gen();
        let label = if x < spec.secret_fraction {
            Label::Secret
        } else if x < spec.secret_fraction + spec.nonsecret_fraction {
            Label::NonSecret
        } else {
            Label::Neutral
        };
        d.set_label(q, label);
    }
    d
}
