//! Reductions between opacity notions.
//!
//! Every transform returns a new DES together with the equivalence it
//! claims: the input has property `claim.source` iff the output has
//! property `claim.target`. States of the output remember where they came
//! from in [`TransformResult::origin`].

mod cso;
mod determinize;
mod encode;
mod graph;
mod kso;

use std::fmt;

use crate::automaton::{Automaton, Des, EventId, Label, StateId};
use crate::error::{Error, Result};
use crate::step_bound::StepBound;
use crate::verify::{verify_kso, Verdict};

pub use cso::{cso_to_kso, cso_to_kso_binary, cso_to_kso_single_event};
pub use determinize::determinize_preserving;
pub use encode::{default_code, encode_events};
pub use graph::{observable_depths, ObservableDepth};
pub use kso::{
    inso_to_cso, kso_to_cso, kso_to_cso_neutral, kso_to_cso_single_event, lift_alphabet,
    lift_counter, pair_event,
};

/// The fresh observable event that enters the auxiliary copies.
pub const AT: &str = "@";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Notion {
    Cso,
    Kso(StepBound),
    Inso,
    /// K-step opacity for every `K`, including infinity.
    KsoEvery,
}

impl Notion {
    /// The concrete step bounds this notion stands for, given candidates for
    /// the "every K" case.
    pub fn bounds(&self, every: &[StepBound]) -> Vec<StepBound> {
        match self {
            Notion::Cso => vec![StepBound::zero()],
            Notion::Kso(k) => vec![k.clone()],
            Notion::Inso => vec![StepBound::Infinite],
            Notion::KsoEvery => every.to_vec(),
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Notion::Cso => write!(f, "CSO"),
            Notion::Kso(k) => write!(f, "{k}-SO"),
            Notion::Inso => write!(f, "INSO"),
            Notion::KsoEvery => write!(f, "K-SO for every K"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub source: Notion,
    pub target: Notion,
}

impl Claim {
    pub fn new(source: Notion, target: Notion) -> Self {
        Claim { source, target }
    }

    /// The pairs of step bounds the claim relates. For "every K" notions
    /// the listed bounds are used; "every K" on both sides pairs equal
    /// bounds.
    pub fn pairs(&self, every: &[StepBound]) -> Vec<(StepBound, StepBound)> {
        if self.source == Notion::KsoEvery && self.target == Notion::KsoEvery {
            return every.iter().map(|k| (k.clone(), k.clone())).collect();
        }
        let targets = self.target.bounds(every);
        self.source
            .bounds(every)
            .into_iter()
            .flat_map(|s| targets.iter().map(move |t| (s.clone(), t.clone())))
            .collect()
    }

    /// Checks the claim with the verifier. Returns the first pair of
    /// disagreeing verdicts.
    pub fn check(
        &self,
        input: &Des,
        output: &Des,
        every: &[StepBound],
    ) -> Result<Option<(StepBound, Verdict, StepBound, Verdict)>> {
        for (ks, kt) in self.pairs(every) {
            let vs = verify_kso(input, &ks)?;
            let vt = verify_kso(output, &kt)?;
            if vs.opaque != vt.opaque {
                return Ok(Some((ks, vs, kt, vt)));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "input is {} iff output is {}", self.source, self.target)
    }
}

/// Where a state of a transform's output comes from. State and event ids
/// refer to the input DES.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Original(StateId),
    Plus(StateId),
    Minus(StateId),
    Fresh(&'static str),
    Counter(String),
    Pair(StateId, String),
    Encoder { state: StateId, prefix: String },
    Split { state: StateId, event: EventId, target: StateId },
}

#[derive(Clone, Debug)]
pub struct TransformResult {
    pub output: Des,
    pub claim: Claim,
    /// Indexed by output state id.
    pub origin: Vec<Origin>,
}

/// Incrementally assembles an output DES.
pub(crate) struct Builder {
    a: Automaton,
    labels: Vec<Label>,
    origin: Vec<Origin>,
}

impl Builder {
    pub(crate) fn new() -> Self {
        Builder {
            a: Automaton::new(),
            labels: Vec::new(),
            origin: Vec::new(),
        }
    }

    pub(crate) fn state(&mut self, name: String, origin: Origin, label: Label) -> Result<StateId> {
        let id = self.a.add_state(name)?;
        self.labels.push(label);
        self.origin.push(origin);
        Ok(id)
    }

    /// Declares an event that must not exist yet.
    pub(crate) fn fresh_event(&mut self, name: &str, observable: bool) -> Result<EventId> {
        self.a.add_event(name, observable)
    }

    pub(crate) fn event(&mut self, name: &str, observable: bool) -> EventId {
        self.a.ensure_event(name, observable)
    }

    /// Declares every event of `src`, returning their ids here.
    pub(crate) fn events_of(&mut self, src: &Automaton) -> Vec<EventId> {
        src.events()
            .iter()
            .map(|e| self.a.ensure_event(&e.name, e.observable))
            .collect()
    }

    pub(crate) fn trans(&mut self, src: StateId, event: EventId, dst: StateId) {
        self.a.add_transition(src, event, dst);
    }

    pub(crate) fn initial(&mut self, q: StateId) {
        self.a.set_initial(q);
    }

    pub(crate) fn marked(&mut self, q: StateId) {
        self.a.set_marked(q);
    }

    /// Copies the states and transitions of `d` with `suffix` appended to
    /// state names. Returns the new id of every input state.
    pub(crate) fn copy(
        &mut self,
        d: &Des,
        suffix: &str,
        origin: impl Fn(StateId) -> Origin,
        label: impl Fn(StateId) -> Label,
    ) -> Result<Vec<StateId>> {
        self.copy_automaton(&d.automaton, suffix, origin, label)
    }

    pub(crate) fn copy_automaton(
        &mut self,
        a: &Automaton,
        suffix: &str,
        origin: impl Fn(StateId) -> Origin,
        label: impl Fn(StateId) -> Label,
    ) -> Result<Vec<StateId>> {
        let ev = self.events_of(a);
        let ids = (0..a.num_states())
            .map(|q| self.state(format!("{}{suffix}", a.state_name(q)), origin(q), label(q)))
            .collect::<Result<Vec<_>>>()?;
        for t in a.transitions() {
            self.trans(ids[t.src], ev[t.event], ids[t.dst]);
        }
        Ok(ids)
    }

    pub(crate) fn finish(self, name: String, claim: Claim) -> TransformResult {
        let mut output = Des::new(name, self.a);
        for (q, &l) in self.labels.iter().enumerate() {
            output.set_label(q, l);
        }
        debug_assert!(output.validate().is_empty(), "{:?}", output.validate());
        TransformResult {
            output,
            claim,
            origin: self.origin,
        }
    }
}

pub(crate) fn single_observable(d: &Des) -> Result<EventId> {
    let obs = d.automaton.observable_events();
    match obs.as_slice() {
        [a] => Ok(*a),
        _ => Err(Error::Precondition(format!(
            "exactly one observable event required, found {}",
            obs.len()
        ))),
    }
}

pub(crate) fn no_neutral(d: &Des) -> Result<()> {
    let neutral = d.neutral_states();
    if let Some(&q) = neutral.first() {
        return Err(Error::Precondition(format!(
            "every state must be secret or non-secret; {} is neither",
            d.automaton.state_name(q)
        )));
    }
    Ok(())
}

pub(crate) fn require_finite(k: &StepBound) -> Result<()> {
    if k.is_infinite() {
        return Err(Error::Precondition(
            "this construction needs a finite K".to_string(),
        ));
    }
    Ok(())
}
