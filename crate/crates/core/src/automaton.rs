//! Finite automata with partially observable events and the DES wrapper that
//! adds secret / non-secret state labels.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::stateset::StateSet;

pub type StateId = usize;
pub type EventId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub name: String,
    pub observable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: StateId,
    pub event: EventId,
    pub dst: StateId,
}

/// A nondeterministic finite automaton over named states and events.
///
/// The builder methods keep the invariants (unique names, no duplicate
/// triples, in-range indices). [`Automaton::from_raw`] skips them so that
/// malformed input can still be represented and reported by
/// [`Des::validate`].
#[derive(Clone, Debug, Default)]
pub struct Automaton {
    states: Vec<String>,
    events: Vec<Event>,
    transitions: Vec<Transition>,
    initial: BTreeSet<StateId>,
    marked: BTreeSet<StateId>,
    state_lookup: HashMap<String, StateId>,
    event_lookup: HashMap<String, EventId>,
    seen: HashSet<Transition>,
    out: Vec<Vec<(EventId, StateId)>>,
}

impl Automaton {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assemble an automaton without checking anything. Out-of-range
    /// transitions are kept in the transition list but left out of the
    /// adjacency index.
    pub fn from_raw(
        states: Vec<String>,
        events: Vec<Event>,
        transitions: Vec<Transition>,
        initial: impl IntoIterator<Item = StateId>,
        marked: impl IntoIterator<Item = StateId>,
    ) -> Self {
        let mut out = vec![Vec::new(); states.len()];
        for t in &transitions {
            if t.src < states.len() && t.dst < states.len() && t.event < events.len() {
                out[t.src].push((t.event, t.dst));
            }
        }
        Automaton {
            state_lookup: states
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect(),
            event_lookup: events
                .iter()
                .enumerate()
                .map(|(i, e)| (e.name.clone(), i))
                .collect(),
            seen: transitions.iter().copied().collect(),
            states,
            events,
            transitions,
            initial: initial.into_iter().collect(),
            marked: marked.into_iter().collect(),
            out,
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let name = name.into();
        if self.state_lookup.contains_key(&name) {
            return Err(Error::NameCollision(name));
        }
        let id = self.states.len();
        self.state_lookup.insert(name.clone(), id);
        self.states.push(name);
        self.out.push(Vec::new());
        Ok(id)
    }

    pub fn add_event(&mut self, name: impl Into<String>, observable: bool) -> Result<EventId> {
        let name = name.into();
        if self.event_lookup.contains_key(&name) {
            return Err(Error::NameCollision(name));
        }
        let id = self.events.len();
        self.event_lookup.insert(name.clone(), id);
        self.events.push(Event { name, observable });
        Ok(id)
    }

    /// Returns the existing id, or declares the event if it is new.
    pub fn ensure_event(&mut self, name: &str, observable: bool) -> EventId {
        match self.event_lookup.get(name) {
            Some(&id) => id,
            None => self.add_event(name, observable).expect("name checked"),
        }
    }

    /// Adds `(src, event, dst)`; returns `false` if the triple already exists.
    pub fn add_transition(&mut self, src: StateId, event: EventId, dst: StateId) -> bool {
        assert!(src < self.states.len() && dst < self.states.len());
        assert!(event < self.events.len());
        let t = Transition { src, event, dst };
        if !self.seen.insert(t) {
            return false;
        }
        self.transitions.push(t);
        self.out[src].push((event, dst));
        true
    }

    pub fn set_initial(&mut self, state: StateId) {
        self.initial.insert(state);
    }

    pub fn set_marked(&mut self, state: StateId) {
        self.marked.insert(state);
    }

    pub fn clear_initial(&mut self) {
        self.initial.clear();
    }

    pub fn clear_marked(&mut self) {
        self.marked.clear();
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.states[state]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_lookup.get(name).copied()
    }

    pub fn event(&self, event: EventId) -> &Event {
        &self.events[event]
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_id(&self, name: &str) -> Option<EventId> {
        self.event_lookup.get(name).copied()
    }

    pub fn is_observable(&self, event: EventId) -> bool {
        self.events[event].observable
    }

    /// Observable event ids ordered by name; every string-valued output of
    /// the library enumerates events in this order.
    pub fn observable_events(&self) -> Vec<EventId> {
        let mut obs: Vec<EventId> = (0..self.events.len())
            .filter(|&e| self.events[e].observable)
            .collect();
        obs.sort_by(|&a, &b| self.events[a].name.cmp(&self.events[b].name));
        obs
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn successors(&self, state: StateId) -> &[(EventId, StateId)] {
        &self.out[state]
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn marked(&self) -> &BTreeSet<StateId> {
        &self.marked
    }

    pub fn initial_set(&self) -> StateSet {
        self.initial.iter().copied().collect()
    }

    /// `δ(states, event)` without any closure.
    pub fn image(&self, states: &StateSet, event: EventId) -> StateSet {
        let mut next = StateSet::new();
        for s in states.iter() {
            for &(e, d) in &self.out[s] {
                if e == event {
                    next.insert(d);
                }
            }
        }
        next
    }

    /// `δ(states, word)` for a word of event ids.
    pub fn run(&self, states: &StateSet, word: &[EventId]) -> StateSet {
        word.iter()
            .fold(states.clone(), |cur, &e| self.image(&cur, e))
    }

    /// Whether every state has at most one successor per event and there is
    /// at most one initial state.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 {
            return false;
        }
        self.out.iter().all(|succ| {
            let mut events: Vec<EventId> = succ.iter().map(|&(e, _)| e).collect();
            events.sort_unstable();
            events.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// States reachable from the initial states through any transitions.
    pub fn reachable_states(&self) -> StateSet {
        let mut seen: StateSet = self.initial_set();
        let mut queue: VecDeque<StateId> = self.initial.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for &(_, d) in &self.out[s] {
                if seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        seen
    }

    /// Restriction to the reachable states. The returned vector maps each old
    /// state to its new id, if it was kept.
    pub fn reachable_part(&self) -> (Automaton, Vec<Option<StateId>>) {
        let keep = self.reachable_states();
        let mut map = vec![None; self.states.len()];
        let mut states = Vec::new();
        for s in keep.iter() {
            map[s] = Some(states.len());
            states.push(self.states[s].clone());
        }
        let transitions = self
            .transitions
            .iter()
            .filter_map(|t| {
                Some(Transition {
                    src: map[t.src]?,
                    event: t.event,
                    dst: map[t.dst]?,
                })
            })
            .collect();
        let aut = Automaton::from_raw(
            states,
            self.events.clone(),
            transitions,
            self.initial.iter().filter_map(|&s| map[s]),
            self.marked.iter().filter_map(|&s| map[s]),
        );
        (aut, map)
    }

    /// Name-level equality: same state names, events (with observability),
    /// transitions, initial and marked sets, irrespective of index order.
    pub fn same_structure(&self, other: &Automaton) -> bool {
        let names = |a: &Automaton| -> BTreeSet<String> { a.states.iter().cloned().collect() };
        let events = |a: &Automaton| -> BTreeSet<(String, bool)> {
            a.events
                .iter()
                .map(|e| (e.name.clone(), e.observable))
                .collect()
        };
        let trans = |a: &Automaton| -> BTreeSet<(String, String, String)> {
            a.transitions
                .iter()
                .map(|t| {
                    (
                        a.states[t.src].clone(),
                        a.events[t.event].name.clone(),
                        a.states[t.dst].clone(),
                    )
                })
                .collect()
        };
        let set = |a: &Automaton, s: &BTreeSet<StateId>| -> BTreeSet<String> {
            s.iter().map(|&i| a.states[i].clone()).collect()
        };
        names(self) == names(other)
            && events(self) == events(other)
            && trans(self) == trans(other)
            && set(self, &self.initial) == set(other, &other.initial)
            && set(self, &self.marked) == set(other, &other.marked)
    }
}

/// A discrete-event system: an automaton plus secret and non-secret state
/// sets. States in neither set are neutral.
#[derive(Clone, Debug, Default)]
pub struct Des {
    pub name: String,
    pub automaton: Automaton,
    pub secret: BTreeSet<StateId>,
    pub nonsecret: BTreeSet<StateId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Secret,
    NonSecret,
    Neutral,
}

impl Des {
    pub fn new(name: impl Into<String>, automaton: Automaton) -> Self {
        Des {
            name: name.into(),
            automaton,
            secret: BTreeSet::new(),
            nonsecret: BTreeSet::new(),
        }
    }

    pub fn label(&self, state: StateId) -> Label {
        if self.secret.contains(&state) {
            Label::Secret
        } else if self.nonsecret.contains(&state) {
            Label::NonSecret
        } else {
            Label::Neutral
        }
    }

    pub fn set_label(&mut self, state: StateId, label: Label) {
        self.secret.remove(&state);
        self.nonsecret.remove(&state);
        match label {
            Label::Secret => {
                self.secret.insert(state);
            }
            Label::NonSecret => {
                self.nonsecret.insert(state);
            }
            Label::Neutral => {}
        }
    }

    pub fn secret_set(&self) -> StateSet {
        self.secret.iter().copied().collect()
    }

    pub fn nonsecret_set(&self) -> StateSet {
        self.nonsecret.iter().copied().collect()
    }

    pub fn num_states(&self) -> usize {
        self.automaton.num_states()
    }

    pub fn neutral_states(&self) -> Vec<StateId> {
        (0..self.num_states())
            .filter(|&s| self.label(s) == Label::Neutral)
            .collect()
    }

    /// Checks every structural invariant and reports each violation.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let a = &self.automaton;
        let n = a.states.len();
        let mut diags = Vec::new();
        let mut push = |kind, message: String| diags.push(Diagnostic { kind, message });

        let mut seen = HashSet::new();
        for s in &a.states {
            if !valid_token(s) {
                push(DiagnosticKind::BadName, format!("state name `{s}`"));
            }
            if !seen.insert(s) {
                push(DiagnosticKind::DuplicateName, format!("state `{s}`"));
            }
        }
        let mut seen = HashSet::new();
        for e in &a.events {
            if !valid_token(&e.name) {
                push(DiagnosticKind::BadName, format!("event name `{}`", e.name));
            }
            if !seen.insert(&e.name) {
                push(DiagnosticKind::DuplicateName, format!("event `{}`", e.name));
            }
        }
        let state_desc = |s: StateId| {
            a.states
                .get(s)
                .map_or_else(|| format!("#{s}"), |name| format!("`{name}`"))
        };
        let mut triples = HashSet::new();
        for t in &a.transitions {
            for endpoint in [t.src, t.dst] {
                if endpoint >= n {
                    push(
                        DiagnosticKind::UnknownState,
                        format!("state #{endpoint} in transition"),
                    );
                }
            }
            if t.event >= a.events.len() {
                push(
                    DiagnosticKind::UnknownEvent,
                    format!("event #{} in transition", t.event),
                );
            }
            if !triples.insert(*t) {
                push(
                    DiagnosticKind::DuplicateTransition,
                    format!("{} #{} {}", state_desc(t.src), t.event, state_desc(t.dst)),
                );
            }
        }
        for (what, set) in [
            ("initial", &a.initial),
            ("marked", &a.marked),
            ("secret", &self.secret),
            ("nonsecret", &self.nonsecret),
        ] {
            for &s in set {
                if s >= n {
                    push(DiagnosticKind::UnknownState, format!("state #{s} in {what}"));
                }
            }
        }
        for s in self.secret.intersection(&self.nonsecret) {
            push(DiagnosticKind::SecretNonsecretOverlap, format!("state {}", state_desc(*s)));
        }
        diags
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(diags))
        }
    }

    /// Restriction to reachable states, keeping labels.
    pub fn reachable_part(&self) -> Des {
        let (automaton, map) = self.automaton.reachable_part();
        let relabel =
            |set: &BTreeSet<StateId>| set.iter().filter_map(|&s| map[s]).collect::<BTreeSet<_>>();
        Des {
            name: self.name.clone(),
            secret: relabel(&self.secret),
            nonsecret: relabel(&self.nonsecret),
            automaton,
        }
    }

    pub fn same_structure(&self, other: &Des) -> bool {
        let names = |d: &Des, s: &BTreeSet<StateId>| -> BTreeSet<String> {
            s.iter()
                .map(|&i| d.automaton.state_name(i).to_string())
                .collect()
        };
        self.name == other.name
            && self.automaton.same_structure(&other.automaton)
            && names(self, &self.secret) == names(other, &other.secret)
            && names(self, &self.nonsecret) == names(other, &other.nonsecret)
    }
}

pub(crate) fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.starts_with('#') && !s.chars().any(char::is_whitespace)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    BadName,
    DuplicateName,
    UnknownState,
    UnknownEvent,
    DuplicateTransition,
    SecretNonsecretOverlap,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticKind::BadName => "bad name",
            DiagnosticKind::DuplicateName => "duplicate name",
            DiagnosticKind::UnknownState => "unknown state",
            DiagnosticKind::UnknownEvent => "unknown event",
            DiagnosticKind::DuplicateTransition => "duplicate transition",
            DiagnosticKind::SecretNonsecretOverlap => "secret/nonsecret overlap",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.message)
    }
}

/// Convenience builder used by tests, examples and the transforms.
///
/// ```
/// use kstep_opacity::automaton::DesBuilder;
/// let des = DesBuilder::new("toy")
///     .observable(&["a"])
///     .transitions(&[("1", "a", "2")])
///     .initial(&["1"])
///     .secret(&["2"])
///     .nonsecret(&["1"])
///     .build()
///     .unwrap();
/// assert_eq!(des.num_states(), 2);
/// ```
#[derive(Clone, Debug, Default)]
pub struct DesBuilder {
    name: String,
    states: Vec<String>,
    observable: Vec<String>,
    unobservable: Vec<String>,
    transitions: Vec<(String, String, String)>,
    initial: Vec<String>,
    secret: Vec<String>,
    nonsecret: Vec<String>,
    marked: Vec<String>,
}

fn owned<'a>(xs: &'a [&str]) -> impl Iterator<Item = String> + 'a {
    xs.iter().map(|s| s.to_string())
}

impl DesBuilder {
    pub fn new(name: &str) -> Self {
        DesBuilder {
            name: name.to_string(),
            ..Default::default()
        }
    }

    /// Declares states explicitly; states named by transitions or label
    /// lists are declared implicitly in order of first appearance.
    pub fn states(mut self, states: &[&str]) -> Self {
        self.states.extend(owned(states));
        self
    }

    pub fn observable(mut self, events: &[&str]) -> Self {
        self.observable.extend(owned(events));
        self
    }

    pub fn unobservable(mut self, events: &[&str]) -> Self {
        self.unobservable.extend(owned(events));
        self
    }

    pub fn transitions(mut self, ts: &[(&str, &str, &str)]) -> Self {
        self.transitions.extend(
            ts.iter()
                .map(|(p, e, q)| (p.to_string(), e.to_string(), q.to_string())),
        );
        self
    }

    pub fn initial(mut self, states: &[&str]) -> Self {
        self.initial.extend(owned(states));
        self
    }

    pub fn secret(mut self, states: &[&str]) -> Self {
        self.secret.extend(owned(states));
        self
    }

    pub fn nonsecret(mut self, states: &[&str]) -> Self {
        self.nonsecret.extend(owned(states));
        self
    }

    pub fn marked(mut self, states: &[&str]) -> Self {
        self.marked.extend(owned(states));
        self
    }

    pub fn build(self) -> Result<Des> {
        let mut a = Automaton::new();
        let state = |a: &mut Automaton, name: &str| match a.state_id(name) {
            Some(id) => id,
            None => a.add_state(name).expect("fresh"),
        };
        for s in &self.states {
            state(&mut a, s);
        }
        for e in &self.observable {
            a.add_event(e.as_str(), true)?;
        }
        for e in &self.unobservable {
            a.add_event(e.as_str(), false)?;
        }
        for (p, e, q) in &self.transitions {
            let src = state(&mut a, p);
            let dst = state(&mut a, q);
            let ev = a
                .event_id(e)
                .ok_or_else(|| Error::Precondition(format!("undeclared event `{e}`")))?;
            a.add_transition(src, ev, dst);
        }
        let ids = |a: &mut Automaton, names: &[String]| -> BTreeSet<StateId> {
            names.iter().map(|n| state(a, n)).collect()
        };
        let initial = ids(&mut a, &self.initial);
        let marked = ids(&mut a, &self.marked);
        let secret = ids(&mut a, &self.secret);
        let nonsecret = ids(&mut a, &self.nonsecret);
        for s in initial {
            a.set_initial(s);
        }
        for s in marked {
            a.set_marked(s);
        }
        let des = Des {
            name: self.name,
            automaton: a,
            secret,
            nonsecret,
        };
        des.ensure_valid()?;
        Ok(des)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> Des {
        DesBuilder::new("two")
            .observable(&["a"])
            .transitions(&[("1", "a", "2")])
            .initial(&["1"])
            .secret(&["2"])
            .nonsecret(&["1"])
            .build()
            .unwrap()
    }

    #[test]
    fn well_formed_des_has_no_diagnostics() {
        assert!(two_state().validate().is_empty());
    }

    #[test]
    fn overlap_is_reported() {
        let mut d = two_state();
        d.nonsecret.insert(1);
        let diags = d.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::SecretNonsecretOverlap);
        assert!(diags[0].to_string().starts_with("secret/nonsecret overlap"));
    }

    #[test]
    fn undeclared_state_in_transition_is_reported() {
        let a = Automaton::from_raw(
            vec!["1".into(), "2".into()],
            vec![Event {
                name: "a".into(),
                observable: true,
            }],
            vec![Transition {
                src: 0,
                event: 0,
                dst: 5,
            }],
            [0],
            [],
        );
        let d = Des::new("bad", a);
        let diags = d.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::UnknownState);
    }

    #[test]
    fn duplicate_names_and_triples_are_reported() {
        let ev = Event {
            name: "a".into(),
            observable: true,
        };
        let t = Transition {
            src: 0,
            event: 0,
            dst: 0,
        };
        let a = Automaton::from_raw(
            vec!["x".into(), "x".into(), "#y".into()],
            vec![ev.clone(), ev],
            vec![t, t],
            [0],
            [],
        );
        let kinds: Vec<_> = Des::new("bad", a).validate().into_iter().map(|d| d.kind).collect();
        assert_eq!(
            kinds,
            vec![
                DiagnosticKind::DuplicateName,
                DiagnosticKind::BadName,
                DiagnosticKind::DuplicateName,
                DiagnosticKind::DuplicateTransition,
            ]
        );
    }

    #[test]
    fn builder_deduplicates_transitions() {
        let mut a = Automaton::new();
        let p = a.add_state("p").unwrap();
        let e = a.add_event("a", true).unwrap();
        assert!(a.add_transition(p, e, p));
        assert!(!a.add_transition(p, e, p));
        assert_eq!(a.num_transitions(), 1);
        assert!(matches!(a.add_state("p"), Err(Error::NameCollision(_))));
    }

    #[test]
    fn reachable_part_drops_isolated_state() {
        let d = DesBuilder::new("iso")
            .observable(&["a"])
            .states(&["1", "2", "3"])
            .transitions(&[("1", "a", "2")])
            .initial(&["1"])
            .secret(&["3"])
            .build()
            .unwrap();
        let r = d.reachable_part();
        assert_eq!(r.num_states(), 2);
        assert!(r.secret.is_empty());
        assert!(r.automaton.state_id("3").is_none());
    }

    #[test]
    fn reachable_part_is_identity_when_all_reachable() {
        let d = two_state();
        assert!(d.reachable_part().same_structure(&d));
    }
}
