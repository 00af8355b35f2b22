//! Projection onto observable events and the subset-construction observer.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{Automaton, Des, EventId, StateId};
use crate::error::{Error, Result};
use crate::stateset::StateSet;

/// Caps on explored state spaces. Exceeding one yields
/// [`Error::ResourceLimit`] rather than exhausting memory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_observer_states: usize,
    pub max_product_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_observer_states: 1 << 22,
            max_product_states: 1 << 22,
        }
    }
}

/// Unobservable closure of `states` (fixpoint of following unobservable
/// transitions).
pub fn unobservable_closure(a: &Automaton, states: &StateSet) -> StateSet {
    let mut closed = states.clone();
    let mut stack: Vec<StateId> = states.iter().collect();
    while let Some(s) = stack.pop() {
        for &(e, d) in a.successors(s) {
            if !a.is_observable(e) && closed.insert(d) {
                stack.push(d);
            }
        }
    }
    closed
}

/// The projected transition function `γ(q, a) = δ(q, P⁻¹(a))`, tabulated for
/// every state and observable event.
///
/// Observable events are indexed `0..num_observable()` in name order.
#[derive(Clone, Debug)]
pub struct Projection {
    observable: Vec<EventId>,
    names: Vec<String>,
    gamma: Vec<Vec<StateSet>>,
    initial: StateSet,
    num_states: usize,
}

impl Projection {
    pub fn new(a: &Automaton) -> Self {
        let observable = a.observable_events();
        let names = observable
            .iter()
            .map(|&e| a.event(e).name.clone())
            .collect();
        let closures: Vec<StateSet> = (0..a.num_states())
            .map(|q| unobservable_closure(a, &StateSet::singleton(q)))
            .collect();
        let position: HashMap<EventId, usize> =
            observable.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let gamma = closures
            .iter()
            .map(|pre| {
                let mut direct = vec![StateSet::new(); observable.len()];
                for p in pre.iter() {
                    for &(e, d) in a.successors(p) {
                        if let Some(&i) = position.get(&e) {
                            direct[i].union_with(&closures[d]);
                        }
                    }
                }
                direct
            })
            .collect();
        Projection {
            initial: unobservable_closure(a, &a.initial_set()),
            observable,
            names,
            gamma,
            num_states: a.num_states(),
        }
    }

    pub fn num_observable(&self) -> usize {
        self.observable.len()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// Original event id of observable index `i`.
    pub fn event_id(&self, i: usize) -> EventId {
        self.observable[i]
    }

    pub fn event_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Unobservable closure of the initial states.
    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    pub fn gamma(&self, q: StateId, i: usize) -> &StateSet {
        &self.gamma[q][i]
    }

    /// `δ(z, P⁻¹(a))`; the empty set maps to itself.
    pub fn step(&self, z: &StateSet, i: usize) -> StateSet {
        let mut next = StateSet::new();
        for q in z.iter() {
            next.union_with(&self.gamma[q][i]);
        }
        next
    }

    /// `δ(z, P⁻¹(w))` for an observable word given as indices.
    pub fn run(&self, z: &StateSet, word: &[usize]) -> StateSet {
        word.iter().fold(z.clone(), |cur, &i| self.step(&cur, i))
    }

    /// Resolve observable event names to indices.
    pub fn word(&self, names: &[String]) -> Option<Vec<usize>> {
        names.iter().map(|n| self.index_of(n)).collect()
    }

    pub fn names_of(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&i| self.names[i].clone()).collect()
    }
}

/// The projected automaton `P(G)`: same states, observable alphabet only,
/// unobservable moves folded into the observable transitions and the
/// initial set.
pub fn project(d: &Des) -> Automaton {
    let a = &d.automaton;
    let proj = Projection::new(a);
    let mut out = Automaton::new();
    for name in a.state_names() {
        out.add_state(name.as_str()).expect("names are unique");
    }
    for i in 0..proj.num_observable() {
        out.add_event(proj.event_name(i), true)
            .expect("names are unique");
    }
    for q in 0..a.num_states() {
        for i in 0..proj.num_observable() {
            for r in proj.gamma(q, i).iter() {
                out.add_transition(q, i, r);
            }
        }
    }
    for q in proj.initial().iter() {
        out.set_initial(q);
    }
    for &q in a.marked() {
        out.set_marked(q);
    }
    out
}

/// Single observer transition `δ(z, P⁻¹(a))` for the observable event named
/// `event`.
pub fn observer_step(d: &Des, z: &StateSet, event: &str) -> Result<StateSet> {
    let proj = Projection::new(&d.automaton);
    let i = proj
        .index_of(event)
        .ok_or_else(|| Error::Precondition(format!("`{event}` is not an observable event")))?;
    Ok(proj.step(z, i))
}

const UNEXPANDED: usize = usize::MAX;

/// Interned observer states with memoised transitions. Used both for the
/// eager reachable observer and for on-demand expansion inside products.
#[derive(Clone, Debug)]
pub struct SubsetCache {
    sets: Vec<StateSet>,
    index: HashMap<StateSet, usize>,
    succ: Vec<Vec<usize>>,
    alphabet: usize,
    limit: usize,
}

impl SubsetCache {
    pub fn new(alphabet: usize, limit: usize) -> Self {
        SubsetCache {
            sets: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
            alphabet,
            limit,
        }
    }

    /// Returns the id of `set` and whether it was new.
    pub fn intern(&mut self, set: StateSet) -> Result<(usize, bool)> {
        if let Some(&id) = self.index.get(&set) {
            return Ok((id, false));
        }
        if self.sets.len() >= self.limit {
            return Err(Error::ResourceLimit {
                what: "observer states",
                limit: self.limit,
            });
        }
        let id = self.sets.len();
        self.index.insert(set.clone(), id);
        self.sets.push(set);
        self.succ.push(vec![UNEXPANDED; self.alphabet]);
        Ok((id, true))
    }

    pub fn id_of(&self, set: &StateSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn set(&self, id: usize) -> &StateSet {
        &self.sets[id]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn step(&mut self, proj: &Projection, id: usize, i: usize) -> Result<usize> {
        let cached = self.succ[id][i];
        if cached != UNEXPANDED {
            return Ok(cached);
        }
        let next = proj.step(&self.sets[id], i);
        let (nid, _) = self.intern(next)?;
        self.succ[id][i] = nid;
        Ok(nid)
    }
}

/// The reachable part of the observer with a BFS spanning tree.
#[derive(Clone, Debug)]
pub struct Observer {
    pub projection: Projection,
    /// Observer states in BFS discovery order; index 0 is the initial one.
    pub states: Vec<StateSet>,
    /// `delta[x][i]` is the successor of state `x` under observable index `i`.
    pub delta: Vec<Vec<usize>>,
    /// BFS parent `(state, event index)`; `None` for the initial state.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl Observer {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Length-lexicographically least observation reaching state `x`.
    pub fn access_word(&self, x: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = x;
        while let Some((prev, i)) = self.parent[cur] {
            word.push(i);
            cur = prev;
        }
        word.reverse();
        word
    }

    pub fn contains_empty(&self) -> bool {
        self.states.iter().any(StateSet::is_empty)
    }
}

/// Breadth-first enumeration of all observer states reachable from the
/// closure of the initial states, with the full transition table.
pub fn observer_reach(d: &Des, limits: &Limits) -> Result<Observer> {
    let projection = Projection::new(&d.automaton);
    observer_reach_with(projection, limits)
}

pub(crate) fn observer_reach_with(projection: Projection, limits: &Limits) -> Result<Observer> {
    let k = projection.num_observable();
    let mut cache = SubsetCache::new(k, limits.max_observer_states);
    let mut parent = vec![None];
    cache.intern(projection.initial().clone())?;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for i in 0..k {
            let before = cache.len();
            let y = cache.step(&projection, x, i)?;
            if cache.len() > before {
                parent.push(Some((x, i)));
                queue.push_back(y);
            }
        }
    }
    let delta = (0..cache.len())
        .map(|x| cache.succ[x].clone())
        .collect();
    Ok(Observer {
        states: cache.sets,
        delta,
        parent,
        projection,
    })
}
