//! Brute-force decision of K-step opacity straight from its definition.
//!
//! For every `st ∈ L(G)` with `|P(st)| ≤ max_len`, `|P(t)| ≤ K` and
//! `δ(δ(I,s) ∩ Q_S, t) ≠ ∅`, the oracle asks whether some `s't'` with the
//! same projections leaves a non-secret run alive, i.e. whether
//! `δ(δ(I, P⁻¹P(s)) ∩ Q_NS, P⁻¹P(t)) ≠ ∅`.
//!
//! The enumeration walks strings over the full alphabet event by event,
//! following one concrete run while tracking the intruder's estimate
//! `δ(I,P⁻¹P(s))` alongside. It shares no code with the projection and
//! observer used by [`crate::verify`]. Strings that lead to a configuration
//! already seen with fewer observations are skipped, since their
//! continuations are the same.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::automaton::{Automaton, Des, EventId, StateId};
use crate::error::{Error, Result};
use crate::stateset::StateSet;
use crate::step_bound::StepBound;
use crate::verify::{Verdict, Witness};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OracleMode {
    /// Match the secret string against all look-alike strings at once by
    /// propagating state sets.
    #[default]
    SetPropagation,
    /// Enumerate candidate `s't'` strings literally, bounded by `max_len`
    /// events in total (observable or not). Only suitable for tiny bounds; a missing look-alike longer
    /// than `max_len` is reported as a violation.
    StringPairs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Bound on the number of observable events in `st`.
    pub max_len: usize,
    pub k: StepBound,
    pub mode: OracleMode,
}

impl OracleConfig {
    pub fn new(max_len: usize, k: StepBound) -> Self {
        OracleConfig {
            max_len: max_len.max(1),
            k,
            mode: OracleMode::SetPropagation,
        }
    }

    /// `2^n·(n+1) + min(K, 2^n)`, saturating.
    pub fn sufficient(n: usize, k: StepBound) -> Self {
        let pow = 1usize.checked_shl(n as u32).unwrap_or(usize::MAX);
        let base = pow.saturating_mul(n + 1);
        let max_len = base.saturating_add(k.clamp(pow));
        OracleConfig::new(max_len, k)
    }

    pub fn with_mode(mut self, mode: OracleMode) -> Self {
        self.mode = mode;
        self
    }
}

pub fn oracle_kso(d: &Des, cfg: &OracleConfig) -> Result<Verdict> {
    d.ensure_valid()?;
    match cfg.mode {
        OracleMode::SetPropagation => SetSearch::new(d, cfg).run(),
        OracleMode::StringPairs => string_pairs(d, cfg),
    }
}

pub fn oracle_cso(d: &Des, max_len: usize) -> Result<Verdict> {
    oracle_kso(d, &OracleConfig::new(max_len, StepBound::zero()))
}

fn hidden_closure(a: &Automaton, set: &StateSet) -> StateSet {
    let mut out = set.clone();
    let mut queue: VecDeque<StateId> = set.iter().collect();
    while let Some(q) = queue.pop_front() {
        for &(e, r) in a.successors(q) {
            if !a.is_observable(e) && out.insert(r) {
                queue.push_back(r);
            }
        }
    }
    out
}

fn post(a: &Automaton, set: &StateSet, event: EventId) -> StateSet {
    let mut out = StateSet::new();
    for q in set.iter() {
        for &(e, r) in a.successors(q) {
            if e == event {
                out.insert(r);
            }
        }
    }
    out
}

/// All events sorted by name.
fn alphabet(a: &Automaton) -> Vec<EventId> {
    let mut evs: Vec<EventId> = (0..a.num_events()).collect();
    evs.sort_by(|&x, &y| a.event(x).name.cmp(&a.event(y).name));
    evs
}

struct SetSearch<'a> {
    d: &'a Des,
    cfg: &'a OracleConfig,
    events: Vec<EventId>,
    secret: StateSet,
    nonsecret: StateSet,
    truncated: bool,
}

/// Node of the `s` enumeration: the state one run of `s` ends in, and the
/// intruder's estimate `δ(I, P⁻¹P(s))`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct SNode {
    state: StateId,
    estimate: StateSet,
}

/// Node of the `t` enumeration: the state the secret run of `t` ends in, and
/// what is left of the non-secret look-alikes. The number of observations
/// made so far is the search distance, not part of the node: fewer is never
/// worse.
#[derive(Clone, PartialEq, Eq, Hash)]
struct TNode {
    state: StateId,
    nonsecret: StateSet,
}

/// Shortest paths where unobservable events are free (0-1 BFS).
struct Search<N> {
    nodes: Vec<(N, usize)>,
    parent: Vec<Option<(usize, EventId)>>,
    index: HashMap<N, usize>,
    queue: VecDeque<usize>,
}

impl<N: Clone + Eq + std::hash::Hash> Search<N> {
    fn new(starts: impl IntoIterator<Item = N>) -> Self {
        let mut s = Search {
            nodes: Vec::new(),
            parent: Vec::new(),
            index: HashMap::new(),
            queue: VecDeque::new(),
        };
        for n in starts {
            s.relax(n, 0, None);
        }
        s
    }

    /// Records `node` at distance `dist` unless it is known no farther.
    fn relax(&mut self, node: N, dist: usize, via: Option<(usize, EventId)>) {
        let free = via.is_some_and(|(from, _)| self.nodes[from].1 == dist);
        match self.index.get(&node) {
            Some(&id) if self.nodes[id].1 <= dist => {}
            Some(&id) => {
                self.nodes[id].1 = dist;
                self.parent[id] = via;
                self.push(id, free);
            }
            None => {
                let id = self.nodes.len();
                self.index.insert(node.clone(), id);
                self.nodes.push((node, dist));
                self.parent.push(via);
                self.push(id, free);
            }
        }
    }

    fn push(&mut self, id: usize, front: bool) {
        if front {
            self.queue.push_front(id);
        } else {
            self.queue.push_back(id);
        }
    }

    fn known(&self, node: &N) -> bool {
        self.index.contains_key(node)
    }
}

impl<'a> SetSearch<'a> {
    fn new(d: &'a Des, cfg: &'a OracleConfig) -> Self {
        SetSearch {
            d,
            cfg,
            events: alphabet(&d.automaton),
            secret: d.secret_set(),
            nonsecret: d.nonsecret_set(),
            truncated: false,
        }
    }

    fn a(&self) -> &'a Automaton {
        &self.d.automaton
    }

    fn run(mut self) -> Result<Verdict> {
        let a = self.a();
        let estimate = hidden_closure(a, &a.initial_set());
        let mut search = Search::new(a.initial().iter().map(|&q| SNode {
            state: q,
            estimate: estimate.clone(),
        }));
        let mut done = HashSet::new();
        while let Some(id) = search.queue.pop_front() {
            if !done.insert(id) {
                continue;
            }
            let (node, len) = search.nodes[id].clone();
            if self.secret.contains(node.state) {
                if let Some(t) = self.search_t(&node, len) {
                    let s = trace(&search.parent, id);
                    return Ok(Verdict::violated(self.witness(&s, &t, node.state)));
                }
            }
            for &e in &self.events {
                let observable = a.is_observable(e);
                let estimate = if observable {
                    hidden_closure(a, &post(a, &node.estimate, e))
                } else {
                    node.estimate.clone()
                };
                let dist = len + usize::from(observable);
                for &(f, r) in a.successors(node.state) {
                    if f != e {
                        continue;
                    }
                    let next = SNode {
                        state: r,
                        estimate: estimate.clone(),
                    };
                    if dist > self.cfg.max_len {
                        self.truncated |= !search.known(&next);
                        continue;
                    }
                    search.relax(next, dist, Some((id, e)));
                }
            }
        }
        if self.truncated {
            Err(Error::Inconclusive {
                max_len: self.cfg.max_len,
            })
        } else {
            Ok(Verdict::opaque())
        }
    }

    /// Shortest continuation `t` of the secret run ending in `s.state` with
    /// `|P(t)| ≤ K` after which no non-secret look-alike survives.
    fn search_t(&mut self, s: &SNode, s_len: usize) -> Option<Vec<EventId>> {
        let a = self.a();
        let start = TNode {
            state: s.state,
            nonsecret: hidden_closure(a, &s.estimate.intersection(&self.nonsecret)),
        };
        let mut search = Search::new([start]);
        let mut done = HashSet::new();
        while let Some(id) = search.queue.pop_front() {
            if !done.insert(id) {
                continue;
            }
            let (node, observed) = search.nodes[id].clone();
            if node.nonsecret.is_empty() {
                return Some(trace(&search.parent, id));
            }
            for &(e, r) in a.successors(node.state) {
                let (nonsecret, seen) = if a.is_observable(e) {
                    if !self.cfg.k.admits(observed + 1) {
                        continue;
                    }
                    (hidden_closure(a, &post(a, &node.nonsecret, e)), observed + 1)
                } else {
                    (node.nonsecret.clone(), observed)
                };
                let next = TNode { state: r, nonsecret };
                if s_len + seen > self.cfg.max_len {
                    self.truncated |= !search.known(&next);
                    continue;
                }
                search.relax(next, seen, Some((id, e)));
            }
        }
        None
    }

    fn witness(&self, s: &[EventId], t: &[EventId], x: StateId) -> Witness {
        let a = self.a();
        let obs = |w: &[EventId]| {
            w.iter()
                .filter(|&&e| a.is_observable(e))
                .map(|&e| a.event(e).name.clone())
                .collect()
        };
        Witness {
            s_obs: obs(s),
            t_obs: obs(t),
            secret_state: a.state_name(x).to_string(),
        }
    }
}

fn trace(parent: &[Option<(usize, EventId)>], mut id: usize) -> Vec<EventId> {
    let mut word = Vec::new();
    while let Some((prev, e)) = parent[id] {
        word.push(e);
        id = prev;
    }
    word.reverse();
    word
}

/// Literal reading: enumerate every `st` and every `s't'` up to `max_len`.
fn string_pairs(d: &Des, cfg: &OracleConfig) -> Result<Verdict> {
    let a = &d.automaton;
    let events = alphabet(a);
    let secret = d.secret_set();
    let nonsecret = d.nonsecret_set();

    // all strings of L(G) up to max_len, in length-lexicographic order
    let mut language: Vec<Vec<EventId>> = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..cfg.max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &e in &events {
                let mut w2: Vec<EventId> = w.clone();
                w2.push(e);
                if !a.run(&a.initial_set(), &w2).is_empty() {
                    next.push(w2);
                }
            }
        }
        language.extend(next.iter().cloned());
        layer = next;
    }
    let project = |w: &[EventId]| -> Vec<EventId> {
        w.iter().copied().filter(|&e| a.is_observable(e)).collect()
    };
    let mut covered: HashSet<(Vec<EventId>, Vec<EventId>)> = HashSet::new();
    for w in &language {
        for split in 0..=w.len() {
            let (s, t) = w.split_at(split);
            let from = a.run(&a.initial_set(), s).intersection(&nonsecret);
            if !a.run(&from, t).is_empty() {
                covered.insert((project(s), project(t)));
            }
        }
    }
    for w in &language {
        for split in 0..=w.len() {
            let (s, t) = w.split_at(split);
            let pt = project(t);
            if !cfg.k.admits(pt.len()) {
                continue;
            }
            let from = a.run(&a.initial_set(), s).intersection(&secret);
            if a.run(&from, t).is_empty() {
                continue;
            }
            let ps = project(s);
            if !covered.contains(&(ps.clone(), pt.clone())) {
                let x = from
                    .iter()
                    .find(|&x| !a.run(&StateSet::singleton(x), t).is_empty())
                    .expect("nonempty");
                let names = |w: &[EventId]| w.iter().map(|&e| a.event(e).name.clone()).collect();
                return Ok(Verdict::violated(Witness {
                    s_obs: names(&ps),
                    t_obs: names(&pt),
                    secret_state: a.state_name(x).to_string(),
                }));
            }
        }
    }
    Ok(Verdict::opaque())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::DesBuilder;

    fn running_example(c_observable: bool) -> Des {
        let mut b = DesBuilder::new("running").observable(&["a", "b"]);
        b = if c_observable {
            b.observable(&["c"])
        } else {
            b.unobservable(&["c"])
        };
        b.states(&["1", "2", "3", "4", "5"])
            .transitions(&[
                ("1", "a", "2"),
                ("1", "a", "4"),
                ("2", "b", "3"),
                ("4", "c", "5"),
                ("5", "b", "3"),
            ])
            .initial(&["1"])
            .secret(&["2"])
            .nonsecret(&["4"])
            .build()
            .unwrap()
    }

    #[test]
    fn observable_running_example_violates_one_step() {
        let d = running_example(true);
        let v = oracle_kso(&d, &OracleConfig::new(4, StepBound::finite(1))).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w.s_obs, vec!["a"]);
        assert_eq!(w.t_obs, vec!["b"]);
        assert_eq!(w.secret_state, "2");
    }

    #[test]
    fn hidden_running_example_is_one_step_opaque() {
        let d = running_example(false);
        assert!(oracle_kso(&d, &OracleConfig::new(6, StepBound::finite(1)))
            .unwrap()
            .opaque);
    }

    #[test]
    fn observable_running_example_is_cso() {
        assert!(oracle_cso(&running_example(true), 4).unwrap().opaque);
    }

    #[test]
    fn no_secret_is_opaque() {
        let mut d = running_example(true);
        d.secret.clear();
        for k in [StepBound::zero(), StepBound::Infinite] {
            assert!(oracle_kso(&d, &OracleConfig::new(3, k)).unwrap().opaque);
        }
    }

    #[test]
    fn single_path_to_secret_only_estimate() {
        let d = DesBuilder::new("p")
            .observable(&["a"])
            .transitions(&[("1", "a", "2")])
            .initial(&["1"])
            .secret(&["2"])
            .nonsecret(&["1"])
            .build()
            .unwrap();
        assert!(!oracle_cso(&d, 3).unwrap().opaque);
    }

    #[test]
    fn empty_language_with_nonsecret_initial() {
        let d = DesBuilder::new("e")
            .observable(&["a"])
            .states(&["1"])
            .initial(&["1"])
            .nonsecret(&["1"])
            .build()
            .unwrap();
        assert!(oracle_cso(&d, 1).unwrap().opaque);
    }

    #[test]
    fn truncation_is_inconclusive() {
        // a secret reached only after three steps cannot be judged with
        // max_len 2
        let d = DesBuilder::new("chain")
            .observable(&["a"])
            .transitions(&[("1", "a", "2"), ("2", "a", "3"), ("3", "a", "4")])
            .initial(&["1"])
            .secret(&["4"])
            .build()
            .unwrap();
        assert!(matches!(
            oracle_cso(&d, 2),
            Err(Error::Inconclusive { max_len: 2 })
        ));
        assert!(!oracle_cso(&d, 3).unwrap().opaque);
    }

    #[test]
    fn string_pair_mode_agrees_on_running_example() {
        for (c_obs, expected) in [(true, false), (false, true)] {
            let d = running_example(c_obs);
            let cfg = OracleConfig::new(4, StepBound::finite(1)).with_mode(OracleMode::StringPairs);
            assert_eq!(oracle_kso(&d, &cfg).unwrap().opaque, expected);
        }
    }

    #[test]
    fn sufficient_bound_formula() {
        assert_eq!(OracleConfig::sufficient(3, StepBound::finite(2)).max_len, 8 * 4 + 2);
        assert_eq!(OracleConfig::sufficient(3, StepBound::Infinite).max_len, 8 * 4 + 8);
        assert_eq!(OracleConfig::sufficient(200, StepBound::zero()).max_len, usize::MAX);
    }
}
