//! The estimator product `P(G) × G^obs` and the synchronous product `∥`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automaton::{Automaton, Des, EventId, StateId};
use crate::error::{Error, Result};
use crate::observer::{Limits, Projection, SubsetCache};
use crate::stateset::StateSet;

/// A state of `P(G) × G^obs`: one state of the projected automaton paired
/// with an observer state (a set of states, possibly empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EstimatorPair {
    pub left: StateId,
    pub right: StateSet,
}

/// Lazily expanded `P(G) × G^obs`.
///
/// Right components are computed on demand from their sets, so observer
/// states that are unreachable from the initial observer state are built
/// when a product path needs them.
#[derive(Debug)]
pub struct EstimatorProduct<'p> {
    proj: &'p Projection,
    observer: SubsetCache,
    pairs: Vec<(StateId, usize)>,
    index: HashMap<(StateId, usize), usize>,
    limit: usize,
}

impl<'p> EstimatorProduct<'p> {
    pub fn new(proj: &'p Projection, limits: &Limits) -> Self {
        EstimatorProduct {
            proj,
            observer: SubsetCache::new(proj.num_observable(), limits.max_observer_states),
            pairs: Vec::new(),
            index: HashMap::new(),
            limit: limits.max_product_states,
        }
    }

    pub fn projection(&self) -> &Projection {
        self.proj
    }

    /// Interns a pair; returns its id and whether it is new.
    pub fn intern(&mut self, pair: &EstimatorPair) -> Result<(usize, bool)> {
        let (right, _) = self.observer.intern(pair.right.clone())?;
        self.intern_ids(pair.left, right)
    }

    fn intern_ids(&mut self, left: StateId, right: usize) -> Result<(usize, bool)> {
        if let Some(&id) = self.index.get(&(left, right)) {
            return Ok((id, false));
        }
        if self.pairs.len() >= self.limit {
            return Err(Error::ResourceLimit {
                what: "product states",
                limit: self.limit,
            });
        }
        let id = self.pairs.len();
        self.pairs.push((left, right));
        self.index.insert((left, right), id);
        Ok((id, true))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn left(&self, id: usize) -> StateId {
        self.pairs[id].0
    }

    pub fn right(&self, id: usize) -> &StateSet {
        self.observer.set(self.pairs[id].1)
    }

    pub fn pair(&self, id: usize) -> EstimatorPair {
        EstimatorPair {
            left: self.left(id),
            right: self.right(id).clone(),
        }
    }

    /// Whether the non-secret estimate of this pair is empty.
    pub fn is_exposed(&self, id: usize) -> bool {
        self.right(id).is_empty()
    }

    /// All successors `(event index, pair id, new)` in event-index order, then
    /// by left state.
    pub fn successors(&mut self, id: usize) -> Result<Vec<(usize, usize, bool)>> {
        let proj = self.proj;
        let (left, right) = self.pairs[id];
        let mut out = Vec::new();
        for i in 0..proj.num_observable() {
            let targets = proj.gamma(left, i);
            if targets.is_empty() {
                continue;
            }
            let next_right = self.observer.step(proj, right, i)?;
            for q in targets.iter() {
                let (nid, fresh) = self.intern_ids(q, next_right)?;
                out.push((i, nid, fresh));
            }
        }
        Ok(out)
    }
}

/// Fully explored reachable part of `P(G) × G^obs` from a set of initial
/// pairs.
#[derive(Clone, Debug)]
pub struct ProductAutomaton {
    pub pairs: Vec<EstimatorPair>,
    pub initial: BTreeSet<usize>,
    /// `(src, observable event name, dst)`
    pub transitions: Vec<(usize, String, usize)>,
}

impl ProductAutomaton {
    pub fn find(&self, pair: &EstimatorPair) -> Option<usize> {
        self.pairs.iter().position(|p| p == pair)
    }
}

pub fn product_with_observer(
    d: &Des,
    initials: &[EstimatorPair],
    limits: &Limits,
) -> Result<ProductAutomaton> {
    let proj = Projection::new(&d.automaton);
    let mut product = EstimatorProduct::new(&proj, limits);
    let mut queue = VecDeque::new();
    let mut initial = BTreeSet::new();
    for p in initials {
        let (id, fresh) = product.intern(p)?;
        initial.insert(id);
        if fresh {
            queue.push_back(id);
        }
    }
    let mut transitions = Vec::new();
    while let Some(id) = queue.pop_front() {
        for (i, next, fresh) in product.successors(id)? {
            transitions.push((id, proj.event_name(i).to_string(), next));
            if fresh {
                queue.push_back(next);
            }
        }
    }
    Ok(ProductAutomaton {
        pairs: (0..product.len()).map(|id| product.pair(id)).collect(),
        initial,
        transitions,
    })
}

/// Result of [`sync_product`]: the automaton and, for each of its states,
/// the component states it pairs.
#[derive(Clone, Debug)]
pub struct SyncProduct {
    pub automaton: Automaton,
    pub pairs: Vec<(StateId, StateId)>,
}

/// Reachable part of the synchronous product `a ∥ b`.
///
/// Events are matched by name. Shared events move both components; private
/// events move their own component only. A pair is initial iff both parts
/// are, and marked iff both parts are. Shared events keep `a`'s
/// observability flag. States are named `(p,r)`.
pub fn sync_product(a: &Automaton, b: &Automaton) -> SyncProduct {
    let mut out = Automaton::new();
    // event ids in the product for each component's events
    let mut a_ev = Vec::new();
    for e in a.events() {
        a_ev.push(out.add_event(e.name.as_str(), e.observable).expect("unique"));
    }
    let mut b_ev = Vec::new();
    for e in b.events() {
        b_ev.push(out.ensure_event(&e.name, e.observable));
    }
    let shared_in_b: Vec<Option<EventId>> = a
        .events()
        .iter()
        .map(|e| b.event_id(&e.name))
        .collect();
    let private_b: Vec<bool> = b
        .events()
        .iter()
        .map(|e| a.event_id(&e.name).is_none())
        .collect();

    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut visit = |out: &mut Automaton,
                     pairs: &mut Vec<(StateId, StateId)>,
                     queue: &mut VecDeque<StateId>,
                     p: StateId,
                     r: StateId| {
        *index.entry((p, r)).or_insert_with(|| {
            let mut name = format!("({},{})", a.state_name(p), b.state_name(r));
            // names containing commas or parentheses can make pair names ambiguous
            while out.state_id(&name).is_some() {
                name.push('\'');
            }
            let id = out.add_state(name).expect("fresh name");
            if a.marked().contains(&p) && b.marked().contains(&r) {
                out.set_marked(id);
            }
            pairs.push((p, r));
            queue.push_back(id);
            id
        })
    };
    for &p in a.initial() {
        for &r in b.initial() {
            let id = visit(&mut out, &mut pairs, &mut queue, p, r);
            out.set_initial(id);
        }
    }
    while let Some(id) = queue.pop_front() {
        let (p, r) = pairs[id];
        for &(e, p2) in a.successors(p) {
            match shared_in_b[e] {
                None => {
                    let nid = visit(&mut out, &mut pairs, &mut queue, p2, r);
                    out.add_transition(id, a_ev[e], nid);
                }
                Some(eb) => {
                    for &(f, r2) in b.successors(r) {
                        if f == eb {
                            let nid = visit(&mut out, &mut pairs, &mut queue, p2, r2);
                            out.add_transition(id, a_ev[e], nid);
                        }
                    }
                }
            }
        }
        for &(f, r2) in b.successors(r) {
            if private_b[f] {
                let nid = visit(&mut out, &mut pairs, &mut queue, p, r2);
                out.add_transition(id, b_ev[f], nid);
            }
        }
    }
    SyncProduct {
        automaton: out,
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::DesBuilder;

    fn aut(ts: &[(&str, &str, &str)], events: &[&str], initial: &[&str]) -> Automaton {
        DesBuilder::new("x")
            .observable(events)
            .transitions(ts)
            .initial(initial)
            .build()
            .unwrap()
            .automaton
    }

    #[test]
    fn empty_initials_give_empty_product() {
        let d = DesBuilder::new("x")
            .states(&["1"])
            .initial(&["1"])
            .build()
            .unwrap();
        let p = product_with_observer(&d, &[], &Limits::default()).unwrap();
        assert!(p.pairs.is_empty());
    }

    #[test]
    fn empty_alphabet_partner_is_transparent() {
        let a = aut(&[("1", "x", "2"), ("2", "x", "1")], &["x"], &["1"]);
        let b = DesBuilder::new("b")
            .states(&["r"])
            .initial(&["r"])
            .build()
            .unwrap()
            .automaton;
        let p = sync_product(&a, &b);
        assert_eq!(p.automaton.num_states(), 2);
        assert_eq!(p.automaton.num_transitions(), 2);
        assert!(p.automaton.state_id("(1,r)").is_some());
    }

    #[test]
    fn shared_events_intersect() {
        let a = aut(&[("1", "x", "1")], &["x"], &["1"]);
        let b = aut(&[("p", "x", "q"), ("q", "x", "r")], &["x"], &["p"]);
        let p = sync_product(&a, &b);
        assert_eq!(p.automaton.num_states(), 3);
        let x = p.automaton.event_id("x").unwrap();
        let init = p.automaton.initial_set();
        assert!(!p.automaton.run(&init, &[x, x]).is_empty());
        assert!(p.automaton.run(&init, &[x, x, x]).is_empty());
    }
}
