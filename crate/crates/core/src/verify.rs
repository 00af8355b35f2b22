//! Deciding K-step opacity by bounded BFS over `P(G) × G^obs`.
//!
//! For every reachable observer state `X` and secret `x ∈ X` the pair
//! `(x, X ∩ Q_NS)` seeds the search. The system is K-step opaque iff no pair
//! whose right component is empty is reached within `K` observable steps.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::automaton::{Des, StateId};
use crate::error::Result;
use crate::observer::{observer_reach_with, Limits, Observer, Projection};
use crate::product::{EstimatorPair, EstimatorProduct};
use crate::step_bound::StepBound;

/// Evidence of a violation at the level of observations: after observing
/// `s_obs` the intruder's estimate contains `secret_state`, and after the
/// further observation `t_obs` every non-secret run consistent with `s_obs`
/// has died while the secret one survives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub s_obs: Vec<String>,
    pub t_obs: Vec<String>,
    pub secret_state: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[String]| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                w.join(" ")
            }
        };
        write!(
            f,
            "s_obs = {}; t_obs = {}; secret state {}",
            word(&self.s_obs),
            word(&self.t_obs),
            self.secret_state
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub opaque: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn opaque() -> Self {
        Verdict {
            opaque: true,
            witness: None,
        }
    }

    pub fn violated(witness: Witness) -> Self {
        Verdict {
            opaque: false,
            witness: Some(witness),
        }
    }
}

/// Work counters of one verification run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub observer_states: usize,
    pub initial_pairs: usize,
    pub product_states: usize,
    /// Product states whose successors were generated by the BFS.
    pub expansions: usize,
    /// Number of BFS levels explored beyond the initial pairs.
    pub levels: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

/// The set `Y` of initial pairs, each with the first (in BFS order) observer
/// state that contributes it.
fn seed_pairs(d: &Des, observer: &Observer) -> BTreeMap<EstimatorPair, usize> {
    let secret = d.secret_set();
    let nonsecret = d.nonsecret_set();
    let mut seeds = BTreeMap::new();
    for (xid, x) in observer.states.iter().enumerate() {
        let right = x.intersection(&nonsecret);
        for s in x.intersection(&secret).iter() {
            seeds
                .entry(EstimatorPair {
                    left: s,
                    right: right.clone(),
                })
                .or_insert(xid);
        }
    }
    seeds
}

/// The set `Y`.
pub fn initial_pairs(d: &Des) -> Result<Vec<EstimatorPair>> {
    initial_pairs_with(d, &Limits::default())
}

pub fn initial_pairs_with(d: &Des, limits: &Limits) -> Result<Vec<EstimatorPair>> {
    d.ensure_valid()?;
    let observer = observer_reach_with(Projection::new(&d.automaton), limits)?;
    Ok(seed_pairs(d, &observer).into_keys().collect())
}

pub fn verify_kso(d: &Des, k: &StepBound) -> Result<Verdict> {
    check_kso(d, k, &Limits::default()).map(|r| r.verdict)
}

pub fn verify_cso(d: &Des) -> Result<Verdict> {
    verify_kso(d, &StepBound::zero())
}

pub fn verify_inso(d: &Des) -> Result<Verdict> {
    verify_kso(d, &StepBound::Infinite)
}

/// `2^n − 2` (or 0 when `n < 2`): the finite bound equivalent to infinite-step
/// opacity for an `n`-state system.
pub fn inso_equivalent_bound(n: usize) -> StepBound {
    if n < 2 {
        return StepBound::zero();
    }
    let two = BigUint::one() + BigUint::one();
    StepBound::Finite((BigUint::one() << n) - two)
}

/// Verification with explicit limits and work counters.
pub fn check_kso(d: &Des, k: &StepBound, limits: &Limits) -> Result<Report> {
    d.ensure_valid()?;
    let observer = observer_reach_with(Projection::new(&d.automaton), limits)?;
    let seeds = seed_pairs(d, &observer);
    let proj = &observer.projection;
    let mut product = EstimatorProduct::new(proj, limits);
    let mut stats = SearchStats {
        observer_states: observer.len(),
        initial_pairs: seeds.len(),
        ..SearchStats::default()
    };

    let mut frontier = Vec::with_capacity(seeds.len());
    let mut exposed = false;
    for pair in seeds.keys() {
        let (id, _) = product.intern(pair)?;
        exposed |= product.is_exposed(id);
        frontier.push(id);
    }
    // Frontier-by-frontier BFS; `level` is the number of observable steps
    // taken to reach the current frontier.
    let mut level = 0usize;
    while !exposed && !frontier.is_empty() && k.admits(level + 1) {
        let mut next = Vec::new();
        for &id in &frontier {
            stats.expansions += 1;
            for (_, nid, fresh) in product.successors(id)? {
                if fresh {
                    exposed |= product.is_exposed(nid);
                    next.push(nid);
                }
            }
        }
        frontier = next;
        level += 1;
    }
    stats.levels = level;
    stats.product_states = product.len();

    let verdict = if exposed {
        Verdict::violated(extract_witness(d, &observer, &seeds, &mut product, k)?)
    } else {
        Verdict::opaque()
    };
    Ok(Report { verdict, stats })
}

/// Length-lexicographically least observable path from `start` to an exposed
/// pair within the step bound.
fn shortest_exposure(
    product: &mut EstimatorProduct<'_>,
    start: usize,
    k: &StepBound,
) -> Result<Option<Vec<usize>>> {
    if product.is_exposed(start) {
        return Ok(Some(Vec::new()));
    }
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut depth = HashMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([start]);
    while let Some(id) = queue.pop_front() {
        let d = depth[&id];
        if !k.admits(d + 1) {
            continue;
        }
        for (i, nid, _) in product.successors(id)? {
            if depth.contains_key(&nid) {
                continue;
            }
            depth.insert(nid, d + 1);
            parent.insert(nid, (id, i));
            if product.is_exposed(nid) {
                let mut word = Vec::new();
                let mut cur = nid;
                while let Some(&(prev, i)) = parent.get(&cur) {
                    word.push(i);
                    cur = prev;
                }
                word.reverse();
                return Ok(Some(word));
            }
            queue.push_back(nid);
        }
    }
    Ok(None)
}

/// Picks the violation with least `(|s_obs|, |t_obs|, s_obs, t_obs)`.
fn extract_witness(
    d: &Des,
    observer: &Observer,
    seeds: &BTreeMap<EstimatorPair, usize>,
    product: &mut EstimatorProduct<'_>,
    k: &StepBound,
) -> Result<Witness> {
    let mut ordered: Vec<(Vec<usize>, &EstimatorPair)> = seeds
        .iter()
        .map(|(pair, &xid)| (observer.access_word(xid), pair))
        .collect();
    ordered.sort_by(|(s1, p1), (s2, p2)| {
        (s1.len(), s1, p1.left).cmp(&(s2.len(), s2, p2.left))
    });

    let mut best: Option<(Vec<usize>, Vec<usize>, StateId)> = None;
    let mut group_len = None;
    for (s, pair) in ordered {
        if best.is_some() && group_len != Some(s.len()) {
            break;
        }
        group_len = Some(s.len());
        let (id, _) = product.intern(pair)?;
        if let Some(t) = shortest_exposure(product, id, k)? {
            let better = best.as_ref().is_none_or(|(bs, bt, _)| {
                (t.len(), &s, &t) < (bt.len(), bs, bt)
            });
            if better {
                best = Some((s, t, pair.left));
            }
        }
    }
    let (s, t, x) = best.expect("an exposed pair is reachable from some seed");
    let proj = &observer.projection;
    Ok(Witness {
        s_obs: proj.names_of(&s),
        t_obs: proj.names_of(&t),
        secret_state: d.automaton.state_name(x).to_string(),
    })
}

/// Checks that a witness really exhibits a violation of K-step opacity.
pub fn replay_witness(d: &Des, k: &StepBound, w: &Witness) -> bool {
    let proj = Projection::new(&d.automaton);
    let (Some(s), Some(t)) = (proj.word(&w.s_obs), proj.word(&w.t_obs)) else {
        return false;
    };
    let Some(x) = d.automaton.state_id(&w.secret_state) else {
        return false;
    };
    if !k.admits(t.len()) || !d.secret.contains(&x) {
        return false;
    }
    let estimate = proj.run(proj.initial(), &s);
    if !estimate.contains(x) {
        return false;
    }
    let nonsecret = estimate.intersection(&d.nonsecret_set());
    let single = crate::stateset::StateSet::singleton(x);
    !proj.run(&single, &t).is_empty() && proj.run(&nonsecret, &t).is_empty()
}
