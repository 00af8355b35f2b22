//! A K-step counter of size polylogarithmic in K.
//!
//! `A_{k,n}` marks every string over `a1..an` except the prefixes of one
//! string `W_{k,n}` of length `C(k+n,k) - 1`. Chaining copies of `A_{i,i}`
//! with a fresh event `c`, one copy per unit of a decomposition of K into
//! central binomial coefficients, gives an automaton `A_K` whose observer
//! has exactly one path of non-marked states, and that path has length K.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::automaton::{Automaton, Des, EventId, StateId};
use crate::error::Result;
use crate::observer::{observer_reach, Limits};

/// The counter's synchronising event.
pub const COUNTER_EVENT: &str = "c";

pub fn letter(m: usize) -> String {
    format!("a{m}")
}

/// `W_{k,n}` as letter indices `1..=n`.
pub fn gen_w(k: usize, n: usize) -> Vec<usize> {
    if k == 0 || n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![1; k];
    }
    if k == 1 {
        return (1..=n).collect();
    }
    let mut w = gen_w(k, n - 1);
    w.push(n);
    w.extend(gen_w(k - 1, n));
    w
}

pub fn word_names(w: &[usize]) -> Vec<String> {
    w.iter().map(|&m| letter(m)).collect()
}

/// States of one embedded `A_{k,n}`: `levels[m-1][i]` is `(i;m)`.
#[derive(Clone, Debug)]
pub struct Block {
    pub k: usize,
    pub n: usize,
    pub levels: Vec<Vec<StateId>>,
}

impl Block {
    pub fn initial(&self) -> impl Iterator<Item = StateId> + '_ {
        self.levels.iter().map(|l| l[0])
    }

    pub fn marked(&self) -> impl Iterator<Item = StateId> + '_ {
        self.levels.iter().map(|l| l[self.k + 1])
    }

    /// The states `(k;m)` reached by a complete `W_{k,n}`.
    pub fn last_level(&self) -> impl Iterator<Item = StateId> + '_ {
        self.levels.iter().map(|l| l[self.k])
    }

    /// The maximal state `(k+1;n)`.
    pub fn maximal(&self) -> StateId {
        self.levels[self.n - 1][self.k + 1]
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.levels.iter().flatten().copied()
    }
}

/// Adds a copy of `A_{k,n}` to `a`. `letters[m-1]` is the event `a_m`;
/// `suffix` is appended to every state name.
fn embed_a_kn(a: &mut Automaton, k: usize, n: usize, letters: &[EventId], suffix: &str) -> Result<Block> {
    assert!(n >= 1 && letters.len() >= n);
    let mut levels: Vec<Vec<StateId>> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut level = Vec::with_capacity(k + 2);
        for i in 0..=k + 1 {
            level.push(a.add_state(format!("({i};{m}){suffix}"))?);
        }
        levels.push(level);
    }
    let chain = &levels[0];
    for i in 0..=k {
        a.add_transition(chain[i], letters[0], chain[i + 1]);
    }
    a.add_transition(chain[k + 1], letters[0], chain[k + 1]);
    for m in 2..=n {
        let an = letters[m - 1];
        let top = &levels[m - 1];
        for &q in &top[..=k + 1] {
            for &aj in &letters[..m - 1] {
                a.add_transition(q, aj, q);
            }
        }
        for i in 0..=k {
            a.add_transition(top[i], an, top[i + 1]);
            for lower in &levels[..m - 1] {
                a.add_transition(top[i], an, lower[i + 1]);
            }
        }
        a.add_transition(top[k + 1], an, top[k + 1]);
        for lower in &levels[..m - 1] {
            for (i, &q) in lower.iter().enumerate() {
                if i != k {
                    a.add_transition(q, an, top[k + 1]);
                }
            }
        }
    }
    let block = Block { k, n, levels };
    for q in block.initial().collect::<Vec<_>>() {
        a.set_initial(q);
    }
    for q in block.marked().collect::<Vec<_>>() {
        a.set_marked(q);
    }
    Ok(block)
}

fn add_letters(a: &mut Automaton, n: usize) -> Vec<EventId> {
    (1..=n).map(|m| a.ensure_event(&letter(m), true)).collect()
}

/// `A_{k,n}` on its own, for `n >= 1`.
pub fn build_a_kn(k: usize, n: usize) -> Automaton {
    assert!(n >= 1, "A_(k,n) needs at least one letter");
    let mut a = Automaton::new();
    let letters = add_letters(&mut a, n);
    embed_a_kn(&mut a, k, n, &letters, "").expect("fresh names");
    a
}

pub fn central_binomial(i: usize) -> BigUint {
    let mut c = BigUint::one();
    for j in 0..i {
        // C(2(j+1), j+1) = C(2j, j) * (2j+1)(2j+2) / (j+1)^2
        c = c * BigUint::from(2 * (2 * j + 1)) / BigUint::from(j + 1);
    }
    c
}

/// `K = Σ b_i C(2i,i)`, greedy from the largest `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `(i, b_i)` for every `i` from the largest used index down to 0.
    pub coefficients: Vec<(usize, u8)>,
}

impl Decomposition {
    pub fn nonzero(&self) -> Vec<(usize, u8)> {
        self.coefficients.iter().copied().filter(|&(_, b)| b > 0).collect()
    }

    pub fn value(&self) -> BigUint {
        self.coefficients
            .iter()
            .map(|&(i, b)| central_binomial(i) * BigUint::from(b))
            .sum()
    }

    pub fn top(&self) -> Option<usize> {
        self.coefficients.first().map(|&(i, _)| i)
    }

    pub fn blocks(&self) -> usize {
        self.coefficients.iter().map(|&(_, b)| b as usize).sum()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .nonzero()
            .iter()
            .map(|(i, b)| format!("{b}*C({},{i})", 2 * i))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub fn decompose(k: &BigUint) -> Decomposition {
    if k.is_zero() {
        return Decomposition {
            coefficients: Vec::new(),
        };
    }
    let mut top = 0;
    while central_binomial(top + 1) <= *k {
        top += 1;
    }
    let mut rem = k.clone();
    let mut coefficients = Vec::with_capacity(top + 1);
    for i in (0..=top).rev() {
        let c = central_binomial(i);
        let b = (&rem / &c).to_u8().unwrap_or(u8::MAX).min(3);
        rem -= &c * BigUint::from(b);
        coefficients.push((i, b));
    }
    debug_assert!(rem.is_zero());
    Decomposition { coefficients }
}

#[derive(Clone, Debug)]
pub struct CounterAutomaton {
    pub automaton: Automaton,
    pub initial: StateId,
    pub maximal: StateId,
    pub blocks: Vec<Block>,
    pub decomposition: Decomposition,
}

impl CounterAutomaton {
    pub fn to_des(&self, name: &str) -> Des {
        Des::new(name, self.automaton.clone())
    }
}

/// Assembles `A_K`. Each unit of `b_i` becomes a block `A_{i,i}` (a unit of
/// `b_0` becomes `A_{0,1}`). Blocks are chained by `c` from their last-level
/// states to the initial states of the next block; every other `c` move, and
/// every letter outside a block's own alphabet, leads to the maximal state of
/// the last block, which loops on everything.
pub fn build_counter(k: &BigUint) -> CounterAutomaton {
    let decomposition = decompose(k);
    let mut a = Automaton::new();
    let q0 = a.add_state("q0").expect("fresh");
    a.set_initial(q0);
    if decomposition.blocks() == 0 {
        let c = a.ensure_event(COUNTER_EVENT, true);
        let max = a.add_state("max").expect("fresh");
        a.set_marked(max);
        a.add_transition(q0, c, max);
        a.add_transition(max, c, max);
        return CounterAutomaton {
            automaton: a,
            initial: q0,
            maximal: max,
            blocks: Vec::new(),
            decomposition,
        };
    }
    let width = decomposition.top().unwrap_or(0).max(1);
    let letters = add_letters(&mut a, width);
    let c = a.ensure_event(COUNTER_EVENT, true);

    let units: Vec<usize> = decomposition
        .coefficients
        .iter()
        .flat_map(|&(i, b)| std::iter::repeat_n(i, b as usize))
        .collect();
    let single = units.len() == 1;
    let mut blocks = Vec::with_capacity(units.len());
    for (j, &i) in units.iter().enumerate() {
        let suffix = if single { String::new() } else { format!("/{}", j + 1) };
        let block = embed_a_kn(&mut a, i, i.max(1), &letters, &suffix).expect("fresh names");
        blocks.push(block);
    }
    // only q0 is initial in the assembled automaton
    a.clear_initial();
    a.set_initial(q0);
    let maximal = blocks.last().expect("nonempty").maximal();
    for q in blocks[0].initial().collect::<Vec<_>>() {
        a.add_transition(q0, c, q);
    }
    for &am in &letters {
        a.add_transition(q0, am, maximal);
    }
    for (j, block) in blocks.iter().enumerate() {
        let next: Vec<StateId> = blocks
            .get(j + 1)
            .map(|b| b.initial().collect())
            .unwrap_or_default();
        let last: Vec<StateId> = block.last_level().collect();
        for q in block.states() {
            if !next.is_empty() && last.contains(&q) {
                for &r in &next {
                    a.add_transition(q, c, r);
                }
            } else {
                a.add_transition(q, c, maximal);
            }
            for &am in &letters[block.n..] {
                a.add_transition(q, am, maximal);
            }
        }
    }
    CounterAutomaton {
        automaton: a,
        initial: q0,
        maximal,
        blocks,
        decomposition,
    }
}

/// Why an automaton fails to be a counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CounterDefect {
    InitialMarked,
    Branch { at_step: usize },
    Cycle { at_step: usize },
    OffPath { unmarked: usize, on_path: usize },
}

impl fmt::Display for CounterDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterDefect::InitialMarked => write!(f, "initial observer state is marked"),
            CounterDefect::Branch { at_step } => {
                write!(f, "two unmarked successors after {at_step} steps")
            }
            CounterDefect::Cycle { at_step } => write!(f, "unmarked cycle after {at_step} steps"),
            CounterDefect::OffPath { unmarked, on_path } => write!(
                f,
                "{unmarked} unmarked observer states but only {on_path} on the path"
            ),
        }
    }
}

/// Explores the observer of `a` (all events treated as the intruder sees
/// them) and returns the length of its unique path of non-marked states.
pub fn counter_path(a: &Automaton, limits: &Limits) -> Result<std::result::Result<usize, CounterDefect>> {
    let obs = observer_reach(&Des::new("counter", a.clone()), limits)?;
    let marked = a.marked().iter().copied().collect();
    let unmarked = |x: usize| !obs.states[x].intersects(&marked);
    if !unmarked(obs.initial()) {
        return Ok(Err(CounterDefect::InitialMarked));
    }
    let mut on_path = vec![false; obs.len()];
    let mut cur = obs.initial();
    on_path[cur] = true;
    let mut steps = 0;
    loop {
        let mut next: Vec<usize> = obs.delta[cur].iter().copied().filter(|&y| unmarked(y)).collect();
        next.sort_unstable();
        next.dedup();
        match next.as_slice() {
            [] => break,
            [y] => {
                if on_path[*y] {
                    return Ok(Err(CounterDefect::Cycle { at_step: steps }));
                }
                on_path[*y] = true;
                cur = *y;
                steps += 1;
            }
            _ => return Ok(Err(CounterDefect::Branch { at_step: steps })),
        }
    }
    let total = (0..obs.len()).filter(|&x| unmarked(x)).count();
    if total != steps + 1 {
        return Ok(Err(CounterDefect::OffPath {
            unmarked: total,
            on_path: steps + 1,
        }));
    }
    Ok(Ok(steps))
}

/// A prefix of the string the counter does not accept, `|prefix| = len`;
/// `None` once `len` exceeds the counter's bound.
pub fn path_word(d: &Decomposition, len: usize) -> Option<Vec<String>> {
    let mut out = Vec::new();
    for &(i, b) in &d.coefficients {
        for _ in 0..b {
            out.push(COUNTER_EVENT.to_string());
            out.extend(word_names(&gen_w(i, i)));
        }
    }
    (len <= out.len()).then(|| {
        out.truncate(len);
        out
    })
}
