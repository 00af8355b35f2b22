use crate::automaton::{Automaton, StateId};

/// Longest number of observable steps a state can still make.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ObservableDepth {
    Finite(usize),
    /// A cycle with an observable transition is reachable.
    Unbounded,
}

/// Strongly connected components in topological order of the condensation
/// (sources first).
fn components(a: &Automaton) -> (Vec<usize>, usize) {
    let n = a.num_states();
    // first pass: post-order
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((q, i)) = stack.pop() {
            let succ = a.successors(q);
            if i < succ.len() {
                stack.push((q, i + 1));
                let r = succ[i].1;
                if !visited[r] {
                    visited[r] = true;
                    stack.push((r, 0));
                }
            } else {
                order.push(q);
            }
        }
    }
    let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for t in a.transitions() {
        reverse[t.dst].push(t.src);
    }
    const NONE: usize = usize::MAX;
    let mut comp = vec![NONE; n];
    let mut count = 0;
    for &root in order.iter().rev() {
        if comp[root] != NONE {
            continue;
        }
        comp[root] = count;
        let mut stack = vec![root];
        while let Some(q) = stack.pop() {
            for &p in &reverse[q] {
                if comp[p] == NONE {
                    comp[p] = count;
                    stack.push(p);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// For every state, the maximal number of observable transitions on a path
/// leaving it.
pub fn observable_depths(a: &Automaton) -> Vec<ObservableDepth> {
    let (comp, count) = components(a);
    let mut members: Vec<Vec<StateId>> = vec![Vec::new(); count];
    for (q, &c) in comp.iter().enumerate() {
        members[c].push(q);
    }
    let mut depth = vec![ObservableDepth::Finite(0); count];
    for c in (0..count).rev() {
        let mut best = ObservableDepth::Finite(0);
        'scan: for &q in &members[c] {
            for &(e, r) in a.successors(q) {
                let obs = a.is_observable(e);
                let here = if comp[r] == c {
                    if obs {
                        best = ObservableDepth::Unbounded;
                        break 'scan;
                    }
                    ObservableDepth::Finite(0)
                } else {
                    match depth[comp[r]] {
                        ObservableDepth::Unbounded => ObservableDepth::Unbounded,
                        ObservableDepth::Finite(d) => ObservableDepth::Finite(d + obs as usize),
                    }
                };
                best = best.max(here);
            }
        }
        depth[c] = best;
    }
    comp.iter().map(|&c| depth[c]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::DesBuilder;
    use ObservableDepth::*;

    fn depths(ts: &[(&str, &str, &str)]) -> Vec<(String, ObservableDepth)> {
        let d = DesBuilder::new("g")
            .observable(&["a"])
            .unobservable(&["u"])
            .transitions(ts)
            .build()
            .unwrap();
        let a = &d.automaton;
        observable_depths(a)
            .into_iter()
            .enumerate()
            .map(|(q, x)| (a.state_name(q).to_string(), x))
            .collect()
    }

    #[test]
    fn chain_counts_observable_edges() {
        let got = depths(&[("1", "a", "2"), ("2", "u", "3"), ("3", "a", "4")]);
        let want = [("1", Finite(2)), ("2", Finite(1)), ("3", Finite(1)), ("4", Finite(0))];
        for ((n, d), (wn, wd)) in got.iter().zip(want) {
            assert_eq!((n.as_str(), *d), (wn, wd));
        }
    }

    #[test]
    fn unobservable_cycle_is_finite() {
        let got = depths(&[("1", "u", "2"), ("2", "u", "1"), ("2", "a", "3")]);
        assert_eq!(got[0].1, Finite(1));
        assert_eq!(got[2].1, Finite(0));
    }

    #[test]
    fn observable_cycle_is_unbounded_upstream_only() {
        let got = depths(&[("1", "u", "2"), ("2", "a", "2"), ("3", "a", "1"), ("4", "a", "5")]);
        let map: std::collections::HashMap<_, _> = got.into_iter().collect();
        assert_eq!(map["1"], Unbounded);
        assert_eq!(map["3"], Unbounded);
        assert_eq!(map["4"], Finite(1));
    }
}
