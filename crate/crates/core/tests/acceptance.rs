//! Acceptance criteria 1 to 8. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::collections::{HashSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use common::{differential_bounds, differential_des, golden, oracle_opaque, small_des, verifier_opaque};
use kstep_opacity::bench::bench;
use kstep_opacity::counter::{build_a_kn, build_counter, counter_path, gen_w, word_names};
use kstep_opacity::transforms::{self, default_code, TransformResult};
use kstep_opacity::verify::inso_equivalent_bound;
use kstep_opacity::{verify_inso, Automaton, Des, DesBuilder, Limits, StateSet, StepBound};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f();
    let took = start.elapsed();
    match r {
        Ok(msg) if took <= budget => Ok(format!("{msg} ({took:.2?})")),
        Ok(msg) => Err(format!("{msg}, but took {took:.2?} > {budget:?}")),
        Err(msg) => Err(format!("{msg} ({took:.2?})")),
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chains() -> Outcome {
    let k6 = StepBound::finite(6);
    let c8 = golden("chain8.des");
    let c7 = golden("chain7.des");
    check(verifier_opaque(&c8, &k6), || "chain8 is not 6-SO".into())?;
    check(!verifier_opaque(&c7, &k6), || "chain7 is 6-SO".into())?;
    Ok("chain8 6-SO, chain7 not 6-SO".into())
}

fn running_example() -> Outcome {
    let g = golden("running.des");
    let hidden = golden("running_hidden.des");
    let expect = [
        (&g, 0, true),
        (&g, 1, false),
        (&hidden, 1, true),
    ];
    for (d, k, opaque) in expect {
        let k = StepBound::finite(k);
        let v = verifier_opaque(d, &k);
        let o = oracle_opaque(d, &k);
        check(v == opaque && o == opaque, || {
            format!("{} at K={k}: verifier {v}, oracle {o}, expected {opaque}", d.name)
        })?;
    }
    Ok("G 0-SO, not 1-SO; hidden c gives 1-SO; oracle agrees".into())
}

fn differential() -> Outcome {
    let ks = differential_bounds();
    let (mut checks, mut opaque) = (0, 0);
    for seed in 0..500 {
        let d = differential_des(seed);
        for k in &ks {
            let v = verifier_opaque(&d, k);
            let o = oracle_opaque(&d, k);
            check(v == o, || format!("seed {seed}, K={k}: verifier {v}, oracle {o}"))?;
            checks += 1;
            opaque += usize::from(v);
        }
    }
    Ok(format!("{checks} agreements over 500 seeds, {opaque} opaque"))
}

fn every() -> Vec<StepBound> {
    let mut ks: Vec<StepBound> = (0..=6).map(StepBound::finite).collect();
    ks.push(StepBound::Infinite);
    ks
}

/// Both sides of a claim under one decision procedure.
fn claim_holds(
    input: &Des,
    r: &TransformResult,
    decide: &dyn Fn(&Des, &StepBound) -> bool,
) -> Result<(), String> {
    for (s, t) in r.claim.pairs(&every()) {
        let left = decide(input, &s);
        let right = decide(&r.output, &t);
        check(left == right, || {
            format!(
                "{} ({}): input at K={s} {left}, output at K={t} {right}",
                r.output.name, r.claim
            )
        })?;
    }
    Ok(())
}

fn transform_claims() -> Outcome {
    let (mut applied, mut opaque_inputs) = (0, 0);
    let mut verify_both = |d: &Des, r: TransformResult| -> Result<(), String> {
        claim_holds(d, &r, &verifier_opaque)?;
        claim_holds(d, &r, &oracle_opaque)?;
        applied += 1;
        let (k, _) = r.claim.pairs(&every()).swap_remove(0);
        opaque_inputs += usize::from(verifier_opaque(d, &k));
        Ok(())
    };
    let ok = |r: kstep_opacity::Result<TransformResult>, what: &str, seed: u64| {
        r.map_err(|e| format!("{what} on seed {seed}: {e}"))
    };
    for seed in 0..200 {
        let d = small_des(seed, 3, 1, true);
        verify_both(&d, ok(transforms::cso_to_kso(&d), "cso_to_kso", seed)?)?;
        verify_both(&d, ok(transforms::cso_to_kso_binary(&d), "cso_to_kso_binary", seed)?)?;
        verify_both(&d, ok(transforms::inso_to_cso(&d), "inso_to_cso", seed)?)?;
        verify_both(&d, ok(transforms::determinize_preserving(&d), "determinize", seed)?)?;
        for k in 0..=6 {
            let k = StepBound::finite(k);
            verify_both(&d, ok(transforms::kso_to_cso(&d, &k), "kso_to_cso", seed)?)?;
            verify_both(&d, ok(transforms::kso_to_cso_neutral(&d, &k), "kso_to_cso_neutral", seed)?)?;
        }

        let single = small_des(seed, 2, 1, false);
        verify_both(
            &single,
            ok(transforms::cso_to_kso_single_event(&single), "cso_to_kso_single_event", seed)?,
        )?;
        for k in every() {
            verify_both(
                &single,
                ok(transforms::kso_to_cso_single_event(&single, &k), "kso_to_cso_single_event", seed)?,
            )?;
        }

        let wide = small_des(seed, 4, 1, true);
        let names = ["a", "b", "c"];
        let code = names
            .iter()
            .map(|n| n.to_string())
            .zip(default_code(names.len()))
            .collect();
        verify_both(&wide, ok(transforms::encode_events(&wide, &code), "encode_events", seed)?)?;
    }
    Ok(format!(
        "{applied} transform outputs checked by verifier and oracle, {opaque_inputs} from opaque inputs"
    ))
}

fn counters() -> Outcome {
    let limits = Limits::default();
    for k in [0u64, 1, 2, 3, 5, 6, 12] {
        let c = build_counter(&BigUint::from(k));
        let len = counter_path(&c.automaton, &limits)
            .map_err(|e| e.to_string())?
            .map_err(|d| format!("K={k}: {d}"))?;
        check(len == k as usize, || format!("K={k}: path of length {len}"))?;
    }
    let c12 = build_counter(&BigUint::from(12u32));
    check(c12.decomposition.nonzero() == vec![(2, 2)], || {
        format!("12 = {}", c12.decomposition)
    })?;
    check(c12.blocks.len() == 2, || "12 should use two blocks".into())?;
    Ok("unique unmarked path of length K for K in {0,1,2,3,5,6,12}".into())
}

const TABLE: [[&str; 3]; 3] = [
    ["a1", "a1 a2", "a1 a2 a3"],
    ["a1 a1", "a1 a1 a2 a1 a2", "a1 a1 a2 a1 a2 a3 a1 a2 a3"],
    [
        "a1 a1 a1",
        "a1 a1 a1 a2 a1 a1 a2 a1 a2",
        "a1 a1 a1 a2 a1 a1 a2 a1 a2 a3 a1 a1 a2 a1 a2 a3 a1 a2 a3",
    ],
];

/// Explores the subset construction of `a` in lockstep with the position
/// in `w` (or `None` once off the prefixes of `w`): every reachable pair
/// must be marked exactly when off the prefixes.
fn marks_complement_of_prefixes(a: &Automaton, w: &[String]) -> Result<(), String> {
    let marked: StateSet = a.marked().iter().copied().collect();
    let start = (a.initial_set(), Some(0usize));
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((set, pos)) = queue.pop_front() {
        let is_marked = set.intersects(&marked);
        check(is_marked == pos.is_none(), || {
            format!("estimate at position {pos:?} has marked = {is_marked}")
        })?;
        for e in 0..a.num_events() {
            let name = &a.event(e).name;
            let next_pos = pos.and_then(|p| (w.get(p) == Some(name)).then_some(p + 1));
            let next = (a.image(&set, e), next_pos);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(())
}

fn tables() -> Outcome {
    for k in 1..=3 {
        for n in 1..=3 {
            let w = word_names(&gen_w(k, n)).join(" ");
            check(w == TABLE[k - 1][n - 1], || format!("W({k},{n}) = {w}"))?;
            let a = build_a_kn(k, n);
            check(a.num_states() == n * (k + 2), || {
                format!("A({k},{n}) has {} states", a.num_states())
            })?;
            marks_complement_of_prefixes(&a, &word_names(&gen_w(k, n)))
                .map_err(|e| format!("A({k},{n}): {e}"))?;
        }
    }
    check(build_a_kn(2, 2).num_states() == 8, || "A(2,2) size".into())?;
    Ok("Table matches, n(k+2) states, marked language is the complement of prefixes(W)".into())
}

fn ten_state() -> Des {
    let mut ts = Vec::new();
    let names: Vec<String> = (1..=10).map(|i| i.to_string()).collect();
    for i in 0..10 {
        ts.push((names[i].as_str(), "a", names[(i + 1) % 10].as_str()));
        ts.push((names[i].as_str(), "b", names[(3 * i + 2) % 10].as_str()));
        if i % 3 == 0 {
            ts.push((names[i].as_str(), "u", names[(i + 5) % 10].as_str()));
        }
    }
    DesBuilder::new("ring10")
        .observable(&["a", "b"])
        .unobservable(&["u"])
        .transitions(&ts)
        .initial(&["1"])
        .secret(&["2", "5", "9"])
        .nonsecret(&["1", "3", "4", "6", "7", "10"])
        .build()
        .expect("valid")
}

fn k_independence() -> Outcome {
    let d = ten_state();
    let big = [StepBound::finite(1_000_000), StepBound::finite(1_000_000_000_000)];
    let rows = bench(&d, &big, 25).map_err(|e| e.to_string())?;
    check(rows[0].expansions == rows[1].expansions && rows[0].expansions > 0, || {
        format!("expansions {} vs {}", rows[0].expansions, rows[1].expansions)
    })?;
    let (t0, t1) = (rows[0].micros, rows[1].micros);
    check(t0.max(t1) < 2.0 * t0.min(t1), || format!("times {t0:.1}us vs {t1:.1}us"))?;

    let mut sizes = Vec::new();
    for k in [1_000u64, 1_000_000, 1_000_000_000] {
        let out = transforms::kso_to_cso(&d, &StepBound::finite(k)).map_err(|e| e.to_string())?;
        sizes.push((k, 64 - k.leading_zeros() as usize, out.output.num_states()));
    }
    let (_, b0, s0) = sizes[0];
    let report = sizes
        .iter()
        .map(|(k, b, s)| format!("K={k} ({b} bits): {s} states"))
        .collect::<Vec<_>>()
        .join(", ");
    for &(_, b, s) in &sizes[1..] {
        check(s * b0 <= s0 * b, || {
            format!(
                "{} expansions at both K; output size not linear in bit-length: {report}",
                rows[0].expansions
            )
        })?;
    }
    Ok(format!("{} expansions at both K; {report}", rows[0].expansions))
}

fn inso() -> Outcome {
    let mut n = 0;
    for seed in 0..500 {
        let d = differential_des(seed);
        let a = verify_inso(&d).map_err(|e| e.to_string())?.opaque;
        let bound = inso_equivalent_bound(d.num_states());
        let b = verifier_opaque(&d, &bound);
        check(a == b, || format!("seed {seed}: INSO {a}, ({bound})-SO {b}"))?;
        n += 1;
    }
    Ok(format!("{n} seeds agree"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("chain examples", Duration::from_secs(1), chains),
        ("running example", Duration::from_secs(1), running_example),
        ("differential suite", Duration::from_secs(300), differential),
        ("transformation equivalences", Duration::from_secs(600), transform_claims),
        ("counter property", Duration::from_secs(30), counters),
        ("W/A tables", Duration::from_secs(30), tables),
        ("K-independence", Duration::from_secs(60), k_independence),
        ("INSO equivalence", Duration::from_secs(60), inso),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        match timed(budget, f) {
            Ok(msg) => println!("criterion {} {name}: PASS {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
