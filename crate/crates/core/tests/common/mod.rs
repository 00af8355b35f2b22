#![allow(dead_code)]

use std::path::PathBuf;

use kstep_opacity::format::parse;
use kstep_opacity::oracle::{oracle_kso, OracleConfig};
use kstep_opacity::random::{gen_random, RandomSpec};
use kstep_opacity::{verify_kso, Des, StepBound};

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn golden_text(name: &str) -> String {
    std::fs::read_to_string(golden_path(name)).expect("golden file")
}

pub fn golden(name: &str) -> Des {
    parse(&golden_text(name)).expect("golden parses")
}

/// n in 1..=5, two or three events with at least one unobservable.
pub fn differential_des(seed: u64) -> Des {
    let n_events = 2 + (seed % 2) as usize;
    gen_random(&RandomSpec {
        n_states: 1 + (seed % 5) as usize,
        n_events,
        n_unobservable: 1 + ((seed / 10) % (n_events as u64 - 1)) as usize,
        density: [0.3, 0.5, 0.7][(seed / 5 % 3) as usize],
        secret_fraction: 0.35,
        nonsecret_fraction: 0.45,
        seed,
    })
}

pub fn small_des(seed: u64, n_events: usize, n_unobservable: usize, neutral: bool) -> Des {
    gen_random(&RandomSpec {
        n_states: 1 + (seed % 4) as usize,
        n_events,
        n_unobservable,
        density: [0.35, 0.55, 0.75][(seed / 4 % 3) as usize],
        secret_fraction: 0.4,
        nonsecret_fraction: if neutral { 0.4 } else { 0.6 },
        seed,
    })
}

pub fn differential_bounds() -> Vec<StepBound> {
    let mut ks: Vec<StepBound> = [0, 1, 2, 3, 4, 8].into_iter().map(StepBound::finite).collect();
    ks.push(StepBound::Infinite);
    ks
}

pub fn oracle_opaque(d: &Des, k: &StepBound) -> bool {
    let cfg = OracleConfig::sufficient(d.num_states(), k.clone());
    oracle_kso(d, &cfg).expect("oracle saturates").opaque
}

pub fn verifier_opaque(d: &Des, k: &StepBound) -> bool {
    verify_kso(d, k).expect("verifier").opaque
}
