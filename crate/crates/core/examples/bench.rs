//! Verification cost does not depend on how large K is.

use kstep_opacity::bench::{bench, to_csv};
use kstep_opacity::random::{gen_random, RandomSpec};
use kstep_opacity::StepBound;

fn main() {
    let d = gen_random(&RandomSpec {
        n_states: 12,
        n_events: 3,
        density: 0.4,
        seed: 18,
        ..RandomSpec::default()
    });
    let ks: Vec<StepBound> = ["0", "1", "10", "1000000", "1000000000000000000000", "inf"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    print!("{}", to_csv(&bench(&d, &ks, 5).unwrap()));
}
