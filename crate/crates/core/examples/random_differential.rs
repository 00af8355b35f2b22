//! Compares the verifier with the oracle on seeded random systems.

use kstep_opacity::oracle::{oracle_kso, OracleConfig};
use kstep_opacity::random::{gen_random, RandomSpec};
use kstep_opacity::{verify_kso, StepBound};

fn main() {
    let mut opaque = 0;
    let seeds = 200;
    for seed in 0..seeds {
        let d = gen_random(&RandomSpec { seed, n_states: 4, ..RandomSpec::default() });
        let k = StepBound::finite(seed % 4);
        let v = verify_kso(&d, &k).unwrap().opaque;
        let o = oracle_kso(&d, &OracleConfig::sufficient(4, k)).unwrap().opaque;
        assert_eq!(v, o, "seed {seed}");
        opaque += usize::from(v);
    }
    println!("{seeds} systems agree, {opaque} opaque");
}
