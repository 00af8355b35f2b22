//! Builds the step counter for a few K and walks its observer.

use kstep_opacity::counter::{build_counter, counter_path};
use kstep_opacity::Limits;
use num_bigint::BigUint;

fn main() {
    for k in [0u64, 5, 12, 100, 1_000_000_000] {
        let c = build_counter(&BigUint::from(k));
        print!("K={k}: {} = {} states", c.decomposition, c.automaton.num_states());
        if k <= 100 {
            let len = counter_path(&c.automaton, &Limits::default()).unwrap().unwrap();
            print!(", unmarked observer path of length {len}");
        }
        println!();
    }
}
