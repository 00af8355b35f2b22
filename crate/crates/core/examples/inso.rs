//! Infinite-step opacity, directly and through the reduction to CSO.

use kstep_opacity::transforms::inso_to_cso;
use kstep_opacity::{verify_cso, verify_inso, DesBuilder};

fn main() {
    let cycle = DesBuilder::new("cycle")
        .observable(&["a"])
        .transitions(&[("1", "a", "2"), ("2", "a", "1")])
        .initial(&["1", "2"])
        .secret(&["1"])
        .nonsecret(&["2"])
        .build()
        .unwrap();
    let r = inso_to_cso(&cycle).unwrap();
    println!(
        "INSO: {}, reduced CSO: {} ({} states)",
        verify_inso(&cycle).unwrap().opaque,
        verify_cso(&r.output).unwrap().opaque,
        r.output.num_states()
    );
}
