//! Reduces 6-step opacity of the chains to current-state opacity.

use kstep_opacity::format::parse;
use kstep_opacity::transforms::{kso_to_cso, kso_to_cso_neutral};
use kstep_opacity::{verify_cso, verify_kso, StepBound};

const CHAIN8: &str = "des chain8\nevents: a\nstates: 1 2 3 4 5 6 7 8\ninitial: 1 2\nsecret: 1\nnonsecret: 2\ntrans:\n1 a 2\n2 a 3\n3 a 4\n4 a 5\n5 a 6\n6 a 7\n7 a 8\n";

fn main() {
    let k = StepBound::finite(6);
    let full = parse(CHAIN8).unwrap();
    let short = parse(
        &CHAIN8
            .replace("chain8", "chain7")
            .replace("7 a 8\n", "")
            .replace(" 8\n", "\n"),
    )
    .unwrap();
    for d in [&full, &short] {
        let plain = kso_to_cso(d, &k).unwrap();
        let neutral = kso_to_cso_neutral(d, &k).unwrap();
        println!(
            "{}: {k}-SO {}, reduced CSO {} ({} states), with neutral states CSO {} ({} states)",
            d.name,
            verify_kso(d, &k).unwrap().opaque,
            verify_cso(&plain.output).unwrap().opaque,
            plain.output.num_states(),
            verify_cso(&neutral.output).unwrap().opaque,
            neutral.output.num_states(),
        );
    }
}
