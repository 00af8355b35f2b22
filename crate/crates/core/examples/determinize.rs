//! Makes a nondeterministic system deterministic and prints both documents.

use kstep_opacity::format::serialize;
use kstep_opacity::transforms::determinize_preserving;
use kstep_opacity::DesBuilder;

fn main() {
    let d = DesBuilder::new("nd")
        .observable(&["a", "b"])
        .transitions(&[("1", "a", "2"), ("1", "a", "3"), ("3", "b", "1")])
        .initial(&["1", "3"])
        .secret(&["2"])
        .nonsecret(&["3"])
        .build()
        .unwrap();
    let r = determinize_preserving(&d).unwrap();
    print!("{}\n{}", serialize(&d), serialize(&r.output));
    println!("# claim: {}", r.claim);
}
