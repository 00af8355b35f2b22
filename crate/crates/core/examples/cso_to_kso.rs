//! Current-state opacity as K-step opacity: the general construction, its
//! two-event binary form, and the single-event construction.

use kstep_opacity::transforms::{cso_to_kso, cso_to_kso_binary, cso_to_kso_single_event};
use kstep_opacity::{verify_cso, verify_kso, DesBuilder, StepBound};

fn main() {
    for (name, secret_only_after_c) in [("hides", false), ("leaks", true)] {
        let mut ts = vec![("1", "a", "2"), ("1", "a", "3"), ("3", "b", "1")];
        if secret_only_after_c {
            ts.push(("3", "c", "2"));
        }
        let d = DesBuilder::new(name)
            .observable(&["a", "b", "c"])
            .transitions(&ts)
            .initial(&["1"])
            .secret(&["2"])
            .nonsecret(&["1", "3"])
            .build()
            .unwrap();
        println!("{name}: CSO {}", verify_cso(&d).unwrap().opaque);
        for r in [cso_to_kso(&d).unwrap(), cso_to_kso_binary(&d).unwrap()] {
            for k in [StepBound::zero(), StepBound::finite(4), StepBound::Infinite] {
                println!("  {}: {k}-SO {}", r.output.name, verify_kso(&r.output, &k).unwrap().opaque);
            }
        }
    }

    let single = DesBuilder::new("s")
        .observable(&["a"])
        .transitions(&[("1", "a", "2"), ("2", "a", "1")])
        .initial(&["1", "2"])
        .secret(&["2"])
        .nonsecret(&["1"])
        .build()
        .unwrap();
    let r = cso_to_kso_single_event(&single).unwrap();
    println!(
        "single event: CSO {}, output 3-SO {}",
        verify_cso(&single).unwrap().opaque,
        verify_kso(&r.output, &StepBound::finite(3)).unwrap().opaque
    );
}
