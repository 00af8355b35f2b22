//! The verifier and the brute-force oracle on a five-state system, with the
//! event `c` observable and then hidden.

use kstep_opacity::oracle::{oracle_kso, OracleConfig};
use kstep_opacity::{verify_kso, DesBuilder, StepBound};

fn main() {
    for hidden in [false, true] {
        let mut b = DesBuilder::new("five").observable(&["a", "b"]);
        b = if hidden { b.unobservable(&["c"]) } else { b.observable(&["c"]) };
        let d = b
            .transitions(&[("1", "a", "2"), ("1", "a", "4"), ("2", "b", "3"), ("4", "c", "5"), ("5", "b", "3")])
            .initial(&["1"])
            .secret(&["2"])
            .nonsecret(&["4"])
            .build()
            .unwrap();
        for k in [0, 1] {
            let k = StepBound::finite(k);
            let v = verify_kso(&d, &k).unwrap().opaque;
            let o = oracle_kso(&d, &OracleConfig::sufficient(d.num_states(), k.clone()))
                .unwrap()
                .opaque;
            println!("c hidden: {hidden:5}  K={k}  verifier: {v:5}  oracle: {o}");
        }
    }
}
