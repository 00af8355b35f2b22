//! An eight-state chain hides its secret for six steps; dropping the last
//! state reveals it.

use kstep_opacity::{verify_kso, DesBuilder, StepBound};

fn chain(n: usize) -> kstep_opacity::Des {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let ts: Vec<(&str, &str, &str)> = names
        .windows(2)
        .map(|w| (w[0].as_str(), "a", w[1].as_str()))
        .collect();
    DesBuilder::new(&format!("chain{n}"))
        .observable(&["a"])
        .transitions(&ts)
        .initial(&["1", "2"])
        .secret(&["1"])
        .nonsecret(&["2"])
        .build()
        .unwrap()
}

fn main() {
    let k = StepBound::finite(6);
    for n in [8, 7] {
        let v = verify_kso(&chain(n), &k).unwrap();
        match v.witness {
            None => println!("chain{n}: {k}-step opaque"),
            Some(w) => println!("chain{n}: not {k}-step opaque ({w})"),
        }
    }
}
