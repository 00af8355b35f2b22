//! Encodes three observable events over {0, 1}.

use std::collections::BTreeMap;

use kstep_opacity::format::serialize;
use kstep_opacity::transforms::encode_events;
use kstep_opacity::{verify_cso, DesBuilder};

fn main() {
    let d = DesBuilder::new("abc")
        .observable(&["a", "b", "c"])
        .transitions(&[("1", "a", "2"), ("1", "b", "3"), ("2", "c", "1")])
        .initial(&["1"])
        .secret(&["2"])
        .nonsecret(&["3"])
        .build()
        .unwrap();
    let code: BTreeMap<String, String> = [("a", "00"), ("b", "01"), ("c", "10")]
        .into_iter()
        .map(|(e, w)| (e.to_string(), w.to_string()))
        .collect();
    let r = encode_events(&d, &code).unwrap();
    print!("{}", serialize(&r.output));
    println!(
        "CSO before: {}, after: {}",
        verify_cso(&d).unwrap().opaque,
        verify_cso(&r.output).unwrap().opaque
    );
}
