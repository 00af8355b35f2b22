//! Parses a document, reports diagnostics, and prints its canonical form.

use kstep_opacity::format::{parse, serialize};

fn main() {
    let text = "# a hand-written system\ndes demo\nstates: z y x\nevents: b a u\nunobservable: u\ninitial: x\nsecret: y\nnonsecret: z\ntrans:\nx a y\nx u z  # hidden\nz a y\n";
    let d = parse(text).unwrap();
    print!("{}", serialize(&d));
    match parse("des bad\nstates: 1\ntrans:\n1 a 1\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }
}
