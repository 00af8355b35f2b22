//! Verification of K-step, current-state and infinite-step opacity for
//! discrete-event systems given as finite automata with partially observable
//! events, plus the polynomial reductions between these notions.
//!
//! The main entry points are [`verify::verify_kso`] (with the
//! [`verify::verify_cso`] and [`verify::verify_inso`] specialisations), the
//! brute-force [`oracle`] used for differential testing, the reductions in
//! [`transforms`], and the polylogarithmic-size step counter in [`counter`].

pub mod automaton;
pub mod bench;
pub mod counter;
pub mod error;
pub mod format;
pub mod observer;
pub mod oracle;
pub mod product;
pub mod random;
pub mod stateset;
pub mod step_bound;
pub mod transforms;
pub mod verify;

pub use automaton::{Automaton, Des, DesBuilder, Diagnostic, Event, Label};
pub use error::{Error, Result};
pub use observer::Limits;
pub use stateset::StateSet;
pub use step_bound::StepBound;
pub use verify::{verify_cso, verify_inso, verify_kso, Verdict, Witness};
