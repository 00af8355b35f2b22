//! Timing of the verifier across step bounds.

use std::fmt::Write as _;
use std::time::Instant;

use crate::automaton::Des;
use crate::error::Result;
use crate::observer::Limits;
use crate::step_bound::StepBound;
use crate::verify::check_kso;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub k: StepBound,
    pub opaque: bool,
    pub expansions: usize,
    pub product_states: usize,
    /// Fastest of the repeated runs, in microseconds.
    pub micros: f64,
}

pub fn bench(d: &Des, ks: &[StepBound], repeats: usize) -> Result<Vec<BenchRow>> {
    let limits = Limits::default();
    let mut rows = Vec::with_capacity(ks.len());
    for k in ks {
        let mut best = f64::INFINITY;
        let mut report = None;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let r = check_kso(d, k, &limits)?;
            best = best.min(start.elapsed().as_secs_f64() * 1e6);
            report = Some(r);
        }
        let r = report.expect("ran at least once");
        rows.push(BenchRow {
            k: k.clone(),
            opaque: r.verdict.opaque,
            expansions: r.stats.expansions,
            product_states: r.stats.product_states,
            micros: best,
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("k,opaque,expansions,product_states,micros\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.1}",
            r.k, r.opaque, r.expansions, r.product_states, r.micros
        );
    }
    out
}
