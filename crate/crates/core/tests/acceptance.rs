//! Every acceptance criterion at its stated tolerance and runtime limit.
//!
//! The criteria run sequentially in one test so that their timings do not
//! compete with each other. Result lines go straight to stderr, which the
//! test harness does not capture.

use std::io::Write;

use resonax_core::reproduce::{run_all, ReproduceConfig};

#[test]
fn acceptance_criteria() {
    let outcomes = run_all(&ReproduceConfig::default());
    let mut err = std::io::stderr().lock();
    for o in &outcomes {
        writeln!(err, "{}", o.summary_line()).unwrap();
    }
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    writeln!(
        err,
        "acceptance: {} of {} criteria passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    )
    .unwrap();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
