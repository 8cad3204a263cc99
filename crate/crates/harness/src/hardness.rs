//! CSV report of adversarial runs.

use std::io::Write;

use elhlab_core::hardness::{run_adversarial, HardnessError, MqLearner, Verdict};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HardnessRow {
    pub n: usize,
    pub learner: String,
    pub queries: usize,
    pub remaining: u64,
    pub verdict: &'static str,
    /// The identified member for `passed`, the witness for `failed`.
    pub sigma: u64,
    pub elimination_bound_held: bool,
}

pub fn hardness_row(n: usize, learner: MqLearner) -> Result<HardnessRow, HardnessError> {
    let run = run_adversarial(n, learner)?;
    let (verdict, sigma) = match run.verdict {
        Verdict::Passed { sigma } => ("passed", sigma),
        Verdict::Failed { witness } => ("failed", witness),
    };
    Ok(HardnessRow {
        n,
        learner: learner.to_string(),
        queries: run.queries,
        remaining: run.remaining,
        verdict,
        sigma,
        elimination_bound_held: run.elimination_bound_held,
    })
}

/// One row per `(n, learner)` pair.
pub fn write_hardness_csv<W: Write>(
    out: W,
    ns: &[usize],
    learners: &[MqLearner],
) -> Result<Vec<HardnessRow>, Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_writer(out);
    let mut rows = Vec::new();
    for &n in ns {
        for &l in learners {
            let row = hardness_row(n, l)?;
            w.serialize(&row)?;
            rows.push(row);
        }
    }
    w.flush()?;
    Ok(rows)
}
