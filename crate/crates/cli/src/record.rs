use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::args::SimMode;
use crate::{CliError, CliResult};

/// Outcome of one `simulate` run. The field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationRecord {
    pub q: u32,
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub w: u32,
    pub delta: u32,
    pub mode: SimMode,
    pub seed: u64,
    pub workers: u32,
    /// Fresh instances drawn; equals `total_trials` in per-guess mode.
    pub instances: u64,
    /// Decoder guesses made.
    pub total_trials: u64,
    pub successes: u64,
    pub empirical_success_rate: f64,
    /// `log2(n² · total_trials / successes)`; empty without successes.
    pub empirical_log2_workfactor: Option<f64>,
    /// `log2(n² / P)` with the exact per-guess success probability at `delta`.
    pub theory_log2_workfactor: Option<f64>,
    pub wall_seconds: f64,
}

impl SimulationRecord {
    pub fn check(&self) -> CliResult<()> {
        if self.successes > self.total_trials || !(0.0..=1.0).contains(&self.empirical_success_rate) {
            return Err(CliError::Usage(format!(
                "inconsistent record: {} successes in {} trials",
                self.successes, self.total_trials
            )));
        }
        Ok(())
    }

    /// The record with `wall_seconds` cleared, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_seconds: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed record: {e}")))
    }
}

pub fn write_csv<W: Write>(records: &[SimulationRecord], header: bool, out: W) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(header).from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))
}

pub fn read_csv<R: Read>(input: R) -> CliResult<Vec<SimulationRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(CliError::from))
        .collect()
}
