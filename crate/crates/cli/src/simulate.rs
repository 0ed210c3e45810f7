//! Monte Carlo driver. Trials are cut into fixed blocks; block `i` draws from
//! stream `i` of the master seed, so the counts depend on the seed only and
//! not on how many workers share the blocks.

use std::time::Instant;

use rankdec::analysis::{lemma2_prob, lemma3_success_prob, log2_rational, ParamSet};
use rankdec::channel::SeededRng;
use rankdec::ffield::FieldTower;
use rankdec::gabidulin::GabidulinCode;
use rankdec::randdec::{
    choose_delta, default_max_iter, noisy_codeword, randomized_decode, single_guess, RandDecoderConfig,
};
use rayon::prelude::*;

use crate::args::{DeltaArg, Format, SimMode, SimulateArgs};
use crate::record::{write_csv, SimulationRecord};
use crate::{emit, CliError, CliResult};

/// Guesses per block in per-guess mode.
pub const BLOCK_TRIALS: u64 = 1000;

#[derive(Clone, Debug)]
pub struct SimulationSpec {
    pub params: ParamSet,
    pub delta: u32,
    pub trials: u64,
    pub max_iter: u64,
    pub seed: u64,
    pub workers: usize,
    pub mode: SimMode,
}

impl SimulationSpec {
    /// Validates the arguments and resolves `auto` defaults.
    pub fn from_args(a: &SimulateArgs) -> CliResult<Self> {
        let params = ParamSet::new(a.q, a.m, a.n, a.k, a.w)?;
        let delta = match a.delta {
            DeltaArg::Auto => choose_delta(a.n, a.k, a.m, a.w, a.q)?,
            DeltaArg::Fixed(d) => d,
        };
        let max_iter = a.max_iter.unwrap_or_else(|| default_max_iter(&params, delta));
        let spec = Self {
            params,
            delta,
            trials: a.trials,
            max_iter,
            seed: a.seed,
            workers: a.workers,
            mode: a.mode,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> CliResult<()> {
        let p = &self.params;
        p.validate()?;
        if p.n > p.m {
            return Err(CliError::Usage(format!("code length n = {} exceeds m = {}", p.n, p.m)));
        }
        if self.delta > p.n - p.k {
            return Err(CliError::Usage(format!(
                "delta = {} exceeds the redundancy n - k = {}",
                self.delta,
                p.n - p.k
            )));
        }
        if p.w > p.n - p.k {
            return Err(CliError::Usage(format!("w = {} exceeds n - k = {}", p.w, p.n - p.k)));
        }
        if self.trials == 0 || self.workers == 0 || self.max_iter == 0 {
            return Err(CliError::Usage("--trials, --workers and --max-iter must be positive".into()));
        }
        Ok(())
    }

    fn code(&self) -> CliResult<GabidulinCode> {
        let p = &self.params;
        let tower = FieldTower::new(p.q, p.m as usize)?;
        Ok(GabidulinCode::standard(tower, p.n as usize, p.k as usize)?)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Counts {
    instances: u64,
    guesses: u64,
    successes: u64,
}

impl std::ops::Add for Counts {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            instances: self.instances + o.instances,
            guesses: self.guesses + o.guesses,
            successes: self.successes + o.successes,
        }
    }
}

fn per_guess_block(code: &GabidulinCode, spec: &SimulationSpec, block: u64) -> rankdec::Result<Counts> {
    let mut rng = SeededRng::new(spec.seed, block);
    let size = BLOCK_TRIALS.min(spec.trials - block * BLOCK_TRIALS);
    let (delta, w) = (spec.delta as usize, spec.params.w as usize);
    let mut successes = 0;
    for _ in 0..size {
        let (_, r, _) = noisy_codeword(code, w, &mut rng)?;
        if !single_guess(code, &r, delta, w, &mut rng)?.is_failure() {
            successes += 1;
        }
    }
    Ok(Counts {
        instances: size,
        guesses: size,
        successes,
    })
}

fn geometric_instance(code: &GabidulinCode, spec: &SimulationSpec, index: u64) -> rankdec::Result<Counts> {
    let mut rng = SeededRng::new(spec.seed, index);
    let w = spec.params.w as usize;
    let (_, r, _) = noisy_codeword(code, w, &mut rng)?;
    let cfg = RandDecoderConfig::new(code, spec.delta as usize, spec.max_iter, w)?;
    let rep = randomized_decode(code, &r, &cfg, &mut rng)?;
    Ok(Counts {
        instances: 1,
        guesses: rep.trials_attempted,
        successes: u64::from(!rep.outcome.is_failure()),
    })
}

/// `log2(n² / P)` for the exact per-guess success probability `P` at `delta`.
/// Within the unique radius the sent codeword is the only one in the ball, so
/// `P` is the probability that the guess overlaps the error space enough.
pub fn theory_log2_workfactor(p: &ParamSet, delta: u32) -> Option<f64> {
    let success = if p.within_unique_radius() {
        lemma2_prob(p.n, p.k, delta, p.w, p.q)
    } else {
        lemma3_success_prob(p, delta)
    };
    if success.is_zero() {
        return None;
    }
    Some(2.0 * (p.n as f64).log2() - log2_rational(success.value()))
}

pub fn simulate(spec: &SimulationSpec) -> CliResult<SimulationRecord> {
    spec.validate()?;
    let code = spec.code()?;
    let start = Instant::now();
    let units = match spec.mode {
        SimMode::PerGuess => spec.trials.div_ceil(BLOCK_TRIALS),
        SimMode::Geometric => spec.trials,
    };
    log::info!(
        "simulating {} ({:?}, delta = {}, {} units on {} workers)",
        spec.params,
        spec.mode,
        spec.delta,
        units,
        spec.workers
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<Counts> = pool.install(|| {
        (0..units)
            .into_par_iter()
            .map(|i| match spec.mode {
                SimMode::PerGuess => per_guess_block(&code, spec, i),
                SimMode::Geometric => geometric_instance(&code, spec, i),
            })
            .collect::<rankdec::Result<Vec<_>>>()
    })?;
    let total = parts.into_iter().fold(Counts::default(), |a, b| a + b);
    let n2 = (spec.params.n as f64).powi(2);
    let rate = total.successes as f64 / total.guesses as f64;
    let record = SimulationRecord {
        q: spec.params.q,
        m: spec.params.m,
        n: spec.params.n,
        k: spec.params.k,
        w: spec.params.w,
        delta: spec.delta,
        mode: spec.mode,
        seed: spec.seed,
        workers: spec.workers as u32,
        instances: total.instances,
        total_trials: total.guesses,
        successes: total.successes,
        empirical_success_rate: rate,
        empirical_log2_workfactor: (total.successes > 0)
            .then(|| (n2 * total.guesses as f64 / total.successes as f64).log2()),
        theory_log2_workfactor: theory_log2_workfactor(&spec.params, spec.delta),
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    record.check()?;
    log::info!("{} successes in {} guesses", record.successes, record.total_trials);
    Ok(record)
}

pub fn render(record: &SimulationRecord, format: Format, header: bool) -> CliResult<String> {
    match format {
        Format::Json => Ok(record.to_json() + "\n"),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(std::slice::from_ref(record), header, &mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        Format::Table => {
            let mut buf = Vec::new();
            write_csv(std::slice::from_ref(record), true, &mut buf)?;
            let mut rd = csv::Reader::from_reader(buf.as_slice());
            let header = rd.headers()?.clone();
            let row = rd.records().next().expect("one record written")?;
            let width = header.iter().map(str::len).max().unwrap_or(0);
            Ok(header.iter().zip(&row).map(|(k, v)| format!("{k:<width$}  {v}\n")).collect())
        }
    }
}

pub fn cmd_simulate(a: &SimulateArgs) -> CliResult<SimulationRecord> {
    let spec = SimulationSpec::from_args(a)?;
    let record = simulate(&spec)?;
    // CSV appended to an existing file keeps its single header row.
    let header = match &a.out {
        Some(path) => std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true),
        None => true,
    };
    emit(&render(&record, a.format, header)?, a.out.as_deref())?;
    Ok(record)
}
