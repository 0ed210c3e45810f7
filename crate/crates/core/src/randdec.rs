//! Randomized decoding beyond the unique radius by guessing part of the
//! error row space and handing it to the column-erasure decoder.

use rand::Rng;

use crate::analysis::{lemma3_success_prob, theorem1_work_factor, ParamSet};
use crate::channel::{sample_error, sample_grassmannian};
use crate::error::{Error, Result};
use crate::ffield::{rank_qm, ExtElement, Field, FieldTower, Matrix};
use crate::gabidulin::{DecodeOutcome, GabidulinCode};

/// Upper limit for [`default_max_iter`].
pub const MAX_ITER_CAP: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandDecoderConfig {
    delta: usize,
    max_iter: u64,
    w: usize,
}

impl RandDecoderConfig {
    pub fn new(code: &GabidulinCode, delta: usize, max_iter: u64, w: usize) -> Result<Self> {
        let redundancy = code.n() - code.k();
        if delta > redundancy {
            return Err(Error::InvalidParams(format!(
                "guess dimension {delta} exceeds n - k = {redundancy}"
            )));
        }
        if max_iter == 0 {
            return Err(Error::InvalidParams("maximum number of iterations must be at least 1".into()));
        }
        if w > code.n() {
            return Err(Error::InvalidParams(format!("w = {w} exceeds n = {}", code.n())));
        }
        Ok(Self { delta, max_iter, w })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn max_iter(&self) -> u64 {
        self.max_iter
    }

    pub fn w(&self) -> usize {
        self.w
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandDecodeReport {
    pub outcome: DecodeOutcome,
    pub iterations_used: u64,
    /// Decoder invocations, failed ones included.
    pub trials_attempted: u64,
}

/// One iteration: guess a uniform `δ`-dimensional subspace, decode with it as
/// column erasures and accept only codewords within rank distance `w`.
pub fn single_guess<R: Rng + ?Sized>(
    code: &GabidulinCode,
    received: &[ExtElement],
    delta: usize,
    w: usize,
    rng: &mut R,
) -> Result<DecodeOutcome> {
    let guess = sample_grassmannian(code.n(), delta, code.tower().q(), rng)?;
    let outcome = code.decode_error_erasure(received, &[], &guess)?;
    Ok(match outcome.residual_rank() {
        Some(rank) if rank <= w => outcome,
        _ => DecodeOutcome::Failure,
    })
}

pub fn randomized_decode<R: Rng + ?Sized>(
    code: &GabidulinCode,
    received: &[ExtElement],
    cfg: &RandDecoderConfig,
    rng: &mut R,
) -> Result<RandDecodeReport> {
    for i in 1..=cfg.max_iter {
        let outcome = single_guess(code, received, cfg.delta, cfg.w, rng)?;
        if !outcome.is_failure() {
            return Ok(RandDecodeReport {
                outcome,
                iterations_used: i,
                trials_attempted: i,
            });
        }
    }
    Ok(RandDecodeReport {
        outcome: DecodeOutcome::Failure,
        iterations_used: cfg.max_iter,
        trials_attempted: cfg.max_iter,
    })
}

/// Guess dimension minimizing the expected work; zero within the unique
/// radius.
pub fn choose_delta(n: u32, k: u32, m: u32, w: u32, q: u32) -> Result<u32> {
    let p = ParamSet::new(q, m, n, k, w)?;
    if p.within_unique_radius() {
        return Ok(0);
    }
    Ok(theorem1_work_factor(&p)?.delta)
}

/// `⌈20 / p⌉` iterations for the per-guess success probability `p`, capped at
/// [`MAX_ITER_CAP`].
pub fn default_max_iter(p: &ParamSet, delta: u32) -> u64 {
    let success = lemma3_success_prob(p, delta);
    if success.is_zero() {
        return MAX_ITER_CAP;
    }
    let iters = (20.0 / success.to_f64()).ceil();
    if iters >= MAX_ITER_CAP as f64 {
        MAX_ITER_CAP
    } else {
        (iters as u64).max(1)
    }
}

/// Dimension a guess must share with the error row space for erasure-aided
/// decoding of a rank-`j` error: `⌈(2j - (n-k) + δ)/2⌉`, at least zero.
pub fn required_overlap(n: usize, k: usize, delta: usize, j: usize) -> usize {
    let x = 2 * j as i64 - (n - k) as i64 + delta as i64;
    (-(-x).div_euclid(2)).max(0) as usize
}

/// Decoder-free sampling of the guess condition: draws a uniform rank-`j`
/// row space and a uniform `δ`-dimensional guess and counts how often they
/// share at least [`required_overlap`] dimensions.
pub fn overlap_monte_carlo<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    delta: usize,
    j: usize,
    q: u32,
    samples: u64,
    rng: &mut R,
) -> Result<u64> {
    let need = required_overlap(n, k, delta, j);
    let field = crate::ffield::PrimeField::new(q)?;
    let mut hits = 0;
    for _ in 0..samples {
        let rows = sample_grassmannian(n, j, q, rng)?;
        let guess = sample_grassmannian(n, delta, q, rng)?;
        let stacked = Matrix::from_rows(&[rows.to_rows(), guess.to_rows()].concat(), n);
        if j + delta - stacked.rank(&field) >= need {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Uniform received word at rank distance exactly `w` from a uniform
/// codeword, with the error row space `B`.
pub fn noisy_codeword<R: Rng + ?Sized>(
    code: &GabidulinCode,
    w: usize,
    rng: &mut R,
) -> Result<(Vec<ExtElement>, Vec<ExtElement>, Matrix<u32>)> {
    let tower: &FieldTower = code.tower();
    let msg: Vec<_> = (0..code.k()).map(|_| tower.random(rng)).collect();
    let err = sample_error(tower, code.n(), w, rng)?;
    let r = code
        .encode(&msg)?
        .iter()
        .zip(&err.e)
        .map(|(&c, &e)| tower.add(c, e))
        .collect();
    debug_assert_eq!(rank_qm(tower, &err.e), w);
    Ok((msg, r, err.b))
}
