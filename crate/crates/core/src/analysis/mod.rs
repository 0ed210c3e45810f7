//! Exact success probabilities and work factors.
//!
//! Everything is computed over big rationals and only turned into `f64` at
//! the very end, through [`log2_rational`]. Bounds of the form
//! `c · q^e` with a rational exponent are kept symbolic in [`ScaledPower`]
//! so that they can be compared against exact probabilities without
//! rounding.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod oracle;
mod workfactor;

pub use workfactor::{
    report, report_with, wf_algebraic, wf_combinatorial, wf_key, wf_pq_combinatorial, AlgCaseRule, PolyFactor, ReportValues,
    WorkFactorReport, MU,
};

/// Code and error parameters `(q, m, n, k, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSet {
    pub q: u32,
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub w: u32,
}

impl ParamSet {
    pub fn new(q: u32, m: u32, n: u32, k: u32, w: u32) -> Result<Self> {
        let p = Self { q, m, n, k, w };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !crate::ffield::is_prime(self.q) {
            return Err(Error::NotPrime(self.q));
        }
        if self.n > self.m {
            return Err(Error::InvalidParams(format!("n = {} exceeds m = {}", self.n, self.m)));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= k <= n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        if self.w > self.n {
            return Err(Error::InvalidParams(format!("w = {} exceeds n = {}", self.w, self.n)));
        }
        Ok(())
    }

    /// `2ξ = 2w - (n - k)`, always an integer.
    pub fn two_xi(&self) -> i64 {
        2 * self.w as i64 - (self.n - self.k) as i64
    }

    /// `ξ = w - (n - k)/2`.
    pub fn xi(&self) -> BigRational {
        BigRational::new(self.two_xi().into(), 2.into())
    }

    /// `w <= ⌊(n - k)/2⌋`.
    pub fn within_unique_radius(&self) -> bool {
        self.w <= (self.n - self.k) / 2
    }

    /// Checks `⌊(n-k)/2⌋ < w <= n - k`.
    pub fn check_beyond_unique(&self) -> Result<()> {
        self.validate()?;
        if self.within_unique_radius() || self.w > self.n - self.k {
            return Err(Error::InvalidParams(format!(
                "need ⌊(n-k)/2⌋ < w <= n - k, got w = {} with n - k = {}",
                self.w,
                self.n - self.k
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} m={} n={} k={} w={}", self.q, self.m, self.n, self.k, self.w)
    }
}

/// An exact probability.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigProbability(BigRational);

impl BigProbability {
    pub fn new(value: BigRational) -> Self {
        Self(value)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_value(self) -> BigRational {
        self.0
    }

    /// `-inf` for zero.
    pub fn log2(&self) -> f64 {
        log2_rational(&self.0)
    }

    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            0.0
        } else {
            self.log2().exp2()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// `coeff · base^exponent` with a rational exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPower {
    pub coeff: BigRational,
    pub base: u32,
    pub exponent: BigRational,
}

impl ScaledPower {
    pub fn log2(&self) -> f64 {
        log2_rational(&self.coeff) + rational_to_f64(&self.exponent) * (self.base as f64).log2()
    }

    /// Exact test of `value <= self` for `value >= 0`. With exponent `a/b`
    /// this compares `value^b` against `coeff^b · base^a`.
    pub fn dominates(&self, value: &BigRational) -> bool {
        assert!(!value.is_negative(), "expected a nonnegative value");
        if !self.coeff.is_positive() {
            return value.is_zero() && !self.coeff.is_negative();
        }
        let b = self.exponent.denom().to_u32().expect("small exponent denominator");
        let a = self.exponent.numer().to_i64().expect("exponent fits i64");
        pow_rational(value, b) <= pow_rational(&self.coeff, b) * qpow(self.base, a)
    }
}

fn pow_rational(x: &BigRational, e: u32) -> BigRational {
    BigRational::new(x.numer().pow(e), x.denom().pow(e))
}

/// `q^e` for any integer `e`.
pub(crate) fn qpow(q: u32, e: i64) -> BigRational {
    let p = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn big_q_pow(q: u32, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// `log2` from the leading 64 bits; `-inf` for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).log2() + shift as f64
}

/// `log2 |x|`; `-inf` for zero.
pub fn log2_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_biguint(x.numer().magnitude()) - log2_biguint(x.denom().magnitude())
}

fn rational_to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

fn half(x: i64) -> BigRational {
    BigRational::new(x.into(), 2.into())
}

fn ceil_half(x: i64) -> i64 {
    -(-x).div_euclid(2)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Memoized Gaussian binomials for one base `q`.
pub(crate) struct Gauss {
    q: u32,
    memo: HashMap<(u32, u32), BigUint>,
}

impl Gauss {
    pub(crate) fn new(q: u32) -> Self {
        Self { q, memo: HashMap::new() }
    }

    pub(crate) fn get(&mut self, a: i64, b: i64) -> BigUint {
        if b < 0 || a < 0 || b > a {
            return BigUint::zero();
        }
        let key = (a as u32, b as u32);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = gaussian_binomial(key.0, key.1, self.q);
        self.memo.insert(key, v.clone());
        v
    }
}

/// Number of `b`-dimensional subspaces of `F_q^a`; zero when `b > a`.
pub fn gaussian_binomial(a: u32, b: u32, q: u32) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..b {
        num *= big_q_pow(q, a - i) - 1u32;
        den *= big_q_pow(q, i + 1) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// Number of vectors in `F_{q^m}^n` of rank exactly `j`.
pub fn count_rank_vectors(m: u32, n: u32, j: u32, q: u32) -> BigUint {
    if j > m.min(n) {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..j {
        let qi = big_q_pow(q, i);
        num *= (big_q_pow(q, m) - &qi) * (big_q_pow(q, n) - &qi);
        den *= big_q_pow(q, j) - &qi;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// Probability that a uniform vector of `F_{q^m}^n` has rank at most `w`.
pub fn ball_probability(m: u32, n: u32, w: u32, q: u32) -> BigProbability {
    let total: BigUint = (0..=w).map(|j| count_rank_vectors(m, n, j, q)).sum();
    BigProbability(ratio(total, big_q_pow(q, m * n)))
}

/// Expected number of codewords within rank distance `w` of a uniform
/// target, floored at one.
pub fn expected_candidates(m: u32, n: u32, k: u32, w: u32, q: u32) -> BigRational {
    let n_exp = BigRational::from_integer(big_q_pow(q, m * k).into()) * ball_probability(m, n, w, q).0;
    n_exp.max(BigRational::one())
}

/// Probability that a uniform `v`-dimensional subspace of `F_q^ℓ` meets a
/// fixed `u`-dimensional one in dimension at least `ω`.
pub fn lemma1_exact(l: u32, u: u32, v: u32, omega: u32, q: u32) -> BigProbability {
    lemma1_with(&mut Gauss::new(q), l, u, v, omega)
}

fn lemma1_with(g: &mut Gauss, l: u32, u: u32, v: u32, omega: u32) -> BigProbability {
    let q = g.q;
    let (l, u, v) = (l as i64, u as i64, v as i64);
    let mut sum = BigUint::zero();
    for i in omega as i64..=u.min(v) {
        sum += g.get(l - u, v - i) * g.get(u, i) * big_q_pow(q, ((u - i) * (v - i)) as u32);
    }
    BigProbability(ratio(sum, g.get(l, v)))
}

/// `16 (min(u,v) + 1 - ω) q^{(j* - v)(ℓ - u - j*)}` with
/// `j* = min(v - ω, (ℓ + v - u)/2)`.
pub fn lemma1_bound(l: u32, u: u32, v: u32, omega: u32, q: u32) -> ScaledPower {
    let (l, u, v, omega) = (l as i64, u as i64, v as i64, omega as i64);
    let j_star = BigRational::from_integer((v - omega).into()).min(half(l + v - u));
    let exponent = (&j_star - BigRational::from_integer(v.into()))
        * (BigRational::from_integer((l - u).into()) - &j_star);
    ScaledPower {
        coeff: BigRational::from_integer((16 * (u.min(v) + 1 - omega)).into()),
        base: q,
        exponent,
    }
}

/// Probability that a uniform `δ`-dimensional guess of the error row space
/// (error of rank `j`) allows erasure-aided decoding, i.e. that the
/// intersection has dimension at least `⌈(2j - (n-k) + δ)/2⌉`.
pub fn lemma2_prob(n: u32, k: u32, delta: u32, j: u32, q: u32) -> BigProbability {
    lemma2_with(&mut Gauss::new(q), n, k, delta, j)
}

fn lemma2_with(g: &mut Gauss, n: u32, k: u32, delta: u32, j: u32) -> BigProbability {
    if 2 * j + delta <= n - k {
        return BigProbability(BigRational::one());
    }
    let omega = ceil_half(2 * j as i64 - (n - k) as i64 + delta as i64);
    if omega > delta.min(j) as i64 {
        return BigProbability(BigRational::zero());
    }
    lemma1_with(g, n, j, delta, omega as u32)
}

/// `16 n q^{-⌈δ/2 + j - (n-k)/2⌉ ((n+k)/2 - ⌈δ/2⌉)}`.
pub fn lemma2_bound(n: u32, k: u32, delta: u32, j: u32, q: u32) -> ScaledPower {
    let c = ceil_half(delta as i64 + 2 * j as i64 - (n - k) as i64);
    let exponent = -BigRational::from_integer(c.into())
        * (half((n + k) as i64) - BigRational::from_integer(ceil_half(delta as i64).into()));
    ScaledPower {
        coeff: BigRational::from_integer((16 * n).into()),
        base: q,
        exponent,
    }
}

/// `Ā_j = count_rank_vectors(m, n, j, q) / q^{m(n-k)}`.
pub fn expected_codewords_at_rank(p: &ParamSet, j: u32) -> BigRational {
    ratio(count_rank_vectors(p.m, p.n, j, p.q), big_q_pow(p.q, p.m * (p.n - p.k)))
}

/// Per-guess success probability `Σ_{j<=w} Ā_j P_{n,k,δ,j}`.
pub fn lemma3_success_prob(p: &ParamSet, delta: u32) -> BigProbability {
    lemma3_with(&mut Gauss::new(p.q), p, delta)
}

fn lemma3_with(g: &mut Gauss, p: &ParamSet, delta: u32) -> BigProbability {
    let mut sum = BigRational::zero();
    for j in 0..=p.w {
        let pj = lemma2_with(g, p.n, p.k, delta, j);
        if !pj.is_zero() {
            sum += expected_codewords_at_rank(p, j) * pj.0;
        }
    }
    BigProbability(sum)
}

/// The `j = w` term alone, `Ā_w P_{n,k,δ,w}`.
pub fn lemma3_dominant_term(p: &ParamSet, delta: u32) -> BigProbability {
    BigProbability(expected_codewords_at_rank(p, p.w) * lemma2_prob(p.n, p.k, delta, p.w, p.q).0)
}

/// `64 n q^{m(k-n) + w(n+m) - w² - ⌈δ/2 + w - (n-k)/2⌉((n+k)/2 - ⌈δ/2⌉)}`.
pub fn lemma3_bound(p: &ParamSet, delta: u32) -> ScaledPower {
    let (m, n, k, w) = (p.m as i64, p.n as i64, p.k as i64, p.w as i64);
    let c = ceil_half(delta as i64 + 2 * w - (n - k));
    let exponent = BigRational::from_integer((m * (k - n) + w * (n + m) - w * w).into())
        - BigRational::from_integer(c.into())
            * (half(n + k) - BigRational::from_integer(ceil_half(delta as i64).into()));
    ScaledPower {
        coeff: BigRational::from_integer((64 * n).into()),
        base: p.q,
        exponent,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem1 {
    pub delta: u32,
    /// `n² / success` at the optimal `δ`.
    pub work: BigRational,
    pub success: BigProbability,
}

impl Theorem1 {
    pub fn log2(&self) -> f64 {
        log2_rational(&self.work)
    }
}

/// Expected work `n² / Σ_j Ā_j P_{n,k,δ,j}` minimized over every integer
/// `δ ∈ [2ξ, n-k]`; ties go to the smaller `δ`.
pub fn theorem1_work_factor(p: &ParamSet) -> Result<Theorem1> {
    p.check_beyond_unique()?;
    let mut g = Gauss::new(p.q);
    let n2 = BigRational::from_integer((p.n as u64 * p.n as u64).into());
    let mut best: Option<Theorem1> = None;
    for delta in p.two_xi() as u32..=p.n - p.k {
        let success = lemma3_with(&mut g, p, delta);
        if success.is_zero() {
            continue;
        }
        let work = &n2 / success.value();
        if best.as_ref().is_none_or(|b| work < b.work) {
            best = Some(Theorem1 { delta, work, success });
        }
    }
    best.ok_or_else(|| Error::InvalidParams(format!("no feasible guess dimension for {p}")))
}

/// Exponent `m(n-k) - w(n+m) + w² + min{2ξ((n+k)/2 - ξ), wk}` shared by
/// the closed-form lower and upper bounds.
fn closed_form_exponent(p: &ParamSet) -> BigRational {
    let (m, n, k, w) = (p.m as i64, p.n as i64, p.k as i64, p.w as i64);
    let xi = p.xi();
    let guess = BigRational::from_integer(p.two_xi().into()) * (half(n + k) - &xi);
    let term = guess.min(BigRational::from_integer((w * k).into()));
    BigRational::from_integer((m * (n - k) - w * (n + m) + w * w).into()) + term
}

/// `(n/64) q^E`.
pub fn corollary1_lower_bound(p: &ParamSet) -> Result<ScaledPower> {
    p.check_beyond_unique()?;
    Ok(ScaledPower {
        coeff: BigRational::new(p.n.into(), 64.into()),
        base: p.q,
        exponent: closed_form_exponent(p),
    })
}

/// `n² q^E`.
pub fn remark_upper_bound(p: &ParamSet) -> Result<ScaledPower> {
    p.check_beyond_unique()?;
    Ok(ScaledPower {
        coeff: BigRational::from_integer((p.n as u64 * p.n as u64).into()),
        base: p.q,
        exponent: closed_form_exponent(p),
    })
}

/// Probability that independent uniform guesses of `δ_r` row-space and
/// `δ_c` column-space dimensions together capture at least
/// `⌈ξ + (δ_r + δ_c)/2⌉` dimensions of a rank-`w` error.
#[allow(clippy::too_many_arguments)]
pub fn lemma4_joint_bound(n: u32, k: u32, m: u32, w: u32, delta_r: u32, delta_c: u32, q: u32) -> BigProbability {
    let mut g = Gauss::new(q);
    let (n, k, m, w) = (n as i64, k as i64, m as i64, w as i64);
    let (dr, dc) = (delta_r as i64, delta_c as i64);
    let lower = ceil_half(2 * w - (n - k) + dr + dc).max(0);
    let mut sum = BigUint::zero();
    for i in lower..=(dr + dc).min(w) {
        for wr in 0..=i {
            let wc = i - wr;
            if wr > dr || wc > dc {
                continue;
            }
            let rows = g.get(n - w, dr - wr) * g.get(w, wr) * big_q_pow(q, ((w - wr) * (dr - wr)) as u32);
            if rows.is_zero() {
                continue;
            }
            let cols = g.get(m - w, dc - wc) * g.get(w, wc) * big_q_pow(q, ((w - wc) * (dc - wc)) as u32);
            sum += rows * cols;
        }
    }
    BigProbability(ratio(sum, g.get(n, dr) * g.get(m, dc)))
}

#[cfg(test)]
mod tests;
