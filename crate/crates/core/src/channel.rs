//! Random instances: uniform rank-`w` errors, uniform messages and uniform
//! subspaces of `F_q^n`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffield::{mul_by_base_matrix, rank_qm, ExtElement, Field, FieldTower, Matrix, PrimeField};
use crate::gabidulin::GabidulinCode;

/// Reproducible generator addressed by `(seed, stream)`. Distinct streams of
/// the same seed are independent, which is what parallel workers use.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// `e = a·B` with `a ∈ F_{q^m}^w` and `B ∈ F_q^{w×n}`, both of rank `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankError {
    pub a: Vec<ExtElement>,
    pub b: Matrix<u32>,
    pub e: Vec<ExtElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorInstance {
    pub msg: Vec<ExtElement>,
    pub a: Vec<ExtElement>,
    pub b: Matrix<u32>,
    pub e: Vec<ExtElement>,
    pub r: Vec<ExtElement>,
    pub w: usize,
}

/// Uniform error of rank exactly `w` in `F_{q^m}^n`.
pub fn sample_error<R: Rng + ?Sized>(tower: &FieldTower, n: usize, w: usize, rng: &mut R) -> Result<RankError> {
    if w > n.min(tower.m()) {
        return Err(Error::InvalidParams(format!(
            "error rank {w} exceeds min(n, m) = {}",
            n.min(tower.m())
        )));
    }
    let a = loop {
        let a: Vec<_> = (0..w).map(|_| tower.random(rng)).collect();
        if rank_qm(tower, &a) == w {
            break a;
        }
    };
    let b = sample_full_rank(&tower.base(), w, n, rng);
    let e = mul_by_base_matrix(tower, &a, &b);
    Ok(RankError { a, b, e })
}

/// A `δ × n` full-rank matrix whose row space is uniform among the
/// `δ`-dimensional subspaces of `F_q^n`.
pub fn sample_grassmannian<R: Rng + ?Sized>(n: usize, delta: usize, q: u32, rng: &mut R) -> Result<Matrix<u32>> {
    if delta > n {
        return Err(Error::InvalidParams(format!("subspace dimension {delta} exceeds n = {n}")));
    }
    let field = PrimeField::new(q)?;
    Ok(sample_full_rank(&field, delta, n, rng))
}

fn sample_full_rank<R: Rng + ?Sized>(field: &PrimeField, rows: usize, cols: usize, rng: &mut R) -> Matrix<u32> {
    loop {
        let m = Matrix::from_fn(rows, cols, |_, _| field.random(rng));
        if m.rank(field) == rows {
            return m;
        }
    }
}

/// Uniform message plus a uniform rank-`w` error.
pub fn sample_instance<R: Rng + ?Sized>(code: &GabidulinCode, w: usize, rng: &mut R) -> Result<ErrorInstance> {
    let tower = code.tower();
    let msg: Vec<_> = (0..code.k()).map(|_| tower.random(rng)).collect();
    let RankError { a, b, e } = sample_error(tower, code.n(), w, rng)?;
    let r = code
        .encode(&msg)?
        .iter()
        .zip(&e)
        .map(|(&c, &x)| tower.add(c, x))
        .collect();
    Ok(ErrorInstance { msg, a, b, e, r, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    use std::collections::HashMap;

    fn chi_square_p(counts: &[u64], draws: u64) -> f64 {
        let expected = draws as f64 / counts.len() as f64;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
        1.0 - dist.cdf(stat)
    }

    fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = SeededRng::new(7, 3);
        let mut b = SeededRng::new(7, 3);
        let mut c = SeededRng::new(7, 4);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
        assert_eq!((a.seed(), a.stream()), (7, 3));
    }

    #[test]
    fn instances_are_deterministic() {
        let code = GabidulinCode::standard(FieldTower::new(2, 24).unwrap(), 24, 16).unwrap();
        let x = sample_instance(&code, 6, &mut SeededRng::new(1, 0)).unwrap();
        let y = sample_instance(&code, 6, &mut SeededRng::new(1, 0)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn error_rank_examples() {
        let t = FieldTower::new(2, 8).unwrap();
        let mut rng = SeededRng::new(2, 0);
        let zero = sample_error(&t, 6, 0, &mut rng).unwrap();
        assert!(zero.e.iter().all(|x| x.is_zero()));
        for _ in 0..200 {
            assert_eq!(rank_qm(&t, &sample_error(&t, 6, 6, &mut rng).unwrap().e), 6);
        }
        assert!(sample_error(&t, 6, 7, &mut rng).is_err());
        let t3 = FieldTower::new(3, 5).unwrap();
        for w in 0..=5 {
            let err = sample_error(&t3, 5, w, &mut rng).unwrap();
            assert_eq!(rank_qm(&t3, &err.e), w);
            assert_eq!(rank_qm(&t3, &err.a), w);
            assert_eq!(err.b.rank(&t3.base()), w);
        }
    }

    #[test]
    fn rank_one_errors_are_uniform() {
        let t = FieldTower::new(2, 4).unwrap();
        let mut rng = SeededRng::new(3, 0);
        let draws = 100_000u64;
        let mut counts: HashMap<Vec<ExtElement>, u64> = HashMap::new();
        for _ in 0..draws {
            let e = sample_error(&t, 3, 1, &mut rng).unwrap().e;
            assert_eq!(rank_qm(&t, &e), 1);
            *counts.entry(e).or_default() += 1;
        }
        assert_eq!(counts.len(), 15 * 7);
        let counts: Vec<u64> = counts.into_values().collect();
        assert!(chi_square_p(&counts, draws) > 0.001);
    }

    #[test]
    fn grassmannian_examples() {
        let mut rng = SeededRng::new(4, 0);
        let empty = sample_grassmannian(5, 0, 2, &mut rng).unwrap();
        assert_eq!((empty.nrows(), empty.ncols()), (0, 5));
        let f = PrimeField::new(3).unwrap();
        let full = sample_grassmannian(4, 4, 3, &mut rng).unwrap();
        assert_eq!(full.rank(&f), 4);
        assert!(sample_grassmannian(3, 4, 2, &mut rng).is_err());
        assert!(sample_grassmannian(3, 1, 4, &mut rng).is_err());
    }

    fn subspace_counts(n: usize, delta: usize, q: u32, draws: u64, seed: u64) -> Vec<u64> {
        let f = PrimeField::new(q).unwrap();
        let mut rng = SeededRng::new(seed, 0);
        let mut counts: HashMap<Matrix<u32>, u64> = HashMap::new();
        for _ in 0..draws {
            let m = sample_grassmannian(n, delta, q, &mut rng).unwrap();
            *counts.entry(m.rref(&f).0).or_default() += 1;
        }
        counts.into_values().collect()
    }

    #[test]
    fn grassmannian_is_uniform_on_35_planes() {
        let draws = 100_000;
        let counts = subspace_counts(4, 2, 2, draws, 5);
        assert_eq!(counts.len() as u64, gaussian_binomial(4, 2, 2));
        assert_eq!(counts.len(), 35);
        assert!(chi_square_p(&counts, draws) > 0.001);
    }

    #[test]
    fn grassmannian_is_uniform_on_small_grids() {
        for q in [2u32, 3] {
            for n in 1..=5usize {
                for delta in 0..=n {
                    let cells = gaussian_binomial(n as u32, delta as u32, q as u64);
                    let draws = (cells * 50).max(500);
                    let counts = subspace_counts(n, delta, q, draws, 100 + n as u64 * 10 + delta as u64);
                    assert_eq!(counts.len() as u64, cells, "q={q} n={n} delta={delta}");
                    if cells > 1 {
                        assert!(chi_square_p(&counts, draws) > 0.001, "q={q} n={n} delta={delta}");
                    }
                }
            }
        }
    }
}
