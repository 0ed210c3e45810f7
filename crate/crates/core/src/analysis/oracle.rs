//! Brute-force counterparts of the closed formulas, for small parameters.

use num_rational::BigRational;

use crate::error::Result;
use crate::ffield::{Matrix, PrimeField};

/// Every `d`-dimensional subspace of `F_q^n`, each as its unique full-rank
/// `d × n` matrix in reduced row echelon form.
pub fn enumerate_subspaces(n: usize, d: usize, q: u32) -> Result<Vec<Matrix<u32>>> {
    PrimeField::new(q)?;
    let mut out = Vec::new();
    if d > n {
        return Ok(out);
    }
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut m = Matrix::filled(d, n, 0u32);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(i, p, 1);
            }
            for (&(i, c), &v) in free.iter().zip(&digits) {
                m.set(i, c, v);
            }
            out.push(m);
            if !bump(&mut digits, q) {
                break;
            }
        }
        if !next_combination(&mut pivots, n) {
            break;
        }
    }
    Ok(out)
}

fn bump(digits: &mut [u32], q: u32) -> bool {
    for x in digits.iter_mut() {
        *x += 1;
        if *x < q {
            return true;
        }
        *x = 0;
    }
    false
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let d = c.len();
    for i in (0..d).rev() {
        if c[i] < n - d + i {
            c[i] += 1;
            for j in i + 1..d {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `dim(rowspace(a) ∩ rowspace(b))` for full-rank `a` and `b`.
pub fn intersection_dim(a: &Matrix<u32>, b: &Matrix<u32>, q: u32) -> Result<usize> {
    let f = PrimeField::new(q)?;
    let stacked = Matrix::from_rows(&[a.to_rows(), b.to_rows()].concat(), a.ncols());
    Ok(a.nrows() + b.nrows() - stacked.rank(&f))
}

/// Fraction of `v`-dimensional subspaces of `F_q^ℓ` meeting the fixed
/// subspace `rowspace(u)` in dimension at least `ω`, by enumeration.
pub fn intersection_fraction(l: usize, u: &Matrix<u32>, v: usize, omega: usize, q: u32) -> Result<BigRational> {
    let all = enumerate_subspaces(l, v, q)?;
    let mut hits = 0i64;
    for s in &all {
        if intersection_dim(u, s, q)? >= omega {
            hits += 1;
        }
    }
    Ok(BigRational::new(hits.into(), (all.len() as i64).into()))
}
