//! Gabidulin codes: Moore-matrix encoding, error and column-erasure decoding,
//! and a small-parameter enumeration of every codeword within a given rank
//! distance.
//!
//! The decoder solves the linearized reconstruction problem: find nonzero
//! `(V, N)` with `qdeg V <= t`, `qdeg N <= k + t - 1` and `V(r_i) = N(g_i)` at
//! every position. Whenever `rank(e) <= t = ⌊(n-k)/2⌋` every such pair
//! satisfies `N = V ∘ f` where `f` is the message polynomial, so `f` is
//! recovered by left division.
//!
//! Column erasures with known row space `B_C` are removed by multiplying the
//! received word by a basis `P` of the right kernel of `B_C`. The result is a
//! received word of the punctured code with locators `g·P`, still a Gabidulin
//! code, carrying an error of rank `w - ε` where `ε` is the dimension of the
//! intersection of the error row space with `rowspace(B_C)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{mul_by_base_matrix, rank_qm, ExtElement, Field, FieldTower, Matrix};
use crate::linpoly::LinearizedPoly;

/// Default bound on the number of candidates [`GabidulinCode::list_close_codewords`]
/// is willing to enumerate.
pub const DEFAULT_LIST_CAP: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded {
        codeword: Vec<ExtElement>,
        message: Vec<ExtElement>,
        /// `rank(r - codeword)` over the full length.
        residual_rank: usize,
    },
    Failure,
}

impl DecodeOutcome {
    pub fn codeword(&self) -> Option<&[ExtElement]> {
        match self {
            Self::Decoded { codeword, .. } => Some(codeword),
            Self::Failure => None,
        }
    }

    pub fn message(&self) -> Option<&[ExtElement]> {
        match self {
            Self::Decoded { message, .. } => Some(message),
            Self::Failure => None,
        }
    }

    pub fn residual_rank(&self) -> Option<usize> {
        match self {
            Self::Decoded { residual_rank, .. } => Some(*residual_rank),
            Self::Failure => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Self::Failure)
    }
}

#[derive(Clone, Debug)]
pub struct GabidulinCode {
    tower: Arc<FieldTower>,
    k: usize,
    locators: Vec<ExtElement>,
    generator: Matrix<ExtElement>,
}

impl GabidulinCode {
    pub fn new(tower: impl Into<Arc<FieldTower>>, locators: Vec<ExtElement>, k: usize) -> Result<Self> {
        let tower = tower.into();
        let n = locators.len();
        if n > tower.m() {
            return Err(Error::InvalidCode(format!(
                "length n = {n} exceeds extension degree m = {}",
                tower.m()
            )));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidCode(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        let rank = rank_qm(&tower, &locators);
        if rank != n {
            return Err(Error::DependentLocators { rank, n });
        }
        let generator = moore_matrix(&tower, &locators, k);
        Ok(Self {
            tower,
            k,
            locators,
            generator,
        })
    }

    /// Locators `1, α, …, α^{n-1}`.
    pub fn standard(tower: impl Into<Arc<FieldTower>>, n: usize, k: usize) -> Result<Self> {
        let tower = tower.into();
        let locators = (0..n).map(|i| tower.alpha_pow(i)).collect();
        Self::new(tower, locators, k)
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn shared_tower(&self) -> Arc<FieldTower> {
        Arc::clone(&self.tower)
    }

    pub fn n(&self) -> usize {
        self.locators.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn locators(&self) -> &[ExtElement] {
        &self.locators
    }

    pub fn min_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// `⌊(n - k) / 2⌋`.
    pub fn unique_radius(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// The `k × n` Moore matrix with entries `g_j^{q^i}`.
    pub fn generator_matrix(&self) -> &Matrix<ExtElement> {
        &self.generator
    }

    pub fn encode(&self, msg: &[ExtElement]) -> Result<Vec<ExtElement>> {
        check_len(self.k, msg.len())?;
        Ok(self.generator.vec_mul(self.tower.as_ref(), msg))
    }

    /// `Σ msg_i x^{q^i}`.
    pub fn message_poly(msg: &[ExtElement]) -> LinearizedPoly {
        LinearizedPoly::from_coeffs(msg.to_vec())
    }

    pub fn recover_message(&self, codeword: &[ExtElement]) -> Result<Vec<ExtElement>> {
        check_len(self.n(), codeword.len())?;
        self.generator
            .transpose()
            .solve(self.tower.as_ref(), codeword)
            .ok_or(Error::NotACodeword)
    }

    /// Locators `g·P` of the code punctured by the `F_q`-matrix `P` (`n × n'`).
    pub fn puncture(&self, p: &Matrix<u32>) -> Result<Self> {
        check_len(self.n(), p.nrows())?;
        let locators = mul_by_base_matrix(&self.tower, &self.locators, p);
        Self::new(Arc::clone(&self.tower), locators, self.k)
    }

    /// Error-only decoding up to `⌊(n-k)/2⌋`.
    pub fn decode_unique(&self, received: &[ExtElement]) -> Result<DecodeOutcome> {
        self.decode_error_erasure(received, &[], &Matrix::filled(0, self.n(), 0))
    }

    /// Decodes `received` given a `γ × n` full-rank matrix `col_erasures` over
    /// `F_q` whose row space is assumed to meet the error row space. Row
    /// erasures are not supported and `row_erasures` must be empty.
    ///
    /// Succeeds whenever the error splits as `a_C·B_C + a_E·B_E` with
    /// `2·rank(a_E·B_E) + γ <= n - k`. Outside that condition the result is
    /// either a failure or a codeword whose punctured residual has rank at
    /// most `⌊(n - γ - k)/2⌋`.
    pub fn decode_error_erasure(
        &self,
        received: &[ExtElement],
        row_erasures: &[ExtElement],
        col_erasures: &Matrix<u32>,
    ) -> Result<DecodeOutcome> {
        let n = self.n();
        check_len(n, received.len())?;
        if !row_erasures.is_empty() {
            return Err(Error::RowErasuresUnsupported);
        }
        check_len(n, col_erasures.ncols())?;
        let gamma = col_erasures.nrows();
        if gamma > n - self.k {
            return Err(Error::TooManyErasures {
                gamma,
                redundancy: n - self.k,
            });
        }
        let tower = self.tower.as_ref();
        let base = tower.base();
        let puncturing = if gamma == 0 {
            None
        } else {
            let (reduced, pivots) = col_erasures.rref(&base);
            if pivots.len() != gamma {
                return Err(Error::RankDeficientErasures {
                    rank: pivots.len(),
                    rows: gamma,
                });
            }
            let kernel = crate::ffield::kernel_from_rref(&base, &reduced, &pivots);
            Some(Matrix::from_fn(n, n - gamma, |i, j| kernel[j][i]))
        };

        let (locators, word) = match &puncturing {
            None => (self.locators.clone(), received.to_vec()),
            Some(p) => (
                mul_by_base_matrix(tower, &self.locators, p),
                mul_by_base_matrix(tower, received, p),
            ),
        };
        let radius = (locators.len() - self.k) / 2;
        let Some(f) = reconstruct(tower, &locators, &word, self.k, radius) else {
            return Ok(DecodeOutcome::Failure);
        };

        let mut message = f.coeffs().to_vec();
        message.resize(self.k, ExtElement::ZERO);
        let codeword = self.encode(&message)?;
        let residual: Vec<_> = received
            .iter()
            .zip(&codeword)
            .map(|(&r, &c)| tower.sub(r, c))
            .collect();
        let punctured_rank = match &puncturing {
            None => rank_qm(tower, &residual),
            Some(p) => rank_qm(tower, &mul_by_base_matrix(tower, &residual, p)),
        };
        if punctured_rank > radius {
            return Ok(DecodeOutcome::Failure);
        }
        let residual_rank = rank_qm(tower, &residual);
        Ok(DecodeOutcome::Decoded {
            codeword,
            message,
            residual_rank,
        })
    }

    /// Every codeword `c` with `rank(received - c) <= w`, found by enumerating
    /// the solution space of the reconstruction system with `t = w` (the
    /// pair `(annihilator(r - c), annihilator(r - c) ∘ f)` always lies in it)
    /// and keeping the candidates that pass the rank test. `cap` bounds the
    /// number of projective solutions visited.
    pub fn list_close_codewords(
        &self,
        received: &[ExtElement],
        w: usize,
        cap: u128,
    ) -> Result<Vec<Vec<ExtElement>>> {
        let n = self.n();
        check_len(n, received.len())?;
        let tower = self.tower.as_ref();
        let system = reconstruction_matrix(tower, &self.locators, received, self.k, w);
        let basis = system.kernel_basis(tower);
        let dim = basis.len();
        let needed = projective_count(tower.order(), dim);
        match needed {
            Some(count) if count <= cap => {}
            _ => {
                return Err(Error::CapExceeded {
                    needed: needed.map_or_else(
                        || format!("({}^{dim} - 1)/({} - 1)", tower.order(), tower.order()),
                        |c| c.to_string(),
                    ),
                    cap,
                })
            }
        }

        let mut found = BTreeSet::new();
        let mut coeffs = Vec::new();
        for lead in 0..dim {
            let tail = dim - lead - 1;
            coeffs.clear();
            coeffs.resize(tail, 0u128);
            loop {
                let mut v = basis[lead].clone();
                for (c, b) in coeffs.iter().zip(&basis[lead + 1..]) {
                    if *c == 0 {
                        continue;
                    }
                    let c = tower.element(*c).expect("index below field order");
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = tower.add(*x, tower.mul(c, y));
                    }
                }
                if let Some(cw) = self.candidate_from_solution(&v, received, w) {
                    found.insert(cw);
                }
                if !advance(&mut coeffs, tower.order()) {
                    break;
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    fn candidate_from_solution(
        &self,
        solution: &[ExtElement],
        received: &[ExtElement],
        w: usize,
    ) -> Option<Vec<ExtElement>> {
        let tower = self.tower.as_ref();
        let (v, nn) = split_solution(solution, w);
        if v.is_zero() {
            return None;
        }
        let f = nn.left_divide(tower, &v).ok()?;
        if f.coeffs().len() > self.k {
            return None;
        }
        let mut msg = f.coeffs().to_vec();
        msg.resize(self.k, ExtElement::ZERO);
        let cw = self.encode(&msg).ok()?;
        let diff: Vec<_> = received.iter().zip(&cw).map(|(&r, &c)| tower.sub(r, c)).collect();
        (rank_qm(tower, &diff) <= w).then_some(cw)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

fn moore_matrix(tower: &FieldTower, locators: &[ExtElement], rows: usize) -> Matrix<ExtElement> {
    let mut out = Matrix::filled(rows, locators.len(), ExtElement::ZERO);
    for (j, &g) in locators.iter().enumerate() {
        let mut power = g;
        for i in 0..rows {
            if i > 0 {
                power = tower.frobenius(power);
            }
            out.set(i, j, power);
        }
    }
    out
}

/// Rows `[y_i, y_i^q, …, y_i^{q^t}, -g_i, -g_i^q, …, -g_i^{q^{k+t-1}}]`; a
/// kernel vector holds the coefficients of `V` followed by those of `N`.
fn reconstruction_matrix(
    tower: &FieldTower,
    locators: &[ExtElement],
    received: &[ExtElement],
    k: usize,
    t: usize,
) -> Matrix<ExtElement> {
    let cols = (t + 1) + (k + t);
    let mut out = Matrix::filled(locators.len(), cols, ExtElement::ZERO);
    for (i, (&g, &y)) in locators.iter().zip(received).enumerate() {
        let mut power = y;
        for j in 0..=t {
            if j > 0 {
                power = tower.frobenius(power);
            }
            out.set(i, j, power);
        }
        let mut power = tower.neg(g);
        for j in 0..k + t {
            if j > 0 {
                power = tower.frobenius(power);
            }
            out.set(i, t + 1 + j, power);
        }
    }
    out
}

fn split_solution(solution: &[ExtElement], t: usize) -> (LinearizedPoly, LinearizedPoly) {
    let v = LinearizedPoly::from_coeffs(solution[..=t].to_vec());
    let n = LinearizedPoly::from_coeffs(solution[t + 1..].to_vec());
    (v, n)
}

/// Message polynomial of the unique codeword within rank distance `t` of
/// `received`, if the reconstruction system yields one.
fn reconstruct(
    tower: &FieldTower,
    locators: &[ExtElement],
    received: &[ExtElement],
    k: usize,
    t: usize,
) -> Option<LinearizedPoly> {
    let system = reconstruction_matrix(tower, locators, received, k, t);
    let solution = system.first_kernel_vector(tower)?;
    let (v, n) = split_solution(&solution, t);
    if v.is_zero() {
        return None;
    }
    let f = n.left_divide(tower, &v).ok()?;
    (f.coeffs().len() <= k).then_some(f)
}

/// Number of one-dimensional subspaces of `F^dim` for `|F| = order`.
fn projective_count(order: u128, dim: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..dim {
        total = total.checked_add(power)?;
        power = power.checked_mul(order)?;
    }
    Some(total)
}

/// Odometer increment over `0..order` digits; false after the last tuple.
fn advance(digits: &mut [u128], order: u128) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < order {
            return true;
        }
        *d = 0;
    }
    false
}
