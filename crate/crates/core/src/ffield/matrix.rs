use super::Field;

/// Dense row-major matrix. Arithmetic takes the field explicitly, so the same
/// type serves `F_q` (`Matrix<u32>`) and `F_{q^m}` (`Matrix<ExtElement>`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Panics on ragged input. `cols` is needed for the zero-row case.
    pub fn from_rows(rows: &[Vec<E>], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> E {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl<E: Copy + Eq + std::fmt::Debug> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in A·B");
        let mut out = Self::zeros(field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = field.add(out.get(i, j), field.mul(a, rhs.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `A · x` for a column vector `x`.
    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, x: &[E]) -> Vec<E> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in A·x");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(field.zero(), |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    /// `x · A` for a row vector `x`.
    pub fn vec_mul<F: Field<Elem = E>>(&self, field: &F, x: &[E]) -> Vec<E> {
        assert_eq!(self.rows, x.len(), "dimension mismatch in x·A");
        let mut out = vec![field.zero(); self.cols];
        for (i, &c) in x.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = field.add(*o, field.mul(c, a));
            }
        }
        out
    }

    /// Gauss–Jordan elimination in place over the first `limit` columns.
    /// Returns the pivot columns; pivots are normalized to one.
    fn reduce_in_place<F: Field<Elem = E>>(&mut self, field: &F, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !field.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = field.inv(self.get(r, c)).expect("pivot is nonzero");
            if inv != field.one() {
                for j in c..self.cols {
                    let v = field.mul(inv, self.get(r, j));
                    self.set(r, j, v);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if field.is_zero(factor) {
                    continue;
                }
                for j in c..self.cols {
                    let pivot_entry = self.get(r, j);
                    if field.is_zero(pivot_entry) {
                        continue;
                    }
                    let v = field.sub(self.get(i, j), field.mul(factor, pivot_entry));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, field: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(field, self.cols);
        (m, pivots)
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of the right kernel `{x : A·x = 0}`, one vector per free column.
    pub fn kernel_basis<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        let (r, pivots) = self.rref(field);
        kernel_from_rref(field, &r, &pivots)
    }

    /// The kernel vector whose first free coordinate is one and whose other
    /// free coordinates are zero (the first vector of [`Self::kernel_basis`]),
    /// or `None` for a trivial kernel. Uses forward elimination and back
    /// substitution only.
    pub fn first_kernel_vector<F: Field<Elem = E>>(&self, field: &F) -> Option<Vec<E>> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = field.mul(inv, m.get(r, j));
                m.set(r, j, v);
            }
            for i in r + 1..m.rows {
                let factor = m.get(i, c);
                if field.is_zero(factor) {
                    continue;
                }
                for j in c..m.cols {
                    let pivot_entry = m.get(r, j);
                    if field.is_zero(pivot_entry) {
                        continue;
                    }
                    let v = field.sub(m.get(i, j), field.mul(factor, pivot_entry));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut is_pivot = vec![false; m.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free = (0..m.cols).find(|&c| !is_pivot[c])?;
        let mut x = vec![field.zero(); m.cols];
        x[free] = field.one();
        for (row, &p) in pivots.iter().enumerate().rev() {
            let mut acc = field.zero();
            for (j, &xj) in x.iter().enumerate().skip(p + 1) {
                if !field.is_zero(xj) {
                    acc = field.add(acc, field.mul(m.get(row, j), xj));
                }
            }
            x[p] = field.neg(acc);
        }
        Some(x)
    }

    /// One solution of `A·x = b`, or `None` when `b` is outside the column span.
    pub fn solve<F: Field<Elem = E>>(&self, field: &F, b: &[E]) -> Option<Vec<E>> {
        assert_eq!(self.rows, b.len(), "dimension mismatch in A·x = b");
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                b[i]
            }
        });
        let mut reduced = aug;
        let pivots = reduced.reduce_in_place(field, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = reduced.get(i, self.cols);
        }
        Some(x)
    }
}

pub(crate) fn kernel_from_rref<F: Field>(
    field: &F,
    r: &Matrix<F::Elem>,
    pivots: &[usize],
) -> Vec<Vec<F::Elem>> {
    let cols = r.ncols();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(r.get(i, free));
            }
            v
        })
        .collect()
}
