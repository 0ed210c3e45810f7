//! Linearized (`q`-)polynomials `f(x) = Σ f_i x^{q^i}` over `F_{q^m}`.
//!
//! Composition is `(f ∘ g)(x) = f(g(x))`, so
//! `(f ∘ g)_k = Σ_{i+j=k} f_i · g_j^{q^i}`.

use crate::ffield::{ExtElement, Field, FieldTower, Matrix};

/// Coefficient `i` multiplies `x^{q^i}`. Trailing zero coefficients are
/// never stored, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinearizedPoly {
    coeffs: Vec<ExtElement>,
}

/// Returned by [`LinearizedPoly::left_divide`] when no exact quotient exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotDivisible;

impl LinearizedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The identity map `x`.
    pub fn identity() -> Self {
        Self {
            coeffs: vec![ExtElement::ONE],
        }
    }

    /// `c · x^{q^i}`.
    pub fn monomial(i: usize, c: ExtElement) -> Self {
        let mut coeffs = vec![ExtElement::ZERO; i + 1];
        coeffs[i] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<ExtElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[ExtElement] {
        &self.coeffs
    }

    /// Coefficient of `x^{q^i}`, zero beyond the q-degree.
    pub fn coeff(&self, i: usize) -> ExtElement {
        self.coeffs.get(i).copied().unwrap_or(ExtElement::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn qdeg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, tower: &FieldTower, x: ExtElement) -> ExtElement {
        let mut acc = ExtElement::ZERO;
        let mut power = x;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = tower.frobenius(power);
            }
            if !c.is_zero() {
                acc = tower.add(acc, tower.mul(c, power));
            }
        }
        acc
    }

    pub fn add(&self, tower: &FieldTower, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            (0..len)
                .map(|i| tower.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, tower: &FieldTower, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            (0..len)
                .map(|i| tower.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    /// `c · f`, i.e. left multiplication by the scalar map `x ↦ c·x`.
    pub fn scale(&self, tower: &FieldTower, c: ExtElement) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&a| tower.mul(c, a)).collect())
    }

    /// `self ∘ g`.
    pub fn compose(&self, tower: &FieldTower, g: &Self) -> Self {
        if self.is_zero() || g.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ExtElement::ZERO; self.coeffs.len() + g.coeffs.len() - 1];
        let mut g_pow = g.coeffs.clone();
        for (i, &fi) in self.coeffs.iter().enumerate() {
            if i > 0 {
                for c in g_pow.iter_mut() {
                    *c = tower.frobenius(*c);
                }
            }
            if fi.is_zero() {
                continue;
            }
            for (j, &gj) in g_pow.iter().enumerate() {
                out[i + j] = tower.add(out[i + j], tower.mul(fi, gj));
            }
        }
        Self::from_coeffs(out)
    }

    /// Finds `f` with `divisor ∘ f = self` by back-substitution from the top
    /// coefficient down.
    pub fn left_divide(&self, tower: &FieldTower, divisor: &Self) -> Result<Self, NotDivisible> {
        let d = divisor.qdeg().expect("division by the zero polynomial");
        let Some(top) = self.qdeg() else {
            return Ok(Self::zero());
        };
        if top < d {
            return Err(NotDivisible);
        }
        let lead_inv = tower.inv(divisor.coeffs[d]).expect("leading coefficient is nonzero");
        let deg_f = top - d;
        let mut rem = self.coeffs.clone();
        let mut f = vec![ExtElement::ZERO; deg_f + 1];
        for j in (0..=deg_f).rev() {
            // rem[d + j] = V_d · f_j^{q^d} once higher f's are subtracted out
            let fj = tower.frobenius_inv_pow(tower.mul(rem[d + j], lead_inv), d);
            f[j] = fj;
            if fj.is_zero() {
                continue;
            }
            let mut power = fj;
            for (i, &vi) in divisor.coeffs.iter().enumerate() {
                if i > 0 {
                    power = tower.frobenius(power);
                }
                rem[i + j] = tower.sub(rem[i + j], tower.mul(vi, power));
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(NotDivisible);
        }
        Ok(Self::from_coeffs(f))
    }

    /// The `m × m` matrix over `F_q` of `x ↦ f(x)` in the polynomial basis.
    pub fn evaluation_matrix(&self, tower: &FieldTower) -> Matrix<u32> {
        let images: Vec<Vec<u32>> = (0..tower.m())
            .map(|i| tower.coeffs(self.eval(tower, tower.alpha_pow(i))))
            .collect();
        Matrix::from_fn(tower.m(), tower.m(), |r, c| images[c][r])
    }

    /// `F_q`-basis of the root space `{x : f(x) = 0}`.
    pub fn root_space_basis(&self, tower: &FieldTower) -> Vec<ExtElement> {
        assert!(!self.is_zero(), "root space of the zero polynomial is the whole field");
        self.evaluation_matrix(tower)
            .kernel_basis(&tower.base())
            .iter()
            .map(|v| tower.from_coeffs(v).expect("kernel vector has m digits"))
            .collect()
    }

    /// Monic polynomial of q-degree `dim span(U)` vanishing exactly on
    /// `span_{F_q}(U)`. Dependent inputs are skipped.
    pub fn annihilator(tower: &FieldTower, u: &[ExtElement]) -> Self {
        let q = tower.q() as u128;
        let mut f = Self::identity();
        for &x in u {
            let v = f.eval(tower, x);
            if v.is_zero() {
                continue;
            }
            // (x^q - v^{q-1} x) ∘ f
            let step = Self::from_coeffs(vec![tower.neg(tower.pow(v, q - 1)), ExtElement::ONE]);
            f = step.compose(tower, &f);
        }
        f
    }
}
