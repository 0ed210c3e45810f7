//! Arithmetic over a prime field `F_q` and its degree-`m` extension `F_{q^m}`.
//!
//! Extension elements are stored packed: the coefficient vector with respect
//! to the polynomial basis `1, α, …, α^{m-1}` is read as the base-`q` integer
//! `Σ c_i q^i`. For `q = 2` this is plain bit packing, addition is XOR and
//! multiplication is a carry-less product followed by a table-driven
//! reduction. Odd characteristic goes through digit vectors.
//!
//! Linear algebra over either field lives in [`Matrix`], which is generic
//! over the [`Field`] trait.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

mod matrix;
mod poly;

pub use matrix::Matrix;
pub(crate) use matrix::kernel_from_rref;

/// Minimal field interface used by the generic linear algebra.
pub trait Field {
    type Elem: Copy + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

/// The prime field `F_p`, elements as `u32` in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.p)
    }

    fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_{q^m}` in packed form. Meaningful only together with the
/// [`FieldTower`] that produced it.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement(u128);

impl ExtElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// The packed base-`q` integer `Σ c_i q^i`.
    pub fn packed(self) -> u128 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({:#x})", self.0)
    }
}

#[derive(Clone, Debug)]
enum Arith {
    /// `q = 2`, `m <= 64`. `reduce[j][b]` holds `b(x) · x^(m + 8j) mod f`.
    /// `barrett` holds `(⌊x^{2m}/f⌋, f mod x^m)` when the CPU has a carry-less
    /// multiply instruction and `m < 64`.
    Gf2Word {
        reduce: Vec<[u64; 256]>,
        barrett: Option<(u64, u64)>,
    },
    /// `q = 2`, `64 < m <= 127`. Full modulus including the `x^m` bit.
    Gf2Wide { full: u128 },
    Digits,
}

/// `F_q` together with a degree-`m` extension defined by a monic irreducible
/// modulus.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: PrimeField,
    m: usize,
    modulus: Vec<u32>,
    order: u128,
    arith: Arith,
}

impl FieldTower {
    /// Uses the lexicographically smallest monic irreducible polynomial of
    /// degree `m` (compared from the `x^{m-1}` coefficient down).
    pub fn new(q: u32, m: usize) -> Result<Self> {
        let base = PrimeField::new(q)?;
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = checked_order(q, m)?;
        let modulus = poly::smallest_irreducible(base, m);
        Ok(Self::assemble(base, m, modulus, order))
    }

    /// `modulus` lists the `m + 1` coefficients, constant term first.
    pub fn with_modulus(q: u32, modulus: Vec<u32>) -> Result<Self> {
        let base = PrimeField::new(q)?;
        if modulus.len() < 2 {
            return Err(Error::ZeroDegree);
        }
        let m = modulus.len() - 1;
        if modulus[m] != 1 {
            return Err(Error::BadModulus { expected: m });
        }
        if let Some(&digit) = modulus.iter().find(|&&d| d >= q) {
            return Err(Error::DigitOutOfRange { digit, q });
        }
        let order = checked_order(q, m)?;
        if !poly::is_irreducible(base, &modulus) {
            return Err(Error::ReducibleModulus(q));
        }
        Ok(Self::assemble(base, m, modulus, order))
    }

    fn assemble(base: PrimeField, m: usize, modulus: Vec<u32>, order: u128) -> Self {
        let arith = if base.order() != 2 {
            Arith::Digits
        } else {
            let full = modulus
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i));
            if m <= 64 {
                Arith::Gf2Word {
                    reduce: gf2_reduction_tables(full, m),
                    barrett: (m < 64 && hw_clmul_available()).then(|| (gf2_barrett_mu(full, m), full as u64)),
                }
            } else {
                Arith::Gf2Wide { full }
            }
        };
        Self {
            base,
            m,
            modulus,
            order,
            arith,
        }
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    /// Coefficients of the modulus, constant term first, length `m + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `q^m`.
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn is_binary(&self) -> bool {
        self.base.order() == 2
    }

    /// Coordinates in the polynomial basis, constant coefficient first.
    pub fn coeffs(&self, x: ExtElement) -> Vec<u32> {
        if self.is_binary() {
            (0..self.m).map(|i| ((x.0 >> i) & 1) as u32).collect()
        } else {
            self.unpack(x)
        }
    }

    pub fn from_coeffs(&self, digits: &[u32]) -> Result<ExtElement> {
        if digits.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: digits.len(),
            });
        }
        if let Some(&digit) = digits.iter().find(|&&d| d >= self.q()) {
            return Err(Error::DigitOutOfRange { digit, q: self.q() });
        }
        Ok(self.pack(digits))
    }

    /// The element whose packed integer is `index`, for `index < q^m`.
    /// Enumerating `0..q^m` visits every element exactly once.
    pub fn element(&self, index: u128) -> Option<ExtElement> {
        (index < self.order).then_some(ExtElement(index))
    }

    /// Embeds `c ∈ F_q`.
    pub fn from_base(&self, c: u32) -> ExtElement {
        debug_assert!(c < self.q());
        ExtElement(c as u128)
    }

    /// Returns `Some(c)` when `x` lies in the prime subfield.
    pub fn to_base(&self, x: ExtElement) -> Option<u32> {
        (x.0 < self.q() as u128).then_some(x.0 as u32)
    }

    /// The class of `x` modulo the modulus, i.e. `α`.
    pub fn generator(&self) -> ExtElement {
        if self.m == 1 {
            // α is the root of x + c0, i.e. -c0.
            return self.from_base(self.base.neg(self.modulus[0]));
        }
        ExtElement(self.q() as u128)
    }

    /// `α^i`.
    pub fn alpha_pow(&self, i: usize) -> ExtElement {
        if i < self.m && self.m > 1 {
            return ExtElement((self.q() as u128).pow(i as u32));
        }
        self.pow(self.generator(), i as u128)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElement {
        if self.is_binary() {
            let mask = if self.m == 128 {
                u128::MAX
            } else {
                (1u128 << self.m) - 1
            };
            ExtElement(rng.random::<u128>() & mask)
        } else {
            ExtElement(rng.random_range(0..self.order))
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElement {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// `c · x` for `c ∈ F_q`.
    #[inline]
    pub fn scale(&self, c: u32, x: ExtElement) -> ExtElement {
        if self.is_binary() {
            if c & 1 == 1 {
                x
            } else {
                ExtElement::ZERO
            }
        } else {
            let digits: Vec<u32> = self.unpack(x).iter().map(|&d| self.base.mul(c, d)).collect();
            self.pack(&digits)
        }
    }

    pub fn pow(&self, mut x: ExtElement, mut e: u128) -> ExtElement {
        let mut acc = ExtElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// `x^q`.
    #[inline]
    pub fn frobenius(&self, x: ExtElement) -> ExtElement {
        if self.is_binary() {
            self.mul(x, x)
        } else {
            self.pow(x, self.q() as u128)
        }
    }

    /// `x^{q^i}`; the exponent is taken modulo `m`.
    pub fn frobenius_pow(&self, mut x: ExtElement, i: usize) -> ExtElement {
        for _ in 0..i % self.m {
            x = self.frobenius(x);
        }
        x
    }

    /// `x^{q^{-i}}`, the inverse of [`Self::frobenius_pow`].
    pub fn frobenius_inv_pow(&self, x: ExtElement, i: usize) -> ExtElement {
        let i = i % self.m;
        self.frobenius_pow(x, (self.m - i) % self.m)
    }

    fn unpack(&self, x: ExtElement) -> Vec<u32> {
        let q = self.q() as u128;
        let mut v = x.0;
        let mut out = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            out.push((v % q) as u32);
            v /= q;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> ExtElement {
        if self.is_binary() {
            return ExtElement(
                digits
                    .iter()
                    .enumerate()
                    .fold(0u128, |acc, (i, &d)| acc | (((d & 1) as u128) << i)),
            );
        }
        let q = self.q() as u128;
        ExtElement(digits.iter().rev().fold(0u128, |acc, &d| acc * q + d as u128))
    }

    fn mul_digits(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        let f = self.base;
        let (da, db) = (self.unpack(a), self.unpack(b));
        let m = self.m;
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for deg in (m..2 * m - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &mc) in self.modulus[..m].iter().enumerate() {
                let t = deg - m + i;
                prod[t] = f.sub(prod[t], f.mul(c, mc));
            }
        }
        self.pack(&prod[..m])
    }
}

fn checked_order(q: u32, m: usize) -> Result<u128> {
    let too_large = Error::FieldTooLarge { q, m };
    let exp = u32::try_from(m).map_err(|_| too_large.clone())?;
    (q as u128).checked_pow(exp).ok_or(too_large)
}

/// Carry-less product of two polynomials of degree below `bits`.
#[inline]
fn clmul(a: u64, b: u64, bits: usize) -> u128 {
    let mut table = [0u128; 16];
    table[1] = a as u128;
    for i in 2..16 {
        table[i] = if i % 2 == 0 {
            table[i / 2] << 1
        } else {
            table[i - 1] ^ a as u128
        };
    }
    let nibbles = bits.div_ceil(4);
    let mut acc = 0u128;
    for i in (0..nibbles).rev() {
        acc = (acc << 4) ^ table[((b >> (4 * i)) & 0xf) as usize];
    }
    acc
}

#[cfg(target_arch = "x86_64")]
fn hw_clmul_available() -> bool {
    std::arch::is_x86_feature_detected!("pclmulqdq")
}

#[cfg(not(target_arch = "x86_64"))]
fn hw_clmul_available() -> bool {
    false
}

/// `⌊x^{2m} / f⌋` over `F_2`, a polynomial of degree `m`.
fn gf2_barrett_mu(full: u128, m: usize) -> u64 {
    let mut rem = 1u128 << (2 * m);
    let mut quot = 0u128;
    for shift in (0..=m).rev() {
        if (rem >> (m + shift)) & 1 == 1 {
            rem ^= full << shift;
            quot |= 1 << shift;
        }
    }
    quot as u64
}

/// `a · b mod f` for `m < 64` with Barrett reduction; `f_low` is `f` without
/// its leading term.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
#[inline]
unsafe fn clmul_hw(x: u64, y: u64) -> u128 {
    use std::arch::x86_64::{__m128i, _mm_clmulepi64_si128, _mm_set_epi64x};
    let r: __m128i = _mm_clmulepi64_si128(_mm_set_epi64x(0, x as i64), _mm_set_epi64x(0, y as i64), 0);
    std::mem::transmute::<__m128i, u128>(r)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
#[inline]
unsafe fn gf2_mul_barrett(a: u64, b: u64, m: u32, mu: u64, f_low: u64) -> u64 {
    let prod = clmul_hw(a, b);
    let quot = (clmul_hw((prod >> m) as u64, mu) >> m) as u64;
    let mask = (1u64 << m) - 1;
    (prod as u64 ^ clmul_hw(quot, f_low) as u64) & mask
}

#[cfg(not(target_arch = "x86_64"))]
unsafe fn gf2_mul_barrett(_: u64, _: u64, _: u32, _: u64, _: u64) -> u64 {
    unreachable!("carry-less multiply is only detected on x86_64")
}

fn gf2_reduction_tables(full: u128, m: usize) -> Vec<[u64; 256]> {
    let hi_bits = m.saturating_sub(1);
    let nbytes = hi_bits.div_ceil(8).max(1);
    let times_x = |v: u128| -> u128 {
        let v = v << 1;
        if (v >> m) & 1 == 1 {
            v ^ full
        } else {
            v
        }
    };
    // x^m mod f, then successive powers.
    let mut power = full ^ (1u128 << m);
    let mut tables = Vec::with_capacity(nbytes);
    for _ in 0..nbytes {
        let mut basis = [0u64; 8];
        for slot in basis.iter_mut() {
            *slot = power as u64;
            power = times_x(power);
        }
        let mut table = [0u64; 256];
        for (b, entry) in table.iter_mut().enumerate() {
            *entry = (0..8)
                .filter(|bit| (b >> bit) & 1 == 1)
                .fold(0u64, |acc, bit| acc ^ basis[bit]);
        }
        tables.push(table);
    }
    tables
}

fn gf2_inv(a: u128, full: u128) -> u128 {
    let deg = |x: u128| 127 - x.leading_zeros() as i32;
    let (mut r0, mut r1) = (full, a);
    let (mut s0, mut s1) = (0u128, 1u128);
    while r1 != 0 {
        let mut d = deg(r0) - deg(r1);
        if d < 0 {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            d = -d;
        }
        r0 ^= r1 << d;
        s0 ^= s1 << d;
        if r0 == 0 {
            break;
        }
    }
    // r1 holds gcd = 1 and s1 its cofactor.
    s1
}

impl Field for FieldTower {
    type Elem = ExtElement;

    fn zero(&self) -> ExtElement {
        ExtElement::ZERO
    }

    fn one(&self) -> ExtElement {
        ExtElement::ONE
    }

    #[inline]
    fn add(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        if self.is_binary() {
            return ExtElement(a.0 ^ b.0);
        }
        let f = self.base;
        let (da, db) = (self.unpack(a), self.unpack(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| f.add(x, y)).collect();
        self.pack(&sum)
    }

    #[inline]
    fn sub(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        if self.is_binary() {
            return ExtElement(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    fn neg(&self, a: ExtElement) -> ExtElement {
        if self.is_binary() {
            return a;
        }
        let f = self.base;
        let d: Vec<u32> = self.unpack(a).iter().map(|&x| f.neg(x)).collect();
        self.pack(&d)
    }

    #[inline]
    fn mul(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        match &self.arith {
            Arith::Gf2Word { reduce, barrett } => {
                let m = self.m;
                if let Some((mu, f)) = *barrett {
                    // SAFETY: `barrett` is only set after runtime detection of the instruction.
                    return ExtElement(unsafe { gf2_mul_barrett(a.0 as u64, b.0 as u64, m as u32, mu, f) } as u128);
                }
                let prod = clmul(a.0 as u64, b.0 as u64, m);
                let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
                let mut hi = (prod >> m) as u64;
                let mut out = (prod as u64) & mask;
                for table in reduce {
                    out ^= table[(hi & 0xff) as usize];
                    hi >>= 8;
                }
                ExtElement(out as u128)
            }
            Arith::Gf2Wide { full } => {
                let m = self.m;
                let mut acc = 0u128;
                for i in (0..m).rev() {
                    acc <<= 1;
                    if (acc >> m) & 1 == 1 {
                        acc ^= full;
                    }
                    if (b.0 >> i) & 1 == 1 {
                        acc ^= a.0;
                    }
                }
                ExtElement(acc)
            }
            Arith::Digits => self.mul_digits(a, b),
        }
    }

    fn inv(&self, a: ExtElement) -> Option<ExtElement> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.arith {
            Arith::Gf2Word { .. } | Arith::Gf2Wide { .. } => {
                let full = self
                    .modulus
                    .iter()
                    .enumerate()
                    .fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i));
                ExtElement(gf2_inv(a.0, full))
            }
            Arith::Digits => self.pow(a, self.order - 2),
        })
    }
}

/// The `m × n` matrix over `F_q` whose column `j` is the coordinate vector of
/// `v_j` in the polynomial basis.
pub fn expand_to_base(tower: &FieldTower, v: &[ExtElement]) -> Matrix<u32> {
    let cols: Vec<Vec<u32>> = v.iter().map(|&x| tower.coeffs(x)).collect();
    Matrix::from_fn(tower.m(), v.len(), |i, j| cols[j][i])
}

/// `dim_{F_q} span(v_1, …, v_n)`.
pub fn rank_qm(tower: &FieldTower, v: &[ExtElement]) -> usize {
    if tower.is_binary() {
        return binary_span_basis(v.iter().map(|x| x.0)).len();
    }
    expand_to_base(tower, v).rank(&tower.base())
}

/// Echelon basis (distinct leading bits, descending) of the GF(2)-span of
/// packed bit vectors.
pub(crate) fn binary_span_basis(values: impl IntoIterator<Item = u128>) -> Vec<u128> {
    let mut basis: Vec<u128> = Vec::new();
    for mut x in values {
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            let pos = basis.partition_point(|&b| b > x);
            basis.insert(pos, x);
        }
    }
    basis
}

/// `v · M` for `v ∈ F_{q^m}^r` and `M ∈ F_q^{r × c}`.
pub fn mul_by_base_matrix(tower: &FieldTower, v: &[ExtElement], mat: &Matrix<u32>) -> Vec<ExtElement> {
    assert_eq!(v.len(), mat.nrows(), "dimension mismatch in v·M");
    (0..mat.ncols())
        .map(|j| {
            v.iter().enumerate().fold(ExtElement::ZERO, |acc, (i, &x)| {
                let c = mat.get(i, j);
                if c == 0 {
                    acc
                } else {
                    tower.add(acc, tower.scale(c, x))
                }
            })
        })
        .collect()
}
