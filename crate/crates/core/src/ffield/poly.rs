//! Dense polynomials over `F_q`, only what modulus selection needs.
//! Coefficients are stored constant term first.

use super::{Field, PrimeField};

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn rem(f: PrimeField, a: &[u32], modulus: &[u32]) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let dm = modulus.len() - 1;
    let lead_inv = f.inv(modulus[dm]).expect("nonzero leading coefficient");
    while a.len() > dm {
        let top = a.len() - 1;
        let c = f.mul(a[top], lead_inv);
        for (i, &mc) in modulus.iter().enumerate() {
            let t = top - dm + i;
            a[t] = f.sub(a[t], f.mul(c, mc));
        }
        a = trim(a);
    }
    a
}

fn mul_mod(f: PrimeField, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(x, y));
        }
    }
    rem(f, &prod, modulus)
}

fn pow_mod(f: PrimeField, base: &[u32], mut e: u64, modulus: &[u32]) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(f, base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(f, &acc, &b, modulus);
        }
        b = mul_mod(f, &b, &b, modulus);
        e >>= 1;
    }
    acc
}

fn gcd(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or: a monic `f` of degree `m` is irreducible iff
/// `gcd(x^{q^i} - x, f) = 1` for every `1 <= i <= m/2`.
pub(super) fn is_irreducible(f: PrimeField, modulus: &[u32]) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut h = x.clone();
    for _ in 1..=m / 2 {
        h = pow_mod(f, &h, f.order() as u64, modulus);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = f.sub(diff[1], 1);
        let g = gcd(f, &trim(diff), modulus);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `m`, comparing the lower
/// coefficients as a base-`q` number with the `x^{m-1}` digit most
/// significant.
pub(super) fn smallest_irreducible(f: PrimeField, m: usize) -> Vec<u32> {
    let q = f.order() as u128;
    let mut index: u128 = 0;
    loop {
        let mut candidate = Vec::with_capacity(m + 1);
        let mut v = index;
        for _ in 0..m {
            candidate.push((v % q) as u32);
            v /= q;
        }
        candidate.push(1);
        // degree >= 2 with zero constant term is divisible by x
        if (m == 1 || candidate[0] != 0) && is_irreducible(f, &candidate) {
            return candidate;
        }
        index += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive factor search: no monic polynomial of degree 1..=m/2 divides f.
    fn irreducible_by_trial_division(f: PrimeField, modulus: &[u32]) -> bool {
        let m = modulus.len() - 1;
        let q = f.order() as u64;
        for d in 1..=m / 2 {
            for idx in 0..q.pow(d as u32) {
                let mut g: Vec<u32> = (0..d).map(|i| ((idx / q.pow(i as u32)) % q) as u32).collect();
                g.push(1);
                if rem(f, modulus, &g).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ben_or_agrees_with_trial_division() {
        for q in [2u32, 3, 5] {
            let f = PrimeField::new(q).unwrap();
            for m in 1..=4usize {
                let total = (q as u64).pow(m as u32);
                for idx in 0..total {
                    let mut p: Vec<u32> =
                        (0..m).map(|i| ((idx / (q as u64).pow(i as u32)) % q as u64) as u32).collect();
                    p.push(1);
                    assert_eq!(
                        is_irreducible(f, &p),
                        irreducible_by_trial_division(f, &p),
                        "q = {q}, poly = {p:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn known_moduli() {
        let f2 = PrimeField::new(2).unwrap();
        // x^24 + x^4 + x^3 + x + 1
        let mut p24 = vec![0u32; 25];
        for i in [0, 1, 3, 4, 24] {
            p24[i] = 1;
        }
        assert!(is_irreducible(f2, &p24));
        assert_eq!(smallest_irreducible(f2, 24), p24);
    }
}
