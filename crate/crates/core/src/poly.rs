//! Dense univariate polynomials over a prime field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::PrimeField;

/// Coefficients are stored low degree first with trailing zeros stripped.
///
/// Ordering is by degree, then by coefficients from the top down; this is
/// the canonical factor order used everywhere in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= field.p();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    /// `t^n`.
    pub fn monomial(field: PrimeField, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        UniPoly { field, coeffs }
    }

    /// `t - c`.
    pub fn linear_root(field: PrimeField, c: u64) -> Self {
        Self::new(field, vec![field.neg(c % field.p()), 1])
    }

    /// Base-`p` digits of `n` as coefficients (low first), truncated to `len`.
    pub fn from_counter(field: PrimeField, mut n: u64, len: usize) -> Self {
        let p = field.p();
        let mut coeffs = Vec::with_capacity(len);
        for _ in 0..len {
            coeffs.push(n % p);
            n /= p;
        }
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient, 0 for the zero polynomial.
    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, i as u64 % f.p()))
            .collect();
        Self::new(f, coeffs)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let f = self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(f), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = f.sub(rem[k], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        if self.degree() < divisor.degree() {
            return self.clone();
        }
        self.div_rem(divisor).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, other: &UniPoly, modulus: &UniPoly) -> UniPoly {
        (self * other).rem(modulus)
    }

    pub fn pow_mod(&self, mut exp: u128, modulus: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::one(self.field).rem(modulus);
        let mut base = self.rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            exp >>= 1;
        }
        acc
    }

    pub fn pow(&self, exp: u32) -> UniPoly {
        let mut acc = UniPoly::one(self.field);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse modulo `modulus` by the extended Euclidean algorithm.
    pub fn inv_mod(&self, modulus: &UniPoly) -> Option<UniPoly> {
        let f = self.field;
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let (mut s0, mut s1) = (UniPoly::zero(f), UniPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = f.inv(r0.leading())?;
        Some(s0.scale(c).rem(modulus))
    }

    /// Polynomial square root with the smaller leading coefficient, if `self`
    /// is a perfect square (the zero polynomial is its own root).
    pub fn sqrt(&self) -> Option<UniPoly> {
        let f = self.field;
        let Some(deg) = self.degree() else {
            return Some(self.clone());
        };
        if deg % 2 == 1 {
            return None;
        }
        let n = deg / 2;
        let lead = f.sqrt(self.leading())?;
        let two_lead_inv = f.inv(f.add(lead, lead))?;
        let mut w = vec![0u64; n + 1];
        w[n] = lead;
        // match coefficients of t^(2n-k) from the top, solving for w[n-k]
        for k in 1..=n {
            let mut acc = self.coeff(2 * n - k);
            for i in (n - k + 1)..=n {
                let j = 2 * n - k - i;
                if j > n - k && j <= n {
                    acc = f.sub(acc, f.mul(w[i], w[j]));
                }
            }
            w[n - k] = f.mul(acc, two_lead_inv);
        }
        let root = UniPoly::new(f, w);
        (&root * &root == *self).then_some(root)
    }
}

impl Ord for UniPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for UniPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        let f = self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        let f = self.field;
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(f, out)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f13() -> PrimeField {
        PrimeField::new(13).unwrap()
    }

    #[test]
    fn trims_and_reduces() {
        let p = UniPoly::from_i64(f13(), &[-1, 14, 0, 0]);
        assert_eq!(p.coeffs(), &[12, 1]);
        assert_eq!(p.degree(), Some(1));
        assert!(UniPoly::from_i64(f13(), &[0, 13]).is_zero());
    }

    #[test]
    fn division_identity() {
        let f = f13();
        let a = UniPoly::from_i64(f, &[3, 0, 5, 1, 7]);
        let b = UniPoly::from_i64(f, &[1, 2, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_and_inverse() {
        let f = f13();
        let x1 = UniPoly::linear_root(f, 1);
        let x2 = UniPoly::linear_root(f, 2);
        let x3 = UniPoly::linear_root(f, 3);
        let a = &x1 * &x2;
        let b = &x2 * &x3;
        assert_eq!(a.gcd(&b), x2);
        let m = UniPoly::from_i64(f, &[2, 0, 1]);
        let inv = x1.inv_mod(&m).unwrap();
        assert!(x1.mul_mod(&inv, &m).is_one());
        assert!(x2.inv_mod(&(&x2 * &x3)).is_none());
    }

    #[test]
    fn ordering_is_degree_then_top_down() {
        let f = f13();
        let t = UniPoly::monomial(f, 1);
        let t_minus_1 = UniPoly::linear_root(f, 1);
        let t2 = UniPoly::from_i64(f, &[0, 0, 1]);
        assert!(t < t_minus_1);
        assert!(t_minus_1 < t2);
    }

    #[test]
    fn square_roots() {
        let f = f13();
        let a = UniPoly::from_i64(f, &[5, 3, 0, 2]);
        let sq = &a * &a;
        let r = sq.sqrt().unwrap();
        assert_eq!(&r * &r, sq);
        assert!(UniPoly::monomial(f, 1).sqrt().is_none());
        assert!(UniPoly::constant(f, 2).sqrt().is_none());
        assert_eq!(UniPoly::constant(f, 4).sqrt().unwrap().coeffs(), &[2]);
    }

    #[test]
    fn display() {
        let p = UniPoly::from_i64(f13(), &[2, 0, 1]);
        assert_eq!(p.to_string(), "t^2 + 2");
    }
}
