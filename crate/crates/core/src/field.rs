//! Prime fields and their finite extensions.
//!
//! Elements of `F_p` are plain `u64` values in `[0, p)`. Elements of an
//! extension `F_p[t]/(m(t))` are [`UniPoly`] residues of degree below `deg m`.
//! Both field types are small `Clone` values with no interior state.

use crate::error::{Error, Result};
use crate::factor;
use crate::poly::UniPoly;

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in the closed interval `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// The field `F_p` for an odd prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if p > u32::MAX as u64 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Canonical representative of an integer.
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u128) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, (self.p - 2) as u128))
        }
    }

    /// Euler criterion: `a^((p-1)/2) == 1`.
    pub fn is_square(&self, a: u64) -> Result<bool> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroSquareClass);
        }
        Ok(self.pow(a, ((self.p - 1) / 2) as u128) == 1)
    }

    /// Smallest positive nonsquare.
    pub fn find_nonsquare(&self) -> u64 {
        (2..self.p)
            .find(|&a| !self.is_square(a).expect("nonzero"))
            .expect("odd prime fields contain nonsquares")
    }

    /// Square root by Tonelli-Shanks, returning the smaller of the two roots.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a).ok()? {
            return None;
        }
        let p = self.p;
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self.find_nonsquare();
        let mut m = s;
        let mut c = self.pow(z, q as u128);
        let mut t = self.pow(a, q as u128);
        let mut r = self.pow(a, (q as u128).div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1u128 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r.min(p - r))
    }

    /// `-1` in this field.
    pub fn minus_one(&self) -> u64 {
        self.p - 1
    }
}

/// Element of an [`ExtensionField`]: a residue of degree below the modulus degree.
pub type ExtElem = UniPoly;

/// `F_p[t]/(m(t))` for a monic irreducible `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    base: PrimeField,
    modulus: UniPoly,
}

impl ExtensionField {
    /// Builds the extension, verifying that `modulus` is monic and irreducible.
    pub fn new(modulus: UniPoly) -> Result<Self> {
        let deg = modulus.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Err(Error::ZeroDegree);
        }
        if modulus.leading() != 1 || !factor::is_irreducible(&modulus) {
            return Err(Error::ReducibleModulus(deg));
        }
        Ok(ExtensionField {
            base: modulus.field(),
            modulus,
        })
    }

    /// `F_{p^m}` built on the smallest monic irreducible of degree `m`
    /// (ordered by coefficients from the top down).
    pub fn with_degree(base: PrimeField, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        Ok(ExtensionField {
            base,
            modulus: factor::smallest_irreducible(base, m as usize),
        })
    }

    /// The residue field of a closed point; the caller guarantees irreducibility.
    pub(crate) fn from_irreducible(modulus: UniPoly) -> Self {
        debug_assert!(modulus.degree().unwrap_or(0) >= 1);
        let modulus = modulus.monic();
        ExtensionField {
            base: modulus.field(),
            modulus,
        }
    }

    /// `F_p` itself, as a degree-one extension with modulus `t`.
    pub fn prime(base: PrimeField) -> Self {
        ExtensionField {
            base,
            modulus: UniPoly::monomial(base, 1),
        }
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn degree(&self) -> u32 {
        self.modulus.degree().expect("nonzero modulus") as u32
    }

    /// Field order `p^m`, when it fits in `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.base.p() as u128).checked_pow(self.degree())
    }

    pub fn zero(&self) -> ExtElem {
        UniPoly::zero(self.base)
    }

    pub fn one(&self) -> ExtElem {
        UniPoly::constant(self.base, 1)
    }

    pub fn from_base(&self, a: u64) -> ExtElem {
        UniPoly::constant(self.base, a)
    }

    pub fn reduce(&self, a: &UniPoly) -> ExtElem {
        a.rem(&self.modulus)
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a + b
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a - b
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        (a * b).rem(&self.modulus)
    }

    pub fn pow(&self, a: &ExtElem, exp: u128) -> ExtElem {
        a.pow_mod(exp, &self.modulus)
    }

    pub fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        a.inv_mod(&self.modulus)
    }

    /// `a^p`.
    pub fn frobenius(&self, a: &ExtElem) -> ExtElem {
        self.pow(a, self.base.p() as u128)
    }

    /// `N(a) = a * a^p * ... * a^(p^(m-1))`, an element of the prime field.
    pub fn norm(&self, a: &ExtElem) -> u64 {
        let mut acc = self.one();
        let mut conj = self.reduce(a);
        for _ in 0..self.degree() {
            acc = self.mul(&acc, &conj);
            conj = self.frobenius(&conj);
        }
        debug_assert!(acc.degree().unwrap_or(0) == 0);
        acc.coeff(0)
    }

    /// Square test by exponentiation to `(q-1)/2`.
    pub fn is_square(&self, a: &ExtElem) -> Result<bool> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Err(Error::ZeroSquareClass);
        }
        match self.order() {
            Some(q) => Ok(self.pow(&a, (q - 1) / 2) == self.one()),
            // a^((q-1)/2) = N(a)^((p-1)/2)
            None => self.base.is_square(self.norm(&a)),
        }
    }

    /// All elements, in counter order of their coefficient vectors.
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        let q = self.order().expect("enumerable field") as u64;
        (0..q).map(move |n| UniPoly::from_counter(self.base, n, self.degree() as usize))
    }
}

/// Whether `a in F_p^*` stays a square in `F_{p^m}`: always if it was one
/// already, otherwise exactly when `m` is even.
pub fn square_class_in_extension(field: PrimeField, a: u64, m: u32) -> Result<bool> {
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    Ok(field.is_square(a)? || m.is_multiple_of(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f13() -> PrimeField {
        PrimeField::new(13).unwrap()
    }

    #[test]
    fn euler_criterion_small_cases() {
        let f = f13();
        assert!(f.is_square(1).unwrap());
        assert!(f.is_square(4).unwrap());
        // 2^6 = 64 = 12 = -1 mod 13
        assert_eq!(f.pow(2, 6), 12);
        assert!(!f.is_square(2).unwrap());
        assert_eq!(f.is_square(0), Err(Error::ZeroSquareClass));
        assert_eq!(f.is_square(13), Err(Error::ZeroSquareClass));
    }

    #[test]
    fn smallest_nonsquares() {
        // brute-force squares to cross-check find_nonsquare
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let f = PrimeField::new(p).unwrap();
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            let expected = (1..p).find(|a| !squares.contains(a)).unwrap();
            assert_eq!(f.find_nonsquare(), expected, "p = {p}");
        }
        assert_eq!(PrimeField::new(3).unwrap().find_nonsquare(), 2);
        assert_eq!(PrimeField::new(7).unwrap().find_nonsquare(), 3);
        assert_eq!(f13().find_nonsquare(), 2);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(PrimeField::new(2), Err(Error::CharacteristicTwo));
        assert_eq!(PrimeField::new(15), Err(Error::NotPrime(15)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(PrimeField::new(1_000_003).is_ok());
    }

    #[test]
    fn sqrt_roundtrip() {
        for p in [3u64, 5, 13, 17, 41, 97, 1009] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p.min(200) {
                match f.sqrt(a) {
                    Some(r) => assert_eq!(f.mul(r, r), a),
                    None => assert!(!f.is_square(a).unwrap()),
                }
            }
        }
    }

    #[test]
    fn square_count_is_half_the_units() {
        for (p, m) in [(3u64, 1u32), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (11, 2), (13, 1), (13, 2)] {
            let k = ExtensionField::with_degree(PrimeField::new(p).unwrap(), m).unwrap();
            let q = k.order().unwrap();
            assert!(q <= 169);
            let squares = k
                .elements()
                .filter(|e| !e.is_zero())
                .filter(|e| k.is_square(e).unwrap())
                .count() as u128;
            assert_eq!(squares, (q - 1) / 2, "q = {p}^{m}");
        }
    }

    #[test]
    fn parity_rule_matches_exponentiation() {
        for p in primes_in(3, 50) {
            let base = PrimeField::new(p).unwrap();
            for m in 1..=4u32 {
                let k = ExtensionField::with_degree(base, m).unwrap();
                for a in 1..p {
                    let direct = k.is_square(&k.from_base(a)).unwrap();
                    assert_eq!(
                        square_class_in_extension(base, a, m).unwrap(),
                        direct,
                        "p={p} m={m} a={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn nonsquare_becomes_square_in_even_degree() {
        let f = f13();
        let a = f.find_nonsquare();
        assert!(square_class_in_extension(f, a, 2).unwrap());
        assert!(!square_class_in_extension(f, a, 3).unwrap());
        assert!(square_class_in_extension(f, 4, 3).unwrap());
        // a^((p^2-1)/2) = (a^((p-1)/2))^(p+1) = (-1)^(p+1) = 1
        let k2 = ExtensionField::with_degree(f, 2).unwrap();
        assert_eq!(k2.pow(&k2.from_base(a), (169 - 1) / 2), k2.one());
    }

    #[test]
    fn norm_is_consistent_with_square_classes() {
        let k = ExtensionField::with_degree(PrimeField::new(5).unwrap(), 3).unwrap();
        for e in k.elements().filter(|e| !e.is_zero()) {
            let n = k.norm(&e);
            assert_eq!(k.base().is_square(n).unwrap(), k.is_square(&e).unwrap());
        }
    }

    #[test]
    fn extension_rejects_reducible_modulus() {
        let f = f13();
        // t^2 - 1 = (t - 1)(t + 1)
        let m = UniPoly::from_i64(f, &[-1, 0, 1]);
        assert_eq!(ExtensionField::new(m), Err(Error::ReducibleModulus(2)));
        let m = UniPoly::from_i64(f, &[-2, 0, 1]);
        assert!(ExtensionField::new(m).is_ok());
    }

    #[test]
    fn smallest_modulus_is_canonical() {
        let k = ExtensionField::with_degree(f13(), 2).unwrap();
        // -1 is a square mod 13, -2 is not
        assert_eq!(k.modulus(), &UniPoly::from_i64(f13(), &[2, 0, 1]));
    }
}
