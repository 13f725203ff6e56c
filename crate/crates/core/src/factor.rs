//! Factorization of univariate polynomials over `F_p`: square-free
//! decomposition, distinct-degree splitting, then Cantor-Zassenhaus
//! equal-degree splitting driven by a deterministic candidate sequence.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::UniPoly;

/// `f = leading * prod(factor^multiplicity)` with monic, irreducible,
/// pairwise distinct factors sorted in [`UniPoly`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub leading: u64,
    pub factors: Vec<(UniPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: PrimeField) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(field, self.leading), |acc, (g, e)| &acc * &g.pow(*e))
    }
}

pub fn factor_univariate(f: &UniPoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let leading = f.leading();
    let mut factors = Vec::new();
    for (sqf, mult) in square_free(&f.monic()) {
        for (block, d) in distinct_degree(&sqf) {
            for g in equal_degree(&block, d) {
                factors.push((g, mult));
            }
        }
    }
    factors.sort();
    Ok(Factorization { leading, factors })
}

/// Square-free decomposition of a monic polynomial, handling `p`-th powers.
fn square_free(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let field = f.field();
    let p = field.p() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power: c(t) = r(t^p) = r(t)^p
        let root = UniPoly::new(field, c.coeffs().iter().step_by(p).copied().collect());
        for (g, e) in square_free(&root) {
            out.push((g, e * p as u32));
        }
    }
    out
}

/// Splits a monic square-free polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = f.field();
    let p = field.p() as u128;
    let t = UniPoly::monomial(field, 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest);
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(p, &rest);
        let g = rest.gcd(&(&h - &t));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap();
        out.push((rest, deg));
    }
    out
}

/// `a^((p^d - 1)/2) mod f`, computed as `(a^(1 + p + ... + p^(d-1)))^((p-1)/2)`.
fn half_power(a: &UniPoly, d: usize, f: &UniPoly) -> UniPoly {
    let p = a.field().p() as u128;
    let mut acc = UniPoly::one(a.field());
    let mut conj = a.rem(f);
    for _ in 0..d {
        acc = acc.mul_mod(&conj, f);
        conj = conj.pow_mod(p, f);
    }
    acc.pow_mod((p - 1) / 2, f)
}

fn equal_degree(f: &UniPoly, d: usize) -> Vec<UniPoly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let one = UniPoly::one(field);
    let mut counter = field.p();
    loop {
        let a = UniPoly::from_counter(field, counter, n);
        counter += 1;
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = &half_power(&a, d, f) - &one;
        let g = f.gcd(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&f.div_exact(&g), d));
            return out;
        }
    }
}

/// Rabin's test for a polynomial of positive degree.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = f.monic();
    let field = f.field();
    let p = field.p() as u128;
    let t = UniPoly::monomial(field, 1);
    let frob = |k: usize| {
        let mut h = t.rem(&f);
        for _ in 0..k {
            h = h.pow_mod(p, &f);
        }
        h
    };
    if frob(n) != t.rem(&f) {
        return false;
    }
    prime_divisors(n as u64)
        .into_iter()
        .all(|r| f.gcd(&(&frob(n / r as usize) - &t)).is_one())
}

/// The smallest monic irreducible of degree `m` in [`UniPoly`] order.
pub fn smallest_irreducible(field: PrimeField, m: usize) -> UniPoly {
    let p = field.p();
    let mut n = 0u64;
    loop {
        // enumerate lower coefficients with the top one most significant
        let mut digits = Vec::with_capacity(m);
        let mut k = n;
        for _ in 0..m {
            digits.push(k % p);
            k /= p;
        }
        let mut coeffs: Vec<u64> = digits;
        coeffs.push(1);
        let cand = UniPoly::new(field, coeffs);
        if is_irreducible(&cand) {
            return cand;
        }
        n += 1;
    }
}

pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = field(13);
        let fac = factor_univariate(&UniPoly::from_i64(f, &[-1, 0, 1])).unwrap();
        assert_eq!(fac.leading, 1);
        assert_eq!(
            fac.factors,
            vec![(UniPoly::linear_root(f, 12), 1), (UniPoly::linear_root(f, 1), 1)]
        );
    }

    #[test]
    fn irreducible_quadratic() {
        let f = field(13);
        let g = UniPoly::from_i64(f, &[-2, 0, 1]);
        let fac = factor_univariate(&g).unwrap();
        assert_eq!(fac.factors, vec![(g, 1)]);
    }

    #[test]
    fn repeated_root() {
        let f = field(5);
        let g = UniPoly::from_i64(f, &[1, -2, 1]);
        let fac = factor_univariate(&g).unwrap();
        assert_eq!(fac.factors, vec![(UniPoly::linear_root(f, 1), 2)]);
    }

    #[test]
    fn pth_powers() {
        let f = field(3);
        // (t + 1)^3 (t^2 + 1)^6 (t)^1
        let g = &(&UniPoly::from_i64(f, &[1, 1]).pow(3) * &UniPoly::from_i64(f, &[1, 0, 1]).pow(6))
            * &UniPoly::monomial(f, 1);
        let fac = factor_univariate(&g.scale(2)).unwrap();
        assert_eq!(fac.leading, 2);
        assert_eq!(
            fac.factors,
            vec![
                (UniPoly::monomial(f, 1), 1),
                (UniPoly::from_i64(f, &[1, 1]), 3),
                (UniPoly::from_i64(f, &[1, 0, 1]), 6),
            ]
        );
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(
            factor_univariate(&UniPoly::zero(field(7))),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn random_products_reexpand() {
        let f = field(13);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let deg = rng.gen_range(0..=8);
            let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..13)).collect();
            coeffs[deg] = rng.gen_range(1..13);
            let g = UniPoly::new(f, coeffs);
            let fac = factor_univariate(&g).unwrap();
            assert_eq!(fac.expand(f), g);
            for w in fac.factors.windows(2) {
                assert!(w[0].0 < w[1].0, "sorted and distinct");
            }
            for (h, _) in &fac.factors {
                assert_eq!(h.leading(), 1);
                assert!(is_irreducible(h), "{h} irreducible");
            }
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree n over F_q: (1/n) sum_{d|n} mu(d) q^(n/d)
        let cases = [(3u64, 2usize, 3usize), (3, 3, 8), (3, 4, 18), (5, 2, 10), (5, 3, 40), (7, 2, 21)];
        for (p, n, expected) in cases {
            let f = field(p);
            let total = p.pow(n as u32);
            let count = (0..total)
                .filter(|&k| {
                    let mut c: Vec<u64> = UniPoly::from_counter(f, k, n).coeffs().to_vec();
                    c.resize(n, 0);
                    c.push(1);
                    is_irreducible(&UniPoly::new(f, c))
                })
                .count();
            assert_eq!(count, expected, "p={p} n={n}");
        }
    }

    #[test]
    fn smallest_irreducibles() {
        let f = field(13);
        assert_eq!(smallest_irreducible(f, 1), UniPoly::monomial(f, 1));
        assert_eq!(smallest_irreducible(f, 2), UniPoly::from_i64(f, &[2, 0, 1]));
        let f3 = field(3);
        assert_eq!(smallest_irreducible(f3, 2), UniPoly::from_i64(f3, &[1, 0, 1]));
    }
}
