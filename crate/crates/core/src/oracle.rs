//! Brute-force cross-checks: point enumeration on `P^2(F_p)`, conic point
//! search over `F_p[t]`, and the integer data predicting bad primes.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::prime_divisors;
use crate::field::PrimeField;
use crate::geometry::{
    check_condition_i, check_condition_ii_iii, check_condition_primed, shift, Axis, LineArrangement, PrimedVariant,
    ProjPoint,
};
use crate::poly::UniPoly;
use crate::symbol::{LineClass, LineFunction};

/// The conic `a u^2 + b v^2 = w^2` over `F_p(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicSpec {
    pub a: UniPoly,
    pub b: UniPoly,
}

impl ConicSpec {
    pub fn new(a: UniPoly, b: UniPoly) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroEntry);
        }
        Ok(ConicSpec { a, b })
    }

    /// The conic of the symbol `(a, b)`, using square-free representatives.
    pub fn from_symbol(a: &LineFunction, b: &LineFunction) -> Self {
        ConicSpec { a: a.square_free_representative(), b: b.square_free_representative() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicPoint {
    pub u: UniPoly,
    pub v: UniPoly,
    pub w: UniPoly,
}

/// First solution with `deg u, deg v, deg w <= max_degree`.
///
/// Order: by `d = max(deg u, deg v)`, then `u` through the base-`p` counter
/// (zero last), then `v` likewise. Solutions are taken up to scaling, so the
/// first nonzero of `u, v` is monic.
pub fn conic_point_search(c: &ConicSpec, max_degree: usize) -> Option<ConicPoint> {
    let field = c.a.field();
    let p = field.p();
    for d in 0..=max_degree {
        let Some(count) = p.checked_pow(d as u32 + 1) else { break };
        let polys: Vec<UniPoly> = (1..=count).map(|n| UniPoly::from_counter(field, n % count, d + 1)).collect();
        let found = polys.par_iter().find_map_first(|u| {
            let u_deg = u.degree();
            if u_deg.is_some() && u.leading() != 1 {
                return None;
            }
            let au2 = &c.a * &(u * u);
            polys.iter().find_map(|v| {
                if u_deg.is_none() && (v.is_zero() || v.leading() != 1) {
                    return None;
                }
                let top = u_deg.into_iter().chain(v.degree()).max()?;
                if top != d {
                    return None;
                }
                let s = &au2 + &(&c.b * &(v * v));
                let w = s.sqrt()?;
                (w.degree().unwrap_or(0) <= max_degree).then(|| ConicPoint { u: u.clone(), v: v.clone(), w })
            })
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Conditions (i)-(iii) decided from point sets of `P^2(F_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition_i: bool,
    pub condition_ii: bool,
    pub condition_iii: bool,
}

pub fn exhaustive_condition_check(arr: &LineArrangement) -> ConditionReport {
    let field = arr.field();
    let points = ProjPoint::all(field);
    let sets: Vec<Vec<bool>> = arr
        .lines()
        .iter()
        .map(|s| points.iter().map(|q| s.form.contains(q)).collect())
        .collect();
    let condition_i = (0..sets.len()).all(|a| (a + 1..sets.len()).all(|b| sets[a] != sets[b]));
    let on_family = |i: u8, q: &ProjPoint| arr.family_forms(i).any(|l| l.eval(q) == 0);
    let triple_free = |axis: usize| {
        !points
            .iter()
            .any(|q| q.coords()[axis] == 0 && on_family(1, q) && on_family(2, q))
    };
    ConditionReport { condition_i, condition_ii: triple_free(0), condition_iii: triple_free(1) }
}

/// The algebraic checks, in the same shape as [`exhaustive_condition_check`].
pub fn algebraic_condition_check(arr: &LineArrangement) -> ConditionReport {
    ConditionReport {
        condition_i: check_condition_i(arr),
        condition_ii: check_condition_ii_iii(arr, Axis::X),
        condition_iii: check_condition_ii_iii(arr, Axis::Y),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExceptionalPrimes {
    All,
    Finite(BTreeSet<u64>),
}

impl ExceptionalPrimes {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            ExceptionalPrimes::All => true,
            ExceptionalPrimes::Finite(s) => s.contains(&p),
        }
    }
}

/// Primes at which the reduction of `(l_1, l_2)` violates the coefficient
/// constraint, (i), (ii') or (iii'), plus `2`.
pub fn exceptional_prime_set(l1: [i64; 3], l2: [i64; 3]) -> Result<ExceptionalPrimes> {
    let limit = i64::MAX / 16;
    if l1.iter().chain(&l2).any(|c| c.abs() > limit) {
        return Err(Error::MalformedTriple(format!("{l1:?} {l2:?}: entries too large")));
    }
    let mut values: Vec<i128> = Vec::new();
    for l in [l1, l2] {
        for c in l {
            values.push(c as i128);
            values.push(c as i128 + 1);
        }
    }
    let mut lines: Vec<[i128; 3]> = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for l in [l1, l2] {
        for j in 1..=8 {
            let e = shift(j);
            lines.push([0, 1, 2].map(|k| l[k] as i128 + e[k] as i128));
        }
    }
    for (n, a) in lines.iter().enumerate() {
        for b in &lines[n + 1..] {
            let minors = [
                a[0] * b[1] - a[1] * b[0],
                a[0] * b[2] - a[2] * b[0],
                a[1] * b[2] - a[2] * b[1],
            ];
            values.push(minors.iter().fold(0i128, |g, &m| gcd(g, m)));
        }
    }
    for first in [1usize, 0] {
        for (e1, e2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            for (f1, f2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let (u1, v1) = (l1[first] as i128 + e1, l1[2] as i128 + e2);
                let (u2, v2) = (l2[first] as i128 + f1, l2[2] as i128 + f2);
                values.push(u1 * v2 - v1 * u2);
            }
        }
    }
    if values.contains(&0) {
        return Ok(ExceptionalPrimes::All);
    }
    let mut set = BTreeSet::from([2u64]);
    for v in values {
        set.extend(prime_divisors(v.unsigned_abs() as u64));
    }
    Ok(ExceptionalPrimes::Finite(set))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Coefficient triple with entries in `F_p^* \ {-1}` as integers in `1..p-1`.
pub fn random_coefficients<R: Rng>(field: PrimeField, rng: &mut R) -> [i64; 3] {
    let p = field.p();
    [(); 3].map(|_| if p == 3 { 1 } else { rng.gen_range(1..p - 1) as i64 })
}

pub fn random_arrangement<R: Rng>(field: PrimeField, rng: &mut R) -> LineArrangement {
    LineArrangement::new(field, random_coefficients(field, rng), random_coefficients(field, rng))
        .expect("admissible coefficients")
}

pub fn random_poly<R: Rng>(field: PrimeField, max_degree: usize, rng: &mut R) -> UniPoly {
    let p = field.p();
    let deg = rng.gen_range(0..=max_degree);
    let mut c: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
    c[deg] = rng.gen_range(1..p);
    UniPoly::new(field, c)
}

/// Ratio of two random polynomials of degree at most `max_degree`.
pub fn random_line_function<R: Rng>(field: PrimeField, max_degree: usize, rng: &mut R) -> LineFunction {
    let num = random_poly(field, max_degree, rng);
    let den = random_poly(field, max_degree, rng);
    LineFunction::from_ratio(&num, &den).expect("nonzero")
}

/// A symbol `(a, b)` that is zero by construction: `b = w^2 - a u^2`.
pub fn random_zero_symbol<R: Rng>(field: PrimeField, max_degree: usize, rng: &mut R) -> (LineFunction, LineFunction) {
    loop {
        let a = random_line_function(field, max_degree, rng);
        let a_poly = a.square_free_representative();
        let u = random_poly(field, max_degree, rng);
        let w = random_poly(field, max_degree, rng);
        let b = &(&w * &w) - &(&a_poly * &(&u * &u));
        if !b.is_zero() {
            return (a, LineFunction::from_poly(&b).expect("nonzero"));
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Agreement {
    pub samples: usize,
    pub agree: usize,
}

impl Agreement {
    pub fn is_full(&self) -> bool {
        self.samples == self.agree
    }
}

/// Enumeration vs algebraic checks (and primed vs direct) on random arrangements.
pub fn arrangement_agreement<R: Rng>(field: PrimeField, samples: usize, rng: &mut R) -> Agreement {
    let arrs: Vec<LineArrangement> = (0..samples).map(|_| random_arrangement(field, rng)).collect();
    let agree = arrs
        .par_iter()
        .filter(|arr| {
            let alg = algebraic_condition_check(arr);
            exhaustive_condition_check(arr) == alg
                && check_condition_primed(arr, PrimedVariant::IiPrime) == alg.condition_ii
                && check_condition_primed(arr, PrimedVariant::IiiPrime) == alg.condition_iii
        })
        .count();
    Agreement { samples, agree }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConicReport {
    pub samples: usize,
    pub zero: usize,
    /// Zero verdicts confirmed by a conic point within the bound.
    pub zero_confirmed: usize,
    pub nonzero: usize,
    /// Nonzero verdicts contradicted by a conic point (must be 0).
    pub nonzero_contradicted: usize,
}

impl ConicReport {
    pub fn is_consistent(&self) -> bool {
        self.zero == self.zero_confirmed && self.nonzero_contradicted == 0
    }
}

/// Zero verdicts are confirmed by a search up to `confirm_degree`; nonzero
/// verdicts are attacked up to `refute_degree`, which is exhaustive and so
/// usually kept smaller.
pub fn conic_agreement(
    symbols: &[(LineFunction, LineFunction)],
    confirm_degree: usize,
    refute_degree: usize,
) -> ConicReport {
    let mut r = ConicReport { samples: symbols.len(), ..Default::default() };
    for (a, b) in symbols {
        let zero = LineClass::symbol(a.field(), vec![a.clone(), b.clone()]).is_zero();
        let bound = if zero { confirm_degree } else { refute_degree };
        let found = conic_point_search(&ConicSpec::from_symbol(a, b), bound).is_some();
        if zero {
            r.zero += 1;
            r.zero_confirmed += found as usize;
        } else {
            r.nonzero += 1;
            r.nonzero_contradicted += found as usize;
        }
    }
    r
}

/// Half random symbols, half zero by construction, entries of degree `<= max_degree`.
pub fn conic_corpus<R: Rng>(field: PrimeField, n: usize, max_degree: usize, rng: &mut R) -> Vec<(LineFunction, LineFunction)> {
    (0..n)
        .map(|k| {
            if k % 2 == 0 {
                (random_line_function(field, max_degree, rng), random_line_function(field, max_degree, rng))
            } else {
                random_zero_symbol(field, max_degree, rng)
            }
        })
        .collect()
}
