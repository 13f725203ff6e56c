#![allow(dead_code)]

use h3nr_core::factor::is_irreducible;
use h3nr_core::geometry::{restrict_to_line, HomForm, LinearForm};
use h3nr_core::oracle::random_poly;
use h3nr_core::symbol::{LineFunction, LinePlace, PlaneFunction};
use h3nr_core::{ExtElem, ExtensionField, PrimeField, UniPoly};
use rand::Rng;

pub fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn random_nonzero<R: Rng>(k: PrimeField, rng: &mut R) -> u64 {
    rng.gen_range(1..k.p())
}

pub fn random_line<R: Rng>(k: PrimeField, rng: &mut R) -> LinearForm {
    loop {
        let c = [(); 3].map(|_| rng.gen_range(0..k.p()));
        if let Ok(l) = LinearForm::new(k, c) {
            return l;
        }
    }
}

pub fn random_line_avoiding<R: Rng>(k: PrimeField, avoid: &LinearForm, rng: &mut R) -> LinearForm {
    loop {
        let l = random_line(k, rng);
        if !l.same_line(avoid) {
            return l;
        }
    }
}

/// Product of random lines with exponents in `-2..=2`, balanced to degree 0,
/// none of them equal to `avoid`.
pub fn random_plane_unit_at<R: Rng>(k: PrimeField, avoid: &LinearForm, rng: &mut R) -> PlaneFunction {
    let mut lines = Vec::new();
    let mut deg = 0i64;
    for _ in 0..rng.gen_range(1..=3) {
        let e = rng.gen_range(-2..=2i64);
        lines.push((random_line_avoiding(k, avoid, rng), e));
        deg += e;
    }
    lines.push((random_line_avoiding(k, avoid, rng), -deg));
    PlaneFunction::from_lines(k, random_nonzero(k, rng), &lines).unwrap()
}

/// Like [`random_plane_unit_at`] but free to vanish along any line.
pub fn random_plane_function<R: Rng>(k: PrimeField, rng: &mut R) -> PlaneFunction {
    let mut lines = Vec::new();
    let mut deg = 0i64;
    for _ in 0..rng.gen_range(1..=3) {
        let e = rng.gen_range(-2..=2i64);
        lines.push((random_line(k, rng), e));
        deg += e;
    }
    lines.push((random_line(k, rng), -deg));
    PlaneFunction::from_lines(k, random_nonzero(k, rng), &lines).unwrap()
}

/// Restriction of a unit along `line`, computed factor by factor.
pub fn restrict_unit(f: &PlaneFunction, line: &LinearForm) -> LineFunction {
    let k = f.field();
    let mut out = LineFunction::constant(k, f.constant_term()).unwrap();
    for (g, &e) in f.factors() {
        let (order, r) = restrict_to_line(g, line).unwrap();
        assert_eq!(order, 0, "not a unit along the line");
        out = out.mul(&LineFunction::from_poly(&r).unwrap().pow(e));
    }
    out
}

pub fn random_form<R: Rng>(k: PrimeField, degree: u32, rng: &mut R) -> HomForm {
    loop {
        let mut terms = Vec::new();
        for i in 0..=degree {
            for j in 0..=degree - i {
                terms.push(([i, j, degree - i - j], rng.gen_range(0..k.p())));
            }
        }
        let f = HomForm::new(k, degree, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_monic_irreducible<R: Rng>(k: PrimeField, max_degree: usize, rng: &mut R) -> UniPoly {
    loop {
        let d = rng.gen_range(1..=max_degree);
        let mut c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..k.p())).collect();
        c.push(1);
        let g = UniPoly::new(k, c);
        if is_irreducible(&g) {
            return g;
        }
    }
}

pub fn random_place<R: Rng>(k: PrimeField, rng: &mut R) -> LinePlace {
    if rng.gen_bool(0.25) {
        LinePlace::Infinity
    } else {
        LinePlace::Finite(random_monic_irreducible(k, 2, rng))
    }
}

pub fn residue_field(k: PrimeField, place: &LinePlace) -> ExtensionField {
    match place {
        LinePlace::Finite(g) => ExtensionField::new(g.clone()).unwrap(),
        LinePlace::Infinity => ExtensionField::new(UniPoly::monomial(k, 1)).unwrap(),
    }
}

/// A uniformizer: `g` at a finite place, `1/t` at infinity.
pub fn uniformizer(k: PrimeField, place: &LinePlace) -> LineFunction {
    match place {
        LinePlace::Finite(g) => LineFunction::from_poly(g).unwrap(),
        LinePlace::Infinity => LineFunction::t(k).inv(),
    }
}

/// Random function with valuation 0 at `place`.
pub fn random_line_unit_at<R: Rng>(k: PrimeField, place: &LinePlace, max_degree: usize, rng: &mut R) -> LineFunction {
    let num = random_poly(k, max_degree, rng);
    let den = random_poly(k, max_degree, rng);
    let f = LineFunction::from_ratio(&num, &den).unwrap();
    let v = f.valuation(place);
    f.mul(&uniformizer(k, place).pow(-v))
}

/// Reduction of a unit at `place` straight from numerator and denominator.
pub fn reduce_unit(f: &LineFunction, place: &LinePlace, kf: &ExtensionField) -> ExtElem {
    let (num, den) = (f.numerator(), f.denominator());
    match place {
        LinePlace::Finite(_) => kf.mul(&kf.reduce(&num), &kf.inv(&kf.reduce(&den)).unwrap()),
        LinePlace::Infinity => {
            assert_eq!(num.degree(), den.degree(), "not a unit at infinity");
            let k = f.field();
            kf.from_base(k.mul(num.leading(), k.inv(den.leading()).unwrap()))
        }
    }
}

/// A unit at `place` whose reduction is a square: `u^2 (1 + pi h)`.
pub fn random_square_unit_at<R: Rng>(k: PrimeField, place: &LinePlace, max_degree: usize, rng: &mut R) -> LineFunction {
    loop {
        let u = random_line_unit_at(k, place, max_degree, rng);
        let h = random_line_unit_at(k, place, 1, rng);
        let (hn, hd) = (h.numerator(), h.denominator());
        let (num, den) = match place {
            LinePlace::Finite(g) => (&hd + &(&hn * g), hd),
            LinePlace::Infinity => {
                let td = &hd * &UniPoly::monomial(k, 1);
                (&td + &hn, td)
            }
        };
        if let Ok(e) = LineFunction::from_ratio(&num, &den) {
            return u.mul(&u).mul(&e);
        }
    }
}

/// Sum of two homogeneous forms of the same degree.
pub fn add_forms(f: &HomForm, g: &HomForm) -> HomForm {
    HomForm::new(f.field(), f.degree(), f.terms().iter().chain(g.terms()).map(|(e, c)| (*e, *c))).unwrap()
}

/// `(M^2 + L N) / M^2`, a unit along `L` restricting to `1`.
pub fn random_plane_one_along<R: Rng>(k: PrimeField, line: &LinearForm, rng: &mut R) -> PlaneFunction {
    loop {
        let m = random_line_avoiding(k, line, rng).to_form();
        let n = random_line(k, rng).to_form();
        let num = add_forms(&m.mul(&m), &line.to_form().mul(&n));
        if num.is_zero() {
            continue;
        }
        return PlaneFunction::new(k, 1, [(num, 1), (m, -2)]).unwrap();
    }
}

/// `L^m M^-m u` with `M != L` and `u` a unit along `L`.
pub fn random_plane_with_valuation<R: Rng>(k: PrimeField, line: &LinearForm, m: i64, rng: &mut R) -> PlaneFunction {
    let other = random_line_avoiding(k, line, rng);
    let pi = PlaneFunction::from_lines(k, 1, &[(*line, m), (other, -m)]).unwrap();
    pi.mul(&random_plane_unit_at(k, line, rng))
}

pub fn random_line_with_valuation<R: Rng>(k: PrimeField, place: &LinePlace, m: i64, max_degree: usize, rng: &mut R) -> LineFunction {
    uniformizer(k, place).pow(m).mul(&random_line_unit_at(k, place, max_degree, rng))
}

fn line_class(k: PrimeField, length: usize, terms: Vec<Vec<LineFunction>>) -> h3nr_core::symbol::LineClass {
    h3nr_core::symbol::LineClass { field: k, length, terms }
}

/// Residue of `(u, b)` at a place of `F_p(t)`, with `u` a unit and `v(b) = m`,
/// equals `m` times the class of the reduction of `u`.
pub fn prres1_line<R: Rng>(k: PrimeField, rng: &mut R) -> bool {
    let place = random_place(k, rng);
    let kf = residue_field(k, &place);
    let m = rng.gen_range(-3..=3i64);
    let u = random_line_unit_at(k, &place, 3, rng);
    let b = random_line_with_valuation(k, &place, m, 3, rng);
    let mut r = line_class(k, 2, vec![vec![u.clone(), b.clone()]]).residue_at(&place);
    if m % 2 != 0 {
        r.terms.push(vec![reduce_unit(&u, &place, &kf)]);
    }
    // length 1: the residue of (b) is m mod 2
    let r0 = line_class(k, 1, vec![vec![b]]).residue_at(&place);
    r.field == kf && r.is_zero() && r0.is_zero() == (m % 2 == 0)
}

/// Residue of `(u1, u2, b)` along a line of `P^2`, units `u1, u2`, `v(b) = m`,
/// equals `m (u1|_L, u2|_L)`; length-2 residue of `(u1, b)` likewise.
pub fn prres1_plane<R: Rng>(k: PrimeField, rng: &mut R) -> bool {
    let line = random_line(k, rng);
    let m = rng.gen_range(-3..=3i64);
    let u1 = random_plane_unit_at(k, &line, rng);
    let u2 = random_plane_unit_at(k, &line, rng);
    let b = random_plane_with_valuation(k, &line, m, rng);
    let (r1, r2) = (restrict_unit(&u1, &line), restrict_unit(&u2, &line));
    let mut long = h3nr_core::symbol::plane_residue(&[u1.clone(), u2, b.clone()], &line);
    let mut short = h3nr_core::symbol::plane_residue(&[u1, b], &line);
    if m % 2 != 0 {
        long.terms.push(vec![r1.clone(), r2]);
        short.terms.push(vec![r1]);
    }
    long.length == 2 && short.length == 1 && long.is_zero() && short.is_zero()
}

/// `b` a unit with square reduction: the residue of `(alpha, b)` vanishes for
/// any `alpha`.
pub fn prres2_line<R: Rng>(k: PrimeField, rng: &mut R) -> bool {
    let place = random_place(k, rng);
    let alpha = h3nr_core::oracle::random_line_function(k, 3, rng);
    let b = random_square_unit_at(k, &place, 2, rng);
    line_class(k, 2, vec![vec![alpha, b]]).residue_at(&place).is_zero()
}

pub fn prres2_plane<R: Rng>(k: PrimeField, rng: &mut R) -> bool {
    let line = random_line(k, rng);
    let a1 = random_plane_function(k, rng);
    let a2 = random_plane_function(k, rng);
    let s = random_plane_unit_at(k, &line, rng);
    let b = random_plane_one_along(k, &line, rng).mul(&s.pow(2));
    let long = h3nr_core::symbol::plane_residue(&[a1.clone(), a2, b.clone()], &line);
    let short = h3nr_core::symbol::plane_residue(&[a1, b], &line);
    long.is_zero() && short.is_zero()
}
