//! Mod-2 symbols over three tiers of fields and their residue maps:
//!
//! ```text
//!   plane   F_p(P^2)       residues at lines           -> line tier
//!   line    F_p(t)         residues at closed points   -> finite tier
//!   finite  F_{p^m}
//! ```
//!
//! A residue is computed by writing every entry as `u * pi^m` for a fixed
//! uniformizer `pi`, expanding multilinearly over `Z/2`, rewriting
//! `(pi, pi) = (-1, pi)`, and stripping the single remaining `pi`. The result
//! is a sum of symbols one length shorter.
//!
//! Classes over `F_p(t)` are decided by their residues at all closed points,
//! since `F_p` has trivial Brauer group; `H^2` of a finite field vanishes.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::factor::factor_univariate;
use crate::field::{ExtElem, ExtensionField, PrimeField};
use crate::geometry::{restrict_to_line, HomForm, LinearForm, ProjPoint};
use crate::poly::UniPoly;

/// A closed point of the parameter line `P^1` of a line's function field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinePlace {
    /// Zero locus of a monic irreducible polynomial in the parameter.
    Finite(UniPoly),
    Infinity,
}

impl LinePlace {
    pub fn degree(&self) -> u32 {
        match self {
            LinePlace::Finite(g) => g.degree().unwrap_or(0) as u32,
            LinePlace::Infinity => 1,
        }
    }

    pub(crate) fn residue_field(&self, base: PrimeField) -> ExtensionField {
        match self {
            LinePlace::Finite(g) => ExtensionField::from_irreducible(g.clone()),
            LinePlace::Infinity => ExtensionField::prime(base),
        }
    }
}

impl std::fmt::Display for LinePlace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinePlace::Finite(g) => write!(f, "({g})"),
            LinePlace::Infinity => write!(f, "inf"),
        }
    }
}

/// Nonzero element of `F_p(t)`: `constant * prod g^e` over monic irreducibles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineFunction {
    field: PrimeField,
    constant: u64,
    factors: BTreeMap<UniPoly, i64>,
}

impl LineFunction {
    pub fn constant(field: PrimeField, c: u64) -> Result<Self> {
        let c = c % field.p();
        if c == 0 {
            return Err(Error::ZeroEntry);
        }
        Ok(LineFunction { field, constant: c, factors: BTreeMap::new() })
    }

    pub fn from_poly(g: &UniPoly) -> Result<Self> {
        let fac = factor_univariate(g).map_err(|_| Error::ZeroEntry)?;
        let mut out = LineFunction::constant(g.field(), fac.leading)?;
        for (h, e) in fac.factors {
            out.factors.insert(h, e as i64);
        }
        Ok(out)
    }

    pub fn from_ratio(num: &UniPoly, den: &UniPoly) -> Result<Self> {
        Ok(Self::from_poly(num)?.mul(&Self::from_poly(den)?.inv()))
    }

    /// The parameter `t`.
    pub fn t(field: PrimeField) -> Self {
        Self::from_poly(&UniPoly::monomial(field, 1)).expect("nonzero")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn constant_term(&self) -> u64 {
        self.constant
    }

    pub fn factors(&self) -> &BTreeMap<UniPoly, i64> {
        &self.factors
    }

    pub fn mul(&self, other: &LineFunction) -> LineFunction {
        let mut out = self.clone();
        out.constant = self.field.mul(self.constant, other.constant);
        for (g, &e) in &other.factors {
            let entry = out.factors.entry(g.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                out.factors.remove(g);
            }
        }
        out
    }

    pub fn inv(&self) -> LineFunction {
        LineFunction {
            field: self.field,
            constant: self.field.inv(self.constant).expect("nonzero constant"),
            factors: self.factors.iter().map(|(g, &e)| (g.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> LineFunction {
        if n == 0 {
            return LineFunction::constant(self.field, 1).expect("one");
        }
        let base = if n < 0 { self.inv() } else { self.clone() };
        let k = n.unsigned_abs();
        LineFunction {
            field: self.field,
            constant: self.field.pow(base.constant, k as u128),
            factors: base.factors.into_iter().map(|(g, e)| (g, e * k as i64)).collect(),
        }
    }

    pub fn valuation(&self, place: &LinePlace) -> i64 {
        match place {
            LinePlace::Finite(g) => self.factors.get(g).copied().unwrap_or(0),
            LinePlace::Infinity => -self
                .factors
                .iter()
                .map(|(g, &e)| e * g.degree().unwrap_or(0) as i64)
                .sum::<i64>(),
        }
    }

    /// Valuation together with the reduction of `self * pi^(-v)` in the
    /// residue field, where `pi` is `g` at a finite place and `1/t` at infinity.
    pub fn reduce_at(&self, place: &LinePlace, k: &ExtensionField) -> (i64, ExtElem) {
        let m = self.valuation(place);
        let mut value = k.from_base(self.constant);
        if let LinePlace::Finite(g0) = place {
            for (g, &e) in &self.factors {
                if g == g0 {
                    continue;
                }
                let r = k.reduce(g);
                let r = if e < 0 { k.inv(&r).expect("coprime factors") } else { r };
                value = k.mul(&value, &k.pow(&r, e.unsigned_abs() as u128));
            }
        }
        (m, value)
    }

    /// Finite places in the support, in canonical order.
    pub fn support(&self) -> impl Iterator<Item = LinePlace> + '_ {
        self.factors.keys().map(|g| LinePlace::Finite(g.clone()))
    }

    /// Whether `self` is a square in `F_p(t)`.
    pub fn is_square(&self) -> bool {
        self.field.is_square(self.constant).expect("nonzero")
            && self.factors.values().all(|e| e % 2 == 0)
    }

    pub fn numerator(&self) -> UniPoly {
        self.side(1)
    }

    pub fn denominator(&self) -> UniPoly {
        self.side(-1)
    }

    fn side(&self, sign: i64) -> UniPoly {
        let c = if sign > 0 { self.constant } else { 1 };
        self.factors
            .iter()
            .filter(|(_, &e)| e * sign > 0)
            .fold(UniPoly::constant(self.field, c), |acc, (g, &e)| &acc * &g.pow(e.unsigned_abs() as u32))
    }

    /// Square-free polynomial in the same square class.
    pub fn square_free_representative(&self) -> UniPoly {
        self.factors
            .iter()
            .filter(|(_, &e)| e % 2 != 0)
            .fold(UniPoly::constant(self.field, self.constant), |acc, (g, _)| &acc * g)
    }
}

/// Nonzero rational function of degree 0 on `P^2`: `constant * prod F^e`.
///
/// Factors are normalized forms (leading coefficient 1). They need not be
/// irreducible for valuations and residues; [`PlaneFunction::is_invertible_at`]
/// assumes pairwise coprime factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneFunction {
    field: PrimeField,
    constant: u64,
    factors: BTreeMap<HomForm, i64>,
}

impl PlaneFunction {
    pub fn new(
        field: PrimeField,
        constant: u64,
        factors: impl IntoIterator<Item = (HomForm, i64)>,
    ) -> Result<Self> {
        let mut out = PlaneFunction { field, constant: constant % field.p(), factors: BTreeMap::new() };
        if out.constant == 0 {
            return Err(Error::ZeroEntry);
        }
        for (form, e) in factors {
            if form.is_zero() {
                return Err(Error::ZeroEntry);
            }
            out.push_factor(form, e);
        }
        let deg: i64 = out.factors.iter().map(|(g, &e)| e * g.degree() as i64).sum();
        if deg != 0 {
            return Err(Error::NonzeroDegree(deg));
        }
        Ok(out)
    }

    pub fn from_lines(field: PrimeField, constant: u64, lines: &[(LinearForm, i64)]) -> Result<Self> {
        Self::new(field, constant, lines.iter().map(|(l, e)| (l.to_form(), *e)))
    }

    pub fn constant(field: PrimeField, c: u64) -> Result<Self> {
        Self::new(field, c, [])
    }

    fn push_factor(&mut self, form: HomForm, e: i64) {
        if e == 0 {
            return;
        }
        let f = self.field;
        let (s, g) = form.normalized();
        let s = if e < 0 { f.inv(s).expect("nonzero") } else { s };
        self.constant = f.mul(self.constant, f.pow(s, e.unsigned_abs() as u128));
        if g.degree() == 0 {
            return;
        }
        let entry = self.factors.entry(g.clone()).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.factors.remove(&g);
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn constant_term(&self) -> u64 {
        self.constant
    }

    pub fn factors(&self) -> &BTreeMap<HomForm, i64> {
        &self.factors
    }

    pub fn mul(&self, other: &PlaneFunction) -> PlaneFunction {
        let mut out = self.clone();
        out.constant = self.field.mul(self.constant, other.constant);
        for (g, &e) in &other.factors {
            out.push_factor(g.clone(), e);
        }
        out
    }

    pub fn inv(&self) -> PlaneFunction {
        PlaneFunction {
            field: self.field,
            constant: self.field.inv(self.constant).expect("nonzero"),
            factors: self.factors.iter().map(|(g, &e)| (g.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> PlaneFunction {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let k = n.unsigned_abs();
        let mut out = PlaneFunction::constant(self.field, self.field.pow(base.constant, k as u128)).expect("nonzero");
        if k > 0 {
            for (g, e) in base.factors {
                out.factors.insert(g, e * k as i64);
            }
        }
        out
    }

    /// Order of vanishing along the line `L = 0`.
    pub fn valuation(&self, line: &LinearForm) -> i64 {
        self.factors
            .iter()
            .map(|(g, &e)| e * restrict_to_line(g, line).expect("nonzero factor").0 as i64)
            .sum()
    }

    /// Linear factors with nonzero exponent.
    pub fn line_support(&self) -> Vec<LinearForm> {
        self.factors
            .keys()
            .filter(|g| g.degree() == 1)
            .map(|g| {
                let mut c = [0u64; 3];
                for (e, &a) in g.terms() {
                    c[e.iter().position(|&n| n == 1).expect("linear")] = a;
                }
                LinearForm::new(self.field, c).expect("nonzero")
            })
            .collect()
    }

    /// Restriction of `self * (M / L)^m` to `L`, `M` the uniformizer complement.
    fn unit_restriction(&self, line: &LinearForm, complement: &LinearForm, m: i64) -> LineFunction {
        let mut out = LineFunction::constant(self.field, self.constant).expect("nonzero");
        for (g, &e) in &self.factors {
            let (_, r) = restrict_to_line(g, line).expect("nonzero factor");
            out = out.mul(&LineFunction::from_poly(&r).expect("nonzero restriction").pow(e));
        }
        if m != 0 {
            let (_, r) = restrict_to_line(&complement.to_form(), line).expect("nonzero");
            out = out.mul(&LineFunction::from_poly(&r).expect("complement is not the line").pow(m));
        }
        out
    }

    /// Whether every factor with nonzero exponent is nonzero at `point`.
    pub fn is_invertible_at(&self, point: &ProjPoint) -> bool {
        self.factors.keys().all(|g| g.eval(point) != 0)
    }
}

/// The denominator `M` of the plane uniformizer `L / M`: the first of
/// `z, y, x` that is not `L` itself.
pub fn uniformizer_complement(line: &LinearForm) -> LinearForm {
    let f = line.field();
    [LinearForm::z(f), LinearForm::y(f), LinearForm::x(f)]
        .into_iter()
        .find(|m| !m.same_line(line))
        .expect("a line is at most one coordinate axis")
}

/// Multilinear expansion of a residue. `entries` are `(valuation, reduced
/// unit)` pairs; returns the terms of the residue, each a symbol one shorter.
fn tame_expand<T: Clone>(entries: &[(i64, T)], minus_one: &T) -> Vec<Vec<T>> {
    let n = entries.len();
    let mut terms = Vec::new();
    for mask in 1u32..(1 << n) {
        let odd = (0..n)
            .filter(|&k| mask & (1 << k) != 0)
            .all(|k| entries[k].0 % 2 != 0);
        if !odd {
            continue;
        }
        let s = mask.count_ones() as usize;
        let mut term: Vec<T> = (0..n)
            .filter(|&k| mask & (1 << k) == 0)
            .map(|k| entries[k].1.clone())
            .collect();
        term.extend(std::iter::repeat_n(minus_one.clone(), s - 1));
        terms.push(term);
    }
    terms
}

/// Sum of symbols of a common length over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteClass {
    pub field: ExtensionField,
    pub length: usize,
    pub terms: Vec<Vec<ExtElem>>,
}

impl FiniteClass {
    /// For `length == 1`: the product of all entries, representing the class
    /// in `k^*/k^*2`. For `length == 0`: `1` or `0` as an `F_p` constant.
    pub fn representative(&self) -> ExtElem {
        match self.length {
            0 => self.field.from_base((self.terms.len() % 2) as u64),
            _ => self
                .terms
                .iter()
                .flatten()
                .fold(self.field.one(), |acc, e| self.field.mul(&acc, e)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self.length {
            0 => self.terms.len().is_multiple_of(2),
            1 => self.field.is_square(&self.representative()).expect("nonzero entries"),
            // finite fields have cohomological dimension 1
            _ => true,
        }
    }
}

/// Residue of one closed point, as recorded in zero-test evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointResidue {
    pub place: LinePlace,
    pub value: ExtElem,
    pub square: bool,
}

/// Sum of symbols of a common length over `F_p(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineClass {
    pub field: PrimeField,
    pub length: usize,
    pub terms: Vec<Vec<LineFunction>>,
}

impl LineClass {
    pub fn symbol(field: PrimeField, entries: Vec<LineFunction>) -> Self {
        LineClass { field, length: entries.len(), terms: vec![entries] }
    }

    pub fn residue_at(&self, place: &LinePlace) -> FiniteClass {
        let k = place.residue_field(self.field);
        let minus_one = k.from_base(self.field.minus_one());
        let mut terms = Vec::new();
        for term in &self.terms {
            let reduced: Vec<(i64, ExtElem)> = term.iter().map(|f| f.reduce_at(place, &k)).collect();
            terms.extend(tame_expand(&reduced, &minus_one));
        }
        let length = self.length.saturating_sub(1);
        FiniteClass { field: k, length, terms }
    }

    /// All finite places in the support of some entry, then infinity.
    pub fn places(&self) -> Vec<LinePlace> {
        let mut set: BTreeSet<LinePlace> = self.terms.iter().flatten().flat_map(|f| f.support()).collect();
        set.insert(LinePlace::Infinity);
        set.into_iter().collect()
    }

    /// Residues at every place of the support (length-2 classes).
    pub fn residue_table(&self) -> Vec<PointResidue> {
        debug_assert_eq!(self.length, 2);
        self.places()
            .into_iter()
            .map(|place| {
                let r = self.residue_at(&place);
                PointResidue { value: r.representative(), square: r.is_zero(), place }
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        match self.length {
            0 => self.terms.len().is_multiple_of(2),
            1 => self
                .terms
                .iter()
                .flatten()
                .fold(LineFunction::constant(self.field, 1).expect("one"), |acc, f| acc.mul(f))
                .is_square(),
            2 => self.residue_table().iter().all(|r| r.square),
            _ => unimplemented!("zero test for H^{} of a rational function field", self.length),
        }
    }

    /// First closed point with a nonsquare residue (length-2 classes).
    pub fn second_residue_witness(&self) -> Option<PointResidue> {
        self.residue_table().into_iter().find(|r| !r.square)
    }

    /// Product over closed points of the norms of residues is a square in `F_p`.
    pub fn reciprocity_holds(&self) -> bool {
        let total = self.residue_table().iter().fold(1u64, |acc, r| {
            let k = r.place.residue_field(self.field);
            self.field.mul(acc, k.norm(&r.value))
        });
        self.field.is_square(total).expect("norms of units are nonzero")
    }
}

pub fn plane_residue(entries: &[PlaneFunction], line: &LinearForm) -> LineClass {
    let field = line.field();
    let complement = uniformizer_complement(line);
    let reduced: Vec<(i64, LineFunction)> = entries
        .iter()
        .map(|f| {
            let m = f.valuation(line);
            (m, f.unit_restriction(line, &complement, m))
        })
        .collect();
    let minus_one = LineFunction::constant(field, field.minus_one()).expect("nonzero");
    LineClass {
        field,
        length: entries.len().saturating_sub(1),
        terms: tame_expand(&reduced, &minus_one),
    }
}

/// A nonzero function in one of the two function-field tiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactoredFunction {
    Plane(PlaneFunction),
    Line(LineFunction),
}

/// A divisorial valuation: a line of `P^2`, or a closed point of `P^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    PlaneLine(LinearForm),
    LinePoint(LinePlace),
}

impl Place {
    /// Degree of the residue field over its constant field (infinite
    /// residue fields of lines report 0).
    pub fn residue_degree(&self) -> u32 {
        match self {
            Place::PlaneLine(_) => 0,
            Place::LinePoint(pl) => pl.degree(),
        }
    }
}

/// `(a_1, ..., a_n)` with `n` in `1..=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolClass {
    Finite { field: ExtensionField, entries: Vec<ExtElem> },
    Line(Vec<LineFunction>),
    Plane(Vec<PlaneFunction>),
}

impl SymbolClass {
    pub fn finite(field: ExtensionField, entries: Vec<ExtElem>) -> Result<Self> {
        check_length(entries.len())?;
        if entries.iter().any(|e| field.reduce(e).is_zero()) {
            return Err(Error::ZeroEntry);
        }
        Ok(SymbolClass::Finite { field, entries })
    }

    pub fn line(entries: Vec<LineFunction>) -> Result<Self> {
        check_length(entries.len())?;
        Ok(SymbolClass::Line(entries))
    }

    pub fn plane(entries: Vec<PlaneFunction>) -> Result<Self> {
        check_length(entries.len())?;
        Ok(SymbolClass::Plane(entries))
    }

    pub fn len(&self) -> usize {
        match self {
            SymbolClass::Finite { entries, .. } => entries.len(),
            SymbolClass::Line(e) => e.len(),
            SymbolClass::Plane(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_length(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::SymbolLength(n))
    }
}

/// Residue of a symbol, one tier down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueClass {
    Line { line: LinearForm, class: LineClass },
    Finite(FiniteClass),
}

impl ResidueClass {
    pub fn is_zero(&self) -> bool {
        match self {
            ResidueClass::Line { class, .. } => class.is_zero(),
            ResidueClass::Finite(c) => c.is_zero(),
        }
    }
}

pub fn valuation(f: &FactoredFunction, v: &Place) -> Result<i64> {
    match (f, v) {
        (FactoredFunction::Plane(g), Place::PlaneLine(l)) => Ok(g.valuation(l)),
        (FactoredFunction::Line(g), Place::LinePoint(pl)) => Ok(g.valuation(pl)),
        _ => Err(Error::TierMismatch("function and place live on different tiers")),
    }
}

pub fn residue(s: &SymbolClass, v: &Place) -> Result<ResidueClass> {
    match (s, v) {
        (SymbolClass::Plane(entries), Place::PlaneLine(l)) => Ok(ResidueClass::Line {
            line: *l,
            class: plane_residue(entries, l),
        }),
        (SymbolClass::Line(entries), Place::LinePoint(pl)) => {
            let field = entries[0].field();
            Ok(ResidueClass::Finite(LineClass::symbol(field, entries.clone()).residue_at(pl)))
        }
        (SymbolClass::Finite { .. }, _) => Err(Error::TierMismatch("finite fields carry no places")),
        _ => Err(Error::TierMismatch("symbol and place live on different tiers")),
    }
}

/// Zero test in `H^1(k, Z/2) = k^*/k^*2` for a finite field `k`.
pub fn is_zero_h1(c: &SymbolClass) -> Result<bool> {
    match c {
        SymbolClass::Finite { field, entries } if entries.len() == 1 => field.is_square(&entries[0]),
        _ => Err(Error::TierMismatch("H^1 test needs a length-1 symbol over a finite field")),
    }
}

fn line_pair(s: &SymbolClass) -> Result<LineClass> {
    match s {
        SymbolClass::Line(entries) if entries.len() == 2 => {
            Ok(LineClass::symbol(entries[0].field(), entries.clone()))
        }
        _ => Err(Error::TierMismatch("expected a length-2 symbol over a line")),
    }
}

/// Zero test in `H^2(F_p(t), Z/2)`: all residues at closed points vanish.
pub fn is_zero_h2_line(s: &SymbolClass) -> Result<bool> {
    Ok(line_pair(s)?.is_zero())
}

pub fn second_residue_witness(s: &SymbolClass) -> Result<Option<LinePlace>> {
    Ok(line_pair(s)?.second_residue_witness().map(|r| r.place))
}

pub fn reciprocity_check(s: &SymbolClass) -> Result<bool> {
    Ok(line_pair(s)?.reciprocity_holds())
}
