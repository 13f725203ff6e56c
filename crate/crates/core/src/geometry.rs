//! Forms on the projective plane over `F_p`, lines and their rational points,
//! and the incidence conditions on the 19-line arrangement.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::UniPoly;

/// A point of `P^2(F_p)`, normalized so the last nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [u64; 3],
}

impl ProjPoint {
    pub fn new(field: PrimeField, coords: [u64; 3]) -> Result<Self> {
        let coords = coords.map(|c| c % field.p());
        let last = coords
            .iter()
            .rposition(|&c| c != 0)
            .ok_or(Error::ZeroLinearForm)?;
        let inv = field.inv(coords[last]).expect("nonzero");
        Ok(ProjPoint {
            coords: coords.map(|c| field.mul(c, inv)),
        })
    }

    pub fn coords(&self) -> [u64; 3] {
        self.coords
    }

    /// Every point of `P^2(F_p)`: `p^2 + p + 1` of them.
    pub fn all(field: PrimeField) -> Vec<ProjPoint> {
        let p = field.p();
        let mut out = Vec::with_capacity((p * p + p + 1) as usize);
        for u in 0..p {
            for v in 0..p {
                out.push(ProjPoint { coords: [u, v, 1] });
            }
        }
        for u in 0..p {
            out.push(ProjPoint { coords: [u, 1, 0] });
        }
        out.push(ProjPoint { coords: [1, 0, 0] });
        out
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [u, v, w] = self.coords;
        write!(f, "[{u}:{v}:{w}]")
    }
}

/// `b x + c y + d z` with its original scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    field: PrimeField,
    coeffs: [u64; 3],
}

impl LinearForm {
    pub fn new(field: PrimeField, coeffs: [u64; 3]) -> Result<Self> {
        let coeffs = coeffs.map(|c| c % field.p());
        if coeffs == [0, 0, 0] {
            return Err(Error::ZeroLinearForm);
        }
        Ok(LinearForm { field, coeffs })
    }

    pub fn from_i64(field: PrimeField, coeffs: [i64; 3]) -> Result<Self> {
        Self::new(field, coeffs.map(|c| field.reduce(c)))
    }

    pub fn variable(field: PrimeField, index: usize) -> Self {
        let mut coeffs = [0; 3];
        coeffs[index] = 1;
        LinearForm { field, coeffs }
    }

    pub fn x(field: PrimeField) -> Self {
        Self::variable(field, 0)
    }

    pub fn y(field: PrimeField) -> Self {
        Self::variable(field, 1)
    }

    pub fn z(field: PrimeField) -> Self {
        Self::variable(field, 2)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> [u64; 3] {
        self.coeffs
    }

    /// Index of the first nonzero coefficient in `(x, y, z)` order.
    pub fn pivot(&self) -> usize {
        self.coeffs.iter().position(|&c| c != 0).expect("nonzero form")
    }

    /// Projective normalization: first nonzero coefficient equal to 1.
    pub fn canonical(&self) -> [u64; 3] {
        let inv = self.field.inv(self.coeffs[self.pivot()]).expect("nonzero");
        self.coeffs.map(|c| self.field.mul(c, inv))
    }

    /// The scalar `s` with `self = s * canonical()`.
    pub fn scaling(&self) -> u64 {
        self.coeffs[self.pivot()]
    }

    pub fn same_line(&self, other: &LinearForm) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn eval(&self, point: &ProjPoint) -> u64 {
        let f = self.field;
        let [u, v, w] = point.coords();
        f.add(
            f.add(f.mul(self.coeffs[0], u), f.mul(self.coeffs[1], v)),
            f.mul(self.coeffs[2], w),
        )
    }

    pub fn contains(&self, point: &ProjPoint) -> bool {
        self.eval(point) == 0
    }

    /// `self + e_x x + e_y y + e_z z`; `None` if that is the zero form.
    pub fn shifted(&self, e: [u64; 3]) -> Option<LinearForm> {
        let f = self.field;
        LinearForm::new(
            f,
            [
                f.add(self.coeffs[0], e[0]),
                f.add(self.coeffs[1], e[1]),
                f.add(self.coeffs[2], e[2]),
            ],
        )
        .ok()
    }

    pub fn to_form(&self) -> HomForm {
        let terms = (0..3).filter(|&i| self.coeffs[i] != 0).map(|i| {
            let mut e = [0u32; 3];
            e[i] = 1;
            (e, self.coeffs[i])
        });
        HomForm::new(self.field, 1, terms).expect("valid linear form")
    }

    /// The non-pivot variable indices `(a, b)`; the parametrization sends
    /// `t` to the point with `v_a = t`, `v_b = 1`.
    pub fn free_variables(&self) -> (usize, usize) {
        let k = self.pivot();
        let mut rest = (0..3).filter(|&i| i != k);
        (rest.next().unwrap(), rest.next().unwrap())
    }

    /// Pivot coordinate as `alpha * v_a + beta * v_b`.
    fn pivot_expression(&self) -> (u64, u64) {
        let f = self.field;
        let k = self.pivot();
        let (a, b) = self.free_variables();
        let inv = f.inv(self.coeffs[k]).expect("nonzero pivot");
        (
            f.neg(f.mul(self.coeffs[a], inv)),
            f.neg(f.mul(self.coeffs[b], inv)),
        )
    }

    /// The point with parameter `t`.
    pub fn point_at(&self, t: u64) -> ProjPoint {
        let f = self.field;
        let (a, b) = self.free_variables();
        let (alpha, beta) = self.pivot_expression();
        let mut coords = [0u64; 3];
        coords[a] = t % f.p();
        coords[b] = 1;
        coords[self.pivot()] = f.add(f.mul(alpha, t % f.p()), beta);
        ProjPoint::new(f, coords).expect("nonzero")
    }

    /// The parameter value at infinity (`v_b = 0`).
    pub fn point_at_infinity(&self) -> ProjPoint {
        let (a, _) = self.free_variables();
        let (alpha, _) = self.pivot_expression();
        let mut coords = [0u64; 3];
        coords[a] = 1;
        coords[self.pivot()] = alpha;
        ProjPoint::new(self.field, coords).expect("nonzero")
    }

    /// Parameter of a rational point on this line, `None` for the point at infinity.
    pub fn parameter_of(&self, point: &ProjPoint) -> Option<u64> {
        debug_assert!(self.contains(point));
        let (a, b) = self.free_variables();
        let c = point.coords();
        let inv = self.field.inv(c[b])?;
        Some(self.field.mul(c[a], inv))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_form())
    }
}

/// A homogeneous form in `x, y, z`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomForm {
    field: PrimeField,
    degree: u32,
    terms: BTreeMap<[u32; 3], u64>,
}

impl HomForm {
    pub fn new(
        field: PrimeField,
        degree: u32,
        terms: impl IntoIterator<Item = ([u32; 3], u64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::NonzeroDegree(e.iter().sum::<u32>() as i64 - degree as i64));
            }
            let entry = map.entry(e).or_insert(0);
            *entry = field.add(*entry, c % field.p());
        }
        map.retain(|_, c| *c != 0);
        Ok(HomForm { field, degree, terms: map })
    }

    /// The degree-zero form `c`.
    pub fn constant(field: PrimeField, c: u64) -> Self {
        HomForm::new(field, 0, [([0, 0, 0], c)]).expect("degree 0")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<[u32; 3], u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the largest monomial.
    pub fn leading(&self) -> u64 {
        self.terms.values().next_back().copied().unwrap_or(0)
    }

    pub fn scale(&self, c: u64) -> HomForm {
        let f = self.field;
        HomForm::new(f, self.degree, self.terms.iter().map(|(e, &a)| (*e, f.mul(a, c))))
            .expect("same degree")
    }

    /// `(s, g)` with `self = s * g` and `g` of leading coefficient 1.
    pub fn normalized(&self) -> (u64, HomForm) {
        let s = self.leading();
        let inv = self.field.inv(s).expect("nonzero form");
        (s, self.scale(inv))
    }

    pub fn mul(&self, other: &HomForm) -> HomForm {
        let f = self.field;
        let mut out: BTreeMap<[u32; 3], u64> = BTreeMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let entry = out.entry(e).or_insert(0);
                *entry = f.add(*entry, f.mul(c1, c2));
            }
        }
        HomForm::new(f, self.degree + other.degree, out).expect("degrees add")
    }

    pub fn pow(&self, n: u32) -> HomForm {
        (0..n).fold(HomForm::constant(self.field, 1), |acc, _| acc.mul(self))
    }

    pub fn product(field: PrimeField, forms: &[HomForm]) -> HomForm {
        forms.iter().fold(HomForm::constant(field, 1), |acc, g| acc.mul(g))
    }

    pub fn eval_coords(&self, c: [u64; 3]) -> u64 {
        let f = self.field;
        self.terms.iter().fold(0, |acc, (e, &a)| {
            let m = f.mul(
                f.mul(f.pow(c[0], e[0] as u128), f.pow(c[1], e[1] as u128)),
                f.pow(c[2], e[2] as u128),
            );
            f.add(acc, f.mul(a, m))
        })
    }

    pub fn eval(&self, point: &ProjPoint) -> u64 {
        self.eval_coords(point.coords())
    }

    /// The dehomogenized restriction to `line` under its fixed parametrization.
    pub fn restriction_poly(&self, line: &LinearForm) -> UniPoly {
        let field = self.field;
        let k = line.pivot();
        let (a, _) = line.free_variables();
        let (alpha, beta) = line.pivot_expression();
        let pivot_poly = UniPoly::new(field, vec![beta, alpha]);
        let t = UniPoly::monomial(field, 1);
        let mut out = UniPoly::zero(field);
        for (e, &c) in &self.terms {
            let term = &pivot_poly.pow(e[k]) * &t.pow(e[a]);
            out = &out + &term.scale(c);
        }
        out
    }

    /// Exact division by a linear form, `None` if it does not divide.
    pub fn div_linear(&self, line: &LinearForm) -> Option<HomForm> {
        let f = self.field;
        let k = line.pivot();
        let lc = line.coeffs();
        let inv = f.inv(lc[k]).expect("nonzero pivot");
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<[u32; 3], u64> = BTreeMap::new();
        // highest pivot power first
        while let Some((e, c)) = rem
            .iter()
            .filter(|(e, _)| e[k] > 0)
            .max_by_key(|(e, _)| (e[k], **e))
            .map(|(e, &c)| (*e, c))
        {
            let mut qe = e;
            qe[k] -= 1;
            let qc = f.mul(c, inv);
            *quot.entry(qe).or_insert(0) = f.add(quot.get(&qe).copied().unwrap_or(0), qc);
            for i in 0..3 {
                if lc[i] == 0 {
                    continue;
                }
                let mut te = qe;
                te[i] += 1;
                let cur = rem.get(&te).copied().unwrap_or(0);
                let next = f.sub(cur, f.mul(qc, lc[i]));
                if next == 0 {
                    rem.remove(&te);
                } else {
                    rem.insert(te, next);
                }
            }
        }
        if !rem.is_empty() {
            return None;
        }
        Some(HomForm::new(f, self.degree - 1, quot).expect("degree drops by one"))
    }
}

impl fmt::Display for HomForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = if *c == 1 && e != &[0, 0, 0] { String::new() } else { c.to_string() };
                for (v, &n) in ["x", "y", "z"].iter().zip(e.iter()) {
                    match n {
                        0 => {}
                        1 => s.push_str(v),
                        _ => s.push_str(&format!("{v}^{n}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `F = L^order * G` with `G` not divisible by `L`; returns `order` and the
/// restriction of `G` to `L` as a nonzero polynomial in the line parameter.
pub fn restrict_to_line(form: &HomForm, line: &LinearForm) -> Result<(u32, UniPoly)> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mut g = form.clone();
    let mut order = 0u32;
    loop {
        let r = g.restriction_poly(line);
        if !r.is_zero() {
            return Ok((order, r));
        }
        g = g.div_linear(line).expect("vanishing restriction implies divisibility");
        order += 1;
    }
}

/// The intersection point of two distinct lines (cross product).
pub fn intersect_lines(l1: &LinearForm, l2: &LinearForm) -> Result<ProjPoint> {
    let f = l1.field();
    let [a1, b1, c1] = l1.coeffs();
    let [a2, b2, c2] = l2.coeffs();
    let det = |u: u64, v: u64, s: u64, t: u64| f.sub(f.mul(u, v), f.mul(s, t));
    let cross = [det(b1, c2, c1, b2), det(c1, a2, a1, c2), det(a1, b2, b1, a2)];
    ProjPoint::new(f, cross).map_err(|_| Error::IdenticalLines)
}

/// The 8 shifts `h_j = e_x x + e_y y + e_z z`, `j = 1..=8`, in lexicographic
/// order of `(e_x, e_y, e_z)`; `h_1 = 0`.
pub fn shift(j: u8) -> [u64; 3] {
    let n = (j - 1) as u64;
    [(n >> 2) & 1, (n >> 1) & 1, n & 1]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineLabel {
    X,
    Y,
    Z,
    /// `l_i + h_j`.
    Family { i: u8, j: u8 },
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineLabel::X => write!(f, "A_x"),
            LineLabel::Y => write!(f, "A_y"),
            LineLabel::Z => write!(f, "A_z"),
            LineLabel::Family { i, j } => write!(f, "B_{i},{j}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportLine {
    pub label: LineLabel,
    pub form: LinearForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn form(self, field: PrimeField) -> LinearForm {
        match self {
            Axis::X => LinearForm::x(field),
            Axis::Y => LinearForm::y(field),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimedVariant {
    /// Pairs `[c_i + e_y : d_i + e_z]`, matching the `x = 0` axis.
    IiPrime,
    /// Pairs `[b_i + e_x : d_i + e_z]`, matching the `y = 0` axis.
    IiiPrime,
}

/// The 19 support lines `x, y, z, l_i + h_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineArrangement {
    field: PrimeField,
    l: [LinearForm; 2],
    lines: Vec<SupportLine>,
}

impl LineArrangement {
    /// Arrangement from integer coefficients, enforcing `b_i, c_i, d_i not in {0, -1}`.
    pub fn new(field: PrimeField, l1: [i64; 3], l2: [i64; 3]) -> Result<Self> {
        for (i, l) in [l1, l2].iter().enumerate() {
            for (name, &v) in ["b", "c", "d"].iter().zip(l.iter()) {
                let r = field.reduce(v);
                if r == 0 || r == field.minus_one() {
                    return Err(Error::CoefficientConstraint {
                        name: format!("{name}{}", i + 1),
                        value: v,
                        p: field.p(),
                    });
                }
            }
        }
        Self::unchecked(field, l1.map(|c| field.reduce(c)), l2.map(|c| field.reduce(c)))
    }

    /// Arrangement without the coefficient constraint; fails only when some
    /// `l_i + h_j` is the zero form.
    pub fn unchecked(field: PrimeField, l1: [u64; 3], l2: [u64; 3]) -> Result<Self> {
        let l = [LinearForm::new(field, l1)?, LinearForm::new(field, l2)?];
        let mut lines = vec![
            SupportLine { label: LineLabel::X, form: LinearForm::x(field) },
            SupportLine { label: LineLabel::Y, form: LinearForm::y(field) },
            SupportLine { label: LineLabel::Z, form: LinearForm::z(field) },
        ];
        for i in 1..=2u8 {
            for j in 1..=8u8 {
                let form = l[(i - 1) as usize]
                    .shifted(shift(j))
                    .ok_or(Error::ZeroLinearForm)?;
                lines.push(SupportLine { label: LineLabel::Family { i, j }, form });
            }
        }
        Ok(LineArrangement { field, l, lines })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn l(&self, i: u8) -> &LinearForm {
        &self.l[(i - 1) as usize]
    }

    pub fn lines(&self) -> &[SupportLine] {
        &self.lines
    }

    /// `l_i + h_j`.
    pub fn family(&self, i: u8, j: u8) -> &LinearForm {
        &self.lines[3 + 8 * (i as usize - 1) + (j as usize - 1)].form
    }

    pub fn family_forms(&self, i: u8) -> impl Iterator<Item = &LinearForm> {
        (1..=8).map(move |j| self.family(i, j))
    }
}

/// Condition (i): the 19 lines are pairwise distinct.
pub fn check_condition_i(arr: &LineArrangement) -> bool {
    let lines = arr.lines();
    lines.iter().enumerate().all(|(n, a)| {
        lines[n + 1..].iter().all(|b| !a.form.same_line(&b.form))
    })
}

/// Conditions (ii)/(iii): for all `j, j'` the lines `axis`, `l_1 + h_j`,
/// `l_2 + h_j'` have no common point.
pub fn check_condition_ii_iii(arr: &LineArrangement, axis: Axis) -> bool {
    let ax = axis.form(arr.field());
    arr.family_forms(1).all(|a| {
        arr.family_forms(2).all(|b| match intersect_lines(a, b) {
            Ok(pt) => !ax.contains(&pt),
            // a common line always meets the axis
            Err(_) => false,
        })
    })
}

/// The primed reformulations: the two 4-element sets of projective pairs
/// must be disjoint. Pairs `(0, 0)` are discarded.
pub fn check_condition_primed(arr: &LineArrangement, variant: PrimedVariant) -> bool {
    let f = arr.field();
    let first = match variant {
        PrimedVariant::IiPrime => 1usize,
        PrimedVariant::IiiPrime => 0,
    };
    let pairs = |i: u8| -> Vec<(u64, u64)> {
        let c = arr.l(i).coeffs();
        let mut out = Vec::new();
        for e1 in 0..2u64 {
            for e2 in 0..2u64 {
                let u = f.add(c[first], e1);
                let v = f.add(c[2], e2);
                if (u, v) != (0, 0) {
                    out.push((u, v));
                }
            }
        }
        out
    };
    let s1 = pairs(1);
    let s2 = pairs(2);
    s1.iter().all(|&(u1, v1)| {
        s2.iter()
            .all(|&(u2, v2)| f.sub(f.mul(u1, v2), f.mul(v1, u2)) != 0)
    })
}
