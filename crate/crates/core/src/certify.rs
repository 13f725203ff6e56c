//! Certification of the quadric-bundle construction
//!
//! ```text
//!   f = x / y,   g_1 = prod_j (l_1 + h_j) / y^8,   g_2 = prod_j (l_2 + h_j) / z^8
//!   Q : x0^2 - a x1^2 - f x2^2 + a f x3^2 - g_1 g_2 x4^2 = 0
//! ```
//!
//! over `F_p(x, y)`. A certificate records the arrangement checks, the
//! residue computations behind conditions 1-3, and the Arason gate. Every row
//! can be recomputed from the parameters alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::{primes_in, PrimeField};
use crate::geometry::{
    check_condition_i, check_condition_ii_iii, check_condition_primed, intersect_lines, Axis, LineArrangement,
    LineLabel, LinearForm, PrimedVariant, ProjPoint, SupportLine,
};
use crate::poly::UniPoly;
use crate::symbol::{plane_residue, LineClass, LinePlace, PlaneFunction, PointResidue};

pub const SCHEMA_VERSION: &str = "1";

/// Validated input `(p, a, l_1, l_2)`, stored reduced mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    field: PrimeField,
    a: u64,
    l1: [u64; 3],
    l2: [u64; 3],
}

impl ConstructionParams {
    pub fn new(p: u64, a: i64, l1: [i64; 3], l2: [i64; 3]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let ar = field.reduce(a);
        if ar == 0 {
            return Err(Error::ZeroParameter { a, p });
        }
        if field.is_square(ar)? {
            return Err(Error::SquareParameter { a, p });
        }
        LineArrangement::new(field, l1, l2)?;
        Ok(ConstructionParams { field, a: ar, l1: l1.map(|c| field.reduce(c)), l2: l2.map(|c| field.reduce(c)) })
    }

    /// Parameters with `a` the smallest positive nonsquare mod `p`.
    pub fn with_auto_a(p: u64, l1: [i64; 3], l2: [i64; 3]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Self::new(p, field.find_nonsquare() as i64, l1, l2)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn l1(&self) -> [u64; 3] {
        self.l1
    }

    pub fn l2(&self) -> [u64; 3] {
        self.l2
    }

    pub fn arrangement(&self) -> LineArrangement {
        LineArrangement::unchecked(self.field, self.l1, self.l2).expect("validated coefficients")
    }
}

/// The functions `a, f, g_1, g_2` and the support arrangement.
#[derive(Clone, Debug)]
pub struct Construction {
    pub a: PlaneFunction,
    pub f: PlaneFunction,
    pub g1: PlaneFunction,
    pub g2: PlaneFunction,
    pub arrangement: LineArrangement,
}

impl Construction {
    pub fn g(&self, i: u8) -> &PlaneFunction {
        if i == 1 {
            &self.g1
        } else {
            &self.g2
        }
    }

    fn symbol(&self, i: u8) -> [PlaneFunction; 3] {
        [self.a.clone(), self.f.clone(), self.g(i).clone()]
    }
}

pub fn build_functions(params: &ConstructionParams) -> Construction {
    let k = params.field();
    let arr = params.arrangement();
    let (x, y, z) = (LinearForm::x(k), LinearForm::y(k), LinearForm::z(k));
    let g = |i: u8, denom: LinearForm| {
        let mut lines: Vec<(LinearForm, i64)> = arr.family_forms(i).map(|l| (*l, 1)).collect();
        lines.push((denom, -8));
        PlaneFunction::from_lines(k, 1, &lines).expect("degree 0 by construction")
    };
    Construction {
        a: PlaneFunction::constant(k, params.a()).expect("a is nonzero"),
        f: PlaneFunction::from_lines(k, 1, &[(x, 1), (y, -1)]).expect("degree 0"),
        g1: g(1, y),
        g2: g(2, z),
        arrangement: arr,
    }
}

/// `<1, -a, -f, af, -g_1 g_2>` inside the Pfister form `<<a, f, g_1 g_2>>`.
#[derive(Clone, Debug)]
pub struct QuadricSpec {
    pub diagonal: Vec<PlaneFunction>,
    pub pfister: Vec<PlaneFunction>,
}

impl QuadricSpec {
    pub fn new(c: &Construction) -> Self {
        let k = c.a.field();
        let slots = [c.a.clone(), c.f.clone(), c.g1.mul(&c.g2)];
        // entry for a subset S of slots: (-1)^|S| prod_{s in S} slot
        let pfister: Vec<PlaneFunction> = (0u32..8)
            .map(|mask| {
                let sign = if mask.count_ones() % 2 == 1 { k.minus_one() } else { 1 };
                (0..3)
                    .filter(|b| mask & (1 << b) != 0)
                    .fold(PlaneFunction::constant(k, sign).expect("nonzero"), |acc, b| acc.mul(&slots[b]))
            })
            .collect();
        let diagonal = pfister[..5].to_vec();
        QuadricSpec { diagonal, pfister }
    }

    /// Dimension exceeds half the Pfister dimension and every diagonal entry
    /// occurs among the Pfister entries.
    pub fn is_pfister_neighbor(&self) -> bool {
        let mut pool = self.pfister.clone();
        let sub = self.diagonal.iter().all(|d| match pool.iter().position(|e| e == d) {
            Some(n) => {
                pool.remove(n);
                true
            }
            None => false,
        });
        sub && 2 * self.diagonal.len() > self.pfister.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    TrustedTheorem,
}

pub type Witness = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub witness: Witness,
    pub citation: String,
}

impl CheckRecord {
    fn new(name: impl Into<String>, ok: bool, witness: Witness, citation: &str) -> Self {
        CheckRecord {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness,
            citation: citation.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

fn witness<const N: usize>(entries: [(&str, String); N]) -> Witness {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

const CITE_ARRANGEMENT: &str = "incidence of lines over F_p";
const CITE_RESIDUES: &str = "residue-rules; faddeev";
const CITE_UNITS: &str = "residue-rules; support-reduction";
const CITE_FINITE_CD: &str = "residue-rules; finite-cd";

fn display_place(place: &LinePlace) -> String {
    match place {
        LinePlace::Finite(g) => g.coeffs().iter().map(u64::to_string).collect::<Vec<_>>().join(","),
        LinePlace::Infinity => "inf".to_string(),
    }
}

fn parse_place(field: PrimeField, s: &str) -> Option<LinePlace> {
    if s == "inf" {
        return Some(LinePlace::Infinity);
    }
    let coeffs: Option<Vec<u64>> = s.split(',').map(|c| c.parse().ok()).collect();
    let g = UniPoly::new(field, coeffs?);
    (g.leading() == 1 && is_irreducible(&g)).then_some(LinePlace::Finite(g))
}

fn parse_point(field: PrimeField, s: &str) -> Option<ProjPoint> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    let c: Option<Vec<u64>> = inner.split(':').map(|c| c.parse().ok()).collect();
    let c: [u64; 3] = c?.try_into().ok()?;
    ProjPoint::new(field, c).ok()
}

/// Rational point of `line` at a degree-1 place.
fn place_point(line: &LinearForm, place: &LinePlace) -> Option<ProjPoint> {
    match place {
        LinePlace::Infinity => Some(line.point_at_infinity()),
        LinePlace::Finite(g) if g.degree() == Some(1) => Some(line.point_at(line.field().neg(g.coeff(0)))),
        LinePlace::Finite(_) => None,
    }
}

fn evidence(class: &LineClass) -> String {
    class
        .residue_table()
        .iter()
        .map(|r| format!("{}={}:{}", display_place(&r.place), r.value, if r.square { "square" } else { "nonsquare" }))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Conditions (i), (ii), (ii'), (iii), (iii') in order.
pub fn check_arrangement(arr: &LineArrangement) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let distinct = check_condition_i(arr);
    let collision = if distinct {
        "none".to_string()
    } else {
        let lines = arr.lines();
        let mut w = String::new();
        'outer: for (n, a) in lines.iter().enumerate() {
            for b in &lines[n + 1..] {
                if a.form.same_line(&b.form) {
                    w = format!("{} = {}", a.label, b.label);
                    break 'outer;
                }
            }
        }
        w
    };
    out.push(CheckRecord::new(
        "condition (i)",
        distinct,
        witness([("lines", arr.lines().len().to_string()), ("collision", collision)]),
        CITE_ARRANGEMENT,
    ));
    for (axis, name, variant, primed) in [
        (Axis::X, "condition (ii)", PrimedVariant::IiPrime, "condition (ii')"),
        (Axis::Y, "condition (iii)", PrimedVariant::IiiPrime, "condition (iii')"),
    ] {
        let direct = check_condition_ii_iii(arr, axis);
        let ax = axis.form(arr.field());
        let mut meeting = "none".to_string();
        if !direct {
            'find: for a in arr.lines().iter().filter(|s| matches!(s.label, LineLabel::Family { i: 1, .. })) {
                for b in arr.lines().iter().filter(|s| matches!(s.label, LineLabel::Family { i: 2, .. })) {
                    let hit = match intersect_lines(&a.form, &b.form) {
                        Ok(pt) => ax.contains(&pt).then(|| pt.to_string()),
                        Err(_) => Some("common line".to_string()),
                    };
                    if let Some(h) = hit {
                        meeting = format!("{} & {} at {h}", a.label, b.label);
                        break 'find;
                    }
                }
            }
        }
        out.push(CheckRecord::new(
            name,
            direct,
            witness([("axis", ax.to_string()), ("triple_point", meeting)]),
            CITE_ARRANGEMENT,
        ));
        let p = check_condition_primed(arr, variant);
        out.push(CheckRecord::new(
            primed,
            p && p == direct,
            witness([("disjoint", p.to_string()), ("agrees_with_direct", (p == direct).to_string())]),
            CITE_ARRANGEMENT,
        ));
    }
    out
}

/// Build record and the Pfister-neighbor structure of the quadric.
pub fn check_structure(c: &Construction) -> Vec<CheckRecord> {
    let degree = |g: &PlaneFunction| -> i64 { g.factors().iter().map(|(h, &e)| e * h.degree() as i64).sum() };
    let divisor = |g: &PlaneFunction| -> String {
        let mut out = String::new();
        for (n, (h, &e)) in g.factors().iter().enumerate() {
            let sign = if e < 0 { "-" } else if n > 0 { "+" } else { "" };
            let sep = if n > 0 { " " } else { "" };
            let space = if n > 0 { " " } else { "" };
            out.push_str(&format!("{sep}{sign}{space}{}[{h}]", e.abs()));
        }
        out
    };
    let ok = [&c.f, &c.g1, &c.g2].iter().all(|g| degree(g) == 0);
    let build = CheckRecord::new(
        "build",
        ok,
        witness([
            ("div_f", divisor(&c.f)),
            ("div_g1", divisor(&c.g1)),
            ("div_g2", divisor(&c.g2)),
            ("degrees", format!("{},{},{}", degree(&c.f), degree(&c.g1), degree(&c.g2))),
        ]),
        "degree-zero divisors",
    );
    let q = QuadricSpec::new(c);
    let quadric = CheckRecord::new(
        "quadric",
        q.is_pfister_neighbor(),
        witness([
            ("form", "<1, -a, -f, af, -g1g2>".to_string()),
            ("pfister", "<<a, f, g1g2>>".to_string()),
            ("dimension", q.diagonal.len().to_string()),
            ("pfister_dimension", q.pfister.len().to_string()),
        ]),
        "arason",
    );
    vec![build, quadric]
}

/// Condition 1: a line `B_{i,j}` where `(a, f, g_i)` has nonzero residue,
/// certified by a closed point with nonsquare second residue.
pub fn check_condition1(c: &Construction) -> Vec<CheckRecord> {
    (1..=2u8)
        .map(|i| {
            let name = format!("condition 1 [i={i}]");
            let symbol = c.symbol(i);
            let found = (1..=8u8).find_map(|j| {
                let line = c.arrangement.family(i, j);
                plane_residue(&symbol, line).second_residue_witness().map(|w| (j, *line, w))
            });
            match found {
                Some((j, line, w)) => CheckRecord::new(name, true, condition1_witness(i, j, &line, &w), CITE_RESIDUES),
                None => CheckRecord::new(
                    name,
                    false,
                    witness([("reason", format!("no line B_{i},j with nonzero residue"))]),
                    CITE_RESIDUES,
                ),
            }
        })
        .collect()
}

fn condition1_witness(i: u8, j: u8, line: &LinearForm, w: &PointResidue) -> Witness {
    let k = line.field();
    let point = place_point(line, &w.place);
    let on_axis = match &point {
        Some(pt) if LinearForm::x(k).contains(pt) => "x = 0",
        Some(pt) if LinearForm::y(k).contains(pt) => "y = 0",
        _ => "none",
    };
    witness([
        ("line", LineLabel::Family { i, j }.to_string()),
        ("form", line.to_string()),
        ("place", display_place(&w.place)),
        ("place_degree", w.place.degree().to_string()),
        ("point", point.map_or_else(|| "non-rational".to_string(), |p| p.to_string())),
        ("on_axis", on_axis.to_string()),
        ("residue", w.value.to_string()),
        ("class", "nonsquare".to_string()),
    ])
}

fn case_label(label: LineLabel) -> &'static str {
    match label {
        LineLabel::X => "1c",
        LineLabel::Y => "1d",
        LineLabel::Z => "1e",
        LineLabel::Family { .. } => "1b",
    }
}

/// Condition 2 on every support line, preceded by the off-support lemma.
pub fn check_condition2(c: &Construction) -> Vec<CheckRecord> {
    let arr = &c.arrangement;
    let support: Vec<LinearForm> = arr.lines().iter().map(|s| s.form).collect();
    let on_support = [&c.a, &c.f, &c.g1, &c.g2].iter().all(|g| {
        g.factors().keys().all(|h| h.degree() == 1)
            && g.line_support().iter().all(|l| support.iter().any(|s| s.same_line(l)))
    });
    let mut out = vec![CheckRecord {
        name: "condition 2 [off support]".to_string(),
        status: if on_support { Status::TrustedTheorem } else { Status::Fail },
        witness: witness([
            ("case", "1a".to_string()),
            ("support_lines", support.len().to_string()),
            ("entries", "units at every other prime divisor".to_string()),
        ]),
        citation: CITE_UNITS.to_string(),
    }];
    let s1 = c.symbol(1);
    let s2 = c.symbol(2);
    out.extend(arr.lines().par_iter().map(|s| condition2_row(s, &s1, &s2)).collect::<Vec<_>>());
    out
}

fn condition2_row(s: &SupportLine, s1: &[PlaneFunction], s2: &[PlaneFunction]) -> CheckRecord {
    let r1 = plane_residue(s1, &s.form);
    let r2 = plane_residue(s2, &s.form);
    let (z1, z2) = (r1.is_zero(), r2.is_zero());
    let vanishing = match (z1, z2) {
        (true, true) => "both",
        (true, false) => "g1",
        (false, true) => "g2",
        (false, false) => "none",
    };
    let zero = |z: bool| if z { "zero" } else { "nonzero" }.to_string();
    CheckRecord::new(
        format!("condition 2 [{}]", s.label),
        z1 || z2,
        witness([
            ("case", case_label(s.label).to_string()),
            ("form", s.form.to_string()),
            ("residue_g1", zero(z1)),
            ("residue_g2", zero(z2)),
            ("vanishing", vanishing.to_string()),
            ("evidence_g1", evidence(&r1)),
            ("evidence_g2", evidence(&r2)),
        ]),
        CITE_RESIDUES,
    )
}

/// Candidate functions for condition 3, in the order they are tried.
pub fn condition3_candidates(c: &Construction) -> Vec<(&'static str, PlaneFunction)> {
    let k = c.a.field();
    let (x, y, z) = (LinearForm::x(k), LinearForm::y(k), LinearForm::z(k));
    let ratio8 = |u: LinearForm, v: LinearForm| PlaneFunction::from_lines(k, 1, &[(u, 8), (v, -8)]).expect("degree 0");
    let yz8 = ratio8(y, z);
    let zy8 = yz8.inv();
    // (y/x)^8 and (z/x)^8 cover y = z = 0, where every other candidate has a pole
    vec![
        ("f", c.f.clone()),
        ("g1", c.g1.clone()),
        ("g1*(y/z)^8", c.g1.mul(&yz8)),
        ("g1*(z/y)^8", c.g1.mul(&zy8)),
        ("g1*(y/x)^8", c.g1.mul(&ratio8(y, x))),
        ("g2", c.g2.clone()),
        ("g2*(y/z)^8", c.g2.mul(&yz8)),
        ("g2*(z/y)^8", c.g2.mul(&zy8)),
        ("g2*(z/x)^8", c.g2.mul(&ratio8(z, x))),
    ]
}

/// Condition 3 at every intersection point of two support lines, preceded
/// by lemma rows for the remaining closed points.
pub fn check_condition3(c: &Construction) -> Vec<CheckRecord> {
    let k = c.a.field();
    let arr = &c.arrangement;
    let (x, y, z) = (LinearForm::x(k), LinearForm::y(k), LinearForm::z(k));
    let line_set = |g: &PlaneFunction| -> Vec<LinearForm> { g.line_support() };
    let only = |g: &PlaneFunction, allowed: &[LinearForm]| {
        g.factors().keys().all(|h| h.degree() == 1) && line_set(g).iter().all(|l| allowed.iter().any(|a| a.same_line(l)))
    };
    let fam = |i: u8| -> Vec<LinearForm> { arr.family_forms(i).copied().collect() };
    let f_ok = only(&c.f, &[x, y]);
    let g1_ok = only(&c.g1, &[&fam(1)[..], &[y]].concat());
    let g2_ok = only(&c.g2, &[&fam(2)[..], &[z]].concat());
    let lemma = |name: &str, ok: bool, case: &str, function: &str, points: &str| CheckRecord {
        name: name.to_string(),
        status: if ok { Status::TrustedTheorem } else { Status::Fail },
        witness: witness([
            ("case", case.to_string()),
            ("function", function.to_string()),
            ("points", points.to_string()),
        ]),
        citation: CITE_FINITE_CD.to_string(),
    };
    let mut out = vec![
        lemma("condition 3 [off axes]", f_ok, "2a", "f", "closed points off x = 0 and y = 0"),
        lemma(
            "condition 3 [generic on x = 0]",
            g1_ok,
            "2b",
            "g1",
            "closed points of x = 0 on no other support line",
        ),
        lemma(
            "condition 3 [generic on y = 0]",
            g2_ok,
            "2b",
            "g2",
            "closed points of y = 0 on no other support line",
        ),
    ];
    let mut points: BTreeMap<[u64; 3], (ProjPoint, BTreeSet<LineLabel>)> = BTreeMap::new();
    let lines = arr.lines();
    for (n, a) in lines.iter().enumerate() {
        for b in &lines[n + 1..] {
            if let Ok(pt) = intersect_lines(&a.form, &b.form) {
                let entry = points.entry(pt.coords()).or_insert_with(|| (pt, BTreeSet::new()));
                entry.1.insert(a.label);
                entry.1.insert(b.label);
            }
        }
    }
    let candidates = condition3_candidates(c);
    for (pt, labels) in points.into_values() {
        let on_axis = x.contains(&pt) || y.contains(&pt);
        let found = candidates.iter().find(|(_, g)| g.is_invertible_at(&pt)).map(|(name, _)| *name);
        out.push(CheckRecord::new(
            format!("condition 3 {pt}"),
            found.is_some(),
            witness([
                ("point", pt.to_string()),
                ("lines", labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")),
                ("case", if on_axis { "2b" } else { "2a" }.to_string()),
                ("invertible", found.unwrap_or("none").to_string()),
            ]),
            CITE_FINITE_CD,
        ));
    }
    out
}

/// The Arason gate: with both condition-1 witnesses, `(a, f, g_1)` is
/// neither `0` nor `(a, f, g_1 g_2)`, so survives over `F(Q)`.
pub fn arason_gate(cond1: &[CheckRecord]) -> Result<CheckRecord> {
    let get = |i: usize| {
        cond1
            .get(i)
            .ok_or_else(|| Error::MalformedCertificate(format!("missing condition-1 record {}", i + 1)))
    };
    let (w1, w2) = (get(0)?, get(1)?);
    let at = |r: &CheckRecord| match (r.witness.get("line"), r.witness.get("place")) {
        (Some(l), Some(p)) if r.passed() => format!("{l} at {p}"),
        _ => "none".to_string(),
    };
    let reason = match (w1.passed(), w2.passed()) {
        (true, true) => None,
        (false, _) => Some("cannot exclude xi = 0"),
        (true, false) => Some("cannot exclude xi = (a,f,g1g2)"),
    };
    let mut w = witness([
        ("xi", "(a, f, g1)".to_string()),
        ("witness_g1", at(w1)),
        ("witness_g2", at(w2)),
        ("neighbor", "dimension 5 > 8/2".to_string()),
    ]);
    if let Some(r) = reason {
        w.insert("reason".to_string(), r.to_string());
    }
    Ok(CheckRecord {
        name: "arason gate".to_string(),
        status: if reason.is_none() { Status::TrustedTheorem } else { Status::Fail },
        witness: w,
        citation: "arason; unramified-criterion".to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub p: String,
    pub a: String,
    pub l1: [String; 3],
    pub l2: [String; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    pub arrangement: Vec<CheckRecord>,
    pub structure: Vec<CheckRecord>,
    pub condition1: Vec<CheckRecord>,
    pub condition2: Vec<CheckRecord>,
    pub condition3: Vec<CheckRecord>,
    pub arason_gate: Option<CheckRecord>,
}

impl Conditions {
    pub fn records(&self) -> impl Iterator<Item = &CheckRecord> {
        self.arrangement
            .iter()
            .chain(&self.structure)
            .chain(&self.condition1)
            .chain(&self.condition2)
            .chain(&self.condition3)
            .chain(self.arason_gate.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    /// One entry per `i`: the line `B_i` and the second-residue point.
    pub condition1: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Citation {
    pub key: String,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: String,
    pub params: ParamsRecord,
    pub conditions: Conditions,
    pub witnesses: Witnesses,
    pub verdict: String,
    pub citations: Vec<Citation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Certified,
    /// Name of the first failing check.
    Failed(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Certified => write!(f, "CERTIFIED"),
            Verdict::Failed(r) => write!(f, "FAILED({r})"),
        }
    }
}

impl Certificate {
    pub fn verdict(&self) -> Verdict {
        match self.verdict.strip_prefix("FAILED(").and_then(|s| s.strip_suffix(')')) {
            Some(r) => Verdict::Failed(r.to_string()),
            None => Verdict::Certified,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedCertificate(e.to_string()))
    }

    pub fn params(&self) -> Result<ConstructionParams> {
        let bad = |what: &str| Error::MalformedCertificate(format!("params.{what}"));
        let int = |s: &str, what: &str| s.parse::<i64>().map_err(|_| bad(what));
        let triple = |t: &[String; 3], what: &str| -> Result<[i64; 3]> {
            Ok([int(&t[0], what)?, int(&t[1], what)?, int(&t[2], what)?])
        };
        let p = self.params.p.parse::<u64>().map_err(|_| bad("p"))?;
        ConstructionParams::new(p, int(&self.params.a, "a")?, triple(&self.params.l1, "l1")?, triple(&self.params.l2, "l2")?)
    }
}

fn citations() -> Vec<Citation> {
    [
        ("residue-rules", "for a DVR A with residue field k: if alpha is unramified at A and v_A(b) = m then d_A(alpha u (b)) = m alpha_0; if b is a unit with square reduction then d_A(alpha u (b)) = 0 (Colliot-Thelene-Ojanguren 1.3, 1.4)"),
        ("faddeev", "a class in H^2(F_p(t), Z/2) is zero iff its residues at all closed points of P^1, infinity included, are zero, since Br(F_p) = 0"),
        ("finite-cd", "finite fields have cohomological dimension 1, so H^2(k_M, Z/2) = 0 at every closed point M"),
        ("support-reduction", "at prime divisors of P^2 outside the support lines every entry of (a, f, g_i) is a unit, so both residues vanish"),
        ("arason", "if phi is a neighbor of the Pfister form <<a1, a2, a3>> then the kernel of H^3(k, Z/2) -> H^3(k(phi), Z/2) is {0, (a1, a2, a3)} (Arason)"),
        ("unramified-criterion", "given an a nonsquare in F_p and conditions 1-3, the image of (a, f, g1) in H^3(F(Q), Z/2) is a nonzero element of H^3_nr(Q, Z/2)"),
        ("chow-comparison", "for the smooth projective model X of Q over Q (Hironaka) and almost all p, H^3_nr(X_p, Z/2) != 0 forces CH^2(X) -> CH^2(X-bar)^G to be non-surjective (Kahn)"),
    ]
    .into_iter()
    .map(|(k, s)| Citation { key: k.to_string(), statement: s.to_string() })
    .collect()
}

pub fn certify(params: &ConstructionParams) -> Certificate {
    let arr = params.arrangement();
    let arrangement = check_arrangement(&arr);
    let mut conditions = Conditions {
        arrangement,
        structure: Vec::new(),
        condition1: Vec::new(),
        condition2: Vec::new(),
        condition3: Vec::new(),
        arason_gate: None,
    };
    let mut cond1_witnesses = Vec::new();
    if conditions.arrangement.iter().all(CheckRecord::passed) {
        let c = build_functions(params);
        conditions.structure = check_structure(&c);
        conditions.condition1 = check_condition1(&c);
        conditions.condition2 = check_condition2(&c);
        conditions.condition3 = check_condition3(&c);
        conditions.arason_gate = Some(arason_gate(&conditions.condition1).expect("two records"));
        cond1_witnesses = conditions
            .condition1
            .iter()
            .filter(|r| r.passed())
            .map(|r| r.witness.clone())
            .collect();
    }
    let verdict = match conditions.records().find(|r| !r.passed()) {
        Some(r) => Verdict::Failed(r.name.clone()),
        None => Verdict::Certified,
    };
    let s = |v: u64| v.to_string();
    Certificate {
        schema_version: SCHEMA_VERSION.to_string(),
        params: ParamsRecord {
            p: s(params.p()),
            a: s(params.a()),
            l1: params.l1().map(s),
            l2: params.l2().map(s),
        },
        conditions,
        witnesses: Witnesses { condition1: cond1_witnesses },
        verdict: verdict.to_string(),
        citations: citations(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Re-checks the condition-1 and condition-3 witnesses directly, then
/// compares the whole document against a fresh certification.
pub fn validate(json: &str) -> ValidationReport {
    let mut problems = Vec::new();
    let cert = match Certificate::from_json(json) {
        Ok(c) => c,
        Err(e) => return ValidationReport { problems: vec![e.to_string()] },
    };
    if cert.schema_version != SCHEMA_VERSION {
        problems.push(format!("schema version {}", cert.schema_version));
    }
    let params = match cert.params() {
        Ok(p) => p,
        Err(e) => {
            problems.push(e.to_string());
            return ValidationReport { problems };
        }
    };
    let fresh = certify(&params);
    if !fresh.conditions.arrangement.iter().all(CheckRecord::passed) {
        if fresh != cert {
            problems.push("certificate differs from recomputation".to_string());
        }
        return ValidationReport { problems };
    }
    let c = build_functions(&params);
    for w in &cert.witnesses.condition1 {
        if let Err(e) = check_condition1_witness(&c, w) {
            problems.push(format!("condition-1 witness: {e}"));
        }
    }
    for r in &cert.conditions.condition3 {
        if let Some(pt) = r.witness.get("point") {
            if let Err(e) = check_condition3_row(&c, pt, r.witness.get("invertible").map(String::as_str)) {
                problems.push(format!("{}: {e}", r.name));
            }
        }
    }
    if fresh.to_json() != json {
        problems.push("certificate differs from recomputation".to_string());
    }
    ValidationReport { problems }
}

fn check_condition1_witness(c: &Construction, w: &Witness) -> std::result::Result<(), String> {
    let k = c.a.field();
    let label = w.get("line").ok_or("missing line")?;
    let (i, j) = label
        .strip_prefix("B_")
        .and_then(|s| s.split_once(','))
        .and_then(|(i, j)| Some((i.parse::<u8>().ok()?, j.parse::<u8>().ok()?)))
        .filter(|&(i, j)| (1..=2).contains(&i) && (1..=8).contains(&j))
        .ok_or("bad line label")?;
    let place = w.get("place").and_then(|s| parse_place(k, s)).ok_or("bad place")?;
    let line = c.arrangement.family(i, j);
    let r = plane_residue(&c.symbol(i), line).residue_at(&place);
    if r.is_zero() {
        return Err(format!("residue at {} is a square", display_place(&place)));
    }
    if w.get("residue") != Some(&r.representative().to_string()) {
        return Err("residue value mismatch".to_string());
    }
    Ok(())
}

fn check_condition3_row(c: &Construction, point: &str, function: Option<&str>) -> std::result::Result<(), String> {
    let pt = parse_point(c.a.field(), point).ok_or("bad point")?;
    let name = function.ok_or("missing function")?;
    let (_, g) = condition3_candidates(c)
        .into_iter()
        .find(|(n, _)| *n == name)
        .ok_or("unknown function")?;
    if !g.is_invertible_at(&pt) {
        return Err(format!("{name} is not invertible at {pt}"));
    }
    Ok(())
}

/// How `a` is chosen for each prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum APolicy {
    /// Smallest positive nonsquare.
    Auto,
    /// A fixed integer, reduced mod each prime.
    Fixed(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchRow {
    pub p: u64,
    pub a: Option<u64>,
    pub verdict: Verdict,
}

pub fn search_primes(lo: u64, hi: u64, l1: [i64; 3], l2: [i64; 3], policy: APolicy) -> Result<Vec<SearchRow>> {
    let primes: Vec<u64> = primes_in(lo.max(3), hi);
    if primes.is_empty() {
        return Err(Error::EmptyPrimeRange(lo, hi));
    }
    Ok(primes
        .into_par_iter()
        .map(|p| {
            let params = match policy {
                APolicy::Auto => ConstructionParams::with_auto_a(p, l1, l2),
                APolicy::Fixed(a) => ConstructionParams::new(p, a, l1, l2),
            };
            match params {
                Ok(params) => SearchRow { p, a: Some(params.a()), verdict: certify(&params).verdict() },
                Err(e) => SearchRow { p, a: None, verdict: Verdict::Failed(format!("params: {e}")) },
            }
        })
        .collect())
}
