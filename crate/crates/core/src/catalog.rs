//! Generator data for the named flat manifolds and bands.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bands::{make_band, FlatBand};
use crate::error::{Error, Result};
use crate::groups::{fingerprint, AffineElement, Fingerprint, SignAssignment, SpaceGroup, Word};
use crate::linalg::{rat, IntMatrix, QuadraticForm, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeStyle {
    Generic,
    Square,
    Hexagonal,
    Oblique,
}

impl LatticeStyle {
    pub fn name(self) -> &'static str {
        match self {
            LatticeStyle::Generic => "generic",
            LatticeStyle::Square => "square",
            LatticeStyle::Hexagonal => "hexagonal",
            LatticeStyle::Oblique => "oblique",
        }
    }
}

impl fmt::Display for LatticeStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(LatticeStyle::Generic),
            "square" => Ok(LatticeStyle::Square),
            "hexagonal" | "hex" => Ok(LatticeStyle::Hexagonal),
            "oblique" => Ok(LatticeStyle::Oblique),
            _ => Err(Error::InvalidParameter(format!("unknown lattice style `{s}`"))),
        }
    }
}

/// Metric constants; `style = None` selects the entry's default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
    pub style: Option<LatticeStyle>,
}

impl Default for Params {
    fn default() -> Self {
        Params { a: rat(1, 1), b: rat(2, 1), c: rat(3, 1), d: rat(5, 1), style: None }
    }
}

impl Params {
    pub fn with_style(style: LatticeStyle) -> Self {
        Params { style: Some(style), ..Params::default() }
    }

    /// Parses one `key=value` pair (`a`, `b`, `c`, `d` or `style`).
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{assignment}`")))?;
        if k == "style" {
            self.style = Some(v.parse()?);
            return Ok(());
        }
        let x: BigRational =
            v.parse().map_err(|_| Error::InvalidParameter(format!("`{v}` is not a rational number")))?;
        if x <= BigRational::zero() {
            return Err(Error::InvalidParameter(format!("{k} must be positive")));
        }
        match k {
            "a" => self.a = x,
            "b" => self.b = x,
            "c" => self.c = x,
            "d" => self.d = x,
            _ => return Err(Error::InvalidParameter(format!("unknown parameter `{k}`"))),
        }
        Ok(())
    }

    pub fn to_map(&self, style: LatticeStyle) -> BTreeMap<String, String> {
        let f = crate::linalg::format_rational;
        BTreeMap::from([
            ("a".into(), f(&self.a)),
            ("b".into(), f(&self.b)),
            ("c".into(), f(&self.c)),
            ("d".into(), f(&self.d)),
            ("style".into(), style.name().into()),
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    Group,
    Band,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dim: usize,
    pub kind: EntryKind,
    /// Allowed styles; the first is the default.
    pub styles: &'static [LatticeStyle],
    /// Invariant factors of the holonomy group (groups only; bands report the
    /// soul).
    pub holonomy: &'static [u64],
    pub orientable: bool,
    pub description: &'static str,
}

#[derive(Clone, Debug)]
pub enum Built {
    Group(SpaceGroup),
    Band(FlatBand),
}

use LatticeStyle::{Generic as G, Hexagonal as H, Oblique as O, Square as S};

const PLANE: &[LatticeStyle] = &[G, S, H, O];

macro_rules! entry {
    ($name:expr, $dim:expr, $kind:ident, $styles:expr, $hol:expr, $or:expr, $desc:expr) => {
        CatalogEntry {
            name: $name,
            dim: $dim,
            kind: EntryKind::$kind,
            styles: $styles,
            holonomy: $hol,
            orientable: $or,
            description: $desc,
        }
    };
}

static ENTRIES: &[CatalogEntry] = &[
    entry!("T2", 2, Group, PLANE, &[], true, "flat torus"),
    entry!("K2", 2, Group, &[G], &[2], false, "Klein bottle K_{a,b}"),
    entry!("T3", 3, Group, PLANE, &[], true, "3-torus"),
    entry!("C2", 3, Group, PLANE, &[2], true, "half-turn screw"),
    entry!("C3", 3, Group, &[H], &[3], true, "third-turn screw"),
    entry!("C4", 3, Group, &[S], &[4], true, "quarter-turn screw"),
    entry!("C6", 3, Group, &[H], &[6], true, "sixth-turn screw"),
    entry!("C22", 3, Group, &[G, S], &[2, 2], true, "Hantzsche-Wendt 3-manifold"),
    entry!("B1", 3, Group, &[G, S], &[2], false, "glide reflection, split lattice"),
    entry!("B2", 3, Group, &[G, S], &[2], false, "glide reflection, non-split lattice"),
    entry!("B3", 3, Group, &[G, S], &[2, 2], false, "glide and half-turn on a common plane"),
    entry!("B4", 3, Group, &[G, S], &[2, 2], false, "glide and offset half-turn"),
    entry!("HW1", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 1"),
    entry!("HW2", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 2"),
    entry!("HW3", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 3"),
    entry!("HW4", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 4 (table data as printed; has torsion)"),
    entry!("HW5", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 5"),
    entry!("HW6", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 6"),
    entry!("HW7", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 7"),
    entry!("HW8", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 8"),
    entry!("HW9", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 9"),
    entry!("HW10", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 10"),
    entry!("HW11", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 11"),
    entry!("HW12", 4, Group, &[G], &[2, 2, 2], false, "generalized Hantzsche-Wendt 12"),
    entry!("C3xS1", 4, Group, &[H], &[3], true, "C3 times a circle"),
    entry!("C5", 5, Group, &[G], &[5], true, "fifth-turn screw on the A4 root lattice"),
    entry!("MOB", 2, Band, &[G], &[], false, "Moebius band over a circle"),
    entry!("TT", 3, Band, &[G], &[], false, "solid Moebius band TT_{a,b,d}"),
    entry!("TTp", 3, Band, &[G], &[], false, "solid Moebius band TT_{b,a,d}"),
    entry!("TK", 3, Band, &[G], &[2], true, "band TK_{a,b,d} over a Klein bottle"),
    entry!("TKp", 3, Band, &[G], &[2], true, "band TK_{b,a,d} over a Klein bottle"),
    entry!("KK", 3, Band, &[G], &[2], false, "band KK_{a,b,d} over a Klein bottle"),
];

/// The H-W generators as (translated axes, negated axes) over `xyzt`.
const HW_TABLE: [[(&str, &str); 3]; 12] = [
    [("yt", "z"), ("z", "xt"), ("x", "yt")],
    [("t", "z"), ("yz", "xt"), ("x", "yt")],
    [("t", "z"), ("yz", "xz"), ("x", "yz")],
    [("yz", "z"), ("yz", "xz"), ("x", "yz")],
    [("y", "z"), ("t", "xz"), ("x", "yz")],
    [("yz", "z"), ("t", "xz"), ("x", "yz")],
    [("y", "z"), ("yt", "xz"), ("x", "yz")],
    [("xz", "z"), ("yt", "xz"), ("x", "yz")],
    [("yz", "z"), ("yt", "xz"), ("x", "yz")],
    [("xyz", "z"), ("yt", "xz"), ("x", "yz")],
    [("y", "z"), ("yzt", "xz"), ("x", "yz")],
    [("yz", "z"), ("yzt", "xz"), ("x", "yz")],
];

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn entry(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name.eq_ignore_ascii_case(name)).ok_or_else(|| Error::UnknownEntry(name.into()))
}

pub fn build(name: &str, params: &Params) -> Result<Built> {
    let e = entry(name)?;
    let style = resolve_style(e, params)?;
    match e.kind {
        EntryKind::Group => build_group_inner(e.name, params, style).map(Built::Group),
        EntryKind::Band => build_band_inner(e.name, params).map(Built::Band),
    }
}

pub fn build_group(name: &str, params: &Params) -> Result<SpaceGroup> {
    match build(name, params)? {
        Built::Group(g) => Ok(g),
        Built::Band(_) => Err(Error::InvalidParameter(format!("`{name}` is a band, not a group"))),
    }
}

pub fn build_band(name: &str, params: &Params) -> Result<FlatBand> {
    match build(name, params)? {
        Built::Band(b) => Ok(b),
        Built::Group(_) => Err(Error::InvalidParameter(format!("`{name}` is a group, not a band"))),
    }
}

/// The group at default parameters and default style.
pub fn default_group(name: &str) -> Result<SpaceGroup> {
    build_group(name, &Params::default())
}

pub fn resolve_style(e: &CatalogEntry, params: &Params) -> Result<LatticeStyle> {
    match params.style {
        None => Ok(e.styles[0]),
        Some(s) if e.styles.contains(&s) => Ok(s),
        Some(s) => Err(Error::IncompatibleStyle { entry: e.name.into(), style: s.name().into() }),
    }
}

/// Names of catalog groups with the same fingerprint, optionally restricted
/// to one dimension.
pub fn identify(sg: &SpaceGroup, dim: Option<usize>) -> Vec<&'static str> {
    identify_fingerprint(&fingerprint(sg), dim)
}

pub fn identify_fingerprint(fp: &Fingerprint, dim: Option<usize>) -> Vec<&'static str> {
    reference_fingerprints()
        .iter()
        .filter(|(_, f)| dim.is_none_or(|d| f.dim == d) && f == fp)
        .map(|(name, _)| *name)
        .collect()
}

fn reference_fingerprints() -> &'static [(&'static str, Fingerprint)] {
    use std::sync::OnceLock;
    static CACHE: OnceLock<Vec<(&'static str, Fingerprint)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        ENTRIES
            .iter()
            .filter(|e| e.kind == EntryKind::Group)
            .map(|e| (e.name, fingerprint(&default_group(e.name).expect("catalog entry builds"))))
            .collect()
    })
}

fn q(x: i64) -> BigRational {
    rat(x, 1)
}

fn half() -> BigRational {
    rat(1, 2)
}

fn el(rows: &[&[i64]], t: Vec<BigRational>) -> AffineElement {
    AffineElement::new(IntMatrix::from_i64_rows(rows), t)
}

fn diag_el(signs: &[i64], t: Vec<BigRational>) -> AffineElement {
    AffineElement::new(IntMatrix::diagonal(&signs.iter().map(|&s| BigInt::from(s)).collect::<Vec<_>>()), t)
}

fn sq(x: &BigRational) -> BigRational {
    x * x
}

fn hexagonal(a: &BigRational) -> RatMatrix {
    let a2 = sq(a);
    let off = -&a2 / q(2);
    RatMatrix::from_rows(vec![vec![a2.clone(), off.clone()], vec![off, a2]])
}

/// Two-dimensional Gram block for `(a₁, a₂)`.
fn plane_block(style: LatticeStyle, p: &Params) -> RatMatrix {
    match style {
        LatticeStyle::Generic => RatMatrix::diagonal(&[sq(&p.a), sq(&p.b)]),
        LatticeStyle::Square => RatMatrix::diagonal(&[sq(&p.a), sq(&p.a)]),
        LatticeStyle::Hexagonal => hexagonal(&p.a),
        LatticeStyle::Oblique => {
            let off = sq(&p.a) / q(3);
            RatMatrix::from_rows(vec![vec![sq(&p.a), off.clone()], vec![off, sq(&p.b)]])
        }
    }
}

fn diag_form(xs: &[&BigRational]) -> Result<QuadraticForm> {
    QuadraticForm::diagonal(&xs.iter().map(|x| sq(x)).collect::<Vec<_>>())
}

fn cyclic_relators(m: usize) -> Vec<Word> {
    vec![vec![1; m]]
}

/// Squares and pairwise commutators.
fn elementary_abelian_relators(k: usize) -> Vec<Word> {
    let mut rels: Vec<Word> = (1..=k as i64).map(|i| vec![i, i]).collect();
    for i in 1..=k as i64 {
        for j in i + 1..=k as i64 {
            rels.push(vec![i, j, -i, -j]);
        }
    }
    rels
}

fn build_group_inner(name: &str, p: &Params, style: LatticeStyle) -> Result<SpaceGroup> {
    let z = BigRational::zero;
    match name {
        "T2" => SpaceGroup::new(QuadraticForm::new(plane_block(style, p))?, vec![], Some(vec![])),
        "T3" => SpaceGroup::new(
            QuadraticForm::new(plane_block(style, p).direct_sum(&RatMatrix::diagonal(&[sq(&p.c)])))?,
            vec![],
            Some(vec![]),
        ),
        "K2" => SpaceGroup::new(
            diag_form(&[&p.a, &p.b])?,
            vec![diag_el(&[1, -1], vec![half(), z()])],
            Some(cyclic_relators(2)),
        ),
        "C2" => SpaceGroup::new(
            QuadraticForm::new(plane_block(style, p).direct_sum(&RatMatrix::diagonal(&[sq(&p.c)])))?,
            vec![diag_el(&[-1, -1, 1], vec![z(), z(), half()])],
            Some(cyclic_relators(2)),
        ),
        "C3" | "C6" | "C3xS1" => {
            let (rot, m): (&[&[i64]], usize) = if name == "C6" {
                (&[&[1, -1], &[1, 0]], 6)
            } else {
                (&[&[0, -1], &[1, -1]], 3)
            };
            let mut gram = hexagonal(&p.a).direct_sum(&RatMatrix::diagonal(&[sq(&p.c)]));
            let mut linear = IntMatrix::from_i64_rows(rot).direct_sum(&IntMatrix::identity(1));
            let mut t = vec![z(), z(), rat(1, m as i64)];
            if name == "C3xS1" {
                gram = gram.direct_sum(&RatMatrix::diagonal(&[sq(&p.d)]));
                linear = linear.direct_sum(&IntMatrix::identity(1));
                t.push(z());
            }
            SpaceGroup::new(QuadraticForm::new(gram)?, vec![AffineElement::new(linear, t)], Some(cyclic_relators(m)))
        }
        "C4" => SpaceGroup::new(
            QuadraticForm::new(plane_block(LatticeStyle::Square, p).direct_sum(&RatMatrix::diagonal(&[sq(&p.c)])))?,
            vec![el(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]], vec![z(), z(), rat(1, 4)])],
            Some(cyclic_relators(4)),
        ),
        "C5" => {
            // companion matrix of x⁴+x³+x²+x+1, plus a screw axis
            let r = IntMatrix::from_i64_rows(&[&[0, 0, 0, -1], &[1, 0, 0, -1], &[0, 1, 0, -1], &[0, 0, 1, -1]]);
            let mut gram = RatMatrix::zeros(4, 4);
            let mut pw = IntMatrix::identity(4);
            for _ in 0..5 {
                let pr = pw.to_rational();
                gram = &gram + &(&pr.transpose() * &pr);
                pw = &pw * &r;
            }
            let gram = gram.map(|x| x * sq(&p.a)).direct_sum(&RatMatrix::diagonal(&[sq(&p.c)]));
            let linear = r.direct_sum(&IntMatrix::identity(1));
            let t = vec![z(), z(), z(), z(), rat(1, 5)];
            SpaceGroup::new(QuadraticForm::new(gram)?, vec![AffineElement::new(linear, t)], Some(cyclic_relators(5)))
        }
        "C22" => {
            let form = if style == LatticeStyle::Square { diag_form(&[&p.a, &p.a, &p.a])? } else { diag_form(&[&p.a, &p.b, &p.c])? };
            let alpha = diag_el(&[1, -1, -1], vec![half(), half(), z()]);
            let beta = diag_el(&[-1, 1, -1], vec![z(), half(), half()]);
            let gamma = diag_el(&[-1, -1, 1], vec![half(), z(), half()]);
            let mut rels = elementary_abelian_relators(3);
            rels.push(vec![1, 2, -3]);
            SpaceGroup::new(form, vec![alpha, beta, gamma], Some(rels))
        }
        "B1" => SpaceGroup::new(
            three_axes(style, p)?,
            vec![diag_el(&[-1, 1, 1], vec![z(), z(), half()])],
            Some(cyclic_relators(2)),
        ),
        "B2" => {
            let (a2, b2) = match style {
                LatticeStyle::Square => (sq(&p.a), sq(&p.a)),
                _ => (sq(&p.a), sq(&p.b)),
            };
            let c33 = &a2 / q(4) + &b2 / q(4) + q(4) * sq(&p.d);
            let gram = RatMatrix::from_rows(vec![
                vec![a2.clone(), z(), &a2 / q(2)],
                vec![z(), b2.clone(), &b2 / q(2)],
                vec![&a2 / q(2), &b2 / q(2), c33],
            ]);
            SpaceGroup::new(
                QuadraticForm::new(gram)?,
                vec![el(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, -1]], vec![half(), z(), z()])],
                Some(cyclic_relators(2)),
            )
        }
        "B3" | "B4" => {
            let alpha = diag_el(&[1, 1, -1], vec![half(), z(), z()]);
            let shift = if name == "B4" { half() } else { z() };
            let beta = diag_el(&[-1, 1, -1], vec![z(), half(), shift]);
            SpaceGroup::new(three_axes(style, p)?, vec![alpha, beta], Some(elementary_abelian_relators(2)))
        }
        _ if name.starts_with("HW") => {
            let idx: usize = name[2..].parse().map_err(|_| Error::UnknownEntry(name.into()))?;
            let row = HW_TABLE.get(idx.wrapping_sub(1)).ok_or_else(|| Error::UnknownEntry(name.into()))?;
            let gens = row.iter().map(|(t, s)| hw_element(t, s)).collect();
            SpaceGroup::new(diag_form(&[&p.a, &p.b, &p.c, &p.d])?, gens, Some(elementary_abelian_relators(3)))
        }
        _ => Err(Error::UnknownEntry(name.into())),
    }
}

fn three_axes(style: LatticeStyle, p: &Params) -> Result<QuadraticForm> {
    match style {
        LatticeStyle::Square => diag_form(&[&p.a, &p.a, &p.c]),
        _ => diag_form(&[&p.a, &p.b, &p.c]),
    }
}

/// `T_X S_Y` with axes named by `x, y, z, t`.
fn hw_element(translated: &str, negated: &str) -> AffineElement {
    let axis = |c: char| "xyzt".find(c).expect("axis letter");
    let mut signs = [1i64; 4];
    for c in negated.chars() {
        signs[axis(c)] = -1;
    }
    let mut t = vec![BigRational::zero(); 4];
    for c in translated.chars() {
        t[axis(c)] = half();
    }
    diag_el(&signs, t)
}

fn build_band_inner(name: &str, p: &Params) -> Result<FlatBand> {
    let width = p.d.clone();
    let klein = |glide: AffineElement| {
        SpaceGroup::new(diag_form(&[&p.a, &p.b]).expect("positive"), vec![glide], Some(cyclic_relators(2)))
    };
    match name {
        "MOB" => {
            let circle = SpaceGroup::new(diag_form(&[&p.a])?, vec![], Some(vec![]))?;
            make_band(circle, SignAssignment::new(vec![], vec![-1]), width)
        }
        "TT" => {
            let base = SpaceGroup::new(QuadraticForm::diagonal(&[sq(&p.a), sq(&p.b) / q(4)])?, vec![], Some(vec![]))?;
            make_band(base, SignAssignment::new(vec![], vec![1, -1]), width)
        }
        "TTp" => {
            let base = SpaceGroup::new(QuadraticForm::diagonal(&[sq(&p.a) / q(4), sq(&p.b)])?, vec![], Some(vec![]))?;
            make_band(base, SignAssignment::new(vec![], vec![-1, 1]), width)
        }
        "TK" => make_band(
            klein(diag_el(&[1, -1], vec![half(), BigRational::zero()]))?,
            SignAssignment::new(vec![-1], vec![1, 1]),
            width,
        ),
        "TKp" => make_band(
            klein(diag_el(&[-1, 1], vec![BigRational::zero(), half()]))?,
            SignAssignment::new(vec![-1], vec![1, 1]),
            width,
        ),
        "KK" => make_band(
            klein(diag_el(&[1, -1], vec![half(), BigRational::zero()]))?,
            SignAssignment::new(vec![1], vec![1, -1]),
            width,
        ),
        _ => Err(Error::UnknownEntry(name.into())),
    }
}
