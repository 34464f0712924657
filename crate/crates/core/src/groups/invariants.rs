use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::affine::orbit_sum;
use super::space_group::{integral_part, SpaceGroup};
use crate::error::{Error, Result};
use crate::linalg::{
    denominator_lcm, is_integral, mul_int_rat, smith_normal_form, solve_integer_system, vec_neg, vec_scale, IntMatrix,
    IntVec, RatMatrix,
};

/// A point-group element `M` and a lattice vector `z` such that
/// `(M, v(M) + z)` has a fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionWitness {
    pub element: usize,
    pub z: IntVec,
}

pub fn torsion_witness(sg: &SpaceGroup) -> Option<TorsionWitness> {
    let pg = sg.point_group();
    for i in 1..pg.order() {
        let m = pg.element(i);
        let n = orbit_sum(m, pg.element_order(i));
        let rhs = vec_neg(&mul_int_rat(&n, sg.vector(i)));
        if !is_integral(&rhs) {
            continue;
        }
        if let Some(sol) = solve_integer_system(&n, &integral_part(&rhs)) {
            return Some(TorsionWitness { element: i, z: sol.particular });
        }
    }
    None
}

pub fn is_bieberbach(sg: &SpaceGroup) -> bool {
    torsion_witness(sg).is_none()
}

pub fn is_orientable(sg: &SpaceGroup) -> bool {
    sg.point_group().elements().iter().all(|m| m.determinant().is_one())
}

/// Dimension of the common fixed space of the point group.
pub fn betti_one(sg: &SpaceGroup) -> usize {
    let n = sg.dim();
    let mut stacked = RatMatrix::zeros(0, n);
    for m in sg.point_group().generators() {
        let d = &m.to_rational() - &RatMatrix::identity(n);
        stacked = stacked.vstack(&d);
    }
    n - stacked.rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Holonomy {
    /// Invariant factors `d₁ | d₂ | …`, each > 1; empty for the trivial group.
    Abelian(Vec<u64>),
    NonAbelian { order: u64 },
}

impl Holonomy {
    pub fn order(&self) -> u64 {
        match self {
            Holonomy::Abelian(f) => f.iter().product(),
            Holonomy::NonAbelian { order } => *order,
        }
    }
}

impl fmt::Display for Holonomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Holonomy::Abelian(v) if v.is_empty() => write!(f, "trivial"),
            Holonomy::Abelian(v) => {
                let parts: Vec<String> = v.iter().map(|d| format!("Z{d}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            Holonomy::NonAbelian { order } => write!(f, "non-abelian of order {order}"),
        }
    }
}

pub fn holonomy_invariants(sg: &SpaceGroup) -> Holonomy {
    let pg = sg.point_group();
    if !pg.is_abelian() {
        return Holonomy::NonAbelian { order: pg.order() as u64 };
    }
    // Relation lattice of ℤᵏ → P, (x₁..x_k) ↦ Π gᵢ^{xᵢ}.
    let gens: Vec<usize> = pg.generators().iter().map(|g| pg.index_of(g).expect("generator")).collect();
    let orders: Vec<u32> = gens.iter().map(|&g| pg.element_order(g)).collect();
    let k = gens.len();
    let mut rows: Vec<IntVec> = Vec::new();
    for (i, &o) in orders.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k];
        r[i] = BigInt::from(o);
        rows.push(r);
    }
    let mut x = vec![0u32; k];
    loop {
        let mut pos = 0;
        while pos < k && x[pos] + 1 == orders[pos] {
            x[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
        x[pos] += 1;
        let mut e = 0;
        for (i, &xi) in x.iter().enumerate() {
            for _ in 0..xi {
                e = pg.mul(e, gens[i]);
            }
        }
        if e == 0 {
            rows.push(x.iter().map(|&v| BigInt::from(v)).collect());
        }
    }
    if k == 0 {
        return Holonomy::Abelian(Vec::new());
    }
    Holonomy::Abelian(torsion_factors(&IntMatrix::from_rows(rows)).1)
}

/// `(rank, invariant factors > 1)` of `ℤ^cols / rowspace(a)`.
fn torsion_factors(a: &IntMatrix) -> (usize, Vec<u64>) {
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    let rank = a.cols() - snf.rank();
    let torsion = factors
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .map(|d| d.abs().to_u64().expect("invariant factor fits in u64"))
        .collect();
    (rank, torsion)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Homology {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Abelianization from the presentation relators. Columns are the lattice
/// basis `e₁..eₙ` followed by the generators `g₁..g_k`.
pub fn first_homology(sg: &SpaceGroup) -> Result<Homology> {
    let relators = sg.relators().ok_or(Error::MissingPresentation)?;
    let n = sg.dim();
    let k = sg.generators().len();
    let mut rows: Vec<IntVec> = Vec::new();
    for g in sg.generators() {
        push_lattice_relations(&mut rows, &g.linear, n + k);
    }
    for (idx, w) in relators.iter().enumerate() {
        let e = sg.evaluate_word(w)?;
        if !e.is_translation() || !is_integral(&e.translation) {
            return Err(Error::NonIntegralRelator { index: idx });
        }
        let mut row = vec![BigInt::zero(); n + k];
        for (j, t) in integral_part(&e.translation).into_iter().enumerate() {
            row[j] = -t;
        }
        for &l in w {
            let i = n + (l.unsigned_abs() - 1) as usize;
            row[i] += if l > 0 { 1 } else { -1 };
        }
        rows.push(row);
    }
    Ok(homology_of_relations(rows, n + k))
}

/// Abelianization from the extension presentation: generators `e₁..eₙ` and
/// one `h_M` per point element, relations `h_M + h_N − h_{MN} = c(M, N)` and
/// `M e = e`. Needs no relators.
pub fn homology_from_table(sg: &SpaceGroup) -> Homology {
    let n = sg.dim();
    let pg = sg.point_group();
    let p = pg.order();
    let cols = n + p;
    let mut rows: Vec<IntVec> = Vec::new();
    for m in pg.generators() {
        push_lattice_relations(&mut rows, m, cols);
    }
    for a in 0..p {
        for b in 0..p {
            let ab = pg.mul(a, b);
            let c = integral_part(&sg.cocycle(a, b));
            let mut row = vec![BigInt::zero(); cols];
            for (j, cj) in c.into_iter().enumerate() {
                row[j] = -cj;
            }
            row[n + a] += 1;
            row[n + b] += 1;
            row[n + ab] -= 1;
            rows.push(row);
        }
    }
    homology_of_relations(rows, cols)
}

fn push_lattice_relations(rows: &mut Vec<IntVec>, m: &IntMatrix, cols: usize) {
    let n = m.rows();
    for j in 0..n {
        let mut row = vec![BigInt::zero(); cols];
        for i in 0..n {
            row[i] = m[(i, j)].clone() - if i == j { BigInt::one() } else { BigInt::zero() };
        }
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }
}

fn homology_of_relations(rows: Vec<IntVec>, cols: usize) -> Homology {
    if rows.is_empty() {
        return Homology { rank: cols, torsion: Vec::new() };
    }
    let (rank, torsion) = torsion_factors(&IntMatrix::from_rows(rows));
    Homology { rank, torsion }
}

/// Per point element: determinant, fixed-space dimension and the order of
/// `v(M)` in `ℚⁿ / (ℤⁿ + Im(M − I))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ElementClass {
    pub det: i8,
    pub fixed_dim: usize,
    pub vector_order: u64,
}

pub fn element_classes(sg: &SpaceGroup) -> Vec<ElementClass> {
    let n = sg.dim();
    let pg = sg.point_group();
    let mut out: Vec<ElementClass> = (0..pg.order())
        .map(|i| {
            let m = pg.element(i);
            let d = &m.to_rational() - &RatMatrix::identity(n);
            let fixed_dim = n - d.rank();
            // rows spanning the annihilator of Im(M − I)
            let ann = d.transpose().kernel();
            let proj = IntMatrix::from_rows(ann.clone());
            let v = sg.vector(i);
            let vector_order = if ann.is_empty() {
                1
            } else {
                let pv = mul_int_rat(&proj, v);
                let den = denominator_lcm(v).to_u64().expect("small denominator");
                (1..=den)
                    .find(|&k| {
                        let scaled = vec_scale(&pv, &BigRational::from_integer(BigInt::from(k)));
                        is_integral(&scaled) && solve_integer_system(&proj, &integral_part(&scaled)).is_some()
                    })
                    .unwrap_or(den)
            };
            ElementClass { det: if m.determinant().is_one() { 1 } else { -1 }, fixed_dim, vector_order }
        })
        .collect();
    out.sort();
    out
}

/// Affine invariants used to identify groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub orientable: bool,
    pub betti1: usize,
    pub holonomy: Holonomy,
    pub h1_rank: usize,
    pub h1_torsion: Vec<u64>,
    pub classes: Vec<ElementClass>,
}

impl Fingerprint {
    pub fn homology(&self) -> Homology {
        Homology { rank: self.h1_rank, torsion: self.h1_torsion.clone() }
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim {} {} b1={} holonomy {} H1 {}",
            self.dim,
            if self.orientable { "orientable" } else { "non-orientable" },
            self.betti1,
            self.holonomy,
            self.homology()
        )
    }
}

pub fn fingerprint(sg: &SpaceGroup) -> Fingerprint {
    let h = homology_from_table(sg);
    Fingerprint {
        dim: sg.dim(),
        orientable: is_orientable(sg),
        betti1: betti_one(sg),
        holonomy: holonomy_invariants(sg),
        h1_rank: h.rank,
        h1_torsion: h.torsion,
        classes: element_classes(sg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{AffineElement, SpaceGroup};
    use crate::linalg::{rat, QuadraticForm};

    fn klein() -> SpaceGroup {
        let form = QuadraticForm::diagonal(&[rat(1, 1), rat(4, 1)]).unwrap();
        let glide = AffineElement::new(IntMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]), vec![rat(1, 2), rat(0, 1)]);
        SpaceGroup::new(form, vec![glide], Some(vec![vec![1, 1]])).unwrap()
    }

    #[test]
    fn torus_homology() {
        let t = SpaceGroup::torus(QuadraticForm::identity(2));
        assert_eq!(first_homology(&t).unwrap(), Homology { rank: 2, torsion: vec![] });
        assert_eq!(homology_from_table(&t), Homology { rank: 2, torsion: vec![] });
        assert_eq!(betti_one(&t), 2);
        assert!(torsion_witness(&t).is_none());
    }

    #[test]
    fn klein_homology_both_routes() {
        let k = klein();
        let expected = Homology { rank: 1, torsion: vec![2] };
        assert_eq!(first_homology(&k).unwrap(), expected);
        assert_eq!(homology_from_table(&k), expected);
        assert!(!is_orientable(&k));
        assert_eq!(holonomy_invariants(&k), Holonomy::Abelian(vec![2]));
    }

    #[test]
    fn minus_identity_has_torsion() {
        let g = AffineElement::new(IntMatrix::from_i64_rows(&[&[-1, 0], &[0, -1]]), vec![rat(0, 1), rat(0, 1)]);
        let sg = SpaceGroup::new(QuadraticForm::identity(2), vec![g], None).unwrap();
        let w = torsion_witness(&sg).unwrap();
        assert_eq!(w.element, 1);
        assert!(w.z.iter().all(Zero::is_zero));
    }

    #[test]
    fn missing_presentation() {
        let k = klein().with_relators(None);
        assert_eq!(first_homology(&k), Err(Error::MissingPresentation));
    }

    #[test]
    fn non_integral_relator() {
        let k = klein().with_relators(Some(vec![vec![1]]));
        assert_eq!(first_homology(&k), Err(Error::NonIntegralRelator { index: 0 }));
    }
}
