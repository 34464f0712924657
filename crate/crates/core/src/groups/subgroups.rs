use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::affine::AffineElement;
use super::point_group::{FiniteGroup, DEFAULT_POINT_GROUP_CAP};
use super::space_group::{int_unit_vector, integral_part, unit_vector, validate, SpaceGroup};
use crate::error::{Error, Result};
use crate::linalg::{is_integral, vec_add, vec_sub, IntMatrix, IntVec, RatVec};

/// Values `±1` on the point generators and on the lattice basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignAssignment {
    pub generators: Vec<i8>,
    pub lattice: Vec<i8>,
}

impl SignAssignment {
    pub fn new(generators: Vec<i8>, lattice: Vec<i8>) -> Self {
        SignAssignment { generators, lattice }
    }

    pub fn trivial(sg: &SpaceGroup) -> Self {
        SignAssignment { generators: vec![1; sg.generators().len()], lattice: vec![1; sg.dim()] }
    }

    pub fn is_trivial_on_lattice(&self) -> bool {
        self.lattice.iter().all(|&s| s == 1)
    }

    fn lattice_sign(&self, z: &[BigInt]) -> i8 {
        let odd = z
            .iter()
            .zip(&self.lattice)
            .filter(|(zj, &s)| s == -1 && zj.is_odd())
            .count();
        if odd % 2 == 0 { 1 } else { -1 }
    }
}

/// A sign assignment checked to extend to a homomorphism `Γ → {±1}`, with
/// its value on every coset representative `(M, v(M))`.
#[derive(Clone, Debug)]
pub struct SignHomomorphism {
    assignment: SignAssignment,
    on_representatives: Vec<i8>,
}

impl SignHomomorphism {
    pub fn new(sg: &SpaceGroup, sign: &SignAssignment) -> Result<Self> {
        let n = sg.dim();
        let pg = sg.point_group();
        if sign.generators.len() != sg.generators().len() || sign.lattice.len() != n {
            return Err(Error::DimensionMismatch("sign assignment has the wrong length".into()));
        }
        if sign.generators.iter().chain(&sign.lattice).any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("signs must be +1 or -1".into()));
        }
        // χ must be invariant under the point group
        for m in pg.generators() {
            for j in 0..n {
                if sign.lattice_sign(&m.col(j)) != sign.lattice[j] {
                    return Err(Error::NotAHomomorphism);
                }
            }
        }
        let mut values: Vec<Option<i8>> = vec![None; pg.order()];
        values[0] = Some(1);
        for (i, g) in sg.generators().iter().enumerate() {
            let idx = pg.index_of(&g.linear).expect("generator in point group");
            let z = vec_sub(&g.translation, sg.vector(idx));
            if !is_integral(&z) {
                return Err(Error::NotAHomomorphism);
            }
            let s = sign.generators[i] * sign.lattice_sign(&integral_part(&z));
            match values[idx] {
                Some(prev) if prev != s => return Err(Error::NotAHomomorphism),
                _ => values[idx] = Some(s),
            }
        }
        for e in 1..pg.order() {
            if values[e].is_some() {
                continue;
            }
            let (parent, gi) = pg.parent(e).expect("parent");
            let g = pg.index_of(&pg.generators()[gi]).expect("generator");
            let c = integral_part(&sg.cocycle(g, parent));
            values[e] = Some(values[g].expect("generator value") * values[parent].expect("bfs order") * sign.lattice_sign(&c));
        }
        let values: Vec<i8> = values.into_iter().map(|v| v.expect("all elements reached")).collect();
        for a in 0..pg.order() {
            for b in 0..pg.order() {
                let c = integral_part(&sg.cocycle(a, b));
                if values[a] * values[b] != values[pg.mul(a, b)] * sign.lattice_sign(&c) {
                    return Err(Error::NotAHomomorphism);
                }
            }
        }
        if values.iter().all(|&s| s == 1) && sign.is_trivial_on_lattice() {
            return Err(Error::TrivialSign);
        }
        Ok(SignHomomorphism { assignment: sign.clone(), on_representatives: values })
    }

    pub fn assignment(&self) -> &SignAssignment {
        &self.assignment
    }

    /// Value on an element of the group.
    pub fn eval(&self, sg: &SpaceGroup, e: &AffineElement) -> Option<i8> {
        let i = sg.point_group().index_of(&e.linear)?;
        let z = vec_sub(&e.translation, sg.vector(i));
        is_integral(&z).then(|| self.on_representatives[i] * self.assignment.lattice_sign(&integral_part(&z)))
    }

    pub fn on_representative(&self, i: usize) -> i8 {
        self.on_representatives[i]
    }
}

/// The kernel of a sign homomorphism, rebased on its own translation
/// lattice. The matrix holds the new basis as integer columns.
pub fn index_two_subgroup(sg: &SpaceGroup, sign: &SignAssignment) -> Result<(SpaceGroup, IntMatrix)> {
    let hom = SignHomomorphism::new(sg, sign)?;
    let n = sg.dim();
    let pg = sg.point_group();

    // sublattice where χ = +1
    let flip_axis = sign.lattice.iter().position(|&s| s == -1);
    let mut translations: Vec<RatVec> = Vec::new();
    for j in 0..n {
        let v = match flip_axis {
            Some(j0) if j == j0 => int_unit_vector(n, j).iter().map(|x| x * 2).collect::<IntVec>(),
            Some(j0) if sign.lattice[j] == -1 => vec_add(&int_unit_vector(n, j), &int_unit_vector(n, j0)),
            _ => int_unit_vector(n, j),
        };
        translations.push(v.into_iter().map(BigRational::from_integer).collect());
    }

    // one kernel element per needed point element, chosen greedily
    let mut generators: Vec<AffineElement> = Vec::new();
    let mut linear: Vec<IntMatrix> = Vec::new();
    let mut reached = FiniteGroup::trivial(n);
    for i in 1..pg.order() {
        let m = pg.element(i);
        if reached.contains(m) {
            continue;
        }
        let t = if hom.on_representative(i) == 1 {
            sg.vector(i).clone()
        } else if let Some(j0) = flip_axis {
            vec_add(sg.vector(i), &unit_vector(n, j0))
        } else {
            continue;
        };
        generators.push(AffineElement::new(m.clone(), t));
        linear.push(m.clone());
        reached = FiniteGroup::generate(n, &linear, DEFAULT_POINT_GROUP_CAP)?;
    }
    let (sub, basis) = SpaceGroup::from_affine_generators(sg.form(), &generators, &translations)?;
    let basis = basis.to_integer().ok_or_else(|| Error::Internal("kernel lattice not integral".into()))?;
    Ok((sub, basis))
}

/// The group `⟨Γ, g⟩` in standard form, together with the sign assignment on
/// the result that is `−1` exactly on the coset `gΓ`.
pub fn extend_by_involution_with_sign(sg: &SpaceGroup, g: &AffineElement) -> Result<(SpaceGroup, SignAssignment)> {
    let n = sg.dim();
    if g.dim() != n {
        return Err(Error::DimensionMismatch("element and group dimensions differ".into()));
    }
    if !g.linear.is_unimodular() {
        return Err(Error::NotInvertible);
    }
    if !sg.form().is_preserved_by(&g.linear) {
        return Err(Error::NotAnIsometry);
    }
    let g_inv = g.inverse()?;
    if !sg.point_group().is_normalized_by(&g.linear, &g_inv.linear) {
        return Err(Error::NotNormalizing);
    }
    for h in sg.generators() {
        if !sg.contains(&g.compose(h).compose(&g_inv)) {
            return Err(Error::NotNormalizing);
        }
    }
    if sg.contains(g) {
        return Err(Error::AlreadyInside);
    }
    if !sg.contains(&g.compose(g)) {
        return Err(Error::SquareOutside);
    }
    let mut generators: Vec<AffineElement> = sg.generators().to_vec();
    generators.push(g.clone());
    let lattice: Vec<RatVec> = (0..n).map(|j| unit_vector(n, j)).collect();
    let (ext, basis) = SpaceGroup::from_affine_generators(sg.form(), &generators, &lattice)?;
    let report = validate(&ext);
    if !report.is_valid() {
        return Err(Error::Internal(format!("extension failed validation: {}", report.issues[0])));
    }
    let mut signs = vec![1i8; sg.generators().len()];
    signs.push(-1);
    let lattice_signs = (0..n)
        .map(|j| if is_integral(&basis.col(j)) { 1 } else { -1 })
        .collect();
    Ok((ext, SignAssignment::new(signs, lattice_signs)))
}

pub fn extend_by_involution(sg: &SpaceGroup, g: &AffineElement) -> Result<SpaceGroup> {
    extend_by_involution_with_sign(sg, g).map(|(ext, _)| ext)
}

/// The sign `det` on generators and `+1` on the lattice.
pub fn determinant_sign(sg: &SpaceGroup) -> SignAssignment {
    let generators = sg
        .generators()
        .iter()
        .map(|g| if g.linear.determinant() > BigInt::zero() { 1 } else { -1 })
        .collect();
    SignAssignment::new(generators, vec![1; sg.dim()])
}
