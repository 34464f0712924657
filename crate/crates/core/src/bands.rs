//! Flat manifolds with geodesic boundary, stored as twisted I-bundles over
//! their soul.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{
    determinant_sign, index_two_subgroup, is_bieberbach, is_orientable, AffineElement, SignAssignment,
    SignHomomorphism, SpaceGroup,
};
use crate::linalg::{IntMatrix, QuadraticForm, RatMatrix, RatVec};

#[derive(Clone, Debug)]
pub struct FlatBand {
    base: SpaceGroup,
    flip: SignAssignment,
    width: BigRational,
}

/// Boundary of a band: connected (index-2 subgroup) or two copies of the soul.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub group: SpaceGroup,
    /// Boundary lattice basis as integer columns in soul coordinates.
    pub basis: IntMatrix,
    pub connected: bool,
}

pub fn make_band(base: SpaceGroup, flip: SignAssignment, width: BigRational) -> Result<FlatBand> {
    if width <= BigRational::zero() {
        return Err(Error::InvalidParameter("band width must be positive".into()));
    }
    if !is_bieberbach(&base) {
        return Err(Error::NotBieberbach("band base has torsion".into()));
    }
    match SignHomomorphism::new(&base, &flip) {
        Ok(_) | Err(Error::TrivialSign) => {}
        Err(e) => return Err(e),
    }
    Ok(FlatBand { base, flip, width })
}

impl FlatBand {
    pub fn base(&self) -> &SpaceGroup {
        &self.base
    }

    pub fn flip(&self) -> &SignAssignment {
        &self.flip
    }

    pub fn width(&self) -> &BigRational {
        &self.width
    }

    pub fn is_twisted(&self) -> bool {
        self.flip.generators.iter().chain(&self.flip.lattice).any(|&s| s == -1)
    }
}

pub fn soul_of(band: &FlatBand) -> SpaceGroup {
    band.base.clone()
}

pub fn boundary_of(band: &FlatBand) -> Boundary {
    if band.is_twisted() {
        let (group, basis) = index_two_subgroup(&band.base, &band.flip).expect("flip validated at construction");
        Boundary { group, basis, connected: true }
    } else {
        Boundary { group: band.base.clone(), basis: IntMatrix::identity(band.base.dim()), connected: false }
    }
}

/// Equality of the sets of group elements (same form, same point group, same
/// vector system), independent of the chosen generators.
pub fn same_group(a: &SpaceGroup, b: &SpaceGroup) -> bool {
    a.dim() == b.dim()
        && a.form() == b.form()
        && a.point_group().order() == b.point_group().order()
        && (0..a.point_group().order()).all(|i| b.contains(&a.representative(i)))
}

pub fn double(band: &FlatBand) -> Result<SpaceGroup> {
    glue(band, band)
}

pub fn glue(b1: &FlatBand, b2: &FlatBand) -> Result<SpaceGroup> {
    glue_with_sign(b1, b2).map(|(g, _)| g)
}

/// Glues two bands along their common boundary. The new coordinate comes
/// first and has unit length; band 1 occupies `[-w₁, w₁]` and band 2 is
/// centred at `w₁ + w₂`. The returned sign is `−1` on the elements that
/// reverse the new coordinate.
pub fn glue_with_sign(b1: &FlatBand, b2: &FlatBand) -> Result<(SpaceGroup, SignAssignment)> {
    let d1 = boundary_of(b1);
    let d2 = boundary_of(b2);
    if d1.connected != d2.connected || !same_group(&d1.group, &d2.group) {
        return Err(Error::BoundaryMismatch);
    }
    let m = b1.base.dim();
    let offset = (&b1.width + &b2.width) * BigRational::from_integer(BigInt::from(2));
    let form = QuadraticForm::identity(1).direct_sum(d1.group.form());

    let mut generators = Vec::new();
    let mut signs = Vec::new();
    for (band, boundary, shift) in [(b1, &d1, BigRational::zero()), (b2, &d2, offset.clone())] {
        let u = boundary.basis.to_rational();
        let u_inv = u.inverse().ok_or_else(|| Error::Internal("boundary basis singular".into()))?;
        let hom = SignHomomorphism::new(&band.base, &band.flip).ok();
        let mut push = |e: &AffineElement, eps: i8| -> Result<()> {
            let local = e
                .in_basis(&u, &u_inv)
                .ok_or_else(|| Error::Internal("soul element does not preserve boundary lattice".into()))?;
            generators.push(lift(&local, eps, &shift));
            signs.push(eps);
            Ok(())
        };
        for g in band.base.generators() {
            let eps = hom.as_ref().map_or(1, |h| h.eval(&band.base, g).expect("generator in group"));
            push(g, eps)?;
        }
        for j in 0..m {
            let e = AffineElement::translation(unit(m, j));
            let eps = band.flip.lattice[j];
            push(&e, eps)?;
        }
    }
    let mut translations: Vec<RatVec> = (0..m)
        .map(|j| {
            let mut v = vec![BigRational::zero()];
            v.extend(unit(m, j));
            v
        })
        .collect();
    if !d1.connected {
        let mut v = vec![BigRational::zero(); m + 1];
        v[0] = offset;
        translations.push(v);
    }
    let (group, _) = SpaceGroup::from_affine_generators(&form, &generators, &translations)?;
    if !is_bieberbach(&group) {
        return Err(Error::Internal("glued group has torsion".into()));
    }
    let lattice = vec![1; m + 1];
    Ok((group, SignAssignment::new(signs, lattice)))
}

fn lift(e: &AffineElement, eps: i8, shift: &BigRational) -> AffineElement {
    let m = e.dim();
    let head = IntMatrix::diagonal(&[BigInt::from(eps)]);
    let linear = head.direct_sum(&e.linear);
    let mut t = vec![if eps == -1 { shift.clone() } else { BigRational::zero() }];
    t.extend(e.translation.iter().cloned());
    debug_assert_eq!(t.len(), m + 1);
    AffineElement::new(linear, t)
}

fn unit(n: usize, j: usize) -> RatVec {
    (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect()
}

/// `Γ × ℤ` with the circle factor of squared length `length²` placed first.
pub fn cylinder(sg: &SpaceGroup, length: &BigRational) -> Result<SpaceGroup> {
    let head = RatMatrix::diagonal(&[length * length]);
    let form = QuadraticForm::new(head)?.direct_sum(sg.form());
    let gens = sg.generators().iter().map(|g| lift(g, 1, &BigRational::zero())).collect();
    SpaceGroup::new(form, gens, sg.relators().map(<[_]>::to_vec))
}

pub fn orientation_cover(sg: &SpaceGroup) -> Result<SpaceGroup> {
    if is_orientable(sg) {
        return Err(Error::AlreadyOrientable);
    }
    index_two_subgroup(sg, &determinant_sign(sg)).map(|(g, _)| g)
}
