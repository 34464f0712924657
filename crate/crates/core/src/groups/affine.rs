use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    format_rat_vec, mul_int_rat, reduce_mod_one, vec_add, vec_neg, IntMatrix, RatMatrix, RatVec,
};

/// Upper bound used when searching for the order of an integer matrix.
pub const ORDER_SEARCH_LIMIT: u32 = 1024;

/// An affine map `x ↦ M x + t` in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub linear: IntMatrix,
    pub translation: RatVec,
}

impl AffineElement {
    pub fn new(linear: IntMatrix, translation: RatVec) -> Self {
        assert!(linear.is_square() && linear.rows() == translation.len(), "affine element dimension mismatch");
        AffineElement { linear, translation }
    }

    pub fn identity(dim: usize) -> Self {
        AffineElement::new(IntMatrix::identity(dim), vec![BigRational::zero(); dim])
    }

    pub fn translation(t: RatVec) -> Self {
        AffineElement::new(IntMatrix::identity(t.len()), t)
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    /// `(M, a)(N, b) = (MN, M b + a)`
    pub fn compose(&self, other: &AffineElement) -> AffineElement {
        AffineElement {
            linear: &self.linear * &other.linear,
            translation: vec_add(&mul_int_rat(&self.linear, &other.translation), &self.translation),
        }
    }

    pub fn inverse(&self) -> Result<AffineElement> {
        let inv = self.linear.inverse().ok_or(Error::NotInvertible)?;
        let t = vec_neg(&mul_int_rat(&inv, &self.translation));
        Ok(AffineElement { linear: inv, translation: t })
    }

    pub fn apply(&self, x: &[BigRational]) -> RatVec {
        vec_add(&mul_int_rat(&self.linear, x), &self.translation)
    }

    pub fn pow(&self, k: u32) -> AffineElement {
        (0..k).fold(AffineElement::identity(self.dim()), |acc, _| acc.compose(self))
    }

    /// `self · other · self⁻¹`
    pub fn conjugate(&self, other: &AffineElement) -> Result<AffineElement> {
        Ok(self.compose(other).compose(&self.inverse()?))
    }

    /// Same element with translation reduced into `[0, 1)ⁿ`.
    pub fn reduced(&self) -> AffineElement {
        AffineElement { linear: self.linear.clone(), translation: reduce_mod_one(&self.translation) }
    }

    /// Conjugates into the coordinates of a new basis (columns of `basis`).
    /// Fails if the transformed linear part is not integral.
    pub fn in_basis(&self, basis: &RatMatrix, basis_inv: &RatMatrix) -> Option<AffineElement> {
        let lin = &(basis_inv * &self.linear.to_rational()) * basis;
        Some(AffineElement { linear: lin.to_integer()?, translation: basis_inv.mul_vec(&self.translation) })
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.linear, format_rat_vec(&self.translation))
    }
}

/// Order of an integer matrix, if finite (searched up to `limit`).
pub fn linear_order(m: &IntMatrix, limit: u32) -> Option<u32> {
    let mut p = m.clone();
    for k in 1..=limit {
        if p.is_identity() {
            return Some(k);
        }
        p = &p * m;
    }
    None
}

/// `I + M + … + M^{order-1}`
pub fn orbit_sum(m: &IntMatrix, order: u32) -> IntMatrix {
    let n = m.rows();
    let mut acc = IntMatrix::zeros(n, n);
    let mut p = IntMatrix::identity(n);
    for _ in 0..order {
        acc = &acc + &p;
        p = &p * m;
    }
    acc
}

/// A point fixed by `e`, if any: a solution of `(M − I) x = −t`.
pub fn fixed_point_of(e: &AffineElement) -> Result<Option<RatVec>> {
    linear_order(&e.linear, ORDER_SEARCH_LIMIT).ok_or(Error::InfiniteOrder)?;
    let n = e.dim();
    let system = &e.linear.to_rational() - &RatMatrix::identity(n);
    Ok(system.solve(&vec_neg(&e.translation)))
}

/// The averaging criterion for a finite-order element: `(M, t)` has a fixed
/// point iff `N t = 0` where `N = Σ Mᵏ`.
pub fn has_fixed_point_by_averaging(e: &AffineElement) -> Result<bool> {
    let order = linear_order(&e.linear, ORDER_SEARCH_LIMIT).ok_or(Error::InfiniteOrder)?;
    let n = orbit_sum(&e.linear, order);
    Ok(mul_int_rat(&n, &e.translation).iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn el(rows: &[&[i64]], t: &[(i64, i64)]) -> AffineElement {
        AffineElement::new(IntMatrix::from_i64_rows(rows), t.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn pure_translation_has_no_fixed_point() {
        let e = el(&[&[1, 0], &[0, 1]], &[(1, 2), (0, 1)]);
        assert_eq!(fixed_point_of(&e).unwrap(), None);
        assert!(!has_fixed_point_by_averaging(&e).unwrap());
    }

    #[test]
    fn klein_glide_has_no_fixed_point() {
        let e = el(&[&[1, 0], &[0, -1]], &[(1, 2), (0, 1)]);
        assert_eq!(fixed_point_of(&e).unwrap(), None);
        assert!(!has_fixed_point_by_averaging(&e).unwrap());
    }

    #[test]
    fn reflection_with_offset_fixes_a_line() {
        let e = el(&[&[1, 0], &[0, -1]], &[(0, 1), (1, 3)]);
        let x = fixed_point_of(&e).unwrap().unwrap();
        assert_eq!(e.apply(&x), x);
        assert_eq!(x[1], rat(1, 6));
        assert!(has_fixed_point_by_averaging(&e).unwrap());
    }

    #[test]
    fn infinite_order_is_rejected() {
        let e = el(&[&[1, 1], &[0, 1]], &[(0, 1), (0, 1)]);
        assert_eq!(fixed_point_of(&e), Err(Error::InfiniteOrder));
    }

    #[test]
    fn composition_rule() {
        let a = el(&[&[0, -1], &[1, 0]], &[(1, 2), (0, 1)]);
        let b = el(&[&[1, 0], &[0, -1]], &[(0, 1), (1, 4)]);
        let x = vec![rat(3, 7), rat(-2, 5)];
        assert_eq!(a.compose(&b).apply(&x), a.apply(&b.apply(&x)));
        assert_eq!(a.compose(&a.inverse().unwrap()), AffineElement::identity(2));
    }
}
