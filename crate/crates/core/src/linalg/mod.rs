//! Exact integer and rational linear algebra.

mod form;
mod matrix;
mod normal_form;
mod solve;

pub use form::{form_isometries, QuadraticForm, DEFAULT_ISOMETRY_CAP};
pub use matrix::*;
pub use normal_form::{hermite_normal_form, lattice_basis, smith_normal_form, HermiteForm, SmithForm};
pub use solve::{
    in_integer_image, satisfies_congruence, solve_affine_congruence, solve_integer_system, CongruenceSolution,
    IntegerSolution, QuotientKey,
};

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;
