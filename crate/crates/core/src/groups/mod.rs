//! Space groups in lattice coordinates and their invariants.

mod affine;
mod invariants;
mod point_group;
mod space_group;
mod subgroups;

pub use affine::{fixed_point_of, has_fixed_point_by_averaging, linear_order, orbit_sum, AffineElement, ORDER_SEARCH_LIMIT};
pub use invariants::{
    betti_one, element_classes, fingerprint, first_homology, holonomy_invariants, homology_from_table, is_bieberbach,
    is_orientable, torsion_witness, ElementClass, Fingerprint, Holonomy, Homology, TorsionWitness,
};
pub use point_group::{close_point_group, FiniteGroup, DEFAULT_POINT_GROUP_CAP};
pub use space_group::{validate, validate_definition, Diagnostic, SpaceGroup, Validation, Word};
pub use subgroups::{
    determinant_sign, extend_by_involution, extend_by_involution_with_sign, index_two_subgroup, SignAssignment,
    SignHomomorphism,
};
