use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::affine::AffineElement;
use super::point_group::{FiniteGroup, DEFAULT_POINT_GROUP_CAP};
use crate::error::{Error, Result};
use crate::linalg::{
    is_integral, lattice_basis, mul_int_rat, reduce_mod_one, vec_add, vec_sub, IntMatrix, IntVec, QuadraticForm,
    RatMatrix, RatVec,
};

/// A relator word: signed 1-based generator indices (`-2` is the inverse of
/// the second generator).
pub type Word = Vec<i64>;

/// A crystallographic group in lattice coordinates. The translation lattice
/// is always `ℤⁿ`; the generators carry the non-translational part.
#[derive(Clone, Debug)]
pub struct SpaceGroup {
    form: QuadraticForm,
    generators: Vec<AffineElement>,
    relators: Option<Vec<Word>>,
    point_group: FiniteGroup,
    vectors: Vec<RatVec>,
}

impl PartialEq for SpaceGroup {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form && self.generators == other.generators && self.relators == other.relators
    }
}

impl SpaceGroup {
    pub fn new(form: QuadraticForm, generators: Vec<AffineElement>, relators: Option<Vec<Word>>) -> Result<Self> {
        Self::with_cap(form, generators, relators, DEFAULT_POINT_GROUP_CAP)
    }

    pub fn with_cap(
        form: QuadraticForm,
        generators: Vec<AffineElement>,
        relators: Option<Vec<Word>>,
        cap: usize,
    ) -> Result<Self> {
        let n = form.dim();
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch(format!("generator of dimension {} in a group of dimension {n}", g.dim())));
        }
        if let Some(rels) = &relators {
            let k = generators.len() as i64;
            if rels.iter().flatten().any(|&l| l == 0 || l.abs() > k) {
                return Err(Error::InvalidGroup("relator refers to a missing generator".into()));
            }
        }
        let linear: Vec<IntMatrix> = generators.iter().map(|g| g.linear.clone()).collect();
        let point_group = FiniteGroup::generate(n, &linear, cap)?;
        let vectors = derive_vector_system(&point_group, &generators, n);
        Ok(SpaceGroup { form, generators, relators, point_group, vectors })
    }

    /// The free abelian group `ℤⁿ` with the given metric.
    pub fn torus(form: QuadraticForm) -> Self {
        Self::new(form, Vec::new(), Some(Vec::new())).expect("torus")
    }

    /// Replaces the vector system without any consistency check. Used to feed
    /// deliberately broken data to [`validate`].
    pub fn with_vector_system(mut self, vectors: Vec<RatVec>) -> Self {
        assert_eq!(vectors.len(), self.point_group.order());
        self.vectors = vectors;
        self
    }

    pub fn with_relators(mut self, relators: Option<Vec<Word>>) -> Self {
        self.relators = relators;
        self
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn generators(&self) -> &[AffineElement] {
        &self.generators
    }

    pub fn relators(&self) -> Option<&[Word]> {
        self.relators.as_deref()
    }

    pub fn point_group(&self) -> &FiniteGroup {
        &self.point_group
    }

    /// `v(M)` for the point-group element with index `i`, in `[0,1)ⁿ`.
    pub fn vector(&self, i: usize) -> &RatVec {
        &self.vectors[i]
    }

    pub fn vector_of(&self, m: &IntMatrix) -> Option<&RatVec> {
        self.point_group.index_of(m).map(|i| &self.vectors[i])
    }

    pub fn vectors(&self) -> &[RatVec] {
        &self.vectors
    }

    /// Coset representative `(M, v(M))`.
    pub fn representative(&self, i: usize) -> AffineElement {
        AffineElement::new(self.point_group.element(i).clone(), self.vectors[i].clone())
    }

    pub fn contains(&self, e: &AffineElement) -> bool {
        e.dim() == self.dim()
            && self
                .vector_of(&e.linear)
                .is_some_and(|v| is_integral(&vec_sub(&e.translation, v)))
    }

    /// `c(M, N) = M v(N) + v(M) − v(MN)`, integral for a consistent vector
    /// system.
    pub fn cocycle(&self, a: usize, b: usize) -> RatVec {
        let ab = self.point_group.mul(a, b);
        let m = self.point_group.element(a);
        vec_sub(&vec_add(&mul_int_rat(m, &self.vectors[b]), &self.vectors[a]), &self.vectors[ab])
    }

    pub fn evaluate_word(&self, word: &[i64]) -> Result<AffineElement> {
        let mut acc = AffineElement::identity(self.dim());
        for &l in word {
            let g = &self.generators[(l.unsigned_abs() - 1) as usize];
            acc = if l > 0 { acc.compose(g) } else { acc.compose(&g.inverse()?) };
        }
        Ok(acc)
    }

    /// The same group on the lattice basis given by the columns of the
    /// unimodular matrix `u`.
    pub fn rebase(&self, u: &IntMatrix) -> Result<SpaceGroup> {
        if !u.is_square() || u.rows() != self.dim() || !u.is_unimodular() {
            return Err(Error::NotInvertible);
        }
        let b = u.to_rational();
        let b_inv = b.inverse().ok_or(Error::NotInvertible)?;
        let gens = self
            .generators
            .iter()
            .map(|g| g.in_basis(&b, &b_inv).ok_or_else(|| Error::Internal("rebased linear part not integral".into())))
            .collect::<Result<Vec<_>>>()?;
        SpaceGroup::new(self.form.in_basis(&b)?, gens, self.relators.clone())
    }

    /// `h Γ h⁻¹` for an affine map whose linear part preserves `ℤⁿ`. The
    /// form is transported so that `h` becomes an isometry.
    pub fn conjugate(&self, h: &AffineElement) -> Result<SpaceGroup> {
        let h_inv = h.inverse()?;
        let gens = self.generators.iter().map(|g| h.compose(g).compose(&h_inv)).collect();
        let form = self.form.in_basis(&h_inv.linear.to_rational())?;
        SpaceGroup::new(form, gens, self.relators.clone())
    }

    /// Normalizes an arbitrary finitely generated crystallographic group:
    /// computes its translation subgroup (lattice generated by the given
    /// translations, their point-group images and the Schreier translations),
    /// and rewrites everything on an HNF basis of it.
    ///
    /// Returns the group together with the new basis, as columns in the input
    /// coordinates.
    pub fn from_affine_generators(
        form: &QuadraticForm,
        generators: &[AffineElement],
        translations: &[RatVec],
    ) -> Result<(SpaceGroup, RatMatrix)> {
        let n = form.dim();
        let linear: Vec<IntMatrix> = generators.iter().map(|g| g.linear.clone()).collect();
        let pg = FiniteGroup::generate(n, &linear, DEFAULT_POINT_GROUP_CAP)?;
        let reps = transversal(&pg, generators, n);

        let mut seeds: Vec<RatVec> = translations.to_vec();
        for (e, w) in reps.iter().enumerate() {
            for (i, g) in generators.iter().enumerate() {
                let target = pg.mul(pg.index_of(&linear[i]).expect("generator in group"), e);
                seeds.push(vec_sub(&g.apply(w), &reps[target]));
            }
        }
        let mut lattice_gens = Vec::new();
        for s in &seeds {
            if s.iter().all(Zero::is_zero) {
                continue;
            }
            for m in pg.elements() {
                lattice_gens.push(mul_int_rat(m, s));
            }
        }
        let basis = lattice_basis(&lattice_gens, n);
        if basis.len() < n {
            return Err(Error::NotCocompact);
        }
        let b = RatMatrix::from_cols(n, &basis);
        let b_inv = b.inverse().ok_or(Error::NotCocompact)?;
        let gens = generators
            .iter()
            .map(|g| g.in_basis(&b, &b_inv).ok_or_else(|| Error::Internal("point group does not preserve lattice".into())))
            .collect::<Result<Vec<_>>>()?;
        let sg = SpaceGroup::new(form.in_basis(&b)?, gens, None)?;
        Ok((sg, b))
    }
}

impl fmt::Display for SpaceGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension {}", self.dim())?;
        writeln!(f, "gram {}", self.form.gram())?;
        for g in &self.generators {
            writeln!(f, "  {g}")?;
        }
        Ok(())
    }
}

/// Unreduced translation parts of BFS coset representatives.
fn transversal(pg: &FiniteGroup, generators: &[AffineElement], n: usize) -> Vec<RatVec> {
    let mut reps: Vec<RatVec> = vec![vec![BigRational::zero(); n]; pg.order()];
    for e in 1..pg.order() {
        let (parent, gi) = pg.parent(e).expect("non-identity element has a parent");
        reps[e] = generators[gi].apply(&reps[parent]);
    }
    reps
}

fn derive_vector_system(pg: &FiniteGroup, generators: &[AffineElement], n: usize) -> Vec<RatVec> {
    transversal(pg, generators, n).iter().map(|v| reduce_mod_one(v)).collect()
}

/// One failed validity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// (a) closure exceeded the cap.
    PointGroupInfinite { cap: usize },
    /// (b) `v(MN) ≢ M v(N) + v(M)`.
    CocycleViolation { left: usize, right: usize },
    /// (b) a generator's translation is not in its own coset.
    GeneratorOutsideCoset { generator: usize },
    /// (c)
    FormNotPreserved { generator: usize },
    /// (d)
    RelatorNotTranslation { relator: usize },
    /// Input could not be interpreted at all.
    Malformed(String),
}

impl Diagnostic {
    pub fn check(&self) -> char {
        match self {
            Diagnostic::PointGroupInfinite { .. } | Diagnostic::Malformed(_) => 'a',
            Diagnostic::CocycleViolation { .. } | Diagnostic::GeneratorOutsideCoset { .. } => 'b',
            Diagnostic::FormNotPreserved { .. } => 'c',
            Diagnostic::RelatorNotTranslation { .. } => 'd',
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::PointGroupInfinite { cap } => write!(f, "point group exceeds {cap} elements"),
            Diagnostic::CocycleViolation { left, right } => {
                write!(f, "cocycle identity fails for point elements {left} and {right}")
            }
            Diagnostic::GeneratorOutsideCoset { generator } => {
                write!(f, "generator {} disagrees with the vector system", generator + 1)
            }
            Diagnostic::FormNotPreserved { generator } => {
                write!(f, "generator {} does not preserve the form", generator + 1)
            }
            Diagnostic::RelatorNotTranslation { relator } => {
                write!(f, "relator {} does not evaluate to a lattice translation", relator + 1)
            }
            Diagnostic::Malformed(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub issues: Vec<Diagnostic>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn failed(&self, check: char) -> bool {
        self.issues.iter().any(|d| d.check() == check)
    }
}

pub fn validate(sg: &SpaceGroup) -> Validation {
    let mut issues = Vec::new();
    let pg = sg.point_group();
    for a in 0..pg.order() {
        for b in 0..pg.order() {
            if !is_integral(&sg.cocycle(a, b)) {
                issues.push(Diagnostic::CocycleViolation { left: a, right: b });
            }
        }
    }
    for (i, g) in sg.generators().iter().enumerate() {
        if !sg.contains(g) {
            issues.push(Diagnostic::GeneratorOutsideCoset { generator: i });
        }
    }
    for (i, g) in sg.generators().iter().enumerate() {
        if !sg.form().is_preserved_by(&g.linear) {
            issues.push(Diagnostic::FormNotPreserved { generator: i });
        }
    }
    for (i, w) in sg.relators().unwrap_or(&[]).iter().enumerate() {
        let ok = sg.evaluate_word(w).is_ok_and(|e| e.is_translation() && is_integral(&e.translation));
        if !ok {
            issues.push(Diagnostic::RelatorNotTranslation { relator: i });
        }
    }
    Validation { issues }
}

/// Builds and validates in one step, turning closure failure into check (a).
pub fn validate_definition(
    form: QuadraticForm,
    generators: Vec<AffineElement>,
    relators: Option<Vec<Word>>,
    cap: usize,
) -> (Option<SpaceGroup>, Validation) {
    match SpaceGroup::with_cap(form, generators, relators, cap) {
        Ok(sg) => {
            let v = validate(&sg);
            (Some(sg), v)
        }
        Err(Error::CapExceeded { cap }) => {
            (None, Validation { issues: vec![Diagnostic::PointGroupInfinite { cap }] })
        }
        Err(e) => (None, Validation { issues: vec![Diagnostic::Malformed(e.to_string())] }),
    }
}

/// Integer vector of an integral rational vector.
pub(crate) fn integral_part(v: &[BigRational]) -> IntVec {
    v.iter().map(|x| x.to_integer()).collect()
}

pub(crate) fn unit_vector(n: usize, j: usize) -> RatVec {
    (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect()
}

pub(crate) fn int_unit_vector(n: usize, j: usize) -> IntVec {
    (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn klein() -> SpaceGroup {
        let form = QuadraticForm::diagonal(&[rat(1, 1), rat(4, 1)]).unwrap();
        let glide = AffineElement::new(IntMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]), vec![rat(1, 2), rat(0, 1)]);
        SpaceGroup::new(form, vec![glide], Some(vec![vec![1, 1]])).unwrap()
    }

    #[test]
    fn klein_bottle_vector_system() {
        let k = klein();
        assert_eq!(k.point_group().order(), 2);
        assert_eq!(k.vector(1), &vec![rat(1, 2), rat(0, 1)]);
        assert!(validate(&k).is_valid());
        assert!(k.contains(&AffineElement::new(
            IntMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]),
            vec![rat(-1, 2), rat(3, 1)]
        )));
    }

    #[test]
    fn broken_vector_system_is_reported() {
        let k = klein().with_vector_system(vec![vec![rat(0, 1), rat(0, 1)], vec![rat(1, 3), rat(0, 1)]]);
        let v = validate(&k);
        assert!(v.failed('b'));
        assert!(!v.failed('c'));
    }

    #[test]
    fn non_isometry_is_reported() {
        let form = QuadraticForm::diagonal(&[rat(1, 1), rat(2, 1)]).unwrap();
        let swap = AffineElement::new(IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]), vec![rat(1, 2), rat(1, 2)]);
        let sg = SpaceGroup::new(form, vec![swap], None).unwrap();
        assert!(validate(&sg).failed('c'));
    }

    #[test]
    fn normalization_of_half_translation() {
        let form = QuadraticForm::identity(2);
        let t = AffineElement::translation(vec![rat(1, 2), rat(0, 1)]);
        let (sg, b) = SpaceGroup::from_affine_generators(&form, &[t], &[unit_vector(2, 0), unit_vector(2, 1)]).unwrap();
        assert_eq!(b, RatMatrix::from_rows(vec![vec![rat(1, 2), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]]));
        assert_eq!(sg.form().gram(), &RatMatrix::diagonal(&[rat(1, 4), rat(1, 1)]));
        assert_eq!(sg.point_group().order(), 1);
    }

    #[test]
    fn infinite_generators_give_diagnostic_a() {
        let shear = AffineElement::new(IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]), vec![rat(0, 1), rat(0, 1)]);
        let (sg, v) = validate_definition(QuadraticForm::identity(2), vec![shear], None, 64);
        assert!(sg.is_none());
        assert!(v.failed('a'));
    }
}
