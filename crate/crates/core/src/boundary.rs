//! Deciding whether a Bieberbach manifold is the totally geodesic boundary of
//! a compact flat manifold, by searching for a fixed-point-free isometric
//! involution.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::groups::{
    extend_by_involution_with_sign, fingerprint, holonomy_invariants, is_bieberbach, linear_order, orbit_sum,
    AffineElement, Fingerprint, Holonomy, SignAssignment, SpaceGroup, ORDER_SEARCH_LIMIT,
};
use crate::linalg::{
    form_isometries, in_integer_image, lattice_basis, mul_int_rat, reduce_mod_one, solve_affine_congruence,
    to_rational_vec, vec_add, vec_scale, vec_sub, CongruenceSolution, IntMatrix, IntVec, RatMatrix, RatVec,
    DEFAULT_ISOMETRY_CAP,
};

#[derive(Clone, Debug)]
pub struct DecideOptions {
    pub isometry_cap: usize,
    /// Largest grid denominator tried when producing a witness; `None` scans
    /// until one is found, which is guaranteed once a component survives.
    pub max_denominator: Option<u64>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { isometry_cap: DEFAULT_ISOMETRY_CAP, max_denominator: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Boundary,
    NotBoundary,
}

#[derive(Clone, Debug)]
pub struct Witness {
    /// Index into the report's candidate list.
    pub candidate: usize,
    pub element: AffineElement,
    pub soul: SpaceGroup,
    pub soul_fingerprint: Fingerprint,
    /// Sign on the soul that is `−1` exactly on the coset of the involution.
    pub coset_sign: SignAssignment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentResult {
    /// Every translation in the component puts a fixed-point element into
    /// the coset; `element` indexes the point group and `coset_linear` is
    /// `A·M`.
    CoveredByTorsionLocus { element: usize, coset_linear: IntMatrix },
    /// Index into the report's witness list.
    Admissible { witness: usize },
}

#[derive(Clone, Debug)]
pub struct ComponentRecord {
    pub representative: RatVec,
    pub directions: Vec<IntVec>,
    pub result: ComponentResult,
}

#[derive(Clone, Debug)]
pub enum CandidateOutcome {
    NoCongruenceSolution,
    Components(Vec<ComponentRecord>),
}

#[derive(Clone, Debug)]
pub struct CandidateRecord {
    pub linear: IntMatrix,
    pub outcome: CandidateOutcome,
}

#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub decision: Decision,
    pub witnesses: Vec<Witness>,
    pub candidates: Vec<CandidateRecord>,
}

impl AdmissibilityReport {
    pub fn witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }

    pub fn soul(&self) -> Option<&Fingerprint> {
        self.witness().map(|w| &w.soul_fingerprint)
    }

    /// Whether some witness is the pure translation `t` (mod `ℤⁿ`).
    pub fn has_translation_witness(&self, t: &[BigRational]) -> bool {
        let t = reduce_mod_one(t);
        self.witnesses.iter().any(|w| w.element.is_translation() && reduce_mod_one(&w.element.translation) == t)
    }
}

/// Isometries of the form that normalize the point group and square into it.
/// The identity comes first.
pub fn linear_candidates(sg: &SpaceGroup) -> Result<Vec<IntMatrix>> {
    linear_candidates_with_cap(sg, DEFAULT_ISOMETRY_CAP)
}

pub fn linear_candidates_with_cap(sg: &SpaceGroup, cap: usize) -> Result<Vec<IntMatrix>> {
    let pg = sg.point_group();
    let mut out: Vec<IntMatrix> = form_isometries(sg.form(), cap)?
        .into_iter()
        .filter(|a| {
            let a_inv = a.inverse().expect("isometries are unimodular");
            pg.is_normalized_by(a, &a_inv) && pg.contains(&(a * a))
        })
        .collect();
    if let Some(i) = out.iter().position(IntMatrix::is_identity) {
        let id = out.remove(i);
        out.insert(0, id);
    }
    Ok(out)
}

/// Translation parts `t` making `(A, t)` normalize the group with square in
/// the group, solved modulo `ℤⁿ`.
pub fn translation_constraints(sg: &SpaceGroup, a: &IntMatrix) -> Option<CongruenceSolution> {
    let (matrix, rhs) = constraint_system(sg, a)?;
    solve_affine_congruence(&matrix, &rhs)
}

fn constraint_system(sg: &SpaceGroup, a: &IntMatrix) -> Option<(RatMatrix, RatVec)> {
    let n = sg.dim();
    let pg = sg.point_group();
    let a_inv = a.inverse()?;
    let id = IntMatrix::identity(n);
    let mut matrix = (&id + a).to_rational();
    let mut rhs = sg.vector_of(&(a * a))?.clone();
    for g in sg.generators() {
        let conj = &(a * &g.linear) * &a_inv;
        matrix = matrix.vstack(&(&id - &conj).to_rational());
        rhs.extend(vec_sub(sg.vector_of(&conj)?, &mul_int_rat(a, &g.translation)));
    }
    debug_assert!(pg.contains(&(a * a)));
    Some((matrix, rhs))
}

struct Locus {
    element: usize,
    coset_linear: IntMatrix,
    n: IntMatrix,
    offset: RatVec,
}

impl Locus {
    /// `N(t + A v_M) ∈ N ℤⁿ`
    fn contains(&self, t: &[BigRational]) -> bool {
        in_integer_image(&self.n, &mul_int_rat(&self.n, &vec_add(t, &self.offset)))
    }

    fn contains_directions(&self, directions: &[IntVec]) -> bool {
        directions.iter().all(|w| self.n.mul_vec(w).iter().all(Zero::is_zero))
    }
}

fn torsion_loci(sg: &SpaceGroup, a: &IntMatrix) -> Result<Vec<Locus>> {
    let pg = sg.point_group();
    (0..pg.order())
        .map(|j| {
            let b = a * pg.element(j);
            let order = linear_order(&b, ORDER_SEARCH_LIMIT).ok_or(Error::InfiniteOrder)?;
            Ok(Locus {
                element: j,
                n: orbit_sum(&b, order),
                offset: mul_int_rat(a, sg.vector(j)),
                coset_linear: b,
            })
        })
        .collect()
}

pub fn decide_admissible(sg: &SpaceGroup) -> Result<AdmissibilityReport> {
    decide_admissible_with(sg, &DecideOptions::default())
}

pub fn decide_admissible_with(sg: &SpaceGroup, options: &DecideOptions) -> Result<AdmissibilityReport> {
    if !is_bieberbach(sg) {
        return Err(Error::NotBieberbach("group has torsion".into()));
    }
    let candidates = linear_candidates_with_cap(sg, options.isometry_cap)?;
    let mut records = Vec::new();
    let mut witnesses = Vec::new();
    for (index, a) in candidates.iter().enumerate() {
        let Some(solution) = translation_constraints(sg, a) else {
            records.push(CandidateRecord { linear: a.clone(), outcome: CandidateOutcome::NoCongruenceSolution });
            continue;
        };
        let loci = torsion_loci(sg, a)?;
        let mut components = Vec::new();
        for c in solution.components() {
            let blocker = loci.iter().find(|l| l.contains_directions(&solution.directions) && l.contains(&c));
            let result = match blocker {
                Some(l) => ComponentResult::CoveredByTorsionLocus {
                    element: l.element,
                    coset_linear: l.coset_linear.clone(),
                },
                None => {
                    let t = scan_witness(&c, &solution.directions, &loci, options.max_denominator)?;
                    witnesses.push(verified_witness(sg, index, AffineElement::new(a.clone(), t))?);
                    ComponentResult::Admissible { witness: witnesses.len() - 1 }
                }
            };
            components.push(ComponentRecord {
                representative: c,
                directions: solution.directions.clone(),
                result,
            });
        }
        records.push(CandidateRecord { linear: a.clone(), outcome: CandidateOutcome::Components(components) });
    }
    let decision = if witnesses.is_empty() { Decision::NotBoundary } else { Decision::Boundary };
    Ok(AdmissibilityReport { decision, witnesses, candidates: records })
}

/// Grid scan `c + Σ (λᵢ/q) wᵢ` over `q = 2, 4, 6, …`, lexicographic in `λ`.
fn scan_witness(c: &RatVec, directions: &[IntVec], loci: &[Locus], max_den: Option<u64>) -> Result<RatVec> {
    let free = |t: &RatVec| !loci.iter().any(|l| l.contains(t));
    if directions.is_empty() {
        return if free(c) {
            Ok(reduce_mod_one(c))
        } else {
            Err(Error::Internal("isolated component is blocked pointwise".into()))
        };
    }
    let r = directions.len();
    let dirs: Vec<RatVec> = directions.iter().map(|w| to_rational_vec(w)).collect();
    let mut q: u64 = 2;
    loop {
        if max_den.is_some_and(|m| q > m) {
            return Err(Error::WitnessScanExhausted(q - 2));
        }
        let mut lambda = vec![0u64; r];
        loop {
            let mut t = c.clone();
            for (l, w) in lambda.iter().zip(&dirs) {
                if *l != 0 {
                    t = vec_add(&t, &vec_scale(w, &BigRational::new(BigInt::from(*l), BigInt::from(q))));
                }
            }
            if free(&t) {
                return Ok(reduce_mod_one(&t));
            }
            // lexicographic increment, last coordinate fastest
            let mut pos = r;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                lambda[pos] += 1;
                if lambda[pos] < q {
                    break;
                }
                lambda[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
        q += 2;
    }
}

fn verified_witness(sg: &SpaceGroup, candidate: usize, g: AffineElement) -> Result<Witness> {
    verify_involution(sg, &g).map_err(|f| Error::Internal(format!("witness {g} failed re-verification: {f:?}")))?;
    let (soul, coset_sign) = extend_by_involution_with_sign(sg, &g)?;
    let soul_fingerprint = fingerprint(&soul);
    Ok(Witness { candidate, element: g, soul, soul_fingerprint, coset_sign })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvolutionFailure {
    NotAnIsometry,
    Inside,
    SquareOutside,
    NotNormalizing,
    ExtensionHasTorsion,
}

/// Independent check that `g` induces a fixed-point-free isometric
/// involution of the quotient.
pub fn verify_involution(sg: &SpaceGroup, g: &AffineElement) -> std::result::Result<(), InvolutionFailure> {
    if !g.linear.is_unimodular() || !sg.form().is_preserved_by(&g.linear) {
        return Err(InvolutionFailure::NotAnIsometry);
    }
    if sg.contains(g) {
        return Err(InvolutionFailure::Inside);
    }
    if !sg.contains(&g.compose(g)) {
        return Err(InvolutionFailure::SquareOutside);
    }
    let g_inv = g.inverse().map_err(|_| InvolutionFailure::NotAnIsometry)?;
    let lattice_ok = (0..sg.dim()).all(|j| {
        let e = AffineElement::translation(to_rational_vec(&IntMatrix::identity(sg.dim()).col(j)));
        sg.contains(&g.compose(&e).compose(&g_inv))
    });
    if !lattice_ok || !sg.generators().iter().all(|h| sg.contains(&g.compose(h).compose(&g_inv))) {
        return Err(InvolutionFailure::NotNormalizing);
    }
    match extend_by_involution_with_sign(sg, g) {
        Ok((ext, _)) if is_bieberbach(&ext) => Ok(()),
        Ok(_) => Err(InvolutionFailure::ExtensionHasTorsion),
        Err(_) => Err(InvolutionFailure::NotNormalizing),
    }
}

/// `t_{a/2}` where `(I, a) = γᴺ` for a lift `γ` of a holonomy generator.
pub fn construct_odd_cyclic_involution(sg: &SpaceGroup) -> Result<AffineElement> {
    let order = match holonomy_invariants(sg) {
        Holonomy::Abelian(f) if f.len() == 1 && f[0] % 2 == 1 => f[0],
        _ => return Err(Error::HolonomyNotOddCyclic),
    };
    let pg = sg.point_group();
    let gen = (1..pg.order())
        .find(|&i| u64::from(pg.element_order(i)) == order)
        .ok_or_else(|| Error::Internal("cyclic group without a generator".into()))?;
    let m = pg.element(gen);
    let mut a = mul_int_rat(&orbit_sum(m, pg.element_order(gen)), sg.vector(gen));
    if a.iter().all(|x| (x / BigRational::from_integer(2.into())).is_integer()) {
        // the lift γ·t_w with w ∈ V ∩ ℤⁿ odd gives a + N·w, which is not in 2ℤⁿ
        let n = sg.dim();
        let w = (m - &IntMatrix::identity(n))
            .to_rational()
            .kernel()
            .into_iter()
            .find(|w| w.iter().any(|x| x.is_odd()))
            .ok_or_else(|| Error::Internal("fixed lattice of the holonomy generator is even".into()))?;
        let step = vec_scale(&to_rational_vec(&w), &BigRational::from_integer(BigInt::from(order)));
        a = vec_add(&a, &step);
    }
    let g = AffineElement::translation(vec_scale(&a, &BigRational::new(1.into(), 2.into())));
    verify_involution(sg, &g).map_err(|f| Error::Internal(format!("odd-cyclic construction failed: {f:?}")))?;
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Z2Route {
    /// Fixed space is a line; half of a lattice vector orthogonal to it.
    Line,
    /// Mirror planes with a single glide class; `t_d`.
    SingleClass,
    /// Mirror planes with two glide classes; `t_{2d}`.
    TwoClasses,
    /// None of the above verified; general decision procedure.
    General,
}

pub fn construct_z2_involution(sg: &SpaceGroup) -> Result<AffineElement> {
    construct_z2_involution_with_route(sg).map(|(g, _)| g)
}

pub fn construct_z2_involution_with_route(sg: &SpaceGroup) -> Result<(AffineElement, Z2Route)> {
    let pg = sg.point_group();
    if pg.order() != 2 {
        return Err(Error::HolonomyNotZ2);
    }
    let n = sg.dim();
    let m = pg.element(1);
    let id = IntMatrix::identity(n);
    let fixed_dim = n - (m - &id).to_rational().rank();
    let accept = |t: RatVec| {
        let g = AffineElement::translation(t);
        verify_involution(sg, &g).is_ok().then_some(g)
    };
    let half = BigRational::new(1.into(), 2.into());
    if fixed_dim == 1 {
        // Λ₀ = Λ ∩ ker(M + I)
        for lambda in (m + &id).to_rational().kernel() {
            if let Some(g) = accept(vec_scale(&to_rational_vec(&lambda), &half)) {
                return Ok((g, Z2Route::Line));
            }
        }
    } else {
        // neighbouring mirror planes are offset by the lattice (I − M)ℤⁿ / 4
        let quarter = BigRational::new(1.into(), 4.into());
        let offsets: Vec<RatVec> =
            (0..n).map(|j| vec_scale(&to_rational_vec(&(&id - m).col(j)), &quarter)).collect();
        let basis = lattice_basis(&offsets, n);
        for d in &basis {
            if let Some(g) = accept(d.clone()) {
                return Ok((g, Z2Route::SingleClass));
            }
        }
        for d in &basis {
            if let Some(g) = accept(vec_scale(d, &BigRational::from_integer(2.into()))) {
                return Ok((g, Z2Route::TwoClasses));
            }
        }
    }
    let report = decide_admissible(sg)?;
    report
        .witness()
        .map(|w| (w.element.clone(), Z2Route::General))
        .ok_or_else(|| Error::Internal("holonomy Z2 group with no admissible involution".into()))
}

/// One input of the pair enumeration.
#[derive(Clone, Debug)]
pub struct PairInput {
    pub label: String,
    pub style: String,
    pub group: SpaceGroup,
}

#[derive(Clone, Debug)]
pub struct PairRecord {
    pub boundary: Fingerprint,
    pub soul: Fingerprint,
    /// First input and Gram style that produced the pair.
    pub source: String,
    pub style: String,
    pub witness: AffineElement,
}

/// Distinct (boundary, soul) fingerprint pairs over all witnesses, in order
/// of first appearance.
pub fn boundary_soul_pairs(inputs: &[PairInput]) -> Result<Vec<PairRecord>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for input in inputs {
        let boundary = fingerprint(&input.group);
        let report = decide_admissible(&input.group)?;
        for w in &report.witnesses {
            if seen.insert((boundary.clone(), w.soul_fingerprint.clone())) {
                out.push(PairRecord {
                    boundary: boundary.clone(),
                    soul: w.soul_fingerprint.clone(),
                    source: input.label.clone(),
                    style: input.style.clone(),
                    witness: w.element.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Largest denominator among a witness's translation entries.
pub fn witness_denominator(g: &AffineElement) -> u64 {
    g.translation.iter().map(|x| x.denom().to_u64().unwrap_or(u64::MAX)).max().unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, QuadraticForm};

    fn klein() -> SpaceGroup {
        let form = QuadraticForm::diagonal(&[rat(1, 1), rat(4, 1)]).unwrap();
        let glide = AffineElement::new(IntMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]), vec![rat(1, 2), rat(0, 1)]);
        SpaceGroup::new(form, vec![glide], Some(vec![vec![1, 1]])).unwrap()
    }

    #[test]
    fn torus_translation_constraints() {
        let t = SpaceGroup::torus(QuadraticForm::diagonal(&[rat(1, 1), rat(4, 1)]).unwrap());
        let sol = translation_constraints(&t, &IntMatrix::identity(2)).unwrap();
        assert!(sol.directions.is_empty());
        assert_eq!(sol.components().len(), 4);
        let report = decide_admissible(&t).unwrap();
        assert_eq!(report.decision, Decision::Boundary);
        assert!(report.has_translation_witness(&[rat(1, 2), rat(0, 1)]));
    }

    #[test]
    fn klein_bottle_is_a_boundary() {
        let k = klein();
        let sol = translation_constraints(&k, &IntMatrix::identity(2)).unwrap();
        // (0, 1/2) satisfies both congruences
        assert!(crate::linalg::satisfies_congruence(
            &constraint_system(&k, &IntMatrix::identity(2)).unwrap().0,
            &constraint_system(&k, &IntMatrix::identity(2)).unwrap().1,
            &[rat(0, 1), rat(1, 2)]
        ));
        assert!(!sol.components().is_empty());
        let report = decide_admissible(&k).unwrap();
        assert_eq!(report.decision, Decision::Boundary);
        for w in &report.witnesses {
            assert_eq!(verify_involution(&k, &w.element), Ok(()));
        }
    }

    #[test]
    fn refutations_cover_every_candidate() {
        let k = klein();
        let report = decide_admissible(&k).unwrap();
        assert_eq!(report.candidates.len(), linear_candidates(&k).unwrap().len());
    }

    #[test]
    fn torsion_is_rejected() {
        let g = AffineElement::new(IntMatrix::from_i64_rows(&[&[-1, 0], &[0, -1]]), vec![rat(0, 1), rat(0, 1)]);
        let sg = SpaceGroup::new(QuadraticForm::identity(2), vec![g], None).unwrap();
        assert!(matches!(decide_admissible(&sg), Err(Error::NotBieberbach(_))));
    }

    #[test]
    fn z2_constructor_on_klein_bottle() {
        let (g, route) = construct_z2_involution_with_route(&klein()).unwrap();
        assert_eq!(route, Z2Route::Line);
        assert_eq!(g.translation, vec![rat(0, 1), rat(1, 2)]);
    }
}
