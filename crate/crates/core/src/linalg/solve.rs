//! Integer linear systems and rational congruences.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::matrix::{
    is_integral, mul_int_rat, reduce_mod_one, vec_add, IntMatrix, IntVec, RatMatrix, RatVec,
};
use super::normal_form::smith_normal_form;

/// Integer solutions of `A z = b`: `particular + ℤ-span(kernel)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerSolution {
    pub particular: IntVec,
    pub kernel: Vec<IntVec>,
}

/// Solves `A z = b` over the integers. Absent when no integer solution exists.
pub fn solve_integer_system(a: &IntMatrix, b: &[BigInt]) -> Option<IntegerSolution> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let f = smith_normal_form(a);
    let c = f.u.mul_vec(b);
    let r = f.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        if i < r {
            let (q, rem) = c[i].div_rem(&f.s[(i, i)]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    let particular = f.v.mul_vec(&y);
    let kernel = (r..a.cols())
        .map(|j| {
            let mut col = f.v.col(j);
            if col.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                col.iter_mut().for_each(|x| *x = -x.clone());
            }
            col
        })
        .collect();
    Some(IntegerSolution { particular, kernel })
}

/// Rational solutions of `A t ≡ b (mod ℤᵏ)`.
///
/// The solution set in `ℚⁿ` is `particular + span_ℚ(directions) + ℤ-span(lattice)`.
/// When `A` is integral the set is `ℤⁿ`-periodic and `particular` is reduced
/// into `[0, 1)ⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceSolution {
    pub particular: RatVec,
    pub directions: Vec<IntVec>,
    pub lattice: Vec<RatVec>,
}

pub fn solve_affine_congruence(a: &RatMatrix, b: &[BigRational]) -> Option<CongruenceSolution> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let n = a.cols();
    let denom = a.denominator_lcm();
    let denom_r = BigRational::from_integer(denom.clone());
    let a_int = a.map(|x| (x * &denom_r).to_integer());
    let f = smith_normal_form(&a_int);
    let r = f.rank();
    let scaled_b: RatVec = b.iter().map(|x| x * &denom_r).collect();
    let c = mul_int_rat(&f.u, &scaled_b);

    let mut y = vec![BigRational::zero(); n];
    for i in 0..a.rows() {
        if i < r {
            y[i] = &c[i] / BigRational::from_integer(f.s[(i, i)].clone());
        } else if !(&c[i] / &denom_r).is_integer() {
            return None;
        }
    }
    let mut particular = mul_int_rat(&f.v, &y);
    let integral = a.to_integer().is_some();
    if integral {
        particular = reduce_mod_one(&particular);
    }
    let lattice = (0..r)
        .map(|i| {
            let step = BigRational::new(denom.clone(), f.s[(i, i)].clone());
            f.v.col(i).into_iter().map(|x| BigRational::from_integer(x) * &step).collect()
        })
        .collect();
    Some(CongruenceSolution { particular, directions: a.kernel(), lattice })
}

impl CongruenceSolution {
    pub fn dim(&self) -> usize {
        self.particular.len()
    }

    /// Representatives of the finitely many classes of the solution set modulo
    /// `ℤⁿ + span(directions)`, each reduced into `[0, 1)ⁿ` and sorted.
    ///
    /// Only meaningful for integral congruences (where the solution set is
    /// `ℤⁿ`-periodic).
    pub fn components(&self) -> Vec<RatVec> {
        let key = QuotientKey::new(&self.directions, self.dim());
        let start = reduce_mod_one(&self.particular);
        let mut seen = HashSet::new();
        seen.insert(key.of(&start));
        let mut reps = vec![start];
        let mut i = 0;
        while i < reps.len() {
            for gen in &self.lattice {
                let next = reduce_mod_one(&vec_add(&reps[i], gen));
                if seen.insert(key.of(&next)) {
                    reps.push(next);
                }
            }
            i += 1;
        }
        reps.sort();
        reps
    }
}

/// Canonical coordinates on `ℚⁿ / (ℤⁿ + span(W))` for a rational subspace
/// spanned by integer vectors `W`.
#[derive(Clone, Debug)]
pub struct QuotientKey {
    transform: IntMatrix,
    skip: usize,
}

impl QuotientKey {
    pub fn new(directions: &[IntVec], dim: usize) -> Self {
        if directions.is_empty() {
            return QuotientKey { transform: IntMatrix::identity(dim), skip: 0 };
        }
        let w = IntMatrix::from_cols(dim, directions);
        let f = smith_normal_form(&w);
        let skip = f.rank();
        QuotientKey { transform: f.u, skip }
    }

    pub fn of(&self, x: &[BigRational]) -> RatVec {
        let y = mul_int_rat(&self.transform, x);
        reduce_mod_one(&y[self.skip..])
    }
}

/// True if `x ∈ ℤ-span(cols of m)` for an integer matrix `m`, with `x` rational.
pub fn in_integer_image(m: &IntMatrix, x: &[BigRational]) -> bool {
    if !is_integral(x) {
        return false;
    }
    let xi: IntVec = x.iter().map(BigRational::to_integer).collect();
    solve_integer_system(m, &xi).is_some()
}

/// True if `A t ≡ b (mod ℤᵏ)`.
pub fn satisfies_congruence(a: &RatMatrix, b: &[BigRational], t: &[BigRational]) -> bool {
    a.mul_vec(t).iter().zip(b).all(|(x, y)| (x - y).is_integer())
}
