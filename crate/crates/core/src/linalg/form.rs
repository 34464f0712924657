//! Positive-definite quadratic forms and their integral isometry groups.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::matrix::{dot, IntMatrix, IntVec, RatMatrix};
use crate::error::{Error, Result};

/// Default bound on the size of an isometry group.
pub const DEFAULT_ISOMETRY_CAP: usize = 1152;

/// Gram matrix of a lattice basis. Always symmetric positive definite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    gram: RatMatrix,
}

impl QuadraticForm {
    pub fn new(gram: RatMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch("gram matrix must be square".into()));
        }
        if gram != gram.transpose() {
            return Err(Error::NotSymmetric);
        }
        let n = gram.rows();
        for k in 1..=n {
            let minor = RatMatrix::from_rows((0..k).map(|i| gram.row(i)[..k].to_vec()).collect());
            if minor.determinant() <= BigRational::zero() {
                return Err(Error::NotPositiveDefinite);
            }
        }
        Ok(QuadraticForm { gram })
    }

    pub fn identity(n: usize) -> Self {
        QuadraticForm { gram: RatMatrix::identity(n) }
    }

    pub fn diagonal(entries: &[BigRational]) -> Result<Self> {
        Self::new(RatMatrix::diagonal(entries))
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// `Mᵀ G M == G`
    pub fn is_preserved_by(&self, m: &IntMatrix) -> bool {
        let mr = m.to_rational();
        &(&mr.transpose() * &self.gram) * &mr == self.gram
    }

    /// The form expressed in a new basis given by the columns of `basis`.
    pub fn in_basis(&self, basis: &RatMatrix) -> Result<Self> {
        Self::new(&(&basis.transpose() * &self.gram) * basis)
    }

    /// Orthogonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        QuadraticForm { gram: self.gram.direct_sum(&other.gram) }
    }

    /// Integer multiple of the form with coprime entries.
    fn integral_gram(&self) -> IntMatrix {
        let scale = BigRational::from_integer(self.gram.denominator_lcm());
        self.gram.map(|x| (x * &scale).to_integer())
    }
}

/// The finite group `{A ∈ GL(ℤ) : Aᵀ G A = G}`.
///
/// Column images are assigned by backtracking over lattice vectors whose norm
/// matches the corresponding basis vector and whose inner products with the
/// already-assigned images match the Gram entries.
pub fn form_isometries(form: &QuadraticForm, cap: usize) -> Result<Vec<IntMatrix>> {
    let g = form.integral_gram();
    let n = form.dim();
    let max_norm = (0..n).map(|i| g[(i, i)].clone()).max().unwrap_or_else(BigInt::zero);
    let vectors = short_vectors(form, &g, &max_norm);

    let mut by_norm: BTreeMap<BigInt, Vec<(IntVec, IntVec)>> = BTreeMap::new();
    for v in vectors {
        let gv = g.mul_vec(&v);
        by_norm.entry(dot(&v, &gv)).or_default().push((v, gv));
    }

    let mut found = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let candidates: Vec<&Vec<(IntVec, IntVec)>> = (0..n)
        .map(|i| by_norm.get(&g[(i, i)]).map_or(&EMPTY, |v| v))
        .collect();
    backtrack(&g, &candidates, &mut chosen, &mut found, cap)?;
    Ok(found)
}

static EMPTY: Vec<(IntVec, IntVec)> = Vec::new();

fn backtrack(
    g: &IntMatrix,
    candidates: &[&Vec<(IntVec, IntVec)>],
    chosen: &mut Vec<usize>,
    found: &mut Vec<IntMatrix>,
    cap: usize,
) -> Result<()> {
    let j = chosen.len();
    let n = candidates.len();
    if j == n {
        let cols: Vec<IntVec> = chosen.iter().enumerate().map(|(k, &c)| candidates[k][c].0.clone()).collect();
        found.push(IntMatrix::from_cols(n, &cols));
        if found.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        return Ok(());
    }
    'next: for (idx, (v, _)) in candidates[j].iter().enumerate() {
        for (l, &c) in chosen.iter().enumerate() {
            let gw = &candidates[l][c].1;
            if dot(v, gw) != g[(j, l)] {
                continue 'next;
            }
        }
        chosen.push(idx);
        backtrack(g, candidates, chosen, found, cap)?;
        chosen.pop();
    }
    Ok(())
}

/// All nonzero integer vectors `x` with `xᵀ G x ≤ bound` (Fincke–Pohst), in
/// deterministic order.
fn short_vectors(form: &QuadraticForm, g: &IntMatrix, bound: &BigInt) -> Vec<IntVec> {
    let n = form.dim();
    // q[i][i] and q[i][j] (j > i) with xᵀGx = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²
    let mut q = g.to_rational();
    for i in 0..n {
        for j in i + 1..n {
            let v = q[(i, j)].clone() / q[(i, i)].clone();
            q[(j, i)] = q[(i, j)].clone();
            q[(i, j)] = v;
        }
        for k in i + 1..n {
            for l in k..n {
                let v = q[(k, l)].clone() - q[(k, i)].clone() * q[(i, l)].clone();
                q[(k, l)] = v;
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    let bound = BigRational::from_integer(bound.clone());
    enumerate_level(&q, n, &bound, &mut x, &mut out);
    out.retain(|v: &IntVec| v.iter().any(|c| !c.is_zero()));
    out
}

fn enumerate_level(q: &RatMatrix, level: usize, budget: &BigRational, x: &mut IntVec, out: &mut Vec<IntVec>) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let n = q.rows();
    let mut center = BigRational::zero();
    for j in i + 1..n {
        center -= q[(i, j)].clone() * BigRational::from_integer(x[j].clone());
    }
    let qii = q[(i, i)].clone();
    let radius = (budget / &qii).to_f64().unwrap_or(0.0).max(0.0).sqrt();
    let c = center.to_f64().unwrap_or(0.0);
    let lo = (c - radius).floor() as i64 - 1;
    let hi = (c + radius).ceil() as i64 + 1;
    for xi in lo..=hi {
        let xi = BigInt::from(xi);
        let diff = BigRational::from_integer(xi.clone()) - &center;
        let used = &qii * &diff * &diff;
        if &used > budget {
            continue;
        }
        x[i] = xi;
        let rest = budget - used;
        enumerate_level(q, level - 1, &rest, x, out);
    }
    x[i] = BigInt::zero();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::rat;

    #[test]
    fn rejects_indefinite() {
        let g = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]);
        assert_eq!(QuadraticForm::new(g), Err(Error::NotPositiveDefinite));
        let g = RatMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(QuadraticForm::new(g), Err(Error::NotSymmetric));
    }

    #[test]
    fn generic_diagonal_form() {
        let f = QuadraticForm::diagonal(&[rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap();
        let isos = form_isometries(&f, DEFAULT_ISOMETRY_CAP).unwrap();
        assert_eq!(isos.len(), 8);
        assert!(isos.iter().all(|m| m.is_diagonal()));
    }

    #[test]
    fn square_and_hexagonal() {
        let sq = QuadraticForm::identity(2);
        assert_eq!(form_isometries(&sq, DEFAULT_ISOMETRY_CAP).unwrap().len(), 8);
        let hex = QuadraticForm::new(RatMatrix::from_rows(vec![
            vec![rat(1, 1), rat(-1, 2)],
            vec![rat(-1, 2), rat(1, 1)],
        ]))
        .unwrap();
        let isos = form_isometries(&hex, DEFAULT_ISOMETRY_CAP).unwrap();
        assert_eq!(isos.len(), 12);
        assert!(isos.contains(&IntMatrix::from_i64_rows(&[&[0, -1], &[1, -1]])));
    }

    #[test]
    fn cap_is_enforced() {
        let f = QuadraticForm::identity(3);
        assert_eq!(form_isometries(&f, 10), Err(Error::CapExceeded { cap: 10 }));
        assert_eq!(form_isometries(&f, 48).unwrap().len(), 48);
    }
}
