//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{denominator_lcm, IntMatrix, RatVec};

/// Result of [`smith_normal_form`]: `u * a * v == s`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries `s₁ | s₂ | …`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Diagonalizes `a` by unimodular row and column operations. Pivots are chosen
/// by minimal nonzero absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_abs_position(&s, t) else {
                return SmithForm { s, u, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility chain: fold any offending row into the pivot row
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { s, u, v }
}

fn min_abs_position(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = s[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().map_or(true, |(_, _, b)| x < *b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Result of [`hermite_normal_form`]: `u * a == h`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`, in order.
    pub pivots: Vec<usize>,
}

/// Row-style Hermite normal form: `h` is in row echelon form with positive
/// pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&i, &j| h[(i, c)].abs().cmp(&h[(j, c)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                clean &= h[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm { h, u, pivots }
}

/// A basis (HNF-reduced) of the ℤ-module spanned by rational vectors of
/// length `dim`.
pub fn lattice_basis(generators: &[RatVec], dim: usize) -> Vec<RatVec> {
    if generators.is_empty() {
        return Vec::new();
    }
    let all: Vec<BigRational> = generators.iter().flatten().cloned().collect();
    let scale = denominator_lcm(&all);
    let scale_r = BigRational::from_integer(scale.clone());
    let rows: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| {
            assert_eq!(g.len(), dim);
            g.iter().map(|x| (x * &scale_r).to_integer()).collect()
        })
        .collect();
    let hnf = hermite_normal_form(&IntMatrix::from_rows(rows));
    (0..hnf.pivots.len())
        .map(|i| hnf.h.row(i).iter().map(|x| BigRational::new(x.clone(), scale.clone())).collect())
        .collect()
}
