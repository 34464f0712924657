//! Oracle comparisons shared by the oracle tests and the acceptance harness.
//! Each returns the first discrepancy found.

use std::collections::BTreeSet;

use flatbound::catalog::{self, EntryKind, LatticeStyle, Params};
use flatbound::groups::torsion_witness;
use flatbound::linalg::{form_isometries, hermite_normal_form, smith_normal_form, BigInt, IntMatrix, RatMatrix};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all k×k minors.
pub fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in subsets(a.rows(), k) {
        for cols in subsets(a.cols(), k) {
            let minor =
                IntMatrix::from_rows(rows.iter().map(|&i| cols.iter().map(|&j| a[(i, j)].clone()).collect()).collect());
            g = g.gcd(&minor.determinant());
        }
    }
    g
}

pub fn smith_oracle(count: usize, seed: u64) -> Result<(), String> {
    let mut rng = super::rng(seed);
    for _ in 0..count {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = super::random_int_matrix(&mut rng, m, n, 6);
        let f = smith_normal_form(&a);
        ensure!(&(&f.u * &a) * &f.v == f.s, "u a v != s for {a}");
        ensure!(f.u.is_unimodular() && f.v.is_unimodular(), "non-unimodular transforms for {a}");
        for i in 0..m {
            for j in 0..n {
                ensure!(i == j || f.s[(i, j)].is_zero(), "off-diagonal entry in the Smith form of {a}");
            }
        }
        let diag: Vec<BigInt> = (0..m.min(n)).map(|i| f.s[(i, i)].clone()).collect();
        let mut product = BigInt::from(1);
        for (k, d) in diag.iter().enumerate() {
            ensure!(!d.is_negative(), "negative invariant factor for {a}");
            if k + 1 < diag.len() && !d.is_zero() {
                ensure!(diag[k + 1].is_multiple_of(d), "divisibility chain broken for {a}");
            }
            product *= d;
            ensure!(product == determinantal_divisor(&a, k + 1), "D_{} mismatch for {a}", k + 1);
        }
    }
    Ok(())
}

pub fn hermite_oracle(count: usize, seed: u64) -> Result<(), String> {
    let mut rng = super::rng(seed);
    for _ in 0..count {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = super::random_int_matrix(&mut rng, m, n, 6);
        let f = hermite_normal_form(&a);
        ensure!(&f.u * &a == f.h && f.u.is_unimodular(), "bad transform for {a}");
        for (r, &c) in f.pivots.iter().enumerate() {
            ensure!(f.h[(r, c)].is_positive(), "non-positive pivot for {a}");
            for i in 0..r {
                ensure!(!f.h[(i, c)].is_negative() && f.h[(i, c)] < f.h[(r, c)], "unreduced entry above pivot for {a}");
            }
            for i in r + 1..m {
                ensure!(f.h[(i, c)].is_zero(), "entry below pivot for {a}");
            }
            for j in 0..c {
                ensure!(f.h[(r, j)].is_zero(), "entry left of pivot for {a}");
            }
        }
        for r in f.pivots.len()..m {
            ensure!(f.h.row(r).iter().all(Zero::is_zero), "nonzero row after the pivots for {a}");
        }
        let w = super::random_unimodular(&mut rng, m);
        ensure!(hermite_normal_form(&(&w * &a)).h == f.h, "row-equivalent matrix has a different form: {a}");
        let rank = (1..=m.min(n)).filter(|&k| !determinantal_divisor(&a, k).is_zero()).count();
        ensure!(f.pivots.len() == rank, "rank mismatch for {a}");
    }
    Ok(())
}

/// All matrices with entries in {−1, 0, 1} preserving the Gram matrix.
pub fn brute_isometries(gram: &RatMatrix) -> BTreeSet<Vec<Vec<BigInt>>> {
    let n = gram.rows();
    let mut out = BTreeSet::new();
    for code in 0..3usize.pow((n * n) as u32) {
        let mut c = code;
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let x = (c % 3) as i64 - 1;
                        c /= 3;
                        BigInt::from(x)
                    })
                    .collect()
            })
            .collect();
        let m = IntMatrix::from_rows(rows.clone()).to_rational();
        if &(&m.transpose() * gram) * &m == *gram {
            out.insert(rows);
        }
    }
    out
}

pub fn isometry_oracle() -> Result<(), String> {
    for (style, expected) in [(LatticeStyle::Generic, 8), (LatticeStyle::Square, 16), (LatticeStyle::Hexagonal, 24)] {
        let t3 = catalog::build_group("T3", &Params::with_style(style)).map_err(|e| e.to_string())?;
        let found: BTreeSet<Vec<Vec<BigInt>>> =
            form_isometries(t3.form(), 10_000).map_err(|e| e.to_string())?.iter().map(IntMatrix::to_rows).collect();
        ensure!(found == brute_isometries(t3.form().gram()), "isometry sets differ for the {style} form");
        ensure!(found.len() == expected, "{style}: {} isometries, expected {expected}", found.len());
    }
    Ok(())
}

pub fn torsion_oracle_catalog() -> Result<(), String> {
    for e in catalog::entries().iter().filter(|e| e.kind == EntryKind::Group) {
        for &style in e.styles {
            let g = catalog::build_group(e.name, &Params::with_style(style)).map_err(|e| e.to_string())?;
            let brute = super::torsion_by_enumeration(&g, 3, 1);
            ensure!(torsion_witness(&g).is_some() == brute.is_some(), "{} [{style}] disagrees", e.name);
        }
    }
    Ok(())
}

pub fn torsion_oracle_random(count: usize, seed: u64) -> Result<(), String> {
    let mut rng = super::rng(seed);
    let (mut checked, mut with_torsion) = (0, 0);
    while checked < count {
        let n = rng.gen_range(2..=4);
        let g = if rng.gen_bool(0.5) {
            match super::random_diagonal_group(&mut rng, n) {
                Some(g) => g,
                None => continue,
            }
        } else {
            let free = rng.gen_bool(0.5);
            super::random_z2_group(&mut rng, n, free)
        };
        let brute = super::torsion_by_enumeration(&g, 3, 2);
        ensure!(torsion_witness(&g).is_some() == brute.is_some(), "disagreement on {g}");
        checked += 1;
        with_torsion += usize::from(brute.is_some());
    }
    ensure!(with_torsion > count / 10 && with_torsion < count - count / 10, "one-sided sample: {with_torsion} of {count} with torsion");
    Ok(())
}
