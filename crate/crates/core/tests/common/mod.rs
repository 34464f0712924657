#![allow(dead_code)]

pub mod checks;

use flatbound::groups::{validate, AffineElement, SpaceGroup};
use flatbound::linalg::{rat, BigInt, IntMatrix, QuadraticForm, RatMatrix, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_rows(
        (0..rows).map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).collect(),
    )
}

/// Product of a few random elementary operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..rng.gen_range(1..=2 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3) {
            0 => u.add_row_multiple(i, j, &BigInt::from(rng.gen_range(-1..=1))),
            1 => u.swap_rows(i, j),
            _ => u.negate_row(i),
        }
    }
    u
}

fn random_rational(rng: &mut ChaCha8Rng, dens: &[i64]) -> Rational {
    let d = dens[rng.gen_range(0..dens.len())];
    rat(rng.gen_range(0..d), d)
}

/// A positive-definite form invariant under the given matrices (a finite
/// group), obtained by averaging `AᵀA + I` over the group.
pub fn invariant_form(rng: &mut ChaCha8Rng, group: &[IntMatrix]) -> QuadraticForm {
    let n = group[0].rows();
    let a = random_int_matrix(rng, n, n, 2).to_rational();
    let g0 = &(&a.transpose() * &a) + &RatMatrix::identity(n);
    let mut acc = RatMatrix::zeros(n, n);
    for m in group {
        let mr = m.to_rational();
        acc = &acc + &(&(&mr.transpose() * &g0) * &mr);
    }
    QuadraticForm::new(acc).expect("averaged form is positive definite")
}

/// A group with holonomy ℤ₂ in dimension `n`: the linear part is a sum of
/// `a` trivial, `b` sign and `c` swap blocks. When `torsion_free` is set a
/// trivial coordinate carries a half translation, which is exactly the
/// condition for the generator to act freely.
pub fn random_z2_group(rng: &mut ChaCha8Rng, n: usize, torsion_free: bool) -> SpaceGroup {
    let c = rng.gen_range(0..=(n - 1) / 2);
    let rest = n - 2 * c;
    let b_min = if c == 0 { 1 } else { 0 };
    let b = rng.gen_range(b_min..=rest - 1);
    let a = rest - b;
    let mut blocks: Vec<IntMatrix> = Vec::new();
    let mut t = Vec::new();
    for i in 0..a {
        blocks.push(IntMatrix::from_i64_rows(&[&[1]]));
        t.push(if torsion_free && i == 0 { rat(1, 2) } else if torsion_free { random_rational(rng, &[1, 2]) } else { rat(0, 1) });
    }
    for _ in 0..b {
        blocks.push(IntMatrix::from_i64_rows(&[&[-1]]));
        t.push(random_rational(rng, &[1, 2, 3, 4]));
    }
    for _ in 0..c {
        blocks.push(IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]));
        let x = random_rational(rng, &[1, 2, 4]);
        t.push(x.clone());
        t.push(-x);
    }
    let m = blocks.iter().skip(1).fold(blocks[0].clone(), |acc, b| acc.direct_sum(b));
    let form = invariant_form(rng, &[IntMatrix::identity(n), m.clone()]);
    let sg = SpaceGroup::new(form, vec![AffineElement::new(m, t)], Some(vec![vec![1, 1]])).expect("valid generator");
    scramble(rng, &sg)
}

/// Random rebase followed by a conjugation with a random rational shift.
pub fn scramble(rng: &mut ChaCha8Rng, sg: &SpaceGroup) -> SpaceGroup {
    let n = sg.dim();
    let u = random_unimodular(rng, n);
    let rebased = sg.rebase(&u).expect("unimodular rebase");
    let s = (0..n).map(|_| random_rational(rng, &[1, 2, 3, 4])).collect();
    rebased.conjugate(&AffineElement::translation(s)).expect("translation conjugation")
}

/// Commuting diagonal sign generators with half translations; may or may not
/// be torsion-free. Returns `None` when two generators clash.
pub fn random_diagonal_group(rng: &mut ChaCha8Rng, n: usize) -> Option<SpaceGroup> {
    let k = rng.gen_range(1..=n.min(3));
    let mut gens = Vec::new();
    let mut linear = Vec::new();
    for _ in 0..k {
        let signs: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
        let rows: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| BigInt::from(if i == j { signs[i] } else { 0 })).collect()).collect();
        let m = IntMatrix::from_rows(rows);
        let t = (0..n).map(|_| random_rational(rng, &[1, 2])).collect();
        linear.push(m.clone());
        gens.push(AffineElement::new(m, t));
    }
    linear.push(IntMatrix::identity(n));
    let form = invariant_form(rng, &linear);
    let sg = SpaceGroup::new(form, gens, None).ok()?;
    if !validate(&sg).is_valid() {
        return None;
    }
    let sg = scramble(rng, &sg);
    validate(&sg).is_valid().then_some(sg)
}

/// Elements reachable by words of length ≤ `depth` in the generators, each
/// combined with lattice translations from the box `[-r, r]ⁿ`; returns one
/// with a fixed point if found. Independent of the vector system.
pub fn torsion_by_enumeration(sg: &SpaceGroup, depth: usize, r: i64) -> Option<AffineElement> {
    use std::collections::HashSet;
    let n = sg.dim();
    let mut letters: Vec<AffineElement> = sg.generators().to_vec();
    letters.extend(sg.generators().iter().map(|g| g.inverse().unwrap()));
    let mut seen: HashSet<AffineElement> = HashSet::new();
    let mut frontier = vec![AffineElement::identity(n)];
    seen.insert(frontier[0].clone());
    let mut words = frontier.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let e = w.compose(l);
                if seen.insert(e.clone()) {
                    next.push(e);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let shifts = box_vectors(n, r);
    for w in words.iter().filter(|w| !w.linear.is_identity()) {
        for z in &shifts {
            let e = AffineElement::new(w.linear.clone(), flatbound::linalg::vec_add(&w.translation, z));
            if flatbound::groups::fixed_point_of(&e).unwrap().is_some() {
                return Some(e);
            }
        }
    }
    None
}

pub fn box_vectors(n: usize, r: i64) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Rational>| {
                (-r..=r).map(move |x| {
                    let mut w = v.clone();
                    w.push(rat(x, 1));
                    w
                })
            })
            .collect();
    }
    out
}
