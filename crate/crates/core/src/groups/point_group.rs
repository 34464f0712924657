use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Default cap on point-group closure.
pub const DEFAULT_POINT_GROUP_CAP: usize = 1152;

/// A finite matrix group with its multiplication table.
///
/// Elements are ordered breadth-first from the identity (index 0), expanding
/// each element by left multiplication with the generators in input order.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    elements: Vec<IntMatrix>,
    index: HashMap<IntMatrix, usize>,
    table: Vec<Vec<usize>>,
    generators: Vec<IntMatrix>,
    /// For each non-identity element: (parent element, generator index) with
    /// `element = generator · parent`.
    parents: Vec<Option<(usize, usize)>>,
}

pub fn close_point_group(generators: &[IntMatrix], cap: usize) -> Result<FiniteGroup> {
    let n = match generators.first() {
        Some(g) => g.rows(),
        None => return Err(Error::DimensionMismatch("no generators; use FiniteGroup::trivial".into())),
    };
    FiniteGroup::generate(n, generators, cap)
}

impl FiniteGroup {
    pub fn trivial(dim: usize) -> Self {
        Self::generate(dim, &[], 1).expect("trivial group")
    }

    pub fn generate(dim: usize, generators: &[IntMatrix], cap: usize) -> Result<Self> {
        for g in generators {
            if g.rows() != dim || !g.is_square() {
                return Err(Error::DimensionMismatch(format!("generator is not {dim}×{dim}")));
            }
            if !g.is_unimodular() {
                return Err(Error::NotInvertible);
            }
        }
        let id = IntMatrix::identity(dim);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut parents = vec![None];
        let mut i = 0;
        while i < elements.len() {
            for (gi, g) in generators.iter().enumerate() {
                let p = g * &elements[i];
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                    parents.push(Some((i, gi)));
                }
            }
            i += 1;
        }
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&(a * b)]).collect())
            .collect();
        Ok(FiniteGroup { elements, index, table, generators: generators.to_vec(), parents })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IntMatrix {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.index.contains_key(m)
    }

    /// Index of `elements[a] · elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.table[a].iter().position(|&p| p == 0).expect("group element has an inverse")
    }

    pub fn element_order(&self, a: usize) -> u32 {
        let mut k = 1;
        let mut p = a;
        while p != 0 {
            p = self.mul(p, a);
            k += 1;
        }
        k
    }

    pub fn parent(&self, a: usize) -> Option<(usize, usize)> {
        self.parents[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Setwise equality `A P A⁻¹ = P`.
    pub fn is_normalized_by(&self, a: &IntMatrix, a_inv: &IntMatrix) -> bool {
        self.elements.iter().all(|m| self.contains(&(&(a * m) * a_inv)))
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }
}
