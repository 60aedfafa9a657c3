use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::Rational;

/// Sparse vector: column index to nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Rational>;

/// Incrementally maintained echelon basis of a subspace of `Q^dim`, stored
/// sparsely and keyed by leading (smallest) column.
///
/// The set of leading columns coincides with the pivot set of the reduced row
/// echelon form of any spanning set, so non-pivot columns give a canonical
/// complement basis.
#[derive(Clone, Debug, Default)]
pub struct EchelonSpan {
    dim: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl EchelonSpan {
    pub fn new(dim: usize) -> Self {
        EchelonSpan {
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.is_pivot(*c)).collect()
    }

    /// Normal form of `v`: the unique representative modulo the span that is
    /// supported on non-pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v: SparseVec = v.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, c.clone())).collect();
        let mut cursor = 0;
        loop {
            let next = v
                .range(cursor..)
                .map(|(k, _)| *k)
                .find(|k| self.rows.contains_key(k));
            let Some(col) = next else { break };
            let factor = v[&col].clone();
            for (k, c) in &self.rows[&col] {
                let entry = v.entry(*k).or_insert_with(Rational::zero);
                *entry -= &factor * c;
                if entry.is_zero() {
                    v.remove(k);
                }
            }
            cursor = col + 1;
        }
        v
    }

    /// Adds `v` to the span; returns true if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&lead, lc)) = r.iter().next() else {
            return false;
        };
        debug_assert!(lead < self.dim);
        let inv = lc.recip();
        let row: SparseVec = r.iter().map(|(k, c)| (*k, c * &inv)).collect();
        debug_assert!(row[&lead].is_one());
        self.rows.insert(lead, row);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// True iff both spans are the same subspace.
    pub fn same_span(&self, other: &EchelonSpan) -> bool {
        self.dim == other.dim
            && self.rank() == other.rank()
            && other.rows.values().all(|r| self.contains(r))
    }
}
