use std::collections::BTreeMap;

use super::sparse::{Accumulator, SparseVec};

/// Incrementally maintained reduced row-echelon form.
///
/// Rows are keyed by pivot column (the first nonzero column), carry a 1 at
/// the pivot and zeros in every other pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    ambient: usize,
    order: u32,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(ambient: usize, order: u32) -> Self {
        Echelon { ambient, order, rows: BTreeMap::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn order(&self) -> u32 {
        self.order
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

    pub fn row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows.get(&pivot)
    }

    /// Full reduction: the canonical representative of `v` modulo the row space.
    /// The result has zeros in every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if !v.iter().any(|(i, _)| self.rows.contains_key(&i)) {
            return v.clone();
        }
        let mut acc = Accumulator::new();
        for (i, c) in v.iter() {
            match self.rows.get(&i) {
                Some(row) => {
                    // The pivot column cancels exactly; only the tail contributes.
                    let neg = -c;
                    for (j, x) in row.iter().skip(1) {
                        acc.add(j, x * &neg);
                    }
                }
                None => acc.add(i, c.clone()),
            }
        }
        acc.finish()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts a vector; returns the new pivot if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        debug_assert!(v.max_index().is_none_or(|m| m < self.ambient));
        let red = self.reduce(v);
        let (p, lead) = red.leading()?;
        let inv = lead.inv().expect("leading entry is nonzero");
        let new = red.scale(&inv);
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(p) {
                let neg = -c;
                *row = row.add_scaled(&neg, &new);
            }
        }
        self.rows.insert(p, new);
        Some(p)
    }

    pub fn extend<'a>(&mut self, vs: impl IntoIterator<Item = &'a SparseVec>) {
        for v in vs {
            self.insert(v);
        }
    }

    /// Rows sorted by pivot.
    pub fn into_rows(self) -> Vec<SparseVec> {
        self.rows.into_values().collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> + '_ {
        self.rows.values()
    }

    /// Non-pivot columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.rows.contains_key(c)).collect()
    }
}
