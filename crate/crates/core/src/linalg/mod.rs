//! Exact linear algebra over `Q(ζ_r)`: row reduction, kernels and subspace
//! arithmetic with canonical reduced row-echelon bases.
//!
//! Pivots are always the first nonzero column, so the reduced basis of a
//! subspace depends only on the subspace and the column order.

mod echelon;
mod sparse;
mod subspace;

pub use echelon::Echelon;
pub(crate) use sparse::Accumulator;
pub use sparse::SparseVec;
pub use subspace::Subspace;

use crate::error::{Error, Result};
use crate::field::Cyclotomic;

/// Row-sparse matrix over `Q(ζ_r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    order: u32,
    data: Vec<SparseVec>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, order: u32) -> Self {
        Matrix { rows, cols, order, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        Matrix { rows: n, cols: n, order, data: (0..n).map(|i| SparseVec::unit(i, order)).collect() }
    }

    pub fn from_rows(cols: usize, order: u32, data: Vec<SparseVec>) -> Result<Self> {
        for row in &data {
            if let Some(m) = row.max_index() {
                if m >= cols {
                    return Err(Error::AmbientMismatch(m + 1, cols));
                }
            }
            if let Some((_, c)) = row.leading() {
                c.checked_order(&Cyclotomic::zero(order))?;
            }
        }
        Ok(Matrix { rows: data.len(), cols, order, data })
    }

    /// Dense constructor; every entry must have the given order.
    pub fn from_dense(order: u32, rows: &[Vec<Cyclotomic>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::AmbientMismatch(cols, rows.iter().map(Vec::len).max().unwrap_or(0)));
        }
        for c in rows.iter().flatten() {
            c.checked_order(&Cyclotomic::zero(order))?;
        }
        Ok(Matrix { rows: rows.len(), cols, order, data: rows.iter().map(|r| SparseVec::from_dense(r)).collect() })
    }

    pub fn from_ints(order: u32, rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Cyclotomic>> =
            rows.iter().map(|r| r.iter().map(|&x| Cyclotomic::from_int(order, x)).collect()).collect();
        Matrix::from_dense(order, &dense).expect("rectangular integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Cyclotomic {
        self.data[i].get(j).cloned().unwrap_or_else(|| Cyclotomic::zero(self.order))
    }

    pub fn transpose(&self) -> Matrix {
        let mut cols: Vec<Vec<(usize, Cyclotomic)>> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, c) in row.iter() {
                cols[j].push((i, c.clone()));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            order: self.order,
            data: cols.into_iter().map(SparseVec::from_sorted).collect(),
        }
    }

    /// `self · v` for a column vector `v` of length `cols`.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_entries(
            self.data.iter().enumerate().map(|(i, row)| (i, row.dot(v, self.order))).filter(|(_, c)| !c.is_zero()),
        )
    }
}

/// Gauss–Jordan reduction. Returns the reduced matrix (same shape, zero rows
/// at the bottom), the rank and the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, usize, Vec<usize>) {
    let mut e = Echelon::new(m.cols, m.order);
    e.extend(m.data.iter());
    let pivots: Vec<usize> = e.pivots().collect();
    let rank = pivots.len();
    let mut data = e.into_rows();
    data.resize(m.rows.max(rank), SparseVec::new());
    (Matrix { rows: m.rows.max(rank), cols: m.cols, order: m.order, data }, rank, pivots)
}

/// Right null space `{x : m x = 0}` as a subspace of dimension `cols - rank`.
pub fn kernel(m: &Matrix) -> Subspace {
    let mut e = Echelon::new(m.cols, m.order);
    e.extend(m.data.iter());
    let basis: Vec<SparseVec> = e
        .free_columns()
        .into_iter()
        .map(|f| {
            let mut entries = vec![(f, Cyclotomic::one(m.order))];
            for p in e.pivots() {
                if let Some(c) = e.row(p).and_then(|r| r.get(f)) {
                    entries.push((p, -c));
                }
            }
            SparseVec::from_entries(entries)
        })
        .collect();
    Subspace::span(m.cols, m.order, &basis)
}
