use std::collections::BTreeMap;
use std::hash::Hash;

use super::{kernel, Echelon, Matrix, SparseVec};
use crate::error::{Error, Result};
use crate::field::Cyclotomic;
use crate::par;

/// A subspace of `Q(ζ_r)^ambient_dim`, held by its reduced row-echelon basis.
///
/// Two values are equal exactly when they describe the same subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    order: u32,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, order: u32) -> Self {
        Subspace { ambient_dim, order, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize, order: u32) -> Self {
        Subspace { ambient_dim, order, basis: (0..ambient_dim).map(|i| SparseVec::unit(i, order)).collect() }
    }

    pub fn span<'a>(ambient_dim: usize, order: u32, vectors: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut e = Echelon::new(ambient_dim, order);
        e.extend(vectors);
        Self::from_echelon(e)
    }

    pub fn from_echelon(e: Echelon) -> Self {
        Subspace { ambient_dim: e.ambient(), order: e.order(), basis: e.into_rows() }
    }

    /// Wraps rows that are already a reduced row-echelon basis sorted by pivot.
    pub(crate) fn from_rref_rows(ambient_dim: usize, order: u32, basis: Vec<SparseVec>) -> Self {
        debug_assert!(basis.windows(2).all(|w| w[0].leading().unwrap().0 < w[1].leading().unwrap().0));
        debug_assert!(basis.iter().all(|r| r.leading().is_some_and(|(_, c)| c.is_one())));
        Subspace { ambient_dim, order, basis }
    }

    /// Span of weight-homogeneous vectors, reduced one weight block at a time.
    ///
    /// `block_of` assigns each coordinate to a block. Vectors whose support
    /// meets several blocks make the split invalid, in which case the whole
    /// set is reduced together.
    pub fn span_by_blocks<K, F>(ambient_dim: usize, order: u32, vectors: &[SparseVec], block_of: F) -> Self
    where
        K: Ord + Hash + Clone + Send + Sync,
        F: Fn(usize) -> K,
    {
        let mut groups: BTreeMap<K, Vec<&SparseVec>> = BTreeMap::new();
        for v in vectors {
            let Some((lead, _)) = v.leading() else { continue };
            let k = block_of(lead);
            if v.iter().any(|(i, _)| block_of(i) != k) {
                return Self::span(ambient_dim, order, vectors);
            }
            groups.entry(k).or_default().push(v);
        }
        let groups: Vec<Vec<&SparseVec>> = groups.into_values().collect();
        let reduced = par::map(&groups, |g| {
            let mut e = Echelon::new(ambient_dim, order);
            e.extend(g.iter().copied());
            e.into_rows()
        });
        let mut basis: Vec<SparseVec> = reduced.into_iter().flatten().collect();
        basis.sort_by_key(|r| r.leading().map(|(i, _)| i));
        Subspace { ambient_dim, order, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.leading().expect("nonzero basis row").0).collect()
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ambient_dim, self.order, self.basis.clone()).expect("basis fits ambient")
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.ambient_dim, self.order);
        e.extend(self.basis.iter());
        e
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        let e = self.echelon();
        Ok(other.basis.iter().all(|v| e.contains(v)))
    }

    /// Canonical representative of `v` modulo this subspace (zeros on pivots).
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        // The stored basis is already reduced; reuse the echelon logic directly.
        let mut acc = super::Accumulator::new();
        let mut touched = false;
        let pivots: BTreeMap<usize, &SparseVec> = self.basis.iter().map(|r| (r.leading().unwrap().0, r)).collect();
        for (i, c) in v.iter() {
            match pivots.get(&i) {
                Some(row) => {
                    touched = true;
                    let neg = -c;
                    for (j, x) in row.iter().skip(1) {
                        acc.add(j, x * &neg);
                    }
                }
                None => acc.add(i, c.clone()),
            }
        }
        if touched {
            acc.finish()
        } else {
            v.clone()
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut e = self.echelon();
        e.extend(other.basis.iter());
        Ok(Self::from_echelon(e))
    }

    /// Zassenhaus: reduce `[u | u]` and `[v | 0]`; the rows whose left half
    /// vanishes carry a basis of the intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let n = self.ambient_dim;
        let mut e = Echelon::new(2 * n, self.order);
        for u in &self.basis {
            let doubled = SparseVec::from_sorted(
                u.iter().map(|(i, c)| (i, c.clone())).chain(u.iter().map(|(i, c)| (i + n, c.clone()))).collect(),
            );
            e.insert(&doubled);
        }
        for v in &other.basis {
            e.insert(v);
        }
        let rows: Vec<SparseVec> =
            e.rows().filter(|r| r.leading().is_some_and(|(p, _)| p >= n)).map(|r| r.map_indices(|i| i - n)).collect();
        Ok(Self::span(n, self.order, &rows))
    }

    /// `dim(ambient) - dim(self ∩ ambient)`, with `ambient = None` meaning the full space.
    pub fn quotient_dim(&self, ambient: Option<&Subspace>) -> Result<usize> {
        match ambient {
            None => Ok(self.ambient_dim - self.dim()),
            Some(a) => Ok(a.dim() - a.intersect(self)?.dim()),
        }
    }

    /// Annihilator under the standard pairing `⟨ξ, v⟩ = Σ ξ_i v_i`.
    pub fn orthogonal_complement(&self) -> Subspace {
        kernel(&self.basis_matrix())
    }

    /// Image under a coordinate map `i ↦ f(i)` into a space of dimension `ambient_dim`.
    pub fn map_coordinates(&self, ambient_dim: usize, f: impl Fn(usize) -> usize) -> Subspace {
        let rows: Vec<SparseVec> = self.basis.iter().map(|r| r.map_indices(&f)).collect();
        Self::span(ambient_dim, self.order, &rows)
    }

    /// Change of field `Q(ζ_r) → Q(ζ_L)`.
    pub fn embed(&self, target: u32) -> Result<Subspace> {
        let rows = self
            .basis
            .iter()
            .map(|r| Ok(SparseVec::from_sorted(r.iter().map(|(i, c)| Ok((i, c.embed(target)?))).collect::<Result<_>>()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace { ambient_dim: self.ambient_dim, order: target, basis: rows })
    }

    pub fn zero_scalar(&self) -> Cyclotomic {
        Cyclotomic::zero(self.order)
    }
}
