use serde::{Deserialize, Serialize};

use super::QuadraticAlgebra;
use crate::error::Result;
use crate::linalg::{Echelon, SparseVec};
use crate::quiver::check_cap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FrobeniusVerdict {
    Pass,
    DegeneratePairing {
        degree: usize,
    },
    /// `found` is the top nonzero degree, or `None` when degree `ℓ + 1` is
    /// already nonzero.
    TopDegreeMismatch {
        expected: usize,
        found: Option<usize>,
    },
    TopDimensionNotOne {
        dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingDegree {
    pub degree: usize,
    pub left_dim: usize,
    pub right_dim: usize,
    pub rank: usize,
    pub nondegenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub ell: usize,
    pub dims: Vec<usize>,
    pub degrees: Vec<PairingDegree>,
    pub verdict: FrobeniusVerdict,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.verdict == FrobeniusVerdict::Pass
    }
}

/// Checks that multiplication `A_i × A_{ℓ-i} → A_ℓ ≅ k` is a perfect pairing
/// for every `0 ≤ i ≤ ℓ`.
pub fn frobenius_pairing_check(a: &QuadraticAlgebra, ell: usize, cap: usize) -> Result<FrobeniusReport> {
    check_cap(ell + 1, cap)?;
    let mut gq = a.engine(None);
    let dims: Vec<usize> = (0..=ell + 1).map(|m| gq.dim(m)).collect();
    let report = |degrees, verdict| FrobeniusReport { ell, dims: dims[..=ell].to_vec(), degrees, verdict };
    if dims[ell + 1] != 0 || dims[ell] == 0 {
        let found = (dims[ell + 1] == 0).then(|| dims.iter().rposition(|&d| d != 0).unwrap_or(0));
        return Ok(report(Vec::new(), FrobeniusVerdict::TopDegreeMismatch { expected: ell, found }));
    }
    if dims[ell] != 1 {
        return Ok(report(Vec::new(), FrobeniusVerdict::TopDimensionNotOne { dim: dims[ell] }));
    }
    let order = a.order();
    let mut degrees = Vec::new();
    let mut verdict = FrobeniusVerdict::Pass;
    for i in 0..=ell {
        let j = ell - i;
        let (left, right) = (dims[i], dims[j]);
        let mut e = Echelon::new(right, order);
        for x in 0..left {
            let ux = SparseVec::unit(x, order);
            let row = SparseVec::from_entries((0..right).filter_map(|y| {
                let prod = gq.multiply(i, &ux, j, &SparseVec::unit(y, order));
                prod.get(0).map(|c| (y, c.clone()))
            }));
            e.insert(&row);
        }
        let rank = e.rank();
        let nondegenerate = left == right && rank == left;
        if !nondegenerate && verdict == FrobeniusVerdict::Pass {
            verdict = FrobeniusVerdict::DegeneratePairing { degree: i };
        }
        degrees.push(PairingDegree { degree: i, left_dim: left, right_dim: right, rank, nondegenerate });
    }
    Ok(report(degrees, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cyclotomic;
    use crate::gradedalg::{quadratic_dual, FreeWord, NcPolynomial};

    fn monomials(n: usize, words: &[[usize; 2]]) -> QuadraticAlgebra {
        let names = (0..n).map(|i| format!("x{i}")).collect();
        let rels: Vec<NcPolynomial> =
            words.iter().map(|w| NcPolynomial::from_terms([(FreeWord(w.to_vec()), Cyclotomic::one(1))])).collect();
        QuadraticAlgebra::new(names, &rels).unwrap()
    }

    #[test]
    fn dual_numbers() {
        let rep = frobenius_pairing_check(&monomials(1, &[[0, 0]]), 1, 8).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.degrees.len(), 2);
    }

    #[test]
    fn example_dual_is_frobenius() {
        let s = crate::fixtures::example_s().0;
        let rep = frobenius_pairing_check(&quadratic_dual(&s), 4, 8).unwrap();
        assert_eq!(rep.dims, vec![1, 4, 6, 4, 1]);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.degrees.iter().all(|d| d.nondegenerate));
    }

    #[test]
    fn square_zero_plane_is_rejected() {
        let a = monomials(2, &[[0, 0], [0, 1], [1, 0], [1, 1]]);
        let rep = frobenius_pairing_check(&a, 1, 8).unwrap();
        assert_eq!(rep.verdict, FrobeniusVerdict::TopDimensionNotOne { dim: 2 });
        assert!(!rep.passed());
        let rep = frobenius_pairing_check(&a, 2, 8).unwrap();
        assert_eq!(rep.verdict, FrobeniusVerdict::TopDegreeMismatch { expected: 2, found: Some(1) });
    }

    #[test]
    fn degenerate_pairing_is_reported() {
        // Only x0 x1 survives in degree 2, so x1 pairs to zero on the left.
        let a = monomials(2, &[[0, 0], [1, 1], [1, 0]]);
        let rep = frobenius_pairing_check(&a, 2, 8).unwrap();
        assert_eq!(rep.dims, vec![1, 2, 1]);
        assert_eq!(rep.verdict, FrobeniusVerdict::DegeneratePairing { degree: 1 });
        assert_eq!(rep.degrees[1].rank, 1);
    }
}
