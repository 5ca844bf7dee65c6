use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{hilbert_function, quadratic_dual, QuadraticAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{kernel, Accumulator, Matrix, SparseVec, Subspace};
use crate::quiver::check_cap;

/// `K^i = (K^{i-1}⊗V) ∩ (V^{⊗(i-2)}⊗R)` from `K^{i-1}`.
///
/// An element `Σ c_{j,b} β_j⊗x_b` lies in `V^{⊗(i-2)}⊗R` exactly when each
/// of its length-two tails pairs to zero with `R^⊥`; the coefficients `c`
/// form the kernel of that pairing.
fn next_syzygy(a: &QuadraticAlgebra, perp: &Subspace, prev: &Subspace, i: usize) -> Subspace {
    let n = a.n();
    let order = a.order();
    let dim = n.pow(i as u32);
    if prev.is_zero() {
        return Subspace::zero(dim, order);
    }
    // perp vectors grouped by first letter: a ↦ [(π, b, coefficient)]
    let mut by_first: Vec<Vec<(usize, usize, &crate::Cyclotomic)>> = vec![Vec::new(); n];
    for (pi, v) in perp.basis().iter().enumerate() {
        for (ab, c) in v.iter() {
            by_first[ab / n].push((pi, ab % n, c));
        }
    }
    let mut rows: BTreeMap<(usize, usize), Accumulator> = BTreeMap::new();
    for (j, beta) in prev.basis().iter().enumerate() {
        for (idx, x) in beta.iter() {
            let (u, first) = (idx / n, idx % n);
            for &(pi, b, c) in &by_first[first] {
                rows.entry((u, pi)).or_default().add(j * n + b, x * c);
            }
        }
    }
    let cols = prev.dim() * n;
    let rows: Vec<SparseVec> = rows.into_values().map(Accumulator::finish).filter(|r| !r.is_zero()).collect();
    let ker = kernel(&Matrix::from_rows(cols, order, rows).expect("row indices are below cols"));
    let vectors: Vec<SparseVec> = ker
        .basis()
        .iter()
        .map(|coeffs| {
            let mut acc = Accumulator::new();
            for (jb, c) in coeffs.iter() {
                let (j, b) = (jb / n, jb % n);
                for (idx, x) in prev.basis()[j].iter() {
                    acc.add(idx * n + b, c * x);
                }
            }
            acc.finish()
        })
        .collect();
    Subspace::span(dim, order, &vectors)
}

/// `[K^0, K^1, …, K^top]`, with `K^0 = k` and `K^1 = V`.
pub fn syzygy_spaces(a: &QuadraticAlgebra, top: usize, cap: usize) -> Result<Vec<Subspace>> {
    check_cap(top, cap)?;
    let n = a.n();
    let order = a.order();
    let mut out = vec![Subspace::full(1, order)];
    if top >= 1 {
        out.push(Subspace::full(n, order));
    }
    if top >= 2 {
        out.push(a.relations().clone());
    }
    let perp = a.relations().orthogonal_complement();
    for i in 3..=top {
        let next = next_syzygy(a, &perp, &out[i - 1], i);
        out.push(next);
    }
    Ok(out)
}

/// `K^i_i = ⋂_{s+t+2=i} V^{⊗s}⊗R⊗V^{⊗t}` as a subspace of `V^{⊗i}`.
pub fn koszul_syzygy_space(a: &QuadraticAlgebra, i: usize, cap: usize) -> Result<Subspace> {
    Ok(syzygy_spaces(a, i, cap)?.pop().expect("nonempty"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulDegree {
    pub degree: usize,
    pub syzygy_dim: usize,
    pub dual_dim: usize,
    pub dims_match: bool,
    /// `Σ_i (-1)^i dim K^i · dim A_{m-i}`; absent in degree 0.
    pub euler_sum: Option<i64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulReport {
    pub max_degree: usize,
    pub hilbert: Vec<usize>,
    pub degrees: Vec<KoszulDegree>,
    pub passed: bool,
}

/// Numerical shadow of Koszulity up to degree `n_max`: `dim K^i = dim A^!_i`
/// and the Euler characteristic of the would-be linear resolution vanishes.
pub fn koszul_numeric_check(a: &QuadraticAlgebra, n_max: usize, cap: usize) -> Result<KoszulReport> {
    if n_max < 2 {
        return Err(Error::InvalidAlgebra(format!("Koszul check needs a degree of at least 2, got {n_max}")));
    }
    check_cap(n_max, cap)?;
    let k: Vec<usize> = syzygy_spaces(a, n_max, cap)?.iter().map(Subspace::dim).collect();
    let dual = hilbert_function(&quadratic_dual(a), n_max, cap)?;
    let hilbert = hilbert_function(a, n_max, cap)?;
    let degrees: Vec<KoszulDegree> = (0..=n_max)
        .map(|m| {
            let euler_sum =
                (m > 0).then(|| (0..=m).map(|i| if i % 2 == 0 { 1 } else { -1 } * (k[i] * hilbert[m - i]) as i64).sum::<i64>());
            let dims_match = k[m] == dual[m];
            KoszulDegree {
                degree: m,
                syzygy_dim: k[m],
                dual_dim: dual[m],
                dims_match,
                euler_sum,
                passed: dims_match && euler_sum.is_none_or(|s| s == 0),
            }
        })
        .collect();
    let passed = degrees.iter().all(|d| d.passed);
    Ok(KoszulReport { max_degree: n_max, hilbert, degrees, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedalg::tests::commutative;
    use crate::gradedalg::{hilbert_function, NcPolynomial};
    use crate::linalg::Echelon;

    /// Literal intersection of the spaces `V^{⊗s}⊗R⊗V^{⊗t}`.
    fn intersection_oracle(a: &QuadraticAlgebra, i: usize) -> Subspace {
        let n = a.n();
        let dim = n.pow(i as u32);
        let mut acc = Subspace::full(dim, a.order());
        for s in 0..=i - 2 {
            let t = i - 2 - s;
            let mut e = Echelon::new(dim, a.order());
            for left in 0..n.pow(s as u32) {
                for right in 0..n.pow(t as u32) {
                    for rho in a.relations().basis() {
                        e.insert(&rho.map_indices(|k| (left * n * n + k) * n.pow(t as u32) + right));
                    }
                }
            }
            acc = acc.intersect(&Subspace::from_echelon(e)).unwrap();
        }
        acc
    }

    #[test]
    fn matches_intersection() {
        let s = crate::fixtures::example_s().0;
        for a in [commutative(2), commutative(3), s] {
            for i in 2..=5 {
                assert_eq!(koszul_syzygy_space(&a, i, 8).unwrap(), intersection_oracle(&a, i), "i = {i}");
            }
        }
    }

    #[test]
    fn examples() {
        let k2 = koszul_syzygy_space(&commutative(2), 2, 8).unwrap();
        assert_eq!(k2.dim(), 1);
        let f = NcPolynomial::from_vector(&k2.basis()[0], 2, 2, 1);
        assert_eq!(f.render(&["x".into(), "y".into()]), "x y - y x");
        let s = crate::fixtures::example_s().0;
        assert_eq!(koszul_syzygy_space(&s, 4, 8).unwrap().dim(), 1);
        assert_eq!(koszul_syzygy_space(&s, 5, 8).unwrap().dim(), 0);
        assert_eq!(koszul_syzygy_space(&s, 0, 8).unwrap().dim(), 1);
        assert_eq!(koszul_syzygy_space(&s, 1, 8).unwrap().dim(), 4);
    }

    #[test]
    fn numeric_check_examples() {
        let rep = koszul_numeric_check(&commutative(2), 4, 8).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.degrees.iter().map(|d| d.syzygy_dim).collect::<Vec<_>>(), vec![1, 2, 1, 0, 0]);

        let free = QuadraticAlgebra::free(vec!["x".into(), "y".into()]);
        let rep = koszul_numeric_check(&free, 3, 8).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.degrees.iter().map(|d| d.syzygy_dim).collect::<Vec<_>>(), vec![1, 2, 0, 0]);

        assert!(koszul_numeric_check(&free, 1, 8).is_err());
    }

    #[test]
    fn example_passes_to_six() {
        let s = crate::fixtures::example_s().0;
        let rep = koszul_numeric_check(&s, 6, 8).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.hilbert, hilbert_function(&s, 6, 8).unwrap());
    }
}
