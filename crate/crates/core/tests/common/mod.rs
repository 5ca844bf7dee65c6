//! Generators and property checks shared by the property tests and the
//! acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ncsing::constructions::{
    beilinson_presentation, corner_presentation, remove_trivial_vertex, skew_group_presentation, skew_layered_presentation,
    LiftSign,
};
use ncsing::gradedalg::{
    hdet_diagonal, hilbert_function, invariant_hilbert_function, quadratic_dual, weight_block_dims, DiagonalAction, FreeWord,
    HdetConvention, NcPolynomial, QuadraticAlgebra,
};
use ncsing::linalg::{kernel, rref, Matrix, SparseVec, Subspace};
use ncsing::quiver::{
    equal_after_relabel, finite_dimensionality, graded_dimension, json_export, normalize, parse_presentation, GradedQuotient,
    Path, PathPolynomial, Quiver, QuiverPresentation, VertexLabel,
};
use ncsing::Cyclotomic;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 128;

pub fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `c · ζ_q^k`
fn scalar(q: u32, c: i64, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(q, k) * Cyclotomic::from_int(q, c)
}

/// Relations are drawn inside a single weight class each, so the action is
/// always stable. Coefficients live in `Q(ζ_q)` for `q ∈ {1, 3, 4}`.
pub fn stable_algebra(max_n: usize, max_r: u32) -> impl Strategy<Value = (QuadraticAlgebra, DiagonalAction)> {
    (1..=max_n, 1..=max_r, prop::sample::select(vec![1u32, 3, 4]))
        .prop_flat_map(move |(n, r, q)| {
            let rel = (0..n * n, vec((-2i64..=2, 0i64..4), n * n));
            (Just(n), Just(q), vec(1..=r, n).prop_map(move |ws| DiagonalAction::new(r, ws).unwrap()), vec(rel, 0..=3))
        })
        .prop_map(|(n, q, act, rels)| {
            let polys: Vec<NcPolynomial> = rels
                .into_iter()
                .map(|(pick, coeffs)| {
                    let w = act.index_weight(pick, 2);
                    NcPolynomial::from_terms(
                        (0..n * n)
                            .filter(|&i| act.index_weight(i, 2) == w && coeffs[i].0 != 0)
                            .map(|i| (FreeWord::from_index(i, 2, n), scalar(q, coeffs[i].0, coeffs[i].1))),
                    )
                })
                .filter(|f| !f.is_zero())
                .collect();
            (QuadraticAlgebra::new(names(n), &polys).unwrap(), act)
        })
}

/// `x_j x_i = q_{ij} x_i x_j` with `q_{ij} = ±1`: AS-regular of dimension `n`.
pub fn skew_polynomial(n: usize, signs: &[bool]) -> QuadraticAlgebra {
    let mut rels = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let q = if signs[k % signs.len()] { 1 } else { -1 };
            k += 1;
            rels.push(NcPolynomial::from_terms([
                (FreeWord(vec![j, i]), Cyclotomic::one(1)),
                (FreeWord(vec![i, j]), Cyclotomic::from_int(1, -q)),
            ]));
        }
    }
    QuadraticAlgebra::new(names(n), &rels).unwrap().with_global_dim(n)
}

fn small_vectors(dim: usize, count: usize) -> impl Strategy<Value = Vec<SparseVec>> {
    vec(vec(-3i64..=3, dim), 0..=count).prop_map(|rows| {
        rows.iter().map(|r| SparseVec::from_dense(&r.iter().map(|&x| Cyclotomic::from_int(1, x)).collect::<Vec<_>>())).collect()
    })
}

/// A quiver on up to three vertices with relations that are random, and
/// deliberately unreduced, combinations of grade-2 paths.
fn random_presentation() -> impl Strategy<Value = QuiverPresentation> {
    (1usize..=3)
        .prop_flat_map(|v| (Just(v), vec((0..v, 0..v), 1..=5), vec((any::<prop::sample::Index>(), vec(-2i64..=2, 1..=4)), 0..=4)))
        .prop_map(|(v, arrows, rels)| {
            let mut q = Quiver::with_vertices((0..v as i64).map(VertexLabel::Index).collect());
            for (k, (s, t)) in arrows.into_iter().enumerate() {
                q.add_arrow(format!("a{k}"), s, t, 1);
            }
            let paths = q.paths(2);
            let relations = rels
                .into_iter()
                .filter_map(|(pick, coeffs)| {
                    if paths.is_empty() {
                        return None;
                    }
                    let base = pick.get(&paths);
                    let (s, t) = (base.start, q.target(base));
                    let bucket: Vec<&Path> = paths.iter().filter(|p| p.start == s && q.target(p) == t).collect();
                    let f = PathPolynomial::from_terms(
                        bucket
                            .iter()
                            .zip(coeffs.iter().cycle())
                            .filter(|(_, &c)| c != 0)
                            .map(|(p, &c)| ((*p).clone(), Cyclotomic::from_int(1, c))),
                    );
                    (!f.is_zero()).then_some(f)
                })
                .collect();
            QuiverPresentation::new(q, relations, 1).unwrap()
        })
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn duality_involution(cases: u32) -> Result<(), String> {
    run(cases, stable_algebra(3, 1), |(a, _)| {
        prop_assert_eq!(quadratic_dual(&quadratic_dual(&a)), a);
        Ok(())
    })
}

pub fn dual_dimension(cases: u32) -> Result<(), String> {
    run(cases, stable_algebra(3, 1), |(a, _)| {
        let n = a.n();
        prop_assert_eq!(a.relations().dim() + quadratic_dual(&a).relations().dim(), n * n);
        Ok(())
    })
}

pub fn skew_dimension(cases: u32) -> Result<(), String> {
    run(cases, stable_algebra(3, 4), |(a, act)| {
        let p = skew_group_presentation(&a, &act).unwrap();
        let h = hilbert_function(&a, 4, 8).unwrap();
        for (m, &d) in h.iter().enumerate() {
            prop_assert_eq!(graded_dimension(&p, m, 8).unwrap().dim, act.r() as usize * d, "degree {}", m);
        }
        Ok(())
    })
}

pub fn quotient_is_smaller(cases: u32) -> Result<(), String> {
    run(cases, stable_algebra(3, 3), |(a, act)| {
        let p = skew_group_presentation(&a, &act).unwrap();
        prop_assume!(act.r() > 1);
        let quot = remove_trivial_vertex(&p).unwrap();
        for m in 0..=3 {
            prop_assert!(graded_dimension(&quot, m, 8).unwrap().dim <= graded_dimension(&p, m, 8).unwrap().dim);
        }
        Ok(())
    })
}

pub fn beilinson_dimension(cases: u32) -> Result<(), String> {
    run(cases, (stable_algebra(3, 1), 1usize..=4), |((a, _), ell)| {
        let b = beilinson_presentation(&a, ell).unwrap();
        let h = hilbert_function(&a, ell - 1, 8).unwrap();
        let expected: usize = h.iter().enumerate().map(|(m, d)| (ell - m) * d).sum();
        prop_assert_eq!(finite_dimensionality(&b, 16).total_dim, Some(expected));
        Ok(())
    })
}

/// The corner algebra's own dimension count against the kept-to-kept
/// normal words of the ambient.
pub fn corner_dimension(cases: u32) -> Result<(), String> {
    let strategy = (stable_algebra(3, 3), 1usize..=4, any::<bool>(), vec(any::<bool>(), 12));
    run(cases, strategy, |((a, act), ell, lift, mask)| {
        let b = beilinson_presentation(&a, ell).unwrap();
        let amb = if lift { skew_layered_presentation(&b, a.generator_names(), &act, LiftSign::Plus).unwrap() } else { b };
        let kept: Vec<usize> = (0..amb.quiver.vertex_count()).filter(|&v| mask[v % mask.len()]).collect();
        let kept_set: BTreeSet<usize> = kept.iter().copied().collect();
        let top = finite_dimensionality(&amb, 16).per_degree_dims.len();
        let mut gq = GradedQuotient::new(&amb);
        let mut direct = 0;
        for m in 0..top {
            gq.ensure(m);
            direct += (0..gq.level_basis(m).len())
                .filter(|&i| kept_set.contains(&gq.level_basis(m)[i].start) && kept_set.contains(&gq.basis_end(m, i)))
                .count();
        }
        let gamma = corner_presentation(&amb, &kept, 16).unwrap();
        prop_assert_eq!(finite_dimensionality(&gamma, 16).total_dim, Some(direct));
        Ok(())
    })
}

pub fn modular_law(cases: u32) -> Result<(), String> {
    run(cases, (small_vectors(5, 3), small_vectors(5, 3), small_vectors(5, 3)), |(a, b, extra)| {
        let sa = Subspace::span(5, 1, &a);
        let sb = Subspace::span(5, 1, &b);
        let sc = sa.sum(&Subspace::span(5, 1, &extra)).unwrap();
        let left = sa.sum(&sb).unwrap().intersect(&sc).unwrap();
        let right = sa.sum(&sb.intersect(&sc).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        Ok(())
    })
}

pub fn rref_kernel(cases: u32) -> Result<(), String> {
    run(cases, (1usize..=6).prop_flat_map(|c| (Just(c), small_vectors(c, 5))), |(cols, rows)| {
        let m = Matrix::from_rows(cols, 1, rows).unwrap();
        let (reduced, rank, pivots) = rref(&m);
        let ker = kernel(&m);
        prop_assert_eq!(rank + ker.dim(), cols);
        prop_assert_eq!(pivots.len(), rank);
        for v in ker.basis() {
            prop_assert!(m.apply(v).is_zero());
        }
        // Same row space, and reducing twice changes nothing.
        let span = |x: &Matrix| Subspace::span(cols, 1, x.row_vectors());
        prop_assert_eq!(span(&reduced), span(&m));
        prop_assert_eq!(rref(&reduced).0, reduced);
        Ok(())
    })
}

pub fn normalize_idempotent(cases: u32) -> Result<(), String> {
    run(cases, random_presentation(), |p| {
        let once = normalize(&p);
        prop_assert_eq!(normalize(&once), once.clone());
        for m in 0..=3 {
            prop_assert_eq!(graded_dimension(&once, m, 8).unwrap(), graded_dimension(&p, m, 8).unwrap());
        }
        Ok(())
    })
}

pub fn json_round_trip(cases: u32) -> Result<(), String> {
    run(cases, random_presentation(), |p| {
        let back = parse_presentation(&json_export(&p)).unwrap();
        prop_assert_eq!(normalize(&back), normalize(&p));
        Ok(())
    })
}

/// `(A*G)^o ≅ A^o*G` with vertex `i ↦ -i`.
pub fn opposite_oracle(cases: u32) -> Result<(), String> {
    run(cases, stable_algebra(3, 4), |(a, act)| {
        let r = act.r() as usize;
        let n = a.n();
        let op_of_skew = skew_group_presentation(&a, &act).unwrap().opposite();
        let skew_of_op = skew_group_presentation(&a.opposite(), &act).unwrap();
        let vmap: Vec<usize> = (0..r).map(|v| (r - v) % r).collect();
        let amap: Vec<usize> = (0..r * n).map(|k| ((r - k / n + act.residue(k % n) as usize) % r) * n + k % n).collect();
        prop_assert!(equal_after_relabel(&op_of_skew, &skew_of_op, &vmap, &amap).unwrap());
        Ok(())
    })
}

pub fn hdet_multiplicative(cases: u32) -> Result<(), String> {
    let strategy = (2usize..=3, 1u32..=6, vec(any::<bool>(), 3))
        .prop_flat_map(|(n, r, signs)| (Just(n), Just(r), Just(signs), vec(1..=r as i64, n), vec(1..=r as i64, n)));
    run(cases, strategy, |(n, r, signs, a, b)| {
        let s = skew_polynomial(n, &signs);
        let ab: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let h =
            |w: &[i64]| hdet_diagonal(&s, &DiagonalAction::from_residues(r, w).unwrap(), n, HdetConvention::Direct, 8).unwrap();
        prop_assert_eq!(h(&ab), h(&a) * h(&b));
        Ok(())
    })
}

pub fn invariants_are_weight_zero(cases: u32) -> Result<(), String> {
    run(cases, stable_algebra(3, 4), |(a, act)| {
        let inv = invariant_hilbert_function(&a, &act, 3, 8).unwrap();
        let h = hilbert_function(&a, 3, 8).unwrap();
        for m in 0..=3 {
            let blocks = weight_block_dims(&a, &act, m, 8).unwrap();
            prop_assert_eq!(inv[m], blocks.get(&0).copied().unwrap_or(0));
            prop_assert!(inv[m] <= h[m]);
        }
        Ok(())
    })
}

/// The property checks in a fixed order, for runners that report by name.
pub type Check = fn(u32) -> Result<(), String>;

pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        ("duality involution", duality_involution),
        ("relation and dual dimensions", dual_dimension),
        ("skew dimension identity", skew_dimension),
        ("quotient is smaller", quotient_is_smaller),
        ("beilinson dimension", beilinson_dimension),
        ("corner dimension agreement", corner_dimension),
        ("modular law", modular_law),
        ("rref and kernel", rref_kernel),
        ("normalize idempotence", normalize_idempotent),
        ("json round trip", json_round_trip),
        ("opposite algebra", opposite_oracle),
        ("hdet multiplicativity", hdet_multiplicative),
        ("invariants are weight zero", invariants_are_weight_zero),
    ]
}
