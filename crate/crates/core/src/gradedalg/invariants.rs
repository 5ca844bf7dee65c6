use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{action_check, DiagonalAction, QuadraticAlgebra};
use crate::error::{Error, Result};
use crate::field::Cyclotomic;
use crate::quiver::check_cap;

/// `w ↦ dim` of the weight-`w` part of `A_m`, counted on the normal words.
pub fn weight_block_dims(a: &QuadraticAlgebra, act: &DiagonalAction, m: usize, cap: usize) -> Result<BTreeMap<u32, usize>> {
    check_cap(m, cap)?;
    stable_or_err(a, act)?;
    let mut gq = a.engine(Some(act));
    let mut out = BTreeMap::new();
    for p in gq.basis(m) {
        *out.entry(act.word_weight(&p.arrows)).or_insert(0) += 1;
    }
    Ok(out)
}

fn stable_or_err(a: &QuadraticAlgebra, act: &DiagonalAction) -> Result<()> {
    let chk = action_check(a, act)?;
    match chk.violation {
        Some(v) if !chk.stable => Err(Error::ActionNotStable(v)),
        _ => Ok(()),
    }
}

/// `dim (A^G)_m = (1/r) Σ_p tr(g^p | A_m)` for `m = 0..=N`, evaluated exactly
/// in `Q(ζ_r)`.
pub fn invariant_hilbert_function(a: &QuadraticAlgebra, act: &DiagonalAction, n_max: usize, cap: usize) -> Result<Vec<usize>> {
    check_cap(n_max, cap)?;
    stable_or_err(a, act)?;
    let r = act.r();
    let mut gq = a.engine(Some(act));
    let mut out = Vec::with_capacity(n_max + 1);
    for m in 0..=n_max {
        let mut blocks: BTreeMap<u32, i64> = BTreeMap::new();
        for p in gq.basis(m) {
            *blocks.entry(act.word_weight(&p.arrows)).or_insert(0) += 1;
        }
        let dim: i64 = blocks.values().sum();
        let mut total = Cyclotomic::zero(r);
        for p in 0..r as i64 {
            for (&w, &d) in &blocks {
                total += &(Cyclotomic::root_of_unity(r, p * w as i64) * Cyclotomic::from_int(r, d));
            }
        }
        let q = total
            .as_rational()
            .map(|q| q / num_rational::BigRational::from_integer((r as i64).into()))
            .ok_or_else(|| Error::Internal(format!("trace sum in degree {m} is not rational: {total}")))?;
        if !q.denom().is_one() || q.is_negative() {
            return Err(Error::Internal(format!("invariant dimension in degree {m} is {q}")));
        }
        let v = q.to_integer().to_i64().filter(|&v| v <= dim || q.is_zero());
        match v {
            Some(v) => out.push(v as usize),
            None => return Err(Error::Internal(format!("invariant dimension {q} exceeds dim A_{m} = {dim}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedalg::{graded_component, hilbert_function};

    #[test]
    fn example_values() {
        let (s, g) = crate::fixtures::example_s();
        let inv = invariant_hilbert_function(&s, &g, 4, 8).unwrap();
        assert_eq!(inv[0], 1);
        assert_eq!(inv[1], 1);
        // Oracle: count weight-zero transversal words of the full reduction.
        for (m, &v) in inv.iter().enumerate() {
            let gc = graded_component(&s, m, 8).unwrap();
            let count = gc.transversal.iter().filter(|w| g.word_weight(w.letters()) == 0).count();
            assert_eq!(v, count, "degree {m}");
        }
    }

    #[test]
    fn trivial_group_gives_hilbert_function() {
        let s = crate::fixtures::example_s().0;
        let t = DiagonalAction::trivial(4);
        assert_eq!(invariant_hilbert_function(&s, &t, 4, 8).unwrap(), hilbert_function(&s, 4, 8).unwrap());
    }

    #[test]
    fn blocks_sum_to_dimension() {
        let (s, g) = crate::fixtures::example_s();
        for m in 0..=4 {
            let blocks = weight_block_dims(&s, &g, m, 8).unwrap();
            assert_eq!(blocks.values().sum::<usize>(), hilbert_function(&s, m, 8).unwrap()[m]);
        }
    }

    #[test]
    fn unstable_action_is_rejected() {
        let c = |k| Cyclotomic::from_int(1, k);
        let f = crate::gradedalg::NcPolynomial::from_terms([
            (crate::gradedalg::FreeWord(vec![0, 0]), c(1)),
            (crate::gradedalg::FreeWord(vec![0, 1]), c(1)),
        ]);
        let a = QuadraticAlgebra::new(vec!["x".into(), "y".into()], &[f]).unwrap();
        let g = DiagonalAction::new(3, vec![1, 2]).unwrap();
        assert!(matches!(invariant_hilbert_function(&a, &g, 2, 8), Err(Error::ActionNotStable(_))));
    }
}
