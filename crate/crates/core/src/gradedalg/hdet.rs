use serde::{Deserialize, Serialize};

use super::{syzygy_spaces, DiagonalAction, QuadraticAlgebra};
use crate::error::{Error, Result};
use crate::field::Cyclotomic;

/// Which power of `ζ_r` is reported for the weight `w` of `K^d`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HdetConvention {
    /// `ζ_r^w`
    #[default]
    Direct,
    /// `ζ_r^{-w}`
    Inverse,
}

/// Homological determinant of a diagonal automorphism, read off as the
/// scalar by which `g` acts on the line `K^d_d ⊆ V^{⊗d}`.
pub fn hdet_diagonal(
    a: &QuadraticAlgebra,
    act: &DiagonalAction,
    d: usize,
    convention: HdetConvention,
    cap: usize,
) -> Result<Cyclotomic> {
    act.check_len(a.n())?;
    let ks = syzygy_spaces(a, d + 1, cap)?;
    let (top, beyond) = (&ks[d], &ks[d + 1]);
    if top.dim() != 1 {
        return Err(Error::SocleNotOneDimensional { degree: d, dim: top.dim() });
    }
    if !beyond.is_zero() {
        return Err(Error::SocleNotOneDimensional { degree: d + 1, dim: beyond.dim() });
    }
    let mut weights = top.basis()[0].iter().map(|(i, _)| act.index_weight(i, d));
    let w = weights.next().expect("nonzero vector");
    if weights.any(|x| x != w) {
        return Err(Error::SocleNotHomogeneous(d));
    }
    let exp = match convention {
        HdetConvention::Direct => w as i64,
        HdetConvention::Inverse => -(w as i64),
    };
    Ok(Cyclotomic::root_of_unity(act.r(), exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedalg::tests::commutative;

    #[test]
    fn example_has_trivial_hdet() {
        let (s, g) = crate::fixtures::example_s();
        let h = hdet_diagonal(&s, &g, 4, HdetConvention::Direct, 8).unwrap();
        assert!(h.is_one());
        // det g = -1 here, so hdet and det differ.
        assert_eq!(g.weights().iter().map(|&a| a as i64).sum::<i64>() % 2, 1);
    }

    #[test]
    fn commutative_gives_det() {
        for d in 1..=3 {
            let a = commutative(d);
            for r in 1..=5u32 {
                let ws: Vec<i64> = (0..d as i64).map(|j| 1 + (j * 2) % r as i64).collect();
                let g = DiagonalAction::from_residues(r, &ws).unwrap();
                let h = hdet_diagonal(&a, &g, d, HdetConvention::Direct, 8).unwrap();
                assert_eq!(h, Cyclotomic::root_of_unity(r, ws.iter().sum()));
                let inv = hdet_diagonal(&a, &g, d, HdetConvention::Inverse, 8).unwrap();
                assert!((h * inv).is_one());
            }
        }
    }

    #[test]
    fn trivial_action() {
        let a = commutative(3);
        assert!(hdet_diagonal(&a, &DiagonalAction::trivial(3), 3, HdetConvention::Direct, 8).unwrap().is_one());
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let a = commutative(2);
        let g = DiagonalAction::trivial(2);
        assert_eq!(hdet_diagonal(&a, &g, 1, HdetConvention::Direct, 8), Err(Error::SocleNotOneDimensional { degree: 1, dim: 2 }));
        assert_eq!(hdet_diagonal(&a, &g, 3, HdetConvention::Direct, 8), Err(Error::SocleNotOneDimensional { degree: 3, dim: 0 }));
    }
}
