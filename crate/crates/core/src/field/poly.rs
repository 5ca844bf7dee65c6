//! Integer polynomials, just enough to build cyclotomic polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Dense integer polynomial, coefficients from the constant term upwards.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = -BigInt::one();
        c[n] = BigInt::one();
        IntPoly(c)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly(out).trim()
    }

    /// Division by a monic divisor. Returns (quotient, remainder).
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let d = divisor.degree();
        assert!(divisor.0[d].is_one(), "divisor must be monic");
        let mut rem = self.0.clone();
        if rem.len() <= d {
            return (IntPoly(vec![BigInt::zero()]), IntPoly(rem).trim());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let c = std::mem::take(&mut rem[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                rem[k - d + i] -= &c * &divisor.0[i];
            }
            quot[k - d] = c;
        }
        rem.truncate(d.max(1));
        (IntPoly(quot).trim(), IntPoly(rem).trim())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

pub(crate) fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

/// The `r`-th cyclotomic polynomial, by exact division of `x^r - 1` by
/// `Φ_d` for every proper divisor `d` of `r`.
pub fn cyclotomic_polynomial(r: usize) -> IntPoly {
    assert!(r >= 1, "cyclotomic_polynomial: r must be positive");
    let mut p = IntPoly::x_pow_minus_one(r);
    for d in divisors(r) {
        if d == r {
            continue;
        }
        let (q, rem) = p.div_rem_monic(&cyclotomic_polynomial(d));
        debug_assert!(rem.is_zero());
        p = q;
    }
    p
}

/// Euler's totient, equal to the degree of `Φ_r`.
pub fn totient(r: usize) -> usize {
    (1..=r).filter(|k| num_integer::gcd(*k, r) == 1).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &IntPoly) -> Vec<i64> {
        p.0.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(ints(&cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn phi_12_by_hand() {
        // x^12 - 1 = Φ1 Φ2 Φ3 Φ4 Φ6 Φ12, with the smaller factors written out.
        let phi1 = IntPoly(vec![(-1).into(), 1.into()]);
        let phi2 = IntPoly(vec![1.into(), 1.into()]);
        let phi3 = IntPoly(vec![1.into(), 1.into(), 1.into()]);
        let phi4 = IntPoly(vec![1.into(), 0.into(), 1.into()]);
        let phi6 = IntPoly(vec![1.into(), (-1).into(), 1.into()]);
        let prod = phi1.mul(&phi2).mul(&phi3).mul(&phi4).mul(&phi6);
        let (q, rem) = IntPoly::x_pow_minus_one(12).div_rem_monic(&prod);
        assert!(rem.is_zero());
        assert_eq!(ints(&q), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn divides_x_pow_minus_one() {
        for r in 1..=60 {
            let phi = cyclotomic_polynomial(r);
            assert_eq!(phi.degree(), totient(r), "degree of Φ_{r}");
            let (_, rem) = IntPoly::x_pow_minus_one(r).div_rem_monic(&phi);
            assert!(rem.is_zero(), "Φ_{r} does not divide x^{r} - 1");
        }
    }
}
