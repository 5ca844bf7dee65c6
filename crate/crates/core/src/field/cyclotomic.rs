use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::cyclotomic_polynomial;
use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Low coefficients of the monic `Φ_r`, so `ζ^d = -Σ phi_low[i] ζ^i`.
#[derive(Debug)]
struct Tables {
    phi_low: Vec<BigRational>,
}

fn tables(order: u32) -> Arc<Tables> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().expect("cyclotomic table cache poisoned").get(&order) {
        return Arc::clone(t);
    }
    let phi = cyclotomic_polynomial(order as usize);
    let d = phi.degree();
    let t = Arc::new(Tables { phi_low: phi.0[..d].iter().map(|c| BigRational::from_integer(c.clone())).collect() });
    cache.write().expect("cyclotomic table cache poisoned").entry(order).or_insert(t).clone()
}

/// Reduce a coefficient vector of arbitrary length modulo `Φ_r`.
fn reduce(order: u32, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let t = tables(order);
    let d = t.phi_low.len();
    for k in (d..v.len()).rev() {
        let c = std::mem::take(&mut v[k]);
        if c.is_zero() {
            continue;
        }
        for (i, p) in t.phi_low.iter().enumerate() {
            if !p.is_zero() {
                v[k - d + i] -= &c * p;
            }
        }
    }
    v.resize(d, BigRational::zero());
    v
}

/// Exact element of `Q(ζ_r)`, stored as its coefficient vector in the power
/// basis `1, ζ, …, ζ^{φ(r)-1}` reduced modulo the cyclotomic polynomial.
///
/// Arithmetic between scalars of different orders is a usage error and
/// panics; embed both into a common field first (see [`Cyclotomic::embed`]).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn degree_of(order: u32) -> usize {
        tables(order).phi_low.len()
    }

    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyclotomic { order, coeffs: vec![BigRational::zero(); Self::degree_of(order)] }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u32, q: BigRational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(n.into()))
    }

    /// Builds `Σ c_k ζ^k` for a coefficient list of any length.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyclotomic { order, coeffs: reduce(order, coeffs) }
    }

    /// `ζ_r^{k mod r}`.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        Self::from_coeffs(order, v)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the scalar lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order, other.order, "cyclotomic order mismatch: embed into a common field first");
    }

    pub fn checked_order(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order, other.order))
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.check_order(other);
        let d = self.coeffs.len();
        if d == 1 {
            return Cyclotomic { order: self.order, coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] };
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclotomic { order: self.order, coeffs: reduce(self.order, prod) }
    }

    /// Multiplicative inverse; fails only on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.coeffs.len();
        if d == 1 {
            return Ok(Cyclotomic { order: self.order, coeffs: vec![self.coeffs[0].recip()] });
        }
        // Solve M b = e_0 where column j of M is self · ζ^j.
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        let zeta = Self::root_of_unity(self.order, 1);
        for _ in 0..d {
            cols.push(cur.coeffs.clone());
            cur = cur.mul_ref(&zeta);
        }
        let mut aug: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or_else(|| Error::Internal("singular multiplication matrix".into()))?;
            aug.swap(col, piv);
            let inv = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        Ok(Cyclotomic { order: self.order, coeffs: aug.into_iter().map(|mut r| r.pop().unwrap()).collect() })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Image under `Q(ζ_r) → Q(ζ_L)`, `ζ_r ↦ ζ_L^{L/r}`; requires `r | L`.
    pub fn embed(&self, target: u32) -> Result<Self> {
        if target == 0 || !target.is_multiple_of(self.order) {
            return Err(Error::OrderMismatch(self.order, target));
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Ok(Self::from_coeffs(target, v))
    }

    /// Multiplicative order of a root of unity, if this is one with order dividing `r`.
    pub fn root_order(&self) -> Option<u32> {
        let mut cur = self.clone();
        for k in 1..=self.order {
            if cur.is_one() {
                return Some(k);
            }
            cur = &cur * self;
        }
        None
    }
}

/// Least common multiple of cyclotomic orders.
pub fn common_order(orders: impl IntoIterator<Item = u32>) -> u32 {
    orders.into_iter().fold(1, |acc, r| acc.lcm(&r))
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [r={}]", self.order)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => format!("z{}", self.order),
                _ => format!("z{}^{k}", self.order),
            };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str(&var)?,
                (_, false) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        self.check_order(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        self.check_order(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = self.mul_ref(rhs);
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $assign:ident) => {
        impl $tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(mut self, rhs: Cyclotomic) -> Cyclotomic {
                self.$assign(&rhs);
                self
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(mut self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$assign(rhs);
                self
            }
        }
    };
}

binop!(Add, add, add_assign);
binop!(Sub, sub, sub_assign);

impl Mul<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.mul_ref(rhs)
    }
}

impl Mul<Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        self.mul_ref(&rhs)
    }
}

impl Mul<&Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.mul_ref(rhs)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::InvalidScalar(format!("bad numerator in `{s}`")))?;
    let d: BigInt = d.parse().map_err(|_| Error::InvalidScalar(format!("bad denominator in `{s}`")))?;
    if d.is_zero() {
        return Err(Error::InvalidScalar(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(Cyclotomic::root_of_unity(2, 1), Cyclotomic::from_int(2, -1));
        assert_eq!(Cyclotomic::root_of_unity(4, 2), Cyclotomic::from_int(4, -1));
        for r in 1..=12 {
            assert!(Cyclotomic::root_of_unity(r, 0).is_one());
            let z = Cyclotomic::root_of_unity(r, 1);
            assert_eq!(z.root_order(), Some(r));
            for k in -3..(r as i64 + 3) {
                let w = Cyclotomic::root_of_unity(r, k);
                assert!(w.pow(r as i64).unwrap().is_one());
            }
        }
    }

    #[test]
    fn basic_arithmetic() {
        let z2 = Cyclotomic::root_of_unity(2, 1);
        assert!((&z2 * &z2).is_one());
        let i = Cyclotomic::root_of_unity(4, 1);
        let one = Cyclotomic::one(4);
        // (1 + i)(1 - i) = 1 - i^2 = 2
        assert_eq!(&(&one + &i) * &(&one - &i), Cyclotomic::from_int(4, 2));
        for r in [3u32, 5, 7, 8, 12] {
            let z = Cyclotomic::root_of_unity(r, 1);
            assert_eq!(z.inv().unwrap(), Cyclotomic::root_of_unity(r, r as i64 - 1));
        }
    }

    #[test]
    fn inverse_of_general_element() {
        let a = Cyclotomic::from_coeffs(5, vec![q(1, 2), q(-3, 1), q(0, 1), q(7, 3)]);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(Cyclotomic::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    #[should_panic(expected = "order mismatch")]
    fn mixing_orders_panics() {
        let _ = Cyclotomic::one(3) + Cyclotomic::one(4);
    }

    #[test]
    fn embedding_preserves_roots() {
        let z3 = Cyclotomic::root_of_unity(3, 1);
        let e = z3.embed(12).unwrap();
        assert_eq!(e, Cyclotomic::root_of_unity(12, 4));
        assert!(z3.embed(10).is_err());
        let a = Cyclotomic::from_coeffs(4, vec![q(1, 1), q(2, 1)]);
        let b = Cyclotomic::from_coeffs(4, vec![q(-1, 3), q(1, 5)]);
        assert_eq!((&a * &b).embed(8).unwrap(), &a.embed(8).unwrap() * &b.embed(8).unwrap());
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::from_int(2, -1).to_string(), "-1");
        assert_eq!(Cyclotomic::root_of_unity(4, 1).to_string(), "z4");
        let a = Cyclotomic::from_coeffs(3, vec![q(1, 2), q(-2, 1)]);
        assert_eq!(a.to_string(), "1/2 - 2*z3");
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-4/6").unwrap(), q(-2, 3));
        assert_eq!(parse_rational("5").unwrap(), q(5, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
