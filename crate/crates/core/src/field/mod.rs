//! Exact scalars: rationals and elements of cyclotomic fields `Q(ζ_r)`.

mod cyclotomic;
mod poly;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) use cyclotomic::parse_rational;
pub use cyclotomic::{common_order, Cyclotomic, Rational};
pub use poly::{cyclotomic_polynomial, totient, IntPoly};

/// Wire form `{ "r": 4, "c": ["1", "-1/2"] }`.
#[derive(Serialize, Deserialize)]
struct ScalarJson {
    r: u32,
    c: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarJson { r: self.order(), c: self.coeffs().iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ScalarJson::deserialize(d)?;
        if raw.r == 0 {
            return Err(D::Error::custom("cyclotomic order r must be positive"));
        }
        let coeffs = raw.c.iter().map(|s| parse_rational(s)).collect::<crate::Result<Vec<_>>>().map_err(D::Error::custom)?;
        Ok(Cyclotomic::from_coeffs(raw.r, coeffs))
    }
}
