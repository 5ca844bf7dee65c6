//! Exact computer algebra for quotient singularities of noncommutative
//! quadratic algebras by diagonal cyclic groups.
//!
//! The crate builds, from a quadratic algebra `S = T(V)/(R)` with a diagonal
//! action of `G = Z/r`, the chain of quiver presentations
//! `S*G`, `S*G/(e)`, `S^!`, `∇(S^!)`, `G*∇(S^!)` and the corner algebra
//! `ẽ'(G*∇(S^!))ẽ'`, together with the numerical checks (Koszul proxies,
//! homological determinant, Frobenius pairing, finite dimensionality) that
//! gate the construction. All arithmetic is exact over `Q(ζ_r)`.

pub mod constructions;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod gradedalg;
pub mod linalg;
pub mod par;
pub mod quiver;

pub use error::{Error, Result};
pub use field::{Cyclotomic, Rational};
