//! Bundled example: `S = k⟨x1,…,x4⟩` with the six anticommutation-type
//! relations `x1² + x2²`, `x_i x_j + x_j x_i` (`i < j`, `(i,j) ≠ (1,2)`),
//! acted on by `g = diag(1, -1, -1, -1)`.

use crate::gradedalg::{parse_algebra, DiagonalAction, QuadraticAlgebra};

pub const EXAMPLE_S_JSON: &str = include_str!("../fixtures/example_s.json");

/// The bundled algebra (global dimension 4) and its `Z/2` action.
pub fn example_s() -> (QuadraticAlgebra, DiagonalAction) {
    let (a, act) = parse_algebra(EXAMPLE_S_JSON).expect("bundled fixture is valid");
    (a, act.expect("bundled fixture carries an action"))
}
