use serde::{Deserialize, Serialize};

use super::{action_check, DiagonalAction, FreeWord, NcPolynomial, QuadraticAlgebra};
use crate::error::{Error, Result};
use crate::field::Cyclotomic;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTermJson {
    pub coeff: Cyclotomic,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    pub r: u32,
    pub weights: Vec<i64>,
}

impl TryFrom<ActionJson> for DiagonalAction {
    type Error = Error;

    fn try_from(j: ActionJson) -> Result<Self> {
        let ws = j
            .weights
            .iter()
            .map(|&a| u32::try_from(a).map_err(|_| Error::InvalidAction(format!("weight {a} is outside 1..={}", j.r))))
            .collect::<Result<Vec<_>>>()?;
        DiagonalAction::new(j.r, ws)
    }
}

impl From<DiagonalAction> for ActionJson {
    fn from(a: DiagonalAction) -> Self {
        ActionJson { r: a.r, weights: a.weights.iter().map(|&w| w as i64).collect() }
    }
}

/// File form of an algebra with an optional action. Words list 0-based
/// generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub generators: Vec<String>,
    pub relations: Vec<Vec<WordTermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

/// Serializable form with relations given by the reduced basis of `R`.
pub fn algebra_json(a: &QuadraticAlgebra, act: Option<&DiagonalAction>) -> AlgebraJson {
    AlgebraJson {
        generators: a.generator_names().to_vec(),
        relations: a
            .relation_polynomials()
            .into_iter()
            .map(|f| f.terms().iter().map(|(w, c)| WordTermJson { coeff: c.clone(), word: w.0.clone() }).collect())
            .collect(),
        action: act.cloned().map(ActionJson::from),
        dimension: a.claimed_global_dim(),
    }
}

impl AlgebraJson {
    pub fn into_algebra(self) -> Result<(QuadraticAlgebra, Option<DiagonalAction>)> {
        let j = self;
        let n = j.generators.len();
        let mut polys = Vec::with_capacity(j.relations.len());
        for (k, rel) in j.relations.iter().enumerate() {
            for t in rel {
                if t.word.len() != 2 {
                    return Err(Error::InvalidAlgebra(format!(
                        "relations[{k}]: word {:?} has degree {}, relations must be quadratic",
                        t.word,
                        t.word.len()
                    )));
                }
                if let Some(s) = t.word.iter().find(|&&s| s >= n) {
                    return Err(Error::InvalidAlgebra(format!("relations[{k}]: generator index {s} out of range 0..{n}")));
                }
            }
            polys.push(NcPolynomial::from_terms(rel.iter().map(|t| (FreeWord(t.word.clone()), t.coeff.clone()))));
        }
        let mut a = QuadraticAlgebra::new(j.generators, &polys)?;
        if let Some(d) = j.dimension {
            a = a.with_global_dim(d);
        }
        let act = match j.action {
            None => None,
            Some(aj) => {
                let act = DiagonalAction::try_from(aj)?;
                act.check_len(n)?;
                let chk = action_check(&a, &act)?;
                if !chk.stable {
                    return Err(Error::ActionNotStable(chk.violation.unwrap_or_default()));
                }
                Some(act)
            }
        };
        Ok((a, act))
    }
}

/// Parses and validates an algebra file: quadratic homogeneous relations,
/// one weight per generator, and a relation space stable under the action.
pub fn parse_algebra(text: &str) -> Result<(QuadraticAlgebra, Option<DiagonalAction>)> {
    let j: AlgebraJson = serde_json::from_str(text)
        .map_err(|e| Error::InvalidAlgebra(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    j.into_algebra()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses() {
        let (a, act) = parse_algebra(crate::fixtures::EXAMPLE_S_JSON).unwrap();
        assert_eq!(a.n(), 4);
        assert_eq!(a.relations().dim(), 6);
        let act = act.unwrap();
        assert_eq!(act.r(), 2);
        assert_eq!(act.weights(), [2, 1, 1, 1]);
        assert_eq!(a.claimed_global_dim(), Some(4));
    }

    #[test]
    fn round_trip() {
        let (a, act) = crate::fixtures::example_s();
        let text = serde_json::to_string(&algebra_json(&a, Some(&act))).unwrap();
        let (b, act2) = parse_algebra(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(Some(act), act2);
    }

    #[test]
    fn rejections() {
        let cubic = r#"{"generators":["x","y"],"relations":[[{"coeff":{"r":1,"c":["1"]},"word":[0,0,1]}]]}"#;
        assert!(matches!(parse_algebra(cubic), Err(Error::InvalidAlgebra(_))));
        let weights = r#"{"generators":["a","b","c","d"],"relations":[],"action":{"r":2,"weights":[2,1,1]}}"#;
        assert!(matches!(parse_algebra(weights), Err(Error::InvalidAction(_))));
        let zero = r#"{"generators":["a"],"relations":[],"action":{"r":2,"weights":[0]}}"#;
        assert!(matches!(parse_algebra(zero), Err(Error::InvalidAction(_))));
        let unstable = r#"{"generators":["x","y"],"relations":[[{"coeff":{"r":1,"c":["1"]},"word":[0,0]},{"coeff":{"r":1,"c":["1"]},"word":[0,1]}]],"action":{"r":3,"weights":[1,2]}}"#;
        assert!(matches!(parse_algebra(unstable), Err(Error::ActionNotStable(_))));
        let broken = "{\n  \"generators\": [\"x\"],\n  \"relations\": 3\n}";
        let err = parse_algebra(broken).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }
}
