//! Quiver presentations attached to a quadratic algebra with a diagonal
//! cyclic action: the McKay quiver and skew group algebra, its quotient by
//! the trivial idempotent, the Beilinson algebra and its skew group algebra,
//! and corner algebras.

mod corner;
mod pipeline;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gradedalg::{action_check, DiagonalAction, QuadraticAlgebra};
use crate::quiver::{normalize, Path, PathPolynomial, Quiver, QuiverPresentation, VertexLabel};

pub use corner::corner_presentation;
pub use pipeline::{stable_cm_pipeline, Gate, Gates, HdetValue, HilbertData, PipelineOptions, PipelineReport, Stages};

fn mckay_with_names(act: &DiagonalAction, names: &[String]) -> Quiver {
    let r = act.r() as usize;
    let n = names.len();
    let mut q = Quiver::with_vertices((0..r as i64).map(VertexLabel::Index).collect());
    for i in 0..r {
        for (j, name) in names.iter().enumerate() {
            let source = (i + r - act.residue(j) as usize) % r;
            let id = q.add_arrow(name.clone(), source, i, 1);
            debug_assert_eq!(id, i * n + j);
        }
    }
    q
}

/// Vertices `Z/r`; arrow `x_j : i - a_j → i` for every vertex `i` and
/// generator `j`, stored at index `i·n + j`.
pub fn mckay_quiver(act: &DiagonalAction, n: usize) -> Quiver {
    let names: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    mckay_with_names(act, &names)
}

/// The path `φ(x_{s_1}⋯x_{s_m} * ρ_i)` in the McKay quiver: it ends at `i`
/// with the copy `x_{s_m,i}`, and each earlier letter is the copy ending
/// where the next one starts.
pub fn phi(letters: &[usize], end: usize, act: &DiagonalAction) -> Path {
    let r = act.r() as usize;
    let n = act.n();
    let mut arrows = vec![0; letters.len()];
    let mut at = end;
    for (k, &s) in letters.iter().enumerate().rev() {
        arrows[k] = at * n + s;
        at = (at + r - act.residue(s) as usize) % r;
    }
    Path::new(at, arrows)
}

fn require_stable(a: &QuadraticAlgebra, act: &DiagonalAction) -> Result<()> {
    let chk = action_check(a, act)?;
    if chk.stable {
        Ok(())
    } else {
        Err(Error::ActionNotStable(chk.violation.unwrap_or_default()))
    }
}

/// `A*G` as the McKay quiver with relations `φ(f * ρ_i)`.
pub fn skew_group_presentation(a: &QuadraticAlgebra, act: &DiagonalAction) -> Result<QuiverPresentation> {
    require_stable(a, act)?;
    let q = mckay_with_names(act, a.generator_names());
    let mut rels = Vec::new();
    for f in a.relation_polynomials() {
        for i in 0..act.r() as usize {
            rels.push(PathPolynomial::from_terms(f.terms().iter().map(|(w, c)| (phi(w.letters(), i, act), c.clone()))));
        }
    }
    Ok(normalize(&QuiverPresentation::new(q, rels, a.order())?))
}

/// Quotient by the two-sided ideal of the vertex labelled `0`: the vertex,
/// its arrows, and every relation term through it disappear.
pub fn remove_trivial_vertex(p: &QuiverPresentation) -> Result<QuiverPresentation> {
    let q = &p.quiver;
    let zero = q.vertex_index(&VertexLabel::Index(0)).ok_or_else(|| Error::InvalidPresentation("no vertex labelled 0".into()))?;
    let mut out = Quiver::new();
    let mut vmap = vec![None; q.vertex_count()];
    for (v, label) in q.vertices.iter().enumerate() {
        if v != zero {
            vmap[v] = Some(out.add_vertex(label.clone()));
        }
    }
    let mut amap = vec![None; q.arrows.len()];
    for (i, a) in q.arrows.iter().enumerate() {
        if let (Some(s), Some(t)) = (vmap[a.source], vmap[a.target]) {
            amap[i] = Some(out.add_arrow(a.name.clone(), s, t, a.grade));
        }
    }
    let rels = p
        .relations()
        .iter()
        .map(|r| {
            PathPolynomial::from_terms(r.terms().iter().filter_map(|(path, c)| {
                let start = vmap[path.start]?;
                let arrows = path.arrows.iter().map(|&a| amap[a]).collect::<Option<Vec<_>>>()?;
                Some((Path::new(start, arrows), c.clone()))
            }))
        })
        .collect();
    Ok(normalize(&QuiverPresentation::new(out, rels, p.order())?))
}

/// `∇A`: vertices `0..ℓ`, a copy `x_j : i → i+1` of each generator at index
/// `i·n + j`, and each relation laid over `i → i+2`.
pub fn beilinson_presentation(a: &QuadraticAlgebra, ell: usize) -> Result<QuiverPresentation> {
    if ell == 0 {
        return Err(Error::InvalidAlgebra("Beilinson algebra needs ℓ ≥ 1".into()));
    }
    let n = a.n();
    let mut q = Quiver::with_vertices((0..ell as i64).map(VertexLabel::Index).collect());
    for i in 0..ell - 1 {
        for name in a.generator_names() {
            q.add_arrow(name.clone(), i, i + 1, 1);
        }
    }
    let mut rels = Vec::new();
    for f in a.relation_polynomials() {
        for i in 0..ell.saturating_sub(2) {
            rels.push(PathPolynomial::from_terms(f.terms().iter().map(|(w, c)| {
                let arrows = w.letters().iter().enumerate().map(|(k, &s)| (i + k) * n + s).collect();
                (Path::new(i, arrows), c.clone())
            })));
        }
    }
    Ok(normalize(&QuiverPresentation::new(q, rels, a.order())?))
}

/// Direction in which an arrow of weight `w` moves the character index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftSign {
    /// `(i, c) → (i+1, c + w)`
    #[default]
    Plus,
    /// `(i, c) → (i+1, c - w)`
    Minus,
}

/// Skew group algebra of a layered presentation whose arrows are named by
/// generators: vertex `(i, c)` for each vertex `i` and character `c ∈ Z/r`,
/// arrow copies `(i, c) → (i+1, c ± w)` at index `a·r + c`, and each
/// relation lifted once per source character.
pub fn skew_layered_presentation(
    p: &QuiverPresentation,
    generator_names: &[String],
    act: &DiagonalAction,
    sign: LiftSign,
) -> Result<QuiverPresentation> {
    act.check_len(generator_names.len())?;
    let r = act.r() as usize;
    let q = &p.quiver;
    let by_name: HashMap<&str, usize> = generator_names.iter().enumerate().map(|(j, s)| (s.as_str(), j)).collect();
    let shift: Vec<usize> = q
        .arrows
        .iter()
        .map(|a| {
            let j = *by_name.get(a.name.as_str()).ok_or_else(|| Error::UnknownGenerator(a.name.clone()))?;
            let w = act.residue(j) as usize;
            Ok(match sign {
                LiftSign::Plus => w,
                LiftSign::Minus => (r - w) % r,
            })
        })
        .collect::<Result<_>>()?;

    let mut out = Quiver::new();
    for (v, label) in q.vertices.iter().enumerate() {
        let layer = match label {
            VertexLabel::Index(i) => *i,
            _ => v as i64,
        };
        for c in 0..r {
            out.add_vertex(VertexLabel::Pair(layer, c as i64));
        }
    }
    for (ai, a) in q.arrows.iter().enumerate() {
        for c in 0..r {
            out.add_arrow(a.name.clone(), a.source * r + c, a.target * r + (c + shift[ai]) % r, a.grade);
        }
    }
    let lift = |path: &Path, c: usize| -> (Path, usize) {
        let mut at = c;
        let arrows = path
            .arrows
            .iter()
            .map(|&a| {
                let id = a * r + at;
                at = (at + shift[a]) % r;
                id
            })
            .collect();
        (Path::new(path.start * r + c, arrows), at)
    };
    let mut rels = Vec::new();
    for (k, rel) in p.relations().iter().enumerate() {
        for c in 0..r {
            let mut end = None;
            let mut terms = Vec::with_capacity(rel.terms().len());
            for (path, coeff) in rel.terms() {
                let (lifted, at) = lift(path, c);
                if end.is_some_and(|e| e != at) {
                    return Err(Error::ActionNotStable(format!("relation {k} mixes character weights")));
                }
                end = Some(at);
                terms.push((lifted, coeff.clone()));
            }
            rels.push(PathPolynomial::from_terms(terms));
        }
    }
    Ok(normalize(&QuiverPresentation::new(out, rels, p.order())?))
}
