//! Quivers, paths and homogeneous quiver-with-relations presentations.
//!
//! Paths compose left to right: `p·q` is defined when `target(p) = source(q)`
//! and means "traverse `p`, then `q`". Paths are graded by the sum of their
//! arrow grades; trivial paths `e_v` have grade 0.

mod dimension;
mod engine;
mod export;
mod normalize;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub(crate) use dimension::{bucket_dimension, check_cap, finite_dimensionality_with};
pub use dimension::{
    finite_dimensionality, graded_dimension, graded_dimension_between, FiniteDimReport, FiniteStatus, GradedDimension,
};
pub use engine::GradedQuotient;
pub use export::{dot_export, json_export, parse_presentation, render_relation, text_export, PresentationJson};
pub use normalize::{equal_after_relabel, normalize, relabel_maps_by_names};

use crate::error::{Error, Result};
use crate::field::Cyclotomic;

/// Vertex label: a plain index, a `(layer, character)` pair, or a name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexLabel {
    Index(i64),
    Pair(i64, i64),
    Name(String),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Index(i) => write!(f, "{i}"),
            VertexLabel::Pair(i, c) => write!(f, "({i},{c})"),
            VertexLabel::Name(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub grade: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<VertexLabel>,
    pub arrows: Vec<Arrow>,
}

/// A path: a start vertex and a composable arrow sequence (by arrow index).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { start: v, arrows: Vec::new() }
    }

    pub fn new(start: usize, arrows: Vec<usize>) -> Self {
        Path { start, arrows }
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Concatenation; the caller checks composability.
    pub fn then(&self, other: &Path) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Path { start: self.start, arrows }
    }

    pub fn then_arrow(&self, a: usize) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Path { start: self.start, arrows }
    }
}

impl Quiver {
    pub fn new() -> Self {
        Quiver::default()
    }

    pub fn with_vertices(vertices: Vec<VertexLabel>) -> Self {
        Quiver { vertices, arrows: Vec::new() }
    }

    pub fn add_vertex(&mut self, label: VertexLabel) -> usize {
        self.vertices.push(label);
        self.vertices.len() - 1
    }

    pub fn add_arrow(&mut self, name: impl Into<String>, source: usize, target: usize, grade: usize) -> usize {
        assert!(source < self.vertices.len() && target < self.vertices.len(), "arrow endpoint out of range");
        assert!(grade >= 1, "arrow grade must be positive");
        self.arrows.push(Arrow { name: name.into(), source, target, grade });
        self.arrows.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, label: &VertexLabel) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn target(&self, p: &Path) -> usize {
        p.arrows.last().map_or(p.start, |&a| self.arrows[a].target)
    }

    pub fn grade(&self, p: &Path) -> usize {
        p.arrows.iter().map(|&a| self.arrows[a].grade).sum()
    }

    pub fn max_arrow_grade(&self) -> usize {
        self.arrows.iter().map(|a| a.grade).max().unwrap_or(1)
    }

    pub fn all_grade_one(&self) -> bool {
        self.arrows.iter().all(|a| a.grade == 1)
    }

    pub fn is_valid_path(&self, p: &Path) -> bool {
        if p.start >= self.vertices.len() {
            return false;
        }
        let mut at = p.start;
        for &a in &p.arrows {
            match self.arrows.get(a) {
                Some(arrow) if arrow.source == at => at = arrow.target,
                _ => return false,
            }
        }
        true
    }

    /// All paths of total grade `m`, sorted by (start vertex, arrow sequence).
    pub fn paths(&self, m: usize) -> Vec<Path> {
        self.paths_up_to(m).pop().unwrap_or_default()
    }

    /// Paths grouped by grade `0..=m`, each group sorted.
    pub fn paths_up_to(&self, m: usize) -> Vec<Vec<Path>> {
        let mut by_grade: Vec<Vec<Path>> = Vec::with_capacity(m + 1);
        by_grade.push((0..self.vertices.len()).map(Path::trivial).collect());
        for g in 1..=m {
            let mut out = Vec::new();
            for (ai, a) in self.arrows.iter().enumerate() {
                if a.grade > g {
                    continue;
                }
                for p in &by_grade[g - a.grade] {
                    if self.target(p) == a.source {
                        out.push(p.then_arrow(ai));
                    }
                }
            }
            out.sort();
            by_grade.push(out);
        }
        by_grade
    }

    /// Grade-`m` paths, optionally filtered by endpoints.
    pub fn path_basis(&self, m: usize, source: Option<usize>, target: Option<usize>) -> Vec<Path> {
        self.paths(m)
            .into_iter()
            .filter(|p| source.is_none_or(|s| p.start == s) && target.is_none_or(|t| self.target(p) == t))
            .collect()
    }

    /// Same vertices, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source, grade: a.grade })
                .collect(),
        }
    }
}

/// Linear combination of parallel paths of equal grade.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathPolynomial {
    terms: Vec<(Path, Cyclotomic)>,
}

impl PathPolynomial {
    /// Merges repeated paths and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (Path, Cyclotomic)>) -> Self {
        let mut acc: BTreeMap<Path, Cyclotomic> = BTreeMap::new();
        for (p, c) in terms {
            match acc.get_mut(&p) {
                Some(x) => *x += &c,
                None => {
                    acc.insert(p, c);
                }
            }
        }
        PathPolynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(Path, Cyclotomic)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Option<u32> {
        self.terms.first().map(|(_, c)| c.order())
    }

    pub fn leading(&self) -> Option<&(Path, Cyclotomic)> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        PathPolynomial::from_terms(self.terms.iter().map(|(p, x)| (p.clone(), x * c)))
    }

    pub fn map_paths(&self, f: impl Fn(&Path) -> Path) -> Self {
        PathPolynomial::from_terms(self.terms.iter().map(|(p, c)| (f(p), c.clone())))
    }

    /// `(source, target, grade)`, assuming the polynomial is nonzero and valid in `q`.
    pub fn signature(&self, q: &Quiver) -> Option<(usize, usize, usize)> {
        self.terms.first().map(|(p, _)| (p.start, q.target(p), q.grade(p)))
    }

    pub fn embed(&self, order: u32) -> Result<Self> {
        Ok(PathPolynomial { terms: self.terms.iter().map(|(p, c)| Ok((p.clone(), c.embed(order)?))).collect::<Result<_>>()? })
    }
}

/// A quiver with homogeneous relations over `Q(ζ_order)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub quiver: Quiver,
    relations: Vec<PathPolynomial>,
    order: u32,
}

impl QuiverPresentation {
    /// Validates every relation (composable paths, common endpoints and
    /// grade, coefficients in `Q(ζ_order)`); zero relations are dropped.
    pub fn new(quiver: Quiver, relations: Vec<PathPolynomial>, order: u32) -> Result<Self> {
        let mut kept = Vec::with_capacity(relations.len());
        for (k, rel) in relations.into_iter().enumerate() {
            if rel.is_zero() {
                continue;
            }
            let mut sig = None;
            for (p, c) in rel.terms() {
                if c.order() != order {
                    return Err(Error::OrderMismatch(c.order(), order));
                }
                if !quiver.is_valid_path(p) {
                    return Err(Error::InvalidPresentation(format!("relation {k}: path {:?} does not compose", p.arrows)));
                }
                if p.is_trivial() {
                    return Err(Error::InvalidPresentation(format!("relation {k}: trivial paths cannot appear in relations")));
                }
                let s = (p.start, quiver.target(p), quiver.grade(p));
                match sig {
                    None => sig = Some(s),
                    Some(prev) if prev != s => {
                        return Err(Error::InvalidPresentation(format!(
                            "relation {k} is not homogeneous: terms {prev:?} and {s:?}"
                        )))
                    }
                    _ => {}
                }
            }
            kept.push(rel);
        }
        Ok(QuiverPresentation { quiver, relations: kept, order })
    }

    pub fn free(quiver: Quiver, order: u32) -> Self {
        QuiverPresentation { quiver, relations: Vec::new(), order }
    }

    pub fn relations(&self) -> &[PathPolynomial] {
        &self.relations
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Same presentation over `Q(ζ_target)`.
    pub fn embed(&self, target: u32) -> Result<Self> {
        Ok(QuiverPresentation {
            quiver: self.quiver.clone(),
            relations: self.relations.iter().map(|r| r.embed(target)).collect::<Result<_>>()?,
            order: target,
        })
    }

    /// Opposite algebra: arrows reversed, relation paths read backwards.
    pub fn opposite(&self) -> QuiverPresentation {
        let q = &self.quiver;
        let relations = self
            .relations
            .iter()
            .map(|r| {
                r.map_paths(|p| {
                    let end = q.target(p);
                    Path::new(end, p.arrows.iter().rev().copied().collect())
                })
            })
            .collect();
        QuiverPresentation { quiver: q.opposite(), relations, order: self.order }
    }

    /// Relations grouped by `(source, target, grade)`.
    pub fn relation_buckets(&self) -> BTreeMap<(usize, usize, usize), Vec<&PathPolynomial>> {
        let mut out: BTreeMap<_, Vec<_>> = BTreeMap::new();
        for r in &self.relations {
            if let Some(sig) = r.signature(&self.quiver) {
                out.entry(sig).or_default().push(r);
            }
        }
        out
    }
}
