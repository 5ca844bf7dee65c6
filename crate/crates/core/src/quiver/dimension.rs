use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{GradedQuotient, Path, QuiverPresentation};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec, Subspace};
use crate::par;

/// Degree-`m` piece of `kQ/I` computed from scratch in the full path space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDimension {
    pub grade: usize,
    pub dim: usize,
    /// All grade-`m` paths, in the column order used by `ideal_span`.
    pub paths: Vec<Path>,
    pub ideal_span: Subspace,
    /// Non-pivot paths: a basis of the quotient.
    pub transversal: Vec<Path>,
}

pub(crate) fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        Err(Error::DegreeCap { requested: m, cap })
    } else {
        Ok(())
    }
}

/// Ideal generators `a·ρ·b` of total grade `m` for paths from `s` to `t`.
fn ideal_generators(
    p: &QuiverPresentation,
    by_grade: &[Vec<Path>],
    m: usize,
    s: usize,
    t: usize,
    index: &HashMap<&Path, usize>,
) -> Vec<SparseVec> {
    let q = &p.quiver;
    let mut out = Vec::new();
    for rel in p.relations() {
        let Some((rs, rt, g)) = rel.signature(q) else { continue };
        if g > m {
            continue;
        }
        for ga in 0..=(m - g) {
            let gb = m - g - ga;
            for a in by_grade[ga].iter().filter(|a| a.start == s && q.target(a) == rs) {
                for b in by_grade[gb].iter().filter(|b| b.start == rt && q.target(b) == t) {
                    out.push(SparseVec::from_entries(rel.terms().iter().map(|(path, c)| {
                        let full = a.then(path).then(b);
                        (index[&full], c.clone())
                    })));
                }
            }
        }
    }
    out
}

pub(crate) fn bucket_dimension(
    p: &QuiverPresentation,
    m: usize,
    s: usize,
    t: usize,
    by_grade: &[Vec<Path>],
) -> (Vec<Path>, Echelon) {
    let q = &p.quiver;
    let paths: Vec<Path> = by_grade[m].iter().filter(|x| x.start == s && q.target(x) == t).cloned().collect();
    let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let gens = ideal_generators(p, by_grade, m, s, t, &index);
    let mut e = Echelon::new(paths.len(), p.order());
    e.extend(gens.iter());
    (paths, e)
}

/// Dimension of the `(s, t)` block of grade `m`.
pub fn graded_dimension_between(p: &QuiverPresentation, m: usize, s: usize, t: usize) -> usize {
    let by_grade = p.quiver.paths_up_to(m);
    let (paths, e) = bucket_dimension(p, m, s, t, &by_grade);
    paths.len() - e.rank()
}

/// `dim (kQ/I)_m` by reducing the span of all `a·ρ·b` in the grade-`m`
/// path space, one `(source, target)` block at a time.
pub fn graded_dimension(p: &QuiverPresentation, m: usize, cap: usize) -> Result<GradedDimension> {
    check_cap(m, cap)?;
    let q = &p.quiver;
    let by_grade = q.paths_up_to(m);
    let all = by_grade[m].clone();
    let global: HashMap<&Path, usize> = all.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut pairs: Vec<(usize, usize)> = all.iter().map(|x| (x.start, q.target(x))).collect();
    pairs.sort_unstable();
    pairs.dedup();

    let blocks = par::map(&pairs, |&(s, t)| bucket_dimension(p, m, s, t, &by_grade));
    let mut rows: Vec<SparseVec> = Vec::new();
    let mut transversal = Vec::new();
    for (paths, e) in blocks {
        let free = e.free_columns();
        transversal.extend(free.into_iter().map(|i| paths[i].clone()));
        rows.extend(e.into_rows().into_iter().map(|r| r.map_indices(|i| global[&paths[i]])));
    }
    rows.sort_by_key(|r| r.leading().map(|(i, _)| i));
    transversal.sort();
    let ideal_span = Subspace::from_rref_rows(all.len(), p.order(), rows);
    Ok(GradedDimension { grade: m, dim: all.len() - ideal_span.dim(), paths: all, ideal_span, transversal })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiniteStatus {
    Finite,
    UnknownAtBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteDimReport {
    pub status: FiniteStatus,
    pub per_degree_dims: Vec<usize>,
    pub total_dim: Option<usize>,
    pub bound_used: usize,
}

impl FiniteDimReport {
    pub fn is_finite(&self) -> bool {
        self.status == FiniteStatus::Finite
    }

    pub fn top_grade(&self) -> Option<usize> {
        self.is_finite().then(|| self.per_degree_dims.len().saturating_sub(1))
    }
}

/// Scans `dim (kQ/I)_m` for `m = 0, 1, …, bound`.
///
/// With all arrows of grade 1 a zero grade forces every later grade to
/// vanish, so the scan stops there. With mixed grades the scan runs to the
/// bound and the answer is finite when the last `max arrow grade`
/// consecutive grades vanish (every longer path has a prefix in that window).
pub fn finite_dimensionality(p: &QuiverPresentation, bound: usize) -> FiniteDimReport {
    let mut gq = GradedQuotient::new(p);
    finite_dimensionality_with(&mut gq, bound)
}

pub(crate) fn finite_dimensionality_with(gq: &mut GradedQuotient, bound: usize) -> FiniteDimReport {
    let q = &gq.presentation().quiver;
    let early_stop = q.all_grade_one();
    let window = q.max_arrow_grade();
    let mut dims = Vec::new();
    for m in 0..=bound {
        let d = gq.dim(m);
        if d == 0 && early_stop {
            let total = dims.iter().sum();
            return FiniteDimReport {
                status: FiniteStatus::Finite,
                per_degree_dims: dims,
                total_dim: Some(total),
                bound_used: bound,
            };
        }
        dims.push(d);
    }
    if !early_stop && dims.len() >= window && dims[dims.len() - window..].iter().all(|&d| d == 0) {
        while dims.last() == Some(&0) {
            dims.pop();
        }
        let total = dims.iter().sum();
        return FiniteDimReport {
            status: FiniteStatus::Finite,
            per_degree_dims: dims,
            total_dim: Some(total),
            bound_used: bound,
        };
    }
    FiniteDimReport { status: FiniteStatus::UnknownAtBound, per_degree_dims: dims, total_dim: None, bound_used: bound }
}
