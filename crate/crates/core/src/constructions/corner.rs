use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::{kernel, Echelon, Matrix, SparseVec};
use crate::quiver::{
    bucket_dimension, finite_dimensionality, finite_dimensionality_with, normalize, GradedQuotient, Path, PathPolynomial, Quiver,
    QuiverPresentation,
};

struct Generator {
    grade: usize,
    source: usize,
    target: usize,
    nf: SparseVec,
}

/// Presentation of `eBe` for `e = Σ_{v ∈ kept} e_v`, where `B` is the
/// finite-dimensional algebra presented by `p`.
///
/// Generators are chosen grade by grade: in each bucket the ambient paths
/// are scanned in order and a path becomes a new arrow when its class is not
/// a product of lower generators or an earlier pick; its name is the
/// concatenation of the ambient arrow names. Relations are the kernel of the
/// induced map from the new path algebra, minus what lower relations already
/// generate.
pub fn corner_presentation(p: &QuiverPresentation, kept: &[usize], bound: usize) -> Result<QuiverPresentation> {
    let q = &p.quiver;
    if let Some(&v) = kept.iter().find(|&&v| v >= q.vertex_count()) {
        return Err(Error::InvalidPresentation(format!("kept vertex {v} does not exist")));
    }
    let mut gq = GradedQuotient::new(p);
    let rep = finite_dimensionality_with(&mut gq, bound);
    if !rep.is_finite() {
        return Err(Error::NotFiniteDimensional(bound));
    }
    let top = rep.per_degree_dims.len().saturating_sub(1);
    let kept: BTreeSet<usize> = kept.iter().copied().collect();
    let order = p.order();

    let mut gamma = Quiver::new();
    let mut vmap = BTreeMap::new();
    for &v in &kept {
        vmap.insert(v, gamma.add_vertex(q.vertices[v].clone()));
    }

    // Corner basis: per grade, level-basis indices grouped by kept bucket.
    let mut corner: Vec<BTreeMap<(usize, usize), Vec<usize>>> = Vec::with_capacity(top + 1);
    let mut expected_total = 0;
    for m in 0..=top {
        let mut buckets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, path) in gq.level_basis(m).iter().enumerate() {
            let end = gq.basis_end(m, i);
            if kept.contains(&path.start) && kept.contains(&end) {
                buckets.entry((path.start, end)).or_default().push(i);
                expected_total += 1;
            }
        }
        corner.push(buckets);
    }

    let mut gens: Vec<Generator> = Vec::new();
    for m in 1..=top {
        let level_dim = gq.level_basis(m).len();
        let mut ambient_paths: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
        for path in q.paths(m) {
            let (s, t) = (path.start, q.target(&path));
            if corner[m].contains_key(&(s, t)) {
                ambient_paths.entry((s, t)).or_default().push(path);
            }
        }
        let buckets: Vec<((usize, usize), usize)> = corner[m].iter().map(|(k, v)| (*k, v.len())).collect();
        for ((s, t), dim) in buckets {
            let mut e = Echelon::new(level_dim, order);
            for g in gens.iter().filter(|g| g.source == s && g.grade < m) {
                let rest = m - g.grade;
                if let Some(tail) = corner[rest].get(&(g.target, t)) {
                    for &b in tail {
                        let prod = gq.multiply(g.grade, &g.nf, rest, &SparseVec::unit(b, order));
                        e.insert(&prod);
                    }
                }
            }
            for path in ambient_paths.remove(&(s, t)).unwrap_or_default() {
                if e.rank() == dim {
                    break;
                }
                let nf = gq.normal_form(&path);
                if e.insert(&nf).is_some() {
                    let name: String = path.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect();
                    gamma.add_arrow(name, vmap[&s], vmap[&t], m);
                    gens.push(Generator { grade: m, source: s, target: t, nf });
                }
            }
            if e.rank() != dim {
                return Err(Error::Internal(format!("corner generators do not span grade {m} from {s} to {t}")));
            }
        }
    }

    let max_grade = gamma.max_arrow_grade();
    let mut rels: Vec<PathPolynomial> = Vec::new();
    let mut quiet = 0;
    let mut m = 1;
    while !gamma.arrows.is_empty() && (m <= top || quiet < max_grade) {
        if m > top + 2 * max_grade + 2 {
            return Err(Error::Internal("corner relations did not stabilize".into()));
        }
        let current = QuiverPresentation::new(gamma.clone(), rels.clone(), order)?;
        let by_grade = gamma.paths_up_to(m);
        let mut pairs: Vec<(usize, usize)> = by_grade[m].iter().map(|x| (x.start, gamma.target(x))).collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut found = 0;
        for (s, t) in pairs {
            let (paths, mut ideal) = bucket_dimension(&current, m, s, t, &by_grade);
            let images: Vec<SparseVec> = paths.iter().map(|path| evaluate(&mut gq, &gens, path, m, top)).collect();
            let rows = if m <= top { gq.level_basis(m).len() } else { 0 };
            let ker = kernel(&Matrix::from_rows(rows, order, images)?.transpose());
            for v in ker.basis() {
                let red = ideal.reduce(v);
                if !red.is_zero() {
                    ideal.insert(&red);
                    rels.push(PathPolynomial::from_terms(red.iter().map(|(i, c)| (paths[i].clone(), c.clone()))));
                    found += 1;
                }
            }
        }
        if m > top {
            quiet = if found == 0 { quiet + 1 } else { 0 };
        }
        m += 1;
    }

    let out = normalize(&QuiverPresentation::new(gamma, rels, order)?);
    let check = finite_dimensionality(&out, top + out.quiver.max_arrow_grade() + 1);
    if check.total_dim != Some(expected_total) {
        return Err(Error::Internal(format!(
            "corner presentation has dimension {:?}, expected {expected_total}",
            check.total_dim
        )));
    }
    Ok(out)
}

/// Image of a path of generators in the ambient grade-`m` coordinates.
fn evaluate(gq: &mut GradedQuotient, gens: &[Generator], path: &Path, m: usize, top: usize) -> SparseVec {
    if m > top {
        return SparseVec::new();
    }
    let mut arrows = path.arrows.iter();
    let first = *arrows.next().expect("paths of positive grade have arrows");
    let mut grade = gens[first].grade;
    let mut acc = gens[first].nf.clone();
    for &a in arrows {
        if acc.is_zero() {
            break;
        }
        acc = gq.multiply(grade, &acc, gens[a].grade, &gens[a].nf);
        grade += gens[a].grade;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{beilinson_presentation, skew_layered_presentation, LiftSign};
    use crate::field::Cyclotomic;
    use crate::gradedalg::quadratic_dual;
    use crate::quiver::{equal_after_relabel, VertexLabel};

    fn gamma_ambient() -> QuiverPresentation {
        let (s, g) = crate::fixtures::example_s();
        let dual = quadratic_dual(&s);
        let b = beilinson_presentation(&dual, 4).unwrap();
        skew_layered_presentation(&b, dual.generator_names(), &g.dual(), LiftSign::Plus).unwrap()
    }

    #[test]
    fn example_corner() {
        let amb = gamma_ambient();
        let kept: Vec<usize> =
            (0..amb.quiver.vertex_count()).filter(|&v| matches!(amb.quiver.vertices[v], VertexLabel::Pair(_, 1))).collect();
        let gamma = corner_presentation(&amb, &kept, 32).unwrap();
        assert_eq!(gamma.quiver.vertex_count(), 4);
        let mut names: Vec<&str> = gamma.quiver.arrows.iter().map(|a| a.name.as_str()).collect();
        names.sort();
        assert_eq!(names, ["x1*", "x1*", "x1*", "x2*x3*", "x2*x3*", "x2*x4*", "x2*x4*", "x3*x4*", "x3*x4*"]);
        assert_eq!(gamma.relations().len(), 6);
        assert!(gamma.relations().iter().all(|r| r.signature(&gamma.quiver).unwrap().2 == 3));
    }

    #[test]
    fn all_vertices_give_back_the_algebra() {
        let mut q = Quiver::new();
        for i in 0..3 {
            q.add_vertex(VertexLabel::Index(i));
        }
        q.add_arrow("a", 0, 1, 1);
        q.add_arrow("b", 0, 1, 1);
        q.add_arrow("c", 1, 2, 1);
        let one = Cyclotomic::one(1);
        let rel = PathPolynomial::from_terms([(Path::new(0, vec![0, 2]), one.clone()), (Path::new(0, vec![1, 2]), one)]);
        let p = normalize(&QuiverPresentation::new(q, vec![rel], 1).unwrap());
        let c = corner_presentation(&p, &[0, 1, 2], 32).unwrap();
        assert!(equal_after_relabel(&c, &p, &[0, 1, 2], &[0, 1, 2]).unwrap());
    }

    #[test]
    fn empty_corner_is_zero() {
        let c = corner_presentation(&gamma_ambient(), &[], 32).unwrap();
        assert_eq!(c.quiver.vertex_count(), 0);
        assert_eq!(finite_dimensionality(&c, 4).total_dim, Some(0));
    }

    #[test]
    fn skipping_a_vertex_composes_arrows() {
        // 0 → 1 → 2 with no relations; dropping 1 leaves one arrow of grade 2.
        let mut q = Quiver::new();
        for i in 0..3 {
            q.add_vertex(VertexLabel::Index(i));
        }
        q.add_arrow("a", 0, 1, 1);
        q.add_arrow("b", 1, 2, 1);
        let p = QuiverPresentation::free(q, 1);
        let c = corner_presentation(&p, &[0, 2], 32).unwrap();
        assert_eq!(c.quiver.arrows.len(), 1);
        assert_eq!(c.quiver.arrows[0].name, "ab");
        assert_eq!(c.quiver.arrows[0].grade, 2);
        assert!(c.relations().is_empty());
    }

    #[test]
    fn infinite_ambient_is_rejected() {
        let mut q = Quiver::new();
        q.add_vertex(VertexLabel::Index(0));
        q.add_arrow("x", 0, 0, 1);
        let p = QuiverPresentation::free(q, 1);
        assert_eq!(corner_presentation(&p, &[0], 8), Err(Error::NotFiniteDimensional(8)));
    }
}
