use std::collections::{BTreeMap, HashMap};

use super::{Path, PathPolynomial, QuiverPresentation};
use crate::error::{Error, Result};
use crate::field::common_order;
use crate::linalg::{Echelon, SparseVec};

/// Canonical form: in each `(source, target, grade)` bucket the relations are
/// replaced by the reduced row-echelon basis of their span over the sorted
/// path basis (leading coefficient 1, dependent and zero relations dropped).
pub fn normalize(p: &QuiverPresentation) -> QuiverPresentation {
    let mut out = Vec::new();
    for (_, rels) in p.relation_buckets() {
        let mut paths: Vec<&Path> = rels.iter().flat_map(|r| r.terms().iter().map(|(p, _)| p)).collect();
        paths.sort();
        paths.dedup();
        let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut e = Echelon::new(paths.len(), p.order());
        for r in &rels {
            e.insert(&SparseVec::from_entries(r.terms().iter().map(|(path, c)| (index[path], c.clone()))));
        }
        for row in e.into_rows() {
            out.push(PathPolynomial::from_terms(row.iter().map(|(i, c)| (paths[i].clone(), c.clone()))));
        }
    }
    QuiverPresentation::new(p.quiver.clone(), out, p.order()).expect("normalization preserves validity")
}

fn check_bijection(map: &[usize], n: usize, what: &str) -> Result<()> {
    if map.len() != n {
        return Err(Error::NotBijective(format!("{what} map has {} entries, expected {n}", map.len())));
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::NotBijective(format!("{what} map is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

/// Whether `p1`, renamed through the vertex and arrow maps, has exactly the
/// quiver and (normalized) relation spans of `p2`. Names and labels are not
/// compared.
pub fn equal_after_relabel(
    p1: &QuiverPresentation,
    p2: &QuiverPresentation,
    vertex_map: &[usize],
    arrow_map: &[usize],
) -> Result<bool> {
    let (q1, q2) = (&p1.quiver, &p2.quiver);
    if q1.vertex_count() != q2.vertex_count() || q1.arrows.len() != q2.arrows.len() {
        return Ok(false);
    }
    check_bijection(vertex_map, q1.vertex_count(), "vertex")?;
    check_bijection(arrow_map, q1.arrows.len(), "arrow")?;
    for (a, arrow) in q1.arrows.iter().enumerate() {
        let image = &q2.arrows[arrow_map[a]];
        if image.source != vertex_map[arrow.source] || image.target != vertex_map[arrow.target] || image.grade != arrow.grade {
            return Ok(false);
        }
    }
    let order = common_order([p1.order(), p2.order()]);
    let renamed: Vec<PathPolynomial> = p1
        .relations()
        .iter()
        .map(|r| r.map_paths(|p| Path::new(vertex_map[p.start], p.arrows.iter().map(|&a| arrow_map[a]).collect())))
        .collect();
    let renamed = QuiverPresentation::new(q2.clone(), renamed, p1.order())?.embed(order)?;
    let a = normalize(&renamed);
    let b = normalize(&p2.embed(order)?);
    Ok(a.relations() == b.relations())
}

/// Vertex and arrow maps matching labels, and arrows by `(name, source label,
/// target label)`. `None` if some vertex or arrow has no unique partner.
pub fn relabel_maps_by_names(p1: &QuiverPresentation, p2: &QuiverPresentation) -> Option<(Vec<usize>, Vec<usize>)> {
    let (q1, q2) = (&p1.quiver, &p2.quiver);
    if q1.vertex_count() != q2.vertex_count() || q1.arrows.len() != q2.arrows.len() {
        return None;
    }
    let vmap: Vec<usize> = q1.vertices.iter().map(|l| q2.vertex_index(l)).collect::<Option<_>>()?;
    let mut keyed: BTreeMap<(&str, usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, a) in q2.arrows.iter().enumerate() {
        keyed.entry((a.name.as_str(), a.source, a.target)).or_default().push(i);
    }
    let amap: Vec<usize> = q1
        .arrows
        .iter()
        .map(|a| match keyed.get(&(a.name.as_str(), vmap[a.source], vmap[a.target])) {
            Some(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        })
        .collect::<Option<_>>()?;
    Some((vmap, amap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cyclotomic;
    use crate::quiver::{Quiver, VertexLabel};

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(1, n)
    }

    fn one_loop(power: usize, coeff: i64) -> QuiverPresentation {
        let mut q = Quiver::new();
        q.add_vertex(VertexLabel::Index(0));
        q.add_arrow("x", 0, 0, 1);
        let rel = PathPolynomial::from_terms([(Path::new(0, vec![0; power]), c(coeff))]);
        QuiverPresentation::new(q, vec![rel], 1).unwrap()
    }

    #[test]
    fn scaling_is_removed() {
        let n = normalize(&one_loop(2, 2));
        assert_eq!(n.relations(), one_loop(2, 1).relations());
    }

    #[test]
    fn dependent_relations_collapse() {
        let mut q = Quiver::new();
        q.add_vertex(VertexLabel::Index(0));
        q.add_arrow("x1", 0, 0, 1);
        q.add_arrow("x3", 0, 0, 1);
        let r1 = PathPolynomial::from_terms([(Path::new(0, vec![0, 1]), c(1)), (Path::new(0, vec![1, 0]), c(1))]);
        let r2 = r1.scale(&c(-1));
        let p = QuiverPresentation::new(q, vec![r1, r2], 1).unwrap();
        let n = normalize(&p);
        assert_eq!(n.relations().len(), 1);
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn relabel_checks() {
        let p = one_loop(2, 1);
        assert!(equal_after_relabel(&p, &p, &[0], &[0]).unwrap());
        assert!(!equal_after_relabel(&p, &one_loop(3, 1), &[0], &[0]).unwrap());
        assert!(equal_after_relabel(&p, &p, &[0, 0], &[0]).is_err());

        let mut q = Quiver::new();
        q.add_vertex(VertexLabel::Index(0));
        q.add_vertex(VertexLabel::Index(1));
        let iso = QuiverPresentation::free(q, 1);
        assert!(equal_after_relabel(&iso, &iso, &[1, 0], &[]).unwrap());
    }

    #[test]
    fn maps_by_names() {
        let p = one_loop(2, 1);
        assert_eq!(relabel_maps_by_names(&p, &p), Some((vec![0], vec![0])));
    }
}
