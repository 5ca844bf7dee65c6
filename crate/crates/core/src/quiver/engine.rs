//! Degree-by-degree normal forms for `kQ/I`.
//!
//! Level `m` has as basis the grade-`m` paths not lying in the leading-term
//! set of `I` (pivots are the smallest path in the column order). Every
//! grade-`m` path ending in arrow `α` is `t·α` modulo `I_{m-gα}·α` for a
//! basis path `t` of level `m - gα`, so level `m` is the quotient of the
//! span of these candidates `t·α` by the images of `u·ρ` for basis paths `u`
//! and relations `ρ`. The level stores the resulting right-multiplication
//! table `(t, α) ↦ NF(t·α)`, which is all that is needed to compute normal
//! forms and products in higher grades.
//!
//! Candidates split into independent blocks by `(start, end, weight)`;
//! blocks are reduced in parallel.

use std::collections::{BTreeMap, HashMap};

use crate::field::Cyclotomic;
use crate::linalg::{Accumulator, Echelon, SparseVec};
use crate::par;

use super::{Path, QuiverPresentation};

#[derive(Clone, Debug)]
struct Level {
    basis: Vec<Path>,
    ends: Vec<usize>,
    weights: Vec<u32>,
    index: HashMap<Path, usize>,
    /// `(index in level m - gα, α) ↦ NF(t·α)` in this level's coordinates.
    right: HashMap<(usize, usize), SparseVec>,
}

type BlockKey = (usize, usize, u32);

struct Candidate {
    lower: usize,
    arrow: usize,
    path: Path,
}

enum Column {
    Free,
    Pivot(SparseVec),
}

type SplitRelation = (usize, usize, usize, Vec<(Path, usize, Cyclotomic)>);

/// The graded quotient `kQ/I` of a presentation, computed lazily by grade.
#[derive(Clone, Debug)]
pub struct GradedQuotient {
    presentation: QuiverPresentation,
    /// Relations as (source, target, grade, terms split as (prefix path, last arrow, coeff)).
    relations: Vec<SplitRelation>,
    weights: Option<(u32, Vec<u32>)>,
    levels: Vec<Level>,
}

impl GradedQuotient {
    pub fn new(p: &QuiverPresentation) -> Self {
        let q = &p.quiver;
        let relations = p
            .relations()
            .iter()
            .filter_map(|r| {
                let (s, t, g) = r.signature(q)?;
                let terms = r
                    .terms()
                    .iter()
                    .map(|(path, c)| {
                        let (last, prefix) = path.arrows.split_last().expect("relation paths are nontrivial");
                        (Path::new(path.start, prefix.to_vec()), *last, c.clone())
                    })
                    .collect();
                Some((s, t, g, terms))
            })
            .collect();
        let level0 = Level {
            basis: (0..q.vertex_count()).map(Path::trivial).collect(),
            ends: (0..q.vertex_count()).collect(),
            weights: vec![0; q.vertex_count()],
            index: (0..q.vertex_count()).map(|v| (Path::trivial(v), v)).collect(),
            right: HashMap::new(),
        };
        GradedQuotient { presentation: p.clone(), relations, weights: None, levels: vec![level0] }
    }

    /// Declares a `Z/r`-grading of the arrows used only to split the
    /// reductions into smaller independent blocks. Ignored unless every
    /// relation is homogeneous for it.
    pub fn with_arrow_weights(mut self, r: u32, weights: Vec<u32>) -> Self {
        assert_eq!(weights.len(), self.presentation.quiver.arrows.len());
        assert_eq!(self.levels.len(), 1, "weights must be set before computing levels");
        let homogeneous = self.presentation.relations().iter().all(|rel| {
            let mut ws = rel.terms().iter().map(|(p, _)| p.arrows.iter().map(|&a| weights[a]).sum::<u32>() % r);
            let first = ws.next();
            ws.all(|w| Some(w) == first)
        });
        if homogeneous && r > 1 {
            self.weights = Some((r, weights.into_iter().map(|w| w % r).collect()));
        }
        self
    }

    pub fn presentation(&self) -> &QuiverPresentation {
        &self.presentation
    }

    pub fn order(&self) -> u32 {
        self.presentation.order()
    }

    pub fn computed_up_to(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn ensure(&mut self, m: usize) {
        while self.levels.len() <= m {
            let next = self.compute_level(self.levels.len());
            self.levels.push(next);
        }
    }

    pub fn dim(&mut self, m: usize) -> usize {
        self.ensure(m);
        self.levels[m].basis.len()
    }

    /// Basis (normal words) of grade `m`, sorted.
    pub fn basis(&mut self, m: usize) -> &[Path] {
        self.ensure(m);
        &self.levels[m].basis
    }

    /// Basis of an already computed level.
    pub fn level_basis(&self, m: usize) -> &[Path] {
        &self.levels[m].basis
    }

    pub fn basis_end(&self, m: usize, i: usize) -> usize {
        self.levels[m].ends[i]
    }

    pub fn index_of(&self, m: usize, p: &Path) -> Option<usize> {
        self.levels.get(m)?.index.get(p).copied()
    }

    fn arrow_weight(&self, a: usize) -> u32 {
        self.weights.as_ref().map_or(0, |(_, w)| w[a])
    }

    fn add_weight(&self, a: u32, b: u32) -> u32 {
        self.weights.as_ref().map_or(0, |(r, _)| (a + b) % r)
    }

    /// `v · α` for `v` in level `m`, landing in level `m + grade(α)`.
    /// Requires that level to be computed.
    pub fn right_multiply(&self, m: usize, v: &SparseVec, arrow: usize) -> SparseVec {
        let g = self.presentation.quiver.arrows[arrow].grade;
        let target = &self.levels[m + g];
        let mut acc = Accumulator::new();
        for (i, c) in v.iter() {
            if let Some(img) = target.right.get(&(i, arrow)) {
                acc.add_scaled(c, img);
            }
        }
        acc.finish()
    }

    fn apply_arrows(&self, mut m: usize, mut v: SparseVec, arrows: &[usize]) -> SparseVec {
        for &a in arrows {
            if v.is_zero() {
                break;
            }
            v = self.right_multiply(m, &v, a);
            m += self.presentation.quiver.arrows[a].grade;
        }
        v
    }

    /// Normal form of a path, in the coordinates of its grade.
    pub fn normal_form(&mut self, p: &Path) -> SparseVec {
        let g = self.presentation.quiver.grade(p);
        self.ensure(g);
        let start = SparseVec::unit(p.start, self.order());
        self.apply_arrows(0, start, &p.arrows)
    }

    /// Product of `a` (grade `i`) and `b` (grade `j`) in grade `i + j`.
    pub fn multiply(&mut self, i: usize, a: &SparseVec, j: usize, b: &SparseVec) -> SparseVec {
        self.ensure(i + j);
        let mut acc = Accumulator::new();
        for (bi, bc) in b.iter() {
            let path = &self.levels[j].basis[bi];
            // a · e_v keeps only the components of a ending at v.
            let v = path.start;
            let restricted = SparseVec::from_sorted(
                a.iter().filter(|(ai, _)| self.levels[i].ends[*ai] == v).map(|(ai, c)| (ai, c.clone())).collect(),
            );
            let prod = self.apply_arrows(i, restricted, &path.arrows);
            acc.add_scaled(bc, &prod);
        }
        acc.finish()
    }

    fn compute_level(&self, m: usize) -> Level {
        let q = &self.presentation.quiver;
        let order = self.order();

        let mut blocks: BTreeMap<BlockKey, Vec<Candidate>> = BTreeMap::new();
        for (ai, a) in q.arrows.iter().enumerate() {
            if a.grade > m {
                continue;
            }
            let lower = m - a.grade;
            let lv = &self.levels[lower];
            for (ti, t) in lv.basis.iter().enumerate() {
                if lv.ends[ti] != a.source {
                    continue;
                }
                let key = (t.start, a.target, self.add_weight(lv.weights[ti], self.arrow_weight(ai)));
                blocks.entry(key).or_default().push(Candidate { lower: ti, arrow: ai, path: t.then_arrow(ai) });
            }
        }
        let mut position: HashMap<(usize, usize), (BlockKey, usize)> = HashMap::new();
        for (key, cands) in blocks.iter_mut() {
            cands.sort_by(|x, y| x.path.cmp(&y.path));
            for (k, c) in cands.iter().enumerate() {
                position.insert((c.lower, c.arrow), (*key, k));
            }
        }

        let mut rel_vectors: BTreeMap<BlockKey, Vec<SparseVec>> = BTreeMap::new();
        for (src, _tgt, g, terms) in &self.relations {
            if *g > m {
                continue;
            }
            let lower = m - g;
            let lv = &self.levels[lower];
            for ui in 0..lv.basis.len() {
                if lv.ends[ui] != *src {
                    continue;
                }
                let mut key = None;
                let mut entries = Vec::new();
                for (prefix, last, c) in terms {
                    let nf = self.apply_arrows(lower, SparseVec::unit(ui, order), &prefix.arrows);
                    for (ti, x) in nf.iter() {
                        let (k, local) = position[&(ti, *last)];
                        debug_assert!(key.is_none_or(|kk| kk == k), "relation image spans several blocks");
                        key = Some(k);
                        entries.push((local, x * c));
                    }
                }
                let v = SparseVec::from_entries(entries);
                if let (Some(k), false) = (key, v.is_zero()) {
                    rel_vectors.entry(k).or_default().push(v);
                }
            }
        }

        let work: Vec<(BlockKey, Vec<Candidate>, Vec<SparseVec>)> = blocks
            .into_iter()
            .map(|(k, cands)| {
                let rels = rel_vectors.remove(&k).unwrap_or_default();
                (k, cands, rels)
            })
            .collect();
        let reduced: Vec<Vec<Column>> = par::map(&work, |(_, cands, rels)| {
            let mut e = Echelon::new(cands.len(), order);
            e.extend(rels.iter());
            (0..cands.len())
                .map(|c| match e.row(c) {
                    None => Column::Free,
                    Some(row) => Column::Pivot(SparseVec::from_sorted(row.iter().skip(1).map(|(j, x)| (j, -x)).collect())),
                })
                .collect()
        });

        // Global basis: all free candidates, sorted by path.
        let mut free: Vec<(Path, usize, u32)> = Vec::new();
        for ((key, cands, _), cols) in work.iter().zip(&reduced) {
            for (c, col) in cands.iter().zip(cols) {
                if matches!(col, Column::Free) {
                    free.push((c.path.clone(), key.1, key.2));
                }
            }
        }
        free.sort_by(|a, b| a.0.cmp(&b.0));
        let index: HashMap<Path, usize> = free.iter().enumerate().map(|(i, (p, _, _))| (p.clone(), i)).collect();

        let mut right = HashMap::new();
        for ((_, cands, _), cols) in work.iter().zip(&reduced) {
            let local_to_global: HashMap<usize, usize> = cands
                .iter()
                .enumerate()
                .filter(|(k, _)| matches!(cols[*k], Column::Free))
                .map(|(k, c)| (k, index[&c.path]))
                .collect();
            for (k, (c, col)) in cands.iter().zip(cols).enumerate() {
                let img = match col {
                    Column::Free => SparseVec::unit(local_to_global[&k], order),
                    Column::Pivot(tail) => tail.map_indices(|j| local_to_global[&j]),
                };
                right.insert((c.lower, c.arrow), img);
            }
        }

        Level {
            ends: free.iter().map(|(_, e, _)| *e).collect(),
            weights: free.iter().map(|(_, _, w)| *w).collect(),
            basis: free.into_iter().map(|(p, _, _)| p).collect(),
            index,
            right,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{PathPolynomial, Quiver, VertexLabel};

    fn one(order: u32) -> Cyclotomic {
        Cyclotomic::one(order)
    }

    /// k<x, y>/(xy - yx): the commutative polynomial ring in two variables.
    fn commutative_plane() -> QuiverPresentation {
        let mut q = Quiver::new();
        q.add_vertex(VertexLabel::Index(0));
        q.add_arrow("x", 0, 0, 1);
        q.add_arrow("y", 0, 0, 1);
        let rel = PathPolynomial::from_terms([(Path::new(0, vec![0, 1]), one(1)), (Path::new(0, vec![1, 0]), -one(1))]);
        QuiverPresentation::new(q, vec![rel], 1).unwrap()
    }

    #[test]
    fn polynomial_ring_dimensions() {
        let mut gq = GradedQuotient::new(&commutative_plane());
        let dims: Vec<usize> = (0..6).map(|m| gq.dim(m)).collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 5, 6]);
        // Pivot is the smaller word xy, so yx is the normal word.
        assert_eq!(gq.basis(2), &[Path::new(0, vec![0, 0]), Path::new(0, vec![1, 0]), Path::new(0, vec![1, 1])]);
        let xy = gq.normal_form(&Path::new(0, vec![0, 1]));
        let yx = gq.normal_form(&Path::new(0, vec![1, 0]));
        assert_eq!(xy, yx);
    }

    #[test]
    fn products_match_normal_forms() {
        let mut gq = GradedQuotient::new(&commutative_plane());
        let a = gq.normal_form(&Path::new(0, vec![1, 0]));
        let b = gq.normal_form(&Path::new(0, vec![1]));
        let ab = gq.multiply(2, &a, 1, &b);
        assert_eq!(ab, gq.normal_form(&Path::new(0, vec![0, 1, 1])));
    }

    #[test]
    fn truncated_loop() {
        let mut q = Quiver::new();
        q.add_vertex(VertexLabel::Index(0));
        q.add_arrow("x", 0, 0, 1);
        let rel = PathPolynomial::from_terms([(Path::new(0, vec![0, 0, 0]), one(1))]);
        let p = QuiverPresentation::new(q, vec![rel], 1).unwrap();
        let mut gq = GradedQuotient::new(&p);
        assert_eq!((0..5).map(|m| gq.dim(m)).collect::<Vec<_>>(), vec![1, 1, 1, 0, 0]);
    }

    #[test]
    fn weights_do_not_change_dimensions() {
        let p = commutative_plane();
        let mut plain = GradedQuotient::new(&p);
        let mut split = GradedQuotient::new(&p).with_arrow_weights(3, vec![1, 2]);
        for m in 0..6 {
            assert_eq!(plain.dim(m), split.dim(m));
            assert_eq!(plain.basis(m).to_vec(), split.basis(m).to_vec());
        }
    }
}
