//! Quadratic algebras `T(V)/(R)` on finitely many degree-one generators,
//! optionally with a diagonal action of `Z/r`.
//!
//! Words of length `m` are indexed lexicographically: the word
//! `x_{s_1}⋯x_{s_m}` sits at `Σ s_k n^{m-k}`, so `V^{⊗m}` has coordinates
//! `0..n^m` in word order.

mod frobenius;
mod hdet;
mod invariants;
mod json;
mod koszul;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{common_order, Cyclotomic};
use crate::linalg::{SparseVec, Subspace};
use crate::par;
use crate::quiver::{check_cap, GradedQuotient, Path, PathPolynomial, Quiver, QuiverPresentation, VertexLabel};

pub use frobenius::{frobenius_pairing_check, FrobeniusReport, FrobeniusVerdict, PairingDegree};
pub use hdet::{hdet_diagonal, HdetConvention};
pub use invariants::{invariant_hilbert_function, weight_block_dims};
pub use json::{algebra_json, parse_algebra, ActionJson, AlgebraJson, WordTermJson};
pub use koszul::{koszul_numeric_check, koszul_syzygy_space, syzygy_spaces, KoszulDegree, KoszulReport};

/// Default refusal threshold for tensor degrees.
pub const DEFAULT_MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeWord(pub Vec<usize>);

impl FreeWord {
    pub fn new(letters: Vec<usize>) -> Self {
        FreeWord(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position in the lexicographic basis of `V^{⊗len}`.
    pub fn index(&self, n: usize) -> usize {
        self.0.iter().fold(0, |acc, &s| acc * n + s)
    }

    pub fn from_index(mut index: usize, len: usize, n: usize) -> Self {
        let mut letters = vec![0; len];
        for slot in letters.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        FreeWord(letters)
    }

    pub fn reversed(&self) -> Self {
        FreeWord(self.0.iter().rev().copied().collect())
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|&s| names[s].as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// A noncommutative polynomial: words with nonzero coefficients in `Q(ζ_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NcPolynomial {
    order: u32,
    terms: BTreeMap<FreeWord, Cyclotomic>,
}

impl NcPolynomial {
    pub fn zero(order: u32) -> Self {
        NcPolynomial { order, terms: BTreeMap::new() }
    }

    /// Merges repeated words and drops zero coefficients. Coefficients are
    /// embedded into the common cyclotomic field.
    pub fn from_terms(terms: impl IntoIterator<Item = (FreeWord, Cyclotomic)>) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let order = common_order(terms.iter().map(|(_, c)| c.order()));
        let mut out: BTreeMap<FreeWord, Cyclotomic> = BTreeMap::new();
        for (w, c) in terms {
            let c = c.embed(order).expect("order divides the lcm");
            match out.get_mut(&w) {
                Some(x) => *x += &c,
                None => {
                    out.insert(w, c);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        NcPolynomial { order, terms: out }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<FreeWord, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common word length, if all words have the same length.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(FreeWord::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    /// Coordinates in `V^{⊗m}`; `None` for inhomogeneous input.
    pub fn to_vector(&self, n: usize) -> Option<SparseVec> {
        if !self.is_zero() {
            self.homogeneous_degree()?;
        }
        Some(SparseVec::from_entries(self.terms.iter().map(|(w, c)| (w.index(n), c.clone()))))
    }

    pub fn from_vector(v: &SparseVec, len: usize, n: usize, order: u32) -> Self {
        NcPolynomial { order, terms: v.iter().map(|(i, c)| (FreeWord::from_index(i, len, n), c.clone())).collect() }
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let negative = c.as_rational().is_some_and(|q| q.is_negative());
            let c = if negative { -c } else { c.clone() };
            out.push_str(match (k, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if !c.is_one() {
                match c.as_rational() {
                    Some(q) => out.push_str(&format!("{q} ")),
                    None => out.push_str(&format!("({c}) ")),
                }
            }
            out.push_str(&w.render(names));
        }
        out
    }
}

/// `g = diag(ζ_r^{a_1}, …, ζ_r^{a_n})` with `0 < a_j ≤ r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ActionJson", into = "ActionJson")]
pub struct DiagonalAction {
    r: u32,
    weights: Vec<u32>,
}

impl DiagonalAction {
    pub fn new(r: u32, weights: Vec<u32>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidAction("group order must be positive".into()));
        }
        if let Some(a) = weights.iter().find(|&&a| a == 0 || a > r) {
            return Err(Error::InvalidAction(format!("weight {a} is outside 1..={r}")));
        }
        Ok(DiagonalAction { r, weights })
    }

    /// Accepts any integers and reduces them into `1..=r`.
    pub fn from_residues(r: u32, weights: &[i64]) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidAction("group order must be positive".into()));
        }
        let ws = weights.iter().map(|&a| normalize_weight(a, r)).collect();
        Ok(DiagonalAction { r, weights: ws })
    }

    pub fn trivial(n: usize) -> Self {
        DiagonalAction { r: 1, weights: vec![1; n] }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// `a_j mod r`.
    pub fn residue(&self, j: usize) -> u32 {
        self.weights[j] % self.r
    }

    pub fn word_weight(&self, letters: &[usize]) -> u32 {
        letters.iter().map(|&s| self.residue(s)).sum::<u32>() % self.r
    }

    /// Weight of the word at `index` in `V^{⊗len}`.
    pub fn index_weight(&self, mut index: usize, len: usize) -> u32 {
        let n = self.n();
        let mut w = 0;
        for _ in 0..len {
            w += self.residue(index % n);
            index /= n;
        }
        w % self.r
    }

    /// Weights `-a_j mod r`, for the contragredient action on `V*`.
    pub fn dual(&self) -> Self {
        DiagonalAction { r: self.r, weights: self.weights.iter().map(|&a| normalize_weight(-(a as i64), self.r)).collect() }
    }

    /// The action of `g^p`.
    pub fn power(&self, p: i64) -> Self {
        DiagonalAction { r: self.r, weights: self.weights.iter().map(|&a| normalize_weight(a as i64 * p, self.r)).collect() }
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::InvalidAction(format!("{} weights given for {n} generators", self.n())));
        }
        Ok(())
    }
}

fn normalize_weight(a: i64, r: u32) -> u32 {
    let w = a.rem_euclid(r as i64) as u32;
    if w == 0 {
        r
    } else {
        w
    }
}

impl fmt::Display for DiagonalAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "Z/{} with weights ({})", self.r, ws.join(","))
    }
}

/// `T(V)/(R)` with `R ⊆ V⊗V` stored as a subspace of the `n²` word basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticAlgebra {
    generator_names: Vec<String>,
    relations: Subspace,
    claimed_global_dim: Option<usize>,
}

impl QuadraticAlgebra {
    /// Spans the given degree-two relations. Coefficients are embedded into
    /// the smallest common cyclotomic field.
    pub fn new(generator_names: Vec<String>, relations: &[NcPolynomial]) -> Result<Self> {
        let n = generator_names.len();
        let order = common_order(relations.iter().map(NcPolynomial::order));
        let mut vectors = Vec::with_capacity(relations.len());
        for (k, f) in relations.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            match f.homogeneous_degree() {
                Some(2) => {}
                Some(d) => return Err(Error::InvalidAlgebra(format!("relation {k} has degree {d}, expected 2"))),
                None => return Err(Error::InvalidAlgebra(format!("relation {k} is not homogeneous"))),
            }
            if let Some(s) = f.terms.keys().flat_map(|w| w.0.iter()).find(|&&s| s >= n) {
                return Err(Error::InvalidAlgebra(format!(
                    "relation {k} uses generator index {s}, but there are {n} generators"
                )));
            }
            let v = f.to_vector(n).expect("homogeneous");
            vectors.push(SparseVec::from_entries(v.iter().map(|(i, c)| (i, c.embed(order).expect("divides lcm")))));
        }
        Ok(QuadraticAlgebra { generator_names, relations: Subspace::span(n * n, order, &vectors), claimed_global_dim: None })
    }

    pub fn from_relation_space(generator_names: Vec<String>, relations: Subspace) -> Result<Self> {
        let n = generator_names.len();
        if relations.ambient_dim() != n * n {
            return Err(Error::AmbientMismatch(relations.ambient_dim(), n * n));
        }
        Ok(QuadraticAlgebra { generator_names, relations, claimed_global_dim: None })
    }

    pub fn free(generator_names: Vec<String>) -> Self {
        let n = generator_names.len();
        QuadraticAlgebra { generator_names, relations: Subspace::zero(n * n, 1), claimed_global_dim: None }
    }

    pub fn with_global_dim(mut self, d: usize) -> Self {
        self.claimed_global_dim = Some(d);
        self
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn n(&self) -> usize {
        self.generator_names.len()
    }

    pub fn order(&self) -> u32 {
        self.relations.order()
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn claimed_global_dim(&self) -> Option<usize> {
        self.claimed_global_dim
    }

    /// The reduced row-echelon basis of `R` as polynomials.
    pub fn relation_polynomials(&self) -> Vec<NcPolynomial> {
        let n = self.n();
        self.relations.basis().iter().map(|v| NcPolynomial::from_vector(v, 2, n, self.order())).collect()
    }

    pub fn embed(&self, order: u32) -> Result<Self> {
        Ok(QuadraticAlgebra { relations: self.relations.embed(order)?, ..self.clone() })
    }

    /// Reversed multiplication: `x_a x_b ↦ x_b x_a` in every relation.
    pub fn opposite(&self) -> Self {
        let n = self.n();
        QuadraticAlgebra { relations: self.relations.map_coordinates(n * n, |i| (i % n) * n + i / n), ..self.clone() }
    }

    /// One vertex with a loop per generator.
    pub fn to_presentation(&self) -> QuiverPresentation {
        let mut q = Quiver::new();
        q.add_vertex(VertexLabel::Index(0));
        for name in &self.generator_names {
            q.add_arrow(name.clone(), 0, 0, 1);
        }
        let rels = self
            .relation_polynomials()
            .into_iter()
            .map(|f| PathPolynomial::from_terms(f.terms.into_iter().map(|(w, c)| (Path::new(0, w.0), c))))
            .collect();
        QuiverPresentation::new(q, rels, self.order()).expect("relations are loops at the single vertex")
    }

    /// Normal-form engine; with an action the reductions split by weight.
    pub(crate) fn engine(&self, act: Option<&DiagonalAction>) -> GradedQuotient {
        let gq = GradedQuotient::new(&self.to_presentation());
        match act {
            Some(a) if a.n() == self.n() => gq.with_arrow_weights(a.r(), (0..self.n()).map(|j| a.residue(j)).collect()),
            _ => gq,
        }
    }
}

/// Degree-`m` piece `A_m = V^{⊗m} / Σ V^{⊗i}⊗R⊗V^{⊗j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComponent {
    pub degree: usize,
    pub dim: usize,
    pub ideal_span: Subspace,
    /// Non-pivot words, sorted: a basis of `A_m`.
    pub transversal: Vec<FreeWord>,
}

/// Normal forms of every word of length `m`, in word-index order.
pub(crate) fn word_normal_forms(gq: &mut GradedQuotient, n: usize, m: usize) -> Vec<SparseVec> {
    gq.ensure(m);
    let order = gq.order();
    let mut nfs = vec![SparseVec::unit(0, order)];
    for k in 1..=m {
        let prev = &nfs;
        let gq = &*gq;
        nfs = par::map_range(prev.len() * n, |i| gq.right_multiply(k - 1, &prev[i / n], i % n));
    }
    nfs
}

pub fn graded_component(a: &QuadraticAlgebra, m: usize, cap: usize) -> Result<GradedComponent> {
    check_cap(m, cap)?;
    let n = a.n();
    let mut gq = a.engine(None);
    let nfs = word_normal_forms(&mut gq, n, m);
    let basis = gq.level_basis(m);
    let basis_index: Vec<usize> = basis.iter().map(|p| FreeWord(p.arrows.clone()).index(n)).collect();
    let mut rows = Vec::new();
    for (w, nf) in nfs.iter().enumerate() {
        let is_basis = nf.nnz() == 1 && nf.iter().next().is_some_and(|(i, c)| basis_index[i] == w && c.is_one());
        if is_basis {
            continue;
        }
        let mut entries = vec![(w, Cyclotomic::one(a.order()))];
        entries.extend(nf.iter().map(|(i, c)| (basis_index[i], -c)));
        rows.push(SparseVec::from_entries(entries));
    }
    let total = nfs.len();
    let ideal_span = Subspace::from_rref_rows(total, a.order(), rows);
    let transversal: Vec<FreeWord> = basis.iter().map(|p| FreeWord(p.arrows.clone())).collect();
    Ok(GradedComponent { degree: m, dim: transversal.len(), ideal_span, transversal })
}

/// `[dim A_0, …, dim A_N]`.
pub fn hilbert_function(a: &QuadraticAlgebra, n_max: usize, cap: usize) -> Result<Vec<usize>> {
    check_cap(n_max, cap)?;
    let mut gq = a.engine(None);
    Ok((0..=n_max).map(|m| gq.dim(m)).collect())
}

/// `T(V*)/(R^⊥)` under `⟨ξ⊗η, v⊗w⟩ = ξ(v)η(w)`. A trailing `*` on a name is
/// toggled, so dualizing twice restores the names.
pub fn quadratic_dual(a: &QuadraticAlgebra) -> QuadraticAlgebra {
    let names = a.generator_names.iter().map(|s| dual_name(s)).collect();
    QuadraticAlgebra { generator_names: names, relations: a.relations.orthogonal_complement(), claimed_global_dim: None }
}

fn dual_name(s: &str) -> String {
    match s.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{s}*"),
    }
}

pub fn dual_action(act: &DiagonalAction) -> DiagonalAction {
    act.dual()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightBlock {
    pub weight: u32,
    pub dim: usize,
}

/// Outcome of [`action_check`]: the weight decomposition of `R`, or a
/// weight component of a relation that falls outside `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionCheck {
    pub stable: bool,
    pub blocks: Vec<WeightBlock>,
    pub violation: Option<String>,
}

pub fn action_check(a: &QuadraticAlgebra, act: &DiagonalAction) -> Result<ActionCheck> {
    let n = a.n();
    act.check_len(n)?;
    let r = a.relations();
    let mut blocks: BTreeMap<u32, Vec<SparseVec>> = BTreeMap::new();
    for v in r.basis() {
        let mut parts: BTreeMap<u32, Vec<(usize, Cyclotomic)>> = BTreeMap::new();
        for (i, c) in v.iter() {
            parts.entry(act.index_weight(i, 2)).or_default().push((i, c.clone()));
        }
        for (w, entries) in parts {
            let part = SparseVec::from_entries(entries);
            if !r.contains(&part) {
                let f = NcPolynomial::from_vector(&part, 2, n, a.order());
                return Ok(ActionCheck { stable: false, blocks: Vec::new(), violation: Some(f.render(a.generator_names())) });
            }
            blocks.entry(w).or_default().push(part);
        }
    }
    let blocks =
        blocks.into_iter().map(|(weight, vs)| WeightBlock { weight, dim: Subspace::span(n * n, a.order(), &vs).dim() }).collect();
    Ok(ActionCheck { stable: true, blocks, violation: None })
}
