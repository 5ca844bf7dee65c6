use std::collections::BTreeMap;

use crate::field::Cyclotomic;

/// Sparse vector: strictly increasing column indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Cyclotomic)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Sums duplicate columns and drops zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Cyclotomic)>) -> Self {
        let mut acc: BTreeMap<usize, Cyclotomic> = BTreeMap::new();
        for (i, c) in entries {
            match acc.get_mut(&i) {
                Some(x) => *x += &c,
                None => {
                    acc.insert(i, c);
                }
            }
        }
        SparseVec { entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Caller guarantees sorted, distinct, nonzero entries.
    pub(crate) fn from_sorted(entries: Vec<(usize, Cyclotomic)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, c)| !c.is_zero()));
        SparseVec { entries }
    }

    pub fn unit(i: usize, order: u32) -> Self {
        SparseVec { entries: vec![(i, Cyclotomic::one(order))] }
    }

    pub fn from_dense(v: &[Cyclotomic]) -> Self {
        SparseVec { entries: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect() }
    }

    pub fn to_dense(&self, len: usize, order: u32) -> Vec<Cyclotomic> {
        let mut out = vec![Cyclotomic::zero(order); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Cyclotomic)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn into_entries(self) -> Vec<(usize, Cyclotomic)> {
        self.entries
    }

    pub fn get(&self, i: usize) -> Option<&Cyclotomic> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Cyclotomic)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Cyclotomic, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    /// Relabels columns through `f`, merging collisions.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }

    /// Dot product `Σ self_i other_i`.
    pub fn dot(&self, other: &SparseVec, order: u32) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(order);
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                acc += &(x * y);
                a.next();
                b.next();
            }
        }
        acc
    }
}

/// Accumulates `Σ c_k v_k` for many sparse vectors at once.
#[derive(Default)]
pub(crate) struct Accumulator {
    acc: BTreeMap<usize, Cyclotomic>,
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator::default()
    }

    pub fn add(&mut self, i: usize, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.acc.get_mut(&i) {
            Some(x) => *x += &c,
            None => {
                self.acc.insert(i, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Cyclotomic, v: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.iter() {
            self.add(i, x * c);
        }
    }

    pub fn finish(self) -> SparseVec {
        SparseVec::from_sorted(self.acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}
