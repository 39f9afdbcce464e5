//! Exact sparse linear algebra over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::{FormalSum, Scalar};

/// Incrementally built reduced row echelon basis of a subspace of the span of
/// keys `K`. Every stored row is normalized to pivot coefficient one and no
/// stored row contains another row's pivot.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
    inserted: usize,
}

#[derive(Clone, Debug)]
struct Row<K: Ord + Clone> {
    vector: FormalSum<K>,
    /// The row as a combination of the vectors passed to `insert`.
    combination: FormalSum<usize>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
            inserted: 0,
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of `insert` calls so far, independent or not.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` modulo the stored span. Returns the residual and the
    /// combination of inserted vectors that was subtracted.
    fn reduce_tracked(&self, v: &FormalSum<K>) -> (FormalSum<K>, FormalSum<usize>) {
        let mut residual = v.clone();
        let mut used = FormalSum::zero();
        let pivots: Vec<(K, Scalar)> = v
            .iter()
            .filter(|(k, _)| self.rows.contains_key(*k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        // rows are fully reduced, so only the pivots present in `v` matter
        for (k, _) in pivots {
            let c = residual.coefficient(&k);
            if c.is_zero() {
                continue;
            }
            let row = &self.rows[&k];
            residual.add_scaled(&row.vector, &-c.clone());
            used.add_scaled(&row.combination, &c);
        }
        (residual, used)
    }

    pub fn reduce(&self, v: &FormalSum<K>) -> FormalSum<K> {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &FormalSum<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in terms of the inserted vectors, if `v` lies in
    /// their span. Indices refer to insertion order.
    pub fn express(&self, v: &FormalSum<K>) -> Option<FormalSum<usize>> {
        let (residual, used) = self.reduce_tracked(v);
        residual.is_zero().then_some(used)
    }

    /// Inserts `v`; returns `true` if it was independent of the stored span.
    pub fn insert(&mut self, v: &FormalSum<K>) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (residual, used) = self.reduce_tracked(v);
        let Some((pivot, lead)) = residual.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.recip().expect("nonzero lead");
        let mut combination = FormalSum::basis(index);
        combination.add_scaled(&used, &-Scalar::one());
        let row = Row {
            vector: residual.scaled(&inv),
            combination: combination.scaled(&inv),
        };
        for other in self.rows.values_mut() {
            let c = other.vector.coefficient(&pivot);
            if !c.is_zero() {
                other.vector.add_scaled(&row.vector, &-c.clone());
                other.combination.add_scaled(&row.combination, &-c);
            }
        }
        self.rows.insert(pivot, row);
        true
    }
}

/// Rank of the span of the given vectors.
pub fn rank<K: Ord + Clone>(vectors: &[FormalSum<K>]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// A sparse matrix stored by columns: `columns[j]` is the image of the `j`-th
/// source basis vector, expressed over target basis indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub columns: Vec<FormalSum<usize>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: alloc::vec![FormalSum::zero(); cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn rank(&self) -> usize {
        rank(&self.columns)
    }

    pub fn apply(&self, v: &FormalSum<usize>) -> FormalSum<usize> {
        v.map_linear(|&j| self.columns[j].clone())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMatrix, factor: &Scalar) -> SparseMatrix {
        let mut out = self.clone();
        for (a, b) in out.columns.iter_mut().zip(&other.columns) {
            a.add_scaled(b, factor);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(FormalSum::is_zero)
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(FormalSum::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> FormalSum<usize> {
        FormalSum::from_terms(entries.iter().map(|&(k, c)| (k, Scalar::from_int(c))))
    }

    #[test]
    fn rank_and_express() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[(0, 1), (1, 2)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        let coords = e.express(&v(&[(0, 2), (1, 5), (2, 1)])).unwrap();
        assert_eq!(coords, v(&[(0, 2), (1, 1)]));
        assert!(e.express(&v(&[(2, 1)])).is_none());
    }

    #[test]
    fn matrix_compose() {
        // d: e0 -> e1, e1 -> 0 squares to zero
        let d = SparseMatrix {
            rows: 2,
            columns: alloc::vec![v(&[(1, 1)]), FormalSum::zero()],
        };
        assert!(d.compose(&d).is_zero());
        assert_eq!(d.rank(), 1);
    }
}
