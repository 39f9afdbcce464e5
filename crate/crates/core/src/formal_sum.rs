//! Finite formal linear combinations with exact coefficients.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::Scalar;

/// A finite linear combination of keys. Zero coefficients are never stored
/// and terms are kept in key order, so two sums are equal iff they are equal
/// as vectors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: Scalar) -> Self {
        let mut s = Self::zero();
        s.add_term(key, coeff);
        s
    }

    pub fn basis(key: K) -> Self {
        Self::single(key, Scalar::one())
    }

    /// Collects arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(terms: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn add_term(&mut self, key: K, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FormalSum<K>, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        FormalSum {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * factor)).collect(),
        }
    }

    pub fn coefficient(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Scalar> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Scalar> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> Vec<(K, Scalar)> {
        self.terms.into_iter().collect()
    }

    /// Applies a linear map given on keys.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> FormalSum<L>) -> FormalSum<L> {
        let mut out = FormalSum::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Keeps only the terms satisfying `keep`; returns whether anything was
    /// dropped.
    pub fn retain(&mut self, mut keep: impl FnMut(&K) -> bool) -> bool {
        let before = self.terms.len();
        self.terms.retain(|k, _| keep(k));
        before != self.terms.len()
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for FormalSum<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl<K: Ord + Clone> Add for FormalSum<K> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<'a, K: Ord + Clone> Add<&'a FormalSum<K>> for &'a FormalSum<K> {
    type Output = FormalSum<K>;
    fn add(self, rhs: &'a FormalSum<K>) -> FormalSum<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl<K: Ord + Clone> Sub for FormalSum<K> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.add_term(k, -c);
        }
        self
    }
}

impl<'a, K: Ord + Clone> Sub<&'a FormalSum<K>> for &'a FormalSum<K> {
    type Output = FormalSum<K>;
    fn sub(self, rhs: &'a FormalSum<K>) -> FormalSum<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl<K: Ord + Clone> Neg for FormalSum<K> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(&-Scalar::one())
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{k:?}")?;
        }
        Ok(())
    }
}
