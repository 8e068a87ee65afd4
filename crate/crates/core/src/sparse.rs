//! Sparse vectors: the row type of the document-term matrix and the
//! feature representation consumed by every classifier.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A sparse real vector: (index, value) entries sorted strictly ascending
/// by index, with no explicit zeros stored.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, f64)>", into = "Vec<(usize, f64)>")]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn empty() -> Self {
        SparseVector::default()
    }

    /// Builds from entries that are already sorted strictly ascending.
    /// Zero values are dropped; out-of-order input is a caller bug.
    pub fn from_sorted(entries: Vec<(usize, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        let entries = entries.into_iter().filter(|&(_, v)| v != 0.0).collect();
        SparseVector { entries }
    }

    /// Builds from an index→value map (sorted by construction).
    pub fn from_map(map: BTreeMap<usize, f64>) -> Self {
        SparseVector {
            entries: map.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest stored index, if any entry exists.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|&(i, _)| i)
    }

    pub fn value(&self, index: usize) -> f64 {
        match self.entries.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    /// Sum of stored values.
    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v).sum()
    }

    /// Dot product against a dense weight slice. Every stored index must be
    /// within the slice.
    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * dense[i]).sum()
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    /// Applies `f` to every stored value, dropping entries that become zero.
    pub fn map_values(&self, mut f: impl FnMut(usize, f64) -> f64) -> SparseVector {
        SparseVector {
            entries: self
                .entries
                .iter()
                .map(|&(i, v)| (i, f(i, v)))
                .filter(|&(_, v)| v != 0.0)
                .collect(),
        }
    }

    /// Scales to unit Euclidean norm; the zero vector is returned unchanged.
    pub fn l2_normalized(&self) -> SparseVector {
        let norm = self.norm();
        if norm == 0.0 {
            return self.clone();
        }
        self.map_values(|_, v| v / norm)
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|&(_, v)| v.is_finite())
    }
}

impl TryFrom<Vec<(usize, f64)>> for SparseVector {
    type Error = String;

    fn try_from(entries: Vec<(usize, f64)>) -> Result<Self, Self::Error> {
        for window in entries.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(format!(
                    "sparse entries not strictly ascending: index {} then {}",
                    window[0].0, window[1].0
                ));
            }
        }
        if let Some(&(i, v)) = entries.iter().find(|&&(_, v)| v == 0.0 || !v.is_finite()) {
            return Err(format!("invalid stored value {v} at index {i}"));
        }
        Ok(SparseVector { entries })
    }
}

impl From<SparseVector> for Vec<(usize, f64)> {
    fn from(v: SparseVector) -> Self {
        v.entries
    }
}
