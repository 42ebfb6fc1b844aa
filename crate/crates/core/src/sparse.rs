use crate::{Error, Result};

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new(entries: Vec<(usize, f64)>) -> Result<Self> {
        for pair in entries.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "sparse indices must be strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if entries.iter().any(|&(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "sparse values must be finite".into(),
            ));
        }
        Ok(SparseVector {
            entries: entries.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        })
    }

    /// Caller guarantees sorted unique indices; zeros are dropped.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(usize, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|p| p[0].0 < p[1].0));
        SparseVector {
            entries: entries.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|&(i, _)| i)
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum()
    }

    /// Dot product against a dense vector; indices beyond `dense` are an error.
    pub fn dot(&self, dense: &[f64]) -> Result<f64> {
        if let Some(index) = self.max_index().filter(|&i| i >= dense.len()) {
            return Err(Error::IndexOutOfRange {
                index,
                dim: dense.len(),
            });
        }
        Ok(self.dot_unchecked(dense))
    }

    pub(crate) fn dot_unchecked(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| dense[i] * v).sum()
    }

    /// `dense += scale * self`.
    pub(crate) fn axpy_into(&self, scale: f64, dense: &mut [f64]) {
        for &(i, v) in &self.entries {
            dense[i] += scale * v;
        }
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        SparseVector::from_sorted_unchecked(
            self.entries.iter().map(|&(i, v)| (i, v * factor)).collect(),
        )
    }
}
