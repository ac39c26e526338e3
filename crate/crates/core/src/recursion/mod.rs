//! Volume coefficients `c_{g,n}(α)` via Mirzakhani's topological recursion.
//!
//! `V_{g,n}(x) = Σ_{|α| ≤ 3g−3+n} c_{g,n}(α) Π_j x_j^{2α_j} / (2^{2α_j} (2α_j+1)!)`.
//! Coefficients are symmetric in `α`, so the table stores them under the
//! descending-sorted multi-index.

mod engine;
mod table;

pub use engine::{
    base_case, closure, coeff, fill, fill_signatures, sep_configs, sorted_keys, volume_poly,
    FillStats, Recursion, SepConfig, VolumePolynomial,
};
pub use table::{CoeffTable, Convention};

use std::fmt;

use crate::{Error, Result};

/// A pair `(g, n)` with `n ≥ 1` and `2g − 2 + n > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    g: u32,
    n: u32,
}

impl Signature {
    pub fn new(g: u32, n: u32) -> Result<Self> {
        if Self::is_valid(g, n) {
            Ok(Self { g, n })
        } else {
            Err(Error::InvalidSignature { g, n })
        }
    }

    pub fn is_valid(g: u32, n: u32) -> bool {
        n >= 1 && 2 * g as i64 - 2 + n as i64 > 0
    }

    /// `Some` iff `(g, n)` is valid; accepts signed inputs for offset arithmetic.
    pub fn checked(g: i64, n: i64) -> Option<Self> {
        if g < 0 || n < 1 || 2 * g - 2 + n <= 0 {
            None
        } else {
            Some(Self {
                g: g as u32,
                n: n as u32,
            })
        }
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `|χ| = 2g − 2 + n`.
    pub fn euler_abs(&self) -> u32 {
        2 * self.g + self.n - 2
    }

    /// Maximal `|α|` with nonzero coefficient: `3g − 3 + n`.
    pub fn degree_bound(&self) -> u32 {
        3 * self.g + self.n - 3
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g, self.n)
    }
}

/// A multi-index `α ∈ ℕ₀ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|α| = Σ α_i`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `|α|_∞`.
    pub fn sup(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Descending-sorted copy, the canonical table key.
    pub fn canonical(&self) -> Vec<u32> {
        canonical(&self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        Self(v.to_vec())
    }
}

pub(crate) fn canonical(alpha: &[u32]) -> Vec<u32> {
    let mut k = alpha.to_vec();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_validity() {
        assert!(Signature::new(0, 3).is_ok());
        assert!(Signature::new(1, 1).is_ok());
        assert!(Signature::new(0, 2).is_err());
        assert!(Signature::new(1, 0).is_err());
        assert!(Signature::new(2, 0).is_err());
        let s = Signature::new(2, 3).unwrap();
        assert_eq!(s.euler_abs(), 5);
        assert_eq!(s.degree_bound(), 6);
    }

    #[test]
    fn multi_index_norms() {
        let a = MultiIndex::new(vec![1, 4, 2]);
        assert_eq!(a.total(), 7);
        assert_eq!(a.sup(), 4);
        assert_eq!(a.canonical(), vec![4, 2, 1]);
    }
}
