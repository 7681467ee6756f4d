use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// Partition of the `N` subcarriers into available and nulled sets.
///
/// The public constructors speak 1-based subcarrier numbers (as in config
/// files); the query methods use 0-based positions into the symbol vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralMask {
    available: Vec<bool>,
}

impl SpectralMask {
    pub fn all_available(n_subcarriers: usize) -> Result<Self> {
        Self::from_nulled(n_subcarriers, std::iter::empty())
    }

    /// `nulled` holds 1-based subcarrier numbers; duplicates are ignored.
    pub fn from_nulled(
        n_subcarriers: usize,
        nulled: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if n_subcarriers == 0 {
            return Err(Error::InvalidMask(
                "number of subcarriers must be positive".into(),
            ));
        }
        let mut available = vec![true; n_subcarriers];
        for idx in nulled {
            if idx == 0 || idx > n_subcarriers {
                return Err(Error::InvalidMask(format!(
                    "nulled subcarrier {idx} outside 1..={n_subcarriers}"
                )));
            }
            available[idx - 1] = false;
        }
        if !available.iter().any(|&a| a) {
            return Err(Error::InvalidMask("every subcarrier is nulled".into()));
        }
        Ok(Self { available })
    }

    /// Inclusive 1-based ranges of nulled subcarriers.
    pub fn from_null_ranges(
        n_subcarriers: usize,
        ranges: &[RangeInclusive<usize>],
    ) -> Result<Self> {
        for r in ranges {
            if r.start() > r.end() {
                return Err(Error::InvalidMask(format!(
                    "empty range {}:{}",
                    r.start(),
                    r.end()
                )));
            }
        }
        Self::from_nulled(n_subcarriers, ranges.iter().flat_map(|r| r.clone()))
    }

    pub fn n_subcarriers(&self) -> usize {
        self.available.len()
    }

    pub fn is_available(&self, index: usize) -> bool {
        self.available[index]
    }

    pub fn num_available(&self) -> usize {
        self.available.iter().filter(|&&a| a).count()
    }

    /// 0-based positions of the available subcarriers, ascending.
    pub fn available_indices(&self) -> Vec<usize> {
        (0..self.available.len())
            .filter(|&i| self.available[i])
            .collect()
    }

    /// 1-based numbers of the nulled subcarriers, ascending.
    pub fn nulled_subcarriers(&self) -> Vec<usize> {
        (0..self.available.len())
            .filter(|&i| !self.available[i])
            .map(|i| i + 1)
            .collect()
    }
}
