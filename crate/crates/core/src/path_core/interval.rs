//! Maximal intervals of vertex subsets.
//!
//! Subsets of `{1..n}` are carried around as `u64` bitmasks with bit `p - 1`
//! standing for vertex `p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path_core::check_n;

/// A nonempty run of consecutive vertices `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u32,
    pub hi: u32,
}

impl Interval {
    pub fn new(lo: u32, hi: u32) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn len(&self) -> u32 {
        self.hi - self.lo + 1
    }

    /// Intervals are never empty; present for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: u32) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + Clone {
        self.lo..=self.hi
    }

    pub fn mask(&self) -> u64 {
        mask_of_range(self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// The maximal intervals of a vertex set, in increasing order.
///
/// Consecutive intervals satisfy `next.lo >= prev.hi + 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalDecomposition {
    intervals: Vec<Interval>,
}

impl IntervalDecomposition {
    /// Decomposes the set encoded by `mask`.
    pub fn of_mask(mask: u64) -> Self {
        let mut intervals = Vec::new();
        let mut rest = mask;
        while rest != 0 {
            let lo = rest.trailing_zeros();
            let run = (rest >> lo).trailing_ones();
            intervals.push(Interval::new(lo + 1, lo + run));
            rest &= !mask_of_range(lo + 1, lo + run);
        }
        IntervalDecomposition { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.intervals.iter()
    }

    /// Union of all intervals as a bitmask.
    pub fn mask(&self) -> u64 {
        self.intervals.iter().fold(0, |m, i| m | i.mask())
    }

    pub fn contains_interval(&self, interval: Interval) -> bool {
        self.intervals.contains(&interval)
    }
}

impl<'a> IntoIterator for &'a IntervalDecomposition {
    type Item = &'a Interval;
    type IntoIter = std::slice::Iter<'a, Interval>;

    fn into_iter(self) -> Self::IntoIter {
        self.intervals.iter()
    }
}

/// Splits `vertices` (a subset of `{1..n}`) into its maximal intervals.
pub fn maximal_intervals<I>(vertices: I, n: u32) -> Result<IntervalDecomposition>
where
    I: IntoIterator<Item = u32>,
{
    check_n(n)?;
    let mut mask = 0u64;
    for v in vertices {
        if v == 0 || v > n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        mask |= vertex_bit(v);
    }
    Ok(IntervalDecomposition::of_mask(mask))
}

#[inline]
pub(crate) fn vertex_bit(v: u32) -> u64 {
    1u64 << (v - 1)
}

/// Bitmask of `lo..=hi`, both 1-based.
#[inline]
pub(crate) fn mask_of_range(lo: u32, hi: u32) -> u64 {
    debug_assert!(1 <= lo && lo <= hi && hi <= 64);
    let width = hi - lo + 1;
    let run = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    run << (lo - 1)
}

/// Bitmask of the full vertex set `{1..n}`.
#[inline]
pub(crate) fn full_mask(n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        mask_of_range(1, n)
    }
}

/// Iterates the vertices of a mask in increasing order.
pub(crate) fn mask_vertices(mask: u64) -> impl Iterator<Item = u32> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let v = rest.trailing_zeros() + 1;
        rest &= rest - 1;
        Some(v)
    })
}
