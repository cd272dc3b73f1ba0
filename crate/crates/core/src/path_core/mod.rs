//! Partial injections of `{1..n}` and membership in `IEnd(P_n)` / `PAut(P_n)`.

mod injection;
mod interval;

pub use injection::{all_partial_injections, PartialInjection};
pub use interval::{maximal_intervals, Interval, IntervalDecomposition};

pub(crate) use interval::{full_mask, vertex_bit};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 32;

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 || n as usize > MAX_VERTICES {
        return Err(Error::InvalidVertexCount {
            n,
            max: MAX_VERTICES as u32,
        });
    }
    Ok(())
}

/// The two monoids studied here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Partial automorphisms `PAut(P_n)`.
    PAut,
    /// Injective partial endomorphisms `IEnd(P_n)`.
    IEnd,
}

impl Family {
    pub fn contains(self, a: &PartialInjection) -> bool {
        match self {
            Family::PAut => is_paut(a),
            Family::IEnd => is_iend(a),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::PAut => "paut",
            Family::IEnd => "iend",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paut" => Ok(Family::PAut),
            "iend" => Ok(Family::IEnd),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// Image interval of one maximal domain interval, if `a` maps it monotonically
/// onto a run of consecutive vertices.
fn monotone_image(a: &PartialInjection, block: Interval) -> Option<Interval> {
    let first = a.apply(block.lo)?;
    if block.len() == 1 {
        return Some(Interval::new(first, first));
    }
    let second = a.apply(block.lo + 1)?;
    let increasing = second > first;
    let mut prev = first;
    for x in block.lo + 1..=block.hi {
        let y = a.apply(x)?;
        if (y > prev) != increasing {
            return None;
        }
        prev = y;
    }
    let (lo, hi) = if increasing { (first, prev) } else { (prev, first) };
    (hi - lo + 1 == block.len()).then(|| Interval::new(lo, hi))
}

/// Membership in `IEnd(P_n)`: every maximal domain interval is mapped
/// monotonically onto an interval.
pub fn is_iend(a: &PartialInjection) -> bool {
    a.domain_intervals()
        .iter()
        .all(|&block| monotone_image(a, block).is_some())
}

/// Membership in `PAut(P_n)`: as [`is_iend`], and each maximal domain interval
/// lands on a maximal interval of the image.
pub fn is_paut(a: &PartialInjection) -> bool {
    let image = a.image_mask();
    a.domain_intervals().iter().all(|&block| {
        monotone_image(a, block).is_some_and(|j| {
            let below = j.lo > 1 && image & vertex_bit(j.lo - 1) != 0;
            let above = image & (1u64 << j.hi) != 0;
            !below && !above
        })
    })
}

/// Edge-by-edge reference check: `{u,v}` an edge of `P_n` with both ends in
/// the domain implies `{ua,va}` is an edge.
pub fn preserves_path_edges(a: &PartialInjection) -> bool {
    let is_edge = |u: u32, v: u32| u.abs_diff(v) == 1;
    let pairs: Vec<_> = a.pairs().collect();
    pairs.iter().all(|&(u, ua)| {
        pairs
            .iter()
            .all(|&(v, va)| !is_edge(u, v) || is_edge(ua, va))
    })
}
