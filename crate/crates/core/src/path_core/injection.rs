use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path_core::interval::{full_mask, mask_vertices, vertex_bit, IntervalDecomposition};
use crate::path_core::{check_n, MAX_VERTICES};

/// A partial injective map on the vertex set `{1..n}` of the path `P_n`.
///
/// Composition is a right action: `x (a ∘ b) = (x a) b`, so
/// [`compose`](Self::compose) applies `self` first.
///
/// The map is stored as an image table indexed by domain vertex, which makes
/// the representation canonical: two values are equal iff they have the same
/// `n` and the same pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "InjectionRepr", into = "InjectionRepr")]
pub struct PartialInjection {
    n: u8,
    // images[p - 1] is the image of p, 0 when p is not in the domain
    images: [u8; MAX_VERTICES],
}

impl PartialInjection {
    /// Builds a map from `(domain, image)` pairs in any order.
    pub fn new<I>(n: u32, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        check_n(n)?;
        let mut images = [0u8; MAX_VERTICES];
        let mut seen = 0u64;
        for (x, y) in pairs {
            for v in [x, y] {
                if v == 0 || v > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if images[x as usize - 1] != 0 {
                return Err(Error::DuplicateDomain(x));
            }
            if seen & vertex_bit(y) != 0 {
                return Err(Error::NotInjective(y));
            }
            seen |= vertex_bit(y);
            images[x as usize - 1] = y as u8;
        }
        Ok(PartialInjection { n: n as u8, images })
    }

    /// Builds a map from a full image table: `table[p - 1]` is the image of
    /// `p`, or `None` when `p` is outside the domain.
    pub fn from_table(n: u32, table: &[Option<u32>]) -> Result<Self> {
        if table.len() != n as usize {
            return Err(Error::Parse(format!(
                "image table has {} entries for n = {n}",
                table.len()
            )));
        }
        Self::new(
            n,
            table
                .iter()
                .enumerate()
                .filter_map(|(i, y)| y.map(|y| (i as u32 + 1, y))),
        )
    }

    pub fn identity(n: u32) -> Result<Self> {
        Self::restricted_identity(n, full_mask(n))
    }

    /// The zero of the monoid: the map with empty domain.
    pub fn empty(n: u32) -> Result<Self> {
        Self::new(n, [])
    }

    /// Identity restricted to the vertices in `mask`.
    pub fn restricted_identity(n: u32, mask: u64) -> Result<Self> {
        check_n(n)?;
        if mask & !full_mask(n) != 0 {
            return Err(Error::VertexOutOfRange {
                vertex: 64 - mask.leading_zeros(),
                n,
            });
        }
        Self::new(n, mask_vertices(mask).map(|v| (v, v)))
    }

    /// Unchecked constructor for callers that already hold a valid table.
    pub(crate) fn from_raw(n: u32, images: [u8; MAX_VERTICES]) -> Self {
        debug_assert!({
            let mut seen = 0u64;
            images[..n as usize].iter().all(|&y| {
                let fresh = y == 0 || (y as u32 <= n && seen & vertex_bit(y as u32) == 0);
                if y != 0 {
                    seen |= vertex_bit(y as u32);
                }
                fresh
            }) && images[n as usize..].iter().all(|&y| y == 0)
        });
        PartialInjection {
            n: n as u8,
            images,
        }
    }

    pub fn n(&self) -> u32 {
        self.n as u32
    }

    /// Image of `x`, if `x` is in the domain.
    #[inline]
    pub fn apply(&self, x: u32) -> Option<u32> {
        if x == 0 || x > self.n() {
            return None;
        }
        match self.images[x as usize - 1] {
            0 => None,
            y => Some(y as u32),
        }
    }

    /// `(domain, image)` pairs sorted by domain vertex.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.images[..self.n as usize]
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != 0)
            .map(|(i, &y)| (i as u32 + 1, y as u32))
    }

    pub fn domain_mask(&self) -> u64 {
        self.pairs().fold(0, |m, (x, _)| m | vertex_bit(x))
    }

    pub fn image_mask(&self) -> u64 {
        self.pairs().fold(0, |m, (_, y)| m | vertex_bit(y))
    }

    pub fn domain(&self) -> Vec<u32> {
        self.pairs().map(|(x, _)| x).collect()
    }

    pub fn image(&self) -> Vec<u32> {
        mask_vertices(self.image_mask()).collect()
    }

    /// Size of the domain.
    pub fn rank(&self) -> u32 {
        self.images[..self.n as usize]
            .iter()
            .filter(|&&y| y != 0)
            .count() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.rank() == 0
    }

    pub fn domain_intervals(&self) -> IntervalDecomposition {
        IntervalDecomposition::of_mask(self.domain_mask())
    }

    pub fn image_intervals(&self) -> IntervalDecomposition {
        IntervalDecomposition::of_mask(self.image_mask())
    }

    /// `self` followed by `other`; fails when the vertex counts differ.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self.then(other))
    }

    /// `self` followed by `other`.
    ///
    /// Panics when the vertex counts differ; use [`compose`](Self::compose)
    /// for a checked version.
    #[inline]
    pub fn then(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "composing maps on different vertex counts");
        let mut images = [0u8; MAX_VERTICES];
        for (slot, &y) in images.iter_mut().zip(&self.images[..self.n as usize]) {
            if y != 0 {
                *slot = other.images[y as usize - 1];
            }
        }
        PartialInjection { n: self.n, images }
    }

    pub fn inverse(&self) -> Self {
        let mut images = [0u8; MAX_VERTICES];
        for (x, y) in self.pairs() {
            images[y as usize - 1] = x as u8;
        }
        PartialInjection { n: self.n, images }
    }

    /// Restriction of `self` to the vertices of `mask`.
    pub fn restrict(&self, mask: u64) -> Self {
        let mut images = self.images;
        for (i, slot) in images.iter_mut().enumerate() {
            if mask & (1u64 << i) == 0 {
                *slot = 0;
            }
        }
        PartialInjection { n: self.n, images }
    }

    /// True for the identity on all of `{1..n}`.
    pub fn is_identity(&self) -> bool {
        (1..=self.n()).all(|x| self.apply(x) == Some(x))
    }
}

impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}>{y}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialInjection({self})")
    }
}

/// Parses the text form `n=5;1>3,2>4` (empty map: `n=5;`).
impl FromStr for PartialInjection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (header, body) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
        let n = header
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}, expected n=<k>")))?;
        let body = body.trim();
        let mut pairs = Vec::new();
        if !body.is_empty() {
            for item in body.split(',') {
                let (x, y) = item
                    .split_once('>')
                    .ok_or_else(|| Error::Parse(format!("bad pair {item:?}, expected x>y")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad vertex {t:?}")))
                };
                pairs.push((parse(x)?, parse(y)?));
            }
        }
        PartialInjection::new(n, pairs)
    }
}

#[derive(Serialize, Deserialize)]
struct InjectionRepr {
    n: u32,
    pairs: Vec<[u32; 2]>,
}

impl TryFrom<InjectionRepr> for PartialInjection {
    type Error = Error;

    fn try_from(r: InjectionRepr) -> Result<Self> {
        PartialInjection::new(r.n, r.pairs.into_iter().map(|[x, y]| (x, y)))
    }
}

impl From<PartialInjection> for InjectionRepr {
    fn from(a: PartialInjection) -> Self {
        InjectionRepr {
            n: a.n(),
            pairs: a.pairs().map(|(x, y)| [x, y]).collect(),
        }
    }
}

/// All partial injections of `{1..n}`, grouped by domain mask.
///
/// There are `Σ_k C(n,k)² k!` of them, so callers should keep `n` small.
pub fn all_partial_injections(n: u32) -> Result<Vec<PartialInjection>> {
    check_n(n)?;
    let mut out = Vec::new();
    let mut images = [0u8; MAX_VERTICES];
    fn assign(
        n: u32,
        x: u32,
        used: u64,
        images: &mut [u8; MAX_VERTICES],
        out: &mut Vec<PartialInjection>,
    ) {
        if x > n {
            out.push(PartialInjection::from_raw(n, *images));
            return;
        }
        images[x as usize - 1] = 0;
        assign(n, x + 1, used, images, out);
        for y in 1..=n {
            if used & vertex_bit(y) == 0 {
                images[x as usize - 1] = y as u8;
                assign(n, x + 1, used | vertex_bit(y), images, out);
            }
        }
        images[x as usize - 1] = 0;
    }
    assign(n, 1, 0, &mut images, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(s: &str) -> PartialInjection {
        s.parse().unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = pi("n=4;1>3,2>4,4>1");
        let id = PartialInjection::identity(4).unwrap();
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(a.compose(&id).unwrap(), a);
    }

    #[test]
    fn alpha_one_squared() {
        let a1 = pi("n=4;2>4,3>3,4>2");
        let sq = a1.then(&a1);
        assert_eq!(sq, PartialInjection::restricted_identity(4, 0b1110).unwrap());
    }

    #[test]
    fn composition_is_right_action() {
        let a = pi("n=3;1>2");
        let b = pi("n=3;2>3");
        assert_eq!(a.then(&b), pi("n=3;1>3"));
        assert!(b.then(&a).is_empty());
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let a = PartialInjection::identity(3).unwrap();
        let b = PartialInjection::identity(4).unwrap();
        assert_eq!(
            a.compose(&b),
            Err(Error::SizeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn inverse_examples() {
        let e = PartialInjection::empty(5).unwrap();
        assert_eq!(e.inverse(), e);
        assert_eq!(pi("n=4;1>3,2>4").inverse(), pi("n=4;3>1,4>2"));
        let tau = pi("n=5;1>5,2>4,3>3,4>2,5>1");
        assert_eq!(tau.inverse(), tau);
    }

    #[test]
    fn text_format() {
        let a = pi("n=5;2>4,1>3");
        assert_eq!(a.to_string(), "n=5;1>3,2>4");
        assert_eq!(PartialInjection::empty(5).unwrap().to_string(), "n=5;");
        assert_eq!(pi(" n=5 ; 1 > 3 "), pi("n=5;1>3"));
    }

    #[test]
    fn parser_rejects_bad_input() {
        assert_eq!(
            "n=3;1>2,1>3".parse::<PartialInjection>(),
            Err(Error::DuplicateDomain(1))
        );
        assert_eq!(
            "n=3;1>2,3>2".parse::<PartialInjection>(),
            Err(Error::NotInjective(2))
        );
        assert_eq!(
            "n=3;1>4".parse::<PartialInjection>(),
            Err(Error::VertexOutOfRange { vertex: 4, n: 3 })
        );
        assert!("n=0;".parse::<PartialInjection>().is_err());
        assert!("n=3".parse::<PartialInjection>().is_err());
        assert!("m=3;".parse::<PartialInjection>().is_err());
        assert!("n=3;1-2".parse::<PartialInjection>().is_err());
        assert!("n=3;1>x".parse::<PartialInjection>().is_err());
    }

    #[test]
    fn json_format() {
        let a = pi("n=5;1>3,2>4");
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"n":5,"pairs":[[1,3],[2,4]]}"#);
        let back: PartialInjection = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<PartialInjection>(r#"{"n":2,"pairs":[[1,1],[2,1]]}"#).is_err());
    }

    #[test]
    fn counts_all_partial_injections() {
        // Σ_k C(n,k)^2 k!
        let expected = [2usize, 7, 34, 209, 1546, 13327];
        for (n, &want) in (1..=6).zip(expected.iter()) {
            let all = all_partial_injections(n).unwrap();
            assert_eq!(all.len(), want);
            let set: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(set.len(), want);
        }
    }

    #[test]
    fn restriction_and_masks() {
        let a = pi("n=5;1>3,2>4,5>1");
        assert_eq!(a.domain_mask(), 0b10011);
        assert_eq!(a.image_mask(), 0b01101);
        assert_eq!(a.restrict(0b00011), pi("n=5;1>3,2>4"));
        assert_eq!(a.rank(), 3);
        assert_eq!(a.image(), vec![1, 3, 4]);
    }
}
