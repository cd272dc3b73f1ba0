//! Exact sizes of `PAut(P_n)` and `IEnd(P_n)`.
//!
//! A domain `A ⊆ {1..n}` with `r` maximal runs, `s` vertices and `T` runs of
//! length at least two carries `2^T · r! · C(n - s + 1, r)` partial
//! automorphisms and `2^T · r! · C(n - s + r, r)` injective partial
//! endomorphisms (both counts are 1 for the empty domain). Summing over all
//! `2^n` domains gives the monoid sizes.
//!
//! Two enumerators back the formula: [`enumerate`] builds elements domain by
//! domain from run placements, and [`enumerate_naive`] filters every partial
//! injection through the membership predicates.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path_core::{
    all_partial_injections, check_n, full_mask, Family, Interval, IntervalDecomposition,
    PartialInjection, MAX_VERTICES,
};

/// Big counts travel as decimal strings.
mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.collect_str(v),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| t.parse().map_err(D::Error::custom))
                .transpose()
        }
    }
}

/// Default ceiling for element enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: u32 = 8;

/// Largest `n` accepted by the counting formula (it loops over `2^n` masks).
pub const MAX_FORMULA_N: u32 = 30;

/// Largest `n` for the naive enumerator (it visits every partial injection).
pub const MAX_NAIVE_N: u32 = 7;

/// A domain subset `A ⊆ {1..n}`, bit `p - 1` standing for vertex `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DomainMask {
    n: u32,
    bits: u64,
}

impl DomainMask {
    pub fn new(n: u32, bits: u64) -> Result<Self> {
        check_n(n)?;
        if bits & !full_mask(n) != 0 {
            return Err(Error::VertexOutOfRange {
                vertex: 64 - bits.leading_zeros(),
                n,
            });
        }
        Ok(DomainMask { n, bits })
    }

    /// Parses the 0/1 string `A(1) A(2) … A(n)`, e.g. `1101` for `{1, 2, 4}`.
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return Err(Error::Parse(format!("bad mask character {c:?}"))),
            }
        }
        DomainMask::new(s.chars().count() as u32, bits)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// `A(p)` with the sentinels `A(0) = A(n + 1) = 0`.
    pub fn get(&self, p: u32) -> bool {
        p >= 1 && p <= self.n && self.bits & (1 << (p - 1)) != 0
    }
}

impl fmt::Display for DomainMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.n {
            f.write_str(if self.get(p) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Per-domain statistics entering the counting formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskProfile {
    /// Left endpoints of maximal runs (`r_A`).
    #[serde(rename = "r")]
    pub runs: u32,
    /// Number of domain vertices (`s_A`).
    #[serde(rename = "s")]
    pub size: u32,
    /// Runs of length at least two (`T_A`).
    #[serde(rename = "T")]
    pub long_runs: u32,
    #[serde(rename = "q1", with = "decimal")]
    pub q_paut: BigUint,
    #[serde(rename = "q2", with = "decimal")]
    pub q_iend: BigUint,
    #[serde(rename = "t1", with = "decimal")]
    pub t_paut: BigUint,
    #[serde(rename = "t2", with = "decimal")]
    pub t_iend: BigUint,
}

impl MaskProfile {
    /// `2^T · t` for the requested family: the number of elements with this
    /// exact domain.
    pub fn contribution(&self, family: Family) -> BigUint {
        let t = match family {
            Family::PAut => &self.t_paut,
            Family::IEnd => &self.t_iend,
        };
        t << self.long_runs as usize
    }
}

/// `C(a, b)`, zero when `b > a`.
pub fn binomial(a: u32, b: u32) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(a), BigUint::from(b))
}

fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// `(r, s, T)` of a raw mask, using shifts for the sentinel comparisons.
#[inline]
fn raw_profile(bits: u64) -> (u32, u32, u32) {
    let starts = bits & !(bits << 1);
    let long = starts & (bits >> 1);
    (starts.count_ones(), bits.count_ones(), long.count_ones())
}

fn profile_from_counts(n: u32, r: u32, s: u32, t: u32) -> MaskProfile {
    let (q_paut, q_iend) = if s == 0 {
        (BigUint::one(), BigUint::one())
    } else {
        (binomial(n - s + 1, r), binomial(n - s + r, r))
    };
    let r_fact = factorial(r);
    MaskProfile {
        runs: r,
        size: s,
        long_runs: t,
        t_paut: &r_fact * &q_paut,
        t_iend: &r_fact * &q_iend,
        q_paut,
        q_iend,
    }
}

pub fn mask_profile(mask: DomainMask) -> MaskProfile {
    let (r, s, t) = raw_profile(mask.bits);
    profile_from_counts(mask.n, r, s, t)
}

fn check_formula_n(n: u32) -> Result<()> {
    check_n(n)?;
    if n > MAX_FORMULA_N {
        return Err(Error::ResourceBound {
            what: "counting formula vertex count",
            requested: n as u128,
            limit: MAX_FORMULA_N as u128,
        });
    }
    Ok(())
}

/// Histogram of masks by `(r, s, T)`, summed in parallel.
fn profile_histogram(n: u32) -> Vec<u64> {
    let dim = (n + 1) as usize;
    let index = move |r: u32, s: u32, t: u32| (r as usize * dim + s as usize) * dim + t as usize;
    (0u64..1 << n)
        .into_par_iter()
        .fold(
            || vec![0u64; dim * dim * dim],
            |mut acc, bits| {
                let (r, s, t) = raw_profile(bits);
                acc[index(r, s, t)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; dim * dim * dim],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn count_family(n: u32, family: Family) -> Result<BigUint> {
    check_formula_n(n)?;
    let dim = n + 1;
    let hist = profile_histogram(n);
    let mut total = BigUint::zero();
    for r in 0..dim {
        for s in 0..dim {
            for t in 0..dim {
                let masks = hist[((r * dim + s) * dim + t) as usize];
                if masks > 0 {
                    total += profile_from_counts(n, r, s, t).contribution(family) * masks;
                }
            }
        }
    }
    Ok(total)
}

/// `|PAut(P_n)|` from the counting formula.
pub fn count_paut(n: u32) -> Result<BigUint> {
    count_family(n, Family::PAut)
}

/// `|IEnd(P_n)|` from the counting formula.
pub fn count_iend(n: u32) -> Result<BigUint> {
    count_family(n, Family::IEnd)
}

/// One row of the per-mask breakdown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskRow {
    pub mask: String,
    pub profile: MaskProfile,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "decimal::option")]
    pub paut: Option<BigUint>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "decimal::option")]
    pub iend: Option<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "decimal::option")]
    pub paut_count: Option<BigUint>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "decimal::option")]
    pub iend_count: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_mask: Option<Vec<MaskRow>>,
}

/// Counts for the requested families, optionally with one row per mask
/// (rows are capped at `per_mask_limit` vertices).
pub fn count_report(
    n: u32,
    families: &[Family],
    per_mask: bool,
    per_mask_limit: u32,
) -> Result<CountReport> {
    check_formula_n(n)?;
    let has = |f| families.contains(&f);
    let per_mask = if per_mask {
        if n > per_mask_limit {
            return Err(Error::ResourceBound {
                what: "per-mask rows vertex count",
                requested: n as u128,
                limit: per_mask_limit as u128,
            });
        }
        let rows = (0u64..1 << n)
            .map(|bits| {
                let mask = DomainMask { n, bits };
                let profile = mask_profile(mask);
                MaskRow {
                    mask: mask.to_string(),
                    paut: has(Family::PAut).then(|| profile.contribution(Family::PAut)),
                    iend: has(Family::IEnd).then(|| profile.contribution(Family::IEnd)),
                    profile,
                }
            })
            .collect();
        Some(rows)
    } else {
        None
    };
    Ok(CountReport {
        n,
        paut_count: if has(Family::PAut) { Some(count_paut(n)?) } else { None },
        iend_count: if has(Family::IEnd) { Some(count_iend(n)?) } else { None },
        per_mask,
    })
}

fn check_enumeration(n: u32, limit: u32) -> Result<()> {
    check_n(n)?;
    if n > limit {
        return Err(Error::ResourceBound {
            what: "enumeration vertex count",
            requested: n as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

/// Splits `free` points into `slots` gaps, each gap receiving at least
/// `minimum[i]` points.
fn gap_layouts(free: u32, minimum: &[u32]) -> Vec<Vec<u32>> {
    let base: u32 = minimum.iter().sum();
    if base > free {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = minimum.to_vec();
    fn spread(extra: u32, slot: usize, current: &mut Vec<u32>, minimum: &[u32], out: &mut Vec<Vec<u32>>) {
        if slot + 1 == current.len() {
            current[slot] = minimum[slot] + extra;
            out.push(current.clone());
            return;
        }
        for e in 0..=extra {
            current[slot] = minimum[slot] + e;
            spread(extra - e, slot + 1, current, minimum, out);
        }
    }
    spread(free - base, 0, &mut current, minimum, &mut out);
    out
}

/// Every element of the family whose domain is exactly `mask`, built from
/// the ordering, placement and orientation of the image runs.
pub fn enumerate_with_domain(mask: DomainMask, family: Family) -> Vec<PartialInjection> {
    let n = mask.n;
    let runs: Vec<Interval> = IntervalDecomposition::of_mask(mask.bits).intervals().to_vec();
    if runs.is_empty() {
        return vec![PartialInjection::from_raw(n, [0; MAX_VERTICES])];
    }
    let r = runs.len();
    let s: u32 = runs.iter().map(Interval::len).sum();
    // gaps before the first image run, between runs, after the last
    let mut minimum = vec![0u32; r + 1];
    if family == Family::PAut {
        minimum[1..r].iter_mut().for_each(|m| *m = 1);
    }
    let layouts = gap_layouts(n - s, &minimum);
    let long: Vec<usize> = (0..r).filter(|&i| runs[i].len() >= 2).collect();

    let mut out = Vec::new();
    for order in (0..r).permutations(r) {
        for gaps in &layouts {
            // image start of each run, indexed by run
            let mut starts = vec![0u32; r];
            let mut cursor = 1 + gaps[0];
            for (pos, &run) in order.iter().enumerate() {
                starts[run] = cursor;
                cursor += runs[run].len() + gaps[pos + 1];
            }
            for flips in 0u32..1 << long.len() {
                let mut images = [0u8; MAX_VERTICES];
                for (i, run) in runs.iter().enumerate() {
                    let reversed = long
                        .iter()
                        .position(|&l| l == i)
                        .is_some_and(|bit| flips & (1 << bit) != 0);
                    for (offset, x) in run.iter().enumerate() {
                        let offset = offset as u32;
                        let y = if reversed {
                            starts[i] + run.len() - 1 - offset
                        } else {
                            starts[i] + offset
                        };
                        images[x as usize - 1] = y as u8;
                    }
                }
                out.push(PartialInjection::from_raw(n, images));
            }
        }
    }
    out
}

fn sort_by_text(mut elements: Vec<PartialInjection>) -> Vec<PartialInjection> {
    elements.sort_by_cached_key(|a| a.to_string());
    elements.dedup();
    elements
}

/// All elements of the family on `{1..n}`, sorted by text form.
pub fn enumerate(n: u32, family: Family, limit: u32) -> Result<Vec<PartialInjection>> {
    check_enumeration(n, limit)?;
    let shards: Vec<Vec<PartialInjection>> = (0u64..1 << n)
        .into_par_iter()
        .map(|bits| enumerate_with_domain(DomainMask { n, bits }, family))
        .collect();
    Ok(sort_by_text(shards.into_iter().flatten().collect()))
}

pub fn enumerate_paut(n: u32) -> Result<Vec<PartialInjection>> {
    enumerate(n, Family::PAut, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_iend(n: u32) -> Result<Vec<PartialInjection>> {
    enumerate(n, Family::IEnd, DEFAULT_ENUMERATION_LIMIT)
}

/// Reference enumerator: every partial injection of `{1..n}` filtered by the
/// membership predicate.
pub fn enumerate_naive(n: u32, family: Family) -> Result<Vec<PartialInjection>> {
    check_enumeration(n, MAX_NAIVE_N)?;
    let all = all_partial_injections(n)?;
    Ok(sort_by_text(
        all.into_iter().filter(|a| family.contains(a)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(s: &str) -> DomainMask {
        DomainMask::from_bit_string(s).unwrap()
    }

    #[test]
    fn zero_mask_profile() {
        let p = mask_profile(mask("0000"));
        assert_eq!((p.runs, p.size, p.long_runs), (0, 0, 0));
        assert_eq!(p.q_paut, BigUint::one());
        assert_eq!(p.q_iend, BigUint::one());
        assert_eq!(p.t_paut, BigUint::one());
        assert_eq!(p.t_iend, BigUint::one());
        assert_eq!(p.contribution(Family::PAut), BigUint::one());
    }

    #[test]
    fn mixed_mask_profile() {
        let p = mask_profile(mask("1101"));
        assert_eq!((p.runs, p.size, p.long_runs), (2, 3, 1));
        assert_eq!(p.q_paut, BigUint::from(1u32));
        assert_eq!(p.t_paut, BigUint::from(2u32));
        assert_eq!(p.contribution(Family::PAut), BigUint::from(4u32));
        // brute force: PAut elements with domain exactly {1,2,4}
        let brute = all_partial_injections(4)
            .unwrap()
            .into_iter()
            .filter(|a| a.domain_mask() == 0b1011 && crate::is_paut(a))
            .count();
        assert_eq!(brute, 4);
    }

    #[test]
    fn full_mask_profile() {
        let p = mask_profile(mask("1111"));
        assert_eq!((p.runs, p.size, p.long_runs), (1, 4, 1));
        assert_eq!(p.t_paut, BigUint::from(1u32));
        assert_eq!(p.contribution(Family::PAut), BigUint::from(2u32));
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_paut(1).unwrap(), BigUint::from(2u32));
        assert_eq!(count_paut(2).unwrap(), BigUint::from(7u32));
        assert_eq!(count_iend(1).unwrap(), BigUint::from(2u32));
        assert_eq!(count_iend(2).unwrap(), BigUint::from(7u32));
        assert!(count_iend(3).unwrap() > count_paut(3).unwrap());
    }

    #[test]
    fn binomial_is_total() {
        assert_eq!(binomial(2, 3), BigUint::zero());
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn bit_string_round_trip() {
        assert_eq!(mask("1101").bits(), 0b1011);
        assert_eq!(mask("1101").to_string(), "1101");
        assert!(DomainMask::from_bit_string("10x").is_err());
        assert!(DomainMask::new(3, 0b1000).is_err());
        assert!(mask("01").get(2) && !mask("01").get(3) && !mask("01").get(0));
    }

    #[test]
    fn enumerators_agree_small() {
        for n in 1..=5 {
            for family in [Family::PAut, Family::IEnd] {
                assert_eq!(
                    enumerate(n, family, 8).unwrap(),
                    enumerate_naive(n, family).unwrap(),
                    "n={n} {family}"
                );
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let p1: Vec<String> = enumerate_paut(1).unwrap().iter().map(|a| a.to_string()).collect();
        assert_eq!(p1, vec!["n=1;", "n=1;1>1"]);
        let i2: Vec<String> = enumerate_iend(2).unwrap().iter().map(|a| a.to_string()).collect();
        assert_eq!(
            i2,
            vec!["n=2;", "n=2;1>1", "n=2;1>1,2>2", "n=2;1>2", "n=2;1>2,2>1", "n=2;2>1", "n=2;2>2"]
        );
        let witness: PartialInjection = "n=3;1>1,3>2".parse().unwrap();
        assert!(enumerate_iend(3).unwrap().contains(&witness));
        assert!(!enumerate_paut(3).unwrap().contains(&witness));
    }

    #[test]
    fn refuses_beyond_limits() {
        assert!(enumerate(9, Family::PAut, 8).unwrap_err().is_resource_refusal());
        assert!(enumerate_naive(8, Family::PAut).unwrap_err().is_resource_refusal());
        assert!(count_paut(31).unwrap_err().is_resource_refusal());
        assert!(count_report(17, &[Family::PAut], true, 16).unwrap_err().is_resource_refusal());
    }

    #[test]
    fn report_shape() {
        let r = count_report(2, &[Family::PAut], true, 16).unwrap();
        assert_eq!(r.paut_count, Some(BigUint::from(7u32)));
        assert!(r.iend_count.is_none());
        let rows = r.per_mask.unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3].mask, "11");
        assert_eq!(rows[3].paut, Some(BigUint::from(2u32)));
    }
}
