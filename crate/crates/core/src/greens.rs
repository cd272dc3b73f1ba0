//! Green's relations on `IEnd(P_n)` and `PAut(P_n)`.
//!
//! The predicates work directly on domains, images and interval types. The
//! oracle computes principal ideals inside an explicitly enumerated monoid and
//! is meant for cross-checking at small `n`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path_core::{is_iend, is_paut, Interval, PartialInjection};

/// Sizes of the maximal domain intervals that land in one image interval,
/// listed in the order of their images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeSequence {
    sizes: Vec<u32>,
}

impl TypeSequence {
    pub fn new(sizes: Vec<u32>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Invariant(format!("bad type sequence {sizes:?}")));
        }
        Ok(TypeSequence { sizes })
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn total(&self) -> u32 {
        self.sizes.iter().sum()
    }

    pub fn reverse(&self) -> TypeSequence {
        let mut sizes = self.sizes.clone();
        sizes.reverse();
        TypeSequence { sizes }
    }

    /// The lexicographically smaller of the sequence and its reversal.
    pub fn normalized(&self) -> TypeSequence {
        let rev = self.reverse();
        if rev < *self {
            rev
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for TypeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.sizes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

fn require_iend(a: &PartialInjection) -> Result<()> {
    if is_iend(a) {
        Ok(())
    } else {
        Err(Error::NotInIEnd(a.to_string()))
    }
}

fn require_pair(a: &PartialInjection, b: &PartialInjection) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    require_iend(a)?;
    require_iend(b)
}

/// Maximal domain intervals with their images, for a map already known to be in `IEnd`.
fn blocks_with_images(a: &PartialInjection) -> Vec<(Interval, Interval)> {
    a.domain_intervals()
        .iter()
        .map(|&block| {
            let x = a.apply(block.lo).expect("block lies in the domain");
            let y = a.apply(block.hi).expect("block lies in the domain");
            (block, Interval::new(x.min(y), x.max(y)))
        })
        .collect()
}

fn types_unchecked(a: &PartialInjection) -> Vec<TypeSequence> {
    let mut blocks = blocks_with_images(a);
    blocks.sort_by_key(|&(_, img)| img.lo);
    a.image_intervals()
        .iter()
        .map(|j| TypeSequence {
            sizes: blocks
                .iter()
                .filter(|(_, img)| j.contains(img.lo))
                .map(|(block, _)| block.len())
                .collect(),
        })
        .collect()
}

/// The type of the maximal image interval `j` of `a`.
pub fn type_sequence(a: &PartialInjection, j: Interval) -> Result<TypeSequence> {
    require_iend(a)?;
    let image = a.image_intervals();
    let pos = image
        .iter()
        .position(|&k| k == j)
        .ok_or(Error::NotMaximalInterval { lo: j.lo, hi: j.hi })?;
    Ok(types_unchecked(a).swap_remove(pos))
}

/// Normalized types of all image intervals, sorted; equal keys mean similar type.
pub fn type_key(a: &PartialInjection) -> Result<Vec<TypeSequence>> {
    require_iend(a)?;
    let mut key: Vec<_> = types_unchecked(a).iter().map(TypeSequence::normalized).collect();
    key.sort();
    Ok(key)
}

pub fn similar_type(a: &PartialInjection, b: &PartialInjection) -> Result<bool> {
    require_pair(a, b)?;
    Ok(type_key(a)? == type_key(b)?)
}

pub fn l_related(a: &PartialInjection, b: &PartialInjection) -> Result<bool> {
    require_pair(a, b)?;
    Ok(a.image_mask() == b.image_mask() && is_paut(&a.then(&b.inverse())))
}

pub fn r_related(a: &PartialInjection, b: &PartialInjection) -> Result<bool> {
    require_pair(a, b)?;
    Ok(a.domain_mask() == b.domain_mask() && is_paut(&a.inverse().then(b)))
}

pub fn h_related(a: &PartialInjection, b: &PartialInjection) -> Result<bool> {
    Ok(l_related(a, b)? && r_related(a, b)?)
}

pub fn j_related(a: &PartialInjection, b: &PartialInjection) -> Result<bool> {
    similar_type(a, b)
}

/// Alternative `L` test: both maps send their maximal domain intervals onto
/// the same collection of intervals.
pub fn same_block_images(a: &PartialInjection, b: &PartialInjection) -> Result<bool> {
    require_pair(a, b)?;
    let images = |x: &PartialInjection| {
        let mut v: Vec<Interval> = blocks_with_images(x).into_iter().map(|(_, img)| img).collect();
        v.sort();
        v
    };
    Ok(images(a) == images(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    L,
    R,
    H,
    J,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::L, Relation::R, Relation::H, Relation::J];

    pub fn holds(self, a: &PartialInjection, b: &PartialInjection) -> Result<bool> {
        match self {
            Relation::L => l_related(a, b),
            Relation::R => r_related(a, b),
            Relation::H => h_related(a, b),
            Relation::J => j_related(a, b),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::L => "L",
            Relation::R => "R",
            Relation::H => "H",
            Relation::J => "J",
        };
        f.write_str(s)
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "L" => Ok(Relation::L),
            "R" => Ok(Relation::R),
            "H" => Ok(Relation::H),
            "J" | "D" => Ok(Relation::J),
            other => Err(Error::Parse(format!("unknown relation {other:?}"))),
        }
    }
}

/// A partition into equivalence classes, stored canonically: each class
/// sorted, classes ordered by their least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreensClassification {
    pub relation: Relation,
    pub classes: Vec<Vec<PartialInjection>>,
}

impl GreensClassification {
    fn canonical(relation: Relation, mut classes: Vec<Vec<PartialInjection>>) -> Self {
        for c in &mut classes {
            c.sort();
        }
        classes.sort_by(|x, y| x[0].cmp(&y[0]));
        GreensClassification { relation, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn element_count(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// Same partition, ignoring which relation produced it.
    pub fn same_partition(&self, other: &GreensClassification) -> bool {
        self.classes == other.classes
    }
}

/// Groups `elements` (deduplicated) by a key function.
pub fn partition_by_key<K, F>(relation: Relation, elements: &[PartialInjection], key: F) -> Result<GreensClassification>
where
    K: std::hash::Hash + Eq + Send,
    F: Fn(&PartialInjection) -> Result<K> + Sync,
{
    let keyed = elements
        .par_iter()
        .map(|a| key(a).map(|k| (k, *a)))
        .collect::<Result<Vec<_>>>()?;
    let mut groups: HashMap<K, Vec<PartialInjection>> = HashMap::new();
    for (k, a) in keyed {
        groups.entry(k).or_default().push(a);
    }
    let classes = groups
        .into_values()
        .map(|mut c| {
            c.sort();
            c.dedup();
            c
        })
        .collect();
    Ok(GreensClassification::canonical(relation, classes))
}

/// Partitions `elements` with the relation predicates.
pub fn classify(elements: &[PartialInjection], relation: Relation) -> Result<GreensClassification> {
    let mut sorted = elements.to_vec();
    sorted.sort();
    sorted.dedup();
    if relation == Relation::J {
        return partition_by_key(relation, &sorted, type_key);
    }
    let mut reps: Vec<PartialInjection> = Vec::new();
    let mut classes: Vec<Vec<PartialInjection>> = Vec::new();
    for a in sorted {
        let hit = reps
            .par_iter()
            .map(|r| relation.holds(r, &a))
            .collect::<Result<Vec<bool>>>()?
            .iter()
            .position(|&x| x);
        match hit {
            Some(i) => classes[i].push(a),
            None => {
                reps.push(a);
                classes.push(vec![a]);
            }
        }
    }
    Ok(GreensClassification::canonical(relation, classes))
}

/// Partition by principal ideals computed inside `monoid`.
///
/// `H` is the common refinement of the `L` and `R` partitions.
pub fn oracle_relation(monoid: &[PartialInjection], relation: Relation) -> Result<GreensClassification> {
    let mut elems = monoid.to_vec();
    elems.sort();
    elems.dedup();
    let Some(first) = elems.first() else {
        return Ok(GreensClassification::canonical(relation, Vec::new()));
    };
    let n = first.n();
    if elems.iter().any(|e| e.n() != n) {
        return Err(Error::Invariant("mixed vertex counts".into()));
    }
    let id = PartialInjection::identity(n)?;
    if elems.binary_search(&id).is_err() {
        return Err(Error::Invariant("monoid lacks the identity".into()));
    }
    let index: HashMap<PartialInjection, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let size = elems.len();
    let words = size.div_ceil(64);

    // table[i * size + j] = index of elems[i] then elems[j]
    let table = (0..size)
        .into_par_iter()
        .map(|i| {
            (0..size)
                .map(|j| index.get(&elems[i].then(&elems[j])).copied().ok_or(Error::NotClosed))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .concat();

    let bitset = |members: &mut dyn Iterator<Item = usize>| {
        let mut bits = vec![0u64; words];
        for m in members {
            bits[m / 64] |= 1 << (m % 64);
        }
        bits
    };
    // left ideal M·a and right ideal a·M
    let left: Vec<Vec<u64>> = (0..size)
        .into_par_iter()
        .map(|a| bitset(&mut (0..size).map(|s| table[s * size + a])))
        .collect();
    let right: Vec<Vec<u64>> = (0..size)
        .into_par_iter()
        .map(|a| bitset(&mut (0..size).map(|s| table[a * size + s])))
        .collect();

    let keys: Vec<Vec<u64>> = match relation {
        Relation::L => left,
        Relation::R => right,
        Relation::H => left
            .into_iter()
            .zip(right)
            .map(|(mut l, r)| {
                l.extend(r);
                l
            })
            .collect(),
        // M·a·M as the union of the right ideals of the members of M·a
        Relation::J => left
            .par_iter()
            .map(|l| {
                let mut acc = vec![0u64; words];
                for (w, &bits) in l.iter().enumerate() {
                    let mut rest = bits;
                    while rest != 0 {
                        let m = w * 64 + rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        for (dst, src) in acc.iter_mut().zip(&right[m]) {
                            *dst |= src;
                        }
                    }
                }
                acc
            })
            .collect(),
    };

    let mut groups: HashMap<&[u64], Vec<PartialInjection>> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        groups.entry(k.as_slice()).or_default().push(elems[i]);
    }
    Ok(GreensClassification::canonical(relation, groups.into_values().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{enumerate_iend, enumerate_paut};

    fn pi(s: &str) -> PartialInjection {
        s.parse().unwrap()
    }

    #[test]
    fn type_examples() {
        let a = pi("n=5;1>2,2>3,4>4");
        assert_eq!(type_sequence(&a, Interval::new(2, 4)).unwrap().sizes(), &[2, 1]);
        let id = PartialInjection::identity(6).unwrap();
        assert_eq!(type_sequence(&id, Interval::new(1, 6)).unwrap().sizes(), &[6]);
        assert_eq!(
            type_sequence(&a, Interval::new(2, 3)),
            Err(Error::NotMaximalInterval { lo: 2, hi: 3 })
        );
        assert!(type_sequence(&pi("n=3;1>1,2>3"), Interval::new(1, 1)).is_err());
    }

    #[test]
    fn paut_types_are_singletons() {
        for a in enumerate_paut(5).unwrap() {
            for j in a.image_intervals().iter() {
                assert_eq!(type_sequence(&a, *j).unwrap().sizes(), &[j.len()]);
            }
        }
    }

    #[test]
    fn reversal_and_normalization() {
        let t = TypeSequence::new(vec![3, 1, 2]).unwrap();
        assert_eq!(t.reverse().reverse(), t);
        assert_eq!(t.normalized().sizes(), &[2, 1, 3]);
        assert_eq!(t.to_string(), "(3,1,2)");
        assert!(TypeSequence::new(vec![]).is_err());
    }

    #[test]
    fn predicate_examples() {
        let id12 = pi("n=5;1>1,2>2");
        let id45 = pi("n=5;4>4,5>5");
        assert!(similar_type(&id12, &id45).unwrap());
        let w = pi("n=3;1>1,3>2");
        let id3_12 = pi("n=3;1>1,2>2");
        assert!(!similar_type(&w, &id3_12).unwrap());
        assert!(!l_related(&w, &id3_12).unwrap());
        assert!(l_related(&pi("n=4;1>1,2>2"), &pi("n=4;1>2,2>1")).unwrap());
        assert!(h_related(&PartialInjection::identity(4).unwrap(), &pi("n=4;1>4,2>3,3>2,4>1")).unwrap());
        assert!(!h_related(&id3_12, &pi("n=3;2>2,3>3")).unwrap());
        assert!(j_related(&id3_12, &pi("n=3;2>2,3>3")).unwrap());
        assert!(!j_related(&PartialInjection::empty(3).unwrap(), &PartialInjection::identity(3).unwrap()).unwrap());
        assert!(l_related(&w, &pi("n=3;1>1,2>3")).is_err());
    }

    #[test]
    fn r_related_alpha_tau() {
        for n in 2..=6 {
            let alpha = crate::genwords::make_generator(crate::genwords::GeneratorSymbol::Alpha(1), n).unwrap();
            let tau = crate::genwords::make_generator(crate::genwords::GeneratorSymbol::Tau, n).unwrap();
            assert!(r_related(&alpha, &alpha.then(&tau)).unwrap());
        }
    }

    #[test]
    fn oracle_small_cases() {
        let p1 = enumerate_paut(1).unwrap();
        assert_eq!(oracle_relation(&p1, Relation::J).unwrap().len(), 2);
        let p2 = enumerate_paut(2).unwrap();
        let j = oracle_relation(&p2, Relation::J).unwrap();
        let sizes: Vec<usize> = j.classes.iter().map(Vec::len).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 4]);
        let not_closed = vec![PartialInjection::identity(3).unwrap(), pi("n=3;1>2")];
        assert_eq!(oracle_relation(&not_closed, Relation::L), Err(Error::NotClosed));
    }

    #[test]
    fn predicates_match_oracle_iend_small() {
        for n in 1..=4 {
            let m = enumerate_iend(n).unwrap();
            for rel in Relation::ALL {
                let o = oracle_relation(&m, rel).unwrap();
                let p = classify(&m, rel).unwrap();
                assert_eq!(o, p, "n={n} rel={rel}");
            }
        }
    }

    #[test]
    fn block_image_condition_matches() {
        for n in 1..=4 {
            let m = enumerate_iend(n).unwrap();
            for a in &m {
                for b in &m {
                    assert_eq!(same_block_images(a, b).unwrap(), l_related(a, b).unwrap(), "{a} {b}");
                }
            }
        }
    }
}
