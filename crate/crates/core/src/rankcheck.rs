//! Closures of generating sets, generation and irredundancy checks, exhaustive
//! rank searches at tiny `n`, and the closed-form ranks.

use std::collections::{HashSet, VecDeque};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{binomial, enumerate, enumerate_with_domain, DomainMask};
use crate::error::{Error, Result};
use crate::genwords::{alphabet_iend, alphabet_paut, make_generator, GeneratorSymbol};
use crate::path_core::{check_n, full_mask, is_paut, vertex_bit, Family, PartialInjection};

/// Largest closure computed before refusing.
pub const DEFAULT_CLOSURE_LIMIT: usize = 2_000_000;

/// Largest number of candidate subsets examined by [`exhaustive_min_size`].
pub const DEFAULT_SUBSET_BUDGET: u128 = 10_000_000;

/// A finite submonoid of the partial injections on `{1..n}`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidSet {
    n: u32,
    elements: Vec<PartialInjection>,
}

impl MonoidSet {
    /// Wraps an element list after checking it is closed and contains the identity.
    pub fn from_elements(n: u32, mut elements: Vec<PartialInjection>) -> Result<Self> {
        check_n(n)?;
        elements.sort();
        elements.dedup();
        if let Some(e) = elements.iter().find(|e| e.n() != n) {
            return Err(Error::SizeMismatch { left: n, right: e.n() });
        }
        if elements.binary_search(&PartialInjection::identity(n)?).is_err() {
            return Err(Error::NotClosed);
        }
        let closed = elements
            .par_iter()
            .all(|a| elements.iter().all(|b| elements.binary_search(&a.then(b)).is_ok()));
        if !closed {
            return Err(Error::NotClosed);
        }
        Ok(MonoidSet { n, elements })
    }

    /// The enumerated monoid `PAut(P_n)` or `IEnd(P_n)`.
    pub fn of_family(family: Family, n: u32, limit: u32) -> Result<Self> {
        let mut elements = enumerate(n, family, limit)?;
        elements.sort();
        Ok(MonoidSet { n, elements })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn elements(&self) -> &[PartialInjection] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &PartialInjection) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    /// Elements with full domain.
    pub fn units(&self) -> Vec<PartialInjection> {
        let full = full_mask(self.n);
        self.elements.iter().filter(|e| e.domain_mask() == full).copied().collect()
    }
}

fn saturate(gens: &[PartialInjection], n: u32, limit: usize) -> Result<Option<Vec<PartialInjection>>> {
    let id = PartialInjection::identity(n)?;
    let mut seen: HashSet<PartialInjection> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y) {
                if seen.len() > limit {
                    return Ok(None);
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<_> = seen.into_iter().collect();
    elements.sort();
    Ok(Some(elements))
}

fn check_gens(gens: &[PartialInjection], n: u32) -> Result<()> {
    check_n(n)?;
    match gens.iter().find(|g| g.n() != n) {
        Some(g) => Err(Error::SizeMismatch { left: n, right: g.n() }),
        None => Ok(()),
    }
}

/// The submonoid generated by `gens`, refusing once it passes `limit` elements.
pub fn closure_bounded(gens: &[PartialInjection], n: u32, limit: usize) -> Result<MonoidSet> {
    check_gens(gens, n)?;
    match saturate(gens, n, limit)? {
        Some(elements) => Ok(MonoidSet { n, elements }),
        None => Err(Error::ResourceBound {
            what: "closure size",
            requested: limit as u128 + 1,
            limit: limit as u128,
        }),
    }
}

pub fn closure(gens: &[PartialInjection], n: u32) -> Result<MonoidSet> {
    closure_bounded(gens, n, DEFAULT_CLOSURE_LIMIT)
}

/// Whether `gens` generates exactly `target`.
pub fn is_generating(gens: &[PartialInjection], target: &MonoidSet) -> Result<bool> {
    check_gens(gens, target.n)?;
    Ok(match saturate(gens, target.n, target.len())? {
        Some(elements) => elements == target.elements,
        None => false,
    })
}

/// Whether every generator is needed: dropping any one loses part of `target`.
pub fn is_irredundant(gens: &[PartialInjection], target: &MonoidSet) -> Result<bool> {
    let results = (0..gens.len())
        .into_par_iter()
        .map(|skip| {
            let rest: Vec<_> = gens
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, g)| *g)
                .collect();
            is_generating(&rest, target)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(results.iter().all(|&g| !g))
}

/// True iff no `k`-element subset of `target` generates it, so its rank exceeds `k`.
///
/// Subsets whose full-domain members fail to generate the unit group are
/// skipped without computing a closure; the identity is never a candidate.
pub fn exhaustive_min_size(target: &MonoidSet, k: usize, budget: u128) -> Result<bool> {
    let requested = binomial(target.len() as u32, k as u32);
    let requested: u128 = requested.try_into().unwrap_or(u128::MAX);
    if requested > budget {
        return Err(Error::ResourceBound {
            what: "candidate subsets",
            requested,
            limit: budget,
        });
    }
    let n = target.n;
    let id = PartialInjection::identity(n)?;
    let full = full_mask(n);
    let units = target.units();
    let candidates: Vec<PartialInjection> = target.elements.iter().filter(|e| **e != id).copied().collect();
    let found = candidates
        .iter()
        .copied()
        .combinations(k)
        .par_bridge()
        .any(|subset| {
            let subset_units: Vec<_> = subset.iter().filter(|e| e.domain_mask() == full).copied().collect();
            let unit_group = saturate(&subset_units, n, units.len()).ok().flatten();
            if unit_group.as_deref() != Some(&units[..]) {
                return false;
            }
            is_generating(&subset, target).unwrap_or(false)
        });
    Ok(!found)
}

/// Closed-form rank: `2, 2, 3` then `n - 1` for partial automorphisms;
/// `2, 2, 4` then `n + ⌈n/2⌉ - 2` for endomorphisms.
pub fn rank_formula(family: Family, n: u32) -> u32 {
    match (family, n) {
        (_, 0..=2) => 2,
        (Family::PAut, 3) => 3,
        (Family::IEnd, 3) => 4,
        (Family::PAut, _) => n - 1,
        (Family::IEnd, _) => n + n.div_ceil(2) - 2,
    }
}

/// The generating set shipped for `family` on `n` vertices.
///
/// For `n = 2` both monoids coincide and `{τ, id_{1}}` is used.
pub fn shipped_generators(family: Family, n: u32) -> Result<Vec<PartialInjection>> {
    if n == 2 {
        return Ok(vec![
            make_generator(GeneratorSymbol::Tau, 2)?,
            PartialInjection::restricted_identity(2, 0b01)?,
        ]);
    }
    let alphabet = match family {
        Family::PAut => alphabet_paut(n)?,
        Family::IEnd => alphabet_iend(n)?,
    };
    Ok(alphabet.elements())
}

/// Partial automorphisms whose domain misses exactly `i` or exactly `n - i + 1`.
pub fn a_class(n: u32, i: u32) -> Result<Vec<PartialInjection>> {
    check_n(n)?;
    let mut out = Vec::new();
    let mut missing = vec![i, n + 1 - i];
    missing.dedup();
    for m in missing {
        let mask = DomainMask::new(n, full_mask(n) & !vertex_bit(m))?;
        out.extend(enumerate_with_domain(mask, Family::PAut));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Exact checks of the lower-bound lemmas against the shipped alphabets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub n: u32,
    /// `τ` is in the alphabet.
    pub tau_present: bool,
    /// The alphabet meets every `A_i`, `i ≤ ⌈n/2⌉`.
    pub meets_every_a_class: bool,
    /// `(i, |alphabet ∩ A_i|)` for `3 ≤ i ≤ ⌊n/2⌋`.
    pub a_class_hits: Vec<(u32, usize)>,
    /// `(i, |A_i|)` for `3 ≤ i ≤ ⌊n/2⌋`.
    pub a_class_sizes: Vec<(u32, usize)>,
    /// Endomorphism generators outside `PAut`, and the required minimum.
    pub non_automorphism_generators: (usize, usize),
    /// Endomorphisms with domain `{1..n-1}` or `{2..n}` are all automorphisms.
    pub end_domain_forces_paut: bool,
    /// Non-automorphism endomorphisms of rank `n - 1` have image `{1..n-1}` or `{2..n}`.
    pub corank_one_images: bool,
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        let needs_two = self.n >= 6;
        self.tau_present
            && self.meets_every_a_class
            && (!needs_two || self.a_class_hits.iter().all(|&(_, h)| h >= 2))
            && self.a_class_sizes.iter().all(|&(_, s)| s == 16)
            && self.non_automorphism_generators.0 >= self.non_automorphism_generators.1
            && self.end_domain_forces_paut
            && self.corank_one_images
    }
}

pub fn lower_bound_witnesses(n: u32) -> Result<LemmaReport> {
    let a = alphabet_paut(n)?;
    let b = alphabet_iend(n)?;
    let a_elems = a.elements();
    let full = full_mask(n);

    let hits = |i: u32| -> Result<usize> {
        let class = a_class(n, i)?;
        Ok(a_elems.iter().filter(|e| class.binary_search(e).is_ok()).count())
    };
    let mut meets = true;
    for i in 1..=n.div_ceil(2) {
        meets &= hits(i)? >= 1;
    }
    let middle: Vec<u32> = (3..=n / 2).collect();
    let a_class_hits = middle.iter().map(|&i| Ok((i, hits(i)?))).collect::<Result<Vec<_>>>()?;
    let a_class_sizes = middle
        .iter()
        .map(|&i| Ok((i, a_class(n, i)?.len())))
        .collect::<Result<Vec<_>>>()?;

    let outside = b.elements().iter().filter(|e| !is_paut(e)).count();

    let end_domains = [full & !vertex_bit(n), full & !1];
    let mut end_domain_forces_paut = true;
    for mask in end_domains {
        let elems = enumerate_with_domain(DomainMask::new(n, mask)?, Family::IEnd);
        end_domain_forces_paut &= elems.iter().all(is_paut);
    }

    let mut corank_one_images = true;
    for i in 1..=n {
        let mask = DomainMask::new(n, full & !vertex_bit(i))?;
        for e in enumerate_with_domain(mask, Family::IEnd) {
            if !is_paut(&e) {
                corank_one_images &= end_domains.contains(&e.image_mask());
            }
        }
    }

    Ok(LemmaReport {
        n,
        tau_present: a.contains(GeneratorSymbol::Tau),
        meets_every_a_class: meets,
        a_class_hits,
        a_class_sizes,
        non_automorphism_generators: (outside, n.div_ceil(2) as usize - 1),
        end_domain_forces_paut,
        corank_one_images,
    })
}

/// Result of an exhaustive search over `subset_size`-subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveCheck {
    pub subset_size: usize,
    pub monoid_size: usize,
    pub no_subset_generates: bool,
    /// `subset_size + 1` when no subset generates.
    pub lower_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankWitness {
    pub n: u32,
    pub family: Family,
    pub formula_value: u32,
    pub generating_set_size: usize,
    pub generates: Option<bool>,
    pub irredundant: Option<bool>,
    pub exhaustive_lower_bound: Option<ExhaustiveCheck>,
    pub lemmas: Option<LemmaReport>,
}

impl RankWitness {
    /// Every check that was run came out as the formula predicts.
    pub fn consistent(&self) -> bool {
        self.generating_set_size == self.formula_value as usize
            && self.generates != Some(false)
            && self.irredundant != Some(false)
            && self.exhaustive_lower_bound.as_ref().is_none_or(|e| e.no_subset_generates)
            && self.lemmas.as_ref().is_none_or(LemmaReport::all_hold)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RankOptions {
    /// Enumerate the monoid and run the closure and irredundancy checks.
    pub closure: bool,
    pub exhaustive: bool,
    pub enumeration_limit: u32,
    pub subset_budget: u128,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            closure: true,
            exhaustive: false,
            enumeration_limit: 6,
            subset_budget: DEFAULT_SUBSET_BUDGET,
        }
    }
}

/// Checks the shipped generating set of `family` against the closed-form rank.
pub fn verify_rank(family: Family, n: u32, opts: RankOptions) -> Result<RankWitness> {
    let gens = shipped_generators(family, n)?;
    let mut witness = RankWitness {
        n,
        family,
        formula_value: rank_formula(family, n),
        generating_set_size: gens.len(),
        generates: None,
        irredundant: None,
        exhaustive_lower_bound: None,
        lemmas: None,
    };
    if n >= 3 {
        witness.lemmas = Some(lower_bound_witnesses(n)?);
    }
    if opts.closure || opts.exhaustive {
        let target = MonoidSet::of_family(family, n, opts.enumeration_limit)?;
        if opts.closure {
            witness.generates = Some(is_generating(&gens, &target)?);
            witness.irredundant = Some(is_irredundant(&gens, &target)?);
        }
        if opts.exhaustive {
            let k = witness.formula_value as usize - 1;
            let none = exhaustive_min_size(&target, k, opts.subset_budget)?;
            witness.exhaustive_lower_bound = Some(ExhaustiveCheck {
                subset_size: k,
                monoid_size: target.len(),
                no_subset_generates: none,
                lower_bound: none.then_some(k + 1),
            });
        }
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{enumerate_iend, enumerate_paut};

    #[test]
    fn closure_of_tau() {
        for n in 2..=6 {
            let tau = make_generator(GeneratorSymbol::Tau, n).unwrap();
            let m = closure(&[tau], n).unwrap();
            assert_eq!(m.elements().len(), 2);
            assert!(m.contains(&tau));
        }
    }

    #[test]
    fn alphabets_generate_small() {
        for n in 3..=5 {
            let m = closure(&alphabet_paut(n).unwrap().elements(), n).unwrap();
            assert_eq!(m, MonoidSet::from_elements(n, enumerate_paut(n).unwrap()).unwrap());
        }
        for n in 3..=4 {
            let m = closure(&alphabet_iend(n).unwrap().elements(), n).unwrap();
            assert_eq!(m, MonoidSet::from_elements(n, enumerate_iend(n).unwrap()).unwrap());
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let m = closure(&alphabet_paut(4).unwrap().elements(), 4).unwrap();
        let again = closure(m.elements(), 4).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn closure_limit_refuses() {
        let err = closure_bounded(&alphabet_paut(5).unwrap().elements(), 5, 10).unwrap_err();
        assert!(err.is_resource_refusal());
    }

    #[test]
    fn generation_checks() {
        let target = MonoidSet::of_family(Family::PAut, 3, 8).unwrap();
        let tau = make_generator(GeneratorSymbol::Tau, 3).unwrap();
        assert!(!is_generating(&[tau], &target).unwrap());
        let gens = alphabet_paut(3).unwrap().elements();
        assert!(is_generating(&gens, &target).unwrap());
        assert!(is_irredundant(&gens, &target).unwrap());
    }

    #[test]
    fn from_elements_validates() {
        let p = enumerate_paut(3).unwrap();
        assert!(MonoidSet::from_elements(3, p.clone()).is_ok());
        let mut broken = p;
        broken.retain(|e| e.rank() != 1);
        assert_eq!(MonoidSet::from_elements(3, broken), Err(Error::NotClosed));
    }

    #[test]
    fn formula_values() {
        assert_eq!(rank_formula(Family::PAut, 5), 4);
        assert_eq!(rank_formula(Family::IEnd, 6), 7);
        assert_eq!(rank_formula(Family::IEnd, 1), 2);
        assert_eq!(rank_formula(Family::PAut, 3), 3);
        assert_eq!(rank_formula(Family::IEnd, 3), 4);
        for n in 3..=12 {
            assert_eq!(alphabet_paut(n).unwrap().len() as u32, rank_formula(Family::PAut, n));
            assert_eq!(alphabet_iend(n).unwrap().len() as u32, rank_formula(Family::IEnd, n));
        }
    }

    #[test]
    fn tiny_exhaustive_searches() {
        let p2 = MonoidSet::of_family(Family::PAut, 2, 8).unwrap();
        assert_eq!(p2.len(), 7);
        assert!(exhaustive_min_size(&p2, 1, DEFAULT_SUBSET_BUDGET).unwrap());
        assert!(!exhaustive_min_size(&p2, 2, DEFAULT_SUBSET_BUDGET).unwrap());
        let p3 = MonoidSet::of_family(Family::PAut, 3, 8).unwrap();
        assert!(exhaustive_min_size(&p3, 2, DEFAULT_SUBSET_BUDGET).unwrap());
        assert!(exhaustive_min_size(&p3, 2, 10).unwrap_err().is_resource_refusal());
    }

    #[test]
    fn a_class_sizes_and_lemmas() {
        assert_eq!(a_class(6, 3).unwrap().len(), 16);
        let class = a_class(5, 2).unwrap();
        assert!(class.contains(&make_generator(GeneratorSymbol::Alpha(2), 5).unwrap()));
        for n in 3..=9 {
            let report = lower_bound_witnesses(n).unwrap();
            assert!(report.all_hold(), "{report:?}");
        }
    }

    #[test]
    fn witness_for_four() {
        let w = verify_rank(Family::IEnd, 4, RankOptions::default()).unwrap();
        assert_eq!(w.formula_value, 4);
        assert_eq!(w.generates, Some(true));
        assert_eq!(w.irredundant, Some(true));
        assert!(w.consistent());
        assert!(verify_rank(Family::PAut, 1, RankOptions::default()).is_err());
    }
}
