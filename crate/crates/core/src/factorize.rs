//! Factorization of partial automorphisms and injective partial endomorphisms
//! into words over the named generators.
//!
//! `factor_paut` emits `τ`, `α_i`, `ε*`, `ρ+` and `ρ-` letters; `factor_iend`
//! additionally emits `β_i`. Passing the result through
//! [`Expander::expand_word`](crate::genwords::Expander::expand_word) gives a
//! word over the minimal alphabets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genwords::{make_generator, GeneratorSymbol, Word};
use crate::path_core::{full_mask, is_iend, is_paut, vertex_bit, Interval, PartialInjection};

use GeneratorSymbol::*;

/// Default cap on emitted letters: `4 n^2`.
pub fn default_step_bound(n: u32) -> usize {
    4 * (n as usize) * (n as usize)
}

/// Which block supplies the right end of the reversal in the reordering phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) enum Reading {
    /// The block that the target puts at the first mismatched position.
    #[default]
    TargetBlock,
    /// That block's index reinterpreted as a position in the current order.
    #[cfg_attr(not(test), allow(dead_code))]
    Composed,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Options {
    pub step_bound: usize,
    pub reading: Reading,
}

/// Working data of one `factor_paut` run.
struct FactorizationState {
    n: u32,
    target: PartialInjection,
    current: PartialInjection,
    emitted: Vec<GeneratorSymbol>,
    blocks: Vec<Interval>,
    target_order: Vec<usize>,
    bound: usize,
}

impl FactorizationState {
    fn new(target: PartialInjection, bound: usize) -> Result<Self> {
        let n = target.n();
        let blocks = target.domain_intervals().intervals().to_vec();
        let mut state = FactorizationState {
            n,
            target,
            current: PartialInjection::identity(n)?,
            emitted: Vec::new(),
            blocks,
            target_order: Vec::new(),
            bound,
        };
        state.target_order = state.order_of(&target);
        Ok(state)
    }

    fn image_of(&self, map: &PartialInjection, block: usize) -> Interval {
        let b = self.blocks[block];
        let x = map.apply(b.lo).expect("block in domain");
        let y = map.apply(b.hi).expect("block in domain");
        Interval::new(x.min(y), x.max(y))
    }

    /// Block indices listed left to right by image.
    fn order_of(&self, map: &PartialInjection) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by_key(|&r| self.image_of(map, r).lo);
        order
    }

    fn free(&self, v: u32) -> bool {
        v == 0 || v > self.n || self.current.image_mask() & vertex_bit(v) == 0
    }

    fn push(&mut self, sym: GeneratorSymbol) -> Result<()> {
        if self.emitted.len() >= self.bound {
            return Err(Error::StepBoundExceeded { bound: self.bound });
        }
        let g = make_generator(sym, self.n)?;
        let next = self.current.then(&g);
        let settled = self.target.domain_mask();
        if self.current.domain_mask() == settled && next.domain_mask() != settled {
            return Err(Error::Invariant(format!("{sym} shrank the domain of {}", self.current)));
        }
        self.current = next;
        self.emitted.push(sym);
        Ok(())
    }

    fn eps_star(&self, i: u32, j: u32) -> GeneratorSymbol {
        if i == 0 && j == self.n + 1 {
            Tau
        } else {
            EpsStar(i, j)
        }
    }

    /// Restricted identity on the target domain, one `α_i²` per missing vertex.
    fn start(&mut self) -> Result<()> {
        let missing = full_mask(self.n) & !self.target.domain_mask();
        for i in 1..=self.n {
            if missing & vertex_bit(i) != 0 {
                self.push(Alpha(i))?;
                self.push(Alpha(i))?;
            }
        }
        Ok(())
    }

    fn reorder(&mut self, reading: Reading) -> Result<()> {
        loop {
            let order = self.order_of(&self.current);
            let Some(s) = (0..order.len()).find(|&p| order[p] != self.target_order[p]) else {
                return Ok(());
            };
            let t = self.image_of(&self.current, order[s]).lo;
            let far = match reading {
                Reading::TargetBlock => self.target_order[s],
                Reading::Composed => order[self.target_order[s]],
            };
            let q = self.image_of(&self.current, far).hi;
            if q < t {
                return Err(Error::Invariant(format!("empty reversal [{t},{q}]")));
            }
            let sym = self.eps_star(t - 1, q + 1);
            self.push(sym)?;
        }
    }

    fn place_blocks(&mut self) -> Result<()> {
        loop {
            let order = self.order_of(&self.current);
            let mismatch = order.iter().position(|&r| {
                self.blocks[r]
                    .iter()
                    .any(|v| self.current.apply(v) != self.target.apply(v))
            });
            let Some(u) = mismatch else {
                return Ok(());
            };
            let block = order[u];
            let want = self.image_of(&self.target, block);
            let cur = self.image_of(&self.current, block);
            let sym = if cur.lo < want.lo {
                // shift right by one
                let i = cur.lo;
                let j = (cur.hi + 1..=self.n)
                    .find(|&j| self.free(j) && self.free(j + 1))
                    .ok_or_else(|| Error::Invariant(format!("no room right of {cur}")))?;
                if j > i + 1 {
                    RhoMinus(i, j + 1)
                } else {
                    self.eps_star(i - 1, i + 2)
                }
            } else if cur.lo > want.lo {
                // shift left by one
                let j = if u == 0 {
                    1
                } else {
                    self.image_of(&self.current, order[u - 1]).hi + 2
                };
                if j >= cur.lo || !self.free(j) || !self.free(j - 1) {
                    return Err(Error::Invariant(format!("no room left of {cur}")));
                }
                if j + 1 < cur.hi {
                    RhoPlus(j - 1, cur.hi)
                } else {
                    self.eps_star(j - 1, j + 2)
                }
            } else {
                // right place, wrong orientation
                self.eps_star(cur.lo - 1, cur.hi + 1)
            };
            self.push(sym)?;
        }
    }
}

pub(crate) fn factor_paut_with(a: &PartialInjection, opts: Options) -> Result<Word> {
    if !is_paut(a) {
        return Err(Error::NotInPAut(a.to_string()));
    }
    let mut state = FactorizationState::new(*a, opts.step_bound)?;
    state.start()?;
    state.reorder(opts.reading)?;
    state.place_blocks()?;
    let word = Word::new(state.n, state.emitted)?;
    if word.eval() != *a {
        return Err(Error::Invariant(format!("factorization of {a} evaluates to {}", word.eval())));
    }
    Ok(word)
}

/// Word over derived generators evaluating to the partial automorphism `a`,
/// with at most `step_bound` letters.
pub fn factor_paut_bounded(a: &PartialInjection, step_bound: usize) -> Result<Word> {
    factor_paut_with(
        a,
        Options {
            step_bound,
            reading: Reading::default(),
        },
    )
}

/// Word over derived generators evaluating to the partial automorphism `a`.
///
/// The identity gives the empty word and `τ` gives `[τ]`.
pub fn factor_paut(a: &PartialInjection) -> Result<Word> {
    factor_paut_bounded(a, default_step_bound(a.n()))
}

/// The order-preserving map packing the image intervals of `b` to the left
/// with single gaps between them.
pub fn canonical_delta(b: &PartialInjection) -> Result<PartialInjection> {
    if !is_iend(b) {
        return Err(Error::NotInIEnd(b.to_string()));
    }
    let mut pairs = Vec::new();
    let mut next = 1;
    for j in b.image_intervals().iter() {
        for v in j.iter() {
            pairs.push((v, next));
            next += 1;
        }
        next += 1;
    }
    PartialInjection::new(b.n(), pairs)
}

/// The pieces of an endomorphism factorization `β* · β_{i_1+1} ⋯ β_{i_k+1} · δ⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IEndFactorization {
    pub delta: PartialInjection,
    pub beta_star: PartialInjection,
    /// Domain points `i_1, …, i_k`, ordered by their packed images.
    pub gap_indices: Vec<u32>,
    pub word: Word,
}

/// Full decomposition of `b`, including the intermediate maps.
pub fn factor_iend_detailed(b: &PartialInjection) -> Result<IEndFactorization> {
    let delta = canonical_delta(b)?;
    let n = b.n();
    if is_paut(b) {
        return Ok(IEndFactorization {
            delta,
            beta_star: b.then(&delta),
            gap_indices: Vec::new(),
            word: factor_paut(b)?,
        });
    }
    let packed = b.then(&delta);
    let img = |x: u32| packed.apply(x);

    let mut marks: Vec<(u32, u32)> = packed
        .pairs()
        .filter(|&(x, y)| {
            let up = y + 1;
            packed.image_mask() & vertex_bit_checked(up, n) != 0
                && img(x.wrapping_sub(1)) != Some(up)
                && img(x + 1) != Some(up)
        })
        .map(|(x, y)| (y, x))
        .collect();
    if marks.is_empty() {
        return Err(Error::Invariant(format!("no gap points for {b}")));
    }
    marks.sort();

    let beta_star = PartialInjection::new(
        n,
        packed.pairs().map(|(x, y)| {
            let below = marks.iter().filter(|&&(v, _)| v < y).count() as u32;
            (x, y + below)
        }),
    )?;
    if !is_paut(&beta_star) {
        return Err(Error::Invariant(format!("{beta_star} is not a partial automorphism")));
    }

    let mut word = factor_paut(&beta_star)?;
    let betas = marks.iter().map(|&(v, _)| Beta(v + 1)).collect();
    word = word.concat(&Word::new(n, betas)?)?;
    word = word.concat(&factor_paut(&delta.inverse())?)?;
    if word.eval() != *b {
        return Err(Error::Invariant(format!("factorization of {b} evaluates to {}", word.eval())));
    }
    Ok(IEndFactorization {
        delta,
        beta_star,
        gap_indices: marks.iter().map(|&(_, x)| x).collect(),
        word,
    })
}

fn vertex_bit_checked(v: u32, n: u32) -> u64 {
    if v == 0 || v > n {
        0
    } else {
        vertex_bit(v)
    }
}

/// Word over derived generators and `β_i` evaluating to the endomorphism `b`.
pub fn factor_iend(b: &PartialInjection) -> Result<Word> {
    factor_iend_detailed(b).map(|f| f.word)
}

/// Factors many elements in parallel, keeping input order.
pub fn factor_all(elements: &[PartialInjection]) -> Result<Vec<Word>> {
    elements.par_iter().map(factor_iend).collect()
}
