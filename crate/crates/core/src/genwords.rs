//! Named generators of `PAut(P_n)` / `IEnd(P_n)`, words over them, and the
//! rewriting of every derived generator into the minimal alphabets.
//!
//! The base alphabet for partial automorphisms is `{τ, α_1, …, α_{n-2}}`
//! (`{τ, α_1, α_2}` when `n = 3`); the endomorphism alphabet adds
//! `β_2, …, β_{⌈n/2⌉}`. Everything else (`α_{n-1}`, `α_n`, `α*_i`, `ε`, `ε*`,
//! `ρ±`, the remaining `β_i`) rewrites into those letters:
//!
//! | symbol      | word                                   |
//! |-------------|----------------------------------------|
//! | `α_i`, i ∈ {n-1, n} | `τ α_{n-i+1}² τ`               |
//! | `α*_i`      | `α_i τ α_{n-i+1} τ α_i`                |
//! | `ε_{i,j}`   | `α_i² α_j²`                            |
//! | `ε*_{i,j}`  | `ε_{i,j} α*_j α*_{j-i} α*_j`           |
//! | `ρ+_{i,j}`  | `α_i² α_{i+1}² α_{j+1}² ε*_{i,j+1} ε*_{i,j}` |
//! | `ρ-_{i,j}`  | `α_{i-1}² α_{j-1}² α_j² ε*_{i-1,j} ε*_{i,j}` |
//! | `β_i`, i > ⌈n/2⌉ | `τ β_{n-i+1} α*_n`                |
//!
//! with `α_0 = τ`, `α_{n+1} = id`, `ε*_{0,n+1} = τ`, `ε*_{0,j} = α*_j` and
//! `ε*_{i,n+1} = α_i`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path_core::{check_n, PartialInjection, MAX_VERTICES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorSymbol {
    Tau,
    Alpha(u32),
    AlphaStar(u32),
    Eps(u32, u32),
    EpsStar(u32, u32),
    RhoPlus(u32, u32),
    RhoMinus(u32, u32),
    Beta(u32),
}

use GeneratorSymbol::*;

impl GeneratorSymbol {
    pub fn is_legal(&self, n: u32) -> bool {
        match *self {
            Tau => true,
            Alpha(i) => i <= n + 1,
            AlphaStar(i) => 1 <= i && i <= n,
            Eps(i, j) => 1 <= i && i + 1 < j && j <= n,
            EpsStar(i, j) => i + 1 < j && j <= n + 1,
            RhoPlus(i, j) => i + 2 < j && j <= n,
            RhoMinus(i, j) => 1 <= i && i + 2 < j && j <= n + 1,
            Beta(i) => 2 <= i && i + 1 <= n,
        }
    }

    pub fn check(&self, n: u32) -> Result<()> {
        check_n(n)?;
        if self.is_legal(n) {
            Ok(())
        } else {
            Err(Error::IllegalSymbol {
                symbol: self.to_string(),
                n,
            })
        }
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Tau => write!(f, "tau"),
            Alpha(i) => write!(f, "a{i}"),
            AlphaStar(i) => write!(f, "as{i}"),
            Eps(i, j) => write!(f, "e{i},{j}"),
            EpsStar(i, j) => write!(f, "es{i},{j}"),
            RhoPlus(i, j) => write!(f, "rp{i},{j}"),
            RhoMinus(i, j) => write!(f, "rm{i},{j}"),
            Beta(i) => write!(f, "b{i}"),
        }
    }
}

impl FromStr for GeneratorSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown generator {s:?}"));
        let one = |rest: &str| rest.parse::<u32>().map_err(|_| bad());
        let two = |rest: &str| -> Result<(u32, u32)> {
            let (i, j) = rest.split_once(',').ok_or_else(bad)?;
            Ok((one(i)?, one(j)?))
        };
        if s == "tau" {
            return Ok(Tau);
        }
        // longer prefixes first
        if let Some(rest) = s.strip_prefix("as") {
            return one(rest).map(AlphaStar);
        }
        if let Some(rest) = s.strip_prefix("es") {
            return two(rest).map(|(i, j)| EpsStar(i, j));
        }
        if let Some(rest) = s.strip_prefix("rp") {
            return two(rest).map(|(i, j)| RhoPlus(i, j));
        }
        if let Some(rest) = s.strip_prefix("rm") {
            return two(rest).map(|(i, j)| RhoMinus(i, j));
        }
        if let Some(rest) = s.strip_prefix('a') {
            return one(rest).map(Alpha);
        }
        if let Some(rest) = s.strip_prefix('e') {
            return two(rest).map(|(i, j)| Eps(i, j));
        }
        if let Some(rest) = s.strip_prefix('b') {
            return one(rest).map(Beta);
        }
        Err(bad())
    }
}

impl Serialize for GeneratorSymbol {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Builds a map from a per-vertex rule; `None` leaves the vertex out of the domain.
fn from_rule(n: u32, rule: impl Fn(u32) -> Option<u32>) -> PartialInjection {
    let mut images = [0u8; MAX_VERTICES];
    for x in 1..=n {
        if let Some(y) = rule(x) {
            images[x as usize - 1] = y as u8;
        }
    }
    PartialInjection::from_raw(n, images)
}

/// The partial injection named by `sym` on `{1..n}`.
pub fn make_generator(sym: GeneratorSymbol, n: u32) -> Result<PartialInjection> {
    sym.check(n)?;
    let map = match sym {
        Tau => from_rule(n, |x| Some(n + 1 - x)),
        // α_0 = τ and α_{n+1} = id fall out of the same rule
        Alpha(i) => from_rule(n, |x| match x.cmp(&i) {
            std::cmp::Ordering::Less => Some(x),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(n + i + 1 - x),
        }),
        AlphaStar(i) => from_rule(n, |x| match x.cmp(&i) {
            std::cmp::Ordering::Less => Some(i - x),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(x),
        }),
        Eps(i, j) => from_rule(n, |x| (x != i && x != j).then_some(x)),
        // reverses the open segment (i, j); i = 0 and j = n + 1 act as
        // virtual endpoints outside {1..n}
        EpsStar(i, j) => from_rule(n, |x| {
            if x == i || x == j {
                None
            } else if i < x && x < j {
                Some(i + j - x)
            } else {
                Some(x)
            }
        }),
        RhoPlus(i, j) => from_rule(n, |x| {
            if x + 1 == i + 2 || x == i || x == j + 1 {
                None
            } else if i + 2 <= x && x <= j {
                Some(x - 1)
            } else {
                Some(x)
            }
        }),
        RhoMinus(i, j) => from_rule(n, |x| {
            if x + 1 == i || x + 1 == j || x == j {
                None
            } else if i <= x && x + 2 <= j {
                Some(x + 1)
            } else {
                Some(x)
            }
        }),
        Beta(i) => from_rule(n, |x| match x.cmp(&i) {
            std::cmp::Ordering::Less => Some(x),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(x - 1),
        }),
    };
    Ok(map)
}

/// A product of generators, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    n: u32,
    letters: Vec<GeneratorSymbol>,
}

impl Word {
    pub fn new(n: u32, letters: Vec<GeneratorSymbol>) -> Result<Self> {
        check_n(n)?;
        for sym in &letters {
            sym.check(n)?;
        }
        Ok(Word { n, letters })
    }

    pub fn empty(n: u32) -> Result<Self> {
        Word::new(n, Vec::new())
    }

    /// Parses whitespace-separated letters such as `tau a3 es1,4`.
    pub fn parse(n: u32, text: &str) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Word::new(n, letters)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn letters(&self) -> &[GeneratorSymbol] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { n: self.n, letters })
    }

    /// Evaluates the product; the empty word is the identity.
    pub fn eval(&self) -> PartialInjection {
        let id = PartialInjection::identity(self.n).expect("n validated at construction");
        self.letters.iter().fold(id, |acc, &sym| {
            acc.then(&make_generator(sym, self.n).expect("letters validated at construction"))
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, sym) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{sym}")?;
        }
        Ok(())
    }
}

/// An ordered set of generator symbols for a fixed `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    n: u32,
    symbols: Vec<GeneratorSymbol>,
}

impl Alphabet {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, sym: GeneratorSymbol) -> bool {
        self.symbols.contains(&sym)
    }

    pub fn elements(&self) -> Vec<PartialInjection> {
        self.symbols
            .iter()
            .map(|&s| make_generator(s, self.n).expect("alphabet symbols are legal"))
            .collect()
    }
}

/// `{τ, α_1, …, α_{n-2}}`, or `{τ, α_1, α_2}` for `n = 3`.
pub fn alphabet_paut(n: u32) -> Result<Alphabet> {
    if n < 3 {
        return Err(Error::NoAlphabet(n));
    }
    check_n(n)?;
    let top = if n == 3 { 2 } else { n - 2 };
    let symbols = std::iter::once(Tau).chain((1..=top).map(Alpha)).collect();
    Ok(Alphabet { n, symbols })
}

/// The partial automorphism alphabet plus `β_2, …, β_{⌈n/2⌉}`.
pub fn alphabet_iend(n: u32) -> Result<Alphabet> {
    let mut a = alphabet_paut(n)?;
    a.symbols.extend((2..=n.div_ceil(2)).map(Beta));
    Ok(a)
}

/// Rewrites derived symbols into base-alphabet words, memoizing per symbol.
///
/// Safe to share between threads; concurrent expansions of the same symbol
/// produce equal words.
pub struct Expander {
    n: u32,
    base: Alphabet,
    memo: RwLock<HashMap<GeneratorSymbol, Vec<GeneratorSymbol>>>,
}

impl Expander {
    pub fn new(n: u32) -> Result<Self> {
        Ok(Expander {
            n,
            base: alphabet_iend(n)?,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn expand_symbol(&self, sym: GeneratorSymbol) -> Result<Word> {
        sym.check(self.n)?;
        Ok(Word {
            n: self.n,
            letters: self.expand_letters(sym),
        })
    }

    pub fn expand_word(&self, word: &Word) -> Result<Word> {
        if word.n != self.n {
            return Err(Error::SizeMismatch {
                left: word.n,
                right: self.n,
            });
        }
        let mut letters = Vec::new();
        for &sym in &word.letters {
            letters.extend(self.expand_letters(sym));
        }
        Ok(Word { n: self.n, letters })
    }

    fn expand_letters(&self, sym: GeneratorSymbol) -> Vec<GeneratorSymbol> {
        if let Some(hit) = self.memo.read().expect("memo lock poisoned").get(&sym) {
            return hit.clone();
        }
        let letters = self.rewrite(sym);
        self.memo
            .write()
            .expect("memo lock poisoned")
            .insert(sym, letters.clone());
        letters
    }

    fn cat(&self, parts: &[GeneratorSymbol]) -> Vec<GeneratorSymbol> {
        parts.iter().flat_map(|&s| self.expand_letters(s)).collect()
    }

    fn rewrite(&self, sym: GeneratorSymbol) -> Vec<GeneratorSymbol> {
        if self.base.contains(sym) {
            return vec![sym];
        }
        self.cat(&one_step(sym, self.n))
    }
}

/// Right-hand side of the rewriting rule for a symbol outside the base alphabet.
fn one_step(sym: GeneratorSymbol, n: u32) -> Vec<GeneratorSymbol> {
    match sym {
        Tau => vec![Tau],
        Alpha(0) => vec![Tau],
        Alpha(i) if i == n + 1 => Vec::new(),
        // only α_{n-1} and α_n reach here
        Alpha(i) => {
            let k = n - i + 1;
            vec![Tau, Alpha(k), Alpha(k), Tau]
        }
        AlphaStar(i) => vec![Alpha(i), Tau, Alpha(n - i + 1), Tau, Alpha(i)],
        Eps(i, j) => vec![Alpha(i), Alpha(i), Alpha(j), Alpha(j)],
        EpsStar(0, j) if j == n + 1 => vec![Tau],
        EpsStar(0, j) => vec![AlphaStar(j)],
        EpsStar(i, j) if j == n + 1 => vec![Alpha(i)],
        EpsStar(i, j) => vec![Eps(i, j), AlphaStar(j), AlphaStar(j - i), AlphaStar(j)],
        RhoPlus(i, j) => vec![
            Alpha(i),
            Alpha(i),
            Alpha(i + 1),
            Alpha(i + 1),
            Alpha(j + 1),
            Alpha(j + 1),
            EpsStar(i, j + 1),
            EpsStar(i, j),
        ],
        RhoMinus(i, j) => vec![
            Alpha(i - 1),
            Alpha(i - 1),
            Alpha(j - 1),
            Alpha(j - 1),
            Alpha(j),
            Alpha(j),
            EpsStar(i - 1, j),
            EpsStar(i, j),
        ],
        // i > ⌈n/2⌉ here
        Beta(i) => vec![Tau, Beta(n - i + 1), AlphaStar(n)],
    }
}

/// The single rewriting step for `sym`, or `None` when `sym` already belongs
/// to the endomorphism alphabet.
pub fn rewrite_rule(sym: GeneratorSymbol, n: u32) -> Result<Option<Word>> {
    sym.check(n)?;
    if alphabet_iend(n)?.contains(sym) {
        return Ok(None);
    }
    Word::new(n, one_step(sym, n)).map(Some)
}

/// One-shot expansion of `sym` into the minimal alphabet for `n`.
pub fn expand_symbol(sym: GeneratorSymbol, n: u32) -> Result<Word> {
    Expander::new(n)?.expand_symbol(sym)
}

/// Every legal symbol of every kind for `n`, boundary conventions included.
pub fn all_symbols(n: u32) -> Vec<GeneratorSymbol> {
    let mut out = vec![Tau];
    out.extend((0..=n + 1).map(Alpha));
    out.extend((1..=n).map(AlphaStar));
    for i in 0..=n + 1 {
        for j in 0..=n + 1 {
            out.extend(
                [Eps(i, j), EpsStar(i, j), RhoPlus(i, j), RhoMinus(i, j)]
                    .into_iter()
                    .filter(|s| s.is_legal(n)),
            );
        }
    }
    out.extend((2..n).map(Beta));
    out.retain(|s| s.is_legal(n));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(s: &str) -> PartialInjection {
        s.parse().unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(make_generator(Tau, 3).unwrap(), pi("n=3;1>3,2>2,3>1"));
        assert_eq!(make_generator(Alpha(1), 4).unwrap(), pi("n=4;2>4,3>3,4>2"));
        assert_eq!(make_generator(Beta(2), 3).unwrap(), pi("n=3;1>1,3>2"));
    }

    #[test]
    fn displayed_definitions() {
        // α*_3 on n=5: 1>2, 2>1, 4>4, 5>5
        assert_eq!(make_generator(AlphaStar(3), 5).unwrap(), pi("n=5;1>2,2>1,4>4,5>5"));
        assert_eq!(make_generator(Eps(2, 4), 5).unwrap(), pi("n=5;1>1,3>3,5>5"));
        // ε*_{1,5} on n=6 reverses 2..4
        assert_eq!(make_generator(EpsStar(1, 5), 6).unwrap(), pi("n=6;2>4,3>3,4>2,6>6"));
        // ρ+_{1,4} on n=6: 3>2, 4>3, 6>6
        assert_eq!(make_generator(RhoPlus(1, 4), 6).unwrap(), pi("n=6;3>2,4>3,6>6"));
        // ρ+_{0,3} on n=5: 2>1, 3>2, 5>5
        assert_eq!(make_generator(RhoPlus(0, 3), 5).unwrap(), pi("n=5;2>1,3>2,5>5"));
        // ρ-_{2,5} on n=6: 2>3, 3>4, 6>6
        assert_eq!(make_generator(RhoMinus(2, 5), 6).unwrap(), pi("n=6;2>3,3>4,6>6"));
        // ρ-_{1,5} on n=4 (j = n + 1): 1>2, 2>3, 3>4
        assert_eq!(make_generator(RhoMinus(1, 5), 4).unwrap(), pi("n=4;1>2,2>3,3>4"));
    }

    #[test]
    fn boundary_conventions() {
        for n in 1..=9 {
            let tau = make_generator(Tau, n).unwrap();
            assert_eq!(make_generator(Alpha(0), n).unwrap(), tau);
            assert_eq!(make_generator(Alpha(n + 1), n).unwrap(), PartialInjection::identity(n).unwrap());
            if n >= 1 {
                assert_eq!(make_generator(EpsStar(0, n + 1), n).unwrap(), tau);
            }
            for j in 2..=n {
                assert_eq!(make_generator(EpsStar(0, j), n).unwrap(), make_generator(AlphaStar(j), n).unwrap());
            }
            for i in 1..n {
                assert_eq!(make_generator(EpsStar(i, n + 1), n).unwrap(), make_generator(Alpha(i), n).unwrap());
            }
        }
    }

    #[test]
    fn illegal_indices() {
        assert!(make_generator(Alpha(6), 4).is_err());
        assert!(make_generator(AlphaStar(0), 4).is_err());
        assert!(make_generator(Eps(1, 2), 4).is_err());
        assert!(make_generator(EpsStar(1, 2), 4).is_err());
        assert!(make_generator(RhoPlus(1, 3), 4).is_err());
        assert!(make_generator(RhoMinus(0, 4), 4).is_err());
        assert!(make_generator(RhoMinus(1, 6), 4).is_err());
        assert!(make_generator(Beta(1), 4).is_err());
        assert!(make_generator(Beta(4), 4).is_err());
        assert!(Word::parse(4, "tau b4").is_err());
    }

    #[test]
    fn symbol_text_round_trip() {
        for text in ["tau", "a3", "as3", "e1,4", "es1,4", "rp0,5", "rm2,6", "b3"] {
            let sym: GeneratorSymbol = text.parse().unwrap();
            assert_eq!(sym.to_string(), text);
        }
        assert!("x1".parse::<GeneratorSymbol>().is_err());
        assert!("es1".parse::<GeneratorSymbol>().is_err());
        assert!("a".parse::<GeneratorSymbol>().is_err());
    }

    #[test]
    fn word_evaluation() {
        for n in 3..=7 {
            let id = PartialInjection::identity(n).unwrap();
            assert_eq!(Word::empty(n).unwrap().eval(), id);
            assert_eq!(Word::parse(n, "tau tau").unwrap().eval(), id);
            for i in 1..=n {
                let w = Word::new(n, vec![Alpha(i), Alpha(i)]).unwrap();
                let expected = PartialInjection::restricted_identity(n, crate::path_core::full_mask(n) & !(1 << (i - 1))).unwrap();
                assert_eq!(w.eval(), expected);
            }
        }
    }

    #[test]
    fn alphabets() {
        let a3 = alphabet_paut(3).unwrap();
        assert_eq!(a3.symbols(), &[Tau, Alpha(1), Alpha(2)]);
        let b3 = alphabet_iend(3).unwrap();
        assert_eq!(b3.symbols(), &[Tau, Alpha(1), Alpha(2), Beta(2)]);
        let b7 = alphabet_iend(7).unwrap();
        assert_eq!(b7.len(), 1 + 5 + 3);
        assert!(alphabet_paut(2).is_err());
    }

    #[test]
    fn expansion_examples() {
        let w = expand_symbol(AlphaStar(2), 4).unwrap();
        assert_eq!(w.eval(), make_generator(AlphaStar(2), 4).unwrap());
        for n in 3..=8 {
            assert_eq!(expand_symbol(Alpha(1), n).unwrap().letters(), &[Alpha(1)]);
            let w = expand_symbol(Beta(n - 1), n).unwrap();
            assert_eq!(w.eval(), make_generator(Beta(n - 1), n).unwrap());
            let b = alphabet_iend(n).unwrap();
            assert!(w.letters().iter().all(|&s| b.contains(s)));
        }
        assert_eq!(expand_symbol(EpsStar(0, 6), 5).unwrap().letters(), &[Tau]);
    }

    #[test]
    fn single_rewrite_steps_hold() {
        for n in 3..=7 {
            for sym in all_symbols(n) {
                if let Some(rhs) = rewrite_rule(sym, n).unwrap() {
                    assert_eq!(rhs.eval(), make_generator(sym, n).unwrap(), "{sym} n={n}");
                }
            }
        }
        assert_eq!(rewrite_rule(Alpha(1), 5).unwrap(), None);
    }

    #[test]
    fn expander_is_shareable() {
        let ex = Expander::new(6).unwrap();
        let words: Vec<Word> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..4)
                .map(|_| scope.spawn(|| ex.expand_symbol(RhoMinus(2, 6)).unwrap()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(words.windows(2).all(|w| w[0] == w[1]));
    }
}
