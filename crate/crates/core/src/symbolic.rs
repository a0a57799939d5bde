//! Finite words over `{0, …, d-1}`, Lyndon enumeration, and complexity
//! counts for the subshifts generated by periodic itineraries.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num::{BigInt, Zero};

use crate::exact::{CirclePoint, ExactError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("words must be non-empty")]
    EmptyWord,
    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u8, alphabet: u8 },
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u8),
    #[error("alphabet size {0} exceeds 10, digit display unsupported")]
    AlphabetTooLarge(u8),
    #[error("character {0:?} is not a digit")]
    NotADigit(char),
    #[error("orbit set mixes alphabets {0} and {1}")]
    MixedAlphabets(u8, u8),
    #[error("orbit set must contain at least one word")]
    EmptySet,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A non-empty word over the alphabet `{0, …, alphabet-1}`.
///
/// Words order by `(length, lexicographic)`, the order used for Lyndon
/// enumeration and for picking "simplest" representatives.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<u8>,
    alphabet: u8,
}

impl Word {
    pub fn new(symbols: Vec<u8>, alphabet: u8) -> Result<Self, SymbolicError> {
        if alphabet < 2 {
            return Err(SymbolicError::AlphabetTooSmall(alphabet));
        }
        if alphabet > 10 {
            return Err(SymbolicError::AlphabetTooLarge(alphabet));
        }
        if symbols.is_empty() {
            return Err(SymbolicError::EmptyWord);
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(SymbolicError::SymbolOutOfRange {
                symbol: bad,
                alphabet,
            });
        }
        Ok(Word { symbols, alphabet })
    }

    /// Parse a digit string like `"0011"`.
    pub fn parse(s: &str, alphabet: u8) -> Result<Self, SymbolicError> {
        let symbols = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or(SymbolicError::NotADigit(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(symbols, alphabet)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Left rotation by `k`: `w[k..] ++ w[..k]`.
    pub fn rotation(&self, k: usize) -> Word {
        let n = self.len();
        let k = k % n;
        let mut symbols = Vec::with_capacity(n);
        symbols.extend_from_slice(&self.symbols[k..]);
        symbols.extend_from_slice(&self.symbols[..k]);
        Word {
            symbols,
            alphabet: self.alphabet,
        }
    }

    /// Smallest period of the *cyclic* word: the least divisor `p` of the
    /// length such that the word is the `(n/p)`-th power of its prefix.
    pub fn minimal_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .filter(|p| n % p == 0)
            .find(|&p| (p..n).all(|i| self.symbols[i] == self.symbols[i - p]))
            .expect("n is always a period")
    }

    pub fn is_primitive(&self) -> bool {
        self.minimal_period() == self.len()
    }

    /// The primitive word this one is a power of.
    pub fn primitive_root(&self) -> Word {
        let p = self.minimal_period();
        Word {
            symbols: self.symbols[..p].to_vec(),
            alphabet: self.alphabet,
        }
    }

    /// Canonical representative of the cyclic class: the lexicographically
    /// least rotation of the primitive root (a Lyndon word).
    pub fn canonical(&self) -> Word {
        let root = self.primitive_root();
        (0..root.len())
            .map(|k| root.rotation(k))
            .min_by(|a, b| a.symbols.cmp(&b.symbols))
            .expect("non-empty word has rotations")
    }

    pub fn is_lyndon(&self) -> bool {
        self.is_primitive() && self.canonical() == *self
    }

    /// The word read as a base-`alphabet` integer, most significant symbol
    /// first.
    pub fn base_d_value(&self) -> BigInt {
        let d = BigInt::from(self.alphabet);
        self.symbols
            .iter()
            .fold(BigInt::zero(), |acc, &s| acc * &d + BigInt::from(s))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.symbols.cmp(&other.symbols))
            .then_with(|| self.alphabet.cmp(&other.alphabet))
    }
}

/// All Lyndon words over `{0, …, d-1}` of length at most `max_len`, sorted
/// by `(length, lexicographic)`. Duval's algorithm.
pub fn enumerate_lyndon(d: u8, max_len: usize) -> Result<Vec<Word>, SymbolicError> {
    if d < 2 {
        return Err(SymbolicError::AlphabetTooSmall(d));
    }
    if d > 10 {
        return Err(SymbolicError::AlphabetTooLarge(d));
    }
    if max_len == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<Word> = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(Word {
            symbols: w.clone(),
            alphabet: d,
        });
        // extend periodically to the maximal length, then increment the last
        // non-maximal symbol
        let base = w.clone();
        w = (0..max_len).map(|i| base[i % base.len()]).collect();
        while w.last() == Some(&(d - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(s) => *s += 1,
            None => break,
        }
    }
    out.sort();
    Ok(out)
}

/// First `n` symbols of the `E_d`-itinerary of `x`: symbol `j` when the
/// current point lies in `[j/d, (j+1)/d)`.
pub fn coding(x: &CirclePoint, d: u32, n: usize) -> Result<Word, SymbolicError> {
    if d < 2 {
        return Err(ExactError::DegreeTooSmall(d).into());
    }
    if d > 10 {
        return Err(SymbolicError::AlphabetTooLarge(d.min(255) as u8));
    }
    if n == 0 {
        return Err(SymbolicError::EmptyWord);
    }
    let mut symbols = Vec::with_capacity(n);
    let mut cur = x.clone();
    for _ in 0..n {
        let scaled = cur.value() * Rational::from(BigInt::from(d));
        let j = scaled.floor().to_integer();
        // cur is in [0,1), so j is in 0..d
        let j = u8::try_from(j).expect("floor(d*x) fits in u8 for d <= 10");
        symbols.push(j);
        cur = cur.expand(d)?;
    }
    Ok(Word {
        symbols,
        alphabet: d as u8,
    })
}

/// A finite union of periodic orbits of the shift, presented by canonical
/// (primitive, lexicographically least) cyclic generators over a common
/// alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicOrbitSet {
    generators: BTreeSet<Word>,
    alphabet: u8,
}

impl SymbolicOrbitSet {
    /// Build from arbitrary words; each is reduced to its canonical cyclic
    /// representative and duplicates collapse.
    pub fn new<I: IntoIterator<Item = Word>>(words: I) -> Result<Self, SymbolicError> {
        let mut generators = BTreeSet::new();
        let mut alphabet = None;
        for w in words {
            match alphabet {
                None => alphabet = Some(w.alphabet()),
                Some(a) if a != w.alphabet() => {
                    return Err(SymbolicError::MixedAlphabets(a, w.alphabet()))
                }
                _ => {}
            }
            generators.insert(w.canonical());
        }
        let alphabet = alphabet.ok_or(SymbolicError::EmptySet)?;
        Ok(SymbolicOrbitSet {
            generators,
            alphabet,
        })
    }

    pub fn generators(&self) -> impl Iterator<Item = &Word> {
        self.generators.iter()
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    /// Distinct factors of length `n` occurring in the bi-infinite periodic
    /// sequences generated by the set.
    pub fn factors(&self, n: usize) -> BTreeSet<Vec<u8>> {
        let mut out = BTreeSet::new();
        if n == 0 {
            out.insert(Vec::new());
            return out;
        }
        for w in &self.generators {
            let p = w.len();
            for start in 0..p {
                let f: Vec<u8> = (0..n).map(|i| w.symbols[(start + i) % p]).collect();
                out.insert(f);
            }
        }
        out
    }
}

/// The complexity function `C(n)`: number of distinct length-`n` factors.
pub fn word_complexity(set: &SymbolicOrbitSet, n: usize) -> usize {
    set.factors(n).len()
}

/// Sturmian-or-lower complexity test: `C(n) <= n + 1` for all `n <= n_max`.
pub fn is_sturmian_complexity(set: &SymbolicOrbitSet, n_max: usize) -> bool {
    (1..=n_max).all(|n| word_complexity(set, n) <= n + 1)
}

/// Number of distinct length-`n` windows across finite sample strings.
/// Unlike `word_complexity` this does not wrap around, so it suits
/// truncated codings of non-periodic points; it can only undercount the
/// complexity of the underlying system.
pub fn prefix_complexity(samples: &[Vec<u8>], n: usize) -> usize {
    let mut seen: HashSet<&[u8]> = HashSet::new();
    for s in samples {
        for w in s.windows(n) {
            seen.insert(w);
        }
    }
    seen.len()
}

/// Moreau's necklace-counting value: the number of Lyndon words of length
/// exactly `n` over `d` symbols. Used as an independent cross-check on the
/// enumeration.
pub fn lyndon_count(d: u64, n: u64) -> u64 {
    // (1/n) sum_{e | n} mu(e) d^{n/e}
    let mobius = |mut m: u64| -> i64 {
        let mut result = 1i64;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if m > 1 {
            result = -result;
        }
        result
    };
    let mut total = 0i64;
    for e in 1..=n {
        if n % e == 0 {
            total += mobius(e) * (d as i64).pow((n / e) as u32);
        }
    }
    (total / n as i64) as u64
}
