//! Binary words, dyadic cylinders and the run-length subshifts `X_m`.
//!
//! A word `q_1 ... q_n` addresses the dyadic interval `[v 2^-n, (v+1) 2^-n]`
//! where `v` is the word read as a big-endian binary integer. Points of the
//! unit interval are exact rationals; dyadic points use the terminating
//! (trailing zeros) expansion.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::limits;

/// Exact point of the unit interval.
pub type Rational = Ratio<u64>;

/// Longest word that still has an exact `u64` interval.
pub const MAX_WORD_LEN: u32 = 62;

/// A finite 0/1 word, packed big-endian into the low `len` bits of `value`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord {
    len: u32,
    value: u64,
}

impl BinaryWord {
    pub fn new(value: u64, len: u32) -> Result<Self> {
        if len == 0 || len > MAX_WORD_LEN || (value >> len) != 0 {
            return Err(Error::InvalidWord(format!("value {value} with length {len}")));
        }
        Ok(Self { len, value })
    }

    pub(crate) fn from_parts(value: u64, len: u32) -> Self {
        debug_assert!((1..=MAX_WORD_LEN).contains(&len) && value >> len == 0);
        Self { len, value }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_WORD_LEN as usize || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidWord(format!("{bits:?}")));
        }
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Ok(Self::from_parts(value, bits.len() as u32))
    }

    /// The alternating word `0101...` of length `n`.
    pub fn alternating(n: u32) -> Result<Self> {
        let bits: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
        Self::from_bits(&bits)
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The word read as a big-endian binary integer.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Symbol at 0-based position `i`.
    pub fn bit(&self, i: u32) -> u8 {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        ((self.value >> (self.len - 1 - i)) & 1) as u8
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    pub fn last(&self) -> u8 {
        (self.value & 1) as u8
    }

    /// `self` followed by `b`.
    pub fn push(&self, b: u8) -> Result<Self> {
        if b > 1 || self.len >= MAX_WORD_LEN {
            return Err(Error::InvalidWord(format!("{self}{b}")));
        }
        Ok(Self::from_parts((self.value << 1) | b as u64, self.len + 1))
    }

    /// Length of the maximal run of equal symbols ending at the last position.
    pub fn trailing_run(&self) -> u32 {
        let last = self.last();
        let mut run = 0;
        while run < self.len && self.bit(self.len - 1 - run) == last {
            run += 1;
        }
        run
    }

    /// Complement of the suffix starting at 0-based position `from`.
    pub fn flip_suffix(&self, from: u32) -> Self {
        debug_assert!(from < self.len);
        let mask = (1u64 << (self.len - from)) - 1;
        Self::from_parts(self.value ^ mask, self.len)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Option<Vec<u8>> = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect();
        bits.and_then(|b| Self::from_bits(&b).ok())
            .ok_or_else(|| Error::InvalidWord(s.to_string()))
    }
}

/// Parses `"p/q"` or an integer into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<u64>(), q.trim().parse::<u64>()),
        None => (s.parse::<u64>(), Ok(1)),
    };
    match (p, q) {
        (Ok(p), Ok(q)) if q != 0 => Ok(Rational::new(p, q)),
        _ => Err(Error::InvalidRational(s.to_string())),
    }
}

/// `"p/q"`, the serialization used by the CLI.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// True when the reduced denominator is a power of two (including integers).
pub fn is_dyadic(x: &Rational) -> bool {
    x.denom().is_power_of_two()
}

/// Dyadic points where `psi` diverges along the doubling orbit.
pub fn is_singular(x: &Rational) -> bool {
    is_dyadic(x)
}

/// Closed interval `[low, high]` of the cylinder addressed by `word`.
pub fn word_interval(word: &BinaryWord) -> (Rational, Rational) {
    let den = 1u64 << word.len();
    (
        Rational::new(word.value(), den),
        Rational::new(word.value() + 1, den),
    )
}

pub fn midpoint(word: &BinaryWord) -> Rational {
    let den = 1u64 << (word.len() + 1);
    Rational::new(2 * word.value() + 1, den)
}

/// Binary digits of a point in `[0, 1)`; dyadic points end in zeros.
pub fn binary_digits(x: &Rational) -> impl Iterator<Item = u8> {
    let q = *x.denom() as u128;
    let mut p = *x.numer() as u128;
    std::iter::from_fn(move || {
        p *= 2;
        if p >= q {
            p -= q;
            Some(1)
        } else {
            Some(0)
        }
    })
}

fn check_unit(x: &Rational) -> Result<()> {
    if *x >= Rational::one() {
        return Err(Error::PointOutOfRange(format_rational(x)));
    }
    Ok(())
}

/// The length-`n` cylinder containing `x`.
pub fn point_to_word(x: &Rational, n: u32) -> Result<BinaryWord> {
    check_unit(x)?;
    if n == 0 || n > MAX_WORD_LEN {
        return Err(Error::OutOfRange {
            what: "word length",
            value: n as i64,
            min: 1,
            max: MAX_WORD_LEN as i64,
        });
    }
    let value = binary_digits(x)
        .take(n as usize)
        .fold(0u64, |acc, b| (acc << 1) | b as u64);
    Ok(BinaryWord::from_parts(value, n))
}

/// Shift-space distance `2^-k`, `k` the length of the common digit prefix.
pub fn rho2(x: &Rational, y: &Rational) -> Result<f64> {
    check_unit(x)?;
    check_unit(y)?;
    for z in [x, y] {
        if is_dyadic(z) {
            return Err(Error::DyadicPoint(format_rational(z)));
        }
    }
    if x == y {
        return Ok(0.0);
    }
    // Distinct rationals differ within log2(q_x q_y) + 2 digits.
    let k = binary_digits(x)
        .zip(binary_digits(y))
        .take_while(|(a, b)| a == b)
        .count();
    Ok((-(k as f64)).exp2())
}

/// The subshift of finite type `X_m`: no run of `m + 1` equal symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sft {
    m: u32,
}

impl Sft {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m >= MAX_WORD_LEN {
            return Err(Error::OutOfRange {
                what: "m",
                value: m as i64,
                min: 1,
                max: MAX_WORD_LEN as i64 - 1,
            });
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// 0-based position where the first run of length `m + 1` is completed.
fn first_forbidden(word: &BinaryWord, m: u32) -> Option<u32> {
    let mut run = 1;
    for i in 1..word.len() {
        if word.bit(i) == word.bit(i - 1) {
            run += 1;
            if run > m {
                return Some(i);
            }
        } else {
            run = 1;
        }
    }
    None
}

pub fn is_admissible(word: &BinaryWord, sft: Sft) -> bool {
    first_forbidden(word, sft.m()).is_none()
}

/// Lexicographic enumeration of `Σ^n` or, with an SFT, of `Σ_m^n`.
///
/// The constrained case is a depth-first walk over (last symbol, run length)
/// so only admissible prefixes are ever visited.
pub struct Words {
    n: u32,
    m: u32,
    // (prefix value, prefix length, current run length)
    stack: Vec<(u64, u32, u32)>,
}

impl Words {
    pub fn new(n: u32, sft: Option<Sft>) -> Result<Self> {
        if n == 0 || n > MAX_WORD_LEN {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as i64,
                min: 1,
                max: MAX_WORD_LEN as i64,
            });
        }
        let m = sft.map_or(u32::MAX, |s| s.m());
        Ok(Self {
            n,
            m,
            stack: vec![(1, 1, 1), (0, 1, 1)],
        })
    }
}

impl Iterator for Words {
    type Item = BinaryWord;

    fn next(&mut self) -> Option<BinaryWord> {
        while let Some((value, len, run)) = self.stack.pop() {
            if len == self.n {
                return Some(BinaryWord::from_parts(value, len));
            }
            let last = value & 1;
            // push 1 first so 0 is explored first
            for b in [1u64, 0] {
                let next_run = if b == last { run + 1 } else { 1 };
                if next_run <= self.m {
                    self.stack.push(((value << 1) | b, len + 1, next_run));
                }
            }
        }
        None
    }
}

pub fn enumerate_words(n: u32, sft: Option<Sft>) -> Result<Words> {
    Words::new(n, sft)
}

/// `|Σ_m^n|` (or `2^n`) by dynamic programming over run lengths.
pub fn count_words(n: u32, sft: Option<Sft>) -> u128 {
    let Some(sft) = sft else {
        return 1u128 << n;
    };
    let m = sft.m() as usize;
    // ends[r] = number of admissible words ending in a run of length r+1 (per symbol)
    let mut ends = vec![0u128; m];
    ends[0] = 1;
    for _ in 1..n {
        let total: u128 = ends.iter().sum();
        let mut next = vec![0u128; m];
        next[0] = total;
        next[1..m].copy_from_slice(&ends[..(m - 1)]);
        ends = next;
    }
    2 * ends.iter().sum::<u128>()
}

/// The collapse map `h`: locate the first completed `(m+1)`-run, complement the
/// suffix from that position and rescan until the word is admissible.
pub fn collapse(word: &BinaryWord, sft: Sft) -> BinaryWord {
    let mut w = *word;
    while let Some(gamma) = first_forbidden(&w, sft.m()) {
        w = w.flip_suffix(gamma);
    }
    w
}

/// `card{ω in Σ^n : h(ω) = target}` by exhaustive search over `Σ^n`.
pub fn preimage_count(target: &BinaryWord, sft: Sft, exec: Exec) -> Result<u64> {
    if !is_admissible(target, sft) {
        return Err(Error::Inadmissible {
            word: target.to_string(),
            m: sft.m(),
        });
    }
    let n = target.len();
    limits::check_level(n, limits::DEFAULT_ENUM_LEVEL)?;
    let total = 1usize << n;
    let hits = exec.fold_chunks(
        total,
        |range| {
            range
                .filter(|&v| collapse(&BinaryWord::from_parts(v as u64, n), sft) == *target)
                .count() as u64
        },
        |a, b| a + b,
        0,
    );
    Ok(hits)
}

/// Denominator-aware constructor for the rationals used by the tails below.
pub(crate) fn rational_from_u128(p: u128, q: u128) -> Rational {
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    Rational::new(
        u64::try_from(p).expect("numerator fits u64"),
        u64::try_from(q).expect("denominator fits u64"),
    )
}

/// Point of `⟨word⟩` whose expansion continues with the alternating tail that
/// starts with the complement of the last symbol. It lies in every `X_m` the
/// word belongs to.
pub fn alternating_representative(word: &BinaryWord) -> Rational {
    // 0.1010... = 2/3, 0.0101... = 1/3
    let tail = if word.last() == 0 { 2 } else { 1 };
    let q = 3u128 << word.len();
    rational_from_u128(3 * word.value() as u128 + tail, q)
}

/// Leftmost and rightmost points of `⟨word⟩ ∩ X_m` (word assumed admissible).
pub fn sft_extremes(word: &BinaryWord, sft: Sft) -> (Rational, Rational) {
    let m = sft.m();
    let extreme = |fill: u8| -> Rational {
        // pad with `fill` until the run is full, then the periodic block fill^m !fill
        let run = if word.last() == fill { word.trailing_run() } else { 0 };
        let pad = m - run;
        let prefix_len = word.len() + pad + 1;
        let mut prefix = word.value() as u128;
        for _ in 0..pad {
            prefix = (prefix << 1) | fill as u128;
        }
        prefix = (prefix << 1) | (1 - fill) as u128;
        // periodic block of length m+1
        let mut block = 0u128;
        for _ in 0..m {
            block = (block << 1) | fill as u128;
        }
        block = (block << 1) | (1 - fill) as u128;
        let period = (1u128 << (m + 1)) - 1;
        // x = (prefix + block / period) / 2^prefix_len
        rational_from_u128(prefix * period + block, period << prefix_len)
    };
    (extreme(0), extreme(1))
}
