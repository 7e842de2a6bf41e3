//! Domain types for peak statistics: the four counting regimes, peak sets,
//! signed words, and exact counts.
//!
//! Positions are 1-based. A [`PeakSet`] is stored as a `u64` bitmask where
//! bit `i - 1` is set exactly when position `i` belongs to the set, so the
//! largest representable position is 64.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest `n` accepted by [`admissible_sets`].
pub const MAX_SET_N: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeakError {
    #[error("peak positions must be >= 1, got {0}")]
    ZeroPosition(u32),
    #[error("peak position {0} exceeds the maximum of 64")]
    PositionTooLarge(u32),
    #[error("peak positions must be strictly increasing ({0} follows {1})")]
    NotIncreasing(u32, u32),
    #[error("peak set contains consecutive positions {0} and {1}")]
    Consecutive(u32, u32),
    #[error("malformed peak set text {0:?}")]
    Parse(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("n = {n} is outside the supported range {min}..={max}")]
    NOutOfRange { n: u32, min: u32, max: u32 },
    #[error("peak set {set:?} has a position larger than n - 1 = {limit}")]
    SetExceedsLength { set: String, limit: i64 },
    #[error("unknown variant {0:?}")]
    UnknownVariant(String),
}

/// Underlying group of words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    /// Ordinary permutations of `[n]`.
    Symmetric,
    /// Signed permutations of `[n]`.
    Hyperoctahedral,
}

impl Group {
    pub fn token(self) -> &'static str {
        match self {
            Group::Symmetric => "sym",
            Group::Hyperoctahedral => "hyp",
        }
    }
}

/// One of the four counting regimes: a group together with a flag saying
/// whether a zero is prepended to every word (which allows a peak at 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variant {
    pub group: Group,
    pub prefix_zero: bool,
}

impl Variant {
    /// Permutations, no prepended zero.
    pub const P: Variant = Variant::new(Group::Symmetric, false);
    /// Permutations with a prepended zero.
    pub const P_HAT: Variant = Variant::new(Group::Symmetric, true);
    /// Signed permutations, no prepended zero.
    pub const PB: Variant = Variant::new(Group::Hyperoctahedral, false);
    /// Signed permutations with a prepended zero.
    pub const PB_HAT: Variant = Variant::new(Group::Hyperoctahedral, true);

    pub const ALL: [Variant; 4] = [Variant::P, Variant::P_HAT, Variant::PB, Variant::PB_HAT];

    pub const fn new(group: Group, prefix_zero: bool) -> Self {
        Variant { group, prefix_zero }
    }

    pub fn is_signed(self) -> bool {
        self.group == Group::Hyperoctahedral
    }

    /// Smallest position a peak can occupy in this regime.
    pub fn min_position(self) -> u32 {
        if self.prefix_zero {
            1
        } else {
            2
        }
    }

    /// Stable text token: `sym`, `sym-hat`, `hyp`, `hyp-hat`.
    pub fn token(self) -> &'static str {
        match (self.group, self.prefix_zero) {
            (Group::Symmetric, false) => "sym",
            (Group::Symmetric, true) => "sym-hat",
            (Group::Hyperoctahedral, false) => "hyp",
            (Group::Hyperoctahedral, true) => "hyp-hat",
        }
    }

    /// Order of the underlying group for words of length `n`.
    pub fn group_order(self, n: u32) -> BigUint {
        let mut order: BigUint = (1..=n as u64).product();
        if self.is_signed() {
            order <<= n as usize;
        }
        order
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Variant {
    type Err = PeakError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.token() == s)
            .ok_or_else(|| PeakError::UnknownVariant(s.to_string()))
    }
}

/// A set of peak positions. Consecutive positions are rejected at
/// construction since no word can have peaks at both `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PeakSet(u64);

impl PeakSet {
    pub const EMPTY: PeakSet = PeakSet(0);

    pub fn new(positions: &[u32]) -> Result<Self, PeakError> {
        let mut bits = 0u64;
        let mut prev: Option<u32> = None;
        for &p in positions {
            if p == 0 {
                return Err(PeakError::ZeroPosition(p));
            }
            if p > 64 {
                return Err(PeakError::PositionTooLarge(p));
            }
            if let Some(q) = prev {
                if p <= q {
                    return Err(PeakError::NotIncreasing(p, q));
                }
                if p == q + 1 {
                    return Err(PeakError::Consecutive(q, p));
                }
            }
            bits |= 1u64 << (p - 1);
            prev = Some(p);
        }
        Ok(PeakSet(bits))
    }

    /// Builds a set from its bitmask, rejecting adjacent bits.
    pub fn from_bits(bits: u64) -> Result<Self, PeakError> {
        let adjacent = bits & (bits >> 1);
        if adjacent != 0 {
            let low = adjacent.trailing_zeros() + 1;
            return Err(PeakError::Consecutive(low, low + 1));
        }
        Ok(PeakSet(bits))
    }

    /// Caller guarantees `bits & (bits >> 1) == 0`.
    pub(crate) fn from_bits_unchecked(bits: u64) -> Self {
        debug_assert_eq!(bits & (bits >> 1), 0);
        PeakSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Number of peaks, `s = |S|`.
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, position: u32) -> bool {
        (1..=64).contains(&position) && self.0 & (1u64 << (position - 1)) != 0
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    pub fn positions(self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let p = rest.trailing_zeros() + 1;
            rest &= rest - 1;
            Some(p)
        })
    }

    pub fn has_even(self) -> bool {
        // bit i-1 holds position i, so even positions live at odd bit indices
        self.0 & 0xAAAA_AAAA_AAAA_AAAA != 0
    }
}

impl fmt::Display for PeakSet {
    /// Canonical text form: ascending comma-separated positions, the empty
    /// set renders as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses a comma-separated list of positions. Surrounding braces and
/// whitespace are tolerated; `""`, `"{}"` and `"∅"` denote the empty set.
pub fn parse_positions(text: &str) -> Result<Vec<u32>, PeakError> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(trimmed)
        .trim();
    if inner.is_empty() || inner == "∅" {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| PeakError::Parse(text.to_string()))
        })
        .collect()
}

impl FromStr for PeakSet {
    type Err = PeakError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PeakSet::new(&parse_positions(s)?)
    }
}

/// A signed word `π₁…πₙ` whose absolute values are a permutation of `[n]`.
/// Unsigned permutations are the special case with every entry positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    entries: Vec<i32>,
}

impl SignedPermutation {
    pub fn new(entries: Vec<i32>) -> Result<Self, PeakError> {
        let n = entries.len();
        if n == 0 {
            return Err(PeakError::MalformedWord("empty word".into()));
        }
        if n > i32::MAX as usize {
            return Err(PeakError::MalformedWord("word too long".into()));
        }
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            if e == 0 {
                return Err(PeakError::MalformedWord("zero entry".into()));
            }
            let a = e.unsigned_abs() as usize;
            if a > n {
                return Err(PeakError::MalformedWord(format!(
                    "|{e}| exceeds length {n}"
                )));
            }
            if seen[a] {
                return Err(PeakError::MalformedWord(format!(
                    "absolute value {a} repeated"
                )));
            }
            seen[a] = true;
        }
        Ok(SignedPermutation { entries })
    }

    /// The identity `1 2 … n`.
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            entries: (1..=n as i32).collect(),
        }
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every entry is positive, i.e. the word lies in Sₙ.
    pub fn is_unsigned(&self) -> bool {
        self.entries.iter().all(|&e| e > 0)
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Arbitrary-precision nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Count(pub BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_even(&self) -> bool {
        !self.0.bit(0)
    }

    /// Converts a signed value; `None` for negative inputs.
    pub fn from_signed(value: &BigInt) -> Option<Self> {
        value.to_biguint().map(Count)
    }

    pub fn to_signed(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Count {
    type Err = PeakError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(PeakError::Parse(s.to_string()));
        }
        s.parse::<BigUint>()
            .map(Count)
            .map_err(|_| PeakError::Parse(s.to_string()))
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Peak bitmask of a raw word; bit `i - 1` is set for a peak at `i`.
///
/// Callers guarantee the word is well formed. This is the inner loop of the
/// exhaustive enumerator so it does no validation.
#[inline]
pub fn peak_mask(word: &[i32], prefix_zero: bool) -> u64 {
    let n = word.len();
    let mut mask = 0u64;
    if prefix_zero && n >= 2 && word[0] > 0 && word[0] > word[1] {
        mask |= 1;
    }
    for i in 1..n.saturating_sub(1) {
        if word[i - 1] < word[i] && word[i] > word[i + 1] {
            mask |= 1u64 << i;
        }
    }
    mask
}

/// Peak set of a word, optionally with `π₀ = 0` prepended.
pub fn peak_set(pi: &SignedPermutation, prefix_zero: bool) -> PeakSet {
    PeakSet(peak_mask(pi.entries(), prefix_zero))
}

/// Validating front end to [`peak_set`] for raw entries.
pub fn peak_set_of_word(entries: &[i32], prefix_zero: bool) -> Result<PeakSet, PeakError> {
    let pi = SignedPermutation::new(entries.to_vec())?;
    Ok(peak_set(&pi, prefix_zero))
}

/// Whether some length-`n` word of the given regime has peak set `set`.
pub fn is_admissible(set: PeakSet, n: u32, variant: Variant) -> bool {
    match (set.min(), set.max()) {
        (Some(lo), Some(hi)) => lo >= variant.min_position() && hi < n,
        _ => true,
    }
}

/// Smallest fibbinary number (no two adjacent set bits) greater than `x`,
/// assuming `x` itself is fibbinary.
fn next_fibbinary(x: u64) -> Option<u64> {
    let filled = x | (x >> 1);
    let carried = filled.checked_add(1)?;
    let low = carried & carried.wrapping_neg();
    let keep = !(low.wrapping_shl(1).wrapping_sub(1));
    Some(low | (x & keep))
}

/// Lazy iterator over the admissible sets for `(n, variant)` in increasing
/// bitmask order.
#[derive(Debug, Clone)]
pub struct AdmissibleSets {
    next: Option<u64>,
    limit: u64,
    shift: u32,
}

impl Iterator for AdmissibleSets {
    type Item = PeakSet;

    fn next(&mut self) -> Option<PeakSet> {
        let cur = self.next?;
        self.next = next_fibbinary(cur).filter(|&m| m < self.limit);
        Some(PeakSet(cur << self.shift))
    }
}

/// Iterates admissible sets without materialising them.
pub fn iter_admissible_sets(n: u32, variant: Variant) -> Result<AdmissibleSets, PeakError> {
    if !(1..=MAX_SET_N).contains(&n) {
        return Err(PeakError::NOutOfRange {
            n,
            min: 1,
            max: MAX_SET_N,
        });
    }
    // free positions: 1..=n-1 (hat) or 2..=n-1 (plain), packed from bit 0
    let shift = if variant.prefix_zero { 0 } else { 1 };
    let width = (n - 1).saturating_sub(shift);
    let limit = if width >= 64 { u64::MAX } else { 1u64 << width };
    Ok(AdmissibleSets {
        next: Some(0),
        limit,
        shift,
    })
}

/// All admissible sets for `(n, variant)`, in increasing bitmask order.
pub fn admissible_sets(n: u32, variant: Variant) -> Result<Vec<PeakSet>, PeakError> {
    Ok(iter_admissible_sets(n, variant)?.collect())
}

/// Reverses positions: `i ↦ n + 1 − i`.
pub fn reflect_set(set: PeakSet, n: u32) -> Result<PeakSet, PeakError> {
    if let Some(hi) = set.max() {
        if hi + 1 > n {
            return Err(PeakError::SetExceedsLength {
                set: set.to_string(),
                limit: n as i64 - 1,
            });
        }
    }
    let mut positions: Vec<u32> = set.iter().map(|i| n + 1 - i).collect();
    positions.reverse();
    PeakSet::new(&positions)
}
