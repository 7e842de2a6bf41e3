//! Exhaustive ground truth: enumerate every word of the group, tally by
//! peak-set bitmask.
//!
//! Unsigned permutations are produced by unranking in the factorial number
//! system, so `[0, n!)` splits into contiguous rank ranges that workers walk
//! independently with lexicographic successor steps. Signed words are the
//! `2ⁿ` sign patterns over each permutation. Every worker keeps a dense
//! tally of length `2^(n−1)`; tallies are summed at the end.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::peakcore::{peak_mask, peak_set, Count, PeakError, PeakSet, SignedPermutation, Variant};

/// Default enumeration caps.
pub const DEFAULT_MAX_N_SYM: u32 = 12;
pub const DEFAULT_MAX_N_HYP: u32 = 9;
/// Caps that cannot be overridden.
pub const HARD_MAX_N_SYM: u32 = 13;
pub const HARD_MAX_N_HYP: u32 = 10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("n must be at least 1, got {0}")]
    InvalidN(u32),
    #[error("{variant} enumeration at n = {n} exceeds the configured cap of {cap}")]
    ResourceLimit { variant: Variant, n: u32, cap: u32 },
    #[error("word {0} has a peak; the shape map is defined on peak-free words only")]
    HasPeak(String),
    #[error("not a partition of [{size}] into at most 3 blocks: {reason}")]
    BadPartition { size: u32, reason: String },
    #[error(transparent)]
    Peak(#[from] PeakError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_n_sym: u32,
    pub max_n_hyp: u32,
    /// Worker count; `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_n_sym: DEFAULT_MAX_N_SYM,
            max_n_hyp: DEFAULT_MAX_N_HYP,
            threads: None,
        }
    }
}

impl OracleConfig {
    /// Effective cap; configured values above the hard caps are clamped.
    pub fn cap(&self, variant: Variant) -> u32 {
        if variant.is_signed() {
            self.max_n_hyp.min(HARD_MAX_N_HYP)
        } else {
            self.max_n_sym.min(HARD_MAX_N_SYM)
        }
    }

    /// Caps raised to the hard limits.
    pub fn unlocked(threads: Option<usize>) -> Self {
        OracleConfig {
            max_n_sym: HARD_MAX_N_SYM,
            max_n_hyp: HARD_MAX_N_HYP,
            threads,
        }
    }
}

/// Counts of every peak set for one `(variant, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TallyTable {
    variant: Variant,
    n: u32,
    dense: Vec<u64>,
}

impl TallyTable {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, set: PeakSet) -> Count {
        Count::from(self.get_u64(set))
    }

    pub fn get_u64(&self, set: PeakSet) -> u64 {
        self.dense.get(set.bits() as usize).copied().unwrap_or(0)
    }

    /// Nonzero entries in increasing bitmask order.
    pub fn counts(&self) -> BTreeMap<PeakSet, Count> {
        self.nonzero().map(|(s, c)| (s, Count::from(c))).collect()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (PeakSet, u64)> + '_ {
        self.dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(bits, &c)| (PeakSet::from_bits_unchecked(bits as u64), c))
    }

    pub fn total(&self) -> BigUint {
        self.dense.iter().map(|&c| BigUint::from(c)).sum()
    }
}

fn check_cap(variant: Variant, n: u32, config: &OracleConfig) -> Result<(), OracleError> {
    if n < 1 {
        return Err(OracleError::InvalidN(n));
    }
    let cap = config.cap(variant);
    if n > cap {
        return Err(OracleError::ResourceLimit { variant, n, cap });
    }
    Ok(())
}

fn factorials(n: usize) -> Vec<u64> {
    let mut f = vec![1u64; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as u64;
    }
    f
}

/// Permutation of `1..=n` with the given lexicographic rank.
pub fn unrank_permutation(n: usize, mut rank: u64) -> Vec<i32> {
    let fact = factorials(n);
    let mut available: Vec<i32> = (1..=n as i32).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let f = fact[n - 1 - i];
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(available.remove(idx));
    }
    out
}

/// Lexicographic successor in place; false at the last permutation.
fn next_permutation(p: &mut [i32]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn tally_range(variant: Variant, n: usize, start: u64, end: u64) -> Vec<u64> {
    let mut tally = vec![0u64; 1usize << (n - 1)];
    let mut perm = unrank_permutation(n, start);
    let mut word = perm.clone();
    let hat = variant.prefix_zero;
    for _ in start..end {
        if variant.is_signed() {
            for signs in 0u32..(1u32 << n) {
                for (i, (&p, w)) in perm.iter().zip(word.iter_mut()).enumerate() {
                    *w = if signs >> i & 1 == 1 { -p } else { p };
                }
                tally[peak_mask(&word, hat) as usize] += 1;
            }
        } else {
            tally[peak_mask(&perm, hat) as usize] += 1;
        }
        next_permutation(&mut perm);
    }
    tally
}

fn run_in_pool<T: Send>(
    threads: Option<usize>,
    job: impl FnOnce() -> T + Send,
) -> Result<T, OracleError> {
    match threads {
        None => Ok(job()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| OracleError::ThreadPool(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Tallies every word of the group by peak set.
pub fn enumerate_tally(
    variant: Variant,
    n: u32,
    config: &OracleConfig,
) -> Result<TallyTable, OracleError> {
    check_cap(variant, n, config)?;
    let nu = n as usize;
    let total = factorials(nu)[nu];
    let chunks = total.min(512);
    let bounds: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (total * c / chunks, total * (c + 1) / chunks))
        .collect();
    let dense = run_in_pool(config.threads, || {
        bounds
            .par_iter()
            .map(|&(a, b)| tally_range(variant, nu, a, b))
            .reduce(
                || vec![0u64; 1usize << (nu - 1)],
                |mut acc, part| {
                    acc.iter_mut().zip(part).for_each(|(x, y)| *x += y);
                    acc
                },
            )
    })?;
    Ok(TallyTable { variant, n, dense })
}

/// Count of one peak set by exhaustive enumeration.
pub fn oracle_count(
    variant: Variant,
    set: PeakSet,
    n: u32,
    config: &OracleConfig,
) -> Result<Count, OracleError> {
    Ok(enumerate_tally(variant, n, config)?.get(set))
}

/// All signed words of length `n` with no peak once `π₀ = 0` is prepended.
pub fn no_peak_signed_words(n: u32) -> Vec<SignedPermutation> {
    let nu = n as usize;
    let mut out = Vec::new();
    let mut perm: Vec<i32> = (1..=n as i32).collect();
    let mut word = perm.clone();
    loop {
        for signs in 0u32..(1u32 << nu) {
            for (i, (&p, w)) in perm.iter().zip(word.iter_mut()).enumerate() {
                *w = if signs >> i & 1 == 1 { -p } else { p };
            }
            if peak_mask(&word, true) == 0 {
                out.push(SignedPermutation::new(word.clone()).expect("well formed"));
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

/// The three sections of a peak-free word: a negative decreasing run `A`,
/// a negative increasing run `B` starting at the minimum, and a positive
/// increasing run `C`. Stored as absolute values, ascending; `c` also holds
/// the marker `n + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapePartition {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
}

impl ShapePartition {
    /// Nonempty blocks, each ascending, ordered by smallest element.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut blocks: Vec<Vec<u32>> = [&self.a, &self.b, &self.c]
            .into_iter()
            .filter(|b| !b.is_empty())
            .cloned()
            .collect();
        blocks.sort();
        blocks
    }
}

/// Maps a peak-free word (with `π₀ = 0`) to a partition of `[n+1]` into at
/// most three blocks.
pub fn partition_shape_map(pi: &SignedPermutation) -> Result<ShapePartition, OracleError> {
    if !peak_set(pi, true).is_empty() {
        return Err(OracleError::HasPeak(pi.to_string()));
    }
    let w = pi.entries();
    let n = w.len() as u32;
    let neg_len = w.iter().take_while(|&&x| x < 0).count();
    let split = (0..neg_len).min_by_key(|&i| w[i]).unwrap_or(0);
    let abs_sorted = |xs: &[i32]| {
        let mut v: Vec<u32> = xs.iter().map(|x| x.unsigned_abs()).collect();
        v.sort_unstable();
        v
    };
    let a = abs_sorted(&w[..split]);
    let b = abs_sorted(&w[split..neg_len]);
    let mut c = abs_sorted(&w[neg_len..]);
    c.push(n + 1);
    Ok(ShapePartition { a, b, c })
}

/// Inverse of [`partition_shape_map`]: `blocks` must partition `[n+1]` into
/// at most three nonempty blocks.
pub fn partition_to_word(blocks: &[Vec<u32>], n: u32) -> Result<SignedPermutation, OracleError> {
    let size = n + 1;
    let bad = |reason: &str| OracleError::BadPartition {
        size,
        reason: reason.to_string(),
    };
    if blocks.is_empty() || blocks.len() > 3 {
        return Err(bad("need between 1 and 3 blocks"));
    }
    let mut seen = BTreeSet::new();
    for block in blocks {
        if block.is_empty() {
            return Err(bad("empty block"));
        }
        for &x in block {
            if x == 0 || x > size || !seen.insert(x) {
                return Err(bad("blocks overlap or leave the ground set"));
            }
        }
    }
    if seen.len() != size as usize {
        return Err(bad("blocks do not cover the ground set"));
    }
    let c_idx = blocks.iter().position(|b| b.contains(&size)).unwrap();
    let mut rest: Vec<&Vec<u32>> = blocks
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != c_idx)
        .map(|(_, b)| b)
        .collect();
    rest.sort_by_key(|b| b.iter().max().copied());
    // B holds the largest remaining element
    let b_block = rest.pop();
    let a_block = rest.pop();

    let mut word = Vec::with_capacity(n as usize);
    if let Some(a) = a_block {
        let mut a = a.clone();
        a.sort_unstable();
        word.extend(a.iter().map(|&x| -(x as i32)));
    }
    if let Some(b) = b_block {
        let mut b = b.clone();
        b.sort_unstable_by(|x, y| y.cmp(x));
        word.extend(b.iter().map(|&x| -(x as i32)));
    }
    let mut c: Vec<u32> = blocks[c_idx]
        .iter()
        .copied()
        .filter(|&x| x != size)
        .collect();
    c.sort_unstable();
    word.extend(c.iter().map(|&x| x as i32));
    Ok(SignedPermutation::new(word)?)
}

/// Every partition of `{1..size}` into at most `max_blocks` blocks, via
/// restricted growth strings. Blocks are ascending and ordered by their
/// smallest element.
pub fn set_partitions(size: u32, max_blocks: usize) -> Vec<Vec<Vec<u32>>> {
    fn grow(
        i: u32,
        size: u32,
        max_blocks: usize,
        current: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        if i > size {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(i);
            grow(i + 1, size, max_blocks, current, out);
            current[b].pop();
        }
        if current.len() < max_blocks {
            current.push(vec![i]);
            grow(i + 1, size, max_blocks, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if size == 0 {
        out.push(Vec::new());
        return out;
    }
    grow(1, size, max_blocks, &mut Vec::new(), &mut out);
    out
}

/// Outcome of checking the shape map on every peak-free word of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionSummary {
    pub n: u32,
    pub words: usize,
    pub distinct_images: usize,
    pub partitions: usize,
    pub round_trips: bool,
    pub covers_partitions: bool,
}

impl BijectionSummary {
    pub fn is_bijection(&self) -> bool {
        self.words == self.distinct_images
            && self.distinct_images == self.partitions
            && self.round_trips
            && self.covers_partitions
    }
}

pub fn check_shape_bijection(n: u32) -> Result<BijectionSummary, OracleError> {
    let words = no_peak_signed_words(n);
    let mut images = BTreeSet::new();
    let mut round_trips = true;
    for w in &words {
        let blocks = partition_shape_map(w)?.blocks();
        round_trips &= partition_to_word(&blocks, n)? == *w;
        images.insert(blocks);
    }
    let all = set_partitions(n + 1, 3);
    let mut covers = true;
    for p in &all {
        let w = partition_to_word(p, n)?;
        covers &= peak_set(&w, true).is_empty() && partition_shape_map(&w)?.blocks() == *p;
    }
    Ok(BijectionSummary {
        n,
        words: words.len(),
        distinct_images: images.len(),
        partitions: all.len(),
        round_trips,
        covers_partitions: covers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: &[u32]) -> PeakSet {
        PeakSet::new(p).unwrap()
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn unrank_is_lexicographic() {
        let mut p: Vec<i32> = (1..=5).collect();
        for r in 0..120u64 {
            assert_eq!(unrank_permutation(5, r), p);
            next_permutation(&mut p);
        }
        assert!(!next_permutation(&mut [3, 2, 1]));
    }

    #[test]
    fn small_tables() {
        let t = enumerate_tally(Variant::PB, 2, &cfg()).unwrap();
        assert_eq!(
            t.counts(),
            BTreeMap::from([(PeakSet::EMPTY, Count::from(8))])
        );

        let t = enumerate_tally(Variant::PB_HAT, 2, &cfg()).unwrap();
        assert_eq!(
            t.counts(),
            BTreeMap::from([
                (PeakSet::EMPTY, Count::from(5)),
                (set(&[1]), Count::from(3))
            ])
        );

        let t = enumerate_tally(Variant::P_HAT, 2, &cfg()).unwrap();
        assert_eq!(
            t.counts(),
            BTreeMap::from([
                (PeakSet::EMPTY, Count::from(1)),
                (set(&[1]), Count::from(1))
            ])
        );
    }

    #[test]
    fn oracle_count_examples() {
        assert_eq!(
            oracle_count(Variant::PB_HAT, set(&[3]), 4, &cfg()).unwrap(),
            Count::from(71)
        );
        assert_eq!(
            oracle_count(Variant::PB_HAT, set(&[1, 3]), 4, &cfg()).unwrap(),
            Count::from(57)
        );
        assert_eq!(
            oracle_count(Variant::P, set(&[2]), 3, &cfg()).unwrap(),
            Count::from(2)
        );
    }

    #[test]
    fn caps_are_enforced() {
        let tight = OracleConfig {
            max_n_sym: 4,
            max_n_hyp: 3,
            threads: Some(1),
        };
        assert!(matches!(
            enumerate_tally(Variant::PB, 4, &tight),
            Err(OracleError::ResourceLimit { cap: 3, .. })
        ));
        assert!(enumerate_tally(Variant::P, 4, &tight).is_ok());
        assert!(matches!(
            enumerate_tally(Variant::P, 0, &tight),
            Err(OracleError::InvalidN(0))
        ));
    }

    #[test]
    fn chunking_does_not_change_results() {
        let single = OracleConfig {
            threads: Some(1),
            ..cfg()
        };
        let many = OracleConfig {
            threads: Some(4),
            ..cfg()
        };
        for v in Variant::ALL {
            assert_eq!(
                enumerate_tally(v, 6, &single).unwrap(),
                enumerate_tally(v, 6, &many).unwrap()
            );
        }
    }

    #[test]
    fn shape_map_example() {
        let pi = SignedPermutation::new(vec![-4, -5, -6, -2, -1, 3]).unwrap();
        let shape = partition_shape_map(&pi).unwrap();
        assert_eq!(shape.a, vec![4, 5]);
        assert_eq!(shape.b, vec![1, 2, 6]);
        assert_eq!(shape.c, vec![3, 7]);
        assert_eq!(partition_to_word(&shape.blocks(), 6).unwrap(), pi);
    }

    #[test]
    fn shape_map_edge_cases() {
        let id = SignedPermutation::identity(4);
        let shape = partition_shape_map(&id).unwrap();
        assert_eq!(shape.blocks(), vec![vec![1, 2, 3, 4, 5]]);

        // all negative and decreasing: B is the final element only
        let dec = SignedPermutation::new(vec![-1, -2, -3]).unwrap();
        let shape = partition_shape_map(&dec).unwrap();
        assert_eq!(shape.a, vec![1, 2]);
        assert_eq!(shape.b, vec![3]);
        assert_eq!(shape.c, vec![4]);

        let peaked = SignedPermutation::new(vec![2, 1]).unwrap();
        assert!(matches!(
            partition_shape_map(&peaked),
            Err(OracleError::HasPeak(_))
        ));
    }

    #[test]
    fn partition_validation() {
        assert!(partition_to_word(&[vec![1, 2], vec![3]], 3).is_err());
        assert!(partition_to_word(&[vec![1], vec![2], vec![3], vec![4]], 3).is_err());
        assert!(partition_to_word(&[vec![1, 2], vec![2, 3, 4]], 3).is_err());
        assert!(partition_to_word(&[vec![1, 2, 3, 4]], 3).is_ok());
    }

    #[test]
    fn image_size_for_three() {
        assert_eq!(set_partitions(4, 3).len(), 14);
        let summary = check_shape_bijection(3).unwrap();
        assert_eq!(summary.words, 14);
        assert!(summary.is_bijection(), "{summary:?}");
    }
}
