//! Guessing random additive noise decoding.
//!
//! Both decoders walk a stream of candidate noise patterns from most to least
//! likely, strip each one from the received hard word, and ask the code's
//! [`MembershipOracle`] whether the result is a codeword. The first accepted
//! candidate is the decision.
//!
//! * [`grand_decode`] uses hard decisions only. On a binary symmetric channel
//!   with crossover below one half, likelihood falls with Hamming weight, so
//!   patterns come in nondecreasing weight ([`HammingPatterns`]).
//! * [`orbgrand_decode`] sorts positions by reliability and orders patterns by
//!   logistic weight, the sum of the 1-based reliability ranks flipped
//!   ([`LogisticPatterns`]).
//!
//! Generators are lazy and hold O(n) state; the full pattern space at n = 128
//! is never materialized.

use thiserror::Error;

use crate::bitblock::{BitVec, Message, MAX_BITS};
use crate::channel::{hard_decision, reliability_permutation, SoftWord};
use crate::codes::{MembershipOracle, Verdict};

/// Default cap on oracle queries per block.
pub const DEFAULT_MAX_QUERIES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrandError {
    #[error("query budget must be at least 1")]
    ZeroBudget,
}

/// Maximum number of oracle queries before a block is abandoned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternBudget {
    max_queries: u64,
}

impl PatternBudget {
    pub fn new(max_queries: u64) -> Result<Self, GrandError> {
        if max_queries == 0 {
            return Err(GrandError::ZeroBudget);
        }
        Ok(PatternBudget { max_queries })
    }

    pub fn unbounded() -> Self {
        PatternBudget { max_queries: u64::MAX }
    }

    pub fn max_queries(&self) -> u64 {
        self.max_queries
    }
}

impl Default for PatternBudget {
    fn default() -> Self {
        PatternBudget { max_queries: DEFAULT_MAX_QUERIES }
    }
}

/// A candidate noise sequence.
///
/// `mask` is left-aligned like [`BitVec`]: index `i` lives at bit `127 - i`.
/// For Hamming patterns the indices are word positions and `weight` is the
/// Hamming weight; for logistic patterns index `i` stands for rank `i + 1` and
/// `weight` is the rank sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoisePattern {
    pub mask: u128,
    pub weight: u32,
}

impl NoisePattern {
    /// Set indices, ascending.
    pub fn indices(&self) -> Vec<usize> {
        let mut m = self.mask;
        let mut out = Vec::with_capacity(m.count_ones() as usize);
        while m != 0 {
            let i = m.leading_zeros() as usize;
            out.push(i);
            m &= !(1u128 << (127 - i));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }
}

/// All `2^n` flip patterns in nondecreasing Hamming weight.
///
/// Within one weight, patterns go in increasing integer value of the pattern
/// read with position 0 as the least significant bit. So for `n = 3` the
/// weight-1 patterns flip position 0, then 1, then 2.
#[derive(Debug, Clone)]
pub struct HammingPatterns {
    n: u32,
    weight: u32,
    // Current pattern with position j at bit j.
    current: Option<u128>,
}

pub fn hamming_order_patterns(n: usize) -> HammingPatterns {
    HammingPatterns::new(n)
}

impl HammingPatterns {
    pub fn new(n: usize) -> Self {
        assert!((1..=MAX_BITS).contains(&n), "pattern length must be in 1..=128");
        HammingPatterns { n: n as u32, weight: 0, current: Some(0) }
    }

    fn first_of_weight(w: u32) -> u128 {
        if w == 128 {
            u128::MAX
        } else {
            (1u128 << w) - 1
        }
    }

    // Next integer with the same popcount (Gosper), if it still fits in n bits.
    fn same_weight_successor(&self, x: u128) -> Option<u128> {
        if x == 0 {
            return None;
        }
        let low = x & x.wrapping_neg();
        let (ripple, overflow) = x.overflowing_add(low);
        if overflow {
            return None;
        }
        let ones = ((ripple ^ x) >> 2) >> low.trailing_zeros();
        let next = ripple | ones;
        if self.n < 128 && next >> self.n != 0 {
            return None;
        }
        Some(next)
    }
}

impl Iterator for HammingPatterns {
    type Item = NoisePattern;

    fn next(&mut self) -> Option<NoisePattern> {
        let x = self.current?;
        let out = NoisePattern { mask: x.reverse_bits(), weight: self.weight };
        self.current = match self.same_weight_successor(x) {
            Some(next) => Some(next),
            None if self.weight < self.n => {
                self.weight += 1;
                Some(Self::first_of_weight(self.weight))
            }
            None => None,
        };
        Some(out)
    }
}

/// All subsets of ranks `{1..n}` in nondecreasing rank sum.
///
/// Ties in rank sum go to the subset with fewer elements, then to the
/// lexicographically smaller ascending rank list. The subsets of a given sum
/// and size are the partitions of the sum into that many distinct parts no
/// larger than `n`; they are produced one at a time by lexicographic successor.
#[derive(Debug, Clone)]
pub struct LogisticPatterns {
    n: i64,
    weight: i64,
    parts: Vec<i64>,
    started: bool,
    done: bool,
}

pub fn logistic_order_patterns(n: usize) -> LogisticPatterns {
    LogisticPatterns::new(n)
}

impl LogisticPatterns {
    pub fn new(n: usize) -> Self {
        assert!((1..=MAX_BITS).contains(&n), "pattern length must be in 1..=128");
        LogisticPatterns { n: n as i64, weight: 0, parts: Vec::new(), started: false, done: false }
    }

    /// Largest logistic weight, `n (n + 1) / 2`.
    pub fn max_weight(&self) -> i64 {
        self.n * (self.n + 1) / 2
    }

    // Sum of the r largest ranks.
    fn max_sum(&self, r: i64) -> i64 {
        r * self.n - r * (r - 1) / 2
    }

    // Can r distinct ranks in (lo, n] add up to s?
    fn feasible(&self, r: i64, s: i64, lo: i64) -> bool {
        if r == 0 {
            return s == 0;
        }
        lo + r <= self.n && s >= r * lo + r * (r + 1) / 2 && s <= self.max_sum(r)
    }

    // Appends the lexicographically smallest r ranks in (lo, n] summing to s.
    fn fill(&mut self, mut r: i64, mut s: i64, mut lo: i64) {
        while r > 0 {
            let v = (lo + 1).max(s - self.max_sum(r - 1));
            debug_assert!(self.feasible(r - 1, s - v, v));
            self.parts.push(v);
            s -= v;
            lo = v;
            r -= 1;
        }
    }

    // Lexicographic successor among subsets of the same sum and size.
    fn advance_same_shape(&mut self) -> bool {
        let m = self.parts.len() as i64;
        let mut prefix: i64 = self.parts.iter().sum();
        for i in (0..self.parts.len()).rev() {
            prefix -= self.parts[i];
            let s = self.weight - prefix;
            let r = m - i as i64;
            let v = (self.parts[i] + 1).max(s - self.max_sum(r - 1));
            if v <= self.n && self.feasible(r - 1, s - v, v) {
                self.parts.truncate(i);
                self.parts.push(v);
                self.fill(r - 1, s - v, v);
                return true;
            }
        }
        false
    }

    fn first_of_shape(&mut self, size: i64) -> bool {
        if !self.feasible(size, self.weight, 0) {
            return false;
        }
        self.parts.clear();
        self.fill(size, self.weight, 0);
        true
    }

    fn advance(&mut self) -> bool {
        if self.advance_same_shape() {
            return true;
        }
        let mut size = self.parts.len() as i64 + 1;
        loop {
            // Smallest subset of `size` ranks sums to size (size + 1) / 2.
            if size <= self.n && size * (size + 1) / 2 <= self.weight {
                if self.first_of_shape(size) {
                    return true;
                }
                size += 1;
                continue;
            }
            self.weight += 1;
            if self.weight > self.max_weight() {
                return false;
            }
            size = 1;
        }
    }

    fn current(&self) -> NoisePattern {
        let mask = self.parts.iter().fold(0u128, |m, &r| m | 1u128 << (128 - r));
        NoisePattern { mask, weight: self.weight as u32 }
    }
}

impl Iterator for LogisticPatterns {
    type Item = NoisePattern;

    fn next(&mut self) -> Option<NoisePattern> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        if self.advance() {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeVerdict {
    Decoded(Message),
    Abandoned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub verdict: DecodeVerdict,
    /// Oracle calls issued, including the accepted one.
    pub queries: u64,
    /// Weight of the accepted pattern under the decoder's own ordering.
    pub final_weight: Option<u32>,
    /// The accepted codeword.
    pub codeword: Option<BitVec>,
}

impl DecodeOutcome {
    pub fn message(&self) -> Option<&Message> {
        match &self.verdict {
            DecodeVerdict::Decoded(m) => Some(m),
            DecodeVerdict::Abandoned => None,
        }
    }

    pub fn is_abandoned(&self) -> bool {
        self.verdict == DecodeVerdict::Abandoned
    }
}

fn guess<O, I>(y: &BitVec, oracle: &O, budget: PatternBudget, patterns: I) -> DecodeOutcome
where
    O: MembershipOracle + ?Sized,
    I: Iterator<Item = (u128, u32)>,
{
    let mut queries = 0u64;
    for (mask, weight) in patterns {
        if queries >= budget.max_queries() {
            break;
        }
        queries += 1;
        let candidate = y.xor_left_aligned(mask);
        if let Verdict::Decoded(m) = oracle.check(&candidate) {
            return DecodeOutcome {
                verdict: DecodeVerdict::Decoded(m),
                queries,
                final_weight: Some(weight),
                codeword: Some(candidate),
            };
        }
    }
    DecodeOutcome { verdict: DecodeVerdict::Abandoned, queries, final_weight: None, codeword: None }
}

/// Hard-decision GRAND.
pub fn grand_decode<O>(y_hard: &BitVec, oracle: &O, budget: PatternBudget) -> DecodeOutcome
where
    O: MembershipOracle + ?Sized,
{
    let patterns = HammingPatterns::new(y_hard.len()).map(|p| (p.mask, p.weight));
    guess(y_hard, oracle, budget, patterns)
}

/// Basic ORBGRAND over the reliability order of `w`.
pub fn orbgrand_decode<O>(w: &SoftWord, oracle: &O, budget: PatternBudget) -> DecodeOutcome
where
    O: MembershipOracle + ?Sized,
{
    let hard = hard_decision(w);
    let perm = reliability_permutation(w);
    // rank_mask[r] flips the position holding reliability rank r + 1.
    let rank_mask: Vec<u128> = perm.iter().map(|&pos| 1u128 << (127 - pos)).collect();
    let patterns = LogisticPatterns::new(w.len()).map(|p| {
        let mut ranks = p.mask;
        let mut mask = 0u128;
        while ranks != 0 {
            let i = ranks.leading_zeros() as usize;
            mask |= rank_mask[i];
            ranks &= !(1u128 << (127 - i));
        }
        (mask, p.weight)
    });
    guess(&hard, oracle, budget, patterns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{rlc_generate, BlockCode, CodeParams, RlcCode};
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn bits(s: &str) -> BitVec {
        BitVec::parse_bits(s).unwrap()
    }

    /// Accepts exactly one word.
    struct Singleton(BitVec);

    impl MembershipOracle for Singleton {
        fn params(&self) -> CodeParams {
            CodeParams::new(self.0.len(), 1).unwrap()
        }
        fn check(&self, word: &BitVec) -> Verdict {
            if *word == self.0 {
                Verdict::Decoded(Message::new(word.split_at(1).unwrap().0))
            } else {
                Verdict::NotCodeword
            }
        }
    }

    // Brute force: every subset of {0..n} as an LSB-indexed integer, sorted by (popcount, value).
    fn hamming_oracle_order(n: usize) -> Vec<Vec<usize>> {
        let mut all: Vec<u32> = (0..1u32 << n).collect();
        all.sort_by_key(|&x| (x.count_ones(), x));
        all.into_iter().map(|x| (0..n).filter(|j| x >> j & 1 == 1).collect()).collect()
    }

    // Brute force: every subset of {1..n} sorted by (sum, size, ascending list).
    fn logistic_oracle_order(n: usize) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = (0..1u32 << n)
            .map(|x| (0..n).filter(|j| x >> j & 1 == 1).map(|j| j + 1).collect())
            .collect();
        all.sort_by(|a, b| {
            let key = |v: &Vec<usize>| (v.iter().sum::<usize>(), v.len());
            key(a).cmp(&key(b)).then_with(|| a.cmp(b))
        });
        all
    }

    fn ranks(p: &NoisePattern) -> Vec<usize> {
        p.indices().into_iter().map(|i| i + 1).collect()
    }

    #[test]
    fn hamming_n3_order() {
        let got: Vec<Vec<usize>> = HammingPatterns::new(3).map(|p| p.indices()).collect();
        let want = vec![
            vec![],
            vec![0],
            vec![1],
            vec![2],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
        ];
        assert_eq!(got, want);
        assert_eq!(got, hamming_oracle_order(3));
    }

    #[test]
    fn hamming_matches_brute_force() {
        for n in 1..=12 {
            let got: Vec<Vec<usize>> = HammingPatterns::new(n).map(|p| p.indices()).collect();
            assert_eq!(got, hamming_oracle_order(n), "n={n}");
        }
        let distinct: HashSet<u128> = HammingPatterns::new(12).map(|p| p.mask).collect();
        assert_eq!(distinct.len(), 4096);
    }

    #[test]
    fn hamming_first_pattern_is_zero_and_full_width_works() {
        for n in [1, 64, 127, 128] {
            let mut it = HammingPatterns::new(n);
            assert_eq!(it.next().unwrap(), NoisePattern { mask: 0, weight: 0 });
            let second = it.next().unwrap();
            assert_eq!(second.indices(), vec![0]);
        }
        // weight-1 patterns at n = 128 end on position 127, then weight 2 starts.
        let w1: Vec<_> = HammingPatterns::new(128).skip(1).take(129).collect();
        assert_eq!(w1[127].indices(), vec![127]);
        assert_eq!(w1[128].indices(), vec![0, 1]);
        let count_w2 = HammingPatterns::new(128).skip(129).take_while(|p| p.weight == 2).count();
        assert_eq!(count_w2, 128 * 127 / 2);
    }

    #[test]
    fn hamming_tail_at_full_width() {
        // Last weight-127 pattern then the all-ones pattern.
        let mut it = HammingPatterns::new(128);
        it.weight = 127;
        it.current = Some(u128::MAX ^ 2);
        assert_eq!(it.next().unwrap().indices().len(), 127);
        let last = it.next().unwrap();
        // Position 0 unflipped.
        assert_eq!(last.mask, !(1u128 << 127));
        let all = it.next().unwrap();
        assert_eq!((all.mask, all.weight), (u128::MAX, 128));
        assert!(it.next().is_none());
    }

    #[test]
    fn logistic_n4_prefix() {
        let got: Vec<Vec<usize>> = LogisticPatterns::new(4).take(7).map(|p| ranks(&p)).collect();
        let want: Vec<Vec<usize>> =
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![4], vec![1, 3]];
        assert_eq!(got, want);
        assert_eq!(got, logistic_oracle_order(4)[..7].to_vec());
    }

    #[test]
    fn logistic_matches_brute_force() {
        for n in 1..=12 {
            let got: Vec<Vec<usize>> = LogisticPatterns::new(n).map(|p| ranks(&p)).collect();
            assert_eq!(got, logistic_oracle_order(n), "n={n}");
        }
        assert_eq!(LogisticPatterns::new(10).map(|p| p.mask).collect::<HashSet<_>>().len(), 1024);
    }

    // Distinct-part partitions of w with parts <= n, enumerated recursively.
    fn distinct_partitions(w: usize, max_part: usize) -> Vec<Vec<usize>> {
        if w == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for largest in (1..=max_part.min(w)).rev() {
            for mut rest in distinct_partitions(w - largest, largest - 1) {
                rest.push(largest);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn logistic_weights_are_distinct_partitions() {
        for n in [4usize, 9, 16] {
            let mut by_weight: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); 21];
            for p in LogisticPatterns::new(n).take_while(|p| p.weight <= 20) {
                let r = ranks(&p);
                assert_eq!(r.iter().sum::<usize>(), p.weight as usize);
                by_weight[p.weight as usize].insert(r);
            }
            for (w, got) in by_weight.iter().enumerate() {
                let want: HashSet<Vec<usize>> = distinct_partitions(w, n).into_iter().collect();
                assert_eq!(*got, want, "n={n} w={w}");
            }
        }
    }

    #[test]
    fn logistic_full_width_start() {
        let first: Vec<Vec<usize>> = LogisticPatterns::new(128).take(8).map(|p| ranks(&p)).collect();
        assert_eq!(
            first,
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![4], vec![1, 3], vec![5]]
        );
        let it = LogisticPatterns::new(128);
        assert_eq!(it.max_weight(), 8256);
    }

    #[test]
    fn budget_validation() {
        assert_eq!(PatternBudget::new(0), Err(GrandError::ZeroBudget));
        assert_eq!(PatternBudget::default().max_queries(), 1_000_000);
    }

    fn repetition3() -> RlcCode {
        RlcCode::from_parity_rows(CodeParams::new(3, 1).unwrap(), &[bits("11")]).unwrap()
    }

    #[test]
    fn repetition_code_trace() {
        let code = repetition3();
        // Positions 1 and 2 received as 1; flipping position 0 is the second guess.
        let out = grand_decode(&bits("011"), &code, PatternBudget::unbounded());
        assert_eq!(out.verdict, DecodeVerdict::Decoded(Message::new(bits("1"))));
        assert_eq!(out.queries, 2);
        assert_eq!(out.final_weight, Some(1));
        assert_eq!(out.codeword, Some(bits("111")));
    }

    #[test]
    fn repetition_code_all_inputs() {
        let code = repetition3();
        for x in 0..8u128 {
            let y = BitVec::from_u128(x, 3).unwrap();
            let out = grand_decode(&y, &code, PatternBudget::unbounded());
            let majority = y.hamming_weight() >= 2;
            assert_eq!(out.message().unwrap().bits().get(0), majority, "y={y}");
            // Brute force: index of the first pattern in (weight, value) order hitting a codeword.
            let expected = hamming_oracle_order(3)
                .iter()
                .position(|flips| {
                    let z = flips.iter().fold(y, |acc, &j| acc.with_bit(j, !acc.get(j)).unwrap());
                    z.hamming_weight() % 3 == 0
                })
                .unwrap() as u64
                + 1;
            assert_eq!(out.queries, expected, "y={y}");
        }
    }

    #[test]
    fn noiseless_single_query() {
        let code = rlc_generate(CodeParams::headline(), 1).unwrap();
        let m = Message::new(BitVec::from_left_aligned(0xdead_beef << 90, 116).unwrap());
        let c = code.encode(&m).unwrap();
        let out = grand_decode(&c, &code, PatternBudget::unbounded());
        assert_eq!((out.verdict, out.queries), (DecodeVerdict::Decoded(m), 1));
    }

    #[test]
    fn budget_exhaustion_abandons() {
        let code = rlc_generate(CodeParams::headline(), 1).unwrap();
        let c = code.encode(&Message::new(BitVec::zeros(116).unwrap())).unwrap();
        let y = c.with_bit(5, true).unwrap();
        let out = grand_decode(&y, &code, PatternBudget::new(1).unwrap());
        assert!(out.is_abandoned());
        assert_eq!(out.queries, 1);
        assert_eq!(out.codeword, None);
    }

    #[test]
    fn orbgrand_noiseless_and_least_reliable_flip() {
        let code = rlc_generate(CodeParams::new(16, 8).unwrap(), 3).unwrap();
        let m = Message::new(bits("10110010"));
        let c = code.encode(&m).unwrap();
        let mut samples: Vec<f64> = c.iter().map(|b| if b { -2.0 } else { 2.0 }).collect();
        let out = orbgrand_decode(&SoftWord::from_samples(samples.clone(), 0.5), &code, PatternBudget::unbounded());
        assert_eq!((out.verdict, out.queries), (DecodeVerdict::Decoded(m), 1));

        // Position 6 received on the wrong side of zero and closest to it.
        samples[6] = if c.get(6) { 0.05 } else { -0.05 };
        let w = SoftWord::from_samples(samples, 0.5);
        assert_eq!(reliability_permutation(&w)[0], 6);
        let out = orbgrand_decode(&w, &code, PatternBudget::unbounded());
        assert_eq!((out.verdict, out.queries), (DecodeVerdict::Decoded(m), 2));
        assert_eq!(out.final_weight, Some(1));
    }

    fn min_distance(code: &RlcCode, y: &BitVec) -> u32 {
        (0..16u128)
            .map(|m| code.encode(&Message::new(BitVec::from_u128(m, 4).unwrap())).unwrap())
            .map(|c| c.hamming_distance(y).unwrap())
            .min()
            .unwrap()
    }

    #[test]
    fn grand_is_ml_on_8_4() {
        let code = rlc_generate(CodeParams::new(8, 4).unwrap(), 2024).unwrap();
        for x in 0..256u128 {
            let y = BitVec::from_u128(x, 8).unwrap();
            let out = grand_decode(&y, &code, PatternBudget::unbounded());
            let c = out.codeword.unwrap();
            assert_eq!(code.encode(out.message().unwrap()).unwrap(), c);
            assert_eq!(c.hamming_distance(&y).unwrap(), min_distance(&code, &y), "y={y}");
        }
    }

    #[test]
    fn orbgrand_equal_reliability_follows_logistic_order() {
        let code = rlc_generate(CodeParams::new(8, 4).unwrap(), 2024).unwrap();
        let order = logistic_oracle_order(8);
        for x in 0..256u128 {
            let y = BitVec::from_u128(x, 8).unwrap();
            let samples: Vec<f64> = y.iter().map(|b| if b { -1.0 } else { 1.0 }).collect();
            let out = orbgrand_decode(&SoftWord::from_samples(samples, 1.0), &code, PatternBudget::unbounded());
            // Identity reliability order: rank r is position r - 1.
            let first = order
                .iter()
                .position(|rs| {
                    let z = rs.iter().fold(y, |acc, &r| acc.with_bit(r - 1, !acc.get(r - 1)).unwrap());
                    code.syndrome(&z).hamming_weight() == 0
                })
                .unwrap();
            assert_eq!(out.queries, first as u64 + 1, "y={y}");
            let grand = grand_decode(&y, &code, PatternBudget::unbounded());
            assert_eq!(out.is_abandoned(), grand.is_abandoned(), "y={y}");
            // Both return codewords; ORBGRAND's is never closer than the ML one.
            assert!(
                out.codeword.unwrap().hamming_distance(&y).unwrap()
                    >= grand.codeword.unwrap().hamming_distance(&y).unwrap()
            );
        }
    }

    proptest! {
        #[test]
        fn query_count_tracks_noise_weight(n in 1usize..=16, x: u32) {
            let y = BitVec::zeros(n).unwrap();
            let target = BitVec::from_u128((x as u128) & ((1u128 << n) - 1), n).unwrap();
            let w = target.hamming_weight() as u64;
            let out = grand_decode(&y, &Singleton(target), PatternBudget::unbounded());
            let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
            let below: u64 = (0..w).map(|j| binom(n as u64, j)).sum();
            prop_assert!(out.queries > below);
            prop_assert!(out.queries <= below + binom(n as u64, w));
            prop_assert_eq!(out.codeword, Some(target));
        }

        #[test]
        fn decoders_always_terminate_on_small_codes(seed in 0u64..500, x in 0u128..1024) {
            let code = rlc_generate(CodeParams::new(10, 5).unwrap(), seed).unwrap();
            let y = BitVec::from_u128(x, 10).unwrap();
            prop_assert!(!grand_decode(&y, &code, PatternBudget::unbounded()).is_abandoned());
            let samples: Vec<f64> = y.iter().enumerate()
                .map(|(i, b)| (if b { -1.0 } else { 1.0 }) * (1.0 + i as f64 * 0.1)).collect();
            let soft = SoftWord::from_samples(samples, 1.0);
            prop_assert!(!orbgrand_decode(&soft, &code, PatternBudget::unbounded()).is_abandoned());
        }
    }
}
