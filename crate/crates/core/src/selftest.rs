//! Fast component checks, runnable without a test harness.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aes::{AesKey, AesTables, KeySchedule, KNOWN_ANSWERS};
use crate::bitblock::{BitVec, Message};
use crate::channel::{add_awgn, hard_decision, ChannelPoint};
use crate::codes::{rlc_generate, BlockCode, CodeParams};
use crate::grand::{grand_decode, HammingPatterns, LogisticPatterns, PatternBudget};
use crate::stats::{q_function, wilson95};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Measurements that are reported but never fail the run.
    pub informational: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult { name, passed, informational: false, detail }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// FIPS-197 vectors plus random round trips, over the given tables.
pub fn check_aes_kats(tables: &'static AesTables) -> CheckResult {
    for kat in KNOWN_ANSWERS {
        let key = AesKey::from_hex(kat.key).expect("valid vector key");
        let ks = KeySchedule::with_tables(&key, tables);
        let pt = BitVec::from_hex(kat.plaintext, 128).expect("valid vector").left_aligned();
        let ct = ks.encrypt_u128(pt);
        let got = BitVec::from_left_aligned(ct, 128).unwrap().to_hex();
        if got != kat.ciphertext {
            return CheckResult::new(
                "aes-known-answers",
                false,
                format!("key {}: expected {}, got {got}", kat.key, kat.ciphertext),
            );
        }
        if ks.decrypt_u128(ct) != pt {
            return CheckResult::new("aes-known-answers", false, format!("key {}: decrypt mismatch", kat.key));
        }
    }
    let ks = KeySchedule::with_tables(&AesKey::EXAMPLE, tables);
    let mut rng = ChaCha8Rng::seed_from_u64(0xae5);
    let trips = 10_000;
    for _ in 0..trips {
        let x: u128 = rng.gen();
        if ks.decrypt_u128(ks.encrypt_u128(x)) != x {
            return CheckResult::new("aes-known-answers", false, format!("round trip failed for {x:032x}"));
        }
    }
    CheckResult::new(
        "aes-known-answers",
        true,
        format!("{} FIPS-197 vectors, {trips} round trips", KNOWN_ANSWERS.len()),
    )
}

fn check_generators(n: usize) -> CheckResult {
    let full = 1usize << n;
    let hamming: Vec<_> = HammingPatterns::new(n).collect();
    let logistic: Vec<_> = LogisticPatterns::new(n).collect();
    let distinct = |v: &[crate::grand::NoisePattern]| {
        v.iter().map(|p| p.mask).collect::<std::collections::HashSet<_>>().len()
    };
    let sorted = |v: &[crate::grand::NoisePattern]| v.windows(2).all(|w| w[0].weight <= w[1].weight);
    let ok = hamming.len() == full
        && logistic.len() == full
        && distinct(&hamming) == full
        && distinct(&logistic) == full
        && sorted(&hamming)
        && sorted(&logistic)
        && hamming.iter().all(|p| p.weight as usize == p.len())
        && logistic.iter().all(|p| p.weight as usize == p.indices().iter().map(|i| i + 1).sum::<usize>());
    CheckResult::new(
        "pattern-generators",
        ok,
        format!("n={n}: hamming {} / logistic {} of {full} patterns", hamming.len(), logistic.len()),
    )
}

fn check_ml_equivalence() -> CheckResult {
    let params = CodeParams::new(8, 4).unwrap();
    let code = rlc_generate(params, 8_4).unwrap();
    let codewords: Vec<BitVec> = (0..16u128)
        .map(|m| code.encode(&Message::new(BitVec::from_u128(m, 4).unwrap())).unwrap())
        .collect();
    for x in 0..256u128 {
        let y = BitVec::from_u128(x, 8).unwrap();
        let best = codewords.iter().map(|c| c.hamming_distance(&y).unwrap()).min().unwrap();
        let out = grand_decode(&y, &code, PatternBudget::unbounded());
        let got = out.codeword.map(|c| c.hamming_distance(&y).unwrap());
        if got != Some(best) {
            return CheckResult::new("ml-equivalence", false, format!("y={y}: got {got:?}, minimum {best}"));
        }
    }
    CheckResult::new("ml-equivalence", true, "[8,4] code, all 256 words at minimum distance".into())
}

/// Empirical hard-decision flip rate against `Q(sqrt(2 R Eb/N0))`.
pub fn channel_flip_check(ebn0_db: f64, rate: f64, bits: u64, seed: u64) -> (u64, u64, f64) {
    let point = ChannelPoint::new(ebn0_db, rate).expect("valid point");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = vec![1.0; 128];
    let blocks = bits.div_ceil(128);
    let mut flips = 0u64;
    for _ in 0..blocks {
        flips += hard_decision(&add_awgn(&x, point.sigma, &mut rng)).hamming_weight() as u64;
    }
    let expected = q_function((2.0 * rate * 10f64.powf(ebn0_db / 10.0)).sqrt());
    (flips, blocks * 128, expected)
}

fn check_channel() -> CheckResult {
    let rate = 116.0 / 128.0;
    let mut details = Vec::new();
    let mut ok = true;
    for (i, ebn0) in [4.0, 6.0, 8.0].into_iter().enumerate() {
        let (flips, total, expected) = channel_flip_check(ebn0, rate, 1_000_000, 0xc0ffee + i as u64);
        let ci = wilson95(flips, total);
        ok &= ci.contains(expected);
        details.push(format!("{ebn0} dB: {flips}/{total} vs {expected:.3e}"));
    }
    CheckResult::new("channel-calibration", ok, details.join("; "))
}

fn measure_decrypt_rate() -> CheckResult {
    let ks = KeySchedule::new(&AesKey::EXAMPLE);
    let calls = 1_000_000u64;
    let start = Instant::now();
    let mut acc = 0u128;
    for i in 0..calls {
        acc ^= ks.decrypt_u128(acc.wrapping_add(i as u128));
    }
    std::hint::black_box(acc);
    let rate = calls as f64 / start.elapsed().as_secs_f64();
    CheckResult {
        name: "aes-decrypt-throughput",
        passed: true,
        informational: true,
        detail: format!("{rate:.3e} decryptions/s on one thread"),
    }
}

pub fn run_selftest() -> SelftestReport {
    run_selftest_with_tables(AesTables::standard())
}

/// Runs every check, using `tables` for the AES vectors.
pub fn run_selftest_with_tables(tables: &'static AesTables) -> SelftestReport {
    SelftestReport {
        checks: vec![
            check_aes_kats(tables),
            check_generators(12),
            check_ml_equivalence(),
            check_channel(),
            measure_decrypt_rate(),
        ],
    }
}
