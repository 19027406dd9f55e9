use std::sync::atomic::{AtomicU64, Ordering};

use aes::cipher::generic_array::GenericArray;
use aes::cipher::{BlockDecrypt, BlockEncrypt, KeyInit};
use aes::Aes128;
use aesec::aes::{AesKey, KeySchedule};
use aesec::campaign::{
    run_block_traced, run_campaign, simulate_point, CampaignConfig, CodeKind, DecoderKind, TrialStreams,
};
use aesec::channel::{hard_decision, ChannelPoint, SoftWord};
use aesec::codes::{
    aes_encode, aes_oracle, rlc_encode, rlc_generate, rlc_oracle, AesPadCode, BlockCode, CodeParams,
    MembershipOracle, Verdict,
};
use aesec::grand::{grand_decode, orbgrand_decode, PatternBudget};
use aesec::{BitVec, Message};
use proptest::prelude::*;

struct Counting<'a, O: ?Sized> {
    inner: &'a O,
    calls: AtomicU64,
}

impl<O: MembershipOracle + ?Sized> MembershipOracle for Counting<'_, O> {
    fn params(&self) -> CodeParams {
        self.inner.params()
    }
    fn check(&self, c: &BitVec) -> Verdict {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.check(c)
    }
}

#[test]
fn reported_queries_equal_oracle_calls() {
    let params = CodeParams::headline();
    let aes = AesPadCode::new(params, &AesKey::EXAMPLE).unwrap();
    let point = ChannelPoint::new(5.0, params.rate()).unwrap();
    for t in 0..300 {
        let mut streams = TrialStreams::derive(3, 0, t);
        let trace = run_block_traced(t, &point, &aes, DecoderKind::Grand, PatternBudget::default(), &mut streams);
        let hard = hard_decision(&trace.received);
        let counting = Counting { inner: &aes, calls: AtomicU64::new(0) };
        let hard_out = grand_decode(&hard, &counting, PatternBudget::new(5_000).unwrap());
        assert_eq!(hard_out.queries, counting.calls.load(Ordering::Relaxed));

        let counting = Counting { inner: &aes, calls: AtomicU64::new(0) };
        let soft_out = orbgrand_decode(&trace.received, &counting, PatternBudget::new(5_000).unwrap());
        assert_eq!(soft_out.queries, counting.calls.load(Ordering::Relaxed));
    }
}

#[test]
fn cipher_matches_reference_both_directions() {
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        seed
    };
    for _ in 0..500 {
        let key: [u8; 16] = ((next() as u128) << 64 | next() as u128).to_be_bytes();
        let block: [u8; 16] = ((next() as u128) << 64 | next() as u128).to_be_bytes();
        let ours = KeySchedule::new(&AesKey::new(key));
        let reference = Aes128::new(GenericArray::from_slice(&key));
        let mut enc = GenericArray::clone_from_slice(&block);
        reference.encrypt_block(&mut enc);
        assert_eq!(ours.encrypt_bytes(block), enc.as_slice());
        let mut dec = GenericArray::clone_from_slice(&block);
        reference.decrypt_block(&mut dec);
        assert_eq!(ours.decrypt_bytes(block), dec.as_slice());
    }
}

#[test]
fn free_functions_agree_with_code_objects() {
    let params = CodeParams::headline();
    let ks = KeySchedule::new(&AesKey::EXAMPLE);
    let aes = AesPadCode::new(params, &AesKey::EXAMPLE).unwrap();
    let rlc = rlc_generate(params, 42).unwrap();
    for v in [0u128, 1, 0xdead_beef, (1 << 116) - 1] {
        let m = Message::new(BitVec::from_u128(v, 116).unwrap());
        let c = aes_encode(&m, params, &ks).unwrap();
        assert_eq!(c, aes.encode(&m).unwrap());
        assert_eq!(aes_oracle(&c, params, &ks).unwrap(), Verdict::Decoded(m));
        let c = rlc_encode(&m, &rlc).unwrap();
        assert_eq!(c, rlc.encode(&m).unwrap());
        assert_eq!(rlc_oracle(&c, &rlc).unwrap(), Verdict::Decoded(m));
    }
}

#[test]
fn noise_is_paired_across_codes() {
    let mut aes_cfg = CampaignConfig {
        ebn0_grid_db: vec![5.0],
        min_block_errors: 5,
        max_blocks: 64,
        ..CampaignConfig::default()
    };
    aes_cfg.code_kind = CodeKind::Aes;
    let mut rlc_cfg = aes_cfg.clone();
    rlc_cfg.code_kind = CodeKind::Rlc;
    let point = ChannelPoint::new(5.0, aes_cfg.params.rate()).unwrap();
    let aes = aes_cfg.build_code().unwrap();
    let rlc = rlc_cfg.build_code().unwrap();
    for t in 0..32 {
        let a = run_block_traced(t, &point, &aes, DecoderKind::Grand, aes_cfg.budget(), &mut TrialStreams::derive(1, 0, t));
        let r = run_block_traced(t, &point, &rlc, DecoderKind::Grand, rlc_cfg.budget(), &mut TrialStreams::derive(1, 0, t));
        let noise = |samples: &[f64], cw: &BitVec| -> Vec<f64> {
            samples
                .iter()
                .enumerate()
                .map(|(i, y)| y - if cw.get(i) { -1.0 } else { 1.0 })
                .collect()
        };
        let (na, nr) = (noise(a.received.samples(), &a.codeword), noise(r.received.samples(), &r.codeword));
        assert!(na.iter().zip(&nr).all(|(x, y)| (x - y).abs() < 1e-12));
    }
}

#[test]
fn point_aggregates_resum_from_records() {
    let config = CampaignConfig {
        ebn0_grid_db: vec![4.5],
        min_block_errors: 20,
        max_blocks: 5_000,
        ..CampaignConfig::default()
    };
    let code = config.build_code().unwrap();
    let run = simulate_point(&config, &code, 0, 2).unwrap();
    let r = &run.result;
    assert_eq!(r.blocks, run.records.len() as u64);
    assert_eq!(r.block_errors, run.records.iter().filter(|b| b.block_error).count() as u64);
    assert_eq!(r.bit_errors, run.records.iter().map(|b| b.bit_errors as u64).sum::<u64>());
    assert_eq!(r.abandoned, run.records.iter().filter(|b| b.abandoned).count() as u64);
    assert!(run.records.iter().enumerate().all(|(i, b)| b.trial == i as u64));
    assert!(run.records.last().unwrap().block_error);
    assert!(r.bler_ci95.contains(r.bler) && r.ber_ci95.contains(r.ber));
}

#[test]
fn soft_decoder_beats_hard_on_shared_noise() {
    let base = CampaignConfig {
        ebn0_grid_db: vec![5.5],
        min_block_errors: 30,
        max_blocks: 200_000,
        ..CampaignConfig::default()
    };
    let hard = run_campaign(&base, 1).unwrap();
    let soft = run_campaign(&CampaignConfig { decoder_kind: DecoderKind::Orbgrand, ..base }, 1).unwrap();
    assert!(soft.points[0].bler < hard.points[0].bler);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn llr_signs_agree_with_hard_decision(samples in prop::collection::vec(-3.0f64..3.0, 128), sigma in 0.1f64..2.0) {
        let w = SoftWord::from_samples(samples, sigma);
        let hard = hard_decision(&w);
        for (i, llr) in w.llrs().iter().enumerate() {
            prop_assert_eq!(hard.get(i), *llr < 0.0);
        }
    }

    #[test]
    fn decoded_message_reencodes_to_decoded_codeword(seed in any::<u64>(), flips in prop::collection::vec(0usize..32, 0..3)) {
        let params = CodeParams::new(32, 24).unwrap();
        let code = rlc_generate(params, seed).unwrap();
        let m = Message::new(BitVec::from_u128(seed as u128 & 0xff_ffff, 24).unwrap());
        let mut y = code.encode(&m).unwrap();
        for f in flips {
            y = y.with_bit(f, !y.get(f)).unwrap();
        }
        let out = grand_decode(&y, &code, PatternBudget::unbounded());
        let decoded = out.message().cloned().unwrap();
        prop_assert_eq!(code.encode(&decoded).unwrap(), out.codeword.unwrap());
    }
}
