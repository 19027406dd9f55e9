//! Monte Carlo BER/BLER estimation over an Eb/N0 grid.
//!
//! Every trial draws its message and its channel noise from two ChaCha8
//! streams keyed by `(master_seed, purpose, point index)` with the trial index
//! as stream id. Noise therefore never depends on the code or decoder, and
//! AES and RLC runs with one seed see the same noise samples trial for trial.
//!
//! Trials run in chunks of fixed, worker-independent size. After each chunk
//! the records are scanned in trial order and the point stops at the first
//! trial that brings the block-error count to `min_block_errors` (or at
//! `max_blocks`). Trials past that cutoff are discarded, so the result does
//! not depend on how many workers ran.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aes::{AesError, AesKey};
use crate::bitblock::{BitVec, Message};
use crate::channel::{add_awgn, hard_decision, modulate, ChannelError, ChannelPoint, SoftWord};
use crate::codes::{rlc_generate, AesPadCode, BlockCode, Code, CodeError, CodeParams};
use crate::grand::{grand_decode, orbgrand_decode, DecodeOutcome, PatternBudget};
use crate::stats::{percentile, rule_of_three, wilson95, Interval};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const FIRST_CHUNK: u64 = 256;
const MAX_CHUNK: u64 = 16_384;

const PURPOSE_MESSAGE: u64 = 1;
const PURPOSE_NOISE: u64 = 2;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Aes(#[from] AesError),
    #[error("failed to start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Aes,
    Rlc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Grand,
    Orbgrand,
}

impl CodeKind {
    pub fn label(&self) -> &'static str {
        match self {
            CodeKind::Aes => "AES",
            CodeKind::Rlc => "RLC",
        }
    }
}

impl DecoderKind {
    pub fn label(&self) -> &'static str {
        match self {
            DecoderKind::Grand => "GRAND",
            DecoderKind::Orbgrand => "ORBGRAND",
        }
    }
}

mod key_hex {
    use super::AesKey;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(key: &AesKey, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&key.to_hex())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<AesKey, D::Error> {
        let s = String::deserialize(d)?;
        AesKey::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub code_kind: CodeKind,
    pub decoder_kind: DecoderKind,
    pub params: CodeParams,
    pub ebn0_grid_db: Vec<f64>,
    pub max_queries: u64,
    pub min_block_errors: u64,
    pub max_blocks: u64,
    pub master_seed: u64,
    #[serde(with = "key_hex")]
    pub aes_key: AesKey,
    pub rlc_seed: u64,
}

impl Default for CampaignConfig {
    /// n = 128, k = 116, AES code, hard-decision GRAND, 6..8 dB in 0.5 dB steps.
    fn default() -> Self {
        CampaignConfig {
            code_kind: CodeKind::Aes,
            decoder_kind: DecoderKind::Grand,
            params: CodeParams::headline(),
            ebn0_grid_db: vec![6.0, 6.5, 7.0, 7.5, 8.0],
            max_queries: crate::grand::DEFAULT_MAX_QUERIES,
            min_block_errors: 100,
            max_blocks: 1_000_000,
            master_seed: 1,
            aes_key: AesKey::EXAMPLE,
            rlc_seed: 42,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), CampaignError> {
        let bad = |m: String| Err(CampaignError::Config(m));
        let CodeParams { n, k } = self.params;
        CodeParams::new(n, k)?;
        match self.code_kind {
            CodeKind::Aes if n != crate::aes::BLOCK_BITS => {
                return Err(CodeError::AesBlockLength(n).into())
            }
            CodeKind::Rlc if k >= n => return bad(format!("RLC needs k < n (k={k}, n={n})")),
            _ => {}
        }
        if self.ebn0_grid_db.is_empty() {
            return bad("Eb/N0 grid is empty".into());
        }
        if let Some(x) = self.ebn0_grid_db.iter().find(|x| !x.is_finite()) {
            return bad(format!("Eb/N0 grid contains non-finite value {x}"));
        }
        if self.ebn0_grid_db.windows(2).any(|w| w[1] <= w[0]) {
            return bad("Eb/N0 grid must be strictly increasing".into());
        }
        if self.max_queries == 0 {
            return bad("max_queries must be at least 1".into());
        }
        if self.min_block_errors == 0 {
            return bad("min_block_errors must be at least 1".into());
        }
        if self.max_blocks < self.min_block_errors {
            return bad(format!(
                "max_blocks ({}) is below min_block_errors ({})",
                self.max_blocks, self.min_block_errors
            ));
        }
        Ok(())
    }

    pub fn build_code(&self) -> Result<Code, CampaignError> {
        Ok(match self.code_kind {
            CodeKind::Aes => Code::Aes(AesPadCode::new(self.params, &self.aes_key)?),
            CodeKind::Rlc => Code::Rlc(rlc_generate(self.params, self.rlc_seed)?),
        })
    }

    pub fn budget(&self) -> PatternBudget {
        PatternBudget::new(self.max_queries).unwrap_or_default()
    }

    pub fn series_label(&self) -> String {
        format!("{}/{}", self.code_kind.label(), self.decoder_kind.label())
    }
}

/// Independent random streams for one trial.
#[derive(Debug, Clone)]
pub struct TrialStreams {
    pub message: ChaCha8Rng,
    pub noise: ChaCha8Rng,
}

fn stream(master_seed: u64, purpose: u64, point_index: u64, trial_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&purpose.to_le_bytes());
    key[16..24].copy_from_slice(&point_index.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial_index);
    rng
}

impl TrialStreams {
    pub fn derive(master_seed: u64, point_index: u64, trial_index: u64) -> Self {
        TrialStreams {
            message: stream(master_seed, PURPOSE_MESSAGE, point_index, trial_index),
            noise: stream(master_seed, PURPOSE_NOISE, point_index, trial_index),
        }
    }
}

/// Outcome of one simulated block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub trial: u64,
    pub block_error: bool,
    pub bit_errors: u32,
    pub queries: u64,
    pub abandoned: bool,
}

/// Everything that happened in one block, for inspection.
#[derive(Debug, Clone)]
pub struct BlockTrace {
    pub record: BlockRecord,
    pub message: Message,
    pub codeword: BitVec,
    pub received: SoftWord,
    pub outcome: DecodeOutcome,
}

/// Bit errors charged to an abandoned block: `ceil(k / 2)`.
pub fn abandoned_bit_errors(k: usize) -> u32 {
    k.div_ceil(2) as u32
}

pub fn decode<C: BlockCode + ?Sized>(
    decoder: DecoderKind,
    received: &SoftWord,
    code: &C,
    budget: PatternBudget,
) -> DecodeOutcome {
    match decoder {
        DecoderKind::Grand => grand_decode(&hard_decision(received), code, budget),
        DecoderKind::Orbgrand => orbgrand_decode(received, code, budget),
    }
}

/// One pass of message → encode → BPSK → AWGN → decode → compare.
pub fn run_block_traced<C: BlockCode + ?Sized>(
    trial_index: u64,
    point: &ChannelPoint,
    code: &C,
    decoder: DecoderKind,
    budget: PatternBudget,
    streams: &mut TrialStreams,
) -> BlockTrace {
    let k = code.params().k;
    let message = Message::new(
        BitVec::from_left_aligned(streams.message.gen::<u128>(), k).expect("k <= 128"),
    );
    let codeword = code.encode(&message).expect("message length matches code");
    let received = add_awgn(&modulate(&codeword), point.sigma, &mut streams.noise);
    let outcome = decode(decoder, &received, code, budget);
    let (block_error, bit_errors) = match outcome.message() {
        Some(m) => {
            let d = m.bits().hamming_distance(message.bits()).expect("same k");
            (d > 0, d)
        }
        None => (true, abandoned_bit_errors(k)),
    };
    let record = BlockRecord {
        trial: trial_index,
        block_error,
        bit_errors,
        queries: outcome.queries,
        abandoned: outcome.is_abandoned(),
    };
    BlockTrace { record, message, codeword, received, outcome }
}

pub fn run_block<C: BlockCode + ?Sized>(
    trial_index: u64,
    point: &ChannelPoint,
    code: &C,
    decoder: DecoderKind,
    budget: PatternBudget,
    streams: &mut TrialStreams,
) -> BlockRecord {
    run_block_traced(trial_index, point, code, decoder, budget, streams).record
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub sigma: f64,
    pub blocks: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    pub abandoned: u64,
    pub bler: f64,
    pub ber: f64,
    pub bler_ci95: Interval,
    pub ber_ci95: Interval,
    pub mean_queries: f64,
    pub p99_queries: f64,
    /// Set when no block error was seen: the rule-of-three 95% upper bound on BLER.
    pub bler_upper_rule_of_three: Option<f64>,
    /// The point stopped at `max_blocks` before reaching `min_block_errors`.
    pub hit_max_blocks: bool,
}

impl PointResult {
    /// Aggregates per-block records (all of which belong to this point).
    pub fn from_records(
        ebn0_db: f64,
        sigma: f64,
        k: usize,
        records: &[BlockRecord],
        min_block_errors: u64,
    ) -> Self {
        let blocks = records.len() as u64;
        let block_errors = records.iter().filter(|r| r.block_error).count() as u64;
        let bit_errors: u64 = records.iter().map(|r| r.bit_errors as u64).sum();
        let abandoned = records.iter().filter(|r| r.abandoned).count() as u64;
        let queries: Vec<u64> = records.iter().map(|r| r.queries).collect();
        let total_queries: u64 = queries.iter().sum();
        let bits = blocks * k as u64;
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        PointResult {
            ebn0_db,
            sigma,
            blocks,
            block_errors,
            bit_errors,
            abandoned,
            bler: ratio(block_errors, blocks),
            ber: ratio(bit_errors, bits),
            bler_ci95: wilson95(block_errors, blocks),
            ber_ci95: wilson95(bit_errors, bits),
            mean_queries: ratio(total_queries, blocks),
            p99_queries: percentile(&queries, 99.0),
            bler_upper_rule_of_three: (block_errors == 0).then(|| rule_of_three(blocks)),
            hit_max_blocks: block_errors < min_block_errors,
        }
    }
}

/// A finished point together with the records it was computed from.
#[derive(Debug, Clone)]
pub struct PointRun {
    pub result: PointResult,
    pub records: Vec<BlockRecord>,
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, CampaignError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?)
}

/// Simulates one grid point and keeps the per-block log.
pub fn simulate_point(
    config: &CampaignConfig,
    code: &Code,
    point_index: usize,
    workers: usize,
) -> Result<PointRun, CampaignError> {
    config.validate()?;
    let ebn0_db = *config
        .ebn0_grid_db
        .get(point_index)
        .ok_or_else(|| CampaignError::Config(format!("no grid point {point_index}")))?;
    let point = ChannelPoint::new(ebn0_db, config.params.rate())?;
    let pool = pool(workers)?;
    Ok(pool.install(|| simulate_at(config, code, point_index as u64, &point)))
}

fn simulate_at(config: &CampaignConfig, code: &Code, point_index: u64, point: &ChannelPoint) -> PointRun {
    let budget = config.budget();
    let mut records: Vec<BlockRecord> = Vec::new();
    let mut errors = 0u64;
    let mut chunk = FIRST_CHUNK;
    let mut next_trial = 0u64;
    'outer: while next_trial < config.max_blocks {
        let end = (next_trial + chunk).min(config.max_blocks);
        let batch: Vec<BlockRecord> = (next_trial..end)
            .into_par_iter()
            .map(|t| {
                let mut streams = TrialStreams::derive(config.master_seed, point_index, t);
                run_block(t, point, code, config.decoder_kind, budget, &mut streams)
            })
            .collect();
        for r in batch {
            let err = r.block_error;
            records.push(r);
            if err {
                errors += 1;
                if errors >= config.min_block_errors {
                    break 'outer;
                }
            }
        }
        next_trial = end;
        chunk = (chunk * 2).min(MAX_CHUNK);
    }
    let result = PointResult::from_records(
        point.ebn0_db,
        point.sigma,
        config.params.k,
        &records,
        config.min_block_errors,
    );
    PointRun { result, records }
}

pub fn run_point(
    config: &CampaignConfig,
    point_index: usize,
    workers: usize,
) -> Result<PointResult, CampaignError> {
    let code = config.build_code()?;
    simulate_point(config, &code, point_index, workers).map(|r| r.result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub version: String,
    pub series: String,
    pub config: CampaignConfig,
    pub stopping_rule: String,
    pub points: Vec<PointResult>,
    /// Elapsed seconds. Not serialized, so result files depend only on the config.
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl CampaignResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Header plus one row per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "ebn0_db,blocks,block_errors,bit_errors,abandoned,ber,bler,ber_ci_lo,ber_ci_hi,bler_ci_lo,bler_ci_hi,mean_queries,p99_queries\n",
        );
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                p.ebn0_db,
                p.blocks,
                p.block_errors,
                p.bit_errors,
                p.abandoned,
                p.ber,
                p.bler,
                p.ber_ci95.lo,
                p.ber_ci95.hi,
                p.bler_ci95.lo,
                p.bler_ci95.hi,
                p.mean_queries,
                p.p99_queries
            ));
        }
        out
    }
}

/// Runs every grid point in order. `workers` only affects speed.
pub fn run_campaign(config: &CampaignConfig, workers: usize) -> Result<CampaignResult, CampaignError> {
    run_campaign_with_progress(config, workers, |_, _| {})
}

/// As [`run_campaign`], calling `progress(index, &result)` after each point.
pub fn run_campaign_with_progress(
    config: &CampaignConfig,
    workers: usize,
    mut progress: impl FnMut(usize, &PointResult),
) -> Result<CampaignResult, CampaignError> {
    config.validate()?;
    let code = config.build_code()?;
    let rate = config.params.rate();
    let points: Vec<ChannelPoint> = config
        .ebn0_grid_db
        .iter()
        .map(|&e| ChannelPoint::new(e, rate))
        .collect::<Result<_, _>>()?;
    let pool = pool(workers)?;
    let start = Instant::now();
    let mut results = Vec::with_capacity(points.len());
    for (i, point) in points.iter().enumerate() {
        let run = pool.install(|| simulate_at(config, &code, i as u64, point));
        progress(i, &run.result);
        results.push(run.result);
    }
    Ok(CampaignResult {
        version: VERSION.to_owned(),
        series: config.series_label(),
        config: config.clone(),
        stopping_rule: format!(
            "per point: stop at the trial that brings block errors to {} or after {} blocks; \
             negative-binomial stopping, BLER/BER intervals are Wilson 95%",
            config.min_block_errors, config.max_blocks
        ),
        points: results,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
