//! Block codes seen through a single membership test.
//!
//! A guessing decoder only needs to ask "is this word a codeword, and which
//! message does it carry?". [`MembershipOracle`] is that question. Two codes
//! answer it here:
//!
//! * [`AesPadCode`]: the message is followed by `n - k` zero bits and the
//!   128-bit result is AES-encrypted. A word is a codeword iff its decryption
//!   ends in `n - k` zeros.
//! * [`RlcCode`]: a systematic random linear code, membership by syndrome.
//!
//! Both accept a uniformly random word with probability `2^-(n-k)`, which is
//! the undetected-error floor of either scheme.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aes::{AesKey, KeySchedule, BLOCK_BITS};
use crate::bitblock::{self, BitError, BitVec, Message, Padding, MAX_BITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid code parameters n={n}, k={k}: {reason}")]
    Params { n: usize, k: usize, reason: &'static str },
    #[error("the AES code needs n = {BLOCK_BITS}, got n = {0}")]
    AesBlockLength(usize),
    #[error("message has {got} bits, code expects {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error(transparent)]
    Bits(#[from] BitError),
    #[error("malformed code file: {0}")]
    Format(String),
}

/// Block length `n` and message length `k`, with `0 < k <= n <= 128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
}

impl CodeParams {
    pub fn new(n: usize, k: usize) -> Result<Self, CodeError> {
        if n > MAX_BITS {
            return Err(CodeError::Params { n, k, reason: "n exceeds 128" });
        }
        if k == 0 {
            return Err(CodeError::Params { n, k, reason: "k must be positive" });
        }
        if k > n {
            return Err(CodeError::Params { n, k, reason: "k exceeds n" });
        }
        Ok(CodeParams { n, k })
    }

    /// The paper-scale setup: n = 128, k = 116.
    pub fn headline() -> Self {
        CodeParams { n: 128, k: 116 }
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    /// Probability that a uniformly random word passes either oracle.
    pub fn false_accept_rate(&self) -> f64 {
        (-(self.redundancy() as f64)).exp2()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotCodeword,
    Decoded(Message),
}

impl Verdict {
    pub fn is_decoded(&self) -> bool {
        matches!(self, Verdict::Decoded(_))
    }
}

/// Deterministic codebook membership test.
pub trait MembershipOracle: Send + Sync {
    fn params(&self) -> CodeParams;

    /// Accepts `word` (of length `n`) with the message it carries, or rejects it.
    fn check(&self, word: &BitVec) -> Verdict;
}

/// A code that can also produce codewords.
pub trait BlockCode: MembershipOracle {
    fn encode(&self, m: &Message) -> Result<BitVec, CodeError>;
}

fn check_message(params: CodeParams, m: &Message) -> Result<(), CodeError> {
    if m.len() != params.k {
        return Err(CodeError::MessageLength { expected: params.k, got: m.len() });
    }
    Ok(())
}

/// AES-128 over a zero-padded message.
#[derive(Debug, Clone)]
pub struct AesPadCode {
    params: CodeParams,
    schedule: KeySchedule,
    pad_mask: u128,
}

impl AesPadCode {
    pub fn new(params: CodeParams, key: &AesKey) -> Result<Self, CodeError> {
        Self::with_schedule(params, KeySchedule::new(key))
    }

    pub fn with_schedule(params: CodeParams, schedule: KeySchedule) -> Result<Self, CodeError> {
        if params.n != BLOCK_BITS {
            return Err(CodeError::AesBlockLength(params.n));
        }
        let r = params.redundancy();
        let pad_mask = if r == 0 { 0 } else { u128::MAX >> (MAX_BITS - r) };
        Ok(AesPadCode { params, schedule, pad_mask })
    }

    pub fn schedule(&self) -> &KeySchedule {
        &self.schedule
    }
}

impl MembershipOracle for AesPadCode {
    fn params(&self) -> CodeParams {
        self.params
    }

    #[inline]
    fn check(&self, word: &BitVec) -> Verdict {
        debug_assert_eq!(word.len(), BLOCK_BITS);
        let pt = self.schedule.decrypt_u128(word.left_aligned());
        if pt & self.pad_mask != 0 {
            return Verdict::NotCodeword;
        }
        // from_left_aligned truncates to k bits; k <= 128 always holds.
        Verdict::Decoded(Message::new(BitVec::from_left_aligned(pt, self.params.k).unwrap()))
    }
}

impl BlockCode for AesPadCode {
    fn encode(&self, m: &Message) -> Result<BitVec, CodeError> {
        check_message(self.params, m)?;
        let pt = bitblock::concat(m, &Padding::zeros(self.params.redundancy())?, BLOCK_BITS)?;
        Ok(BitVec::from_left_aligned(self.schedule.encrypt_u128(pt.left_aligned()), BLOCK_BITS)?)
    }
}

/// `Enc(ks, [m; 0])`.
pub fn aes_encode(m: &Message, params: CodeParams, ks: &KeySchedule) -> Result<BitVec, CodeError> {
    AesPadCode::with_schedule(params, ks.clone())?.encode(m)
}

/// Decrypt `c` and accept iff the last `n - k` plaintext bits are zero.
pub fn aes_oracle(c: &BitVec, params: CodeParams, ks: &KeySchedule) -> Result<Verdict, CodeError> {
    if c.len() != BLOCK_BITS {
        return Err(CodeError::AesBlockLength(c.len()));
    }
    Ok(AesPadCode::with_schedule(params, ks.clone())?.check(c))
}

/// Systematic binary linear code with generator `[I_k | P]` and parity-check
/// matrix `[P^T | I_{n-k}]`. Rows are stored as left-aligned `u128` words.
#[derive(Clone, PartialEq, Eq)]
pub struct RlcCode {
    params: CodeParams,
    generator: Vec<u128>,
    parity_check: Vec<u128>,
    seed: Option<u64>,
}

impl fmt::Debug for RlcCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RlcCode[{},{}] seed={:?}", self.params.n, self.params.k, self.seed)
    }
}

/// Draws `P` with i.i.d. fair bits from `seed` and builds the systematic code.
pub fn rlc_generate(params: CodeParams, seed: u64) -> Result<RlcCode, CodeError> {
    if params.k >= params.n {
        return Err(CodeError::Params { n: params.n, k: params.k, reason: "RLC needs k < n" });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = params.redundancy();
    let rows = (0..params.k)
        .map(|_| BitVec::from_left_aligned(rng.gen::<u128>(), r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut code = RlcCode::from_parity_rows(params, &rows)?;
    code.seed = Some(seed);
    Ok(code)
}

impl RlcCode {
    /// Builds the code from the `k` rows of `P`, each `n - k` bits long.
    pub fn from_parity_rows(params: CodeParams, p_rows: &[BitVec]) -> Result<Self, CodeError> {
        let CodeParams { n, k } = params;
        let r = params.redundancy();
        if p_rows.len() != k {
            return Err(CodeError::Format(format!("expected {k} parity rows, got {}", p_rows.len())));
        }
        let mut generator = Vec::with_capacity(k);
        for (i, row) in p_rows.iter().enumerate() {
            if row.len() != r {
                return Err(CodeError::Bits(BitError::LengthMismatch { left: row.len(), right: r }));
            }
            let unit = 1u128 << (127 - i);
            generator.push(unit | (row.left_aligned() >> k));
        }
        let mut parity_check = vec![0u128; r];
        for (j, h) in parity_check.iter_mut().enumerate() {
            for (i, row) in p_rows.iter().enumerate() {
                if row.get(j) {
                    *h |= 1u128 << (127 - i);
                }
            }
            *h |= 1u128 << (127 - (k + j));
        }
        debug_assert!(n <= MAX_BITS);
        Ok(RlcCode { params, generator, parity_check, seed: None })
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Rows of `G`, each `n` bits.
    pub fn generator_rows(&self) -> Vec<BitVec> {
        self.generator
            .iter()
            .map(|&w| BitVec::from_left_aligned(w, self.params.n).unwrap())
            .collect()
    }

    /// Rows of `H`, each `n` bits.
    pub fn parity_check_rows(&self) -> Vec<BitVec> {
        self.parity_check
            .iter()
            .map(|&w| BitVec::from_left_aligned(w, self.params.n).unwrap())
            .collect()
    }

    /// `H c^T`, bit `j` of the result at position `j`.
    pub fn syndrome(&self, c: &BitVec) -> BitVec {
        let bits: Vec<bool> = self
            .parity_check
            .iter()
            .map(|h| (h & c.left_aligned()).count_ones() & 1 == 1)
            .collect();
        BitVec::from_bits(&bits).unwrap()
    }

    /// Text form: a `rlc <n> <k> <seed|->` header, then the `k` generator rows
    /// as hex (integer rendering, position 0 most significant).
    pub fn to_text(&self) -> String {
        let seed = self.seed.map_or_else(|| "-".to_owned(), |s| s.to_string());
        let mut out = format!("rlc {} {} {}\n", self.params.n, self.params.k, seed);
        for row in self.generator_rows() {
            out.push_str(&row.to_hex());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CodeError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| CodeError::Format("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad = |what: &str| CodeError::Format(format!("{what} in header {header:?}"));
        if fields.len() != 4 || fields[0] != "rlc" {
            return Err(bad("expected `rlc <n> <k> <seed|->`"));
        }
        let n: usize = fields[1].parse().map_err(|_| bad("bad n"))?;
        let k: usize = fields[2].parse().map_err(|_| bad("bad k"))?;
        let seed = match fields[3] {
            "-" => None,
            s => Some(s.parse::<u64>().map_err(|_| bad("bad seed"))?),
        };
        let params = CodeParams::new(n, k)?;
        if k >= n {
            return Err(bad("RLC needs k < n"));
        }
        let rows = lines.map(|l| BitVec::from_hex(l, n)).collect::<Result<Vec<_>, _>>()?;
        if rows.len() != k {
            return Err(CodeError::Format(format!("expected {k} generator rows, got {}", rows.len())));
        }
        let mut p_rows = Vec::with_capacity(k);
        for (i, row) in rows.iter().enumerate() {
            let (head, tail) = row.split_at(k)?;
            if head.left_aligned() != 1u128 << (127 - i) {
                return Err(CodeError::Format(format!("generator row {i} is not systematic")));
            }
            p_rows.push(tail);
        }
        let mut code = RlcCode::from_parity_rows(params, &p_rows)?;
        code.seed = seed;
        Ok(code)
    }
}

impl MembershipOracle for RlcCode {
    fn params(&self) -> CodeParams {
        self.params
    }

    #[inline]
    fn check(&self, word: &BitVec) -> Verdict {
        let w = word.left_aligned();
        if self.parity_check.iter().any(|h| (h & w).count_ones() & 1 == 1) {
            return Verdict::NotCodeword;
        }
        Verdict::Decoded(Message::new(BitVec::from_left_aligned(w, self.params.k).unwrap()))
    }
}

impl BlockCode for RlcCode {
    fn encode(&self, m: &Message) -> Result<BitVec, CodeError> {
        check_message(self.params, m)?;
        let bits = m.bits().left_aligned();
        let word = self
            .generator
            .iter()
            .enumerate()
            .filter(|(i, _)| (bits >> (127 - i)) & 1 == 1)
            .fold(0u128, |acc, (_, row)| acc ^ row);
        Ok(BitVec::from_left_aligned(word, self.params.n)?)
    }
}

pub fn rlc_encode(m: &Message, code: &RlcCode) -> Result<BitVec, CodeError> {
    code.encode(m)
}

pub fn rlc_oracle(c: &BitVec, code: &RlcCode) -> Result<Verdict, CodeError> {
    if c.len() != code.params.n {
        return Err(CodeError::Bits(BitError::LengthMismatch { left: c.len(), right: code.params.n }));
    }
    Ok(code.check(c))
}

/// Either code family behind one type, for campaign dispatch.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Code {
    Aes(AesPadCode),
    Rlc(RlcCode),
}

impl MembershipOracle for Code {
    fn params(&self) -> CodeParams {
        match self {
            Code::Aes(c) => c.params(),
            Code::Rlc(c) => c.params(),
        }
    }

    #[inline]
    fn check(&self, word: &BitVec) -> Verdict {
        match self {
            Code::Aes(c) => c.check(word),
            Code::Rlc(c) => c.check(word),
        }
    }
}

impl BlockCode for Code {
    fn encode(&self, m: &Message) -> Result<BitVec, CodeError> {
        match self {
            Code::Aes(c) => c.encode(m),
            Code::Rlc(c) => c.encode(m),
        }
    }
}
