//! Fixed-width binary words of at most 128 bits.
//!
//! Bit positions run `0..len`. Position 0 is the first transmitted bit and the
//! most significant bit of every integer or hex rendering of the word. Storage
//! is a single `u128` with the word left-aligned: position `i` lives at bit
//! `127 - i`, and every bit at position `>= len` is zero.

use std::fmt;

use thiserror::Error;

/// Largest supported word length.
pub const MAX_BITS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitError {
    #[error("length mismatch: {left} bits vs {right} bits")]
    LengthMismatch { left: usize, right: usize },
    #[error("word length {0} exceeds the {MAX_BITS}-bit limit")]
    TooLong(usize),
    #[error("split point {k} beyond word length {len}")]
    SplitOutOfRange { k: usize, len: usize },
    #[error("position {pos} out of range for a {len}-bit word")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("invalid binary digit {0:?}")]
    BadBinaryDigit(char),
    #[error("invalid hex string {0:?}")]
    BadHex(String),
    #[error("hex value does not fit in {0} bits")]
    HexOverflow(usize),
}

/// A binary word of length `0..=128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    word: u128,
    len: u32,
}

#[inline]
fn mask_for(len: usize) -> u128 {
    if len == 0 {
        0
    } else {
        u128::MAX << (MAX_BITS - len)
    }
}

impl BitVec {
    /// All-zero word of `len` bits.
    pub fn zeros(len: usize) -> Result<Self, BitError> {
        if len > MAX_BITS {
            return Err(BitError::TooLong(len));
        }
        Ok(BitVec { word: 0, len: len as u32 })
    }

    /// Builds a word from a left-aligned `u128`; bits past `len` are cleared.
    pub fn from_left_aligned(word: u128, len: usize) -> Result<Self, BitError> {
        if len > MAX_BITS {
            return Err(BitError::TooLong(len));
        }
        Ok(BitVec { word: word & mask_for(len), len: len as u32 })
    }

    /// Builds a word from its integer rendering (position 0 is the MSB of a `len`-bit integer).
    pub fn from_u128(value: u128, len: usize) -> Result<Self, BitError> {
        if len > MAX_BITS {
            return Err(BitError::TooLong(len));
        }
        if len < MAX_BITS && value >> len != 0 {
            return Err(BitError::HexOverflow(len));
        }
        let word = if len == 0 { 0 } else { value << (MAX_BITS - len) };
        Ok(BitVec { word, len: len as u32 })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, BitError> {
        if bits.len() > MAX_BITS {
            return Err(BitError::TooLong(bits.len()));
        }
        let word = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u128, |w, (i, _)| w | (1u128 << (127 - i)));
        Ok(BitVec { word, len: bits.len() as u32 })
    }

    /// Parses a string of `0`/`1` characters, position 0 first. Underscores and spaces are ignored.
    pub fn parse_bits(s: &str) -> Result<Self, BitError> {
        let bits = s
            .chars()
            .filter(|c| *c != '_' && !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitError::BadBinaryDigit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_bits(&bits)
    }

    /// A full 128-bit block from 16 big-endian bytes (byte 0 holds positions 0..8).
    pub fn from_block_bytes(bytes: [u8; 16]) -> Self {
        BitVec { word: u128::from_be_bytes(bytes), len: 128 }
    }

    /// Big-endian byte image of a word, padded with zero bits at the end.
    pub fn to_block_bytes(&self) -> [u8; 16] {
        self.word.to_be_bytes()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The raw left-aligned storage word.
    #[inline]
    pub fn left_aligned(&self) -> u128 {
        self.word
    }

    /// Integer rendering: position 0 is the most significant of `len` bits.
    pub fn to_u128(&self) -> u128 {
        if self.len == 0 {
            0
        } else {
            self.word >> (MAX_BITS - self.len())
        }
    }

    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len(), "bit position {pos} out of range for {} bits", self.len);
        (self.word >> (127 - pos)) & 1 == 1
    }

    /// Copy of `self` with position `pos` set to `bit`.
    pub fn with_bit(&self, pos: usize, bit: bool) -> Result<Self, BitError> {
        if pos >= self.len() {
            return Err(BitError::PositionOutOfRange { pos, len: self.len() });
        }
        let m = 1u128 << (127 - pos);
        let word = if bit { self.word | m } else { self.word & !m };
        Ok(BitVec { word, len: self.len })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec, BitError> {
        if self.len != other.len {
            return Err(BitError::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(BitVec { word: self.word ^ other.word, len: self.len })
    }

    /// XOR with a left-aligned mask; mask bits past `len` are discarded.
    #[inline]
    pub fn xor_left_aligned(&self, mask: u128) -> BitVec {
        BitVec { word: (self.word ^ mask) & mask_for(self.len()), len: self.len }
    }

    #[inline]
    pub fn hamming_weight(&self) -> u32 {
        self.word.count_ones()
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming_distance(&self, other: &BitVec) -> Result<u32, BitError> {
        self.xor(other).map(|d| d.hamming_weight())
    }

    /// First `k` positions and the remaining `len - k`.
    pub fn split_at(&self, k: usize) -> Result<(BitVec, BitVec), BitError> {
        if k > self.len() {
            return Err(BitError::SplitOutOfRange { k, len: self.len() });
        }
        let head = BitVec { word: self.word & mask_for(k), len: k as u32 };
        let tail_len = self.len() - k;
        let tail_word = if k == MAX_BITS { 0 } else { self.word << k };
        Ok((head, BitVec { word: tail_word, len: tail_len as u32 }))
    }

    /// `self` followed by `other`.
    pub fn append(&self, other: &BitVec) -> Result<BitVec, BitError> {
        let len = self.len() + other.len();
        if len > MAX_BITS {
            return Err(BitError::TooLong(len));
        }
        let tail = if self.len() == MAX_BITS { 0 } else { other.word >> self.len() };
        Ok(BitVec { word: self.word | tail, len: len as u32 })
    }

    /// Hex rendering of the integer value, `ceil(len / 4)` digits, zero-extended on the left.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4);
        if digits == 0 {
            return String::new();
        }
        format!("{:0width$x}", self.to_u128(), width = digits)
    }

    /// Inverse of [`BitVec::to_hex`].
    pub fn from_hex(s: &str, len: usize) -> Result<Self, BitError> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        if len > MAX_BITS {
            return Err(BitError::TooLong(len));
        }
        if s.is_empty() {
            return if len == 0 { Self::zeros(0) } else { Err(BitError::BadHex(s.to_owned())) };
        }
        if s.len() > 32 || !s.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(BitError::BadHex(s.to_owned()));
        }
        let value = u128::from_str_radix(s, 16).map_err(|_| BitError::BadHex(s.to_owned()))?;
        Self::from_u128(value, len)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({}b:{})", self.len, self)
    }
}

/// The `k` information bits carried by a codeword.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Message(BitVec);

impl Message {
    pub fn new(bits: BitVec) -> Self {
        Message(bits)
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<BitVec> for Message {
    fn from(bits: BitVec) -> Self {
        Message(bits)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// The `n - k` padding bits appended to a message before encryption.
///
/// The scheme always transmits all-zero padding; arbitrary contents are
/// allowed so received padding can be inspected.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Padding(BitVec);

impl Padding {
    pub fn zeros(len: usize) -> Result<Self, BitError> {
        BitVec::zeros(len).map(Padding)
    }

    pub fn new(bits: BitVec) -> Self {
        Padding(bits)
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.hamming_weight() == 0
    }
}

/// `[m; p]`: message in the first positions, padding in the last.
pub fn concat(m: &Message, p: &Padding, n: usize) -> Result<BitVec, BitError> {
    if m.len() + p.len() != n {
        return Err(BitError::LengthMismatch { left: m.len() + p.len(), right: n });
    }
    m.bits().append(p.bits())
}

/// Splits `c` into its first `k` bits (the message) and the rest.
pub fn split(c: &BitVec, k: usize) -> Result<(Message, BitVec), BitError> {
    c.split_at(k).map(|(head, tail)| (Message(head), tail))
}
