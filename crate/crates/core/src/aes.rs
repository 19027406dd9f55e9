//! Table-driven AES-128 (FIPS-197).
//!
//! The decoder issues one decryption per guess, so both directions use the
//! 32-bit T-table formulation; decryption uses the equivalent inverse cipher
//! with InvMixColumns folded into the round keys. Execution time depends on
//! the data. This is a channel-coding component, not a hardened cipher.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bitblock::BitVec;

pub const BLOCK_BITS: usize = 128;
pub const ROUNDS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AesError {
    #[error("AES operates on {BLOCK_BITS}-bit blocks, got {0} bits")]
    BlockLength(usize),
    #[error("AES-128 key must be 32 hex digits, got {0:?}")]
    BadKey(String),
}

/// 128-bit secret shared by encoder and decoder.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AesKey([u8; 16]);

impl AesKey {
    /// The FIPS-197 example key `000102…0e0f`.
    pub const EXAMPLE: AesKey =
        AesKey([0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15]);

    pub fn new(bytes: [u8; 16]) -> Self {
        AesKey(bytes)
    }

    pub fn bytes(&self) -> &[u8; 16] {
        &self.0
    }

    pub fn from_hex(s: &str) -> Result<Self, AesError> {
        let t = s.trim();
        let t = t.strip_prefix("0x").unwrap_or(t);
        if t.len() != 32 || !t.is_ascii() {
            return Err(AesError::BadKey(s.to_owned()));
        }
        let mut out = [0u8; 16];
        for (i, byte) in out.iter_mut().enumerate() {
            *byte = u8::from_str_radix(&t[2 * i..2 * i + 2], 16)
                .map_err(|_| AesError::BadKey(s.to_owned()))?;
        }
        Ok(AesKey(out))
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Default for AesKey {
    fn default() -> Self {
        AesKey::EXAMPLE
    }
}

impl FromStr for AesKey {
    type Err = AesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AesKey::from_hex(s)
    }
}

impl fmt::Debug for AesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AesKey({})", self.to_hex())
    }
}

impl fmt::Display for AesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

const fn xtime(b: u8) -> u8 {
    (b << 1) ^ if b & 0x80 != 0 { 0x1b } else { 0 }
}

const fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    p
}

const fn gf_inv(a: u8) -> u8 {
    // a^254; maps 0 to 0.
    let mut result = 1u8;
    let mut base = a;
    let mut e = 254u8;
    while e != 0 {
        if e & 1 != 0 {
            result = gf_mul(result, base);
        }
        base = gf_mul(base, base);
        e >>= 1;
    }
    result
}

const fn fips_sbox() -> [u8; 256] {
    let mut s = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        let b = gf_inv(i as u8);
        s[i] = b
            ^ b.rotate_left(1)
            ^ b.rotate_left(2)
            ^ b.rotate_left(3)
            ^ b.rotate_left(4)
            ^ 0x63;
        i += 1;
    }
    s
}

/// Lookup tables for the round function, derived from a byte substitution box.
#[derive(Clone)]
pub struct AesTables {
    sbox: [u8; 256],
    inv_sbox: [u8; 256],
    te: [[u32; 256]; 4],
    td: [[u32; 256]; 4],
}

static STANDARD_TABLES: AesTables = AesTables::from_sbox(fips_sbox());

impl AesTables {
    /// Tables for the FIPS-197 S-box.
    pub fn standard() -> &'static AesTables {
        &STANDARD_TABLES
    }

    /// Builds every table from `sbox`, which must be a permutation of the bytes
    /// for decryption to invert encryption. Only the FIPS S-box yields AES.
    pub const fn from_sbox(sbox: [u8; 256]) -> AesTables {
        let mut inv_sbox = [0u8; 256];
        let mut i = 0;
        while i < 256 {
            inv_sbox[sbox[i] as usize] = i as u8;
            i += 1;
        }
        let mut te = [[0u32; 256]; 4];
        let mut td = [[0u32; 256]; 4];
        let mut x = 0;
        while x < 256 {
            let s = sbox[x];
            let e = ((gf_mul(s, 2) as u32) << 24)
                | ((s as u32) << 16)
                | ((s as u32) << 8)
                | gf_mul(s, 3) as u32;
            let v = inv_sbox[x];
            let d = ((gf_mul(v, 14) as u32) << 24)
                | ((gf_mul(v, 9) as u32) << 16)
                | ((gf_mul(v, 13) as u32) << 8)
                | gf_mul(v, 11) as u32;
            let mut t = 0;
            while t < 4 {
                te[t][x] = e.rotate_right(8 * t as u32);
                td[t][x] = d.rotate_right(8 * t as u32);
                t += 1;
            }
            x += 1;
        }
        AesTables { sbox, inv_sbox, te, td }
    }

    pub fn sbox(&self) -> &[u8; 256] {
        &self.sbox
    }

    #[inline]
    fn sub_word(&self, w: u32) -> u32 {
        u32::from_be_bytes(w.to_be_bytes().map(|b| self.sbox[b as usize]))
    }

    #[inline]
    fn inv_mix_column(&self, w: u32) -> u32 {
        let td = &self.td;
        let sb = &self.sbox;
        td[0][sb[(w >> 24) as usize] as usize]
            ^ td[1][sb[(w >> 16 & 0xff) as usize] as usize]
            ^ td[2][sb[(w >> 8 & 0xff) as usize] as usize]
            ^ td[3][sb[(w & 0xff) as usize] as usize]
    }
}

const RCON: [u8; ROUNDS] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];

/// Expanded AES-128 key: 11 round keys for encryption, plus the matching
/// equivalent-inverse-cipher keys for decryption.
#[derive(Clone)]
pub struct KeySchedule {
    enc: [u32; 4 * (ROUNDS + 1)],
    dec: [u32; 4 * (ROUNDS + 1)],
    tables: &'static AesTables,
}

impl fmt::Debug for KeySchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeySchedule").field("round_keys", &self.round_keys()).finish()
    }
}

impl PartialEq for KeySchedule {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc && self.dec == other.dec
    }
}

impl Eq for KeySchedule {}

/// FIPS-197 key expansion with the standard tables.
pub fn expand_key(key: &AesKey) -> KeySchedule {
    KeySchedule::with_tables(key, AesTables::standard())
}

impl KeySchedule {
    pub fn new(key: &AesKey) -> Self {
        expand_key(key)
    }

    /// Key expansion over arbitrary tables (fault-injection and cross-checks).
    pub fn with_tables(key: &AesKey, tables: &'static AesTables) -> Self {
        let mut w = [0u32; 4 * (ROUNDS + 1)];
        for (i, chunk) in key.0.chunks_exact(4).enumerate() {
            w[i] = u32::from_be_bytes(chunk.try_into().unwrap());
        }
        for i in 4..w.len() {
            let mut temp = w[i - 1];
            if i % 4 == 0 {
                temp = tables.sub_word(temp.rotate_left(8)) ^ ((RCON[i / 4 - 1] as u32) << 24);
            }
            w[i] = w[i - 4] ^ temp;
        }

        let mut dec = [0u32; 4 * (ROUNDS + 1)];
        for round in 0..=ROUNDS {
            for c in 0..4 {
                let src = w[4 * (ROUNDS - round) + c];
                dec[4 * round + c] =
                    if round == 0 || round == ROUNDS { src } else { tables.inv_mix_column(src) };
            }
        }
        KeySchedule { enc: w, dec, tables }
    }

    /// The 11 encryption round keys as bytes, round 0 first.
    pub fn round_keys(&self) -> [[u8; 16]; ROUNDS + 1] {
        let mut out = [[0u8; 16]; ROUNDS + 1];
        for (r, rk) in out.iter_mut().enumerate() {
            for c in 0..4 {
                rk[4 * c..4 * c + 4].copy_from_slice(&self.enc[4 * r + c].to_be_bytes());
            }
        }
        out
    }

    /// Encrypts one block held as a big-endian `u128`.
    #[inline]
    pub fn encrypt_u128(&self, block: u128) -> u128 {
        let t = self.tables;
        let te = &t.te;
        let rk = &self.enc;
        let mut s0 = (block >> 96) as u32 ^ rk[0];
        let mut s1 = (block >> 64) as u32 ^ rk[1];
        let mut s2 = (block >> 32) as u32 ^ rk[2];
        let mut s3 = block as u32 ^ rk[3];
        for r in 1..ROUNDS {
            let k = &rk[4 * r..4 * r + 4];
            let t0 = te[0][(s0 >> 24) as usize]
                ^ te[1][(s1 >> 16 & 0xff) as usize]
                ^ te[2][(s2 >> 8 & 0xff) as usize]
                ^ te[3][(s3 & 0xff) as usize]
                ^ k[0];
            let t1 = te[0][(s1 >> 24) as usize]
                ^ te[1][(s2 >> 16 & 0xff) as usize]
                ^ te[2][(s3 >> 8 & 0xff) as usize]
                ^ te[3][(s0 & 0xff) as usize]
                ^ k[1];
            let t2 = te[0][(s2 >> 24) as usize]
                ^ te[1][(s3 >> 16 & 0xff) as usize]
                ^ te[2][(s0 >> 8 & 0xff) as usize]
                ^ te[3][(s1 & 0xff) as usize]
                ^ k[2];
            let t3 = te[0][(s3 >> 24) as usize]
                ^ te[1][(s0 >> 16 & 0xff) as usize]
                ^ te[2][(s1 >> 8 & 0xff) as usize]
                ^ te[3][(s2 & 0xff) as usize]
                ^ k[3];
            (s0, s1, s2, s3) = (t0, t1, t2, t3);
        }
        let sb = &t.sbox;
        let k = &rk[4 * ROUNDS..];
        let last = |a: u32, b: u32, c: u32, d: u32, key: u32| {
            (((sb[(a >> 24) as usize] as u32) << 24)
                | ((sb[(b >> 16 & 0xff) as usize] as u32) << 16)
                | ((sb[(c >> 8 & 0xff) as usize] as u32) << 8)
                | sb[(d & 0xff) as usize] as u32)
                ^ key
        };
        let o0 = last(s0, s1, s2, s3, k[0]);
        let o1 = last(s1, s2, s3, s0, k[1]);
        let o2 = last(s2, s3, s0, s1, k[2]);
        let o3 = last(s3, s0, s1, s2, k[3]);
        (o0 as u128) << 96 | (o1 as u128) << 64 | (o2 as u128) << 32 | o3 as u128
    }

    /// Decrypts one block held as a big-endian `u128`.
    #[inline]
    pub fn decrypt_u128(&self, block: u128) -> u128 {
        let t = self.tables;
        let td = &t.td;
        let rk = &self.dec;
        let mut s0 = (block >> 96) as u32 ^ rk[0];
        let mut s1 = (block >> 64) as u32 ^ rk[1];
        let mut s2 = (block >> 32) as u32 ^ rk[2];
        let mut s3 = block as u32 ^ rk[3];
        for r in 1..ROUNDS {
            let k = &rk[4 * r..4 * r + 4];
            let t0 = td[0][(s0 >> 24) as usize]
                ^ td[1][(s3 >> 16 & 0xff) as usize]
                ^ td[2][(s2 >> 8 & 0xff) as usize]
                ^ td[3][(s1 & 0xff) as usize]
                ^ k[0];
            let t1 = td[0][(s1 >> 24) as usize]
                ^ td[1][(s0 >> 16 & 0xff) as usize]
                ^ td[2][(s3 >> 8 & 0xff) as usize]
                ^ td[3][(s2 & 0xff) as usize]
                ^ k[1];
            let t2 = td[0][(s2 >> 24) as usize]
                ^ td[1][(s1 >> 16 & 0xff) as usize]
                ^ td[2][(s0 >> 8 & 0xff) as usize]
                ^ td[3][(s3 & 0xff) as usize]
                ^ k[2];
            let t3 = td[0][(s3 >> 24) as usize]
                ^ td[1][(s2 >> 16 & 0xff) as usize]
                ^ td[2][(s1 >> 8 & 0xff) as usize]
                ^ td[3][(s0 & 0xff) as usize]
                ^ k[3];
            (s0, s1, s2, s3) = (t0, t1, t2, t3);
        }
        let isb = &t.inv_sbox;
        let k = &rk[4 * ROUNDS..];
        let last = |a: u32, b: u32, c: u32, d: u32, key: u32| {
            (((isb[(a >> 24) as usize] as u32) << 24)
                | ((isb[(b >> 16 & 0xff) as usize] as u32) << 16)
                | ((isb[(c >> 8 & 0xff) as usize] as u32) << 8)
                | isb[(d & 0xff) as usize] as u32)
                ^ key
        };
        let o0 = last(s0, s3, s2, s1, k[0]);
        let o1 = last(s1, s0, s3, s2, k[1]);
        let o2 = last(s2, s1, s0, s3, k[2]);
        let o3 = last(s3, s2, s1, s0, k[3]);
        (o0 as u128) << 96 | (o1 as u128) << 64 | (o2 as u128) << 32 | o3 as u128
    }

    pub fn encrypt_bytes(&self, block: [u8; 16]) -> [u8; 16] {
        self.encrypt_u128(u128::from_be_bytes(block)).to_be_bytes()
    }

    pub fn decrypt_bytes(&self, block: [u8; 16]) -> [u8; 16] {
        self.decrypt_u128(u128::from_be_bytes(block)).to_be_bytes()
    }
}

pub fn encrypt_block(ks: &KeySchedule, pt: &BitVec) -> Result<BitVec, AesError> {
    if pt.len() != BLOCK_BITS {
        return Err(AesError::BlockLength(pt.len()));
    }
    Ok(BitVec::from_block_bytes(ks.encrypt_u128(pt.left_aligned()).to_be_bytes()))
}

pub fn decrypt_block(ks: &KeySchedule, ct: &BitVec) -> Result<BitVec, AesError> {
    if ct.len() != BLOCK_BITS {
        return Err(AesError::BlockLength(ct.len()));
    }
    Ok(BitVec::from_block_bytes(ks.decrypt_u128(ct.left_aligned()).to_be_bytes()))
}

/// One published FIPS-197 vector.
#[derive(Debug, Clone, Copy)]
pub struct KnownAnswer {
    pub key: &'static str,
    pub plaintext: &'static str,
    pub ciphertext: &'static str,
}

/// FIPS-197 Appendix B and Appendix C.1 vectors.
pub const KNOWN_ANSWERS: [KnownAnswer; 2] = [
    KnownAnswer {
        key: "2b7e151628aed2a6abf7158809cf4f3c",
        plaintext: "3243f6a8885a308d313198a2e0370734",
        ciphertext: "3925841d02dc09fbdc118597196a0b32",
    },
    KnownAnswer {
        key: "000102030405060708090a0b0c0d0e0f",
        plaintext: "00112233445566778899aabbccddeeff",
        ciphertext: "69c4e0d86a7b0430d8cdb78070b4c55a",
    },
];
