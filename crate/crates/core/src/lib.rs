//! AES-128 as a block error-correcting code.
//!
//! A `k`-bit message is followed by `n - k` zero bits and encrypted as one
//! 128-bit AES block. The receiver guesses noise patterns in likelihood order
//! ([`grand`]), strips each from the received word, decrypts, and accepts the
//! first candidate whose trailing `n - k` plaintext bits are zero. A random
//! linear code with the same parameters serves as the baseline, and
//! [`campaign`] measures BER/BLER of both over a BPSK/AWGN channel.

pub mod aes;
pub mod bitblock;
pub mod campaign;
pub mod channel;
pub mod codes;
pub mod grand;
pub mod selftest;
pub mod stats;

pub use bitblock::{BitVec, Message, Padding};
pub use codes::{AesPadCode, BlockCode, Code, CodeParams, MembershipOracle, RlcCode, Verdict};
