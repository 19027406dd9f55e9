//! BPSK over additive white Gaussian noise.
//!
//! Bit 0 maps to +1 and bit 1 to -1, so a hard-decision error is exactly a
//! sign flip. Symbols have unit energy and the noise variance per real
//! dimension is `N0 / 2`, giving `Eb/N0 = 1 / (2 R sigma^2)`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitblock::BitVec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("code rate must lie in (0, 1], got {0}")]
    Rate(f64),
    #[error("Eb/N0 must be finite, got {0}")]
    Ebn0(f64),
}

/// Noise standard deviation for unit-energy BPSK at `ebn0_db` and code rate `rate`.
pub fn sigma_from_ebn0(ebn0_db: f64, rate: f64) -> Result<f64, ChannelError> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(ChannelError::Rate(rate));
    }
    if !ebn0_db.is_finite() {
        return Err(ChannelError::Ebn0(ebn0_db));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt())
}

/// One operating point of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPoint {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
    /// Differential entropy of one noise sample in bits, `0.5 log2(2 pi e sigma^2)`.
    /// Informational only; nothing enforces a rate bound against it.
    pub noise_entropy: f64,
}

impl ChannelPoint {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self, ChannelError> {
        let sigma = sigma_from_ebn0(ebn0_db, rate)?;
        Ok(Self::from_sigma(ebn0_db, rate, sigma))
    }

    /// A point with an explicit sigma, e.g. the noiseless limit.
    pub fn from_sigma(ebn0_db: f64, rate: f64, sigma: f64) -> Self {
        let noise_entropy =
            0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * sigma * sigma).log2();
        ChannelPoint { ebn0_db, rate, sigma, noise_entropy }
    }

    /// Probability that a single hard decision is wrong, `Q(1 / sigma)`.
    pub fn flip_probability(&self) -> f64 {
        crate::stats::q_function(1.0 / self.sigma)
    }
}

/// Received samples with their log-likelihood ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftWord {
    samples: Vec<f64>,
    llrs: Vec<f64>,
}

impl SoftWord {
    /// LLRs are `2 y / sigma^2`, positive favouring bit 0.
    pub fn from_samples(samples: Vec<f64>, sigma: f64) -> Self {
        let scale = 2.0 / (sigma * sigma);
        let llrs = samples.iter().map(|y| scale * y).collect();
        SoftWord { samples, llrs }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn llrs(&self) -> &[f64] {
        &self.llrs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

pub fn modulate(c: &BitVec) -> Vec<f64> {
    c.iter().map(|b| if b { -1.0 } else { 1.0 }).collect()
}

/// `y = x + g` with `g` i.i.d. `N(0, sigma^2)` drawn from `rng`.
pub fn add_awgn<R: Rng + ?Sized>(x: &[f64], sigma: f64, rng: &mut R) -> SoftWord {
    let samples = x
        .iter()
        .map(|&s| {
            let g: f64 = rng.sample(StandardNormal);
            s + sigma * g
        })
        .collect();
    SoftWord::from_samples(samples, sigma)
}

/// Sign slicer; a sample of exactly zero decides 0.
pub fn hard_decision(w: &SoftWord) -> BitVec {
    let bits: Vec<bool> = w.samples.iter().map(|&y| y < 0.0).collect();
    BitVec::from_bits(&bits).expect("soft word longer than 128 samples")
}

/// Positions sorted by `|llr|`, least reliable first; ties keep position order.
pub fn reliability_permutation(w: &SoftWord) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..w.llrs.len()).collect();
    idx.sort_by(|&a, &b| w.llrs[a].abs().total_cmp(&w.llrs[b].abs()));
    idx
}
