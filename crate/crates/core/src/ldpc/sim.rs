//! Monte Carlo frame simulation over a binary symmetric channel.
//!
//! Trial `i` draws its noise from ChaCha8 seeded with `seed` on stream `i`
//! (`ChaCha8Rng::seed_from_u64(seed)` then `set_stream(i)`), one `f64` per
//! bit in index order. Each trial is therefore a pure function of
//! `(seed, i)`, and totals are integer sums, so reports are bit-identical
//! however the trials are scheduled.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::Exec;
use crate::gf2::BitVec;

use super::decode::{bsc_llr, decode_bitflip, decode_minsum};
use super::{LdpcCode, LdpcError, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Bsc,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("bsc")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub kind: Channel,
    pub p: f64,
    pub seed: u64,
}

impl ChannelSpec {
    pub fn bsc(p: f64, seed: u64) -> Result<Self, LdpcError> {
        if !(0.0..=0.5).contains(&p) {
            return Err(LdpcError::InvalidCrossover(p));
        }
        Ok(ChannelSpec { kind: Channel::Bsc, p, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderConfig {
    BitFlip { max_iters: usize },
    MinSum { max_iters: usize, normalization: f64 },
}

impl DecoderConfig {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderConfig::BitFlip { .. } => "bitflip",
            DecoderConfig::MinSum { .. } => "minsum",
        }
    }

    pub fn max_iters(&self) -> usize {
        match *self {
            DecoderConfig::BitFlip { max_iters } | DecoderConfig::MinSum { max_iters, .. } => max_iters,
        }
    }
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig::MinSum { max_iters: 50, normalization: 0.75 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    /// Frames decoded to a nonzero codeword.
    pub undetected_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub decoder: &'static str,
    pub max_iters: usize,
    pub seed: u64,
}

pub const CSV_HEADER: &str = "q,system,transposed,channel,p,decoder,max_iters,trials,bit_errors,frame_errors,ber,fer,seed";

impl SimReport {
    /// One CSV line matching [`CSV_HEADER`], without a trailing newline.
    pub fn csv_row(&self, provenance: &Provenance, channel: Channel) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:e},{:e},{}",
            provenance.q,
            provenance.system.name(),
            provenance.transposed,
            channel,
            self.p,
            self.decoder,
            self.max_iters,
            self.trials,
            self.bit_errors,
            self.frame_errors,
            self.ber,
            self.fer,
            self.seed
        )
    }
}

/// Noise pattern of one trial.
pub(crate) fn trial_noise(n: usize, p: f64, seed: u64, trial: u64) -> BitVec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let bits: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < p).collect();
    BitVec::from_bools(&bits)
}

/// `(bit errors, frame error, undetected)` of one trial.
fn run_trial(code: &LdpcCode, channel: &ChannelSpec, decoder: &DecoderConfig, trial: u64) -> (u64, bool, bool) {
    let received = trial_noise(code.n(), channel.p, channel.seed, trial);
    let result = match *decoder {
        DecoderConfig::BitFlip { max_iters } => decode_bitflip(code, &received, max_iters),
        DecoderConfig::MinSum { max_iters, normalization } => {
            let llr: Vec<f64> = received.to_bools().into_iter().map(|b| bsc_llr(b, channel.p)).collect();
            decode_minsum(code, &llr, max_iters, normalization)
        }
    }
    .expect("arguments validated by simulate");
    let bit_errors = result.word.count_ones() as u64;
    (bit_errors, bit_errors > 0, bit_errors > 0 && result.converged)
}

/// Sends the zero codeword `trials` times and tallies decoding errors.
pub fn simulate(
    code: &LdpcCode,
    channel: &ChannelSpec,
    decoder: &DecoderConfig,
    trials: u64,
    exec: Exec,
) -> Result<SimReport, LdpcError> {
    if trials == 0 {
        return Err(LdpcError::ZeroTrials);
    }
    if !(0.0..=0.5).contains(&channel.p) {
        return Err(LdpcError::InvalidCrossover(channel.p));
    }
    if let DecoderConfig::MinSum { normalization, .. } = *decoder {
        if !(normalization > 0.0 && normalization <= 1.0) {
            return Err(LdpcError::InvalidNormalization(normalization));
        }
    }
    let outcomes = exec.map_range(trials as usize, |i| run_trial(code, channel, decoder, i as u64));
    let (mut bit_errors, mut frame_errors, mut undetected_errors) = (0u64, 0u64, 0u64);
    for (b, f, u) in outcomes {
        bit_errors += b;
        frame_errors += f as u64;
        undetected_errors += u as u64;
    }
    Ok(SimReport {
        n: code.n(),
        p: channel.p,
        trials,
        bit_errors,
        frame_errors,
        undetected_errors,
        ber: bit_errors as f64 / (trials as f64 * code.n() as f64),
        fer: frame_errors as f64 / trials as f64,
        decoder: decoder.name(),
        max_iters: decoder.max_iters(),
        seed: channel.seed,
    })
}
