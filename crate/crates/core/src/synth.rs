//! Synthetic bit streams and compression sweeps.
//!
//! A synthetic stream is a single bit-plane where each bit is independently
//! a don't-care with probability `S` and otherwise a fair coin. Sweeps encode
//! such streams across `n_out`, `n_in` or `S` and report the memory
//! reduction `1 - compressed / uncompressed` from [`compression_stats`],
//! averaged over `trials` seeds.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{MaskedWord, Strategy, XorNetwork};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::tensor::{compression_stats, encode_tensor_with, slice_words, QuantizedMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub total_bits: usize,
    pub sparsity: f64,
    pub seed: u64,
    pub n_in: usize,
    /// Word length for [`gen_words`]; sweeps take their own `n_out` lists.
    pub n_out: usize,
    pub trials: usize,
    pub block_size: usize,
    pub strategy: Strategy,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            total_bits: 10_000,
            sparsity: 0.9,
            seed: 0x5eed,
            n_in: 20,
            n_out: 200,
            trials: 3,
            block_size: crate::tensor::DEFAULT_BLOCK_SIZE,
            strategy: Strategy::Greedy,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(Error::config(format!(
                "sparsity {} outside [0, 1]",
                self.sparsity
            )));
        }
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.block_size == 0 {
            return Err(Error::config("block_size must be at least 1"));
        }
        if self.n_in == 0 {
            return Err(Error::config("n_in must be at least 1"));
        }
        Ok(())
    }

    fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

/// A `1 x total_bits` single-plane matrix drawn from `seed`.
pub fn gen_matrix(total_bits: usize, sparsity: f64, seed: u64) -> QuantizedMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = BitVector::zeros(total_bits);
    let mut plane = BitVector::zeros(total_bits);
    for k in 0..total_bits {
        // one draw each, even when pruned, so the value stream does not
        // depend on the mask
        let pruned = rng.random_bool(sparsity);
        let value = rng.random_bool(0.5);
        if !pruned {
            mask.set(k, true);
            plane.set(k, value);
        }
    }
    QuantizedMatrix::new(1, total_bits, mask, vec![plane]).expect("dimensions agree")
}

/// An `m x n` matrix of `n_q`-bit levels, each weight pruned with
/// probability `sparsity`.
pub fn gen_quantized(
    m: usize,
    n: usize,
    n_q: usize,
    sparsity: f64,
    seed: u64,
) -> Result<QuantizedMatrix> {
    if !(0.0..=1.0).contains(&sparsity) {
        return Err(Error::config(format!("sparsity {sparsity} outside [0, 1]")));
    }
    if !(1..=32).contains(&n_q) {
        return Err(Error::config(format!("n_q {n_q} outside [1, 32]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = if n_q == 32 {
        u32::MAX
    } else {
        (1u32 << n_q) - 1
    };
    let levels: Vec<Option<u32>> = (0..m * n)
        .map(|_| {
            let pruned = rng.random_bool(sparsity);
            let level = rng.random_range(0..=top);
            (!pruned).then_some(level)
        })
        .collect();
    QuantizedMatrix::from_levels(m, n, n_q, &levels)
}

/// The synthetic stream of trial 0 cut into `cfg.n_out`-bit words.
pub fn gen_words(cfg: &SynthConfig) -> Result<Vec<MaskedWord>> {
    cfg.validate()?;
    slice_words(
        &gen_matrix(cfg.total_bits, cfg.sparsity, cfg.seed),
        cfg.n_out,
    )
}

/// One sweep point, averaged over trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n_in: usize,
    pub n_out: usize,
    pub sparsity: f64,
    pub total_bits: usize,
    pub payload_bits: f64,
    pub width_bits: f64,
    pub patch_bits: f64,
    pub memory_reduction: f64,
    pub ratio: f64,
    pub mean_patch: f64,
    pub max_patch: usize,
    pub seconds: f64,
}

impl SweepRow {
    pub fn compressed_bits(&self) -> f64 {
        self.payload_bits + self.width_bits + self.patch_bits
    }

    /// Same row without the wall-clock column, for determinism checks.
    pub fn without_timing(&self) -> SweepRow {
        SweepRow {
            seconds: 0.0,
            ..self.clone()
        }
    }
}

/// Encodes `cfg.trials` synthetic streams at one `(n_in, n_out, S)` point.
pub fn measure(cfg: &SynthConfig, n_in: usize, n_out: usize, sparsity: f64) -> Result<SweepRow> {
    cfg.validate()?;
    let start = Instant::now();
    let mut payload = 0u64;
    let mut width = 0u64;
    let mut patch = 0u64;
    let mut patches = 0u64;
    let mut words = 0u64;
    let mut max_patch = 0usize;
    for t in 0..cfg.trials {
        let seed = cfg.trial_seed(t);
        let qm = gen_matrix(cfg.total_bits, sparsity, seed);
        let net = XorNetwork::generate(n_out, n_in, seed)?;
        let ct = encode_tensor_with(&qm, &net, cfg.block_size, cfg.strategy)?;
        let s = compression_stats(&ct);
        payload += s.payload_bits;
        width += s.width_field_bits;
        patch += s.patch_pos_bits;
        patches += s.total_patches;
        words += s.words;
        max_patch = max_patch.max(s.max_patch as usize);
    }
    let trials = cfg.trials as f64;
    let payload_bits = payload as f64 / trials;
    let width_bits = width as f64 / trials;
    let patch_bits = patch as f64 / trials;
    let compressed = payload_bits + width_bits + patch_bits;
    let total = cfg.total_bits as f64;
    Ok(SweepRow {
        n_in,
        n_out,
        sparsity,
        total_bits: cfg.total_bits,
        payload_bits,
        width_bits,
        patch_bits,
        memory_reduction: 1.0 - compressed / total,
        ratio: total / compressed,
        mean_patch: if words == 0 {
            0.0
        } else {
            patches as f64 / words as f64
        },
        max_patch,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// `n_out` grid used when none is given: `2 n_in, 3 n_in, ..., 20 n_in`.
pub fn default_n_outs(n_in: usize) -> Vec<usize> {
    (2..=20).map(|k| k * n_in).collect()
}

/// Rows of one sweep line plus the index of its best row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepLine {
    pub rows: Vec<SweepRow>,
    pub best: usize,
}

impl SweepLine {
    fn new(rows: Vec<SweepRow>) -> Self {
        let best = rows.iter().enumerate().fold(0, |b, (i, r)| {
            if r.memory_reduction > rows[b].memory_reduction {
                i
            } else {
                b
            }
        });
        Self { rows, best }
    }

    pub fn best_row(&self) -> &SweepRow {
        &self.rows[self.best]
    }
}

/// Sweeps `n_out` at fixed `cfg.n_in` and `cfg.sparsity`. All points are
/// evaluated.
pub fn sweep_nout(cfg: &SynthConfig, n_outs: &[usize]) -> Result<SweepLine> {
    if n_outs.is_empty() {
        return Err(Error::config("empty n_out list"));
    }
    let rows = n_outs
        .par_iter()
        .map(|&n_out| measure(cfg, cfg.n_in, n_out, cfg.sparsity))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepLine::new(rows))
}

/// Walks `n_outs` in order and stops once the reduction has fallen on two
/// consecutive rows.
pub fn sweep_nout_until_decline(
    cfg: &SynthConfig,
    n_in: usize,
    sparsity: f64,
    n_outs: &[usize],
) -> Result<SweepLine> {
    if n_outs.is_empty() {
        return Err(Error::config("empty n_out list"));
    }
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut declines = 0;
    for &n_out in n_outs {
        let row = measure(cfg, n_in, n_out, sparsity)?;
        declines = match rows.last() {
            Some(prev) if row.memory_reduction < prev.memory_reduction => declines + 1,
            _ => 0,
        };
        rows.push(row);
        if declines == 2 {
            break;
        }
    }
    Ok(SweepLine::new(rows))
}

/// Best-over-`n_out` line for each `n_in`, using each `n_in`'s default grid.
pub fn sweep_nin(cfg: &SynthConfig, n_ins: &[usize]) -> Result<Vec<SweepLine>> {
    n_ins
        .par_iter()
        .map(|&n_in| sweep_nout_until_decline(cfg, n_in, cfg.sparsity, &default_n_outs(n_in)))
        .collect()
}

/// Result of one sparsity level in [`sweep_sparsity`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsityPoint {
    pub sparsity: f64,
    pub best_reduction: f64,
    /// `S - best_reduction`.
    pub gap: f64,
    pub line: SweepLine,
}

/// Best reduction at `cfg.n_in` for each sparsity level.
pub fn sweep_sparsity(cfg: &SynthConfig, sparsities: &[f64]) -> Result<Vec<SparsityPoint>> {
    sparsities
        .par_iter()
        .map(|&s| {
            let line = sweep_nout_until_decline(cfg, cfg.n_in, s, &default_n_outs(cfg.n_in))?;
            let best_reduction = line.best_row().memory_reduction;
            Ok(SparsityPoint {
                sparsity: s,
                best_reduction,
                gap: s - best_reduction,
                line,
            })
        })
        .collect()
}

/// Report record with the fixed column set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n_in: usize,
    pub n_out: usize,
    pub sparsity: f64,
    pub reduction: f64,
    pub ratio: f64,
    pub mean_patch: f64,
    pub max_patch: usize,
    pub seconds: f64,
}

impl From<&SweepRow> for ReportRow {
    fn from(r: &SweepRow) -> Self {
        Self {
            n_in: r.n_in,
            n_out: r.n_out,
            sparsity: r.sparsity,
            reduction: r.memory_reduction,
            ratio: r.ratio,
            mean_patch: r.mean_patch,
            max_patch: r.max_patch,
            seconds: r.seconds,
        }
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(ReportRow::from(r))
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    let report: Vec<ReportRow> = rows.iter().map(ReportRow::from).collect();
    serde_json::to_writer_pretty(&mut out, &report).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}
