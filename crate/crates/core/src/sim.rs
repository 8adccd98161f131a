//! Cycle-level model of patch delivery during decoding.
//!
//! Each XOR decoder owns a patch FIFO of `fifo_depth` entries. A fill stream
//! pushes up to `n_fifo` entries (one per bank) per cycle into it; push slots
//! that find the FIFO full are lost for that cycle. Words are dealt to
//! decoders round-robin. In every cycle the fill happens first, then each
//! decoder either takes the `n_patch` entries its current word needs and
//! retires the word, or stalls because the FIFO holds too few.
//!
//! A word needing more entries than the FIFO can ever hold collects them
//! over several cycles, draining whatever is present each cycle.
//!
//! The CSR baseline models row-parallel decoding: rows are processed in
//! batches of `n_decoders` with a barrier after each batch, so a batch costs
//! as much as its longest row.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_FIFO_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub n_decoders: usize,
    /// Patch entries delivered per decoder per cycle.
    pub n_fifo: usize,
    pub fifo_depth: usize,
    /// `n_patch` of each word in stream order.
    pub trace: Vec<usize>,
}

impl SimConfig {
    pub fn new(n_decoders: usize, n_fifo: usize, trace: Vec<usize>) -> Self {
        Self {
            n_decoders,
            n_fifo,
            fifo_depth: DEFAULT_FIFO_DEPTH,
            trace,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_decoders == 0 || self.n_fifo == 0 || self.fifo_depth == 0 {
            return Err(Error::config(
                "n_decoders, n_fifo and fifo_depth must all be at least 1",
            ));
        }
        if self.trace.is_empty() {
            return Err(Error::config("empty patch trace"));
        }
        Ok(())
    }
}

/// Cycle counts from a simulation. Stall counts include FIFO warm-up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub total_cycles: u64,
    pub ideal_cycles: f64,
    pub stall_cycles: f64,
    pub relative_time: f64,
    pub fifo_full_events: u64,
    pub fifo_empty_events: u64,
}

#[derive(Debug, Default)]
struct DecoderRun {
    cycles: u64,
    full: u64,
    empty: u64,
}

fn run_decoder(words: &[usize], n_fifo: usize, depth: usize) -> DecoderRun {
    let mut run = DecoderRun::default();
    let mut pending: usize = words.iter().sum();
    let mut occupancy = 0usize;
    // entries still owed to the current word
    let mut need = words.first().copied().unwrap_or(0);
    let mut idx = 0;
    while idx < words.len() {
        let want = n_fifo.min(pending);
        let push = want.min(depth - occupancy);
        if push < want {
            run.full += 1;
        }
        occupancy += push;
        pending -= push;

        if occupancy >= need {
            occupancy -= need;
            idx += 1;
            need = words.get(idx).copied().unwrap_or(0);
        } else {
            run.empty += 1;
            if need > depth {
                need -= occupancy;
                occupancy = 0;
            }
        }
        run.cycles += 1;
    }
    run
}

/// Runs the FIFO model over `cfg.trace`.
pub fn simulate_decode(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    let mut total = 0;
    let mut full = 0;
    let mut empty = 0;
    for d in 0..cfg.n_decoders {
        let words: Vec<usize> = cfg
            .trace
            .iter()
            .skip(d)
            .step_by(cfg.n_decoders)
            .copied()
            .collect();
        let run = run_decoder(&words, cfg.n_fifo, cfg.fifo_depth);
        total = total.max(run.cycles);
        full += run.full;
        empty += run.empty;
    }
    let ideal = cfg.trace.len().div_ceil(cfg.n_decoders) as f64;
    Ok(SimReport {
        total_cycles: total,
        ideal_cycles: ideal,
        stall_cycles: total as f64 - ideal,
        relative_time: total as f64 / ideal,
        fifo_full_events: full,
        fifo_empty_events: empty,
    })
}

/// Batch-barrier model of CSR decoding. The ideal time spreads all nonzeros
/// evenly over the decoders.
pub fn simulate_csr(row_nnz: &[usize], n_decoders: usize) -> Result<SimReport> {
    if row_nnz.is_empty() {
        return Err(Error::config("no rows"));
    }
    if n_decoders == 0 {
        return Err(Error::config("n_decoders must be at least 1"));
    }
    let total: u64 = row_nnz
        .chunks(n_decoders)
        .map(|batch| *batch.iter().max().unwrap() as u64)
        .sum();
    let nnz: usize = row_nnz.iter().sum();
    let ideal = nnz as f64 / n_decoders as f64;
    let relative_time = if nnz == 0 { 1.0 } else { total as f64 / ideal };
    Ok(SimReport {
        total_cycles: total,
        ideal_cycles: ideal,
        stall_cycles: total as f64 - ideal,
        relative_time,
        fifo_full_events: 0,
        fifo_empty_events: 0,
    })
}

/// Nonzeros per row for `n_rows` rows of `row_len` weights pruned
/// independently at rate `sparsity`.
pub fn binomial_rows(
    n_rows: usize,
    row_len: usize,
    sparsity: f64,
    seed: u64,
) -> Result<Vec<usize>> {
    let dist = Binomial::new(row_len as u64, 1.0 - sparsity)
        .map_err(|e| Error::config(format!("bad binomial parameters: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_rows)
        .map(|_| dist.sample(&mut rng) as usize)
        .collect())
}
