use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use xqz::codec::{Strategy, XorNetwork, DEFAULT_EXHAUSTIVE_LIMIT};
use xqz::sim::{simulate_csr, simulate_decode, SimConfig, DEFAULT_FIFO_DEPTH};
use xqz::synth::{self, SweepRow, SynthConfig};
use xqz::tensor::{self, compression_stats, CompressedTensor, QuantizedMatrix};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "xqz",
    version,
    about = "XOR-network codec for sparse quantized weights"
)]
struct Cli {
    /// Worker threads for encoding and sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a QMAT file into an XQZ stream.
    Encode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Write the per-word patch counts as a JSON array.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        enc: EncodeArgs,
    },
    /// Expand an XQZ stream back into a QMAT file.
    Decode {
        #[arg(long)]
        input: PathBuf,
        /// QMAT file whose prune mask is applied to the output.
        #[arg(long)]
        mask: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Encode and decode in memory and compare every care bit.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        enc: EncodeArgs,
    },
    /// Size breakdown of an XQZ stream.
    Stats {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compression sweeps over synthetic streams.
    SynthSweep(SweepArgs),
    /// Decode-time model for a patch trace or CSR rows.
    Simulate(SimArgs),
    /// Write a random sparse quantized matrix as QMAT.
    GenSynthetic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        n_q: usize,
        #[arg(long, default_value_t = 0.9)]
        s: f64,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct SeedArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Draw the seed from system entropy instead of `--seed`.
    #[arg(long, conflicts_with = "seed")]
    entropy_seed: bool,
}

impl SeedArgs {
    fn resolve(&self) -> u64 {
        if self.entropy_seed {
            let seed = rand::rng().random();
            eprintln!("seed: {seed}");
            seed
        } else {
            self.seed
        }
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long, default_value_t = 20)]
    n_in: usize,
    #[arg(long, default_value_t = 200)]
    n_out: usize,
    #[arg(long, default_value_t = tensor::DEFAULT_BLOCK_SIZE)]
    block_size: usize,
    /// Minimize patches by enumerating all seeds (small n_in only).
    #[arg(long)]
    exhaustive: bool,
    #[command(flatten)]
    seed: SeedArgs,
}

fn strategy(exhaustive: bool) -> Strategy {
    if exhaustive {
        Strategy::Exhaustive {
            limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    } else {
        Strategy::Greedy
    }
}

impl EncodeArgs {
    fn encode(&self, qm: &QuantizedMatrix) -> Result<CompressedTensor, Failure> {
        let net = XorNetwork::generate(self.n_out, self.n_in, self.seed.resolve())?;
        Ok(tensor::encode_tensor_with(
            qm,
            &net,
            self.block_size,
            strategy(self.exhaustive),
        )?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepMode {
    /// Every n_out point for each (S, n_in) pair.
    NOut,
    /// Best row per n_in for each S.
    NIn,
    /// Best row per S for each n_in.
    Sparsity,
}

#[derive(Args)]
struct SweepArgs {
    /// Sparsity levels, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.9")]
    s: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "20")]
    n_in: Vec<usize>,
    /// n_out grid for `n-out` mode (default: 2 n_in to 20 n_in).
    #[arg(long, value_delimiter = ',')]
    n_out: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    bits: usize,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = tensor::DEFAULT_BLOCK_SIZE)]
    block_size: usize,
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, value_enum, default_value_t = SweepMode::NOut)]
    mode: SweepMode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArgs,
}

#[derive(Args)]
struct SimArgs {
    /// JSON array of patch counts per word.
    #[arg(
        long,
        conflicts_with = "csr_rows",
        required_unless_present = "csr_rows"
    )]
    trace: Option<PathBuf>,
    /// JSON array of nonzeros per row, for the CSR baseline.
    #[arg(long)]
    csr_rows: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    n_decoders: usize,
    #[arg(long, default_value_t = 1)]
    n_fifo: usize,
    #[arg(long, default_value_t = DEFAULT_FIFO_DEPTH)]
    fifo_depth: usize,
}

enum Failure {
    Usage(String),
    Io(String),
    Corrupt(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Corrupt(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Corrupt(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<xqz::Error> for Failure {
    fn from(e: xqz::Error) -> Self {
        match e {
            xqz::Error::Io(_) => Failure::Io(e.to_string()),
            xqz::Error::CorruptStream { .. } => Failure::Corrupt(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_slice(&read(path)?)
        .map_err(|e| Failure::Corrupt(format!("{}: {e}", path.display())))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out).map_err(|e| Failure::Io(e.to_string()))
}

fn sweep(args: &SweepArgs) -> Result<Vec<SweepRow>, Failure> {
    let base = SynthConfig {
        total_bits: args.bits,
        seed: args.seed.resolve(),
        trials: args.trials,
        block_size: args.block_size,
        strategy: strategy(args.exhaustive),
        ..SynthConfig::default()
    };
    let mut rows = Vec::new();
    match args.mode {
        SweepMode::NOut => {
            for &s in &args.s {
                for &n_in in &args.n_in {
                    let cfg = SynthConfig {
                        sparsity: s,
                        n_in,
                        ..base.clone()
                    };
                    let grid = if args.n_out.is_empty() {
                        synth::default_n_outs(n_in)
                    } else {
                        args.n_out.clone()
                    };
                    rows.extend(synth::sweep_nout(&cfg, &grid)?.rows);
                }
            }
        }
        SweepMode::NIn => {
            for &s in &args.s {
                let cfg = SynthConfig {
                    sparsity: s,
                    ..base.clone()
                };
                let lines = synth::sweep_nin(&cfg, &args.n_in)?;
                rows.extend(lines.iter().map(|l| l.best_row().clone()));
            }
        }
        SweepMode::Sparsity => {
            for &n_in in &args.n_in {
                let cfg = SynthConfig {
                    n_in,
                    ..base.clone()
                };
                let points = synth::sweep_sparsity(&cfg, &args.s)?;
                rows.extend(points.iter().map(|p| p.line.best_row().clone()));
            }
        }
    }
    Ok(rows)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Encode {
            input,
            output,
            trace,
            enc,
        } => {
            let qm = tensor::read_qmat(&read(&input)?)?;
            let ct = enc.encode(&qm)?;
            write(&output, &tensor::serialize(&ct)?)?;
            if let Some(path) = trace {
                let json = serde_json::to_vec(&ct.patch_counts())
                    .map_err(|e| Failure::Io(e.to_string()))?;
                write(&path, &json)?;
            }
            print_json(&compression_stats(&ct))
        }
        Command::Decode {
            input,
            mask,
            output,
        } => {
            let ct = tensor::deserialize(&read(&input)?)?;
            let mask = tensor::read_qmat(&read(&mask)?)?;
            let qm = tensor::decode_tensor(&ct, mask.prune_mask())?;
            write(&output, &tensor::write_qmat(&qm)?)
        }
        Command::Verify { input, enc } => {
            let qm = tensor::read_qmat(&read(&input)?)?;
            let ct = enc.encode(&qm)?;
            let back = tensor::deserialize(&tensor::serialize(&ct)?)?;
            let out = tensor::decode_tensor(&back, qm.prune_mask())?;
            if !out.care_bits_equal(&qm) {
                return Err(Failure::Mismatch(
                    "decoded care bits differ from the input".into(),
                ));
            }
            let s = compression_stats(&ct);
            println!(
                "ok: {} words, {} patches, ratio {:.4}",
                s.words, s.total_patches, s.ratio
            );
            Ok(())
        }
        Command::Stats { input } => {
            let ct = tensor::deserialize(&read(&input)?)?;
            print_json(&compression_stats(&ct))
        }
        Command::SynthSweep(args) => {
            let rows = sweep(&args)?;
            let mut buf = Vec::new();
            match args.format {
                Format::Csv => synth::write_csv(&rows, &mut buf)?,
                Format::Json => synth::write_json(&rows, &mut buf)?,
            }
            match &args.output {
                Some(path) => write(path, &buf),
                None => io::stdout()
                    .write_all(&buf)
                    .map_err(|e| Failure::Io(e.to_string())),
            }
        }
        Command::Simulate(args) => {
            let report = match (&args.trace, &args.csr_rows) {
                (Some(path), _) => {
                    let cfg = SimConfig {
                        n_decoders: args.n_decoders,
                        n_fifo: args.n_fifo,
                        fifo_depth: args.fifo_depth,
                        trace: read_json(path)?,
                    };
                    simulate_decode(&cfg)?
                }
                (None, Some(path)) => {
                    simulate_csr(&read_json::<Vec<usize>>(path)?, args.n_decoders)?
                }
                (None, None) => return Err(Failure::Usage("need --trace or --csr-rows".into())),
            };
            print_json(&report)
        }
        Command::GenSynthetic {
            m,
            n,
            n_q,
            s,
            seed,
            output,
        } => {
            let qm = synth::gen_quantized(m, n, n_q, s, seed.resolve())?;
            write(&output, &tensor::write_qmat(&qm)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("xqz: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("xqz: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
