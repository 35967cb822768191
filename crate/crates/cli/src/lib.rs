//! The `klein` command line: footprints, varieties, bounds, code tables,
//! oracles and the verification suite, in text, JSON or CSV.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod config;
pub mod schema;

mod commands;
mod suite;

use config::{Format, RunConfig};
use schema::Render;

/// Exit status for a failed verification.
pub const EXIT_VERIFY: i32 = 1;
/// Exit status for bad flags, files or configuration.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "klein", version, about = "Footprint bounds for affine variety codes")]
struct Cli {
    /// Seed for every random choice; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 picks one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// TOML run configuration.
    #[arg(long, global = true, env = "KLEIN_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args)]
struct Source {
    /// Search for case trees instead of reading traces.
    #[arg(long, conflicts_with = "traces")]
    auto: bool,
    /// Directory of `.trace` files, each starting with an `lm` line.
    #[arg(long)]
    traces: Option<PathBuf>,
    /// Search depth for --auto.
    #[arg(long, requires = "auto")]
    depth: Option<usize>,
    /// Node budget per depth for --auto.
    #[arg(long, requires = "auto")]
    nodes: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Gray,
    Sample,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// The footprint of the ideal with monomial weights.
    Footprint,
    /// The rational points.
    Variety,
    /// Weight lower bounds for every leading monomial.
    Bound(Source),
    /// Code parameters from the bounds.
    Table(Source),
    /// Minimum weight over a class by enumeration or sampling.
    Oracle {
        /// Leading monomial of the class.
        #[arg(long)]
        lm: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Samples for --mode sample.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Replays one trace file.
    TraceVerify {
        file: PathBuf,
        /// Class, when the file has no `lm` line.
        #[arg(long)]
        lm: Option<String>,
        /// Concrete instantiations per live leaf.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Runs every invariant check.
    VerifyAll {
        /// Trace directory to check instead of the built-in traces.
        #[arg(long)]
        traces: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    Verify(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

pub(crate) type Outcome = Result<(), Failure>;

pub(crate) struct Ctx {
    pub cfg: RunConfig,
    /// Output is buffered so the work can run inside the thread pool.
    pub out: Vec<u8>,
}

impl Ctx {
    pub fn emit<T: Render>(&mut self, value: &T) -> Outcome {
        match self.cfg.format {
            Format::Text => self.out.write_all(value.text().as_bytes())?,
            Format::Json => {
                let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
                writeln!(self.out, "{s}")?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let csv_err = |e: csv::Error| Failure::Usage(e.to_string());
                w.write_record(value.csv_header()).map_err(csv_err)?;
                for r in value.csv_rows() {
                    w.write_record(r).map_err(csv_err)?;
                }
                let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
                self.out.write_all(&bytes)?;
            }
        }
        Ok(())
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        },
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: --jobs: {e}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx { cfg, out: Vec::new() };
    let result = pool.install(|| dispatch(&mut ctx, cli.cmd));
    if out.write_all(&ctx.out).and_then(|_| out.flush()).is_err() {
        let _ = writeln!(err, "error: cannot write output");
        return EXIT_USAGE;
    }
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Verify(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            EXIT_VERIFY
        }
    }
}

fn dispatch(ctx: &mut Ctx, cmd: Cmd) -> Outcome {
    let setup = ctx.cfg.setup().map_err(Failure::Usage)?;
    match cmd {
        Cmd::Footprint => commands::footprint(ctx, &setup),
        Cmd::Variety => commands::variety(ctx, &setup),
        Cmd::Bound(src) => commands::bound(ctx, &setup, &src),
        Cmd::Table(src) => commands::table(ctx, &setup, &src),
        Cmd::Oracle { lm, mode, samples } => commands::oracle(ctx, &setup, &lm, mode, samples),
        Cmd::TraceVerify { file, lm, samples } => commands::trace_verify(ctx, &setup, &file, lm.as_deref(), samples),
        Cmd::VerifyAll { traces } => suite::verify_all(ctx, &setup, traces.as_deref()),
    }
}
