//! Thin command-line front end; all logic lives in `logpencil::runner`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use logpencil::loci::ScanQuantity;
use logpencil::runner;

#[derive(Parser)]
#[command(
    name = "logpencil",
    version,
    about = "Logarithmic pencils of flat connections: flatness, monodromy, periodicity, jumping loci"
)]
struct Cli {
    /// Random seed (the PENCIL_SEED environment variable overrides this).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on worker threads for parallel scans.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantityArg {
    FixedDim,
    CommutantDim,
}

#[derive(Subcommand)]
enum Command {
    /// Run both flatness checks on a pencil spec.
    Flatness {
        spec: PathBuf,
        /// Random points for the curvature oracle.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compute monodromy generators, signature and fixed-space dimension.
    Monodromy {
        spec: PathBuf,
        /// Parameter values "a+bi,..." (one per parameter) or "random".
        #[arg(long, default_value = "random", allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = runner::DEFAULT_RTOL)]
        rtol: f64,
        #[arg(long, default_value_t = 2)]
        word_len: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare monodromy signatures at s and s + shift (or scan random
    /// integer shifts when --shift is omitted).
    Periodicity {
        spec: PathBuf,
        #[arg(long, default_value = "random", allow_hyphen_values = true)]
        s: String,
        /// Integer shift vector "1,0,0".
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        #[arg(long, default_value_t = runner::DEFAULT_SIG_TOL)]
        tol: f64,
        #[arg(long, default_value_t = runner::DEFAULT_RTOL)]
        rtol: f64,
        #[arg(long, default_value_t = 2)]
        word_len: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Verify a shift operator exactly (built-in or from a file).
    ShiftVerify {
        spec: PathBuf,
        /// "builtin" or a path to an operator JSON file.
        #[arg(long, default_value = "builtin")]
        operator: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Scan a parameter segment for jumps of an invariant dimension.
    Scan {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 51)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = QuantityArg::FixedDim)]
        quantity: QuantityArg,
        /// Fit integer-normal hyperplanes to the jump points.
        #[arg(long)]
        fit: bool,
        #[arg(long, default_value_t = 3)]
        fit_amax: i64,
        #[arg(long, default_value_t = 1e-6)]
        fit_tol: f64,
        /// Rescan around jumps at ten times the resolution.
        #[arg(long)]
        refine: bool,
        #[arg(long, default_value_t = runner::DEFAULT_RTOL)]
        rtol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    runner::set_jobs(cli.jobs);
    let out = match cli.command {
        Command::Flatness {
            spec,
            trials,
            report,
        } => runner::cmd_flatness(&spec, trials, cli.seed, report.as_deref()),
        Command::Monodromy {
            spec,
            s,
            rtol,
            word_len,
            report,
        } => runner::cmd_monodromy(&spec, &s, rtol, cli.seed, word_len, report.as_deref()),
        Command::Periodicity {
            spec,
            s,
            shift,
            trials,
            tol,
            rtol,
            word_len,
            report,
        } => runner::cmd_periodicity(
            &spec,
            &s,
            shift.as_deref(),
            trials,
            tol,
            rtol,
            cli.seed,
            word_len,
            report.as_deref(),
        ),
        Command::ShiftVerify {
            spec,
            operator,
            report,
        } => runner::cmd_shift_verify(&spec, &operator, report.as_deref()),
        Command::Scan {
            spec,
            from,
            to,
            samples,
            quantity,
            fit,
            fit_amax,
            fit_tol,
            refine,
            rtol,
            report,
            csv,
        } => {
            let q = match quantity {
                QuantityArg::FixedDim => ScanQuantity::FixedDim,
                QuantityArg::CommutantDim => ScanQuantity::CommutantDim,
            };
            runner::cmd_scan(
                &spec,
                &from,
                &to,
                samples,
                q,
                fit,
                fit_amax,
                fit_tol,
                refine,
                rtol,
                cli.seed,
                report.as_deref(),
                csv.as_deref(),
            )
        }
    };
    println!("{}", out.summary);
    ExitCode::from(out.exit as u8)
}
