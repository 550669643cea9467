use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use photostat_cli::commands::{
    parse_spec, run_classify, run_compare, run_dist, run_entropy, run_sample, Criterion, Settings,
};
use photostat_cli::error::{CliError, CliResult};
use photostat_cli::figures::{figure_help, run_figure};
use photostat_cli::report::Format;

const SPEC_HELP: &str = "State specs:
  coherent(MEAN)            thermal(MEAN)            number(N)
  squeezed(R=ALPHA,r=R)     squeezed_target(mean=M,var=V[,branch=strong|weak])
  mix(WEIGHT;SPEC;SPEC)     weight applies to the first component";

#[derive(Parser, Debug)]
#[command(name = "photostat", version, about = "Photon-number statistics through majorization")]
#[command(after_help = SPEC_HELP)]
struct Cli {
    /// Tail mass left out when truncating a distribution.
    #[arg(long, global = true, default_value_t = photostat::DEFAULT_EPS)]
    eps: f64,
    /// Tolerance for partial-sum comparisons.
    #[arg(long, global = true, default_value_t = photostat::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Probabilities, moments and ordered partial sums of one state.
    Dist { state: String },
    /// Majorization verdict, crossings and confidence intervals for two states.
    Compare { a: String, b: String },
    /// Nonclassicality verdict of one state.
    Classify {
        state: String,
        #[arg(long, value_enum, default_value_t = Criterion::Poisson)]
        criterion: Criterion,
    },
    /// Shannon, Rényi and Tsallis entropies.
    Entropy {
        state: String,
        /// Entropy orders, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.5,2,3")]
        q: Vec<f64>,
        /// Report logarithmic entropies in bits.
        #[arg(long)]
        bits: bool,
    },
    /// Data behind one of the reference figures (2-5, 7-11).
    #[command(after_help = figure_help())]
    Figure { id: u32 },
    /// Monte Carlo beam-splitter counts.
    Sample {
        state: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
}

fn run(cli: &Cli) -> CliResult<()> {
    if !(cli.eps > 0.0 && cli.eps < 1.0) {
        return Err(CliError::Usage(format!("--eps must lie in (0, 1), got {}", cli.eps)));
    }
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be finite and non-negative, got {}", cli.tol)));
    }
    let settings = Settings { eps: cli.eps, tol: cli.tol };
    let report = match &cli.command {
        Command::Dist { state } => run_dist(&parse_spec(state)?, settings)?,
        Command::Compare { a, b } => run_compare(&parse_spec(a)?, &parse_spec(b)?, settings)?,
        Command::Classify { state, criterion } => run_classify(&parse_spec(state)?, *criterion, settings)?,
        Command::Entropy { state, q, bits } => run_entropy(&parse_spec(state)?, q, *bits, settings)?,
        Command::Figure { id } => run_figure(*id, settings)?,
        Command::Sample { state, seed, n } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            run_sample(&parse_spec(state)?, *n, *seed, settings)?
        }
    };
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report.write(cli.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed pipe (`photostat ... | head`) is not a failure.
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("photostat: {}", e.render());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
