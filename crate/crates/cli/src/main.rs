mod commands;
mod outcome;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::outcome::{CliError, Output};

#[derive(Parser, Debug)]
#[command(
    name = "slicegb",
    version,
    about = "Gröbner bases, hyperplane sections, parametric families and Hough transforms over Q"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Term ordering: lex, deglex, degrevlex, degrev:<var> or elim:<vars>.
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Give up after this many seconds (exit code 3).
    #[arg(long, global = true, value_name = "SECONDS")]
    pub timeout: Option<f64>,
    /// Worker threads for per-slice computations.
    #[arg(long, global = true, value_name = "K")]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Eliminate,
    Slice,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Gröbner basis of an ideal.
    Gb { file: PathBuf },
    /// Normal form of a polynomial modulo an ideal.
    Nf {
        file: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Elimination ideal.
    Eliminate {
        file: PathBuf,
        /// Comma-separated variables to eliminate.
        #[arg(long)]
        vars: String,
    },
    /// Krull dimension of the quotient ring.
    Dim { file: PathBuf },
    /// Colon ideal I : f.
    Colon {
        file: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Section of the reduced Gröbner basis by a hyperplane.
    Section {
        file: PathBuf,
        /// The linear form, e.g. `z - w + 1`.
        #[arg(long)]
        form: String,
        /// Use the homogeneous construction (the form must be homogeneous).
        #[arg(long)]
        homogeneous: bool,
    },
    /// Certifies that a basis of an ideal is a Gröbner basis via its section.
    Lift {
        file: PathBuf,
        #[arg(long)]
        form: String,
        /// Candidate basis (an ideal file over the same ring).
        #[arg(long)]
        basis: PathBuf,
    },
    /// Common lifting of the generators of a slice file, position by position.
    CommonLift { file: PathBuf },
    /// Gröbner basis reconstructed from parallel slices.
    Reconstruct {
        file: PathBuf,
        /// Ideal file used to certify membership of the lifted elements.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Implicit equation of a parametrized hypersurface.
    Implicitize {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "slice")]
        mode: Mode,
        /// Pivot coordinate for slice mode (default: the first one).
        #[arg(long)]
        pivot: Option<String>,
        /// Initial number of slices.
        #[arg(long)]
        slices: Option<usize>,
    },
    /// Reduced Gröbner basis of a family over the parameter field.
    FamilyGb { file: PathBuf },
    /// Numerators, denominators and coefficients of the family basis.
    Ncc { file: PathBuf },
    /// Coordinates, and optionally the implicit ideal, of the σ-scheme.
    SigmaScheme {
        file: PathBuf,
        #[arg(long)]
        implicit: bool,
    },
    /// Whether the parameters of a family are independent.
    Independent { file: PathBuf },
    /// Section of a family by a hyperplane in the coordinate variables.
    FamilySection {
        file: PathBuf,
        #[arg(long)]
        form: String,
    },
    /// Hough transform of a point, or its generic dimension.
    Hough {
        file: PathBuf,
        #[arg(long, required_unless_present = "generic", conflicts_with = "generic")]
        point: Option<String>,
        #[arg(long)]
        generic: bool,
    },
    /// Family member through all the given points.
    Detect {
        file: PathBuf,
        #[arg(long = "point", required = true)]
        points: Vec<String>,
    },
    /// Surface rebuilt from template curves detected on parallel slices.
    ReconstructSurface {
        file: PathBuf,
        #[arg(long)]
        check: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    if let Some(k) = cli.global.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| CliError::Input(format!("--jobs: {e}")))?;
    }
    let Some(seconds) = cli.global.timeout else {
        return commands::dispatch(&cli.global, &cli.command);
    };
    if !(seconds.is_finite() && seconds > 0.0) {
        return Err(CliError::Input("--timeout must be a positive number of seconds".into()));
    }
    let (tx, rx) = mpsc::channel();
    let global = cli.global.clone();
    std::thread::spawn(move || {
        let _ = tx.send(commands::dispatch(&global, &cli.command));
    });
    match rx.recv_timeout(Duration::from_secs_f64(seconds)) {
        Ok(result) => result,
        Err(mpsc::RecvTimeoutError::Timeout) => Err(CliError::Limit(format!("timed out after {seconds} s"))),
        Err(mpsc::RecvTimeoutError::Disconnected) => Err(CliError::Internal),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let json = cli.global.json;
    let result =
        std::panic::catch_unwind(std::panic::AssertUnwindSafe(move || run(cli))).unwrap_or(Err(CliError::Internal));
    match result {
        Ok(out) => {
            print!("{}", out.render(json));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
