use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermsym::{EigenOrdering, Tolerances};
use hermsym_cli::{
    analyze_potential, demo_2x2, random_suite, verify_matrix, CliError, PotentialProblem, RunOptions, RunReport,
};

#[derive(Parser)]
#[command(
    name = "hermsym",
    version,
    about = "Generalized P, T, PT, C, CPT for Hermitian Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Verification tolerance (absolute; scaled by max(1, ‖H‖) for commutators).
    #[arg(long, global = true, default_value_t = hermsym::tolerances::VERIFICATION)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Render a table instead of JSON on stdout.
    #[arg(long, global = true)]
    pretty: bool,
    #[arg(long, global = true, value_enum, default_value_t = Ordering::Ascending)]
    ordering: Ordering,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ordering {
    Ascending,
    Paper,
}

#[derive(Subcommand)]
enum Command {
    /// The 2x2 illustration H = [[a, b + ic], [b - ic, a]].
    Demo {
        #[arg(allow_negative_numbers = true)]
        a: f64,
        #[arg(allow_negative_numbers = true)]
        b: f64,
        #[arg(allow_negative_numbers = true)]
        c: f64,
    },
    /// Full suite on a matrix file {"dim", "re", "im"}.
    Verify { path: PathBuf },
    /// Bound states of a 1D potential.
    Analyze {
        /// Problem file {"potential", "xmin", "xmax", "npoints", "mass", "num_states"}.
        problem: Option<PathBuf>,
        #[arg(long, conflicts_with = "problem")]
        potential: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        xmin: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmax: Option<f64>,
        #[arg(long)]
        npoints: Option<usize>,
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        states: Option<usize>,
    },
    /// Seeded random Hermitian matrices through the full suite.
    Random {
        #[arg(long, short)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn run(cli: Cli) -> Result<RunReport, CliError> {
    let c = &cli.common;
    if !(c.tol.is_finite() && c.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", c.tol)));
    }
    let opts = RunOptions {
        tolerances: Tolerances::default().with_verification(c.tol),
        ordering: match c.ordering {
            Ordering::Ascending => EigenOrdering::Ascending,
            Ordering::Paper => EigenOrdering::PaperTwoByTwo,
        },
    };
    match cli.command {
        Command::Demo { a, b, c } => demo_2x2(a, b, c, &opts),
        Command::Verify { path } => verify_matrix(&path, &opts),
        Command::Analyze {
            problem,
            potential,
            xmin,
            xmax,
            npoints,
            mass,
            states,
        } => {
            let mut p = match (problem, potential) {
                (Some(path), _) => PotentialProblem::from_file(&path)?,
                (None, Some(potential)) => PotentialProblem {
                    potential,
                    ..PotentialProblem::default()
                },
                (None, None) => return Err(CliError::Usage("analyze needs a problem file or --potential".into())),
            };
            p.xmin = xmin.unwrap_or(p.xmin);
            p.xmax = xmax.unwrap_or(p.xmax);
            p.npoints = npoints.unwrap_or(p.npoints);
            p.mass = mass.unwrap_or(p.mass);
            p.num_states = states.unwrap_or(p.num_states);
            analyze_potential(&p, &opts)
        }
        Command::Random { n, trials } => random_suite(n, trials, c.seed, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (pretty, output) = (cli.common.pretty, cli.common.output.clone());
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let json = report.to_json();
    if let Some(path) = &output {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(hermsym_cli::EXIT_INPUT_ERROR as u8);
        }
    }
    let text = if pretty {
        Some(report.render_pretty())
    } else if output.is_none() {
        Some(format!("{json}\n"))
    } else {
        None
    };
    if let Some(text) = text {
        // a closed pipe (e.g. `| head`) is not an error worth reporting
        let _ = std::io::stdout().lock().write_all(text.as_bytes());
    }
    if !report.warnings.is_empty() {
        eprintln!("warning: {} warning(s) attached to the report", report.warnings.len());
    }
    ExitCode::from(report.verdict.exit_code() as u8)
}
