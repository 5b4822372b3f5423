use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gcr_core::io::{
    exit_code_for, parse_request_as, run, Command, EXIT_INTERNAL, EXIT_INVALID_INPUT,
};

#[derive(Parser)]
#[command(name = "gcr", version, about = "Complete reducibility and instability of matrix tuples")]
struct Cli {
    #[command(subcommand)]
    command: Job,

    /// JSON job document (defaults to stdin)
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Worker threads for enumerations; output does not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Enumeration cap, overriding the document's budget
    #[arg(long, global = true)]
    budget: Option<u128>,
}

#[derive(Subcommand, Clone, Copy)]
enum Job {
    /// Complete reducibility verdict with decomposition and witness
    Check,
    /// Limit of the conjugation action along a cocharacter
    Limit,
    /// Optimal destabilising cocharacter of a weight set
    Optimize,
    /// Associated graded tuple of the composition series
    Semisimplify,
    /// Iterated fixed-point flag of a unipotent tuple
    BorelTits,
    /// Heuristic optimal witness of non-complete-reducibility
    Witness,
    /// Dimension of the conjugation orbit
    OrbitDim,
    /// Bundled examples and oracle cross-checks
    Selftest,
}

impl Job {
    fn command(self) -> Command {
        match self {
            Job::Check => Command::Check,
            Job::Limit => Command::Limit,
            Job::Optimize => Command::Optimize,
            Job::Semisimplify => Command::Semisimplify,
            Job::BorelTits => Command::BorelTits,
            Job::Witness => Command::Witness,
            Job::OrbitDim => Command::OrbitDim,
            Job::Selftest => Command::Selftest,
        }
    }
}

fn read_input(cli: &Cli) -> std::io::Result<String> {
    match &cli.input {
        Some(path) => std::fs::read_to_string(path),
        None if matches!(cli.command, Job::Selftest) => Ok("{}".into()),
        None => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return exit(EXIT_INTERNAL);
        }
    }
    let text = match read_input(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: reading input: {e}");
            return exit(EXIT_INVALID_INPUT);
        }
    };
    let mut request = match parse_request_as(&text, cli.command.command()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit(EXIT_INVALID_INPUT);
        }
    };
    if let Some(b) = cli.budget {
        request.budget = Some(b);
    }
    match run(&request) {
        Ok(report) => {
            println!("{}", report.render());
            if report.exit_code != 0 {
                eprintln!("{} finished with exit code {}", request.command, report.exit_code);
            }
            exit(report.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(exit_code_for(&e))
        }
    }
}
