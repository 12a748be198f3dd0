use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use padepde::frontend::{run_pipeline, Command, FrontendError, ProblemFile, RunOptions};
use padepde::phi4corpus::{run_corpus, CorpusOptions, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "padepde", version, about = "Closed-form PDE solutions from multivariate Padé approximants")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Taylor expansion in the rho variables
    Expand(PipelineArgs),
    /// [L/M] approximant and its collapse at xi = 1
    Pade(PipelineArgs),
    /// Polynomial conditions for the ansatz to be exact
    Conditions(PipelineArgs),
    /// Exactness verdict under the chosen rules
    Verify(PipelineArgs),
    /// Run the bundled scenario catalog
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long = "M")]
    m: Option<usize>,
    /// Extra constraint names, comma separated
    #[arg(long, value_delimiter = ',')]
    rules: Option<Vec<String>>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CorpusArgs {
    /// Substring of the scenario names to run
    #[arg(long)]
    filter: Option<String>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// RNG seed for the numeric oracle
    #[arg(long)]
    seed: Option<u64>,
    /// Skip the numeric oracle
    #[arg(long)]
    symbolic_only: bool,
}

fn write_json(path: &Option<PathBuf>, json: &str) -> Result<(), FrontendError> {
    if let Some(p) = path {
        std::fs::write(p, json).map_err(|e| FrontendError::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn pipeline(command: Command, a: PipelineArgs) -> Result<(), FrontendError> {
    let text = std::fs::read_to_string(&a.problem)
        .map_err(|e| FrontendError::Usage(format!("{}: {e}", a.problem.display())))?;
    let pf = ProblemFile::parse(&text)?;
    // `--rules ""` selects no extra rules
    let rules = a.rules.map(|r| r.into_iter().filter(|n| !n.trim().is_empty()).collect());
    let opts = RunOptions { order: a.order, l: a.l, m: a.m, rules };
    let report = run_pipeline(&pf, command, &opts)?;
    print!("{}", report.to_text());
    write_json(&a.json, &report.to_json())
}

fn corpus(a: CorpusArgs) -> Result<bool, FrontendError> {
    let opts = CorpusOptions {
        filter: a.filter,
        seed: a.seed.unwrap_or(DEFAULT_SEED),
        numeric: !a.symbolic_only,
        ..CorpusOptions::default()
    };
    let report = run_corpus(&opts);
    print!("{}", report.to_text());
    write_json(&a.json, &report.to_json())?;
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Expand(a) => pipeline(Command::Expand, a).map(|_| true),
        Cmd::Pade(a) => pipeline(Command::Pade, a).map(|_| true),
        Cmd::Conditions(a) => pipeline(Command::Conditions, a).map(|_| true),
        Cmd::Verify(a) => pipeline(Command::Verify, a).map(|_| true),
        Cmd::Corpus(a) => corpus(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
