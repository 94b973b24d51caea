use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dulac::corpus::{corpus_verify, render_summary};
use dulac::problem::parse_problem;
use dulac::report::{render_report, Report};
use dulac::runner::{self, RunOptions};

#[derive(Parser)]
#[command(
    name = "dulac",
    version,
    about = "Exact normal forms, torus actions, and integrability checks for local vector fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normalize the field degree by degree and report the resonant jet
    Normalize(RunArgs),
    /// List the resonant monomials of the linear part
    Resonances(RunArgs),
    /// Split the eigenvalue vector into torus weights and generators
    Toric(RunArgs),
    /// Renormalize the declared semi-invariants and verify the eigenfunction identities
    Walcher(RunArgs),
    /// Check the conservation identities for the declared integrals and commuting fields
    VerifyConservation(RunArgs),
    /// Decide the declared integrability data: commuting brackets, integrals, independence
    CheckDarboux(RunArgs),
    /// Search for polynomial semi-invariants up to a degree bound
    FindSemiInvariants(SearchArgs),
    /// Rerun every corpus entry and compare its pinned reports byte for byte
    CorpusVerify(CorpusArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Problem file to load
    #[arg(
        value_name = "PROBLEM",
        required_unless_present = "corpus",
        conflicts_with = "corpus"
    )]
    problem: Option<PathBuf>,

    /// Truncation degree, at most the degree the file carries
    #[arg(long, value_name = "M")]
    degree: Option<u32>,

    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Run over every problem file under this directory instead of one file
    #[arg(long, value_name = "DIR")]
    corpus: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    run: RunArgs,

    /// Degree bound for the candidate semi-invariants
    #[arg(long, value_name = "K", default_value_t = 2)]
    deg: u32,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus root directory
    #[arg(long, value_name = "DIR")]
    corpus: PathBuf,

    /// Rewrite stale pinned reports in place
    #[arg(long)]
    regenerate: bool,

    /// Write the summary here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(command: Cmd) -> io::Result<ExitCode> {
    match command {
        Cmd::Normalize(args) => engine(runner::Command::Normalize, args, None),
        Cmd::Resonances(args) => engine(runner::Command::Resonances, args, None),
        Cmd::Toric(args) => engine(runner::Command::Toric, args, None),
        Cmd::Walcher(args) => engine(runner::Command::Walcher, args, None),
        Cmd::VerifyConservation(args) => {
            engine(runner::Command::VerifyConservation, args, None)
        }
        Cmd::CheckDarboux(args) => engine(runner::Command::CheckDarboux, args, None),
        Cmd::FindSemiInvariants(args) => {
            engine(runner::Command::FindSemiInvariants, args.run, Some(args.deg))
        }
        Cmd::CorpusVerify(args) => corpus_mode(args),
    }
}

fn engine(
    command: runner::Command,
    args: RunArgs,
    search_degree: Option<u32>,
) -> io::Result<ExitCode> {
    let options = RunOptions {
        degree: args.degree,
        search_degree,
    };
    if let Some(dir) = &args.corpus {
        return batch(command, dir, &options, args.out.as_deref());
    }
    let path = args.problem.expect("clap guarantees a problem file");
    let report = report_for(command, &path, &options);
    deliver(&render_report(&report), args.out.as_deref())?;
    Ok(ExitCode::from(report.exit_code()))
}

fn report_for(command: runner::Command, path: &Path, options: &RunOptions) -> Report {
    match parse_problem(path) {
        Ok(problem) => runner::run(command, &problem, options),
        Err(err) => Report::input_error(command.name(), 0, &err.to_string()),
    }
}

/// Runs one command across a directory of problems and emits a JSON array
/// of named reports. The exit code is the worst one seen.
fn batch(
    command: runner::Command,
    dir: &Path,
    options: &RunOptions,
    out: Option<&Path>,
) -> io::Result<ExitCode> {
    let mut rendered = String::from("[");
    let mut worst = 0u8;
    for (index, (label, path)) in problem_files(dir)?.iter().enumerate() {
        let report = report_for(command, path, options);
        worst = worst.max(report.exit_code());
        if index > 0 {
            rendered.push(',');
        }
        rendered.push_str("\n  {\n    \"problem\": ");
        rendered.push_str(&serde_json::to_string(label)?);
        rendered.push_str(",\n    \"report\": ");
        let body = serde_json::to_string_pretty(&report)?;
        rendered.push_str(&body.replace('\n', "\n    "));
        rendered.push_str("\n  }");
    }
    rendered.push_str("\n]\n");
    deliver(&rendered, out)?;
    Ok(ExitCode::from(worst))
}

/// Collects `*.json` files directly under `dir` plus `*/problem.json` one
/// level down, so both flat directories and corpus layouts batch cleanly.
fn problem_files(dir: &Path) -> io::Result<Vec<(String, PathBuf)>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        let name = entry.file_name().to_string_lossy().into_owned();
        if path.is_file() && path.extension().and_then(|e| e.to_str()) == Some("json") {
            files.push((name, path));
        } else if path.is_dir() && path.join("problem.json").is_file() {
            files.push((name, path.join("problem.json")));
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("{} holds no problem files", dir.display()),
        ));
    }
    Ok(files)
}

fn corpus_mode(args: CorpusArgs) -> io::Result<ExitCode> {
    let summary = corpus_verify(&args.corpus, args.regenerate)?;
    deliver(&render_summary(&summary), args.out.as_deref())?;
    Ok(ExitCode::from(u8::from(!summary.all_matched())))
}

fn deliver(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}
