use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ballproj::request::{self, Failure, Request, EXIT_INPUT};
use clap::{Parser, Subcommand};

/// Ball projection calculus: projection, directional/graphical derivatives
/// and regular coderivatives, with numerical verification.
///
/// Without a subcommand, reads one JSON request from --input or stdin and
/// writes the JSON response (CSV for sweep2d). Near the sphere the region
/// is decided by --tol and the coderivative jumps between branches; there
/// is no blending.
#[derive(Parser, Debug)]
#[command(name = "ballproj", version)]
struct Cli {
    /// Read the request from FILE instead of stdin.
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Write the response to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Seed for sampled directions and random suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Boundary classification tolerance, relative to max(1, r).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run verification suites: examples, oracle, properties or all.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        /// Override the per-suite instance counts.
        #[arg(long)]
        count: Option<usize>,
    },
}

fn read_request(cli: &Cli) -> Result<Request, Failure> {
    let text = match &cli.input {
        Some(path) => fs::read_to_string(path).map_err(|e| io_failure(path.display(), e))?,
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| io_failure("stdin", e))?;
            buf
        }
    };
    request::parse(&text)
}

fn io_failure(what: impl std::fmt::Display, e: io::Error) -> Failure {
    Failure {
        code: "io_error",
        message: format!("{what}: {e}"),
        exit_code: EXIT_INPUT,
        details: None,
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let mut req = match &cli.command {
        Some(Cmd::Verify { suite, count }) => Request {
            command: Some(request::Command::Verify),
            suite: Some(suite.clone()),
            count: *count,
            ..Request::default()
        },
        None => read_request(cli)?,
    };
    if cli.seed.is_some() {
        req.seed = cli.seed;
    }
    if cli.tol.is_some() {
        req.tau = cli.tol;
    }
    request::run(&req).map(|out| out.render())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match execute(&cli) {
        Ok(text) => (text, 0),
        Err(f) => (format!("{}\n", f.to_json()), f.exit_code),
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("ballproj: cannot write output: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(code as u8)
}
