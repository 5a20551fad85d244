use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use little_core::catalog::clean_up;
use little_core::index::dump_polygons;
use little_core::syntax::{parse, print};
use little_engine::batch::{self, Fixture};
use little_engine::service;
use little_engine::Session;

/// Structured editing engine for Little programs.
#[derive(Parser)]
#[command(name = "engine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the protocol over HTTP on localhost.
    Serve {
        #[arg(long, default_value_t = 7878)]
        port: u16,
    },
    /// Speak the protocol on stdin and stdout, one JSON object per line.
    Pipe,
    /// Run fixture scripts and report each step.
    Batch {
        #[arg(required = true)]
        fixtures: Vec<PathBuf>,
        /// Also print the response transcript of each fixture.
        #[arg(long)]
        transcript: bool,
    },
    /// Reformat a program with Clean Up and print it.
    Fmt { file: PathBuf },
    /// Print the hover polygons of a program.
    DumpPolygons { file: PathBuf },
}

fn read_program(file: &PathBuf) -> Result<little_core::syntax::Program, String> {
    let src = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse(&src).map_err(|e| format!("{}:{e}", file.display()))
}

fn pipe() -> io::Result<()> {
    let mut session = Session::new();
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    for line in stdin.lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        writeln!(out, "{}", session.handle_line(&line))?;
        out.flush()?;
    }
    Ok(())
}

fn run_batch(fixtures: &[PathBuf], transcript: bool) -> ExitCode {
    let mut failed = 0;
    for path in fixtures {
        let name = path.display();
        let fixture = match Fixture::read(path) {
            Ok(f) => f,
            Err(e) => {
                println!("{name}: FAIL ({e})");
                failed += 1;
                continue;
            }
        };
        let report = batch::run(&fixture);
        for line in &report.lines {
            println!("{name}: {line}");
        }
        if transcript {
            print!("{}", report.transcript);
        }
        if !report.passed() {
            failed += 1;
        }
    }
    println!("{} of {} fixtures passed", fixtures.len() - failed, fixtures.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ENGINE_LOG")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
            rt.block_on(service::serve(port)).map_err(|e| e.to_string())
        }
        Command::Pipe => pipe().map_err(|e| e.to_string()),
        Command::Batch { fixtures, transcript } => return run_batch(&fixtures, transcript),
        Command::Fmt { file } => read_program(&file).map(|p| print!("{}", print(&clean_up(&p)))),
        Command::DumpPolygons { file } => read_program(&file).map(|p| print!("{}", dump_polygons(&p))),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("engine: {e}");
            ExitCode::FAILURE
        }
    }
}
