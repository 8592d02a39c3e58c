use std::io::{self, IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use partial_symmetry_cli::{run, Command, Options};

/// Partial bijections, Munn semigroups and clopen-lattice windows over JSON.
#[derive(Parser)]
#[command(name = "psym", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Read the payload from a file instead of stdin.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,

    /// Write the result to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long)]
    depth: Option<usize>,

    /// Window bound for `converge`, horizon for `metric`.
    #[arg(long)]
    window: Option<u64>,

    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    strict_inverse: Option<bool>,

    /// Seed for sampled suites.
    #[arg(long)]
    seed: Option<u64>,
}

fn read_input(path: Option<&PathBuf>) -> io::Result<String> {
    let mut buf = String::new();
    match path {
        Some(p) => buf = std::fs::read_to_string(p)?,
        None if !io::stdin().is_terminal() => {
            io::stdin().read_to_string(&mut buf)?;
        }
        None => {}
    }
    Ok(buf)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let input = match read_input(cli.input.as_ref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("psym: cannot read input: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = Options {
        depth: cli.depth,
        window: cli.window,
        strict_inverse: cli.strict_inverse,
        seed: cli.seed,
    };
    let outcome = run(cli.command, &input, &opts);
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &outcome.output),
        None => io::stdout().lock().write_all(outcome.output.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("psym: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.status as u8)
}
