use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "psmetro", version, about = "Postselected quantum metrology toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Threshold for pass/fail reporting.
    #[arg(long, global = true, default_value_t = 1e-9, allow_negative_numbers = true)]
    pub tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One point of the three-level protocol.
    ThreeLevel(commands::ThreeLevelArgs),
    /// The three-level protocol over an (x, alpha) grid.
    ThreeLevelSweep(commands::SweepArgs),
    /// Monte-Carlo check of the efficiency bound on random instances.
    BoundCheck(commands::BoundCheckArgs),
    /// KD distribution, Wigner formula and modification terms.
    Kd(commands::KdArgs),
    /// Weak-value amplification demos.
    Wva(commands::WvaArgs),
    /// Monte-Carlo check of the KD / Wigner identity.
    IdentityCheck(commands::IdentityCheckArgs),
}

fn emit(outcome: &Outcome, common: &Common, stdout: &mut dyn Write, stderr: &mut dyn Write) -> io::Result<()> {
    let report = &outcome.report;
    let mut file;
    let sink: &mut dyn Write = match &common.out {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => stdout,
    };
    match common.format {
        Format::Csv => {
            report.write_csv(&mut *sink)?;
            report.write_summary(stderr)?;
        }
        Format::Json => report.write_json(&mut *sink)?,
    }
    sink.flush()
}

/// Parses `args` (program name first), runs the command and returns the exit code.
fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::try_from(e.exit_code()).unwrap_or(2);
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let common = &cli.common;
    let result = match &cli.command {
        Command::ThreeLevel(a) => commands::three_level(a, common),
        Command::ThreeLevelSweep(a) => commands::three_level_sweep(a, common),
        Command::BoundCheck(a) => commands::bound_check(a, common),
        Command::Kd(a) => commands::kd(a, common),
        Command::Wva(a) => commands::wva(a, common),
        Command::IdentityCheck(a) => commands::identity_check(a, common),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome, common, stdout, stderr) {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            u8::from(!outcome.ok)
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(CliError::Numeric(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn main() -> ExitCode {
    let mut stdout = BufWriter::new(io::stdout().lock());
    let code = run(std::env::args_os(), &mut stdout, &mut io::stderr().lock());
    if stdout.flush().is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}

#[cfg(test)]
mod tests;
