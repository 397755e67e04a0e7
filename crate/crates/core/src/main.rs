use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use swapsim::cli::{self, Command, RunSpec};

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Exact,
    Sample,
    Chsh,
    DelayScan,
    BsaAudit,
    DoublepairAudit,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Exact => Command::Exact,
            Cmd::Sample => Command::Sample,
            Cmd::Chsh => Command::Chsh,
            Cmd::DelayScan => Command::DelayScan,
            Cmd::BsaAudit => Command::BsaAudit,
            Cmd::DoublepairAudit => Command::DoublepairAudit,
        }
    }
}

/// Entanglement-swapping simulator with a linear-optics Bell-state analyzer.
#[derive(Parser)]
#[command(name = "swapsim", version)]
struct Args {
    command: Cmd,
    /// Run config in `key = value` form.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Override a config key, e.g. `--set seed=7`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let overrides = match args
        .set
        .iter()
        .map(|s| cli::parse_override(s))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let spec = RunSpec {
        command: args.command.into(),
        config_path: args.config,
        out_path: args.out,
        overrides,
    };
    ExitCode::from(cli::run(&spec) as u8)
}
