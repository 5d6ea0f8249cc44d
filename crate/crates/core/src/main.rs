use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tame_iwasawa::cli::{parse_lambda_table, run_text, Command, Outcome, EXIT_CONFIG};

#[derive(Parser)]
#[command(version, about = "Z_p-ranks of chi-quotients of tame Iwasawa modules")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-character ranks and their total.
    Rank {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        assume_greenberg: bool,
        #[arg(long)]
        lambda_table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residue-module verification grid.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_levels)]
        levels: Option<(u32, u32)>,
    },
    /// Stickelberger lambda for odd characters.
    Lambda {
        #[arg(long)]
        config: PathBuf,
    },
    /// Character inventory.
    Chars {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_levels(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected n0,n1")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome {
        code: EXIT_CONFIG,
        report: None,
        diagnostic: Some(format!("cannot read {}: {e}", path.display())),
    })
}

fn execute(cmd: Cmd) -> Result<(Outcome, Option<PathBuf>), Outcome> {
    Ok(match cmd {
        Cmd::Rank { config, assume_greenberg, lambda_table, out } => {
            let table = match lambda_table {
                Some(path) => Some(parse_lambda_table(&read(&path)?).map_err(|e| Outcome {
                    code: EXIT_CONFIG,
                    report: None,
                    diagnostic: Some(e.to_string()),
                })?),
                None => None,
            };
            (run_text(&read(&config)?, &Command::Rank { assume_greenberg, lambda_table: table }), out)
        }
        Cmd::Oracle { config, levels } => (run_text(&read(&config)?, &Command::Oracle { levels }), None),
        Cmd::Lambda { config } => (run_text(&read(&config)?, &Command::Lambda), None),
        Cmd::Chars { config } => (run_text(&read(&config)?, &Command::Chars), None),
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (outcome, out) = match execute(args.cmd) {
        Ok(x) => x,
        Err(o) => (o, None),
    };
    if let Some(report) = &outcome.report {
        match &out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, report) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            None => print!("{report}"),
        }
    }
    if let Some(d) = &outcome.diagnostic {
        eprintln!("error: {d}");
    }
    ExitCode::from(outcome.code as u8)
}
