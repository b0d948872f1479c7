use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use koszul_cli::commands::{parse_mode, parse_window, COMMANDS};
use koszul_cli::document::parse_field;
use koszul_cli::{parse, run, CliError, Options};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Out {
    Json,
    Text,
}

/// Koszul duality computations on a JSON workspace document.
#[derive(Debug, Parser)]
#[command(name = "koszul", version)]
struct Args {
    /// One of: validate, bar, cobar, materialize, adjoint-check, conv, mc-enum,
    /// mc-cat, ihom, ez-check, hh, hh-vs-mc.
    command: String,
    /// Workspace document; `-` reads standard input.
    document: PathBuf,
    /// Entity names the command acts on.
    names: Vec<String>,
    /// q, f2, f3 or f5; overrides the document.
    #[arg(long, value_parser = parse_field)]
    field: Option<koszul_core::exactla::Field>,
    #[arg(long)]
    weight_cap: Option<usize>,
    /// Inclusive degree window, as `a..b`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    degree_window: Option<(i32, i32)>,
    /// `exact` or `stabilize:W`.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<koszul_core::hochschild::Mode>,
    /// Seed for randomized choices (the bar splitting).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    out: Out,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if !COMMANDS.contains(&args.command.as_str()) {
        eprintln!("unknown command '{}'; expected one of {}", args.command, COMMANDS.join(", "));
        return ExitCode::from(3);
    }
    let opts = Options { weight_cap: args.weight_cap, degree_window: args.degree_window, mode: args.mode, seed: args.seed };
    let result = read(&args.document)
        .and_then(|text| parse(&text, args.field))
        .and_then(|ws| run(&args.command, &args.names, &ws, &opts));
    match result {
        Ok(report) => {
            match args.out {
                Out::Json => println!("{}", serde_json::to_string_pretty(&report.json()).unwrap()),
                Out::Text => print!("{}", report.text()),
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            match args.out {
                Out::Json => println!("{}", serde_json::json!({"command": args.command, "status": "error", "error": e.to_string()})),
                Out::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
