use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use toric_mirror::cli::config::parse_lambda_mode;
use toric_mirror::cli::{execute, parse_config, Overrides, SectionKind};
use toric_mirror::equivariant::LambdaMode;

#[derive(Parser)]
#[command(name = "toricmirror", version, about = "Exact hypergeometric series and mirror maps for toric data")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the sections of a job file.
    Run {
        file: PathBuf,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        zcap: Option<u32>,
        /// `symbolic` or `seed:<int>`.
        #[arg(long, value_parser = lambda_mode)]
        lambda_mode: Option<LambdaMode>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Run only these sections.
        #[arg(long = "section", value_parser = section, num_args = 1..)]
        sections: Vec<SectionKind>,
    },
}

fn lambda_mode(s: &str) -> Result<LambdaMode, String> {
    parse_lambda_mode(s).ok_or_else(|| format!("expected `symbolic` or `seed:<int>`, got `{s}`"))
}

fn section(s: &str) -> Result<SectionKind, String> {
    SectionKind::parse(s).ok_or_else(|| {
        let names: Vec<&str> = SectionKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown section `{s}`; expected one of {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let Cmd::Run { file, bound, zcap, lambda_mode, format, sections } = Cli::parse().command;
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides { bound, zcap, lambda_mode, sections };
    let report = match parse_config(&text).and_then(|cfg| execute(&cfg.with_overrides(&overrides))) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Structured => print!("{}", report.to_structured()),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
