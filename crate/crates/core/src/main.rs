use clap::{Parser, Subcommand};
use rankone_ps::verify::{emit_report, run_suite, ReportFormat, RunOptions, SuiteConfig, SuiteName, SymbolName};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rankone-ps", version, about = "Verification harness for Patterson-Sullivan and Wigner pairings on H2 and H3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite from a TOML config.
    Verify {
        config: PathBuf,
        /// Override the suite named in the config.
        #[arg(long)]
        suite: Option<SuiteName>,
        #[arg(long, default_value = "json")]
        format: ReportFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (defaults to the config, then all cores).
        #[arg(long, env = "RANKONE_PS_THREADS")]
        parallelism: Option<usize>,
        /// Omit wall-clock metadata so identical runs give identical reports.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// List the available suites.
    ListSuites,
    /// List the built-in symbol families.
    ListSymbols,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListSuites => {
            for s in SuiteName::ALL {
                println!("{:<24}{}", s.as_str(), s.description());
            }
            ExitCode::SUCCESS
        }
        Command::ListSymbols => {
            for s in SymbolName::ALL {
                println!("{:<14}{}", s.as_str(), s.description());
            }
            ExitCode::SUCCESS
        }
        Command::Verify { config, suite, format, out, parallelism, no_timestamp } => {
            let run = || -> rankone_ps::Result<bool> {
                let mut cfg = SuiteConfig::load(&config)?;
                if let Some(s) = suite {
                    cfg.suite = s;
                }
                let report = run_suite(&cfg, &RunOptions { parallelism, timestamp: !no_timestamp })?;
                emit_report(&report, format, out.as_deref())?;
                Ok(report.passed())
            };
            match run() {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(1),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
