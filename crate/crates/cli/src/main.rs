use std::path::PathBuf;
use std::process::ExitCode;

use anyonic_cli::{exit, load_config, parse_phi_range, run, sweep, verify, verify_exit_code, CliError, Format};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "anyonic", version, about = "Information dynamics of anyonic-PT symmetric two-level systems")]
struct Cli {
    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or config file and write CSV, SVG and report files.
    Run {
        /// Preset name or path to a config file.
        config: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Sweep φ over start:stop:count on top of a preset or config file.
    Sweep {
        config: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the acceptance checks and print a pass/fail table.
    Verify {
        /// Run only this check group.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
    Both,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Svg => Format::Svg,
            FormatArg::Both => Format::Both,
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Run { config, out, format } => {
            let config = load_config(&config)?;
            for path in run(&config, &out, format.map(Format::from))? {
                println!("wrote {}", path.display());
            }
            Ok(exit::SUCCESS)
        }
        Command::Sweep { config, phi, out } => {
            let config = load_config(&config)?;
            let phis = parse_phi_range(&phi)?;
            let (path, table) = sweep(&config, &phis, &out)?;
            println!("wrote {} ({} rows)", path.display(), table.rows.len());
            Ok(exit::SUCCESS)
        }
        Command::Verify { only } => {
            let (outcomes, table) = verify(only.as_deref())?;
            print!("{table}");
            Ok(verify_exit_code(&outcomes))
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
