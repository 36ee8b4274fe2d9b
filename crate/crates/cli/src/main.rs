//! `pearlchain` — secret-key-rate tables for satellite and fibre
//! entanglement-swapping repeater chains.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pearlchain_cli::config::{load_config, OutputFormat, RunConfig};
use pearlchain_cli::output::{
    flyby_rows, sweep_rows, write_flyby_csv, write_flyby_json, write_sweep_csv, write_sweep_json,
};
use pearlchain_cli::presets::{find_preset, CITY_PAIRS};
use pearlchain_core::selftest::{oracle_check, ORACLE_TOL};

#[derive(Parser)]
#[command(
    name = "pearlchain",
    version,
    about = "BB84 key rates of satellite- and fibre-based repeater chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Configuration file (TOML); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// City-pair preset name; replaces the distance grid with its distance.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by the configuration file.
    Sweep(RunArgs),
    /// Run the standard scheme comparison grid (L = 1000..20000 km,
    /// n = 0..3, all schemes), honouring hardware overrides from the
    /// configuration file.
    Compare(RunArgs),
    /// Tabulate fly-by durations against distance, nesting level, and
    /// orbit altitude.
    Flyby(RunArgs),
    /// List the built-in city-pair presets.
    Presets {
        /// Output format: csv or json.
        #[arg(long)]
        format: Option<String>,
    },
    /// Compare the swapping algebra against the density-matrix reference
    /// implementation on seeded random states.
    OracleCheck {
        /// RNG seed for the random input states.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random input pairs.
        #[arg(long, default_value_t = 1000)]
        trials: u32,
    },
}

enum CliError {
    Validation(String),
    Runtime(String),
    OracleFailure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::OracleFailure(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Runtime(m) | CliError::OracleFailure(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are not errors.
            if err.use_stderr() {
                err.print().ok();
                return ExitCode::from(1);
            }
            err.print().ok();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => run_table(args, Mode::Sweep),
        Command::Compare(args) => run_table(args, Mode::Compare),
        Command::Flyby(args) => run_table(args, Mode::Flyby),
        Command::Presets { format } => run_presets(format),
        Command::OracleCheck { seed, trials } => run_oracle(seed, trials),
    }
}

enum Mode {
    Sweep,
    Compare,
    Flyby,
}

fn load_run_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => load_config(path).map_err(CliError::Validation)?,
        None => RunConfig::default(),
    };
    if let Some(name) = &args.preset {
        let preset = find_preset(name).ok_or_else(|| {
            CliError::Validation(format!(
                "unknown preset `{name}`; run `pearlchain presets` for the list"
            ))
        })?;
        config.distances_km = vec![preset.distance_km];
    }
    if let Some(format) = &args.format {
        config.format = format
            .parse()
            .map_err(|e| CliError::Validation(format!("--format: {e}")))?;
    }
    if args.output.is_some() {
        config.output_path = args.output.clone();
    }
    Ok(config)
}

fn run_table(args: RunArgs, mode: Mode) -> Result<(), CliError> {
    let mut config = load_run_config(&args)?;
    if let Mode::Compare = mode {
        // Force the standard comparison grid; keep hardware and presets.
        let standard = RunConfig::default();
        if args.preset.is_none() {
            config.distances_km = standard.distances_km;
        }
        config.schemes = standard.schemes;
        config.nesting_levels = standard.nesting_levels;
    }
    let mut buffer = Vec::new();
    match mode {
        Mode::Flyby => {
            let rows = flyby_rows(&config).map_err(CliError::Validation)?;
            match config.format {
                OutputFormat::Csv => write_flyby_csv(&rows, &mut buffer),
                OutputFormat::Json => write_flyby_json(&rows, &mut buffer),
            }
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
        Mode::Sweep | Mode::Compare => {
            let rows = sweep_rows(&config).map_err(CliError::Validation)?;
            match config.format {
                OutputFormat::Csv => write_sweep_csv(&rows, &mut buffer),
                OutputFormat::Json => write_sweep_json(&rows, &mut buffer),
            }
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
    }
    write_out(config.output_path.as_deref(), &buffer)
}

fn write_out(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, bytes).map_err(|e| {
            CliError::Runtime(format!("cannot write output `{}`: {e}", path.display()))
        }),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}"))),
    }
}

fn run_presets(format: Option<String>) -> Result<(), CliError> {
    let format: OutputFormat = match format {
        Some(f) => f
            .parse()
            .map_err(|e| CliError::Validation(format!("--format: {e}")))?,
        None => OutputFormat::Csv,
    };
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str("name,distance_km,ocean\n");
            for pair in &CITY_PAIRS {
                out.push_str(&format!(
                    "\"{}\",{},{}\n",
                    pair.name, pair.distance_km, pair.ocean
                ));
            }
        }
        OutputFormat::Json => {
            out.push_str(
                &serde_json::to_string_pretty(&CITY_PAIRS.to_vec()).expect("serializable"),
            );
            out.push('\n');
        }
    }
    print!("{out}");
    Ok(())
}

fn run_oracle(seed: u64, trials: u32) -> Result<(), CliError> {
    let report = oracle_check(seed, trials).map_err(|e| CliError::Validation(e.to_string()))?;
    println!(
        "oracle check: seed {} trials {} max deviation {:.3e} (tolerance {:.0e})",
        report.seed, report.trials, report.max_deviation, ORACLE_TOL
    );
    if report.passed() {
        println!("oracle check: PASS");
        Ok(())
    } else {
        println!("oracle check: FAIL");
        Err(CliError::OracleFailure(format!(
            "swap deviates from the density-matrix reference by {:.3e}",
            report.max_deviation
        )))
    }
}
