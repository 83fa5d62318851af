use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pmconv_cli::{
    builtin_scenario, builtin_scenarios, manifest_path, run, CliError, ScenarioConfig,
};
use pmconv_core::seqlab::Mode;

/// Environment variable naming the default output directory.
const OUT_DIR_VAR: &str = "PMCONV_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "pmconv-out";

#[derive(Parser)]
#[command(
    name = "pmconv",
    version,
    about = "Finite-window convergence diagnostics in probabilistic metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its trajectories and manifest.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output directory; defaults to the config's `output`, then $PMCONV_OUT_DIR, then ./pmconv-out.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        seed: Option<u64>,
        /// Exact-mode quadruple budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// List the built-in scenarios.
    List,
    /// Check a config without running any statistic.
    Validate {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Path to a JSON scenario config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Name of a built-in scenario.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

impl Source {
    fn load(&self) -> Result<ScenarioConfig, CliError> {
        match (&self.config, &self.builtin) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                ScenarioConfig::from_json(&text)
            }
            (None, Some(name)) => builtin_scenario(name).ok_or_else(|| CliError::Config {
                path: "builtin".into(),
                message: format!("no built-in scenario `{name}`; see `pmconv list`"),
            }),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

fn out_dir(flag: Option<PathBuf>, config: &ScenarioConfig) -> PathBuf {
    flag.or_else(|| config.output.clone())
        .or_else(|| std::env::var_os(OUT_DIR_VAR).map(PathBuf::from))
        .unwrap_or_else(|| Path::new(DEFAULT_OUT_DIR).to_path_buf())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::List => {
            for (name, about, _) in builtin_scenarios() {
                println!("{name}\t{about}");
            }
        }
        Command::Validate { source } => {
            let cfg = source.load()?;
            cfg.validate()?;
            println!(
                "ok: {} ({} statistics, {} windows)",
                cfg.name,
                cfg.statistics.len(),
                cfg.windows.windows().len()
            );
        }
        Command::Run {
            source,
            out,
            mode,
            seed,
            budget,
        } => {
            let mut cfg = source.load()?;
            if let Some(mode) = mode {
                cfg.mode = match mode {
                    ModeArg::Exact => Mode::Exact,
                    ModeArg::Sampled => Mode::Sampled,
                };
            }
            if seed.is_some() {
                cfg.seed = seed;
            }
            if let Some(budget) = budget {
                cfg.budget = budget;
            }
            let dir = out_dir(out, &cfg);
            let manifest = run(&cfg, &dir)?;
            for s in &manifest.statistics {
                println!("{}\t{} rows\t{:.1} ms", s.csv, s.rows, s.runtime_ms);
            }
            if let Some(cc) = &manifest.cross_check {
                println!(
                    "cross-check: {} comparisons, breach = {}",
                    cc.records.len(),
                    cc.breach
                );
            }
            println!("{}", manifest_path(&dir, &manifest.scenario).display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
