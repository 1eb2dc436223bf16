use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fuzzyquad::scenario::{self, ExitStatus, Scenario};

/// Output directory override; `--out` wins over it.
const OUT_DIR_ENV: &str = "FUZZYQUAD_OUT_DIR";

#[derive(Parser)]
#[command(version, about = "Numerical stability checks for quadratic functional equations in fuzzy normed spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a TOML file or a builtin name
    Run {
        config: String,
        /// Output directory (default: ./out/<scenario name>)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List builtin scenarios
    List,
    /// Print a builtin scenario's TOML
    Describe { name: String },
}

fn load(config: &str) -> fuzzyquad::error::Result<Scenario> {
    let path = Path::new(config);
    if path.is_file() {
        Scenario::from_path(path)
    } else if scenario::describe(config).is_some() {
        scenario::load_builtin(config)
    } else {
        Err(fuzzyquad::error::Error::Config(format!(
            "{config:?} is neither a config file nor a builtin scenario (see `list`)"
        )))
    }
}

fn run(config: &str, out: Option<PathBuf>, seed: Option<u64>, jobs: Option<usize>) -> ExitCode {
    let mut s = match load(config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(ExitStatus::ConfigError.code());
        }
    };
    if let Some(seed) = seed {
        s = s.with_seed(seed);
    }
    let out = out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| Path::new("out").join(s.name()));
    let result = match scenario::run_with_jobs(&s, jobs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(ExitStatus::ConfigError.code());
        }
    };
    if let Err(e) = scenario::emit_report(&result, &out) {
        eprintln!("error: {e}");
        return ExitCode::from(ExitStatus::ConfigError.code());
    }
    for r in &result.reports {
        let sm = r.summary();
        let margin = sm.min_margin.map_or("-".to_string(), |m| format!("{m:.3e}"));
        println!(
            "{:<28} rows {:>6}  fail {:>5}  nonconverged {:>3}  min margin {margin}",
            r.check, sm.row_count, sm.fail_count, sm.nonconverged_count
        );
    }
    if let Some(a) = &result.alpha {
        println!(
            "{:<28} declared {:.12}  estimated {:.12}  {}",
            "alpha",
            a.declared,
            a.estimate.alpha,
            if a.passed { "ok" } else { "MISMATCH" }
        );
    }
    let status = result.status();
    println!("{}: {:?} -> {}", result.scenario(), status, out.display());
    ExitCode::from(status.code())
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            seed,
            jobs,
        } => run(&config, out, seed, jobs),
        Command::List => {
            for (name, description) in scenario::list_builtins() {
                println!("{name:<26} {description}");
            }
            ExitCode::SUCCESS
        }
        Command::Describe { name } => match scenario::describe(&name) {
            Some(src) => {
                print!("{src}");
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: unknown builtin scenario {name:?}");
                ExitCode::from(ExitStatus::ConfigError.code())
            }
        },
    }
}
