use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qproc::config::{read_json, ExperimentFile};
use qproc::experiments::{reproduce, run_sample, run_verify, sweep, unexplained, VerifyOptions, TABLES};
use qproc::records::{csv_bytes, write_output, REPRO_HEADER, RESULT_HEADER};
use qproc::{preset, presets, ExperimentConfig, HarnessError, Result, SweepConfig};

/// Simulate probabilistic programmable quantum processors and conditional loops.
#[derive(Parser)]
#[command(name = "qproc", version)]
struct Cli {
    /// Directory for output files whose path is not given with --out.
    #[arg(long, global = true, env = "QPROC_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Output file; `-` writes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suites; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Recompute one table of quoted probabilities as CSV.
    Reproduce {
        /// One of u1, vmc3, bz, qutrit, b0, qid2, qidN, limits.
        table: String,
        /// Largest deviation accepted for unflagged rows.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sweep a parameter grid described by a JSON file; writes CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Monte Carlo trials per grid point (0: exact values only).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run seeded loop trajectories; writes traces and a summary as JSON.
    Sample {
        /// Preset id (see `qproc list`).
        #[arg(long, conflicts_with = "config")]
        experiment: Option<String>,
        /// JSON experiment file; its `id` selects the preset it overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        rounds: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// List preset experiments and reproducible tables.
    List,
}

fn out_path(out_dir: &Path, out: OutArg, default_name: &str) -> PathBuf {
    out.out.unwrap_or_else(|| out_dir.join(default_name))
}

fn announce(path: &Path) {
    if path != Path::new("-") {
        eprintln!("wrote {}", path.display());
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Verify { tol, seed, inject_fault } => {
            let report = run_verify(&VerifyOptions { tol, seed, inject_fault });
            print!("{}", report.render());
            if !report.passed() {
                return Err(HarnessError::Verification(format!("{} check(s) failed", report.failures().count())));
            }
        }
        Command::Reproduce { table, tol, out } => {
            let rows = reproduce(&table)?;
            let path = out_path(&cli.out_dir, out, &format!("reproduce_{table}.csv"));
            write_output(&path, &csv_bytes(&REPRO_HEADER, &rows)?)?;
            announce(&path);
            let bad = unexplained(&rows, tol);
            if !bad.is_empty() {
                let names: Vec<_> = bad.iter().map(|r| format!("{} [{}]", r.quantity, r.params)).collect();
                return Err(HarnessError::Verification(format!("unexplained deviations: {}", names.join("; "))));
            }
        }
        Command::Sweep { config, trials, seed, out } => {
            let mut cfg: SweepConfig = read_json(&config)?;
            cfg.trials = trials.unwrap_or(cfg.trials);
            cfg.seed = seed.unwrap_or(cfg.seed);
            let rows = sweep(&cfg)?;
            let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
            let path = out_path(&cli.out_dir, out, &format!("sweep_{stem}.csv"));
            write_output(&path, &csv_bytes(&RESULT_HEADER, &rows)?)?;
            announce(&path);
        }
        Command::Sample { experiment, config, seed, trials, rounds, out } => {
            let mut cfg = match (experiment, config) {
                (Some(id), None) => {
                    preset(&id).ok_or_else(|| HarnessError::Usage(format!("unknown experiment id '{id}' (see `qproc list`)")))?
                }
                (None, Some(path)) => ExperimentConfig::from_file(read_json::<ExperimentFile>(&path)?)?,
                _ => return Err(HarnessError::Usage("sample needs --experiment <id> or --config <json>".into())),
            };
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.trials = trials.unwrap_or(cfg.trials);
            cfg.rounds = rounds.unwrap_or(cfg.rounds);
            let report = run_sample(&cfg)?;
            let path = out_path(&cli.out_dir, out, &format!("sample_{}.json", cfg.id));
            write_output(&path, &report.to_json_bytes()?)?;
            announce(&path);
            let s = &report.summary;
            eprintln!(
                "{}: {}/{} succeeded, empirical {:.6}, exact {:.6} ± {:.2e} (3σ {})",
                cfg.id,
                s.successes,
                s.trials,
                s.empirical,
                s.exact,
                3.0 * s.sigma,
                if s.within_3sigma { "ok" } else { "MISSED" }
            );
        }
        Command::List => {
            println!("experiments (qproc sample --experiment <id>):");
            for (id, description, _, rounds) in presets() {
                println!("  {id:<12} rounds={rounds:<2} {description}");
            }
            println!("tables (qproc reproduce <table>):");
            println!("  {}", TABLES.join(", "));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
