//! `simcli` — sweeps, analyses, and the oracle suite from the command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 verification failure.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use entsim_core::analysis::{gamma_sign_correlation, revival_metrics, robustness_ordering};
use entsim_core::states::InitialStateKind;
use entsim_core::sweep::{read_csv, run_sweep, write_csv, EmitSet, Preset, SweepConfig};
use entsim_core::verify;

#[derive(Parser)]
#[command(
    name = "simcli",
    version,
    about = "Entanglement decay of qubits in independent lossy structured reservoirs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a time sweep and write it as CSV.
    Sweep(SweepArgs),
    /// Run a derived analysis on an existing sweep CSV.
    Analyze(AnalyzeArgs),
    /// Run the oracle suite; exits 2 on any tolerance breach.
    Verify,
}

#[derive(Args)]
struct SweepArgs {
    /// Regime preset (fig1..fig6) fixing lambda, delta and t_max.
    #[arg(long)]
    preset: Option<String>,
    /// Initial state: w4, w5, w6, ghz4, dicke4, cluster4.
    #[arg(long)]
    state: Option<String>,
    /// Spectral width lambda in units of gamma0.
    #[arg(long)]
    lambda: Option<f64>,
    /// Detuning delta in units of gamma0.
    #[arg(long)]
    delta: Option<f64>,
    /// Sweep extent in units of 1/gamma0.
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of grid points (default 2000).
    #[arg(long)]
    points: Option<usize>,
    /// Comma-separated column groups: nu,gamma,Ea,Er,per_bipartition.
    #[arg(long)]
    emit: Option<String>,
    /// Output CSV path.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Flat key = value configuration file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Sweep CSV to analyze.
    #[arg(long)]
    input: PathBuf,
    /// Which check to run: revival, gamma-sign, or robustness.
    #[arg(long)]
    check: String,
    /// Preset whose reservoir parameters the robustness check reruns on the
    /// input's time grid (default fig1).
    #[arg(long)]
    preset: Option<String>,
}

/// The sweep configuration file: flat keys mirroring the sweep fields.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    state: Option<String>,
    lambda_over_gamma0: Option<f64>,
    delta_over_gamma0: Option<f64>,
    t_max: Option<f64>,
    n_points: Option<usize>,
    output_path: Option<PathBuf>,
    emit: Option<String>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Verify => return cmd_verify(),
    };
    match result {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), String> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let preset: Option<Preset> = match &args.preset {
        Some(name) => Some(name.parse().map_err(|e| format!("{e}"))?),
        None => None,
    };

    let state_name = args
        .state
        .or(file.state)
        .ok_or("no initial state given (use --state or the config file)")?;
    let state: InitialStateKind = state_name.parse().map_err(|e| format!("{e}"))?;

    let mut config = SweepConfig {
        state,
        lambda_over_gamma0: file.lambda_over_gamma0.unwrap_or(1.0),
        delta_over_gamma0: file.delta_over_gamma0.unwrap_or(0.0),
        t_max: file.t_max.unwrap_or(10.0),
        n_points: file.n_points.unwrap_or(SweepConfig::DEFAULT_N_POINTS),
        emit: match &file.emit {
            Some(s) => EmitSet::parse(s).map_err(|e| format!("{e}"))?,
            None => EmitSet::default(),
        },
    };
    if let Some(p) = preset {
        config.lambda_over_gamma0 = p.lambda();
        config.delta_over_gamma0 = p.delta();
        config.t_max = p.t_max();
    }
    if let Some(l) = args.lambda {
        config.lambda_over_gamma0 = l;
    }
    if let Some(d) = args.delta {
        config.delta_over_gamma0 = d;
    }
    if let Some(t) = args.tmax {
        config.t_max = t;
    }
    if let Some(n) = args.points {
        config.n_points = n;
    }
    if let Some(e) = &args.emit {
        config.emit = EmitSet::parse(e).map_err(|e| format!("{e}"))?;
    }

    let output = args
        .output
        .or(file.output_path)
        .ok_or("no output path given (use -o or output_path in the config file)")?;

    let out = run_sweep(&config).map_err(|e| format!("{e}"))?;
    let file = File::create(&output)
        .map_err(|e| format!("cannot write {}: {e}", output.display()))?;
    let mut writer = BufWriter::new(file);
    write_csv(&out, &mut writer).map_err(|e| format!("{e}"))?;
    println!("wrote {} rows to {}", out.rows.len(), output.display());
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), String> {
    let file = File::open(&args.input)
        .map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let sweep = read_csv(BufReader::new(file)).map_err(|e| format!("{e}"))?;

    match args.check.as_str() {
        "revival" => {
            let revivals = revival_metrics(&sweep.rows);
            if revivals.is_empty() {
                println!("no revivals detected");
            }
            for (i, r) in revivals.iter().enumerate() {
                println!(
                    "revival {}: t_min = {:.6}, t_peak = {:.6}, amplitude = {:.6}",
                    i + 1,
                    r.t_min,
                    r.t_peak,
                    r.amplitude
                );
            }
        }
        "gamma-sign" => match gamma_sign_correlation(&sweep.rows).map_err(|e| format!("{e}"))? {
            Some(frac) => println!("gamma-sign correlation: {frac:.6}"),
            None => println!("gamma-sign correlation: undefined (no qualifying points)"),
        },
        "robustness" => {
            let preset: Preset = match &args.preset {
                Some(name) => name.parse().map_err(|e| format!("{e}"))?,
                None => Preset::Fig1,
            };
            let grid: Vec<f64> = sweep.rows.iter().map(|r| r.t).collect();
            let report = robustness_ordering(preset, &grid).map_err(|e| format!("{e}"))?;
            if report.tied {
                println!("ordering tied: all normalized curves coincide on this grid");
            }
            for (rank, entry) in report.ranking.iter().enumerate() {
                let half = entry
                    .half_life
                    .map(|t| format!("{t:.4}"))
                    .unwrap_or_else(|| "never".to_string());
                println!(
                    "{}. {}  E_a(0) = {:.6}  normalized-half-life = {}  final = {:.3e}",
                    rank + 1,
                    entry.state,
                    entry.e_a0,
                    half,
                    entry.final_normalized
                );
            }
            println!(
                "cluster dominates at every grid point past t=0: {}",
                report.cluster_dominates
            );
        }
        other => return Err(format!("unknown check '{other}' (revival, gamma-sign, robustness)")),
    }
    Ok(())
}

fn cmd_verify() -> i32 {
    let outcomes = match verify::run_all() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let mut failed = 0usize;
    for o in &outcomes {
        let tag = if o.passed { "ok  " } else { "FAIL" };
        println!("{tag} {} — {}", o.name, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", outcomes.len());
        2
    } else {
        println!("all {} checks passed", outcomes.len());
        0
    }
}
