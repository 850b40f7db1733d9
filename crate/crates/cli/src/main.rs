//! Command-line front end: scenario runs, recorded-log replays, gain
//! design, and parallel seed sweeps. All heavy lifting lives in the
//! library crate; this binary parses arguments, moves bytes, and maps
//! errors onto process exit codes (1 config, 2 contract, 3 I/O).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::{fs, thread};

use clap::{Args, Parser, Subcommand};

use gyrovec::gain::design_switching_parameters;
use gyrovec::harness::record::{emit_csv, write_csv};
use gyrovec::harness::replay::{emit_replay_csv, replay_log, ReplayConfig};
use gyrovec::harness::{averaged_error, run_scenario, ObserverKind, ScenarioConfig};
use gyrovec::sensing::weight_matrix;
use gyrovec::vision::parse_tag_log;
use gyrovec::{Error, Result};

#[derive(Parser)]
#[command(name = "gyrovec", version, about = "Hybrid attitude observer harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and emit the per-step CSV record.
    Run(RunArgs),
    /// Drive an observer from a recorded gyro + tag log.
    Replay(ReplayArgs),
    /// Print the switching parameter set designed for a config.
    DesignParams(DesignParamsArgs),
    /// Run seeded scenarios in parallel and emit a summary table.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Named scenario, test1 through test6.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// Scenario file in the key=value format.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the scenario's observer (agas, gas, cf).
    #[arg(long)]
    observer: Option<ObserverKind>,
    /// Override the scenario's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Log file with gyro and tag records.
    #[arg(long)]
    log: PathBuf,
    /// Observer to drive (agas, gas, cf).
    #[arg(long, default_value = "agas")]
    observer: ObserverKind,
    /// Which logged corner plays each canonical role, for detectors
    /// that order corners differently. A wrong map fits the data
    /// perfectly at a wrong attitude, so this cannot be inferred from
    /// the log; it must describe the detector.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    corner_map: Vec<usize>,
    /// Speed/robustness trade-off for the switching observer, in (0,1).
    #[arg(long)]
    gamma_fraction: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DesignParamsArgs {
    /// Scenario file naming the vectors, weights, and switching knobs.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated preset names, e.g. test1,test2.
    #[arg(long, value_delimiter = ',', required = true)]
    presets: Vec<String>,
    /// Observer for every run (agas, gas, cf).
    #[arg(long, default_value = "agas")]
    observer: ObserverKind,
    /// Seeds as comma-separated values or inclusive a..b ranges,
    /// e.g. 1,2,5..8.
    #[arg(long, required = true)]
    seeds: String,
    /// Start of the averaging window for the summary error column.
    #[arg(long, default_value_t = 2.0)]
    tail: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_only = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if usage_only {
                ExitCode::SUCCESS
            } else {
                // Bad flags are config errors, same as bad file values.
                ExitCode::from(1)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => run(args),
        Command::Replay(args) => replay(args),
        Command::DesignParams(args) => design_params(args),
        Command::Sweep(args) => sweep(args),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_scenario(preset: Option<&str>, config: Option<&Path>) -> Result<ScenarioConfig> {
    match (preset, config) {
        (Some(name), None) => ScenarioConfig::preset(name),
        (None, Some(path)) => ScenarioConfig::from_kv(&read_file(path)?),
        _ => unreachable!("clap enforces exactly one scenario source"),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let mut config = load_scenario(args.preset.as_deref(), args.config.as_deref())?;
    if let Some(observer) = args.observer {
        config.observer = observer;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let record = run_scenario(&config)?;
    match args.out {
        Some(path) => write_csv(&record, &path),
        None => write_output(&emit_csv(&record), None),
    }
}

fn replay(args: ReplayArgs) -> Result<()> {
    let log = parse_tag_log(&read_file(&args.log)?)?;
    let mut config = ReplayConfig::defaults(args.observer);
    if args.corner_map.len() != 4 {
        return Err(Error::InvalidParameter(format!(
            "corner_map needs 4 entries, got {}",
            args.corner_map.len()
        )));
    }
    config.corner_map = [
        args.corner_map[0],
        args.corner_map[1],
        args.corner_map[2],
        args.corner_map[3],
    ];
    if let Some(fraction) = args.gamma_fraction {
        config.gamma_fraction = fraction;
    }
    let record = replay_log(&log, &config)?;
    if record.skipped_tags > 0 {
        eprintln!("skipped {} unusable tag detections", record.skipped_tags);
    }
    write_output(&emit_replay_csv(&record), args.out.as_deref())
}

fn design_params(args: DesignParamsArgs) -> Result<()> {
    let config = ScenarioConfig::from_kv(&read_file(&args.config)?)?;
    let analysis = weight_matrix(&config.observation_set()?)?;
    let params = design_switching_parameters(
        &analysis,
        &config.switch_angles,
        config.k_theta,
        config.gamma_fraction,
        config.delta_fraction,
    )?;
    write_output(&params.to_kv(), None)
}

/// Expands `1,2,5..8` into `[1, 2, 5, 6, 7, 8]`.
fn parse_seeds(list: &str) -> Result<Vec<u64>> {
    let parse = |token: &str| -> Result<u64> {
        token.trim().parse().map_err(|_| {
            Error::InvalidParameter(format!("seed '{token}' is not an unsigned integer"))
        })
    };
    let mut seeds = Vec::new();
    for part in list.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (parse(a)?, parse(b)?);
            if b < a {
                return Err(Error::InvalidParameter(format!(
                    "seed range {a}..{b} runs backwards"
                )));
            }
            seeds.extend(a..=b);
        } else {
            seeds.push(parse(part)?);
        }
    }
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("no seeds given".into()));
    }
    Ok(seeds)
}

fn summarize(preset: &str, seed: u64, observer: ObserverKind, tail: f64) -> Result<(f64, f64, u64)> {
    let mut config = ScenarioConfig::preset(preset)?;
    config.observer = observer;
    config.seed = seed;
    if !(tail >= 0.0 && tail < config.duration) {
        return Err(Error::InvalidParameter(format!(
            "tail {tail} must lie in [0, {})",
            config.duration
        )));
    }
    let record = run_scenario(&config)?;
    let last = record.rows.last().expect("a run always records rows");
    Ok((
        averaged_error(&record, tail),
        last.attitude_error_deg,
        last.jumps,
    ))
}

/// Runs the preset x seed grid on a worker pool. Workers claim jobs
/// from a shared counter and write into per-job slots, so the output
/// order is the deterministic (preset, seed) enumeration no matter how
/// the threads interleave.
fn sweep(args: SweepArgs) -> Result<()> {
    let seeds = parse_seeds(&args.seeds)?;
    let mut jobs: Vec<(&str, u64)> = Vec::new();
    for preset in &args.presets {
        ScenarioConfig::preset(preset)?;
        for &seed in &seeds {
            jobs.push((preset, seed));
        }
    }
    let results: Vec<Mutex<Option<Result<(f64, f64, u64)>>>> =
        jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(jobs.len());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(preset, seed)) = jobs.get(i) else {
                    break;
                };
                let outcome = summarize(preset, seed, args.observer, args.tail);
                *results[i].lock().unwrap() = Some(outcome);
            });
        }
    });

    let mut out = String::from("preset,observer,seed,avg_err_deg,final_err_deg,jumps\n");
    for (i, cell) in results.into_iter().enumerate() {
        let (preset, seed) = jobs[i];
        let (avg, fin, jumps) = cell
            .into_inner()
            .expect("no worker panicked")
            .expect("every job was claimed")?;
        out.push_str(&format!(
            "{preset},{},{seed},{avg},{fin},{jumps}\n",
            args.observer
        ));
    }
    write_output(&out, args.out.as_deref())
}
