//! `ifsx`: attractors, Hausdorff distances, polygonal approximation studies,
//! witness constructions, separation searches and SVG plots.
//!
//! Exit codes: 0 success, 1 bad input or usage, 2 computation failed (no
//! convergence, infeasible construction), 3 a check did not hold (audit
//! failure, separation violated, study target missed).

mod config;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ifsx_core::geometry::{format_real, hausdorff_distance, parse_csv, to_csv};
use ifsx_core::hutchinson::attractor;
use ifsx_core::polygonal::approximation_study;
use ifsx_core::verify::{probe_system, separation_search_with, SearchOptions, SearchSummary};
use ifsx_core::witnesses::{build_interval_witness, build_ladder, build_prop_p};
use ifsx_core::{
    AttractorOptions, ContractiveMap, Error, FunctionSystem, MapKind, WitnessExport, WitnessKind,
};
use serde::Serialize;

use config::{CommonFlags, RunConfig, DEFAULT_TARGET};

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn compute(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

/// Library errors caused by the input map to 1, the rest to 2.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. }
            | Error::EmptySet
            | Error::ZeroDimension
            | Error::OutOfDomain { .. }
            | Error::NotOneDimensional(_)
            | Error::InvalidParameter(_)
            | Error::InvalidMap(_)
            | Error::NotContractive { .. }
            | Error::Parse(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

#[derive(Debug, Parser)]
#[command(name = "ifsx", version, about = "Attractors of (weak) iterated function systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Weak,
    Contraction,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WitnessArg {
    PropP,
    Ladder,
    Intervals,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Attractor of the system in the config; writes a point CSV.
    Attractor {
        #[command(flatten)]
        common: CommonFlags,
        /// Override the declared kind of every map.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Hausdorff distance between two point CSV files.
    Hausdorff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Polygonal approximation study of a one-dimensional system.
    Approx {
        #[command(flatten)]
        common: CommonFlags,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_name = "LIST", value_delimiter = ',')]
        k_schedule: Option<Vec<usize>>,
    },
    /// Build and audit a witness set; writes its JSON export.
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessArg,
        /// Ladder size.
        #[arg(long)]
        n: Option<usize>,
        /// Truncation depth for prop-p and intervals.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Random search for n-map systems close to a ladder witness.
    Search {
        /// Ladder witness export.
        witness: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write a `trial,distance` CSV.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
    /// SVG plot of a one- or two-dimensional point CSV.
    Render {
        csv: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = render::DEFAULT_SIZE)]
        size: u32,
    },
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_cloud(path: &Path) -> Result<ifsx_core::CompactSet, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_csv(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn build_system(cfg: &RunConfig, kind: Option<MapKind>) -> Result<FunctionSystem, Failure> {
    if cfg.maps.is_empty() {
        return Err(Failure::input("config lists no maps"));
    }
    let maps = cfg
        .maps
        .iter()
        .map(|m| {
            let f = m.build()?;
            match kind {
                Some(k) => f.with_kind(k),
                None => Ok(f),
            }
        })
        .collect::<Result<Vec<ContractiveMap>, Error>>()?;
    Ok(FunctionSystem::new(maps)?)
}

fn parse_kind(name: &str) -> Result<MapKind, Failure> {
    match name {
        "weak" => Ok(MapKind::Weak),
        "contraction" => Ok(MapKind::Contraction),
        other => Err(Failure::input(format!("unknown map kind {other:?}"))),
    }
}

fn cmd_attractor(common: &CommonFlags, kind: Option<KindArg>) -> CmdResult {
    let cfg = common.resolve()?;
    let kind = match kind {
        Some(KindArg::Weak) => Some(MapKind::Weak),
        Some(KindArg::Contraction) => Some(MapKind::Contraction),
        None => cfg.kind.as_deref().map(parse_kind).transpose()?,
    };
    let sys = build_system(&cfg, kind)?;
    let opts = cfg.attractor_options()?;
    let r = attractor(&sys, &opts)?;
    write_output(common.out.as_deref(), &to_csv(&r.attractor))?;
    eprintln!(
        "points={} iterations={} residual={} converged={}",
        r.attractor.len(),
        r.iterations,
        format_real(r.residual),
        r.converged
    );
    Ok(if r.converged { 0 } else { 2 })
}

fn coords(p: &ifsx_core::Point) -> String {
    p.coords().iter().map(|&c| format_real(c)).collect::<Vec<_>>().join(",")
}

fn cmd_hausdorff(a: &Path, b: &Path, out: Option<&Path>) -> CmdResult {
    let (a, b) = (read_cloud(a)?, read_cloud(b)?);
    let r = hausdorff_distance(&a, &b)?;
    let text = format!(
        "distance={}\ndirected_ab={}\ndirected_ba={}\nwitness_ab={};{}\nwitness_ba={};{}\n",
        format_real(r.distance),
        format_real(r.directed_ab),
        format_real(r.directed_ba),
        coords(&r.witness_ab.0),
        coords(&r.witness_ab.1),
        coords(&r.witness_ba.0),
        coords(&r.witness_ba.1),
    );
    write_output(out, &text)?;
    Ok(0)
}

fn cmd_approx(common: &CommonFlags, k_schedule: Option<Vec<usize>>) -> CmdResult {
    let cfg = common.resolve()?;
    let sys = build_system(&cfg, None)?;
    let opts = cfg.attractor_options()?;
    let schedule = k_schedule
        .or(cfg.k_schedule.clone())
        .unwrap_or_else(|| (0..=8).map(|e| 1usize << e).collect());
    let target = cfg.target.unwrap_or(DEFAULT_TARGET);
    let study = approximation_study(&sys, &schedule, &opts)?;
    write_output(common.out.as_deref(), &study.to_csv())?;
    let last = study.final_distance().unwrap_or(0.0);
    eprintln!(
        "entries={} final={} target={}",
        study.entries.len(),
        format_real(last),
        format_real(target)
    );
    Ok(if last <= target { 0 } else { 3 })
}

fn cmd_witness(kind: WitnessArg, n: Option<usize>, depth: Option<usize>, out: Option<&Path>) -> CmdResult {
    let built = match kind {
        WitnessArg::PropP => build_prop_p(depth.unwrap_or(3)).and_then(|w| {
            let meta = format!(
                "counts={}",
                w.counts.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            );
            Ok((w.export()?, meta))
        }),
        WitnessArg::Ladder => build_ladder(n.unwrap_or(2)).and_then(|w| {
            let meta = format!("n={} k={} delta={}", w.n, w.k, format_real(w.delta_f64()));
            Ok((w.export()?, meta))
        }),
        WitnessArg::Intervals => build_interval_witness(depth.unwrap_or(4)).and_then(|w| {
            let meta = format!(
                "k_seq={}",
                w.k_seq.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            );
            Ok((w.export()?, meta))
        }),
    };
    let (export, meta) = built.map_err(|e| Failure::compute(e.to_string()))?;
    write_output(out, &export.to_json())?;
    eprintln!("{meta}");
    for e in &export.audit {
        eprintln!(
            "{} {} margin={}",
            if e.pass { "pass" } else { "FAIL" },
            e.id,
            format_real(e.margin)
        );
    }
    Ok(if export.all_pass() { 0 } else { 3 })
}

#[derive(Serialize)]
struct SearchOutput {
    #[serde(flatten)]
    summary: SearchSummary,
    /// Distance from the witness's own system to its set.
    inversion_distance: f64,
}

fn cmd_search(
    witness: &Path,
    common: &CommonFlags,
    n: Option<usize>,
    trials: Option<usize>,
    seed: Option<u64>,
    trace: Option<&Path>,
) -> CmdResult {
    let cfg = common.resolve()?;
    let text = std::fs::read_to_string(witness)
        .map_err(|e| Failure::input(format!("{}: {e}", witness.display())))?;
    let export = WitnessExport::from_json(&text)?;
    if export.kind != WitnessKind::Ladder {
        return Err(Failure::input("search needs a ladder witness"));
    }
    let delta = export
        .delta()?
        .ok_or_else(|| Failure::input("witness carries no delta"))?;
    let f = export.point_set()?;
    let own = export.system()?;
    let n = n.or(cfg.n).unwrap_or(export.size);
    let trials = trials.or(cfg.trials).unwrap_or(10_000);
    let seed = seed.or(cfg.seed).unwrap_or(42);

    let mut opts = SearchOptions {
        trace: trace.is_some(),
        ..SearchOptions::default()
    };
    opts.attractor = AttractorOptions::new(
        cfg.tol.unwrap_or(opts.attractor.tol),
        cfg.max_iter.unwrap_or(opts.attractor.max_iter),
        cfg.resolution.unwrap_or(opts.attractor.resolution),
    )?;
    opts.min_resolution = opts.min_resolution.min(opts.attractor.resolution);
    let report = separation_search_with(&f, delta, n, trials, seed, &opts)?;
    let inversion = probe_system(&f, &own, &cfg.attractor_options()?)?;

    let output = SearchOutput {
        summary: report.summary(),
        inversion_distance: inversion.distance,
    };
    let mut json = serde_json::to_string_pretty(&output).expect("search output serializes");
    json.push('\n');
    write_output(common.out.as_deref(), &json)?;
    if let Some(path) = trace {
        write_output(Some(path), &report.trace_csv())?;
    }
    eprintln!(
        "best={} delta={} violated={} skipped={}",
        format_real(report.best_distance),
        format_real(delta),
        report.violated,
        report.skipped
    );
    Ok(if report.violated { 3 } else { 0 })
}

fn cmd_render(csv: &Path, out: Option<&Path>, size: u32) -> CmdResult {
    let set = read_cloud(csv)?;
    let svg = render::render_svg(&set, size).map_err(Failure::input)?;
    write_output(out, &svg)?;
    Ok(0)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("IFSX_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::input(format!("IFSX_THREADS must be a non-negative integer, got {v:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::input(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    match cli.command {
        Command::Attractor { common, kind } => cmd_attractor(&common, kind),
        Command::Hausdorff { a, b, out } => cmd_hausdorff(&a, &b, out.as_deref()),
        Command::Approx { common, k_schedule } => cmd_approx(&common, k_schedule),
        Command::Witness { kind, n, depth, out } => cmd_witness(kind, n, depth, out.as_deref()),
        Command::Search {
            witness,
            common,
            n,
            trials,
            seed,
            trace,
        } => cmd_search(&witness, &common, n, trials, seed, trace.as_deref()),
        Command::Render { csv, out, size } => cmd_render(&csv, out.as_deref(), size),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
