//! The `nhg` command-line front end.
//!
//! Every subcommand reads JSON inputs, runs one analysis and writes a JSON or
//! CSV report either to stdout or atomically to `--out`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::agreement::{build_context, coalition_report, f_t_two_support, index_sets, CoalitionReport, Mode};
use crate::coalition::Coalition;
use crate::error::Error;
use crate::game::{find_core_partition, HedonicGame};
use crate::noise::NoiseSpec;
use crate::pac::{empirical_blocking_rate, learn_partition, Backend, Sample};
use crate::partition::Partition;
use crate::regimes::{
    curve_points, grid_minimum_2d, intersect_regions, safety_value_1d, superlevel_region_1d,
    superlevel_region_2d, Region1D, DEFAULT_RESOLUTION_2D,
};
use crate::sampling::{sample_coalitions, SamplingSpec};
use crate::two_agent::{branches, enumerate_cases, g, regime_1d_two_agent, PredictionCurve, TwoAgentGame};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("cannot write output: {0}")]
    Write(std::io::Error),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for a missing game value, 4 for an
    /// enumeration over the size limit, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Config(_) => 2,
            CliError::Write(_) => 1,
            CliError::Lib(e) => match e {
                Error::MissingValue { .. } => 3,
                Error::EnumerationTooLarge { .. } => 4,
                Error::InvalidGame(_)
                | Error::InvalidPartition(_)
                | Error::InvalidCoalition(_)
                | Error::InvalidNoiseSpec(_)
                | Error::InvalidSamplingSpec(_)
                | Error::InvalidParams(_)
                | Error::InvalidAlpha(_)
                | Error::AgentNotMember { .. } => 2,
                _ => 1,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "nhg", version, about = "Noise robustness of core-stable partitions in hedonic games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Agreement probabilities and verdicts for a list of coalitions.
    Analyze(AnalyzeArgs),
    /// Prediction-probability curves of a two-agent game.
    Curves(CurvesArgs),
    /// Noise regimes at a satisfaction threshold.
    Regimes(RegimesArgs),
    /// Minimum prediction probability over noise probabilities.
    Safety(SafetyArgs),
    /// Learn a partition from sampled coalitions.
    Learn(LearnArgs),
    /// Every noise assignment of a two-agent game.
    Enumerate(EnumerateArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
pub struct TwoAgentArgs {
    /// Two-agent game JSON with v1_single, v2_single, v1_pair, v2_pair.
    #[arg(long, conflicts_with = "game_id")]
    pub two_agent: Option<PathBuf>,
    /// Game number 1-4 when no game file is given.
    #[arg(long)]
    pub game_id: Option<u8>,
}

impl TwoAgentArgs {
    fn game_id(&self) -> CliResult<u8> {
        match (&self.two_agent, self.game_id) {
            (Some(path), _) => {
                let game: TwoAgentGame = read_json(path)?;
                game.validate()?;
                Ok(game.game_id())
            }
            (None, Some(id)) if (1..=4).contains(&id) => Ok(id),
            (None, Some(id)) => Err(CliError::Config(format!("game id {id} is not in 1..=4"))),
            (None, None) => Ok(1),
        }
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long)]
    pub noise: PathBuf,
    /// Partition JSON; the first core partition of the game when absent.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Coalition as comma-separated agent indices; repeatable. All non-empty
    /// coalitions when absent.
    #[arg(long = "coalition", value_parser = parse_coalition)]
    pub coalitions: Vec<Coalition>,
    #[arg(long, default_value_t = 0.0)]
    pub eps_tilde: f64,
    #[arg(long, default_value_t = 0.9)]
    pub zeta: f64,
    #[arg(long, default_value_t = 0.9)]
    pub eta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub game: TwoAgentArgs,
    #[arg(long, default_value_t = 100)]
    pub resolution: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct RegimesArgs {
    #[command(flatten)]
    pub two_agent: TwoAgentArgs,
    #[arg(long, default_value_t = 0.9)]
    pub zeta: f64,
    #[arg(long, default_value_t = crate::regimes::DEFAULT_RESOLUTION_1D)]
    pub resolution: usize,
    /// Regime over the three-point simplex instead of the two-point curves.
    #[arg(long)]
    pub surface: bool,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION_2D)]
    pub surface_resolution: usize,
    /// Multi-agent mode: per-coalition regimes of `f_T` under the two-point
    /// noise in `--noise`, and their intersection.
    #[arg(long, requires = "noise")]
    pub game: Option<PathBuf>,
    #[arg(long)]
    pub noise: Option<PathBuf>,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long = "coalition", value_parser = parse_coalition)]
    pub coalitions: Vec<Coalition>,
    /// Sampling spec for drawing coalitions in multi-agent mode.
    #[arg(long)]
    pub sampling: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SafetyArgs {
    #[command(flatten)]
    pub game: TwoAgentArgs,
    #[arg(long, default_value_t = crate::regimes::DEFAULT_RESOLUTION_1D)]
    pub resolution: usize,
    /// Also report the grid minimum of the three-point surface.
    #[arg(long)]
    pub surface: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    TopCover,
}

#[derive(Args, Debug)]
pub struct LearnArgs {
    /// Game whose values the sampled coalitions reveal.
    #[arg(long)]
    pub game: PathBuf,
    /// Sampling spec JSON; uniform over all coalitions when absent.
    #[arg(long)]
    pub sampling: Option<PathBuf>,
    /// Number of training draws; every coalition of the game once when absent.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Number of draws for the blocking-rate estimate.
    #[arg(long, default_value_t = 10_000)]
    pub eval: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub two_agent: PathBuf,
    #[arg(long)]
    pub noise: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_coalition(s: &str) -> std::result::Result<Coalition, String> {
    let members = s
        .split(',')
        .map(|m| m.trim().parse::<usize>().map_err(|e| format!("bad agent index {m:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if members.is_empty() {
        return Err("empty coalition".into());
    }
    Coalition::from_members(members).map_err(|e| e.to_string())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

fn check_threshold(name: &str, x: f64) -> CliResult<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} {x} outside (0, 1]")))
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Write(std::io::Error::other(e));
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Write(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `text` to `out` through a temporary file in the same directory, so
/// a failed run never leaves a partial file behind. Missing parent
/// directories are created.
pub fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(CliError::Write)?;
            stdout.flush().map_err(CliError::Write)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            std::fs::create_dir_all(dir).map_err(CliError::Write)?;
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(CliError::Write)?;
            tmp.write_all(text.as_bytes()).map_err(CliError::Write)?;
            tmp.persist(path).map_err(|e| CliError::Write(e.error))?;
            Ok(())
        }
    }
}

fn unsupported(cmd: &str, format: Format) -> CliError {
    CliError::Config(format!("{cmd} does not support {format:?} output"))
}

pub fn run(cli: Cli) -> CliResult<()> {
    if let Ok(threads) = std::env::var("NHG_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| CliError::Config(format!("NHG_THREADS={threads} is not a number")))?;
        // a pool may already exist when run from tests; the first one wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (text, out) = match cli.command {
        Command::Analyze(a) => (analyze(&a)?, a.output.out),
        Command::Curves(a) => (curves(&a)?, a.output.out),
        Command::Regimes(a) => (regimes(&a)?, a.output.out),
        Command::Safety(a) => (safety(&a)?, a.output.out),
        Command::Learn(a) => (learn(&a)?, a.output.out),
        Command::Enumerate(a) => (enumerate(&a)?, a.output.out),
    };
    write_output(out.as_deref(), &text)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("nhg: {e}");
            e.exit_code()
        }
    }
}

fn analyze(a: &AnalyzeArgs) -> CliResult<String> {
    check_threshold("zeta", a.zeta)?;
    check_threshold("eta", a.eta)?;
    if !(0.0..1.0).contains(&a.eps_tilde) {
        return Err(CliError::Config(format!("eps-tilde {} outside [0, 1)", a.eps_tilde)));
    }
    let game: HedonicGame = read_json(&a.game)?;
    let spec: NoiseSpec = read_json(&a.noise)?;
    let pi = match &a.partition {
        Some(path) => {
            let pi: Partition = read_json(path)?;
            if pi.n() != game.n() {
                Partition::new(game.n(), pi.blocks().iter().copied())?
            } else {
                pi
            }
        }
        None => find_core_partition(&game)?.ok_or(Error::EmptyCore)?,
    };
    let coalitions: Vec<Coalition> = if a.coalitions.is_empty() {
        Coalition::all_nonempty(game.n()).collect()
    } else {
        a.coalitions.clone()
    };
    let reports = coalitions
        .iter()
        .map(|&t| coalition_report(&game, &pi, t, &spec, a.eps_tilde, a.zeta, a.eta))
        .collect::<Result<Vec<CoalitionReport>, _>>()?;
    let agreement = |r: &CoalitionReport| match r.mode {
        Mode::Stable => r.f_oracle,
        Mode::NonStable => r.h_oracle,
    };
    let min_agreement = reports.iter().map(agreement).fold(1.0, f64::min);
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => Ok(to_json(&json!({
            "partition": pi,
            "reports": reports,
            "min_agreement": min_agreement,
        }))),
        Format::Csv => to_csv(
            &["coalition", "R_size", "mode", "f_closed", "f_oracle", "h_closed", "h_oracle", "epsilon", "verdict"],
            reports.iter().map(|r| {
                vec![
                    r.coalition.to_string(),
                    r.r_size.to_string(),
                    format!("{:?}", r.mode),
                    r.f_closed.to_string(),
                    r.f_oracle.to_string(),
                    r.h_closed.to_string(),
                    r.h_oracle.to_string(),
                    r.epsilon.to_string(),
                    r.verdict.to_string(),
                ]
            }),
        ),
    }
}

fn curves(a: &CurvesArgs) -> CliResult<String> {
    let id = a.game.game_id()?;
    let table = branches(id)?;
    let columns: Vec<Vec<(f64, f64)>> = table
        .iter()
        .map(|(_, curve)| curve_points(|p| curve.eval(&p), a.resolution))
        .collect();
    match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut header = vec!["p"];
            header.extend(table.iter().map(|(name, _)| *name));
            let rows = (0..columns[0].len()).map(|k| {
                let mut row = vec![columns[0][k].0.to_string()];
                row.extend(columns.iter().map(|c| c[k].1.to_string()));
                row
            });
            to_csv(&header, rows)
        }
        Format::Json => Ok(to_json(&json!({
            "game_id": id,
            "branches": table.iter().zip(&columns).map(|((name, curve), pts)| json!({
                "branch": name,
                "curve": curve,
                "points": pts,
            })).collect::<Vec<_>>(),
        }))),
    }
}

fn regimes(a: &RegimesArgs) -> CliResult<String> {
    if !(0.0..=1.0).contains(&a.zeta) {
        return Err(CliError::Config(format!("zeta {} outside [0, 1]", a.zeta)));
    }
    let format = a.output.format.unwrap_or(Format::Json);
    if a.surface {
        if format != Format::Json {
            return Err(unsupported("regimes --surface", format));
        }
        let region = superlevel_region_2d(|p1, p2| g(&p1, &p2), a.zeta, a.surface_resolution);
        return Ok(to_json(&json!({
            "zeta": a.zeta,
            "resolution": region.resolution,
            "cells_inside": region.count_inside(),
            "simplex_cells": region.simplex_cells(),
            "whole_simplex": region.is_whole_simplex(),
        })));
    }
    let named: Vec<(String, Region1D)> = match &a.game {
        Some(path) => multi_agent_regimes(a, path)?,
        None => branches(a.two_agent.game_id()?)?
            .iter()
            .map(|(name, curve)| (name.to_string(), regime_1d_two_agent(*curve, a.zeta, a.resolution)))
            .collect(),
    };
    match format {
        Format::Json => Ok(to_json(&json!({
            "zeta": a.zeta,
            "regimes": named.iter().map(|(name, r)| json!({
                "name": name,
                "intervals": r.intervals,
            })).collect::<Vec<_>>(),
        }))),
        Format::Csv => to_csv(
            &["name", "lo", "hi"],
            named.iter().flat_map(|(name, r)| {
                r.intervals
                    .iter()
                    .map(move |(lo, hi)| vec![name.clone(), lo.to_string(), hi.to_string()])
            }),
        ),
    }
}

fn multi_agent_regimes(a: &RegimesArgs, game_path: &Path) -> CliResult<Vec<(String, Region1D)>> {
    let game: HedonicGame = read_json(game_path)?;
    let noise_path = a.noise.as_ref().expect("clap enforces --noise");
    let spec: NoiseSpec = read_json(noise_path)?;
    if spec.len() != 2 || spec.support()[0] != 1.0 {
        return Err(CliError::Config("multi-agent regimes need two-point noise {1, α}".into()));
    }
    let pi = match &a.partition {
        Some(path) => read_json(path)?,
        None => find_core_partition(&game)?.ok_or(Error::EmptyCore)?,
    };
    let coalitions = if !a.coalitions.is_empty() {
        a.coalitions.clone()
    } else {
        let sampling = match &a.sampling {
            Some(path) => read_json::<SamplingSpec>(path)?.with_seed(a.seed),
            None => SamplingSpec::uniform(game.n(), a.seed)?,
        };
        let mut drawn = sample_coalitions(&sampling, a.samples)?;
        drawn.sort();
        drawn.dedup();
        drawn
    };
    let mut named = Vec::new();
    for &t in &coalitions {
        let ctx = build_context(&game, &pi, t)?;
        let (k, i) = if ctx.degenerate {
            (0, 0)
        } else {
            (ctx.r_size(), index_sets(&spec, &ctx)[0].i_size)
        };
        let region = if ctx.degenerate {
            Region1D::full(a.resolution)
        } else {
            superlevel_region_1d(|p| f_t_two_support(&p, k, i), a.zeta, a.resolution)
        };
        named.push((t.to_string(), region));
    }
    let all: Vec<Region1D> = named.iter().map(|(_, r)| r.clone()).collect();
    named.push(("intersection".into(), intersect_regions(&all)?));
    Ok(named)
}

fn safety(a: &SafetyArgs) -> CliResult<String> {
    let id = a.game.game_id()?;
    let rows: Vec<(&str, PredictionCurve, crate::regimes::SafetyValue)> = branches(id)?
        .iter()
        .filter(|(_, c)| *c != PredictionCurve::One)
        .map(|(name, curve)| (*name, *curve, safety_value_1d(|p| curve.eval(&p), a.resolution)))
        .collect();
    let surface = a
        .surface
        .then(|| grid_minimum_2d(|p1, p2| g(&p1, &p2), DEFAULT_RESOLUTION_2D));
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => Ok(to_json(&json!({
            "game_id": id,
            "safety": rows.iter().map(|(name, curve, s)| json!({
                "branch": name,
                "curve": curve,
                "p": s.p,
                "value": s.value,
            })).collect::<Vec<_>>(),
            "surface_minimum": surface,
        }))),
        Format::Csv => {
            if surface.is_some() {
                return Err(unsupported("safety --surface", Format::Csv));
            }
            to_csv(
                &["branch", "p", "value"],
                rows.iter().map(|(name, _, s)| vec![name.to_string(), s.p.to_string(), s.value.to_string()]),
            )
        }
    }
}

fn learn(a: &LearnArgs) -> CliResult<String> {
    let game: HedonicGame = read_json(&a.game)?;
    let sampling = match &a.sampling {
        Some(path) => read_json::<SamplingSpec>(path)?.with_seed(a.seed),
        None => SamplingSpec::uniform(game.n(), a.seed)?,
    };
    let sample = match a.samples {
        Some(m) => Sample::draw(&game, &sampling, m)?,
        None => Sample::exhaustive(&game)?,
    };
    let backend = match a.backend {
        BackendArg::Exact => Backend::Exact,
        BackendArg::TopCover => Backend::TopCover,
    };
    let pi = learn_partition(&sample, game.n(), backend)?;
    // evaluation draws use a seed distinct from the training draws
    let eval_spec = sampling.with_seed(a.seed.wrapping_add(0x5EED));
    let rate = empirical_blocking_rate(&pi, &eval_spec, &game, a.eval)?;
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => Ok(to_json(&json!({
            "partition": pi,
            "backend": backend,
            "samples": sample.len(),
            "eval_draws": a.eval,
            "blocking_rate": rate,
        }))),
        Format::Csv => Err(unsupported("learn", Format::Csv)),
    }
}

fn enumerate(a: &EnumerateArgs) -> CliResult<String> {
    let game: TwoAgentGame = read_json(&a.two_agent)?;
    game.validate()?;
    let spec: NoiseSpec = read_json(&a.noise)?;
    let table = enumerate_cases(&game, &spec)?;
    match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(table.to_csv()?),
        Format::Json => Ok(to_json(&json!({
            "noisy_partition": table.noisy_partition,
            "agreement": table.agreement(),
            "agreeing_cases": table.agreeing_cases(),
            "cases": table.rows.iter().map(|r| json!({
                "case": r.case,
                "alpha_1_coal": r.alpha_1,
                "alpha_2_coal": r.alpha_2,
                "alpha_12_coal": r.alpha_12,
                "probability": r.probability,
                "partition": r.partition,
                "agrees": r.agrees,
            })).collect::<Vec<_>>(),
        }))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coalition_flag_parsing() {
        assert_eq!(parse_coalition("0, 2").unwrap(), Coalition::from_members([0, 2]).unwrap());
        assert!(parse_coalition("a").is_err());
        assert!(parse_coalition("40").is_err());
    }

    #[test]
    fn exit_code_map() {
        let missing = CliError::Lib(Error::MissingValue { agent: 0, coalition: Coalition::singleton(0) });
        assert_eq!(missing.exit_code(), 3);
        assert_eq!(CliError::Lib(Error::EnumerationTooLarge { size: 1, max: 0 }).exit_code(), 4);
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Lib(Error::EmptyCore).exit_code(), 1);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
