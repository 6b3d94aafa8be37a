//! `riskcheck`: command-line front end for `riskcheck-core`.
//!
//! Every command reads one JSON document (`--input`) that is either a
//! trajectory or a scenario, except `catalog`, which writes the built-in
//! scenarios. Documents carry `schema_version: 1`; see
//! [`riskcheck_core::schema`] for both layouts.
//!
//! | command       | writes                                         |
//! |---------------|------------------------------------------------|
//! | `validate`    | report on stdout                               |
//! | `eval`        | `eval.csv` (`t,h,H,R,F`)                       |
//! | `sample`      | `samples.csv`, `samples.meta.json`             |
//! | `bound-check` | `bound_check.csv`, `bound_check.json`          |
//! | `compare`     | `compare.csv`, `compare.json`                  |
//! | `distance`    | `distance.json`                                |
//! | `catalog`     | `<label>.scenario.json`, `<label>.trajectory.json` |
//!
//! `--plot` adds `bound_check.svg` / `compare.svg`.
//!
//! Exit status: 0 success, 1 I/O or argument failure, 2 schema error, 3
//! principle violation, 4 ordering violation (`bound-check`).
//!
//! The grid is `--grid-points` evenly spaced times over `[0, --t-max]`, or
//! without `--t-max`, `t = 0` plus `--grid-points` geometric points over
//! `[0.01/h(0), 5/h(0)]`.

pub mod plot;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use riskcheck_core::distance::{
    default_support_cap, discretize, exact_tv_small, ks_distance, stein_chen_tv_bound,
    DistanceReport, EXACT_TV_MAX_INDICATORS,
};
use riskcheck_core::export::{
    comparison_csv, eval_csv, grid_hash, samples_csv, ComparisonSummary, SampleMetadata,
};
use riskcheck_core::grid::{default_grid, uniform_grid, DEFAULT_GRID_POINTS};
use riskcheck_core::hazard::{validate_trajectory, HazardTrajectory, TrajectoryError};
use riskcheck_core::pra::{
    check_stochastic_order, underestimation_report, ComparisonReport, PraModel,
};
use riskcheck_core::sampling::{
    sample_replicates, sample_replicates_with_threads, EmpiricalDistribution,
};
use riskcheck_core::scenario::{build_trajectory, scenario_catalog, ScenarioError};
use riskcheck_core::schema::{parse_document, scenario_json, trajectory_json, Document};
use thiserror::Error;

/// Seed used when neither `--seed` nor `RISKCHECK_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_050_331;

pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "riskcheck",
    version,
    about = "Rational-hazard trajectories and PRA comparisons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Trajectory or scenario JSON file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    #[arg(long, global = true, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,

    /// Upper end of an evenly spaced grid; omit for the default geometric grid.
    #[arg(long, global = true)]
    pub t_max: Option<f64>,

    /// Number of samples.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub n: usize,

    #[arg(long, global = true, env = "RISKCHECK_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Also write an SVG of the comparison.
    #[arg(long, global = true)]
    pub plot: bool,

    /// Worker threads for sampling (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// PRA rate for `compare` and `distance`; default 1/E[T].
    #[arg(long, global = true)]
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the five principles and print the report.
    Validate,
    /// Tabulate t, h, H, R, F on the grid.
    Eval,
    /// Draw failure times.
    Sample,
    /// Compare F with 1 - exp(-h(0) t); exit 4 if the ordering fails.
    BoundCheck,
    /// Compare F with both comparators.
    Compare,
    /// Poisson-approximation and KS distances.
    Distance,
    /// Write the built-in scenarios and their trajectories.
    Catalog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Failure = 1,
    Schema = 2,
    Violation = 3,
    Ordering = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Violation(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Schema(_) => Status::Schema,
            CliError::Violation(_) => Status::Violation,
            CliError::Usage(_) | CliError::Io { .. } => Status::Failure,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

struct Loaded {
    trajectory: HazardTrajectory,
    /// Validation output when the input was a trajectory file.
    report: Option<String>,
}

fn read_input(cli: &Cli) -> Result<Document, CliError> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| usage("--input is required for this command"))?;
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    parse_document(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn scenario_error(e: ScenarioError) -> CliError {
    match e {
        ScenarioError::Trajectory(TrajectoryError::Violations(r)) => {
            CliError::Violation(r.to_string())
        }
        other => CliError::Schema(other.to_string()),
    }
}

/// Load the input as a trajectory. With `strict`, any principle violation is
/// an error; otherwise the trajectory only has to be evaluable.
fn load(cli: &Cli, strict: bool) -> Result<Loaded, CliError> {
    match read_input(cli)? {
        Document::Scenario(s) => Ok(Loaded {
            trajectory: build_trajectory(&s).map_err(scenario_error)?,
            report: None,
        }),
        Document::Trajectory(spec) => {
            let report = validate_trajectory(&spec).map_err(|e| CliError::Schema(e.to_string()))?;
            if strict && !report.valid {
                return Err(CliError::Violation(report.to_string()));
            }
            let text = report.to_string();
            let trajectory = HazardTrajectory::unvalidated(spec).map_err(|e| match e {
                TrajectoryError::Structure(s) => CliError::Schema(s.to_string()),
                _ => CliError::Violation(text.clone()),
            })?;
            Ok(Loaded {
                trajectory,
                report: Some(text),
            })
        }
    }
}

fn grid(cli: &Cli, traj: &HazardTrajectory) -> Result<Vec<f64>, CliError> {
    match cli.t_max {
        Some(t_max) => uniform_grid(t_max, cli.grid_points),
        None => default_grid(traj.initial_hazard(), cli.grid_points),
    }
    .map_err(usage)
}

fn pra_model(cli: &Cli, traj: &HazardTrajectory) -> Result<PraModel, CliError> {
    match cli.rate {
        Some(rate) => PraModel::given(rate),
        None => PraModel::from_trajectory(traj),
    }
    .map_err(usage)
}

fn samples(cli: &Cli, traj: &HazardTrajectory) -> Result<Vec<f64>, CliError> {
    if cli.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    match cli.threads {
        Some(threads) => {
            sample_replicates_with_threads(traj, cli.n, cli.seed, threads).map_err(usage)
        }
        None => Ok(sample_replicates(traj, cli.n, cli.seed)),
    }
}

struct Writer<'a> {
    dir: &'a Path,
    stdout: &'a mut dyn Write,
}

impl Writer<'_> {
    fn file(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: self.dir.to_path_buf(),
            source,
        };
        fs::create_dir_all(self.dir).map_err(io)?;
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.line(&format!("wrote {}", path.display()))
    }

    fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.stdout, "{text}").map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn write_comparison(
    w: &mut Writer,
    cli: &Cli,
    stem: &str,
    traj: &HazardTrajectory,
    report: &ComparisonReport,
) -> Result<(), CliError> {
    w.file(&format!("{stem}.csv"), &comparison_csv(report))?;
    w.file(
        &format!("{stem}.json"),
        &to_json(&ComparisonSummary::new(traj, report)),
    )?;
    if cli.plot {
        w.file(&format!("{stem}.svg"), &plot::comparison_svg(report, stem))?;
    }
    Ok(())
}

/// Run one command, writing artifacts under `--out` and messages to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let mut w = Writer {
        dir: &cli.out,
        stdout,
    };
    match cli.command {
        Command::Validate => {
            let (text, hash) = match read_input(cli)? {
                Document::Trajectory(spec) => {
                    let report =
                        validate_trajectory(&spec).map_err(|e| CliError::Schema(e.to_string()))?;
                    if !report.valid {
                        w.line(report.to_string().trim_end())?;
                        return Ok(Status::Violation);
                    }
                    let hash = HazardTrajectory::new(spec).map(|t| t.hash()).ok();
                    (report.to_string(), hash)
                }
                Document::Scenario(s) => {
                    let traj = build_trajectory(&s).map_err(scenario_error)?;
                    let report = validate_trajectory(traj.spec())
                        .expect("built trajectories are well formed");
                    (report.to_string(), Some(traj.hash()))
                }
            };
            w.line(text.trim_end())?;
            if let Some(hash) = hash {
                w.line(&format!("trajectory_hash: {hash}"))?;
            }
        }
        Command::Eval => {
            let traj = load(cli, true)?.trajectory;
            let grid = grid(cli, &traj)?;
            w.file("eval.csv", &eval_csv(&traj, &grid).map_err(usage)?)?;
        }
        Command::Sample => {
            let traj = load(cli, true)?.trajectory;
            let times = samples(cli, &traj)?;
            w.file("samples.csv", &samples_csv(&times))?;
            w.file(
                "samples.meta.json",
                &to_json(&SampleMetadata::new(&traj, cli.seed, cli.n)),
            )?;
        }
        Command::BoundCheck => {
            let loaded = load(cli, false)?;
            let traj = &loaded.trajectory;
            let report = check_stochastic_order(traj, &grid(cli, traj)?).map_err(usage)?;
            write_comparison(&mut w, cli, "bound_check", traj, &report)?;
            w.line(&format!("ordering_holds: {}", report.ordering_holds))?;
            w.line(&format!("sup_gap_h0: {:e}", report.sup_gap_h0))?;
            if !report.ordering_holds {
                w.line(&format!("min_gap_h0: {:e}", report.min_gap_h0))?;
                return Ok(Status::Ordering);
            }
            if !traj.is_rational() {
                w.line(loaded.report.as_deref().unwrap_or_default().trim_end())?;
                return Ok(Status::Violation);
            }
        }
        Command::Compare => {
            let traj = load(cli, true)?.trajectory;
            let model = pra_model(cli, &traj)?;
            let report =
                underestimation_report(&traj, &model, &grid(cli, &traj)?).map_err(usage)?;
            write_comparison(&mut w, cli, "compare", &traj, &report)?;
            w.line(&format!("sup_gap_h0: {:e}", report.sup_gap_h0))?;
            w.line(&format!("sup_gap_pra: {:e}", report.sup_gap_pra))?;
        }
        Command::Distance => {
            let traj = load(cli, true)?.trajectory;
            let grid = grid(cli, &traj)?;
            let process = discretize(&traj, &grid).map_err(usage)?;
            let exact_tv = (process.len() <= EXACT_TV_MAX_INDICATORS)
                .then(|| exact_tv_small(&process, default_support_cap(process.lambda())))
                .transpose()
                .map_err(usage)?;
            let dist = EmpiricalDistribution::new(samples(cli, &traj)?, cli.seed).map_err(usage)?;
            let report = DistanceReport {
                lambda: process.lambda(),
                bound: stein_chen_tv_bound(&process),
                exact_tv,
                ks: ks_distance(&dist, &pra_model(cli, &traj)?),
                n: process.len(),
                grid_hash: grid_hash(&grid),
            };
            w.file("distance.json", &to_json(&report))?;
        }
        Command::Catalog => {
            for s in scenario_catalog() {
                let traj = build_trajectory(&s).map_err(scenario_error)?;
                w.file(
                    &format!("{}.scenario.json", s.label),
                    &(scenario_json(&s) + "\n"),
                )?;
                w.file(
                    &format!("{}.trajectory.json", s.label),
                    &(trajectory_json(traj.spec()) + "\n"),
                )?;
            }
        }
    }
    Ok(Status::Success)
}

/// Parse `args`, run, and print errors to stderr. Returns the exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Status::Failure as i32
            } else {
                0
            };
        }
    };
    match run(&cli, stdout) {
        Ok(status) => status as i32,
        Err(e) => {
            eprintln!("riskcheck: {e}");
            e.status() as i32
        }
    }
}
