//! Command-line surface: TOML run configuration, the `origin`, `field`,
//! `validate` and `converge` commands, CSV/JSON output and exit codes.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 parse error, 3 invalid
//! configuration or query, 4 accuracy not reached (inversion estimate or series
//! term cap), 5 domain truncation, 6 cross-validation failed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{constant_sink_propagator, free_propagator, inverse_time_propagator, PropagatorQuery};
use crate::error::Error;
use crate::fdoracle::{cn_solve, FdConfig};
use crate::field::{balance, snapshots, FieldSnapshot};
use crate::laplace::{invert_with_estimates, origin_transform, InversionSpec};
use crate::model::{validate_problem, InitialCondition, Problem, SinkModel, SpaceGrid, TimeGrid};
use crate::volterra::{free_origin_forcing, solve_origin};

/// Solver behind a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Volterra,
    Laplace,
    Analytic,
    Fdoracle,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Volterra, Method::Laplace, Method::Analytic, Method::Fdoracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Volterra => "volterra",
            Method::Laplace => "laplace",
            Method::Analytic => "analytic",
            Method::Fdoracle => "fdoracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_max: f64,
    pub n_steps: usize,
    pub half_width: f64,
    pub n_points: usize,
}

/// Pass/fail thresholds used by `validate`, and the inversion accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative `L∞` between origin histories of two methods.
    pub origin: f64,
    /// Relative `L∞` between fields at `t_max` on `|x| ≤ L/2`.
    pub field: f64,
    /// Balance residual of the Volterra field.
    pub balance: f64,
    /// Balance residual of the finite-difference run.
    pub fd_balance: f64,
    /// Relative accuracy requested from the Laplace inversion.
    pub inversion: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            origin: 1e-4,
            field: 1e-2,
            balance: 1e-5,
            fd_balance: 5e-3,
            inversion: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Used when `--out` is absent; stdout when neither is given.
    pub path: Option<PathBuf>,
}

/// Contents of a run configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub diffusion_coefficient: f64,
    #[serde(default = "default_method")]
    pub method: Method,
    pub sink: SinkModel,
    pub ic: InitialCondition,
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_method() -> Method {
    Method::Volterra
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configs always serialize")
    }

    /// Configuration carrying `p` with default tolerances and no output path.
    pub fn from_problem(p: &Problem, grid: GridConfig, method: Method) -> Self {
        Self {
            diffusion_coefficient: p.diffusion_coefficient,
            method,
            sink: p.sink.clone(),
            ic: p.initial_condition.clone(),
            grid,
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        Ok(validate_problem(Problem::new(
            self.diffusion_coefficient,
            self.sink.clone(),
            self.ic.clone(),
        ))?)
    }

    pub fn time_grid(&self) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::new(self.grid.t_max, self.grid.n_steps)?)
    }

    pub fn space_grid(&self) -> Result<SpaceGrid, CliError> {
        Ok(SpaceGrid::new(self.grid.half_width, self.grid.n_points)?)
    }

    fn check_tolerances(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        for (name, v) in [
            ("origin", t.origin),
            ("field", t.field),
            ("balance", t.balance),
            ("fd_balance", t.fd_balance),
            ("inversion", t.inversion),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Invalid(format!(
                    "tolerances.{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] Error),
    #[error("cross-validation failed")]
    Failed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Solver(e) => match e {
                Error::Domain(_) | Error::Unsupported(_) | Error::Invalid(_) => 3,
                Error::Accuracy { .. } | Error::Convergence { .. } => 4,
                Error::Truncation { .. } => 5,
                Error::Breakdown(_) => 1,
            },
            CliError::Failed => 6,
        }
    }
}

/// Decimal with 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn unsupported<T>(method: Method, what: &str) -> Result<T, CliError> {
    Err(Error::Unsupported(format!("method {} cannot {what}", method.name())).into())
}

fn delta_source(p: &Problem, method: Method) -> Result<f64, CliError> {
    match p.initial_condition {
        InitialCondition::DeltaAt { x0 } => Ok(x0),
        _ => unsupported(method, "handle a non-delta initial density"),
    }
}

/// Closed-form `G(x, x0, t)` for the sinks that have one.
fn analytic_value(p: &Problem, x0: f64, x: f64, t: f64) -> Result<f64, CliError> {
    let q = PropagatorQuery::new(x, x0, t, p.d());
    Ok(match p.sink {
        SinkModel::Zero => free_propagator(&q)?,
        SinkModel::Constant { k0 } => constant_sink_propagator(&q, k0)?,
        SinkModel::InverseTime { alpha } => inverse_time_propagator(&q, alpha)?,
        _ => return unsupported(Method::Analytic, &format!("solve the {} sink", p.sink.name())),
    })
}

/// `P(0, tₙ)` on the configured time grid.
pub fn origin_history(p: &Problem, cfg: &RunConfig, method: Method) -> Result<Vec<f64>, CliError> {
    let grid = cfg.time_grid()?;
    let times: Vec<f64> = grid.nodes().collect();
    let start = p.initial_condition.origin_density();
    match method {
        Method::Volterra => Ok(solve_origin(p, &grid)?.values),
        Method::Analytic => {
            let x0 = delta_source(p, method)?;
            let mut out = vec![start];
            for &t in &times[1..] {
                out.push(analytic_value(p, x0, 0.0, t)?);
            }
            Ok(out)
        }
        Method::Laplace => {
            let spec = InversionSpec::talbot(times[1..].to_vec()).with_accuracy(cfg.tolerances.inversion);
            let inverted = invert_with_estimates(|s: Complex64| Ok(origin_transform(p, s)?.value), &spec)?;
            // early values can sit far below the peak, so accuracy is judged against the peak
            let peak = inverted.iter().fold(0.0_f64, |m, v| m.max(v.value.abs()));
            if let Some(v) = inverted
                .iter()
                .find(|v| !(v.estimate <= cfg.tolerances.inversion * peak))
            {
                return Err(Error::Accuracy {
                    best: v.value,
                    estimate: v.estimate,
                }
                .into());
            }
            Ok(std::iter::once(start).chain(inverted.iter().map(|v| v.value)).collect())
        }
        Method::Fdoracle => {
            let space = cfg.space_grid()?;
            let mut fd = FdConfig::new(space, grid);
            fd.record_stride = grid.n_steps() + 1;
            Ok(cn_solve(p, &fd)?.origin)
        }
    }
}

fn check_times(grid: &TimeGrid, times: &[f64]) -> Result<(), CliError> {
    for &t in times {
        if grid.index_of(t).is_none() {
            let (lo, hi) = grid.neighbours(t);
            return Err(CliError::Invalid(format!(
                "time {t} is not on the solution grid; nearest grid times are {lo} and {hi}"
            )));
        }
    }
    Ok(())
}

/// `P(x, t)` on the configured space grid at each requested grid time.
pub fn field_snapshots(
    p: &Problem,
    cfg: &RunConfig,
    method: Method,
    times: &[f64],
) -> Result<Vec<FieldSnapshot>, CliError> {
    let grid = cfg.time_grid()?;
    let space = cfg.space_grid()?;
    check_times(&grid, times)?;
    match method {
        Method::Volterra => Ok(snapshots(p, &solve_origin(p, &grid)?, &space, times)?),
        Method::Analytic => {
            let x0 = delta_source(p, method)?;
            times
                .iter()
                .map(|&t| {
                    let time = grid.node(grid.index_of(t).expect("checked"));
                    let values = space
                        .nodes()
                        .into_iter()
                        .map(|x| analytic_value(p, x0, x, time))
                        .collect::<Result<_, _>>()?;
                    Ok(FieldSnapshot {
                        grid: space,
                        time,
                        values,
                    })
                })
                .collect()
        }
        Method::Fdoracle => {
            let (fd, _) = FdConfig::new(space, grid).recording_at(times)?;
            let history = cn_solve(p, &fd)?;
            Ok(times
                .iter()
                .map(|&t| history.at(t).expect("recorded").clone())
                .collect())
        }
        Method::Laplace => unsupported(method, "reconstruct the field"),
    }
}

/// CSV `t,origin_density,free_forcing` for the configured method.
pub fn cmd_origin(cfg: &RunConfig, method: Method) -> Result<String, CliError> {
    cfg.check_tolerances()?;
    let p = cfg.problem()?;
    let values = origin_history(&p, cfg, method)?;
    let grid = cfg.time_grid()?;
    let mut out = String::from("t,origin_density,free_forcing\n");
    for (n, v) in values.iter().enumerate() {
        let t = grid.node(n);
        let f = free_origin_forcing(&p, t)?;
        let _ = writeln!(out, "{},{},{}", num(t), num(*v), num(f));
    }
    Ok(out)
}

/// Long-format CSV `t,x,density`, `x` ascending within each time.
pub fn cmd_field(cfg: &RunConfig, method: Method, times: &[f64]) -> Result<String, CliError> {
    cfg.check_tolerances()?;
    let p = cfg.problem()?;
    let snaps = field_snapshots(&p, cfg, method, times)?;
    let mut out = String::from("t,x,density\n");
    for s in &snaps {
        for (x, v) in s.grid.nodes().iter().zip(&s.values) {
            let _ = writeln!(out, "{},{},{}", num(s.time), num(*x), num(*v));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodRun {
    pub method: Method,
    pub ok: bool,
    /// Why the method did not run, if it failed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub a: Method,
    pub b: Method,
    pub relative_linf: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceCheck {
    pub method: Method,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Result of `validate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub sink: String,
    pub t_max: f64,
    pub n_steps: usize,
    pub methods: Vec<MethodRun>,
    pub origin: Vec<Comparison>,
    pub field: Vec<Comparison>,
    pub balance: Vec<BalanceCheck>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

fn method_applies(p: &Problem, method: Method) -> bool {
    let delta = matches!(p.initial_condition, InitialCondition::DeltaAt { .. });
    match method {
        Method::Volterra | Method::Fdoracle => true,
        Method::Analytic => {
            delta
                && matches!(
                    p.sink,
                    SinkModel::Zero | SinkModel::Constant { .. } | SinkModel::InverseTime { .. }
                )
        }
        Method::Laplace => !matches!(p.sink, SinkModel::Tabulated { .. }),
    }
}

/// Relative `L∞` of `a − b` over nonnegative times, scaled by `max |b|`.
fn relative_linf(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().skip(1).fold(0.0_f64, |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).skip(1).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

struct MethodResult {
    origin: Option<Vec<f64>>,
    field: Option<FieldSnapshot>,
    balance: Option<f64>,
}

fn run_method(p: &Problem, cfg: &RunConfig, method: Method) -> Result<MethodResult, CliError> {
    let grid = cfg.time_grid()?;
    let space = cfg.space_grid()?;
    let t_end = grid.t_max();
    match method {
        Method::Volterra => {
            let oh = solve_origin(p, &grid)?;
            let audit: Vec<f64> = (1..=8).map(|i| grid.node(i * grid.n_steps() / 8)).collect();
            let residual = balance(p, &oh, &space, &audit)?.max_residual();
            let field = snapshots(p, &oh, &space, &[t_end])?.remove(0);
            Ok(MethodResult {
                origin: Some(oh.values),
                field: Some(field),
                balance: Some(residual),
            })
        }
        Method::Fdoracle => {
            let (fd, _) = FdConfig::new(space, grid).recording_at(&[t_end])?;
            let history = cn_solve(p, &fd)?;
            Ok(MethodResult {
                balance: Some(history.max_balance_residual()),
                field: history.at(t_end).cloned(),
                origin: None,
            })
        }
        Method::Analytic => Ok(MethodResult {
            origin: Some(origin_history(p, cfg, method)?),
            field: Some(field_snapshots(p, cfg, method, &[t_end])?.remove(0)),
            balance: None,
        }),
        Method::Laplace => Ok(MethodResult {
            origin: Some(origin_history(p, cfg, method)?),
            field: None,
            balance: None,
        }),
    }
}

/// Runs every method applicable to the configured problem and compares them.
///
/// Origin histories are compared on the full time grid, fields at `t_max` on
/// `|x| ≤ L/2`. The finite-difference origin is left out because it smears the
/// initial delta over a few cells.
pub fn cmd_validate(cfg: &RunConfig) -> Result<ValidationReport, CliError> {
    cfg.check_tolerances()?;
    let p = cfg.problem()?;
    let grid = cfg.time_grid()?;
    cfg.space_grid()?;
    let methods: Vec<Method> = Method::ALL.into_iter().filter(|&m| method_applies(&p, m)).collect();
    // independent solver runs; results are assembled in method order
    let results: Vec<Result<MethodResult, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = methods
            .iter()
            .map(|&m| {
                let p = &p;
                scope.spawn(move || run_method(p, cfg, m))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let tol = cfg.tolerances;
    let mut report = ValidationReport {
        sink: p.sink.name().to_string(),
        t_max: grid.t_max(),
        n_steps: grid.n_steps(),
        methods: Vec::new(),
        origin: Vec::new(),
        field: Vec::new(),
        balance: Vec::new(),
        pass: true,
    };
    let mut ok = Vec::new();
    for (&m, r) in methods.iter().zip(results) {
        match r {
            Ok(r) => {
                report.methods.push(MethodRun {
                    method: m,
                    ok: true,
                    error: None,
                });
                ok.push((m, r));
            }
            Err(e) => {
                report.pass = false;
                report.methods.push(MethodRun {
                    method: m,
                    ok: false,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    for (i, (ma, ra)) in ok.iter().enumerate() {
        for (mb, rb) in &ok[i + 1..] {
            if let (Some(a), Some(b)) = (&ra.origin, &rb.origin) {
                let e = relative_linf(a, b);
                report.origin.push(Comparison {
                    a: *ma,
                    b: *mb,
                    relative_linf: e,
                    tolerance: tol.origin,
                    pass: e <= tol.origin,
                });
            }
            if let (Some(a), Some(b)) = (&ra.field, &rb.field) {
                let e = field_error(a, b)?;
                report.field.push(Comparison {
                    a: *ma,
                    b: *mb,
                    relative_linf: e,
                    tolerance: tol.field,
                    pass: e <= tol.field,
                });
            }
        }
        if let Some(r) = ra.balance {
            let limit = if *ma == Method::Fdoracle {
                tol.fd_balance
            } else {
                tol.balance
            };
            report.balance.push(BalanceCheck {
                method: *ma,
                max_residual: r,
                tolerance: limit,
                pass: r <= limit,
            });
        }
    }
    report.pass &= report.origin.iter().chain(&report.field).all(|c| c.pass) && report.balance.iter().all(|b| b.pass);
    Ok(report)
}

/// Relative `L∞` between two snapshots on the same grid, over `|x| ≤ L/2`.
fn field_error(a: &FieldSnapshot, b: &FieldSnapshot) -> Result<f64, CliError> {
    let half = 0.5 * a.grid.half_width() + 1e-12;
    let xs = a.grid.nodes();
    let pick = |s: &FieldSnapshot| -> Vec<f64> {
        xs.iter()
            .zip(&s.values)
            .filter(|(x, _)| x.abs() <= half)
            .map(|(_, v)| *v)
            .collect()
    };
    if a.grid != b.grid {
        return Err(CliError::Invalid("snapshots live on different grids".into()));
    }
    let (va, vb) = (pick(a), pick(b));
    let scale = vb.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let diff = va.iter().zip(&vb).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// Rows of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_steps: usize,
    pub max_error: f64,
    /// `log₂` of the error ratio to the previous level; absent on the first row
    /// and when either error is at roundoff level.
    pub order: Option<f64>,
}

/// Volterra refinement study of the origin history on the configured `t_max`.
///
/// Sinks with a closed form are measured against it; the others against the
/// next finer level, so the finest level produces no row.
pub fn converge_rows(cfg: &RunConfig, ladder: &[usize]) -> Result<Vec<ConvergenceRow>, CliError> {
    cfg.check_tolerances()?;
    if ladder.len() < 3 {
        return Err(Error::Domain(format!(
            "a refinement ladder needs at least 3 levels, got {}",
            ladder.len()
        ))
        .into());
    }
    if ladder.windows(2).any(|w| w[1] <= w[0] || w[1] % w[0] != 0) {
        return Err(Error::Domain("ladder levels must increase, each dividing the next".into()).into());
    }
    let p = cfg.problem()?;
    let t_max = cfg.grid.t_max;
    let histories = ladder
        .iter()
        .map(|&n| Ok(solve_origin(&p, &TimeGrid::new(t_max, n)?)?.values))
        .collect::<Result<Vec<_>, CliError>>()?;
    let exact = method_applies(&p, Method::Analytic);
    let mut errors = Vec::new();
    let mut scale: f64 = 0.0;
    for (k, (&n, values)) in ladder.iter().zip(&histories).enumerate() {
        let mut worst: f64 = 0.0;
        if exact {
            let x0 = delta_source(&p, Method::Analytic)?;
            for (j, v) in values.iter().enumerate().skip(1) {
                let reference = analytic_value(&p, x0, 0.0, t_max * j as f64 / n as f64)?;
                scale = scale.max(reference.abs());
                worst = worst.max((v - reference).abs());
            }
        } else if let Some(finer) = histories.get(k + 1) {
            let r = ladder[k + 1] / n;
            for (j, v) in values.iter().enumerate().skip(1) {
                scale = scale.max(v.abs());
                worst = worst.max((v - finer[j * r]).abs());
            }
        } else {
            break;
        }
        errors.push((n, worst));
    }
    let floor = 64.0 * f64::EPSILON * scale;
    Ok(errors
        .iter()
        .enumerate()
        .map(|(k, &(n, e))| ConvergenceRow {
            n_steps: n,
            max_error: e,
            order: (k > 0 && e > floor && errors[k - 1].1 > floor).then(|| {
                let ratio = (errors[k].0 as f64 / errors[k - 1].0 as f64).log2();
                (errors[k - 1].1 / e).log2() / ratio
            }),
        })
        .collect())
}

/// CSV `n_steps,max_error,estimated_order`; the order cell is empty when undefined.
pub fn cmd_converge(cfg: &RunConfig, ladder: &[usize]) -> Result<String, CliError> {
    let mut out = String::from("n_steps,max_error,estimated_order\n");
    for row in converge_rows(cfg, ladder)? {
        let order = row.order.map(num).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", row.n_steps, num(row.max_error), order);
    }
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(
    name = "smol",
    version,
    about = "Diffusion with a time-dependent delta sink at the origin"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; stdout when absent and the config names none.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the configured method.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Suppress the summary on standard error.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Origin density and free forcing on the time grid (CSV).
    Origin(Common),
    /// Field snapshots at grid times (CSV).
    Field {
        #[command(flatten)]
        common: Common,
        /// Comma-separated grid times; defaults to t_max.
        #[arg(long, value_delimiter = ',')]
        times: Vec<f64>,
    },
    /// Cross-validate every applicable method (JSON).
    Validate(Common),
    /// Refinement study of the Volterra solver (CSV).
    Converge {
        #[command(flatten)]
        common: Common,
        /// Comma-separated step counts, coarse to fine.
        #[arg(long, value_delimiter = ',', default_values_t = vec![512, 1024, 2048, 4096])]
        ladder: Vec<usize>,
    },
}

fn emit(cfg: &RunConfig, common: &Common, text: &str) -> Result<(), CliError> {
    match common.out.as_ref().or(cfg.output.path.as_ref()) {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let common = match &cli.command {
        Command::Origin(c) | Command::Validate(c) => c,
        Command::Field { common, .. } | Command::Converge { common, .. } => common,
    };
    let cfg = RunConfig::load(&common.config)?;
    let method = common.method.unwrap_or(cfg.method);
    let (text, summary, pass) = match &cli.command {
        Command::Origin(_) => {
            let csv = cmd_origin(&cfg, method)?;
            let summary = format!("origin: {} rows via {}", csv.lines().count() - 1, method.name());
            (csv, summary, true)
        }
        Command::Field { times, .. } => {
            let times = if times.is_empty() {
                vec![cfg.grid.t_max]
            } else {
                times.clone()
            };
            let summary = format!("field: {} times via {}", times.len(), method.name());
            (cmd_field(&cfg, method, &times)?, summary, true)
        }
        Command::Validate(_) => {
            let report = cmd_validate(&cfg)?;
            let summary = format!("validate: {}", if report.pass { "pass" } else { "FAIL" });
            (report.to_json(), summary, report.pass)
        }
        Command::Converge { ladder, .. } => {
            let csv = cmd_converge(&cfg, ladder)?;
            let summary = format!("converge: {} levels", csv.lines().count() - 1);
            (csv, summary, true)
        }
    };
    emit(&cfg, common, &text)?;
    if !common.quiet {
        eprintln!("{summary}");
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::Failed) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
