//! Crank–Nicolson finite differences for the full PDE on `[−L, L]`, used as an
//! independent brute-force check on the integral-equation pipeline.
//!
//! The sink is a single-node rate `2k/Δx` at the origin, Dirichlet zeros sit at
//! `±L`, and a delta initial condition is replaced by a Gaussian of width `3Δx`.

use crate::error::{domain, Error, Result};
use crate::field::FieldSnapshot;
use crate::model::{ensure_valid, evaluate_ic, InitialCondition, Problem, SinkModel, SpaceGrid, TimeGrid};

/// Boundary density allowed relative to the peak before the run is rejected.
pub const BOUNDARY_LIMIT: f64 = 1e-10;

/// Grids for a finite-difference run.
#[derive(Debug, Clone, PartialEq)]
pub struct FdConfig {
    pub space: SpaceGrid,
    pub time: TimeGrid,
    /// Keep a snapshot every `record_stride` steps (the final step is always kept).
    pub record_stride: usize,
    /// Further steps to keep regardless of the stride.
    pub record_steps: Vec<usize>,
}

impl FdConfig {
    pub fn new(space: SpaceGrid, time: TimeGrid) -> Self {
        Self {
            space,
            time,
            record_stride: 1,
            record_steps: Vec::new(),
        }
    }

    /// Records only the snapshots at `times`, which must be grid times.
    pub fn recording_at(mut self, times: &[f64]) -> Result<(Self, Vec<usize>)> {
        let mut idx = Vec::with_capacity(times.len());
        for &t in times {
            match self.time.index_of(t) {
                Some(n) => idx.push(n),
                None => {
                    let (lo, hi) = self.time.neighbours(t);
                    return domain(format!("t = {t} is not a grid time; nearest are {lo} and {hi}"));
                }
            }
        }
        self.record_stride = self.time.n_steps() + 1;
        self.record_steps = idx.clone();
        Ok((self, idx))
    }
}

/// Recorded snapshots plus per-step origin density and probability bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldHistory {
    pub snapshots: Vec<FieldSnapshot>,
    /// Time grid the run stepped on.
    pub time: TimeGrid,
    /// `P(0, tₙ)` for every step, including `n = 0`.
    pub origin: Vec<f64>,
    /// Trapezoid mass for every step.
    pub survival: Vec<f64>,
    /// Cumulative absorbed probability for every step.
    pub absorbed: Vec<f64>,
}

impl FieldHistory {
    /// `max |S + A − S(0)|` over all steps.
    pub fn max_balance_residual(&self) -> f64 {
        let s0 = self.survival[0];
        self.survival
            .iter()
            .zip(&self.absorbed)
            .map(|(s, a)| (s + a - s0).abs())
            .fold(0.0, f64::max)
    }

    /// Recorded snapshot at grid time `t`.
    pub fn at(&self, t: f64) -> Option<&FieldSnapshot> {
        let tol = 1e-9 * self.time.step();
        self.snapshots.iter().find(|s| (s.time - t).abs() <= tol)
    }
}

fn initial_values(ic: &InitialCondition, grid: &SpaceGrid) -> Result<Vec<f64>> {
    let xs = grid.nodes();
    let dx = grid.spacing();
    let mut v: Vec<f64> = match ic {
        InitialCondition::DeltaAt { x0 } => {
            let w = 3.0 * dx;
            xs.iter().map(|x| (-0.5 * ((x - x0) / w).powi(2)).exp()).collect()
        }
        _ => xs.iter().map(|&x| evaluate_ic(ic, x)).collect::<Result<_>>()?,
    };
    let last = v.len() - 1;
    v[0] = 0.0;
    v[last] = 0.0;
    if matches!(ic, InitialCondition::DeltaAt { .. }) {
        let mass: f64 = v.iter().sum::<f64>() * dx;
        if !(mass > 0.0) {
            return domain("the regularized delta falls outside the grid");
        }
        v.iter_mut().for_each(|p| *p /= mass);
    }
    Ok(v)
}

/// Mean sink rate over step `n → n+1`.
fn step_rate(sink: &SinkModel, time: &TimeGrid, n: usize) -> f64 {
    let (a, b) = (time.node(n), time.node(n + 1));
    if n == 0 && sink.singular_at_start() {
        return sink.rate(0.5 * (a + b));
    }
    0.5 * (sink.rate(a) + sink.rate(b))
}

/// Solves `(1 + r)·uᵢ − (r/2)(uᵢ₋₁ + uᵢ₊₁) + σ·[i = c]·uᵢ = rhsᵢ` on interior nodes.
fn thomas(r: f64, center: usize, sigma: f64, rhs: &[f64], out: &mut [f64], scratch: &mut [f64]) {
    let n = rhs.len();
    let off = -0.5 * r;
    let diag = |i: usize| 1.0 + r + if i == center { sigma } else { 0.0 };
    // forward sweep: scratch holds the modified super-diagonal
    let mut denom = diag(0);
    scratch[0] = off / denom;
    out[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag(i) - off * scratch[i - 1];
        scratch[i] = off / denom;
        out[i] = (rhs[i] - off * out[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        out[i] -= scratch[i] * out[i + 1];
    }
}

/// Runs Crank–Nicolson from `t = 0` to the end of `cfg.time`.
pub fn cn_solve(p: &Problem, cfg: &FdConfig) -> Result<FieldHistory> {
    ensure_valid(p)?;
    if cfg.record_stride == 0 {
        return domain("record_stride must be at least 1");
    }
    let grid = &cfg.space;
    let dx = grid.spacing();
    let dt = cfg.time.step();
    let r = p.d() * dt / (dx * dx);
    let c = grid.center_index();
    let n_nodes = grid.n_points();
    let steps = cfg.time.n_steps();

    let mut u = initial_values(&p.initial_condition, grid)?;
    let mass = |u: &[f64]| u.iter().sum::<f64>() * dx;
    let mut history = FieldHistory {
        snapshots: vec![FieldSnapshot {
            grid: *grid,
            time: 0.0,
            values: u.clone(),
        }],
        time: cfg.time,
        origin: Vec::with_capacity(steps + 1),
        survival: Vec::with_capacity(steps + 1),
        absorbed: Vec::with_capacity(steps + 1),
    };
    history.origin.push(u[c]);
    history.survival.push(mass(&u));
    history.absorbed.push(0.0);

    let interior = n_nodes - 2;
    let mut rhs = vec![0.0; interior];
    let mut next = vec![0.0; interior];
    let mut scratch = vec![0.0; interior];
    let mut peak: f64 = u.iter().copied().fold(0.0, f64::max);
    let mut edge: f64 = 0.0;
    let mut absorbed = 0.0;
    for n in 0..steps {
        let k = step_rate(&p.sink, &cfg.time, n);
        let sigma = dt * k / dx;
        for i in 1..n_nodes - 1 {
            let lap = u[i - 1] - 2.0 * u[i] + u[i + 1];
            let sink = if i == c { sigma * u[i] } else { 0.0 };
            rhs[i - 1] = u[i] + 0.5 * r * lap - sink;
        }
        thomas(r, c - 1, sigma, &rhs, &mut next, &mut scratch);
        let before = u[c];
        u[1..n_nodes - 1].copy_from_slice(&next);
        absorbed += dt * 2.0 * k * 0.5 * (before + u[c]);
        if !u[c].is_finite() {
            return Err(Error::Breakdown(format!(
                "finite-difference solution blew up at step {}",
                n + 1
            )));
        }

        history.origin.push(u[c]);
        history.survival.push(mass(&u));
        history.absorbed.push(absorbed);
        peak = peak.max(u.iter().copied().fold(0.0, f64::max));
        edge = edge.max(u[1].abs()).max(u[n_nodes - 2].abs());
        if (n + 1) % cfg.record_stride == 0 || n + 1 == steps || cfg.record_steps.contains(&(n + 1)) {
            history.snapshots.push(FieldSnapshot {
                grid: *grid,
                time: cfg.time.node(n + 1),
                values: u.clone(),
            });
        }
    }
    if edge > BOUNDARY_LIMIT * peak {
        return Err(Error::Truncation {
            boundary: edge / peak,
            limit: BOUNDARY_LIMIT,
        });
    }
    Ok(history)
}

/// Pairwise error norms at the times both sides share.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub times: Vec<f64>,
    /// `max |a − b|` over `|x| ≤ L/2`.
    pub linf: Vec<f64>,
    /// `(∫ (a − b)² dx)^{1/2}` over `|x| ≤ L/2`.
    pub l2: Vec<f64>,
    /// `linf` divided by the finite-difference peak on the same window.
    pub relative_linf: Vec<f64>,
}

impl ErrorReport {
    pub fn max_linf(&self) -> f64 {
        self.linf.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_l2(&self) -> f64 {
        self.l2.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_relative_linf(&self) -> f64 {
        self.relative_linf.iter().copied().fold(0.0, f64::max)
    }
}

/// Linear interpolation of a snapshot at `x`, `None` outside its grid.
fn interpolate(snap: &FieldSnapshot, x: f64) -> Option<f64> {
    let g = &snap.grid;
    let pos = (x + g.half_width()) / g.spacing();
    if pos < -1e-9 || pos > (g.n_points() - 1) as f64 + 1e-9 {
        return None;
    }
    let near = pos.round();
    if (pos - near).abs() < 1e-9 {
        return Some(snap.values[near as usize]);
    }
    let i = (pos.floor() as usize).min(g.n_points() - 2);
    let w = (pos - i as f64).clamp(0.0, 1.0);
    Some((1.0 - w) * snap.values[i] + w * snap.values[i + 1])
}

/// Compares the finite-difference field with other snapshots, interpolated onto
/// the finite-difference grid, on the interior window `|x| ≤ L/2`.
pub fn compare(fd: &FieldHistory, other: &[FieldSnapshot]) -> Result<ErrorReport> {
    let mut report = ErrorReport {
        times: Vec::new(),
        linf: Vec::new(),
        l2: Vec::new(),
        relative_linf: Vec::new(),
    };
    for snap in other {
        let Some(reference) = fd.at(snap.time) else {
            continue;
        };
        let g = &reference.grid;
        let window = 0.5 * g.half_width();
        let (mut linf, mut sq, mut peak) = (0.0f64, 0.0, 0.0f64);
        for (i, x) in g.nodes().into_iter().enumerate() {
            if x.abs() > window + 1e-12 {
                continue;
            }
            let theirs = interpolate(snap, x)
                .ok_or_else(|| Error::Domain(format!("snapshot at t = {} does not cover x = {x}", snap.time)))?;
            let diff = reference.values[i] - theirs;
            linf = linf.max(diff.abs());
            sq += diff * diff * g.spacing();
            peak = peak.max(reference.values[i].abs());
        }
        report.times.push(snap.time);
        report.linf.push(linf);
        report.l2.push(sq.sqrt());
        report.relative_linf.push(if peak > 0.0 { linf / peak } else { linf });
    }
    if report.times.is_empty() {
        return domain("no common times between the finite-difference history and the snapshots");
    }
    Ok(report)
}
