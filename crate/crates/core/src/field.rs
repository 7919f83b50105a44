//! Reconstruction of `P(x,t)` from the origin history, survival and absorption.
//!
//! ```text
//! P(x,t) = free(x,t) − (1/√(πD)) ∫₀ᵗ g(t′)·exp(−x²/(4D(t−t′)))/√(t−t′) dt′,   g = k·P(0,·)
//! ```
//!
//! The flux `g` uses the same piecewise representation as the Volterra solve and is
//! integrated exactly against the Gaussian-weighted Abel kernel, so at `x = 0` the
//! weights collapse to the Volterra ones and the origin history is reproduced.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::model::{Problem, SpaceGrid};
use crate::specfun::erfcx_nonneg;
use crate::volterra::{abel_moments, weighted_moments, FirstInterval, OriginHistory};

/// `P(x, t)` on a space grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub grid: SpaceGrid,
    pub time: f64,
    pub values: Vec<f64>,
}

/// Survival probability with a note when the grid truncates visible mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Survival {
    pub value: f64,
    /// Boundary density relative to the maximum, when it exceeds [`TRUNCATION_LIMIT`].
    pub truncation: Option<f64>,
}

pub const TRUNCATION_LIMIT: f64 = 1e-12;

/// Probability bookkeeping on a set of grid times.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    pub times: Vec<f64>,
    pub survival: Vec<f64>,
    pub absorbed: Vec<f64>,
    pub residual: Vec<f64>,
    /// Times whose survival carried a truncation warning.
    pub truncated: Vec<bool>,
}

impl BalanceReport {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().copied().fold(0.0, f64::max)
    }
}

/// Antiderivatives of `τ^{-1/2}·exp(−b/τ)` and `τ^{1/2}·exp(−b/τ)` at integer `τ = m`
/// (time measured in steps), for `m = 0..=len`.
struct KernelTable {
    b: f64,
    phi0: Vec<f64>,
    phi1: Vec<f64>,
}

impl KernelTable {
    fn new(b: f64, len: usize) -> Self {
        let mut phi0 = vec![0.0; len + 1];
        let mut phi1 = vec![0.0; len + 1];
        if b > 0.0 {
            for m in 1..=len {
                let mf = m as f64;
                let ratio = b / mf;
                if ratio > 745.0 {
                    continue;
                }
                let e = (-ratio).exp();
                let z = ratio.sqrt();
                let p0 = 2.0 * mf.sqrt() * e * (1.0 - (PI * ratio).sqrt() * erfcx_nonneg(z));
                phi0[m] = p0;
                phi1[m] = 2.0 / 3.0 * mf * mf.sqrt() * e - 2.0 * b / 3.0 * p0;
            }
        }
        Self { b, phi0, phi1 }
    }

    /// Weights (in units of `√h`) on the earlier and later node of the interval
    /// spanning `τ ∈ [m−1, m]`.
    fn hat(&self, m: usize) -> (f64, f64) {
        if self.b == 0.0 {
            return abel_moments(m);
        }
        let d0 = self.phi0[m] - self.phi0[m - 1];
        let d1 = self.phi1[m] - self.phi1[m - 1];
        let lo = (m - 1) as f64;
        (d1 - lo * d0, m as f64 * d0 - d1)
    }

    fn full(&self, m: usize) -> f64 {
        if self.b == 0.0 {
            let (a, b) = abel_moments(m);
            return a + b;
        }
        self.phi0[m] - self.phi0[m - 1]
    }

    fn inverse_sqrt(&self, m: usize) -> f64 {
        let mid = m as f64 - 0.5;
        2.0 * (1.0 / (m as f64).sqrt()).asin() * (-self.b / mid).exp()
    }
}

fn grid_index(oh: &OriginHistory, t: f64) -> Result<usize> {
    oh.grid.index_of(t).ok_or_else(|| {
        let (lo, hi) = oh.grid.neighbours(t);
        crate::error::Error::Domain(format!(
            "time {t} is not on the solution grid; nearest grid times are {lo} and {hi}"
        ))
    })
}

fn check_history(oh: &OriginHistory) -> Result<()> {
    let len = oh.grid.n_steps() + 1;
    if oh.values.len() != len || oh.forcing.len() != len || oh.flux.nodes.len() != len {
        return domain("origin history arrays do not match its grid");
    }
    Ok(())
}

/// Sink contribution `Σ` (in units of `√h`) at step `n` for one kernel table.
fn sink_sum(p: &Problem, oh: &OriginHistory, table: &KernelTable, n: usize) -> f64 {
    let g = &oh.flux.nodes;
    let v = &oh.flux.ratio;
    let mut total = 0.0;
    let regular_from = match oh.flux.first {
        FirstInterval::Linear => 0,
        FirstInterval::Midpoint { value } => {
            total += table.full(n) * value;
            1
        }
        FirstInterval::InverseSqrt => {
            total += table.inverse_sqrt(n) * g[1];
            1
        }
    };
    let window = oh.flux.window().min(n);
    if regular_from < window {
        let f = |t: f64| p.initial_condition.free_density(p.d(), 0.0, t);
        let h = oh.grid.step();
        for i in regular_from..window {
            let (early, late) = weighted_moments(&f, h, n, n - i, table.b);
            total += early * v[i] + late * v[i + 1];
        }
    }
    for i in regular_from.max(window)..n {
        let (early, late) = table.hat(n - i);
        total += early * g[i] + late * g[i + 1];
    }
    total
}

/// `P(x, t)` at a grid time of the origin history.
pub fn reconstruct(p: &Problem, oh: &OriginHistory, x: f64, t: f64) -> Result<f64> {
    check_history(oh)?;
    let n = grid_index(oh, t)?;
    if !x.is_finite() {
        return domain("reconstruct needs a finite position");
    }
    Ok(reconstruct_at(p, oh, x, n, &KernelTable::new(scaled_b(p, oh, x), n)))
}

fn scaled_b(p: &Problem, oh: &OriginHistory, x: f64) -> f64 {
    x * x / (4.0 * p.d() * oh.grid.step())
}

fn reconstruct_at(p: &Problem, oh: &OriginHistory, x: f64, n: usize, table: &KernelTable) -> f64 {
    let sink = if n == 0 { 0.0 } else { sink_term(p, oh, table, n) };
    p.initial_condition.free_density(p.d(), x, oh.grid.node(n)) - sink
}

/// Sink part of `P(x, tₙ)`; depends on `x` only through `|x|`.
fn sink_term(p: &Problem, oh: &OriginHistory, table: &KernelTable, n: usize) -> f64 {
    let coupling = oh.grid.step().sqrt() / (PI * p.d()).sqrt();
    coupling * sink_sum(p, oh, table, n)
}

/// `P(x, t)` over a space grid at one grid time.
pub fn snapshot(p: &Problem, oh: &OriginHistory, grid: &SpaceGrid, t: f64) -> Result<FieldSnapshot> {
    Ok(snapshots(p, oh, grid, &[t])?.remove(0))
}

/// Snapshots at several grid times; the kernel tables are shared between times.
pub fn snapshots(p: &Problem, oh: &OriginHistory, grid: &SpaceGrid, times: &[f64]) -> Result<Vec<FieldSnapshot>> {
    check_history(oh)?;
    let steps = times.iter().map(|&t| grid_index(oh, t)).collect::<Result<Vec<_>>>()?;
    let n_max = steps.iter().copied().max().unwrap_or(0);
    let xs = grid.nodes();
    let c = grid.center_index();
    let mut out: Vec<FieldSnapshot> = steps
        .iter()
        .map(|&n| FieldSnapshot {
            grid: *grid,
            time: oh.grid.node(n),
            values: vec![0.0; xs.len()],
        })
        .collect();
    // nodes i and 2c − i share |x| and therefore a kernel table
    for i in c..xs.len() {
        let table = KernelTable::new(scaled_b(p, oh, xs[i]), n_max);
        let mirror = 2 * c - i;
        for (snap, &n) in out.iter_mut().zip(&steps) {
            let sink = if n == 0 { 0.0 } else { sink_term(p, oh, &table, n) };
            let t = oh.grid.node(n);
            snap.values[i] = p.initial_condition.free_density(p.d(), xs[i], t) - sink;
            if mirror != i {
                snap.values[mirror] = p.initial_condition.free_density(p.d(), xs[mirror], t) - sink;
            }
        }
    }
    Ok(out)
}

/// Trapezoid mass of a snapshot.
pub fn survival(snap: &FieldSnapshot) -> Survival {
    let v = &snap.values;
    let dx = snap.grid.spacing();
    let interior: f64 = v[1..v.len() - 1].iter().sum();
    let value = dx * (interior + 0.5 * (v[0] + v[v.len() - 1]));
    let peak = v.iter().copied().fold(0.0, f64::max);
    let edge = v[0].abs().max(v[v.len() - 1].abs());
    let truncation = if peak > 0.0 && edge > TRUNCATION_LIMIT * peak {
        Some(edge / peak)
    } else {
        None
    };
    Survival { value, truncation }
}

/// Absorbed probability `A(tₙ) = ∫₀^{tₙ} 2k(t′)P(0,t′) dt′`, cumulative over the grid.
pub fn absorbed_flux(oh: &OriginHistory) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(oh.grid.n_steps() + 1);
    out.push(0.0);
    for i in 0..oh.grid.n_steps() {
        acc += 2.0 * oh.flux.interval_integral(i);
        out.push(acc);
    }
    out
}

/// Survival and absorption at the given grid times, with `|S + A − 1|`.
pub fn balance(p: &Problem, oh: &OriginHistory, grid: &SpaceGrid, times: &[f64]) -> Result<BalanceReport> {
    let snaps = snapshots(p, oh, grid, times)?;
    let absorbed_all = absorbed_flux(oh);
    let mut report = BalanceReport {
        times: Vec::new(),
        survival: Vec::new(),
        absorbed: Vec::new(),
        residual: Vec::new(),
        truncated: Vec::new(),
    };
    for snap in &snaps {
        let n = grid_index(oh, snap.time)?;
        let s = survival(snap);
        let a = absorbed_all[n];
        report.times.push(snap.time);
        report.survival.push(s.value);
        report.absorbed.push(a);
        report.residual.push((s.value + a - 1.0).abs());
        report.truncated.push(s.truncation.is_some());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{heat_kernel, InitialCondition, SinkModel, TimeGrid};
    use crate::quad::integrate_real;
    use crate::volterra::solve_origin;

    fn setup(sink: SinkModel, n_steps: usize) -> (Problem, OriginHistory) {
        let p = Problem::new(1.0, sink, InitialCondition::DeltaAt { x0: -1.0 });
        let oh = solve_origin(&p, &TimeGrid::new(2.0, n_steps).unwrap()).unwrap();
        (p, oh)
    }

    #[test]
    fn kernel_table_weights_match_quadrature() {
        // oracle: adaptive quadrature of the hat functions against the Gaussian Abel kernel
        let b = 0.37;
        let table = KernelTable::new(b, 12);
        for m in [1usize, 2, 5, 12] {
            let k = |tau: f64| if tau <= 0.0 { 0.0 } else { (-b / tau).exp() / tau.sqrt() };
            let lo = (m - 1) as f64;
            let (early, _, _) = integrate_real(|tau| k(tau) * (tau - lo), lo, m as f64, 1e-15, 1e-14);
            let (late, _, _) = integrate_real(|tau| k(tau) * (m as f64 - tau), lo, m as f64, 1e-15, 1e-14);
            let (e, l) = table.hat(m);
            assert!((e - early).abs() < 1e-12, "m = {m}");
            assert!((l - late).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn zero_sink_is_heat_kernel() {
        let (p, oh) = setup(SinkModel::Zero, 64);
        let grid = SpaceGrid::new(6.0, 121).unwrap();
        let snap = snapshot(&p, &oh, &grid, 1.0).unwrap();
        for (x, v) in grid.nodes().iter().zip(&snap.values) {
            assert_eq!(*v, heat_kernel(1.0, x + 1.0, 1.0));
        }
    }

    #[test]
    fn forcing_weighted_moments_match_quadrature() {
        // τ = t_n − t′ in steps; interval m spans τ ∈ [m−1, m]
        let (h, n) = (1e-3, 200usize);
        let f = |t: f64| (-1.0 / (4.0 * t)).exp() / (4.0 * PI * t).sqrt();
        for b in [0.0, 0.3, 5.0, 80.0] {
            let mut worst: f64 = 0.0;
            let mut peak: f64 = 0.0;
            for m in [1usize, 2, 7, 40, 150, 200] {
                let (early, late) = crate::volterra::weighted_moments(&f, h, n, m, b);
                let lo = (m - 1) as f64;
                let kernel = |tau: f64| f(h * (n as f64 - tau)) * (-b / tau).exp() / tau.sqrt();
                let (qe, _, _) = integrate_real(|tau| (tau - lo) * kernel(tau), lo, m as f64, 1e-300, 1e-13);
                let (ql, _, _) = integrate_real(|tau| (m as f64 - tau) * kernel(tau), lo, m as f64, 1e-300, 1e-13);
                worst = worst.max((early - qe).abs()).max((late - ql).abs());
                peak = peak.max(qe.abs()).max(ql.abs());
            }
            assert!(
                worst <= 1e-10 * peak,
                "b = {b}: error {worst:e} against moments up to {peak:e}"
            );
        }
    }

    #[test]
    fn field_inside_forcing_window_matches_closed_form() {
        let p = Problem::new(
            1.0,
            SinkModel::Constant { k0: 1.0 },
            InitialCondition::DeltaAt { x0: -1.0 },
        );
        let oh = solve_origin(&p, &TimeGrid::new(4.0, 4096).unwrap()).unwrap();
        assert!(oh.flux.window() > 50);
        for (x, t) in [
            (0.0, 0.05078125),
            (0.02, 0.05078125),
            (-0.3, 0.05078125),
            (0.5, 1.0),
            (-2.0, 1.0),
        ] {
            let v = reconstruct(&p, &oh, x, t).unwrap();
            let exact =
                crate::analytic::constant_sink_propagator(&crate::analytic::PropagatorQuery::new(x, -1.0, t, 1.0), 1.0)
                    .unwrap();
            assert!((v - exact).abs() <= 1e-4 * exact, "x = {x}, t = {t}: {v} vs {exact}");
        }
    }

    #[test]
    fn origin_consistency() {
        let (p, oh) = setup(SinkModel::Constant { k0: 1.3 }, 128);
        for n in [1usize, 2, 17, 128] {
            let t = oh.grid.node(n);
            let v = reconstruct(&p, &oh, 0.0, t).unwrap();
            assert!((v - oh.values[n]).abs() < 1e-10);
        }
    }

    #[test]
    fn off_grid_time_names_neighbours() {
        let (p, oh) = setup(SinkModel::Constant { k0: 1.0 }, 16);
        let err = reconstruct(&p, &oh, 0.3, 0.3).unwrap_err().to_string();
        assert!(err.contains("0.25") && err.contains("0.375"), "{err}");
    }

    #[test]
    fn symmetric_problem_gives_symmetric_snapshot() {
        let p = Problem::new(
            1.0,
            SinkModel::Constant { k0: 1.0 },
            InitialCondition::DeltaAt { x0: 0.0 },
        );
        let oh = solve_origin(&p, &TimeGrid::new(1.0, 200).unwrap()).unwrap();
        let grid = SpaceGrid::new(6.0, 241).unwrap();
        let snap = snapshot(&p, &oh, &grid, 1.0).unwrap();
        let n = snap.values.len();
        for i in 0..n {
            assert!((snap.values[i] - snap.values[n - 1 - i]).abs() < 1e-9);
        }
    }

    #[test]
    fn absorbed_is_monotone_and_zero_without_sink() {
        let (_, oh) = setup(SinkModel::Zero, 32);
        assert!(absorbed_flux(&oh).iter().all(|&a| a == 0.0));
        let (_, oh1) = setup(SinkModel::Constant { k0: 1.0 }, 256);
        let (_, oh2) = setup(SinkModel::Constant { k0: 2.0 }, 256);
        let a1 = absorbed_flux(&oh1);
        let a2 = absorbed_flux(&oh2);
        assert!(a1.windows(2).all(|w| w[1] >= w[0]));
        let n = oh1.grid.index_of(1.0).unwrap();
        assert!(a2[n] > a1[n] && a2[n] < 2.0 * a1[n]);
    }

    #[test]
    fn survival_flags_truncation() {
        let (p, oh) = setup(SinkModel::Zero, 32);
        let narrow = SpaceGrid::new(2.0, 81).unwrap();
        let s = survival(&snapshot(&p, &oh, &narrow, 2.0).unwrap());
        assert!(s.truncation.is_some());
        let wide = SpaceGrid::new(16.0, 1601).unwrap();
        let s = survival(&snapshot(&p, &oh, &wide, 1.0).unwrap());
        assert!(s.truncation.is_none());
        assert!((s.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn balance_closes() {
        let (p, oh) = setup(SinkModel::Constant { k0: 1.0 }, 512);
        let grid = SpaceGrid::new(12.0, 4801).unwrap();
        let report = balance(&p, &oh, &grid, &[0.5, 1.0]).unwrap();
        assert!(report.max_residual() < 1e-6, "{report:?}");
    }
}
