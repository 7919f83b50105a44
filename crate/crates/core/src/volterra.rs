//! Origin density `P(0,t)` from the second-kind Volterra equation
//!
//! ```text
//! P(0,t) + (1/√(πD)) ∫₀ᵗ k(t′)P(0,t′)/√(t−t′) dt′ = f(t)
//! ```
//!
//! where `f` is the free evolution of the initial density evaluated at the origin.
//! The singular integral is discretized by product integration: the sink flux
//! `g = k·P(0,·)` is interpolated piecewise linearly on the uniform grid and
//! integrated exactly against the Abel kernel.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::model::{ensure_valid, InitialCondition, Problem, TimeGrid};

/// Free evolution of the initial density at the origin.
pub fn free_origin_forcing(p: &Problem, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return domain(format!("forcing requested at negative time {t}"));
    }
    if t == 0.0 {
        return Ok(p.initial_condition.origin_density());
    }
    Ok(p.initial_condition.free_density(p.d(), 0.0, t))
}

/// Abel moments of the two hat functions on an interval ending `m` steps
/// before the evaluation time, in units of `√h`:
/// `A_m = ∫₀¹ (1−σ)(m−σ)^{-1/2} dσ`, `B_m = ∫₀¹ σ(m−σ)^{-1/2} dσ`.
pub(crate) fn abel_moments(m: usize) -> (f64, f64) {
    debug_assert!(m >= 1);
    let a = ((m - 1) as f64).sqrt();
    let b = (m as f64).sqrt();
    let s = (a + b) * (a + b);
    (2.0 / 3.0 * (2.0 * a + b) / s, 2.0 / 3.0 * (a + 2.0 * b) / s)
}

/// `2·asin(1/√m)`: the Abel integral of `(h/t′)^{1/2}` over the first interval, in units of `√h`.
fn inverse_sqrt_moment(m: usize) -> f64 {
    2.0 * (1.0 / (m as f64).sqrt()).asin()
}

/// Product-integration weights `w[n][j]`, `j = 0..=n`, such that
/// `Σⱼ w[n][j]·g(tⱼ) = ∫₀^{tₙ} g(t′)/√(tₙ−t′) dt′` for piecewise-linear `g`.
pub fn abel_weights(grid: &TimeGrid, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > grid.n_steps() {
        return domain(format!("step index {n} outside 1..={}", grid.n_steps()));
    }
    let sh = grid.step().sqrt();
    let mut w = vec![0.0; n + 1];
    for i in 0..n {
        let (a, b) = abel_moments(n - i);
        w[i] += sh * a;
        w[i + 1] += sh * b;
    }
    Ok(w)
}

/// How the sink flux is represented on the first interval `[0, h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FirstInterval {
    /// Linear between the nodal fluxes, like every other interval.
    Linear,
    /// Constant `k(h/2)·(P₀ + P₁)/2`; used when `k` is singular at `t = 0`.
    Midpoint { value: f64 },
    /// `g₁·(h/t′)^{1/2}`; used when the initial density is a delta at the origin.
    InverseSqrt,
}

/// Sink flux `g(t) = k(t)·P(0,t)` on the grid, together with its interpolation rules.
#[derive(Debug, Clone, PartialEq)]
pub struct SinkFlux {
    /// `g(tₙ)`
    pub nodes: Vec<f64>,
    pub first: FirstInterval,
    /// `v = g/f` on the leading nodes whose intervals carry `g = f·v` with `v`
    /// linear (see [`forcing_window`]); empty when every interval is linear in `g`.
    pub ratio: Vec<f64>,
    /// `∫ g` over each interval under the rule used in the march.
    pub integrals: Vec<f64>,
}

impl SinkFlux {
    /// Number of leading intervals interpolated as `f·v`.
    pub fn window(&self) -> usize {
        self.ratio.len().saturating_sub(1)
    }

    /// Whether interval `i` is interpolated as `f·v`.
    pub fn is_weighted(&self, i: usize) -> bool {
        i < self.window() && !(i == 0 && matches!(self.first, FirstInterval::Midpoint { .. }))
    }

    /// `∫` of the interpolated flux over interval `i` (`[tᵢ, tᵢ₊₁]`).
    pub fn interval_integral(&self, i: usize) -> f64 {
        self.integrals[i]
    }
}

/// Solved origin density on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginHistory {
    pub grid: TimeGrid,
    /// `P(0, tₙ)`
    pub values: Vec<f64>,
    /// Free-evolution forcing `f(tₙ)`
    pub forcing: Vec<f64>,
    pub flux: SinkFlux,
}

impl OriginHistory {
    pub fn times(&self) -> Vec<f64> {
        self.grid.nodes().collect()
    }
}

/// Bound on the dimensionless steepness `t·|d ln f/dt|` of the forcing beyond
/// which `g` is no longer interpolated linearly.
const FORCING_STEEPNESS: f64 = 2.0;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
#[allow(clippy::excessive_precision)]
const GL8: [(f64, f64); 8] = [
    (0.019_855_071_751_231_856, 0.050_614_268_145_188_13),
    (0.101_666_761_293_186_63, 0.111_190_517_226_687_24),
    (0.237_233_795_041_835_5, 0.156_853_322_938_943_64),
    (0.408_282_678_752_175_1, 0.181_341_891_689_180_99),
    (0.591_717_321_247_824_9, 0.181_341_891_689_180_99),
    (0.762_766_204_958_164_5, 0.156_853_322_938_943_64),
    (0.898_333_238_706_813_4, 0.111_190_517_226_687_24),
    (0.980_144_928_248_768_2, 0.050_614_268_145_188_13),
];

/// Number of leading intervals on which the forcing changes too fast for `g`
/// to be interpolated linearly.
///
/// When the origin is reached only through the Gaussian tail of the initial
/// density, `g` grows by orders of magnitude within a single step at early
/// times while `k·P(0,·)/f` stays smooth. Only initial conditions whose forcing
/// has a cheap closed form qualify.
pub fn forcing_window(p: &Problem, forcing: &[f64]) -> usize {
    let cheap = match p.initial_condition {
        InitialCondition::DeltaAt { x0 } => x0 != 0.0,
        InitialCondition::Gaussian { .. } => true,
        InitialCondition::Tabulated { .. } => false,
    };
    if !cheap || p.sink.is_zero() {
        return 0;
    }
    let steep = |(i, w): (usize, &[f64])| {
        // t·|d ln f/dt| on interval i, measured at its right end
        !(w[0] > 0.0 && w[1] > 0.0) || (i + 1) as f64 * (w[1] / w[0]).ln().abs() > FORCING_STEEPNESS
    };
    forcing
        .windows(2)
        .enumerate()
        .collect::<Vec<_>>()
        .into_iter()
        .rposition(steep)
        .map_or(0, |i| i + 1)
}

/// Hat moments (in units of `√h`) of the interval `m` steps before `tₙ`, with
/// the forcing and the spatial kernel `exp(−b/τ)` folded in:
/// `2∫ (1−θ, θ)·f(h(n−σ²))·exp(−b/σ²) dσ` over `σ ∈ [√(m−1), √m]`, `θ = m − σ²`.
pub(crate) fn weighted_moments<F: Fn(f64) -> f64>(f: &F, h: f64, n: usize, m: usize, b: f64) -> (f64, f64) {
    let lo = ((m - 1) as f64).sqrt();
    let hi = (m as f64).sqrt();
    let panel = |a: f64, c: f64, acc: &mut (f64, f64)| {
        let (mut early, mut late) = (0.0, 0.0);
        for (x, w) in GL8 {
            let sigma = a + (c - a) * x;
            let theta = m as f64 - sigma * sigma;
            let mut fw = w * f(h * (n as f64 - sigma * sigma));
            if b > 0.0 {
                fw *= (-b / (sigma * sigma)).exp();
            }
            early += (1.0 - theta) * fw;
            late += theta * fw;
        }
        acc.0 += 2.0 * (c - a) * early;
        acc.1 += 2.0 * (c - a) * late;
    };
    let mut acc = (0.0, 0.0);
    if b == 0.0 {
        panel(lo, hi, &mut acc);
        return acc;
    }
    // skip the part where the kernel underflows, then panels on which b/σ² drops by at most 1
    let mut a = lo.max((b / 700.0).sqrt());
    while a < hi {
        let e = b / (a * a) - 1.0;
        let c = if e > b / (hi * hi) { (b / e).sqrt().min(hi) } else { hi };
        panel(a, c, &mut acc);
        a = c;
    }
    acc
}

/// `∫` over `[tᵢ, tᵢ₊₁]` of `f·v` with `v` linear between `v0` and `v1`.
fn weighted_interval<F: Fn(f64) -> f64>(f: &F, t0: f64, h: f64, v0: f64, v1: f64) -> f64 {
    GL8.iter()
        .map(|&(x, w)| w * f(t0 + h * x) * ((1.0 - x) * v0 + x * v1))
        .sum::<f64>()
        * h
}

/// Marches the product-integration discretization forward in time, solving one
/// scalar linear equation per step.
pub fn solve_origin(p: &Problem, grid: &TimeGrid) -> Result<OriginHistory> {
    ensure_valid(p)?;
    let n_steps = grid.n_steps();
    let h = grid.step();
    let forcing = grid
        .nodes()
        .map(|t| free_origin_forcing(p, t))
        .collect::<Result<Vec<_>>>()?;

    if p.sink.is_zero() {
        return Ok(OriginHistory {
            grid: *grid,
            values: forcing.clone(),
            forcing,
            flux: SinkFlux {
                nodes: vec![0.0; n_steps + 1],
                first: FirstInterval::Linear,
                ratio: Vec::new(),
                integrals: vec![0.0; n_steps],
            },
        });
    }

    let coupling = h.sqrt() / (PI * p.d()).sqrt();
    let k: Vec<f64> = (0..=n_steps)
        .map(|n| {
            if n == 0 && p.sink.singular_at_start() {
                f64::NAN
            } else {
                p.sink.rate(grid.node(n))
            }
        })
        .collect();
    let moments: Vec<(f64, f64)> = std::iter::once((0.0, 0.0))
        .chain((1..=n_steps).map(abel_moments))
        .collect();
    let first_kind = if p.sink.singular_at_start() {
        FirstInterval::Midpoint { value: 0.0 }
    } else if forcing[0].is_infinite() {
        FirstInterval::InverseSqrt
    } else {
        FirstInterval::Linear
    };
    let k_half = p.sink.rate(0.5 * h);
    let window = forcing_window(p, &forcing);
    let f = |t: f64| p.initial_condition.free_density(p.d(), 0.0, t);
    let weighted = |i: usize| i < window && !(i == 0 && matches!(first_kind, FirstInterval::Midpoint { .. }));

    let mut u = vec![0.0; n_steps + 1];
    let mut g = vec![0.0; n_steps + 1];
    let mut v = vec![0.0; if window > 0 { window + 1 } else { 0 }];
    u[0] = forcing[0];
    if first_kind == FirstInterval::Linear {
        g[0] = k[0] * u[0];
        if window > 0 {
            // limit of k·P(0,t)/f(t) as t → 0
            v[0] = k[0];
        }
    }
    let mut g_mid = 0.0;

    for n in 1..=n_steps {
        let fn_ = forcing[n];
        // `diag` collects the coefficient of the unknown P(0, tₙ)
        let mut history = 0.0;
        let mut diag = 0.0;
        match first_kind {
            FirstInterval::Midpoint { .. } => {
                let (a, b) = moments[n];
                if n == 1 {
                    history += (a + b) * k_half * 0.5 * u[0];
                    diag += (a + b) * k_half * 0.5;
                } else {
                    history += (a + b) * g_mid;
                }
            }
            FirstInterval::InverseSqrt => {
                if n == 1 {
                    diag += PI * k[1];
                } else {
                    history += inverse_sqrt_moment(n) * g[1];
                }
            }
            FirstInterval::Linear => {}
        }
        let regular_from = usize::from(first_kind != FirstInterval::Linear);
        let mut last_weighted = false;
        for i in regular_from..n {
            let (early, late, left, right, k_last) = if weighted(i) {
                let (e, l) = weighted_moments(&f, h, n, n - i, 0.0);
                let right = if i + 1 < n { v[i + 1] } else { 0.0 };
                last_weighted = i + 1 == n;
                (e, l, v[i], right, if fn_ > 0.0 { k[n] / fn_ } else { 0.0 })
            } else {
                let (e, l) = moments[n - i];
                (e, l, g[i], if i + 1 < n { g[i + 1] } else { 0.0 }, k[n])
            };
            history += early * left;
            if i + 1 < n {
                history += late * right;
            } else {
                diag += late * k_last;
            }
        }
        let un = if last_weighted && !(fn_ > 0.0) {
            // nothing has reached the origin yet
            0.0
        } else {
            let lhs = 1.0 + coupling * diag;
            if !(lhs > 0.0) {
                return Err(Error::Breakdown(format!(
                    "non-positive diagonal coefficient {lhs} at step {n}"
                )));
            }
            (fn_ - coupling * history) / lhs
        };
        if !un.is_finite() {
            return Err(Error::Breakdown(format!("non-finite origin density at step {n}")));
        }
        u[n] = un;
        g[n] = k[n] * un;
        if n < v.len() {
            v[n] = if fn_ > 0.0 { g[n] / fn_ } else { 0.0 };
        }
        if n == 1 {
            g_mid = k_half * 0.5 * (u[0] + u[1]);
        }
    }

    let first = match first_kind {
        FirstInterval::Midpoint { .. } => FirstInterval::Midpoint { value: g_mid },
        other => other,
    };
    let integrals = (0..n_steps)
        .map(|i| match (i, first) {
            (0, FirstInterval::Midpoint { value }) => h * value,
            (0, FirstInterval::InverseSqrt) => 2.0 * h * g[1],
            _ if weighted(i) => weighted_interval(&f, grid.node(i), h, v[i], v[i + 1]),
            _ => 0.5 * h * (g[i] + g[i + 1]),
        })
        .collect();
    Ok(OriginHistory {
        grid: *grid,
        values: u,
        forcing,
        flux: SinkFlux {
            nodes: g,
            first,
            ratio: v,
            integrals,
        },
    })
}
