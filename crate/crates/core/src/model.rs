//! Physical problem definition: diffusion coefficient, sink law, initial density, grids.
//!
//! The governing equation is `∂P/∂t = D ∂²P/∂x² − 2k(t)δ(x)P` with `k(t) ≥ 0`
//! meaning absorption at the origin. Units: `[D] = length²/time`,
//! `[k] = length/time`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result, Violation, Violations};
use crate::specfun::erfc;

/// Time dependence of the sink strength `k(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SinkModel {
    Zero,
    Constant {
        k0: f64,
    },
    /// `k(t) = alpha·t`
    Linear {
        alpha: f64,
    },
    /// `k(t) = alpha/t`; `alpha` is a length.
    InverseTime {
        alpha: f64,
    },
    /// `k(t) = beta·exp(−decay·t)`
    Exponential {
        beta: f64,
        decay: f64,
    },
    /// Piecewise linear through `(t, k)` knots, clamped outside the table.
    Tabulated {
        knots: Vec<(f64, f64)>,
    },
}

impl SinkModel {
    /// True when `k(t)` diverges as `t → 0⁺`.
    pub fn singular_at_start(&self) -> bool {
        matches!(self, SinkModel::InverseTime { alpha } if *alpha > 0.0)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SinkModel::Zero => true,
            SinkModel::Constant { k0 } => *k0 == 0.0,
            SinkModel::Linear { alpha } | SinkModel::InverseTime { alpha } => *alpha == 0.0,
            SinkModel::Exponential { beta, .. } => *beta == 0.0,
            SinkModel::Tabulated { knots } => knots.iter().all(|&(_, k)| k == 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SinkModel::Zero => "zero",
            SinkModel::Constant { .. } => "constant",
            SinkModel::Linear { .. } => "linear",
            SinkModel::InverseTime { .. } => "inverse_time",
            SinkModel::Exponential { .. } => "exponential",
            SinkModel::Tabulated { .. } => "tabulated",
        }
    }

    /// `k(t)` without argument checks; callers guarantee `t` is in the domain.
    pub(crate) fn rate(&self, t: f64) -> f64 {
        match self {
            SinkModel::Zero => 0.0,
            SinkModel::Constant { k0 } => *k0,
            SinkModel::Linear { alpha } => alpha * t,
            SinkModel::InverseTime { alpha } => alpha / t,
            SinkModel::Exponential { beta, decay } => beta * (-decay * t).exp(),
            SinkModel::Tabulated { knots } => interpolate_clamped(knots, t),
        }
    }

    fn check(&self, out: &mut Vec<Violation>) {
        let mut nonneg = |name: &str, v: f64| {
            if !v.is_finite() {
                out.push(Violation::new(
                    "sink_parameter_nonfinite",
                    format!("sink parameter {name} must be finite, got {v}"),
                ));
            } else if v < 0.0 {
                out.push(Violation::new(
                    "sink_parameter_negative",
                    format!("sink parameter {name} must be >= 0 (absorbing sink), got {v}"),
                ));
            }
        };
        match self {
            SinkModel::Zero => {}
            SinkModel::Constant { k0 } => nonneg("k0", *k0),
            SinkModel::Linear { alpha } | SinkModel::InverseTime { alpha } => nonneg("alpha", *alpha),
            SinkModel::Exponential { beta, decay } => {
                nonneg("beta", *beta);
                if !decay.is_finite() {
                    out.push(Violation::new(
                        "sink_parameter_nonfinite",
                        format!("sink parameter decay must be finite, got {decay}"),
                    ));
                }
            }
            SinkModel::Tabulated { knots } => {
                if knots.is_empty() {
                    out.push(Violation::new(
                        "sink_table_empty",
                        "tabulated sink needs at least one knot",
                    ));
                }
                if knots.iter().any(|&(t, k)| !t.is_finite() || !k.is_finite()) {
                    out.push(Violation::new(
                        "sink_parameter_nonfinite",
                        "tabulated sink knots must be finite",
                    ));
                }
                if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
                    out.push(Violation::new(
                        "sink_table_unsorted",
                        "tabulated sink knot times must be strictly increasing",
                    ));
                }
                if knots.iter().any(|&(_, k)| k < 0.0) {
                    out.push(Violation::new(
                        "sink_table_negative",
                        "tabulated sink values must be >= 0",
                    ));
                }
            }
        }
    }
}

fn interpolate_clamped(knots: &[(f64, f64)], t: f64) -> f64 {
    let (first, last) = match (knots.first(), knots.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return 0.0,
    };
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    let i = knots.partition_point(|&(tk, _)| tk <= t);
    let (t0, k0) = knots[i - 1];
    let (t1, k1) = knots[i];
    if t == t0 {
        return k0;
    }
    k0 + (k1 - k0) * (t - t0) / (t1 - t0)
}

/// Evaluates `k(t)` (not `2k(t)`).
pub fn evaluate_sink(sink: &SinkModel, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return domain(format!("sink evaluated at negative or NaN time {t}"));
    }
    if t == 0.0 && matches!(sink, SinkModel::InverseTime { .. }) {
        return domain("inverse-time sink is undefined at t = 0");
    }
    Ok(sink.rate(t))
}

/// Initial probability density `P(x, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `δ(x − x0)`
    #[serde(rename = "delta")]
    DeltaAt { x0: f64 },
    /// Unit-mass normal density.
    Gaussian { center: f64, width: f64 },
    /// Piecewise-linear density through `(x, density)` knots, zero outside.
    Tabulated { x: Vec<f64>, density: Vec<f64> },
}

fn trapezoid_mass(x: &[f64], p: &[f64]) -> f64 {
    x.windows(2)
        .zip(p.windows(2))
        .map(|(xs, ps)| 0.5 * (xs[1] - xs[0]) * (ps[0] + ps[1]))
        .sum()
}

impl InitialCondition {
    /// Builds a tabulated density, rescaled so its trapezoid mass is 1.
    pub fn tabulated(x: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        let ic = InitialCondition::Tabulated { x, density };
        let mut v = Vec::new();
        ic.check_shape(&mut v);
        if !v.is_empty() {
            return Err(Error::Invalid(Violations(v)));
        }
        let InitialCondition::Tabulated { x, mut density } = ic else {
            unreachable!()
        };
        let mass = trapezoid_mass(&x, &density);
        if !(mass > 0.0) {
            return Err(Error::Invalid(Violations(vec![Violation::new(
                "ic_table_mass",
                "tabulated initial density has zero mass",
            )])));
        }
        // leave an already normalized table bit-identical
        if (mass - 1.0).abs() > 1e-14 {
            density.iter_mut().for_each(|d| *d /= mass);
        }
        Ok(InitialCondition::Tabulated { x, density })
    }

    fn check_shape(&self, out: &mut Vec<Violation>) {
        match self {
            InitialCondition::DeltaAt { x0 } => {
                if !x0.is_finite() {
                    out.push(Violation::new("ic_nonfinite", "delta position must be finite"));
                }
            }
            InitialCondition::Gaussian { center, width } => {
                if !center.is_finite() || !width.is_finite() {
                    out.push(Violation::new("ic_nonfinite", "gaussian parameters must be finite"));
                } else if *width <= 0.0 {
                    out.push(Violation::new(
                        "ic_width_nonpositive",
                        format!("gaussian width must be > 0, got {width}"),
                    ));
                }
            }
            InitialCondition::Tabulated { x, density } => {
                if x.len() != density.len() || x.len() < 2 {
                    out.push(Violation::new(
                        "ic_table_shape",
                        "tabulated density needs matching x/density arrays with at least 2 knots",
                    ));
                    return;
                }
                if x.iter().chain(density).any(|v| !v.is_finite()) {
                    out.push(Violation::new("ic_nonfinite", "tabulated density must be finite"));
                }
                if x.windows(2).any(|w| w[1] <= w[0]) {
                    out.push(Violation::new(
                        "ic_table_unsorted",
                        "tabulated x must be strictly increasing",
                    ));
                }
                if density.iter().any(|&d| d < 0.0) {
                    out.push(Violation::new("ic_table_negative", "tabulated densities must be >= 0"));
                }
            }
        }
    }

    fn check(&self, out: &mut Vec<Violation>) {
        let before = out.len();
        self.check_shape(out);
        if out.len() > before {
            return;
        }
        if let InitialCondition::Tabulated { x, density } = self {
            let mass = trapezoid_mass(x, density);
            if (mass - 1.0).abs() > 1e-12 {
                out.push(Violation::new(
                    "ic_table_mass",
                    format!("tabulated density must have unit mass, got {mass}"),
                ));
            }
        }
    }

    /// `P(0, 0)`: infinite for a delta placed exactly at the origin.
    pub fn origin_density(&self) -> f64 {
        match self {
            InitialCondition::DeltaAt { x0 } => {
                if *x0 == 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            _ => self.pointwise(0.0),
        }
    }

    fn pointwise(&self, x: f64) -> f64 {
        match self {
            InitialCondition::DeltaAt { .. } => f64::NAN,
            InitialCondition::Gaussian { center, width } => {
                let z = (x - center) / width;
                (-0.5 * z * z).exp() / (width * (2.0 * PI).sqrt())
            }
            InitialCondition::Tabulated { x: xs, density } => {
                if x < xs[0] || x > xs[xs.len() - 1] {
                    return 0.0;
                }
                let i = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
                let (x0, x1) = (xs[i - 1], xs[i]);
                density[i - 1] + (density[i] - density[i - 1]) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Free-diffusion evolution of this density: `∫ g(x − x′, t) P(x′, 0) dx′`.
    pub fn free_density(&self, d: f64, x: f64, t: f64) -> f64 {
        if t == 0.0 {
            return match self {
                InitialCondition::DeltaAt { x0 } if x == *x0 => f64::INFINITY,
                InitialCondition::DeltaAt { .. } => 0.0,
                _ => self.pointwise(x),
            };
        }
        match self {
            InitialCondition::DeltaAt { x0 } => heat_kernel(d, x - x0, t),
            InitialCondition::Gaussian { center, width } => {
                let var = width * width + 2.0 * d * t;
                let z = x - center;
                (-z * z / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
            }
            InitialCondition::Tabulated { x: xs, density } => {
                let sigma = (2.0 * d * t).sqrt();
                let cdf = |w: f64| 0.5 * erfc(-w / (sigma * std::f64::consts::SQRT_2)).unwrap_or(0.0);
                let pdf = |w: f64| (-w * w / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt());
                let mut total = 0.0;
                for i in 0..xs.len() - 1 {
                    let (a, b) = (xs[i], xs[i + 1]);
                    let slope = (density[i + 1] - density[i]) / (b - a);
                    let mass = cdf(b - x) - cdf(a - x);
                    let first = sigma * sigma * (pdf(b - x) - pdf(a - x));
                    total += (density[i] + slope * (x - a)) * mass - slope * first;
                }
                total
            }
        }
    }
}

/// Free heat kernel `exp(−r²/(4Dt))/√(4πDt)`.
pub fn heat_kernel(d: f64, r: f64, t: f64) -> f64 {
    (-r * r / (4.0 * d * t)).exp() / (4.0 * PI * d * t).sqrt()
}

/// Pointwise initial density. Not available for `DeltaAt`.
pub fn evaluate_ic(ic: &InitialCondition, x: f64) -> Result<f64> {
    match ic {
        InitialCondition::DeltaAt { .. } => Err(Error::Unsupported(
            "a delta initial condition has no pointwise density".into(),
        )),
        _ => Ok(ic.pointwise(x)),
    }
}

/// Diffusion coefficient, sink law and initial density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub diffusion_coefficient: f64,
    pub sink: SinkModel,
    pub initial_condition: InitialCondition,
}

/// A Gaussian counts as vanishing at the origin when its center is this many widths away.
pub const GAUSSIAN_CLEARANCE: f64 = 8.0;

impl Problem {
    pub fn new(diffusion_coefficient: f64, sink: SinkModel, initial_condition: InitialCondition) -> Self {
        Self {
            diffusion_coefficient,
            sink,
            initial_condition,
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let d = self.diffusion_coefficient;
        if !(d.is_finite() && d > 0.0) {
            out.push(Violation::new(
                "diffusion_nonpositive",
                format!("diffusion coefficient must be finite and > 0, got {d}"),
            ));
        }
        self.sink.check(&mut out);
        self.initial_condition.check(&mut out);
        if matches!(self.sink, SinkModel::InverseTime { .. }) {
            let vanishes = match &self.initial_condition {
                InitialCondition::DeltaAt { x0 } => *x0 != 0.0,
                InitialCondition::Gaussian { center, width } => center.abs() >= GAUSSIAN_CLEARANCE * width,
                ic @ InitialCondition::Tabulated { .. } => ic.pointwise(0.0) == 0.0,
            };
            if !vanishes {
                out.push(Violation::new(
                    "inverse_time_origin_density",
                    "the inverse-time sink needs an initial density that vanishes at the origin",
                ));
            }
        }
        out
    }

    pub fn d(&self) -> f64 {
        self.diffusion_coefficient
    }
}

/// Accepts the problem if every invariant holds; otherwise lists each violation.
pub fn validate_problem(p: Problem) -> Result<Problem> {
    let v = p.violations();
    if v.is_empty() {
        Ok(p)
    } else {
        Err(Error::Invalid(Violations(v)))
    }
}

pub(crate) fn ensure_valid(p: &Problem) -> Result<()> {
    let v = p.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(Violations(v)))
    }
}

/// Uniform time grid `tₙ = n·t_max/n_steps`, `n = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_max: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return domain(format!("t_max must be finite and > 0, got {t_max}"));
        }
        if n_steps < 2 {
            return domain(format!("n_steps must be >= 2, got {n_steps}"));
        }
        Ok(Self { t_max, n_steps })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    pub fn node(&self, n: usize) -> f64 {
        if n == self.n_steps {
            self.t_max
        } else {
            self.t_max * n as f64 / self.n_steps as f64
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(|n| self.node(n))
    }

    /// Index of the node equal to `t` (to 1e-9 of a step), if any.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let r = t / self.step();
        let n = r.round();
        if n < 0.0 || n > self.n_steps as f64 || (r - n).abs() > 1e-9 {
            None
        } else {
            Some(n as usize)
        }
    }

    /// The grid nodes immediately below and above `t`.
    pub fn neighbours(&self, t: f64) -> (f64, f64) {
        let n = (t / self.step()).floor().clamp(0.0, self.n_steps as f64) as usize;
        (self.node(n), self.node((n + 1).min(self.n_steps)))
    }
}

/// Symmetric uniform grid on `[−L, L]` with an odd number of points, containing `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceGrid {
    half_width: f64,
    n_points: usize,
}

impl SpaceGrid {
    pub fn new(half_width: f64, n_points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return domain(format!("half_width must be finite and > 0, got {half_width}"));
        }
        if n_points < 3 || n_points.is_multiple_of(2) {
            return domain(format!("n_points must be odd and >= 3, got {n_points}"));
        }
        Ok(Self { half_width, n_points })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    pub fn center_index(&self) -> usize {
        (self.n_points - 1) / 2
    }

    pub fn node(&self, i: usize) -> f64 {
        let c = self.center_index();
        if i == 0 {
            -self.half_width
        } else if i == self.n_points - 1 {
            self.half_width
        } else if i >= c {
            (i - c) as f64 * self.spacing()
        } else {
            -((c - i) as f64 * self.spacing())
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(x0: f64) -> InitialCondition {
        InitialCondition::DeltaAt { x0 }
    }

    #[test]
    fn sink_examples() {
        assert_eq!(evaluate_sink(&SinkModel::Constant { k0: 1.0 }, 5.0).unwrap(), 1.0);
        assert_eq!(evaluate_sink(&SinkModel::Linear { alpha: 2.0 }, 0.0).unwrap(), 0.0);
        let e = SinkModel::Exponential { beta: 3.0, decay: 1.0 };
        assert_eq!(evaluate_sink(&e, 0.0).unwrap(), 3.0);
    }

    #[test]
    fn sink_domain_errors() {
        assert!(evaluate_sink(&SinkModel::InverseTime { alpha: 1.0 }, 0.0).is_err());
        assert!(evaluate_sink(&SinkModel::Constant { k0: 1.0 }, -1.0).is_err());
        assert_eq!(evaluate_sink(&SinkModel::InverseTime { alpha: 2.0 }, 4.0).unwrap(), 0.5);
    }

    #[test]
    fn tabulated_sink_clamps_and_hits_knots() {
        let s = SinkModel::Tabulated {
            knots: vec![(0.5, 1.0), (1.0, 3.0), (2.0, 2.0)],
        };
        assert_eq!(evaluate_sink(&s, 0.0).unwrap(), 1.0);
        assert_eq!(evaluate_sink(&s, 1.0).unwrap(), 3.0);
        assert_eq!(evaluate_sink(&s, 1.5).unwrap(), 2.5);
        assert_eq!(evaluate_sink(&s, 9.0).unwrap(), 2.0);
    }

    #[test]
    fn gaussian_ic_density() {
        let g = InitialCondition::Gaussian {
            center: 0.0,
            width: 1.0,
        };
        let v = evaluate_ic(&g, 0.0).unwrap();
        assert!((v - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert_eq!(evaluate_ic(&g, 3.0).unwrap(), evaluate_ic(&g, -3.0).unwrap());
        assert!(matches!(evaluate_ic(&delta(1.0), 0.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tabulated_ic_is_normalized() {
        let ic = InitialCondition::tabulated(vec![-1.0, 0.0, 1.0, 2.0], vec![0.0, 2.0, 4.0, 0.0]).unwrap();
        let InitialCondition::Tabulated { x, density } = &ic else {
            panic!()
        };
        assert!((trapezoid_mass(x, density) - 1.0).abs() < 1e-12);
        assert!(InitialCondition::tabulated(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn validation_examples() {
        let ok = Problem::new(1.0, SinkModel::InverseTime { alpha: 1.0 }, delta(-1.0));
        assert!(validate_problem(ok).is_ok());

        let at_origin = Problem::new(1.0, SinkModel::InverseTime { alpha: 1.0 }, delta(0.0));
        let Err(Error::Invalid(v)) = validate_problem(at_origin) else {
            panic!()
        };
        assert_eq!(v.codes(), vec!["inverse_time_origin_density"]);

        let neg_d = Problem::new(-1.0, SinkModel::Zero, delta(-1.0));
        let Err(Error::Invalid(v)) = validate_problem(neg_d) else {
            panic!()
        };
        assert_eq!(v.codes(), vec!["diffusion_nonpositive"]);
    }

    #[test]
    fn validation_reports_every_violation() {
        let p = Problem::new(
            0.0,
            SinkModel::Tabulated {
                knots: vec![(1.0, -1.0), (0.5, 1.0)],
            },
            InitialCondition::Gaussian {
                center: 0.0,
                width: -1.0,
            },
        );
        let codes = p.violations().iter().map(|v| v.code).collect::<Vec<_>>();
        assert_eq!(
            codes,
            vec![
                "diffusion_nonpositive",
                "sink_table_unsorted",
                "sink_table_negative",
                "ic_width_nonpositive"
            ]
        );
    }

    #[test]
    fn gaussian_clearance_proxy() {
        let near = Problem::new(
            1.0,
            SinkModel::InverseTime { alpha: 1.0 },
            InitialCondition::Gaussian {
                center: -2.0,
                width: 0.5,
            },
        );
        assert!(validate_problem(near).is_err());
        let far = Problem::new(
            1.0,
            SinkModel::InverseTime { alpha: 1.0 },
            InitialCondition::Gaussian {
                center: -4.0,
                width: 0.5,
            },
        );
        assert!(validate_problem(far).is_ok());
    }

    #[test]
    fn grids() {
        let g = TimeGrid::new(4.0, 4096).unwrap();
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(4096), 4.0);
        assert_eq!(g.index_of(1.0), Some(1024));
        assert_eq!(g.index_of(1.0001), None);
        assert!(TimeGrid::new(1.0, 1).is_err());

        let s = SpaceGrid::new(12.0, 2401).unwrap();
        assert_eq!(s.node(s.center_index()), 0.0);
        for i in 0..s.n_points() {
            assert_eq!(s.node(i), -s.node(s.n_points() - 1 - i));
        }
        assert!(SpaceGrid::new(1.0, 10).is_err());
    }

    #[test]
    fn tabulated_free_density_matches_quadrature() {
        let ic = InitialCondition::tabulated(vec![-2.0, -1.0, 0.5], vec![0.0, 1.0, 0.0]).unwrap();
        let (d, t, x) = (0.7, 0.3, -0.4);
        // midpoint rule against the piecewise-linear density
        let n = 200_000;
        let (a, b) = (-2.0, 0.5);
        let h = (b - a) / n as f64;
        let brute: f64 = (0..n)
            .map(|i| {
                let xp = a + (i as f64 + 0.5) * h;
                ic.pointwise(xp) * heat_kernel(d, x - xp, t) * h
            })
            .sum();
        assert!((ic.free_density(d, x, t) - brute).abs() < 1e-9);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn sink() -> impl Strategy<Value = SinkModel> {
            prop_oneof![
                Just(SinkModel::Zero),
                (0.0..10.0f64).prop_map(|k0| SinkModel::Constant { k0 }),
                (0.0..10.0f64).prop_map(|alpha| SinkModel::Linear { alpha }),
                (0.0..10.0f64).prop_map(|alpha| SinkModel::InverseTime { alpha }),
                (0.0..10.0f64, -2.0..2.0f64).prop_map(|(beta, decay)| SinkModel::Exponential { beta, decay }),
                proptest::collection::vec(0.0..5.0f64, 1..6).prop_map(|ks| SinkModel::Tabulated {
                    knots: ks.iter().enumerate().map(|(i, &k)| (i as f64 * 0.5, k)).collect()
                }),
            ]
        }

        proptest! {
            #[test]
            fn sink_is_nonnegative(s in sink(), t in 1e-6..100.0f64) {
                let k = evaluate_sink(&s, t).unwrap();
                prop_assert!(k >= 0.0);
                prop_assert_eq!(k, evaluate_sink(&s, t).unwrap());
            }

            #[test]
            fn tabulated_exact_at_knots(ks in proptest::collection::vec(0.0..5.0f64, 1..8)) {
                let knots: Vec<_> = ks.iter().enumerate().map(|(i, &k)| (0.3 * i as f64, k)).collect();
                let s = SinkModel::Tabulated { knots: knots.clone() };
                for (t, k) in knots {
                    prop_assert_eq!(evaluate_sink(&s, t).unwrap(), k);
                }
            }

            #[test]
            fn validation_is_idempotent(s in sink(), x0 in -3.0..3.0f64, d in -1.0..2.0f64) {
                let p = Problem::new(d, s, InitialCondition::DeltaAt { x0 });
                if let Ok(valid) = validate_problem(p) {
                    prop_assert!(validate_problem(valid).is_ok());
                }
            }
        }
    }
}
