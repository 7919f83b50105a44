//! Laplace-domain solutions for the origin density and their numerical inversion.
//!
//! Taking the transform of the origin jump condition gives
//!
//! ```text
//! P̄(0,s) = F(s) − L[k·P(0,·)](s) / √(sD),     F(s) = (1/(2√(sD))) ∫ exp(−√(s/D)|x′|) P(x′,0) dx′
//! ```
//!
//! which closes directly for constant and inverse-time sinks, becomes a first-order
//! ODE in `s` for a linear sink and a shift recurrence for an exponential sink.

mod inversion;

pub use inversion::{invert, invert_with_estimates, Algorithm, InversionSpec, InvertedValue};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::model::{InitialCondition, Problem, SinkModel};
use crate::quad::integrate;

/// How a transform value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMethod {
    Direct,
    OdeIntegral,
    Series { n_terms: usize },
}

/// `P̄(0, s)` (or `F(s)`) at one complex frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub s: Complex64,
    pub value: Complex64,
    pub method: TransformMethod,
}

/// Default cap on exponential-series terms.
pub const SERIES_TERM_CAP: usize = 200;

fn check_frequency(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return domain(format!("transform evaluated at non-finite s = {s}"));
    }
    if s.im == 0.0 && s.re <= 0.0 {
        return domain(format!("s = {s} lies on the branch cut of √s"));
    }
    Ok(())
}

/// `∫ w(|x′|)·exp(−q|x′|)·P(x′,0) dx′` for a pointwise initial density.
fn weighted_ic_integral<W: Fn(f64) -> f64>(ic: &InitialCondition, q: Complex64, weight: W) -> Result<Complex64> {
    let pieces: Vec<(f64, f64)> = match ic {
        InitialCondition::DeltaAt { x0 } => {
            return Ok((-q * x0.abs()).exp() * weight(x0.abs()));
        }
        InitialCondition::Gaussian { center, width } => {
            let (a, b) = (center - 12.0 * width, center + 12.0 * width);
            if a < 0.0 && b > 0.0 {
                vec![(a, 0.0), (0.0, b)]
            } else {
                vec![(a, b)]
            }
        }
        InitialCondition::Tabulated { x, .. } => {
            let mut out = Vec::new();
            for w in x.windows(2) {
                if w[0] < 0.0 && w[1] > 0.0 {
                    out.push((w[0], 0.0));
                    out.push((0.0, w[1]));
                } else {
                    out.push((w[0], w[1]));
                }
            }
            out
        }
    };
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in pieces {
        let est = integrate(
            |x| (-q * x.abs()).exp() * (weight(x.abs()) * ic_density(ic, x)),
            a,
            b,
            1e-300,
            1e-12,
            2000,
        );
        if !est.converged {
            return Err(Error::Accuracy {
                best: est.value.norm(),
                estimate: est.error,
            });
        }
        total += est.value;
    }
    Ok(total)
}

fn ic_density(ic: &InitialCondition, x: f64) -> f64 {
    crate::model::evaluate_ic(ic, x).unwrap_or(0.0)
}

/// `F(s)` without the argument check.
fn forcing(p: &Problem, s: Complex64) -> Result<Complex64> {
    let d = p.d();
    let root = s.sqrt();
    let q = root / d.sqrt();
    let integral = weighted_ic_integral(&p.initial_condition, q, |_| 1.0)?;
    Ok(integral / (2.0 * root * d.sqrt()))
}

/// Transform of the free origin forcing.
pub fn forcing_transform(p: &Problem, s: Complex64) -> Result<TransformValue> {
    check_frequency(s)?;
    Ok(TransformValue {
        s,
        value: forcing(p, s)?,
        method: TransformMethod::Direct,
    })
}

/// `P̄(0, s)` for whichever sink the problem carries.
pub fn origin_transform(p: &Problem, s: Complex64) -> Result<TransformValue> {
    check_frequency(s)?;
    let d = p.d();
    let direct = |value| {
        Ok(TransformValue {
            s,
            value,
            method: TransformMethod::Direct,
        })
    };
    match &p.sink {
        SinkModel::Zero => direct(forcing(p, s)?),
        SinkModel::Constant { k0 } => {
            let f = forcing(p, s)?;
            direct(f / (1.0 + *k0 / (s * d).sqrt()))
        }
        SinkModel::InverseTime { alpha } => {
            let root = s.sqrt();
            let q = root / d.sqrt();
            let alpha = *alpha;
            let integral = weighted_ic_integral(&p.initial_condition, q, |r| {
                if r == 0.0 && alpha == 0.0 {
                    1.0
                } else {
                    r / (r + 2.0 * alpha)
                }
            })?;
            direct(integral / (2.0 * root * d.sqrt()))
        }
        SinkModel::Linear { .. } => linear_sink_transform(p, s),
        SinkModel::Exponential { .. } => exponential_sink_series(p, s, 1e-14),
        SinkModel::Tabulated { .. } => Err(Error::Unsupported(
            "tabulated sinks have no Laplace-domain solution; use the Volterra solver".into(),
        )),
    }
}

/// Integrand of the linear-sink solution in the variable `s′`.
struct LinearKernel<'a> {
    p: &'a Problem,
    coef: f64,
    s: Complex64,
}

impl LinearKernel<'_> {
    /// `(2c/3)(s′^{3/2} − s^{3/2})`, factored so that nearby `s′` does not cancel.
    fn phase(&self, sp: Complex64) -> Complex64 {
        let (a, b) = (sp.sqrt(), self.s.sqrt());
        (sp - self.s) * (sp + a * b + self.s) / (a + b) * (2.0 * self.coef / 3.0)
    }

    fn eval(&self, sp: Complex64) -> Result<Complex64> {
        Ok(sp.sqrt() * forcing(self.p, sp)? * (-self.phase(sp)).exp() * self.coef)
    }

    fn decay_exponent(&self, sp: Complex64) -> f64 {
        self.phase(sp).re
    }
}

fn segment_integral(kernel: &LinearKernel, from: Complex64, to: Complex64, abs_tol: f64) -> Result<(Complex64, f64)> {
    let dir = to - from;
    let mut failure = None;
    let est = integrate(
        |tau| match kernel.eval(from + dir * tau) {
            Ok(v) => v * dir,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        0.0,
        1.0,
        abs_tol,
        1e-12,
        400,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !est.converged {
        return Err(Error::Accuracy {
            best: est.value.norm(),
            estimate: est.error,
        });
    }
    Ok((est.value, est.error))
}

/// Integrates the linear-sink kernel from `s` through `via` and then along the
/// horizontal ray to `+∞`.
pub(crate) fn linear_sink_integral(p: &Problem, s: Complex64, via: &[Complex64]) -> Result<Complex64> {
    let SinkModel::Linear { alpha } = p.sink else {
        return Err(Error::Unsupported("linear-sink transform needs a linear sink".into()));
    };
    if !(alpha > 0.0) {
        return domain(format!("linear-sink transform needs alpha > 0, got {alpha}"));
    }
    let kernel = LinearKernel {
        p,
        coef: p.d().sqrt() / alpha,
        s,
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut at = s;
    for &next in via {
        let (v, _) = segment_integral(&kernel, at, next, 0.0)?;
        total += v;
        at = next;
    }
    // panels along the ray, widths doubling from the initial decay length
    let rate = kernel.coef * at.sqrt().norm();
    let mut width = (1.0 / rate.max(1e-300)).min(kernel.coef.powf(-2.0 / 3.0)).max(1e-12);
    let mut start = at;
    for _ in 0..200 {
        let end = start + width;
        let (v, _) = segment_integral(&kernel, start, end, 1e-16 * total.norm())?;
        total += v;
        start = end;
        if kernel.decay_exponent(start) > 45.0 && v.norm() <= 1e-16 * total.norm() {
            return Ok(total);
        }
        width *= 2.0;
    }
    Err(Error::Accuracy {
        best: total.norm(),
        estimate: f64::INFINITY,
    })
}

/// `P̄(0,s)` for `k(t) = αt`: the solution of `P̄′ = (√(sD)/α)(P̄ − F)` that stays
/// bounded as `Re s → ∞`,
///
/// ```text
/// P̄(0,s) = (√D/α) ∫ₛ^∞ √s′ F(s′) exp(−(2√D/(3α))(s′^{3/2} − s^{3/2})) ds′
/// ```
///
/// integrated along the ray parallel to the positive real axis.
pub fn linear_sink_transform(p: &Problem, s: Complex64) -> Result<TransformValue> {
    check_frequency(s)?;
    Ok(TransformValue {
        s,
        value: linear_sink_integral(p, s, &[])?,
        method: TransformMethod::OdeIntegral,
    })
}

/// `P̄(0,s)` for `k(t) = β·exp(−λt)` from the series produced by iterating
/// `P̄(s) = F(s) − (β/√(sD))·P̄(s+λ)`:
///
/// ```text
/// P̄(0,s) = Σₙ (−β)ⁿ F(s+nλ) Πⱼ₌₀ⁿ⁻¹ (D(s+jλ))^{-1/2}
/// ```
pub fn exponential_sink_series(p: &Problem, s: Complex64, tol: f64) -> Result<TransformValue> {
    check_frequency(s)?;
    let SinkModel::Exponential { beta, decay } = p.sink else {
        return Err(Error::Unsupported(
            "exponential series needs an exponential sink".into(),
        ));
    };
    if !(decay > 0.0) {
        return domain(format!(
            "the series path needs a decaying sink (decay > 0), got {decay}; use the Volterra solver"
        ));
    }
    let terms = exponential_terms(p, s, beta, decay, tol)?;
    Ok(TransformValue {
        s,
        value: terms.iter().sum(),
        method: TransformMethod::Series { n_terms: terms.len() },
    })
}

/// Series terms up to and including the first one below `tol·|partial sum|`.
fn exponential_terms(p: &Problem, s: Complex64, beta: f64, decay: f64, tol: f64) -> Result<Vec<Complex64>> {
    let d = p.d();
    let mut terms = vec![forcing(p, s)?];
    if beta == 0.0 {
        return Ok(terms);
    }
    let mut sum = terms[0];
    let mut factor = Complex64::new(1.0, 0.0);
    for n in 1..=SERIES_TERM_CAP {
        let prev = s + decay * (n - 1) as f64;
        factor *= -beta / (prev * d).sqrt();
        let term = factor * forcing(p, s + decay * n as f64)?;
        terms.push(term);
        sum += term;
        if term.norm() < tol * sum.norm() {
            return Ok(terms);
        }
    }
    Err(Error::Convergence { terms: SERIES_TERM_CAP })
}
