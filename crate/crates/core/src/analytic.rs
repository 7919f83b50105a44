//! Closed-form propagators `G(x, x′, t)` for the sink laws that admit one.

use crate::error::{domain, Result};
use crate::model::heat_kernel;
use crate::specfun::erfcx_nonneg;

/// Evaluation point `x`, source point `x′`, time and diffusion coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorQuery {
    pub x: f64,
    pub x_src: f64,
    pub t: f64,
    pub d: f64,
}

impl PropagatorQuery {
    pub fn new(x: f64, x_src: f64, t: f64, d: f64) -> Self {
        Self { x, x_src, t, d }
    }

    fn check(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return domain(format!("propagator needs t > 0, got {}", self.t));
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return domain(format!("propagator needs D > 0, got {}", self.d));
        }
        if !self.x.is_finite() || !self.x_src.is_finite() {
            return domain("propagator positions must be finite");
        }
        Ok(())
    }

    /// `|x| + |x′|`, the length of the path reflected through the origin.
    fn via_origin(&self) -> f64 {
        self.x.abs() + self.x_src.abs()
    }

    fn free(&self) -> f64 {
        heat_kernel(self.d, self.x - self.x_src, self.t)
    }

    fn image(&self) -> f64 {
        heat_kernel(self.d, self.via_origin(), self.t)
    }
}

/// Free heat kernel `exp(−(x−x′)²/(4Dt))/√(4πDt)`.
pub fn free_propagator(q: &PropagatorQuery) -> Result<f64> {
    q.check()?;
    Ok(q.free())
}

/// Propagator for a constant sink `k0`:
///
/// ```text
/// G = g(x−x′,t) − (k0/2D)·exp(−r²/(4Dt))·erfcx(k0√(t/D) + r/(2√(Dt))),   r = |x|+|x′|
/// ```
///
/// The scaled `erfcx` keeps the sink term finite for arbitrarily large `k0·√(t/D)`.
pub fn constant_sink_propagator(q: &PropagatorQuery, k0: f64) -> Result<f64> {
    q.check()?;
    if !(k0 >= 0.0 && k0.is_finite()) {
        return domain(format!("constant sink needs finite k0 >= 0, got {k0}"));
    }
    if k0 == 0.0 {
        return Ok(q.free());
    }
    let r = q.via_origin();
    let z = k0 * (q.t / q.d).sqrt() + r / (2.0 * (q.d * q.t).sqrt());
    let sink = k0 / (2.0 * q.d) * (-r * r / (4.0 * q.d * q.t)).exp() * erfcx_nonneg(z);
    Ok(q.free() - sink)
}

/// Perfectly absorbing origin (`k0 → ∞`): `g(x−x′,t) − g(|x|+|x′|,t)`.
pub fn absorbing_limit_propagator(q: &PropagatorQuery) -> Result<f64> {
    q.check()?;
    if q.x == 0.0 || q.x.signum() != q.x_src.signum() {
        // the two Gaussians coincide exactly
        return Ok(0.0);
    }
    Ok(q.free() - q.image())
}

/// Propagator for the inverse-time sink `k(t) = α/t`:
///
/// ```text
/// G = g(x−x′,t) − (2α/(|x′|+2α))·g(|x|+|x′|,t)
/// ```
///
/// Valid for sources off the origin only.
pub fn inverse_time_propagator(q: &PropagatorQuery, alpha: f64) -> Result<f64> {
    q.check()?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return domain(format!("inverse-time sink needs finite alpha >= 0, got {alpha}"));
    }
    if q.x_src == 0.0 {
        return domain("inverse-time propagator needs a source off the origin");
    }
    if alpha == 0.0 {
        return Ok(q.free());
    }
    let weight = 2.0 * alpha / (q.x_src.abs() + 2.0 * alpha);
    Ok(q.free() - weight * q.image())
}

/// `P(0,t)` for a delta source at `x′` under the inverse-time sink:
/// `(|x′|/(|x′|+2α))·g(x′,t)`.
pub fn inverse_time_origin(d: f64, x_src: f64, alpha: f64, t: f64) -> Result<f64> {
    inverse_time_propagator(&PropagatorQuery::new(0.0, x_src, t, d), alpha)
}

/// Half-line absorbing Green's function by the method of images (both points on
/// the same side of the origin).
pub fn half_line_image_propagator(q: &PropagatorQuery) -> Result<f64> {
    q.check()?;
    let (x, y) = (q.x.abs(), q.x_src.abs());
    Ok(heat_kernel(q.d, x - y, q.t) - heat_kernel(q.d, x + y, q.t))
}
