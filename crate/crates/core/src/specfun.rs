//! Complementary error function and its scaled form `erfcx(z) = exp(z²)·erfc(z)`.
//!
//! The rational approximations are the FreeBSD `s_erf.c` ones (Sun Microsystems,
//! freely redistributable with this notice preserved). For `z ≥ 1.25` the scaled
//! form is evaluated directly from the `exp(-0.5625 + R/S)/z` representation, so
//! `erfcx` never forms `exp(z²)` there and cannot overflow.

#![allow(clippy::excessive_precision)]

use crate::error::{domain, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Above this point erfcx switches to its asymptotic series.
const ASYMPTOTIC_FROM: f64 = 28.0;

const ERX: f64 = 8.45062911510467529297e-01;

// coefficients for approximation to  erf in [0, 0.84375]
const EFX: f64 = 1.28379167095512586316e-01;
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;

// coefficients for approximation to  erf  in [0.84375, 1.25]
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;

// coefficients for approximation to  erfc in [1.25, 1/0.35]
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;

// coefficients for approximation to  erfc in [1/.35, 28]
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

/// Returns `erf(x)` for `0 ≤ x < 0.84375`.
fn erf_small(x: f64) -> f64 {
    if x < 1.0e-300 {
        return x + EFX * x;
    }
    let z = x * x;
    let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
    let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
    x + x * (r / s)
}

/// `erfc(x)` for `0 ≤ x < 1.25`.
fn erfc_core(x: f64) -> f64 {
    if x < 0.25 {
        1.0 - erf_small(x)
    } else if x < 0.84375 {
        let z = x * x;
        let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
        let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
        0.5 - (x * (r / s) + (x - 0.5))
    } else {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        1.0 - ERX - p / q
    }
}

/// `R/S` such that `erfc(x) = exp(-x² - 0.5625 + R/S) / x`, valid on `[1.25, 28)`.
fn tail_ratio(x: f64) -> f64 {
    let s = 1.0 / (x * x);
    if x < 1.0 / 0.35 {
        let r = RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7))))));
        let q = 1.0 + s * (SA1 + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8)))))));
        r / q
    } else {
        let r = RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6)))));
        let q = 1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7))))));
        r / q
    }
}

/// `erfc(x)` for `x ≥ 0`, no argument checks.
fn erfc_nonneg(x: f64) -> f64 {
    if x < 1.25 {
        erfc_core(x)
    } else if x < ASYMPTOTIC_FROM {
        // split x² so the exponent keeps full precision
        let hi = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
        (-hi * hi - 0.5625).exp() * ((hi - x) * (hi + x) + tail_ratio(x)).exp() / x
    } else {
        0.0
    }
}

/// Complementary error function.
pub fn erfc(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return domain(format!("erfc argument must be finite, got {z}"));
    }
    Ok(if z < 0.0 { 2.0 - erfc_nonneg(-z) } else { erfc_nonneg(z) })
}

/// Scaled complementary error function `exp(z²)·erfc(z)` for `z ≥ 0`.
pub fn erfcx(z: f64) -> Result<f64> {
    if z.is_nan() || z < 0.0 {
        return domain(format!("erfcx is supported for z >= 0, got {z}"));
    }
    Ok(erfcx_nonneg(z))
}

/// Unchecked `erfcx` for the inner loops of the propagators; `z` must be ≥ 0.
pub(crate) fn erfcx_nonneg(z: f64) -> f64 {
    if z < 1.25 {
        (z * z).exp() * erfc_core(z)
    } else if z < ASYMPTOTIC_FROM {
        (tail_ratio(z) - 0.5625).exp() / z
    } else if z.is_infinite() {
        0.0
    } else {
        // 1/(z√π) · Σ (-1)ⁿ (2n-1)!! / (2z²)ⁿ; at z ≥ 28 eight terms reach 1e-18
        let w = 1.0 / (2.0 * z * z);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..9 {
            term *= -((2 * n - 1) as f64) * w;
            sum += term;
        }
        FRAC_1_SQRT_PI * sum / z
    }
}
