//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    /// False when the subdivision limit was hit before the tolerance.
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// Part of `error` that is pure roundoff and cannot shrink under subdivision.
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let dx = h * XGK[i];
        let (lo, hi) = (f(c - dx), f(c + dx));
        let pair = lo + hi;
        k += pair * WGK[i];
        abs += (lo.norm() + hi.norm()) * WGK[i];
        if i % 2 == 1 {
            g += pair * WG[i / 2];
        }
    }
    // QUADPACK rescaling of |K − G| with a roundoff floor
    let raw = (k - g).norm() * h.abs();
    let abs = abs * h.abs();
    let floor = 50.0 * f64::EPSILON * abs;
    let error = if abs > 0.0 {
        (abs * (200.0 * raw / abs).powf(1.5)).min(raw).max(floor)
    } else {
        raw
    };
    Panel {
        a,
        b,
        value: k * h,
        error,
        floor,
    }
}

/// Integrates `f` over `[a, b]` until the error estimate is below
/// `max(abs_tol, rel_tol·|I|)` or `max_panels` panels are in use.
pub fn integrate<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_panels: usize) -> Estimate
where
    F: FnMut(f64) -> Complex64,
{
    let first = kronrod(&mut f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut floor = first.floor;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while error > abs_tol.max(rel_tol * value.norm()) && error > 1.01 * floor {
        if heap.len() >= max_panels {
            return Estimate {
                value,
                error,
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in f64
            heap.push(worst);
            return Estimate {
                value,
                error,
                converged: false,
            };
        }
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift of the incremental updates
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Estimate {
        value,
        error,
        converged: true,
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64, bool)
where
    F: FnMut(f64) -> f64,
{
    let e = integrate(|x| Complex64::new(f(x), 0.0), a, b, abs_tol, rel_tol, 4000);
    (e.value.re, e.error, e.converged)
}
