//! Talbot and de Hoog inversion of textbook transform pairs, with error estimates.
//!
//! ```bash
//! cargo run --release --example laplace_inversion
//! ```

use num_complex::Complex64;
use smoluchowski::laplace::{invert_with_estimates, InversionSpec};
use smoluchowski::specfun::erfc;

type Pair = (&'static str, fn(Complex64) -> Complex64, fn(f64) -> f64);

fn main() -> smoluchowski::Result<()> {
    let pairs: [Pair; 3] = [
        ("1/(s+1)", |s| 1.0 / (s + 1.0), |t| (-t).exp()),
        ("1/√s", |s| 1.0 / s.sqrt(), |t| 1.0 / (std::f64::consts::PI * t).sqrt()),
        (
            "e^{-√s}/s",
            |s| (-s.sqrt()).exp() / s,
            |t| erfc(0.5 / t.sqrt()).unwrap(),
        ),
    ];
    let times = vec![0.5, 1.0, 3.0];
    for (name, f, exact) in pairs {
        for spec in [
            InversionSpec::talbot(times.clone()),
            InversionSpec::de_hoog(times.clone()),
        ] {
            let algo = spec.algorithm;
            for v in invert_with_estimates(|s| Ok(f(s)), &spec)? {
                let err = (v.value - exact(v.t)).abs();
                println!(
                    "{name:>10} {algo:>8?} t = {}: error {err:.1e}, estimate {:.1e}",
                    v.t, v.estimate
                );
            }
        }
    }
    Ok(())
}
