//! `erfc` and the scaled `erfcx = exp(z²)·erfc(z)` (defined for `z ≥ 0`), which
//! stays finite where `erfc` underflows.
//!
//! ```bash
//! cargo run --release --example special_functions
//! ```

use smoluchowski::specfun::{erfc, erfcx};

fn main() -> smoluchowski::Result<()> {
    println!("{:>8} {:>24} {:>24}", "z", "erfc", "erfcx");
    for z in [-3.0, -0.5] {
        println!("{z:>8} {:>24.16e} {:>24}", erfc(z)?, "-");
    }
    for z in [0.0, 0.5, 3.0, 10.0, 27.0, 1e3, 1e6] {
        println!("{z:>8} {:>24.16e} {:>24.16e}", erfc(z)?, erfcx(z)?);
    }
    // large-argument asymptote 1/(z√π)
    let z = 1e6;
    println!(
        "erfcx(1e6)·1e6·√π = {:.16}",
        erfcx(z)? * z * std::f64::consts::PI.sqrt()
    );
    Ok(())
}
