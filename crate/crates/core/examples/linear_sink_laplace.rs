//! Linear sink `k = αt`: the Laplace-domain solution comes from a first-order ODE
//! in `s`; inverting it numerically reproduces the time-domain solve.
//!
//! ```bash
//! cargo run --release --example linear_sink_laplace
//! ```

use num_complex::Complex64;
use smoluchowski::laplace::{invert, linear_sink_transform, InversionSpec};
use smoluchowski::volterra::solve_origin;
use smoluchowski::{InitialCondition, Problem, SinkModel, TimeGrid};

fn main() -> smoluchowski::Result<()> {
    let p = Problem::new(
        1.0,
        SinkModel::Linear { alpha: 1.0 },
        InitialCondition::DeltaAt { x0: -1.0 },
    );
    for s in [Complex64::new(1.0, 0.0), Complex64::new(2.0, 3.0)] {
        let v = linear_sink_transform(&p, s)?;
        println!("P̄(0, {s}) = {:.10e} ({:?})", v.value, v.method);
    }
    let grid = TimeGrid::new(4.0, 2048)?;
    let oh = solve_origin(&p, &grid)?;
    let times = vec![0.5, 1.0, 2.0, 4.0];
    let inverted = invert(
        |s| Ok(linear_sink_transform(&p, s)?.value),
        &InversionSpec::talbot(times),
    )?;
    for v in inverted {
        let direct = oh.values[grid.index_of(v.t).unwrap()];
        println!(
            "t = {}: inverted {:.10e} (± {:.1e}), volterra {direct:.10e}",
            v.t, v.value, v.estimate
        );
    }
    Ok(())
}
