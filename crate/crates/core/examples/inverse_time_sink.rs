//! The inverse-time sink `k = α/t` has a closed-form propagator: the free kernel
//! minus a fixed fraction of its image through the origin.
//!
//! ```bash
//! cargo run --release --example inverse_time_sink
//! ```

use smoluchowski::analytic::{inverse_time_origin, inverse_time_propagator, PropagatorQuery};
use smoluchowski::field::snapshot;
use smoluchowski::volterra::solve_origin;
use smoluchowski::{InitialCondition, Problem, SinkModel, SpaceGrid, TimeGrid};

fn main() -> smoluchowski::Result<()> {
    let alpha = 0.5;
    let p = Problem::new(
        1.0,
        SinkModel::InverseTime { alpha },
        InitialCondition::DeltaAt { x0: -1.0 },
    );
    let grid = TimeGrid::new(2.0, 2048)?;
    let oh = solve_origin(&p, &grid)?;
    for t in [0.5, 1.0, 2.0] {
        let exact = inverse_time_origin(1.0, -1.0, alpha, t)?;
        let v = oh.values[grid.index_of(t).unwrap()];
        println!("P(0,{t}) = {v:.10e}  closed form {exact:.10e}");
    }

    let space = SpaceGrid::new(8.0, 161)?;
    let snap = snapshot(&p, &oh, &space, 2.0)?;
    let worst = space
        .nodes()
        .iter()
        .zip(&snap.values)
        .map(|(&x, v)| Ok((v - inverse_time_propagator(&PropagatorQuery::new(x, -1.0, 2.0, 1.0), alpha)?).abs()))
        .collect::<smoluchowski::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("field at t = 2: max |volterra − closed form| = {worst:.2e}");
    Ok(())
}
