//! Closed-form propagator for a constant sink, against the Volterra solution and
//! the perfectly absorbing limit.
//!
//! ```bash
//! cargo run --release --example constant_sink_propagator
//! ```

use smoluchowski::analytic::{absorbing_limit_propagator, constant_sink_propagator, PropagatorQuery};
use smoluchowski::volterra::solve_origin;
use smoluchowski::{InitialCondition, Problem, SinkModel, TimeGrid};

fn main() -> smoluchowski::Result<()> {
    let p = Problem::new(
        1.0,
        SinkModel::Constant { k0: 1.0 },
        InitialCondition::DeltaAt { x0: -1.0 },
    );
    let grid = TimeGrid::new(4.0, 2048)?;
    let oh = solve_origin(&p, &grid)?;
    println!("{:>6} {:>16} {:>16} {:>10}", "t", "closed form", "volterra", "rel err");
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let exact = constant_sink_propagator(&PropagatorQuery::new(0.0, -1.0, t, 1.0), 1.0)?;
        let v = oh.values[grid.index_of(t).unwrap()];
        println!(
            "{t:>6} {exact:>16.10e} {v:>16.10e} {:>10.2e}",
            (v - exact).abs() / exact
        );
    }

    // a strong sink approaches the absorbing wall on the source side
    let q = PropagatorQuery::new(0.5, 1.0, 1.0, 1.0);
    println!("\nG(0.5, 1, t = 1) on the source side:");
    for k0 in [1.0, 10.0, 100.0, 1e4] {
        println!("  k0 = {k0:>7}: {:.8e}", constant_sink_propagator(&q, k0)?);
    }
    println!("  absorbing : {:.8e}", absorbing_limit_propagator(&q)?);
    Ok(())
}
