//! Origin density for a delta source under each sink law, solved on one time grid.
//!
//! ```bash
//! cargo run --release --example origin_density
//! ```

use smoluchowski::volterra::solve_origin;
use smoluchowski::{InitialCondition, Problem, SinkModel, TimeGrid};

fn main() -> smoluchowski::Result<()> {
    let grid = TimeGrid::new(4.0, 1024)?;
    let sinks = [
        SinkModel::Zero,
        SinkModel::Constant { k0: 1.0 },
        SinkModel::InverseTime { alpha: 1.0 },
        SinkModel::Linear { alpha: 1.0 },
        SinkModel::Exponential { beta: 1.0, decay: 1.0 },
        SinkModel::Tabulated {
            knots: vec![(0.0, 0.0), (1.0, 2.0), (2.0, 0.5), (4.0, 0.5)],
        },
    ];
    println!("{:>12} {:>14} {:>14} {:>14}", "sink", "P(0,1)", "P(0,2)", "P(0,4)");
    for sink in sinks {
        let p = Problem::new(1.0, sink, InitialCondition::DeltaAt { x0: -1.0 });
        let oh = solve_origin(&p, &grid)?;
        let at = |t: f64| oh.values[grid.index_of(t).unwrap()];
        println!(
            "{:>12} {:>14.6e} {:>14.6e} {:>14.6e}",
            p.sink.name(),
            at(1.0),
            at(2.0),
            at(4.0)
        );
    }
    Ok(())
}
