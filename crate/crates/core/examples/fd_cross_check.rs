//! Crank–Nicolson reference solution against the integral-equation field.
//!
//! ```bash
//! cargo run --release --example fd_cross_check
//! ```

use smoluchowski::fdoracle::{cn_solve, compare, FdConfig};
use smoluchowski::field::snapshots;
use smoluchowski::volterra::solve_origin;
use smoluchowski::{InitialCondition, Problem, SinkModel, SpaceGrid, TimeGrid};

fn main() -> smoluchowski::Result<()> {
    let p = Problem::new(
        1.0,
        SinkModel::Linear { alpha: 2.0 },
        InitialCondition::DeltaAt { x0: -1.0 },
    );
    let space = SpaceGrid::new(12.0, 2401)?;
    let times = [0.5, 1.0];
    let oh = solve_origin(&p, &TimeGrid::new(1.0, 1024)?)?;
    let volterra = snapshots(&p, &oh, &space, &times)?;
    for steps in [250, 1000, 4000] {
        let (cfg, _) = FdConfig::new(space, TimeGrid::new(1.0, steps)?).recording_at(&times)?;
        let fd = cn_solve(&p, &cfg)?;
        let err = compare(&fd, &volterra)?;
        println!(
            "{steps:>5} steps: relative L∞ {:.3e}, L2 {:.3e}, balance residual {:.1e}",
            err.max_relative_linf(),
            err.max_l2(),
            fd.max_balance_residual()
        );
    }
    Ok(())
}
