//! Reconstructs `P(x,t)` from the origin history and checks that survival plus
//! absorbed probability stays at one.
//!
//! ```bash
//! cargo run --release --example field_and_balance
//! ```

use smoluchowski::field::{balance, snapshot, survival};
use smoluchowski::volterra::solve_origin;
use smoluchowski::{InitialCondition, Problem, SinkModel, SpaceGrid, TimeGrid};

fn main() -> smoluchowski::Result<()> {
    let p = Problem::new(
        1.0,
        SinkModel::Constant { k0: 2.0 },
        InitialCondition::Gaussian {
            center: -1.5,
            width: 0.3,
        },
    );
    let grid = TimeGrid::new(1.0, 1024)?;
    let oh = solve_origin(&p, &grid)?;
    let space = SpaceGrid::new(10.0, 2001)?;

    let snap = snapshot(&p, &oh, &space, 1.0)?;
    for i in (0..space.n_points()).step_by(200) {
        println!("x = {:>6.2}  P = {:.6e}", space.node(i), snap.values[i]);
    }
    println!("survival at t = 1: {:.8}", survival(&snap).value);

    let times: Vec<f64> = (1..=4).map(|i| 0.25 * i as f64).collect();
    let report = balance(&p, &oh, &space, &times)?;
    for ((t, s), a) in report.times.iter().zip(&report.survival).zip(&report.absorbed) {
        println!("t = {t:.2}: S = {s:.8}  A = {a:.8}  S + A = {:.8}", s + a);
    }
    println!("max residual {:.2e}", report.max_residual());
    Ok(())
}
