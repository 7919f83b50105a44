//! Exponentially decaying sink: the transform is a shift series in `s`.
//!
//! ```bash
//! cargo run --release --example exponential_sink_series
//! ```

use num_complex::Complex64;
use smoluchowski::laplace::{exponential_sink_series, invert, InversionSpec, TransformMethod};
use smoluchowski::volterra::solve_origin;
use smoluchowski::{InitialCondition, Problem, SinkModel, TimeGrid};

fn main() -> smoluchowski::Result<()> {
    let p = Problem::new(
        1.0,
        SinkModel::Exponential { beta: 2.0, decay: 0.5 },
        InitialCondition::DeltaAt { x0: -1.0 },
    );
    for tol in [1e-4, 1e-8, 1e-14] {
        let v = exponential_sink_series(&p, Complex64::new(1.0, 0.0), tol)?;
        let TransformMethod::Series { n_terms } = v.method else {
            unreachable!()
        };
        println!("tol {tol:.0e}: P̄(0,1) = {:.15e} with {n_terms} terms", v.value.re);
    }
    let grid = TimeGrid::new(4.0, 2048)?;
    let oh = solve_origin(&p, &grid)?;
    let spec = InversionSpec::de_hoog(vec![1.0, 2.0, 4.0]);
    for v in invert(|s| Ok(exponential_sink_series(&p, s, 1e-14)?.value), &spec)? {
        println!(
            "t = {}: de Hoog {:.10e}, volterra {:.10e}",
            v.t,
            v.value,
            oh.values[grid.index_of(v.t).unwrap()]
        );
    }
    Ok(())
}
