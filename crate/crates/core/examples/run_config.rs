//! Builds a run configuration in code, writes it as TOML and runs the CLI
//! commands on it without spawning a process.
//!
//! ```bash
//! cargo run --release --example run_config
//! ```

use smoluchowski::cli::{cmd_converge, cmd_origin, cmd_validate, GridConfig, Method, RunConfig};
use smoluchowski::{InitialCondition, Problem, SinkModel};

fn main() -> Result<(), smoluchowski::cli::CliError> {
    let p = Problem::new(
        1.0,
        SinkModel::Constant { k0: 1.0 },
        InitialCondition::DeltaAt { x0: -1.0 },
    );
    let grid = GridConfig {
        t_max: 1.0,
        n_steps: 512,
        half_width: 16.0,
        n_points: 3201,
    };
    let cfg = RunConfig::from_problem(&p, grid, Method::Volterra);
    println!("{}", cfg.to_toml());

    let csv = cmd_origin(&cfg, Method::Analytic)?;
    println!("{}", csv.lines().take(4).collect::<Vec<_>>().join("\n"));

    let report = cmd_validate(&cfg)?;
    println!("validate: pass = {}", report.pass);
    for c in report.origin.iter().chain(&report.field) {
        println!("  {:?} vs {:?}: {:.2e}", c.a, c.b, c.relative_linf);
    }
    for b in &report.balance {
        println!(
            "  {:?} balance residual {:.2e} (limit {:.0e})",
            b.method, b.max_residual, b.tolerance
        );
    }
    for m in report.methods.iter().filter(|m| !m.ok) {
        println!("  {:?} failed: {}", m.method, m.error.as_deref().unwrap_or(""));
    }
    print!("{}", cmd_converge(&cfg, &[128, 256, 512, 1024])?);
    Ok(())
}
