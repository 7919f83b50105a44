//! Randomized checks of the solver invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use smoluchowski::analytic::{constant_sink_propagator, free_propagator, PropagatorQuery};
use smoluchowski::cli::{GridConfig, Method, RunConfig};
use smoluchowski::field::{snapshot, survival};
use smoluchowski::laplace::{forcing_transform, invert_with_estimates, InversionSpec};
use smoluchowski::volterra::{free_origin_forcing, solve_origin};
use smoluchowski::{InitialCondition, Problem, SinkModel, SpaceGrid, TimeGrid};

fn trapezoid(h: f64, v: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = v.collect();
    h * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[v.len() - 1]))
}

fn sink() -> impl Strategy<Value = SinkModel> {
    prop_oneof![
        (0.0..5.0f64).prop_map(|k0| SinkModel::Constant { k0 }),
        (0.0..3.0f64).prop_map(|alpha| SinkModel::InverseTime { alpha }),
        (0.0..3.0f64).prop_map(|alpha| SinkModel::Linear { alpha }),
        (0.0..4.0f64, 0.0..2.0f64).prop_map(|(beta, decay)| SinkModel::Exponential { beta, decay }),
    ]
}

fn source() -> impl Strategy<Value = f64> {
    prop_oneof![-2.5..-0.3f64, 0.3..2.5f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn propagator_mass_at_most_one(k0 in 0.0..10.0f64, x0 in -2.0..2.0f64, t in 0.1..2.0f64) {
        let h = 0.005;
        let mass = trapezoid(h, (-4000..=4000).map(|i| {
            constant_sink_propagator(&PropagatorQuery::new(i as f64 * h, x0, t, 1.0), k0).unwrap()
        }));
        prop_assert!(mass <= 1.0 + 1e-6, "mass {mass}");
        if k0 > 1e-3 {
            prop_assert!(mass < 1.0 - 1e-6, "mass {mass}");
        }
    }

    #[test]
    fn free_propagator_chapman_kolmogorov(
        x in -2.0..2.0f64, x0 in -2.0..2.0f64, t1 in 0.2..1.5f64, t2 in 0.2..1.5f64,
    ) {
        let h = 0.01;
        let g = |a: f64, b: f64, t: f64| free_propagator(&PropagatorQuery::new(a, b, t, 1.0)).unwrap();
        let chained = trapezoid(h, (-1200..=1200).map(|i| {
            let y = i as f64 * h;
            g(x, y, t1) * g(y, x0, t2)
        }));
        prop_assert!((chained - g(x, x0, t1 + t2)).abs() <= 1e-8);
    }

    #[test]
    fn constant_propagator_finite_for_strong_sinks(
        k0 in 1.0..1e6f64, t in 1e-3..10.0f64, x in -3.0..3.0f64, x0 in source(),
    ) {
        let v = constant_sink_propagator(&PropagatorQuery::new(x, x0, t, 1.0), k0).unwrap();
        prop_assert!(v.is_finite() && v >= -1e-12, "{v}");
    }

    #[test]
    fn forcing_pair_inverts(x0 in source(), t in 0.2..4.0f64, talbot in any::<bool>()) {
        let p = Problem::new(1.0, SinkModel::Zero, InitialCondition::DeltaAt { x0 });
        let spec = if talbot { InversionSpec::talbot(vec![t]) } else { InversionSpec::de_hoog(vec![t]) };
        let v = invert_with_estimates(|s: Complex64| Ok(forcing_transform(&p, s)?.value), &spec).unwrap()[0];
        let exact = free_origin_forcing(&p, t).unwrap();
        prop_assert!((v.value - exact).abs() <= 1e-8 * exact.max(1e-3), "{v:?} vs {exact}");
    }

    #[test]
    fn inversion_algorithms_agree(a in 0.2..3.0f64, t in 0.3..3.0f64) {
        // e^{−a√s}/√s and 1/(s+a)
        let pairs: [Box<dyn Fn(Complex64) -> Complex64>; 2] = [
            Box::new(move |s: Complex64| (-a * s.sqrt()).exp() / s.sqrt()),
            Box::new(move |s: Complex64| 1.0 / (s + a)),
        ];
        for f in pairs {
            let tal = invert_with_estimates(|s| Ok(f(s)), &InversionSpec::talbot(vec![t])).unwrap()[0];
            let hoog = invert_with_estimates(|s| Ok(f(s)), &InversionSpec::de_hoog(vec![t])).unwrap()[0];
            prop_assert!((tal.value - hoog.value).abs() <= 10.0 * tal.estimate.max(hoog.estimate));
        }
    }

    #[test]
    fn origin_dominated_by_forcing(s in sink(), x0 in source(), n in 32usize..400) {
        let p = Problem::new(1.0, s, InitialCondition::DeltaAt { x0 });
        let oh = solve_origin(&p, &TimeGrid::new(2.0, n).unwrap()).unwrap();
        for (v, f) in oh.values.iter().zip(&oh.forcing) {
            prop_assert!(*v >= 0.0 && v <= f, "{v} vs {f}");
        }
    }

    #[test]
    fn run_config_round_trips(
        s in sink(), x0 in source(), d in 0.1..3.0f64, n in 1usize..5000, method in 0usize..4,
    ) {
        let p = Problem::new(d, s, InitialCondition::DeltaAt { x0 });
        let grid = GridConfig { t_max: 4.0, n_steps: n, half_width: 12.0, n_points: 241 };
        let cfg = RunConfig::from_problem(&p, grid, Method::ALL[method]);
        let back = RunConfig::parse(&cfg.to_toml()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.problem().unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn snapshots_stay_nonnegative(s in sink(), x0 in source()) {
        let p = Problem::new(1.0, s, InitialCondition::DeltaAt { x0 });
        let oh = solve_origin(&p, &TimeGrid::new(1.0, 256).unwrap()).unwrap();
        let space = SpaceGrid::new(10.0, 401).unwrap();
        for t in [0.25, 1.0] {
            let min = snapshot(&p, &oh, &space, t).unwrap().values.iter().copied().fold(f64::INFINITY, f64::min);
            prop_assert!(min >= -1e-9, "{min}");
        }
    }

    #[test]
    fn stronger_sink_lowers_survival(k0 in 0.1..5.0f64, extra in 0.1..5.0f64, x0 in source()) {
        let space = SpaceGrid::new(10.0, 1001).unwrap();
        let grid = TimeGrid::new(1.0, 256).unwrap();
        let s = |k0: f64| {
            let p = Problem::new(1.0, SinkModel::Constant { k0 }, InitialCondition::DeltaAt { x0 });
            let oh = solve_origin(&p, &grid).unwrap();
            [0.5, 1.0].map(|t| survival(&snapshot(&p, &oh, &space, t).unwrap()).value)
        };
        let (weak, strong) = (s(k0), s(k0 + extra));
        for (w, st) in weak.iter().zip(&strong) {
            prop_assert!(st < w, "{st} !< {w}");
        }
    }
}
