use ngqkd_core::boundary::{
    analytic, mu_max_numeric, sweep, t_min_numeric, Criterion, MuMax, Solver, TMin,
};
use ngqkd_core::noise_before::NoiseBeforeParams;
use ngqkd_core::spdc::SpdcParams;
use ngqkd_core::thermal_bath::ThermalBathParams;
use ngqkd_core::witness::{is_nongaussian, Witness};
use ngqkd_core::{Model, NoiseKind};

/// Root of `2 H(Q) = 1`.
const Q_TH: f64 = 0.110_027_864_438_359_55;

fn bath(p: f64, t: f64, mu: f64, e: f64, d: f64) -> Model {
    Model::ThermalBath(ThermalBathParams::new(p, t, mu, e, d).unwrap())
}

fn found(m: MuMax) -> f64 {
    match m {
        MuMax::Found(v) => v,
        other => panic!("expected a finite mu_max, got {other:?}"),
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn below_minimal_transmittance_is_infeasible() {
    let d = 1e-3;
    let t = 0.5 * d * (1.0 - 2.0 * Q_TH) / Q_TH;
    let outcome = mu_max_numeric(&bath(1.0, t, 0.0, 0.0, d), Criterion::Security, t).unwrap();
    assert_eq!(outcome, MuMax::Infeasible);
    assert!(!outcome.is_feasible());
    assert_eq!(outcome.value(), 0.0);
}

#[test]
fn ng_limit_of_thermal_bath() {
    let t = 1e-2;
    let mu = found(mu_max_numeric(&bath(1.0, t, 0.0, 0.0, 0.0), Criterion::NonGaussian, t).unwrap());
    assert!((mu / 5e-5 - 1.0).abs() < 0.15, "{mu}");
}

#[test]
fn nc_limit_of_noise_before() {
    let t = 1e-3;
    let model = Model::NoiseBefore(NoiseBeforeParams::new(0.5, t, 0.0, 0.0, 0.0, NoiseKind::Thermal).unwrap());
    let mu = found(mu_max_numeric(&model, Criterion::Nonclassical, t).unwrap());
    assert!((mu / 0.5 - 1.0).abs() < 0.2, "{mu}");
}

#[test]
fn boundary_is_where_the_predicate_flips() {
    let t = 0.1;
    let mu = found(mu_max_numeric(&bath(1.0, t, 0.0, 0.0, 0.0), Criterion::NonGaussian, t).unwrap());
    let inside = bath(1.0, t, mu * 0.99, 0.0, 0.0).click_stats().unwrap();
    let outside = bath(1.0, t, mu * 1.5, 0.0, 0.0).click_stats().unwrap();
    assert!(is_nongaussian(&inside).unwrap());
    assert!(!is_nongaussian(&outside).unwrap());
}

#[test]
fn curves_are_ordered() {
    let grid = log_grid(1e-4, 1.0, 60);
    let security = |d: f64| {
        sweep(&bath(1.0, 1.0, 0.0, 0.0, d), Criterion::Security, &grid)
            .unwrap()
            .points
    };
    let (clean, low, high) = (security(0.0), security(1e-5), security(1e-3));
    for i in 0..grid.len() {
        assert!(clean[i].mu_max >= low[i].mu_max);
        assert!(low[i].mu_max >= high[i].mu_max);
    }
    assert!(clean[0].mu_max > low[0].mu_max && low[0].mu_max > high[0].mu_max);

    let model = bath(1.0, 1.0, 0.0, 0.0, 0.0);
    let nc = sweep(&model, Criterion::Nonclassical, &grid).unwrap();
    let ng = sweep(&model, Criterion::NonGaussian, &grid).unwrap();
    for (a, b) in nc.points.iter().zip(&ng.points) {
        assert!(b.mu_max <= a.mu_max);
        if a.mu_max < 1e3 {
            assert!(b.mu_max < a.mu_max);
        }
    }
    let again = sweep(&model, Criterion::NonGaussian, &grid).unwrap();
    assert_eq!(ng, again);
}

#[test]
fn minimal_transmittance_examples() {
    let d = 1e-3;
    let reference = d * (1.0 - 2.0 * Q_TH) / Q_TH;
    assert!((reference - 7.09e-3).abs() < 1e-5);
    match t_min_numeric(&bath(1.0, 1.0, 0.0, 0.0, d)).unwrap() {
        TMin::Found(t) => assert!((t / reference - 1.0).abs() < 0.1, "{t}"),
        other => panic!("{other:?}"),
    }

    let nu = 1e-2;
    let model = Model::Spdc(SpdcParams::new(nu, 1.0, 0.0, 0.0, 1e-8).unwrap());
    match t_min_numeric(&model).unwrap() {
        TMin::Found(t) => assert!((t / (0.5 * nu) - 1.0).abs() < 0.1, "{t}"),
        other => panic!("{other:?}"),
    }

    assert_eq!(t_min_numeric(&bath(1.0, 1.0, 0.0, 0.0, 0.0)).unwrap(), TMin::BelowFloor);
    assert_eq!(t_min_numeric(&bath(1.0, 1.0, 0.0, 0.25, 0.0)).unwrap(), TMin::Infeasible);
}

#[test]
fn analytic_forms() {
    let slope = 2.0 * Q_TH / (1.0 - 2.0 * Q_TH);
    assert!((analytic::mu_max_qkd_thermal_bath(1.0, 0.0, 1e-3) - 0.5 * slope * 1e-3).abs() < 1e-12);
    assert!((analytic::mu_max_qkd_noise_before(0.5, 0.0) - 0.5 * slope).abs() < 1e-9);
    assert!((analytic::mu_max_nc_thermal_bath(1.0, 0.2) - 0.2 / 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(analytic::mu_max_ng_noise_before(0.5, 0.1), 0.025);
    assert!(analytic::t_min_single_photon(1.0, 0.3, 1e-3).is_infinite());
    assert_eq!(analytic::t_min_spdc_rare_darks(0.0, 1e-2).unwrap(), 5e-3);
    assert_eq!(analytic::t_min_ng_spdc(1e-2), 5e-3);
}

#[test]
fn witness_dark_counts_tighten_the_ng_boundary() {
    let t = 0.3;
    let model = bath(1.0, t, 0.0, 0.0, 0.0);
    let clean = Solver::new(Witness::new());
    let dark = Solver::new(Witness::new().with_detector_dark_count(1e-3).unwrap());
    let a = clean.mu_max(&model, Criterion::NonGaussian, t).unwrap().value();
    let b = dark.mu_max(&model, Criterion::NonGaussian, t).unwrap().value();
    assert!(b < a);
}
