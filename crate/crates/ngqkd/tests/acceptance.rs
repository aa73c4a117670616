//! Acceptance suite. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p ngqkd --release --test acceptance -- --nocapture --test-threads=1`.
//!
//! Reference asymptotes are written out here from their closed forms rather
//! than taken from the library's `analytic` module.

use ngqkd::parallel;
use ngqkd_core::boundary::{mu_max_numeric, t_min_numeric, Criterion, MuMax, TMin};
use ngqkd_core::mc::{compare, McConfig};
use ngqkd_core::noise_before::NoiseBeforeParams;
use ngqkd_core::security::qber_threshold;
use ngqkd_core::spdc::SpdcParams;
use ngqkd_core::thermal_bath::ThermalBathParams;
use ngqkd_core::witness::{
    apply_detector_darkcounts, is_nongaussian, nc_boundary, ng_boundary, Witness,
};
use ngqkd_core::{Model, NoiseKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

/// Root of `2 H(Q) = 1`, to 30 digits.
const Q_TH: f64 = 0.110_027_864_438_359_55;

fn report(id: &str, pass: bool, detail: &str) {
    println!("{} [{id}] {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn in_band(ratio: f64, lo: f64, hi: f64) -> bool {
    ratio >= lo && ratio <= hi
}

fn thermal(p: f64, t: f64, mu: f64, e: f64, d: f64) -> Model {
    Model::ThermalBath(ThermalBathParams::new(p, t, mu, e, d).unwrap())
}

fn before(p: f64, t: f64, mu: f64, e: f64, d: f64, kind: NoiseKind) -> Model {
    Model::NoiseBefore(NoiseBeforeParams::new(p, t, mu, e, d, kind).unwrap())
}

fn spdc(nu: f64, t: f64, mu: f64, e: f64, d: f64) -> Model {
    Model::Spdc(SpdcParams::new(nu, t, mu, e, d).unwrap())
}

fn mu_max(model: &Model, criterion: Criterion) -> f64 {
    match mu_max_numeric(model, criterion, model.transmittance()).unwrap() {
        MuMax::Found(mu) => mu,
        other => panic!("no finite mu_max for {criterion:?}: {other:?}"),
    }
}

fn t_min(model: &Model) -> f64 {
    match t_min_numeric(model).unwrap() {
        TMin::Found(t) => t,
        other => panic!("no finite t_min: {other:?}"),
    }
}

fn security_slope(e: f64) -> f64 {
    (2.0 * Q_TH - e) / (1.0 - 2.0 * Q_TH)
}

/// Worst ratio over a set, reported as the value farthest from 1.
fn worst(ratios: &[f64]) -> f64 {
    ratios
        .iter()
        .copied()
        .max_by(|a, b| (a - 1.0).abs().total_cmp(&(b - 1.0).abs()))
        .unwrap_or(f64::NAN)
}

#[test]
fn criterion_01_qber_threshold() {
    let start = Instant::now();
    let q = qber_threshold();
    let elapsed = start.elapsed();
    let pass = (0.1095..=0.1105).contains(&q) && elapsed < Duration::from_millis(1);
    report(
        "1",
        pass,
        &format!("Q_th = {q:.10} (reference {Q_TH:.10}), {elapsed:?}"),
    );
}

#[test]
fn criterion_02_thermal_bath_ng_asymptote() {
    let start = Instant::now();
    let mut ratios = Vec::new();
    for p in [0.01, 0.5, 1.0] {
        for t in [1e-3, 1e-2] {
            let mu = mu_max(&thermal(p, t, 0.0, 0.0, 0.0), Criterion::NonGaussian);
            ratios.push(mu / (0.5 * p * p * t * t));
        }
    }
    let elapsed = start.elapsed();
    let pass = ratios.iter().all(|&r| in_band(r, 0.85, 1.15)) && elapsed < Duration::from_secs(30);
    report(
        "2",
        pass,
        &format!("NG mu_max / (p^2 T^2 / 2): worst {:.4} over 6 points, {elapsed:?}", worst(&ratios)),
    );
}

#[test]
fn criterion_03_thermal_bath_nc_asymptote() {
    let mut ratios = Vec::new();
    for p in [0.01, 0.5, 1.0] {
        for t in [1e-3, 1e-2] {
            let mu = mu_max(&thermal(p, t, 0.0, 0.0, 0.0), Criterion::Nonclassical);
            ratios.push(mu / (p * t / SQRT_2));
        }
    }
    let pass = ratios.iter().all(|&r| in_band(r, 0.85, 1.15));
    report(
        "3",
        pass,
        &format!("NC mu_max / (p T / sqrt 2): worst {:.4} over 6 points", worst(&ratios)),
    );
}

#[test]
fn criterion_04_noise_before_asymptotes() {
    let t = 1e-3;
    let mut nc = Vec::new();
    let mut ng = Vec::new();
    for p in [0.01, 0.5, 1.0] {
        let model = before(p, t, 0.0, 0.0, 0.0, NoiseKind::Thermal);
        nc.push(mu_max(&model, Criterion::Nonclassical) / p);
        ng.push(mu_max(&model, Criterion::NonGaussian) / (p * p * t));
    }
    let pass = nc.iter().all(|&r| in_band(r, 0.8, 1.2)) && ng.iter().all(|&r| in_band(r, 0.85, 1.15));
    report(
        "4",
        pass,
        &format!(
            "T = 1e-3, p in {{0.01, 0.5, 1}}: NC mu_max / p worst {:.4}; NG mu_max / (p^2 T) worst {:.4}",
            worst(&nc),
            worst(&ng)
        ),
    );
}

#[test]
fn criterion_05_security_asymptotes() {
    let t = 1e-3;
    let mut lines = Vec::new();
    let mut pass = true;
    for e in [0.0, 0.05] {
        let s = security_slope(e);
        let cases = [
            ("thermal-bath", thermal(1.0, t, 0.0, e, 0.0), 0.5 * s * t),
            ("thermal-bath p=0.5", thermal(0.5, t, 0.0, e, 0.0), 0.25 * s * t),
            (
                "noise-before",
                before(1.0, t, 0.0, e, 0.0, NoiseKind::Thermal),
                s,
            ),
            (
                "noise-before p=0.5",
                before(0.5, t, 0.0, e, 0.0, NoiseKind::Thermal),
                0.5 * s,
            ),
            ("spdc", spdc(1e-6 * t, t, 0.0, e, 0.0), 0.5 * s * t),
        ];
        for (name, model, reference) in cases {
            let ratio = mu_max(&model, Criterion::Security) / reference;
            pass &= in_band(ratio, 0.85, 1.15);
            lines.push(format!("{name} e={e}: {ratio:.4}"));
        }
    }
    report("5", pass, &format!("numeric/analytic at T = 1e-3: {}", lines.join(", ")));
}

#[test]
fn criterion_06_minimal_transmittance() {
    let mut lines = Vec::new();
    let mut pass = true;
    for d in [1e-5, 1e-3] {
        for p in [0.5, 1.0] {
            for e in [0.0, 0.05] {
                let reference = d * (1.0 - 2.0 * Q_TH) / (p * (Q_TH - 0.5 * e));
                for (name, model) in [
                    ("I", thermal(p, 1.0, 0.0, e, d)),
                    ("II", before(p, 1.0, 0.0, e, d, NoiseKind::Thermal)),
                ] {
                    let ratio = t_min(&model) / reference;
                    pass &= (ratio - 1.0).abs() <= 0.1;
                    lines.push(format!("{name}(d={d},p={p},e={e}) {ratio:.4}"));
                }
            }
        }
    }
    let (nu, d) = (1e-8, 1e-3);
    let reference = d * (1.0 - 2.0 * Q_TH) / Q_TH;
    let ratio = t_min(&spdc(nu, 1.0, 0.0, 0.0, d)) / reference;
    pass &= (ratio - 1.0).abs() <= 0.1;
    lines.push(format!("III rare pairs {ratio:.4}"));

    let (nu, d) = (1e-2, 1e-9);
    let ratio = t_min(&spdc(nu, 1.0, 0.0, 0.0, d)) / (0.5 * nu);
    pass &= (ratio - 1.0).abs() <= 0.1;
    lines.push(format!("III rare darks {ratio:.4}"));

    report("6", pass, &format!("t_min / analytic: {}", lines.join(", ")));
}

type ModelAt = Box<dyn Fn(f64, f64) -> Model>;

#[test]
fn criterion_07_necessity_and_sufficiency() {
    let witness = Witness::new();
    let grid_t = logspace(1e-3, 1e-1, 15);
    let grid_mu = logspace(1e-12, 10.0, 89);
    let builders: [(&str, ModelAt); 4] = [
        ("thermal-bath", Box::new(|t, mu| thermal(1.0, t, mu, 0.0, 0.0))),
        (
            "noise-before thermal",
            Box::new(|t, mu| before(1.0, t, mu, 0.0, 0.0, NoiseKind::Thermal)),
        ),
        (
            "noise-before poisson",
            Box::new(|t, mu| before(1.0, t, mu, 0.0, 0.0, NoiseKind::Poisson)),
        ),
        ("spdc", Box::new(|t, mu| spdc(1e-4, t, mu, 0.0, 0.0))),
    ];
    let mut lines = Vec::new();
    let mut violations = 0;
    for (name, build) in &builders {
        let (mut ng, mut secure, mut bad) = (0, 0, 0);
        for &t in &grid_t {
            for &mu in &grid_mu {
                let model = build(t, mu);
                let key = model.key_rate().unwrap().delta_i > 0.0;
                let stats = model.click_stats().unwrap();
                let is_ng = witness.nongaussian(&stats).unwrap();
                let is_nc = witness.nonclassical(&stats).unwrap();
                ng += is_ng as usize;
                secure += key as usize;
                if (is_ng && !key) || (key && !is_nc) {
                    bad += 1;
                }
            }
        }
        violations += bad;
        lines.push(format!("{name}: {ng} NG, {secure} secure, {bad} violations"));
    }
    report(
        "7",
        violations == 0,
        &format!("{} points per model; {}", grid_t.len() * grid_mu.len(), lines.join("; ")),
    );
}

fn random_model(kind: usize, rng: &mut ChaCha8Rng) -> Model {
    let log_uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
    };
    let t = log_uniform(rng, 1e-2, 1.0);
    let mu = log_uniform(rng, 1e-3, 1.0);
    let e = rng.random_range(0.0..0.1);
    let d = log_uniform(rng, 1e-5, 1e-2);
    match kind {
        0 => thermal(rng.random_range(0.1..1.0), t, mu, e, d),
        1 => {
            let noise = if rng.random::<bool>() {
                NoiseKind::Thermal
            } else {
                NoiseKind::Poisson
            };
            before(rng.random_range(0.1..1.0), t, mu, e, d, noise)
        }
        _ => spdc(log_uniform(rng, 1e-3, 0.5), t, mu, e, d),
    }
}

#[test]
fn criterion_08_monte_carlo_concordance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_distance = 0.0f64;
    let mut failures = Vec::new();
    let mut comparisons = 0;
    for kind in 0..3 {
        for i in 0..10 {
            let model = random_model(kind, &mut rng);
            let config = McConfig {
                samples: 1_000_000,
                seed: 1000 * kind as u64 + i,
                ..McConfig::default()
            };
            let tally = parallel::simulate(&model, &config).unwrap();
            for c in compare(&model, &tally).unwrap() {
                comparisons += 1;
                worst_distance = worst_distance.max(c.sigma_distance);
                if c.sigma_distance > 4.0 {
                    failures.push(format!(
                        "{} {}: {:.2} sigma",
                        model.kind().name(),
                        c.statistic.name(),
                        c.sigma_distance
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(300);
    report(
        "8",
        pass,
        &format!(
            "30 points x 1e6 pulses, {comparisons} comparisons, worst {worst_distance:.2} sigma, {elapsed:?}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; over 4 sigma: {}", failures.join(", "))
            }
        ),
    );
}

#[test]
fn criterion_09_thermal_versus_poisson_noise() {
    let value = |model: &Model, criterion| {
        mu_max_numeric(model, criterion, model.transmittance())
            .unwrap()
            .value()
    };
    let t = 0.05;
    let ng_thermal = value(&before(1.0, t, 0.0, 0.0, 0.0, NoiseKind::Thermal), Criterion::NonGaussian);
    let ng_poisson = value(&before(1.0, t, 0.0, 0.0, 0.0, NoiseKind::Poisson), Criterion::NonGaussian);
    let low_t = (ng_thermal - ng_poisson).abs() / ng_thermal;

    let t = 0.9;
    let sec_thermal = mu_max_numeric(
        &before(1.0, t, 0.0, 0.0, 0.0, NoiseKind::Thermal),
        Criterion::Security,
        t,
    )
    .unwrap();
    let sec_poisson = mu_max_numeric(
        &before(1.0, t, 0.0, 0.0, 0.0, NoiseKind::Poisson),
        Criterion::Security,
        t,
    )
    .unwrap();
    let high_t = (sec_thermal.value() - sec_poisson.value()).abs() / sec_thermal.value();

    let pass = low_t < 0.05 && high_t > 0.05;
    report(
        "9",
        pass,
        &format!(
            "T = 0.05 NG mu_max thermal {ng_thermal:.6e} poisson {ng_poisson:.6e} (rel diff {low_t:.4}); \
             T = 0.9 security mu_max thermal {sec_thermal:?} poisson {sec_poisson:?} (rel diff {high_t:.4})"
        ),
    );
}

#[test]
fn criterion_10_detector_dark_counts() {
    let d = 1e-3;
    let grid_t = logspace(1e-3, 1.0, 20);
    let grid_mu = logspace(1e-10, 1e-1, 20);
    let (mut clean, mut dark, mut escaped, mut insecure) = (0, 0, 0, 0);
    for &t in &grid_t {
        for &mu in &grid_mu {
            let model = thermal(1.0, t, mu, 0.0, d);
            let stats = model.click_stats().unwrap();
            let ng_clean = is_nongaussian(&stats).unwrap();
            let ng_dark = is_nongaussian(&apply_detector_darkcounts(&stats, d).unwrap()).unwrap();
            clean += ng_clean as usize;
            dark += ng_dark as usize;
            if ng_dark && !ng_clean {
                escaped += 1;
            }
            if ng_dark && t <= 1e-1 && model.key_rate().unwrap().delta_i <= 0.0 {
                insecure += 1;
            }
        }
    }
    let pass = escaped == 0 && dark < clean && insecure == 0;
    report(
        "10",
        pass,
        &format!(
            "20x20 grid, thermal bath p=1 d={d}: NG {clean} points without dark counts, {dark} with; \
             {escaped} outside the clean region; {insecure} insecure at T <= 0.1"
        ),
    );
}

#[test]
fn criterion_11_witness_geometry() {
    let grid = logspace(1e-4, 0.5, 100);
    let below = grid
        .iter()
        .filter(|&&ps| ng_boundary(ps).unwrap() < nc_boundary(ps).unwrap())
        .count();
    let half = nc_boundary(0.5).unwrap();
    let (a, b) = (1e-4, 1e-2);
    let slope = (ng_boundary(b).unwrap().ln() - ng_boundary(a).unwrap().ln()) / (b.ln() - a.ln());
    let pass = below == grid.len() && half == 0.25 && (slope - 3.0).abs() <= 0.2;
    report(
        "11",
        pass,
        &format!("NG < NC at {below}/100 points; nc_boundary(0.5) = {half}; NG log-log slope {slope:.4}"),
    );
}
