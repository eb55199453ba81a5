//! Stochastic-mechanics ensembles against exact Gaussian densities.

use comptonlab_core::nelson::{self, Convention, DiffusionSpec, QuantumModel};
use comptonlab_core::stats::{self, Binning};

fn gaussian_variance_free(sigma0: f64, hbar_over_m: f64, t: f64) -> f64 {
    let s = hbar_over_m * t / (2.0 * sigma0 * sigma0);
    sigma0 * sigma0 * (1.0 + s * s)
}

#[test]
fn harmonic_ground_state_is_stationary() {
    let omega = 1.0;
    let model = QuantumModel::harmonic(omega, 1.0).unwrap();
    let spec = DiffusionSpec::for_model(
        &model,
        Convention::Nelson,
        0.01 / omega,
        20.0 / omega,
        100_000,
        2024,
    );
    let ens = nelson::evolve_ensemble(&model, &spec).unwrap();
    assert_eq!(ens.positions.len(), 100_000);
    let d = nelson::density_distance(&ens, &model, Binning::FreedmanDiaconis).unwrap();
    assert!(d.l1 < 0.03, "L1 {}", d.l1);
    let (var, se) = stats::variance_with_stderr(&ens.positions).unwrap();
    let exact = 1.0 / (2.0 * omega);
    assert!(
        (var - exact).abs() <= 5.0 * se,
        "{var} vs {exact} (se {se})"
    );
}

#[test]
fn halving_dt_moves_variance_less_than_noise() {
    let model = QuantumModel::harmonic(1.0, 1.0).unwrap();
    let run = |dt: f64| {
        let spec = DiffusionSpec::for_model(&model, Convention::Nelson, dt, 10.0, 100_000, 5);
        stats::variance_with_stderr(&nelson::evolve_ensemble(&model, &spec).unwrap().positions)
            .unwrap()
    };
    let (v1, s1) = run(0.02);
    let (v2, s2) = run(0.01);
    let floor = (s1 * s1 + s2 * s2).sqrt();
    assert!((v1 - v2).abs() < floor, "{v1} vs {v2}, noise {floor}");
}

#[test]
fn free_packet_spreads_like_the_exact_packet() {
    let (sigma0, hbar_over_m) = (1.0, 1.0);
    let model = QuantumModel::free_packet(sigma0, hbar_over_m).unwrap();
    let t = 2.0 * sigma0 * sigma0 / hbar_over_m;
    let spec = DiffusionSpec::for_model(&model, Convention::Nelson, 1e-3, t, 100_000, 99);
    let ens = nelson::evolve_ensemble(&model, &spec).unwrap();
    let (var, se) = stats::variance_with_stderr(&ens.positions).unwrap();
    let exact = gaussian_variance_free(sigma0, hbar_over_m, t);
    assert!((exact - 2.0).abs() < 1e-15);
    assert!(
        (var - exact).abs() <= 3.0 * se,
        "{var} vs {exact} (se {se})"
    );
}

#[test]
fn exact_draws_are_close_in_l1() {
    let model = QuantumModel::harmonic(1.0, 1.0).unwrap();
    let ens = nelson::WalkerEnsemble {
        positions: nelson::sample_density(&model, 0.0, 100_000, 1),
        time: 0.0,
        seed: 1,
    };
    let fixed = nelson::density_distance(&ens, &model, Binning::Count(50)).unwrap();
    assert!(fixed.l1 < 0.02, "L1 {}", fixed.l1);
    // Freedman-Diaconis picks ~80 bins here; its Poisson noise floor alone is ~0.023.
    let fd = nelson::density_distance(&ens, &model, Binning::FreedmanDiaconis).unwrap();
    assert!(fd.l1 < 0.03, "L1 {}", fd.l1);
    assert!(fd.ks < 1.36 / (1e5f64).sqrt() * 1.5, "KS {}", fd.ks);
}

#[test]
fn empirical_l1_extremes() {
    let model = QuantumModel::harmonic(1.0, 1.0).unwrap();
    let xs = nelson::sample_density(&model, 0.0, 20_000, 3);
    assert_eq!(
        nelson::empirical_l1(&xs, &xs, Binning::FreedmanDiaconis).unwrap(),
        0.0
    );
    let sd = model.std_dev(0.0);
    let shifted: Vec<f64> = xs.iter().map(|x| x + 20.0 * sd).collect();
    let ens = nelson::WalkerEnsemble {
        positions: shifted,
        time: 0.0,
        seed: 3,
    };
    let d = nelson::density_distance(&ens, &model, Binning::FreedmanDiaconis).unwrap();
    assert!(d.l1 > 1.99, "L1 {}", d.l1);

    // Two unit Gaussians 5 sd apart: L1 = 2 erf(5 / (2 sqrt 2)).
    let near: Vec<f64> = xs.iter().map(|x| x + 5.0 * sd).collect();
    let ens = nelson::WalkerEnsemble {
        positions: near,
        time: 0.0,
        seed: 3,
    };
    let oracle = 2.0 * libm::erf(5.0 / (2.0 * 2f64.sqrt()));
    let d = nelson::density_distance(&ens, &model, Binning::FreedmanDiaconis).unwrap();
    assert!((d.l1 - oracle).abs() < 0.05, "L1 {} vs {oracle}", d.l1);
}

#[test]
fn unstable_steps_are_rejected() {
    let model = QuantumModel::harmonic(10.0, 1.0).unwrap();
    let spec = DiffusionSpec::for_model(&model, Convention::Nelson, 0.06, 1.0, 10, 0);
    assert!(nelson::evolve_ensemble(&model, &spec).is_err());
}
