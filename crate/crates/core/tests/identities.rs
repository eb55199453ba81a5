//! Closed-form identities of the constants, Kerr-Newman and cosmology modules.

use comptonlab_core::constants::{ComptonForm, ConstantsTable, Particle, PhysicalConstants};
use comptonlab_core::cosmology::{self, AuditInputs};
use comptonlab_core::kerr_newman::{self, ChargeTerm, KNConfig, KNKind};
use comptonlab_core::nelson::{self, Convention};
use proptest::prelude::*;

const K: PhysicalConstants = PhysicalConstants::CGS;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

fn particle_with_mass(m: f64) -> Particle {
    Particle::new("x", m, 0.0, 0.5)
}

#[test]
fn builtin_particles_satisfy_compton_identities() {
    let table = ConstantsTable::cgs();
    for p in &table.particles {
        let lambda = K.compton_wavelength(p, ComptonForm::Reduced).unwrap();
        assert!(rel(lambda * p.mass * K.c, K.hbar) < 1e-12, "{}", p.name);
        let t_rest = p.mass * K.c * K.c / K.k_b;
        assert!(rel(K.thermal_wavelength(p, t_rest).unwrap(), lambda) < 1e-12);
        let full = K.compton_wavelength(p, ComptonForm::Full).unwrap();
        assert!(rel(full, 2.0 * std::f64::consts::PI * lambda) < 1e-12);
    }
}

#[test]
fn diffusion_identities_for_pion_and_electron() {
    for p in [Particle::pion(), Particle::electron()] {
        let lambda = K.reduced_compton_wavelength(&p).unwrap();
        let nu = nelson::diffusion_constant(&K, &p, Convention::Compton).unwrap();
        assert!(rel(nu, lambda * K.c) < 1e-12);
        let tau = K.compton_time(&p).unwrap();
        assert!(rel(nelson::increment_scale(nu, tau).unwrap(), lambda) < 1e-12);
        let nu_n = nelson::diffusion_constant(&K, &p, Convention::Nelson).unwrap();
        assert!(rel(nu_n, K.hbar / (2.0 * p.mass)) < 1e-12);
    }
}

#[test]
fn electron_is_a_naked_singularity_at_the_zitter_scale() {
    let e = Particle::electron();
    let cfg = KNConfig::for_particle(&K, &e).unwrap();
    let class = kerr_newman::kn_classify(&K, &cfg, ChargeTerm::Standard).unwrap();
    assert_eq!(class.kind, KNKind::NakedSingularity);
    let ratio = kerr_newman::electron_kn_check(&K).unwrap();
    assert!((0.99..=1.01).contains(&ratio), "{ratio}");
    // The charge term is negligible in either form.
    let literal = kerr_newman::kn_classify(&K, &cfg, ChargeTerm::Literal).unwrap();
    assert!(rel(literal.b.unwrap(), class.b.unwrap()) < 1e-6);
}

#[test]
fn b_equals_a_without_gravity_or_charge() {
    let k = PhysicalConstants { g: 0.0, ..K };
    let cfg = KNConfig {
        mass: 1.0,
        charge: 0.0,
        spin_param: 3.5e-11,
    };
    let class = kerr_newman::kn_classify(&k, &cfg, ChargeTerm::Standard).unwrap();
    assert_eq!(class.b, Some(3.5e-11));
}

#[test]
fn pion_charge_radius_is_tiny() {
    let ratio = kerr_newman::particle_kn_ratio(&K, &Particle::pion()).unwrap();
    let rq = (K.g * 4.803e-10f64.powi(2)).sqrt() / (K.c * K.c);
    assert!(rel(rq, 1.38e-34) < 0.01);
    assert!(ratio < 1e-15);
}

proptest! {
    #[test]
    fn compton_identities(m in log_uniform(1e-33, 1e-20)) {
        let p = particle_with_mass(m);
        let lambda = K.reduced_compton_wavelength(&p).unwrap();
        prop_assert!(rel(lambda * m * K.c, K.hbar) < 1e-12);
        let t_rest = m * K.c * K.c / K.k_b;
        prop_assert!(rel(K.thermal_wavelength(&p, t_rest).unwrap(), lambda) < 1e-12);
        let tau = K.compton_time(&p).unwrap();
        let nu = nelson::diffusion_constant(&K, &p, Convention::Compton).unwrap();
        prop_assert!(rel(nelson::increment_scale(nu, tau).unwrap(), lambda) < 1e-12);
    }

    #[test]
    fn quadrupling_temperature_halves_thermal_wavelength(
        m in log_uniform(1e-30, 1e-22),
        t in log_uniform(1e-3, 1e12),
    ) {
        let p = particle_with_mass(m);
        let a = K.thermal_wavelength(&p, t).unwrap();
        let b = K.thermal_wavelength(&p, 4.0 * t).unwrap();
        prop_assert!(rel(a, 2.0 * b) < 1e-14);
    }

    #[test]
    fn schwarzschild_limit(m in log_uniform(1e-30, 1e35)) {
        let cfg = KNConfig { mass: m, charge: 0.0, spin_param: 0.0 };
        let class = kerr_newman::kn_classify(&K, &cfg, ChargeTerm::Standard).unwrap();
        let oracle = 2.0 * K.g * m / (K.c * K.c);
        prop_assert_eq!(class.kind, KNKind::BlackHole);
        prop_assert!(rel(class.r_plus, oracle) < 1e-12, "{} vs {}", class.r_plus, oracle);
        prop_assert!(class.r_minus.unwrap().abs() <= 1e-12 * oracle);
    }

    #[test]
    fn b_ignores_signs(
        m in log_uniform(1e-30, 1e35),
        q in log_uniform(1e-20, 1e30),
        a in log_uniform(1e-40, 1e10),
        sq in any::<bool>(),
        sa in any::<bool>(),
    ) {
        let base = KNConfig { mass: m, charge: q, spin_param: a };
        let flipped = KNConfig {
            mass: m,
            charge: if sq { -q } else { q },
            spin_param: if sa { -a } else { a },
        };
        for term in [ChargeTerm::Standard, ChargeTerm::Literal] {
            let x = kerr_newman::kn_classify(&K, &base, term).unwrap();
            let y = kerr_newman::kn_classify(&K, &flipped, term).unwrap();
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn horizons_merge_continuously(m in log_uniform(1e-28, 1e35), eps in log_uniform(1e-9, 1e-3)) {
        let rg = K.g * m / (K.c * K.c);
        let class = |a: f64| {
            let cfg = KNConfig { mass: m, charge: 0.0, spin_param: a };
            kerr_newman::kn_classify(&K, &cfg, ChargeTerm::Standard).unwrap()
        };
        let below = class(rg * (1.0 - eps));
        let above = class(rg * (1.0 + eps));
        prop_assert_eq!(below.kind, KNKind::BlackHole);
        prop_assert_eq!(above.kind, KNKind::NakedSingularity);
        // sqrt(rg^2 - a^2) ~ rg sqrt(2 eps)
        let scale = rg * (2.0 * eps).sqrt() * 1.01;
        prop_assert!((below.r_plus - rg).abs() <= scale);
        prop_assert!((below.r_minus.unwrap() - rg).abs() <= scale);
        prop_assert!(above.b.unwrap() <= scale);
        let exact = class(rg);
        prop_assert_eq!(exact.kind, KNKind::Extremal);
        prop_assert!(rel(exact.r_plus, rg) < 1e-15);
    }

    #[test]
    fn derived_scales_identities(log_n in 0.0f64..120.0) {
        let n = 10f64.powf(log_n);
        let p = Particle::pion();
        let s = cosmology::derived_scales(&K, n, &p).unwrap();
        let tau = K.hbar / (p.mass * K.c * K.c);
        let lambda = K.hbar / (p.mass * K.c);
        prop_assert!(rel(s.age, tau * n.sqrt()) < 1e-14);
        prop_assert!(rel(s.radius, lambda * n.sqrt()) < 1e-14);
        prop_assert!(s.age > 0.0 && s.radius > 0.0 && s.mass_total > 0.0 && s.hubble > 0.0);
    }

    #[test]
    fn self_consistent_radius_zeroes_structural_residuals(log_n in 1.0f64..100.0) {
        let p = Particle::pion();
        let n = 10f64.powf(log_n);
        let s = cosmology::derived_scales(&K, n, &p).unwrap();
        let inputs = AuditInputs {
            radius: s.radius,
            count: n,
            age_obs: s.age,
            mass_obs: s.mass_total,
            radius_obs: None,
        };
        for row in cosmology::large_number_audit(&K, &inputs, &p).unwrap() {
            if row.structural {
                prop_assert!(row.residual_dex.abs() < 1e-12, "{:?}", row);
            }
        }
    }
}

#[test]
fn sqrt_n_age_is_half_the_exact_growth_time() {
    let tau = 3.7;
    for n in [1e4f64, 1e8, 1e16] {
        // dN/dt = sqrt(N)/tau  =>  d(sqrt N)/dt = 1/(2 tau)
        let exact = 2.0 * tau * (n.sqrt() - 1.0);
        assert!(rel(cosmology::exact_growth_time(1.0, n, tau).unwrap(), exact) < 1e-12);
        let ratio = exact / cosmology::age_from_count(n, tau).unwrap();
        assert!((1.9..=2.0).contains(&ratio), "{ratio}");
    }
}

#[test]
fn audit_with_reference_inputs() {
    let p = Particle::pion();
    let inputs = AuditInputs {
        radius: 1e28,
        count: 1e80,
        age_obs: 4e17,
        mass_obs: 1e56,
        radius_obs: None,
    };
    let rows = cosmology::large_number_audit(&K, &inputs, &p).unwrap();
    let lambda = K.hbar / (p.mass * K.c);
    let walk_residual = (lambda * 1e40 / 1e28).log10();
    assert!((walk_residual - (-0.85)).abs() < 0.01);
    let row = rows
        .iter()
        .find(|r| r.relation == "random_walk_radius")
        .unwrap();
    assert!((row.residual_dex - walk_residual).abs() < 1e-12);
    for r in &rows {
        assert!(r.residual_dex.abs() <= 1.5, "{r:?}");
        if r.structural {
            assert!(r.residual_dex.abs() <= 1.0 && r.pass, "{r:?}");
        }
    }

    let sparse = AuditInputs {
        count: 1e60,
        ..inputs
    };
    let rows = cosmology::large_number_audit(&K, &sparse, &p).unwrap();
    let row = rows
        .iter()
        .find(|r| r.relation == "random_walk_radius")
        .unwrap();
    assert!((row.residual_dex - (-10.85)).abs() < 0.01);
    assert!(!row.pass);
}

#[test]
fn pion_hubble_mass_is_within_a_decade_of_the_pion() {
    let s = cosmology::derived_scales(&K, 1e80, &Particle::pion()).unwrap();
    let m = cosmology::pion_hubble_mass(&K, s.hubble).unwrap();
    let oracle = (K.hbar * K.hbar * s.hubble / (K.g * K.c)).cbrt();
    assert!(rel(m, oracle) < 1e-12);
    assert!((m / Particle::pion().mass).log10().abs() < 1.0);
}
