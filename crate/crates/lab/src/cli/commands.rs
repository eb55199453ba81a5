use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use comptonlab_core::constants::{ComptonForm, ConstantsTable, Particle, PhysicalConstants};
use comptonlab_core::cosmology::{self, AuditInputs, AuditRow, CosmologySpec};
use comptonlab_core::dirac::{
    self, Grid, LatticeSpec, SpinorField, ZitterPrediction, ZitterReport,
};
use comptonlab_core::kerr_newman::{self, ChargeTerm, KNClassification, KNConfig};
use comptonlab_core::nelson::{self, Convention, DensityDistance, DiffusionSpec, QuantumModel};
use comptonlab_core::randomwalk::{self, Dim, WalkEnsembleResult, WalkSpec};
use comptonlab_core::rng::RNG_NAME;
use comptonlab_core::stats::{self, Binning};

use super::*;

const UPPER_COMPONENT: dirac::Spinor = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
use crate::config::resolve_table;
use crate::output::{to_json, Cell, Csv, RunMetadata, ARTIFACT_VERSION};
use crate::parallel;

pub(super) fn execute(cli: &Cli) -> Result<String, CliError> {
    let table = resolve_table(cli.constants.as_deref())?;
    let threads = usize::from(cli.threads);
    let start = Instant::now();
    let meta = |subcommand, seed: Option<u64>| RunMetadata {
        seed,
        rng_name: if seed.is_some() { RNG_NAME } else { "none" },
        artifact_version: ARTIFACT_VERSION,
        subcommand,
        wall_time: start.elapsed().as_secs_f64(),
    };
    match &cli.command {
        Command::Constants(_) => {
            let report = constants_report(&table)?;
            Ok(to_json(&meta("constants", None), &report)?)
        }
        Command::Walk(a) => walk(a, threads, |r| meta("walk", r)),
        Command::Nelson(a) => nelson(a, &table, threads, |r| meta("nelson", r)),
        Command::Dirac(a) => dirac(a, &table, || meta("dirac", None)),
        Command::KerrNewman(a) => {
            let report = kerr_newman(a, &table)?;
            Ok(to_json(&meta("kerr-newman", None), &report)?)
        }
        Command::Cosmo(a) => cosmo(a, &table, || meta("cosmo", None)),
        Command::Audit(a) => {
            let report = audit(a, &table)?;
            Ok(to_json(&meta("audit", None), &report)?)
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("--{name} must be finite, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if finite(name, v)? > 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("--{name} must be positive, got {v}")))
    }
}

#[derive(Serialize)]
struct ParticleRow<'a> {
    #[serde(flatten)]
    particle: &'a Particle,
    reduced_compton_wavelength: f64,
    compton_wavelength: f64,
    compton_time: f64,
    rest_temperature: f64,
}

#[derive(Serialize)]
struct ConstantsReport<'a> {
    version: &'a str,
    physical: &'a PhysicalConstants,
    particles: Vec<ParticleRow<'a>>,
}

fn constants_report(table: &ConstantsTable) -> Result<ConstantsReport<'_>, CliError> {
    let k = &table.physical;
    let particles = table
        .particles
        .iter()
        .map(|p| {
            Ok(ParticleRow {
                particle: p,
                reduced_compton_wavelength: k.compton_wavelength(p, ComptonForm::Reduced)?,
                compton_wavelength: k.compton_wavelength(p, ComptonForm::Full)?,
                compton_time: k.compton_time(p)?,
                rest_temperature: k.rest_temperature(p)?,
            })
        })
        .collect::<Result<_, comptonlab_core::Error>>()?;
    Ok(ConstantsReport {
        version: &table.version,
        physical: k,
        particles,
    })
}

#[derive(Serialize)]
struct WalkReport {
    spec: WalkSpec,
    expected_rms: f64,
    ensemble: WalkEnsembleResult,
}

fn walk(
    a: &WalkArgs,
    threads: usize,
    meta: impl Fn(Option<u64>) -> RunMetadata,
) -> Result<String, CliError> {
    let spec = WalkSpec {
        steps: a.steps,
        step_length: positive("step-length", a.step_length)?,
        dim: Dim::try_from(a.dim)?,
        walkers: a.walkers,
        seed: a.seed,
    };
    spec.validate()?;
    match a.output {
        Format::Json => {
            let ensemble = parallel::estimate_rms(&spec, threads)?;
            let report = WalkReport {
                spec,
                expected_rms: randomwalk::expected_mean_square(&spec).sqrt(),
                ensemble,
            };
            Ok(to_json(&meta(Some(a.seed)), &report)?)
        }
        Format::Csv => {
            let displacements = parallel::walk_displacements(&spec, threads)?;
            let dim = spec.dim.get();
            let header = ["walker_index", "x", "y", "z"];
            let mut cols: Vec<&str> = header[..=dim].to_vec();
            cols.push("r2");
            let mut csv = Csv::new(&cols);
            for (i, d) in displacements.iter().enumerate() {
                csv.row(
                    std::iter::once(Cell::from(i as u64))
                        .chain(d[..dim].iter().map(|&x| Cell::from(x)))
                        .chain(std::iter::once(Cell::from(randomwalk::squared_norm(d)))),
                );
            }
            Ok(csv.into_string())
        }
    }
}

#[derive(Serialize)]
struct Diffusion {
    convention: Convention,
    nu: f64,
    nelson_nu: f64,
    compton_nu: f64,
}

#[derive(Serialize)]
struct NelsonReport {
    units: &'static str,
    particle: Option<String>,
    model: QuantumModel,
    diffusion: Diffusion,
    dt: f64,
    steps: u64,
    t_end: f64,
    walkers: u64,
    sample_mean: f64,
    sample_variance: f64,
    sample_variance_stderr: f64,
    exact_variance: f64,
    density_distance: DensityDistance,
}

fn nelson(
    a: &NelsonArgs,
    table: &ConstantsTable,
    threads: usize,
    meta: impl Fn(Option<u64>) -> RunMetadata,
) -> Result<String, CliError> {
    let (units, hbar_over_m) = match &a.particle {
        Some(name) => {
            let p = table.particle(name)?;
            (
                "cgs",
                nelson::diffusion_constant(&table.physical, p, Convention::Compton)?,
            )
        }
        None => ("natural", 1.0),
    };
    let model = match a.model {
        ModelArg::Free => QuantumModel::free_packet(positive("sigma0", a.sigma0)?, hbar_over_m)?,
        ModelArg::Harmonic => QuantumModel::harmonic(positive("omega", a.omega)?, hbar_over_m)?,
    };
    let convention = match a.convention {
        ConventionArg::Compton => Convention::Compton,
        ConventionArg::Nelson => Convention::Nelson,
    };
    let binning = match a.bins {
        Some(0) => return Err(invalid("--bins must be positive")),
        Some(k) => Binning::Count(k),
        None => Binning::FreedmanDiaconis,
    };
    let spec = DiffusionSpec::for_model(
        &model,
        convention,
        positive("dt", a.dt)?,
        finite("t-end", a.t_end)?,
        a.walkers,
        a.seed,
    );
    spec.check_against(&model)?;
    let ensemble = parallel::evolve_ensemble(&model, &spec, threads)?;
    match a.output {
        Format::Csv => {
            let mut csv = Csv::new(&["walker_index", "x_final"]);
            for (i, &x) in ensemble.positions.iter().enumerate() {
                csv.row([Cell::from(i as u64), Cell::from(x)]);
            }
            Ok(csv.into_string())
        }
        Format::Json => {
            let (var, se) = stats::variance_with_stderr(&ensemble.positions)?;
            let mean = ensemble.positions.iter().sum::<f64>() / ensemble.positions.len() as f64;
            let (steps, dt) = spec.schedule();
            let report = NelsonReport {
                units,
                particle: a.particle.clone(),
                model,
                diffusion: Diffusion {
                    convention,
                    nu: spec.nu,
                    nelson_nu: spec.nelson_nu(),
                    compton_nu: model.hbar_over_m,
                },
                dt,
                steps,
                t_end: spec.t_end,
                walkers: spec.walkers,
                sample_mean: mean,
                sample_variance: var,
                sample_variance_stderr: se,
                exact_variance: model.std_dev(spec.t_end).powi(2),
                density_distance: nelson::density_distance(&ensemble, &model, binning)?,
            };
            Ok(to_json(&meta(Some(a.seed)), &report)?)
        }
    }
}

#[derive(Serialize)]
struct SeriesPoint {
    t: f64,
    mean_x: f64,
    norm: f64,
}

#[derive(Serialize)]
struct DiracReport {
    units: &'static str,
    method: &'static str,
    band: &'static str,
    mass: f64,
    sigma: f64,
    p0: f64,
    dx: f64,
    cells: usize,
    extent: f64,
    t_end: f64,
    sample_dt: f64,
    /// m c^2 / hbar
    spin_flip_rate: f64,
    /// hbar / (2 m c)
    half_compton_wavelength: f64,
    expected_zitter_frequency: f64,
    prediction: ZitterPrediction,
    zitter: Option<ZitterReport>,
    zitter_error: Option<String>,
    series: Vec<SeriesPoint>,
}

fn dirac(
    a: &DiracArgs,
    table: &ConstantsTable,
    meta: impl Fn() -> RunMetadata,
) -> Result<String, CliError> {
    let (k, units) = match a.units {
        UnitsArg::Cgs => (table.physical, "cgs"),
        UnitsArg::Natural => (PhysicalConstants::NATURAL, "natural"),
    };
    let mass = match (a.m, a.units) {
        (Some(m), _) => positive("m", m)?,
        (None, UnitsArg::Natural) => 1.0,
        (None, UnitsArg::Cgs) => table.particle("electron")?.mass,
    };
    let lambda = k.hbar / (mass * k.c);
    let tau = lambda / k.c;
    let zb_period = PI * tau;
    let sigma = positive("sigma", a.sigma.unwrap_or(4.0 * lambda))?;
    let dx = positive("dx", a.dx.unwrap_or(lambda / 8.0))?;
    let t_end = finite("t-end", a.t_end.unwrap_or(20.0 * zb_period))?;
    if t_end < 0.0 {
        return Err(invalid("--t-end must be non-negative"));
    }
    let sample_dt = positive("sample-dt", a.sample_dt.unwrap_or(zb_period / 16.0))?;
    finite("p0", a.p0)?;
    let extent = match a.extent {
        Some(e) => positive("extent", e)?,
        None => {
            let need = (2.3 * (k.c * t_end + 12.0 * sigma) / dx).ceil() as usize;
            need.max(16).next_power_of_two() as f64 * dx
        }
    };
    let grid = Grid::centered(extent, dx)?;
    let k0 = a.p0 / k.hbar;
    let mut psi = SpinorField::gaussian(grid, sigma, k0, UPPER_COMPONENT)?;
    if a.band == BandArg::Positive {
        psi = dirac::project_positive_energy(&k, &psi, mass)?;
    }
    let mut series = Vec::new();
    match a.method {
        MethodArg::Spectral => {
            let samples = (t_end / sample_dt).floor() as usize;
            let times: Vec<f64> = (0..=samples).map(|i| i as f64 * sample_dt).collect();
            for (t, (x, n)) in times
                .iter()
                .zip(dirac::spectral_series(&k, &psi, mass, &times)?)
            {
                series.push(SeriesPoint {
                    t: *t,
                    mean_x: x,
                    norm: n,
                });
            }
        }
        MethodArg::Checkerboard => {
            let lat = LatticeSpec::for_duration(&k, dx, extent, t_end)?;
            let stride = ((sample_dt / lat.dt).round() as u64).max(1);
            dirac::checkerboard_series(&k, &psi, &lat, mass, stride, |step, f| {
                if step % stride == 0 {
                    series.push(SeriesPoint {
                        t: f.time,
                        mean_x: f.mean_position().unwrap_or(f64::NAN),
                        norm: f.norm(),
                    });
                }
            })?;
        }
    }
    let prediction = dirac::zitter_prediction(&k, a.p0, mass, t_end)?;
    let (zitter, zitter_error) = {
        let t: Vec<f64> = series.iter().map(|s| s.t).collect();
        let x: Vec<f64> = series.iter().map(|s| s.mean_x).collect();
        match dirac::zitter_analyze(&x, &t, prediction.frequency) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };
    match a.output {
        Format::Csv => {
            let mut csv = Csv::new(&["t", "mean_x", "norm"]);
            for s in &series {
                csv.row([Cell::from(s.t), Cell::from(s.mean_x), Cell::from(s.norm)]);
            }
            Ok(csv.into_string())
        }
        Format::Json => {
            let report = DiracReport {
                units,
                method: match a.method {
                    MethodArg::Checkerboard => "checkerboard",
                    MethodArg::Spectral => "spectral",
                },
                band: match a.band {
                    BandArg::Both => "both",
                    BandArg::Positive => "positive",
                },
                mass,
                sigma,
                p0: a.p0,
                dx,
                cells: grid.n,
                extent,
                t_end,
                sample_dt,
                spin_flip_rate: mass * k.c * k.c / k.hbar,
                half_compton_wavelength: 0.5 * lambda,
                expected_zitter_frequency: prediction.frequency,
                prediction,
                zitter,
                zitter_error,
                series,
            };
            Ok(to_json(&meta(), &report)?)
        }
    }
}

#[derive(Serialize)]
struct KerrNewmanReport {
    particle: Option<String>,
    input: KNConfig,
    charge_term: ChargeTerm,
    discriminant: f64,
    classification: KNClassification,
    /// b / (lambda_bar / 2), particles only
    b_over_half_compton: Option<f64>,
}

fn kerr_newman(a: &KerrNewmanArgs, table: &ConstantsTable) -> Result<KerrNewmanReport, CliError> {
    let k = &table.physical;
    let term = if a.literal_charge {
        ChargeTerm::Literal
    } else {
        ChargeTerm::Standard
    };
    let (cfg, half) = match &a.particle {
        Some(name) => {
            let p = table.particle(name)?;
            (
                KNConfig::for_particle(k, p)?,
                Some(0.5 * k.reduced_compton_wavelength(p)?),
            )
        }
        None => {
            let mass = a
                .mass
                .ok_or_else(|| invalid("--mass or --particle is required"))?;
            let cfg = KNConfig {
                mass: positive("mass", mass)?,
                charge: finite("charge", a.charge.unwrap_or(0.0))?,
                spin_param: finite("spin-param", a.spin_param.unwrap_or(0.0))?,
            };
            (cfg, None)
        }
    };
    let classification = kerr_newman::kn_classify(k, &cfg, term)?;
    Ok(KerrNewmanReport {
        particle: a.particle.clone(),
        input: cfg,
        charge_term: term,
        discriminant: kerr_newman::kn_discriminant(k, &cfg, term)?,
        classification,
        b_over_half_compton: half.map(|h| classification.b.unwrap_or(0.0) / h),
    })
}

#[derive(Serialize)]
struct CosmoReport {
    spec: CosmologySpec,
    particle: Option<String>,
    max_relative_error_vs_closed_form: f64,
    final_count: f64,
    /// tau sqrt(N_final)
    sqrt_n_age: f64,
    /// 2 tau (sqrt(N_final) - sqrt(N0))
    exact_age: f64,
    monotone: bool,
    rk4_steps: u64,
    refined: bool,
    times: Vec<f64>,
    n_values: Vec<f64>,
}

fn cosmo(
    a: &CosmoArgs,
    table: &ConstantsTable,
    meta: impl Fn() -> RunMetadata,
) -> Result<String, CliError> {
    let (tau, particle) = match (a.tau, &a.particle) {
        (Some(t), _) => (positive("tau", t)?, None),
        (None, name) => {
            let name = name.as_deref().unwrap_or("pion");
            (
                table.physical.compton_time(table.particle(name)?)?,
                Some(name.to_string()),
            )
        }
    };
    let t_end = finite("t-end", a.t_end.unwrap_or(1e6 * tau))?;
    let spec = CosmologySpec {
        n0: finite("N0", a.n0)?,
        tau,
        t_end,
        dt: match a.dt {
            Some(dt) => positive("dt", dt)?,
            None if t_end > 0.0 => t_end / 1000.0,
            None => tau,
        },
    };
    spec.validate()?;
    let traj = cosmology::integrate_population(&spec)?;
    match a.output {
        Format::Csv => {
            let mut csv = Csv::new(&["t", "N"]);
            for (&t, &n) in traj.times.iter().zip(&traj.n_values) {
                csv.row([Cell::from(t), Cell::from(n)]);
            }
            Ok(csv.into_string())
        }
        Format::Json => {
            let last = *traj
                .n_values
                .last()
                .expect("trajectory has the initial sample");
            let report = CosmoReport {
                spec,
                particle,
                max_relative_error_vs_closed_form: cosmology::max_relative_error(&spec, &traj),
                final_count: last,
                sqrt_n_age: cosmology::age_from_count(last, tau)?,
                exact_age: cosmology::exact_growth_time(spec.n0, last.max(spec.n0), tau)?,
                monotone: traj.monotone,
                rk4_steps: traj.rk4_steps,
                refined: traj.refined,
                times: traj.times,
                n_values: traj.n_values,
            };
            Ok(to_json(&meta(), &report)?)
        }
    }
}

#[derive(Serialize)]
struct AuditReport {
    particle: String,
    inputs: AuditInputs,
    tolerance_dex: f64,
    rows: Vec<AuditRow>,
    all_pass: bool,
    structural_pass: bool,
    note: &'static str,
}

fn audit(a: &AuditArgs, table: &ConstantsTable) -> Result<AuditReport, CliError> {
    let p = table.particle(&a.particle)?;
    let inputs = AuditInputs {
        radius: positive("R", a.radius)?,
        count: positive("N", a.count)?,
        age_obs: positive("T-obs", a.age_obs)?,
        mass_obs: positive("M-obs", a.mass_obs)?,
        radius_obs: a.radius_obs.map(|r| positive("R-obs", r)).transpose()?,
    };
    let rows = cosmology::large_number_audit(&table.physical, &inputs, p)?;
    Ok(AuditReport {
        particle: a.particle.clone(),
        inputs,
        tolerance_dex: cosmology::AUDIT_TOLERANCE_DEX,
        all_pass: rows.iter().all(|r| r.pass),
        structural_pass: rows.iter().filter(|r| r.structural).all(|r| r.pass),
        rows,
        note: "pion_hubble uses the adopted cube-root form m = (hbar^2 H / (G c))^(1/3) with H = c / R_obs",
    })
}
