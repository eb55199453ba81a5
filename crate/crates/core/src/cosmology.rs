//! Fluctuational particle creation `dN/dt = sqrt(N) / tau` and the cosmic
//! scales it implies.
//!
//! The ODE is separable with exact solution `N(t) = (sqrt(N0) + t/(2 tau))^2`.
//! That closed form is the oracle for [`integrate_population`], a fixed-step
//! classical RK4 that substeps automatically where `N` is small.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::constants::{Particle, PhysicalConstants};
use crate::error::{non_negative, positive, Error, Result};
use crate::math::{abs, cbrt, ceil, log10, round, sqrt};

/// Substep bound `h <= SUBSTEP_FRACTION * tau * sqrt(N)`. The local
/// time scale of the ODE is `N / (dN/dt) = tau sqrt(N)`.
pub const SUBSTEP_FRACTION: f64 = 0.02;

/// Order-of-magnitude pass band for audit residuals, dex.
pub const AUDIT_TOLERANCE_DEX: f64 = 1.0;

/// Upper bound on stored trajectory samples.
pub const MAX_SAMPLES: u64 = 10_000_000;

/// `sqrt(N) / tau`, particles per second.
pub fn creation_rate(count: f64, tau: f64) -> Result<f64> {
    non_negative("particle count N", count)?;
    positive("tau", tau)?;
    Ok(sqrt(count) / tau)
}

/// Exact `N(t) = (sqrt(N0) + t / (2 tau))^2`.
pub fn closed_form(n0: f64, tau: f64, t: f64) -> f64 {
    let y = sqrt(n0) + t / (2.0 * tau);
    y * y
}

/// Exact time for the population to grow from `n0` to `n`:
/// `2 tau (sqrt(N) - sqrt(N0))`.
pub fn exact_growth_time(n0: f64, n: f64, tau: f64) -> Result<f64> {
    non_negative("initial count N0", n0)?;
    positive("tau", tau)?;
    if n.is_nan() || n < n0 {
        return Err(Error::Domain {
            what: "target count must be >= N0",
            value: n,
        });
    }
    Ok(2.0 * tau * (sqrt(n) - sqrt(n0)))
}

/// The age `T = tau sqrt(N)` predicted from the count alone.
pub fn age_from_count(n: f64, tau: f64) -> Result<f64> {
    non_negative("particle count N", n)?;
    positive("tau", tau)?;
    Ok(tau * sqrt(n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CosmologySpec {
    pub n0: f64,
    /// s
    pub tau: f64,
    /// s
    pub t_end: f64,
    /// Output sampling interval, s.
    pub dt: f64,
}

impl CosmologySpec {
    pub fn validate(&self) -> Result<()> {
        non_negative("N0", self.n0)?;
        positive("tau", self.tau)?;
        non_negative("t_end", self.t_end)?;
        positive("dt", self.dt)?;
        if self.t_end / self.dt > MAX_SAMPLES as f64 {
            return Err(Error::InvalidSpec(format!(
                "t_end / dt = {} exceeds {MAX_SAMPLES} output samples",
                self.t_end / self.dt
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CosmologyTrajectory {
    pub times: Vec<f64>,
    pub n_values: Vec<f64>,
    /// `N` never decreased between samples.
    pub monotone: bool,
    /// Total RK4 steps taken.
    pub rk4_steps: u64,
    /// At least one output interval was split into substeps.
    pub refined: bool,
}

/// One classical RK4 step of `y' = f(y)`.
pub fn rk4_step<F: Fn(f64) -> f64>(f: F, y: f64, h: f64) -> f64 {
    let k1 = f(y);
    let k2 = f(y + 0.5 * h * k1);
    let k3 = f(y + 0.5 * h * k2);
    let k4 = f(y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Integrate `dN/dt = sqrt(N)/tau` from `N0`, sampling every `dt` and
/// at `t_end`.
pub fn integrate_population(spec: &CosmologySpec) -> Result<CosmologyTrajectory> {
    spec.validate()?;
    let tau = spec.tau;
    let rate = |n: f64| sqrt(n.max(0.0)) / tau;
    let q = spec.t_end / spec.dt;
    // A ratio within rounding of an integer must not add an empty interval.
    let samples = if abs(q - round(q)) <= 1e-9 * q {
        round(q)
    } else {
        ceil(q)
    } as u64;
    let mut times = Vec::with_capacity(samples as usize + 1);
    let mut n_values = Vec::with_capacity(samples as usize + 1);
    times.push(0.0);
    n_values.push(spec.n0);
    let (mut n, mut t) = (spec.n0, 0.0);
    let mut rk4_steps = 0;
    let mut refined = false;
    for i in 1..=samples {
        let t_next = if i == samples {
            spec.t_end
        } else {
            (i as f64 * spec.dt).min(spec.t_end)
        };
        let span = t_next - t;
        // N = 0 is a fixed point; any positive N sets the local scale.
        let local = if n > 0.0 {
            SUBSTEP_FRACTION * tau * sqrt(n)
        } else {
            span
        };
        let sub = ceil(span / local).max(1.0) as u64;
        if sub > 1 {
            refined = true;
        }
        let h = span / sub as f64;
        for _ in 0..sub {
            n = rk4_step(rate, n, h);
        }
        rk4_steps += sub;
        t = t_next;
        times.push(t);
        n_values.push(n);
    }
    let monotone = n_values.windows(2).all(|w| w[1] >= w[0]);
    Ok(CosmologyTrajectory {
        times,
        n_values,
        monotone,
        rk4_steps,
        refined,
    })
}

/// Largest relative deviation of a trajectory from the closed form.
pub fn max_relative_error(spec: &CosmologySpec, traj: &CosmologyTrajectory) -> f64 {
    traj.times
        .iter()
        .zip(&traj.n_values)
        .map(|(&t, &n)| {
            let exact = closed_form(spec.n0, spec.tau, t);
            if exact == 0.0 {
                abs(n)
            } else {
                abs(n - exact) / exact
            }
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CosmicScales {
    /// Age `tau sqrt(N)`, s.
    pub age: f64,
    /// Radius `lambda_bar sqrt(N)`, cm.
    pub radius: f64,
    /// `N m`, g.
    pub mass_total: f64,
    /// `c / R`, 1/s.
    pub hubble: f64,
}

pub fn derived_scales(k: &PhysicalConstants, count: f64, p: &Particle) -> Result<CosmicScales> {
    if !count.is_finite() || count < 1.0 {
        return Err(Error::Domain {
            what: "particle count N (must be >= 1)",
            value: count,
        });
    }
    let root = sqrt(count);
    let radius = k.reduced_compton_wavelength(p)? * root;
    Ok(CosmicScales {
        age: k.compton_time(p)? * root,
        radius,
        mass_total: count * p.mass,
        hubble: k.c / radius,
    })
}

/// Mass from the Hubble rate by the cube-root relation
/// `m = (hbar^2 H / (G c))^(1/3)`.
pub fn pion_hubble_mass(k: &PhysicalConstants, hubble: f64) -> Result<f64> {
    positive("Hubble rate", hubble)?;
    Ok(cbrt(k.hbar * k.hbar * hubble / (k.g * k.c)))
}

/// Observed or assumed cosmic quantities to audit against.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditInputs {
    /// Radius entering the random-walk relation, cm.
    pub radius: f64,
    pub count: f64,
    /// Observed age, s.
    pub age_obs: f64,
    /// Observed mass, g.
    pub mass_obs: f64,
    /// Observed radius for the radius relation; defaults to `radius`.
    pub radius_obs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditRow {
    pub relation: String,
    /// The quantity compared, as a formula.
    pub ratio_of: String,
    pub ratio: f64,
    /// `log10(ratio)`.
    pub residual_dex: f64,
    /// Compares the scheme's own scales to its inputs, as opposed to a
    /// secondary derived relation.
    pub structural: bool,
    pub pass: bool,
}

fn row(relation: &str, ratio_of: &str, ratio: f64, structural: bool) -> AuditRow {
    let residual = log10(ratio);
    AuditRow {
        relation: relation.into(),
        ratio_of: ratio_of.into(),
        ratio,
        residual_dex: residual,
        structural,
        pass: abs(residual) <= AUDIT_TOLERANCE_DEX,
    }
}

/// Dex residuals of every large-number relation.
///
/// The Hubble rate in the pion-Hubble row is `c / R_obs`; the cube-root
/// form of that relation is an adopted convention.
pub fn large_number_audit(
    k: &PhysicalConstants,
    inputs: &AuditInputs,
    p: &Particle,
) -> Result<Vec<AuditRow>> {
    positive("R", inputs.radius)?;
    positive("T_obs", inputs.age_obs)?;
    positive("M_obs", inputs.mass_obs)?;
    let radius_obs = positive("R_obs", inputs.radius_obs.unwrap_or(inputs.radius))?;
    let scales = derived_scales(k, inputs.count, p)?;
    let hubble_obs = k.c / radius_obs;
    Ok(alloc::vec![
        row(
            "random_walk_radius",
            "lambda_bar*sqrt(N)/R",
            scales.radius / inputs.radius,
            true
        ),
        row(
            "sqrt_n_age",
            "tau*sqrt(N)/T_obs",
            scales.age / inputs.age_obs,
            true
        ),
        row(
            "radius",
            "lambda_bar*sqrt(N)/R_obs",
            scales.radius / radius_obs,
            false
        ),
        row(
            "mass",
            "N*m/M_obs",
            scales.mass_total / inputs.mass_obs,
            false
        ),
        row(
            "pion_hubble",
            "(hbar^2*H/(G*c))^(1/3)/m, H=c/R_obs",
            pion_hubble_mass(k, hubble_obs)? / p.mass,
            false
        ),
    ])
}
