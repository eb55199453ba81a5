//! Stochastic mechanics: Brownian walkers whose drift comes from a wave
//! function reproduce `|psi|^2`.
//!
//! Walkers obey `dx = b(x, t) dt + sqrt(2 nu) dW` with `nu = hbar / 2m`
//! and forward drift `b = nu d/dx ln rho + (1/m) dS/dx`. The two built-in
//! states have Gaussian densities, so the exact `rho(x, t)` is available in
//! closed form for every check.
//!
//! Two diffusion conventions are carried: [`Convention::Compton`] quotes
//! `nu = hbar/m` (which equals `lambda_bar * c`), [`Convention::Nelson`]
//! quotes `hbar/2m`. Dynamics always run with the Nelson value.

use alloc::format;
use alloc::vec::Vec;

use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::constants::{Particle, PhysicalConstants};
use crate::error::{non_negative, positive, Error, Result};
use crate::math::{abs, ceil, exp, normal_cdf, sqrt};
use crate::rng::substream;
use crate::stats::{ks_statistic, sorted_copy, Binning, Histogram};

/// `rate * dt` must stay below this for explicit stepping.
pub const STABILITY_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Convention {
    /// `nu = hbar / m`
    Compton,
    /// `nu = hbar / 2m`
    #[default]
    Nelson,
}

impl Convention {
    /// Factor taking a value in this convention to the Nelson value.
    fn to_nelson(self) -> f64 {
        match self {
            Convention::Compton => 0.5,
            Convention::Nelson => 1.0,
        }
    }
}

/// Diffusion constant of `p` in the given convention, cm^2/s.
pub fn diffusion_constant(
    k: &PhysicalConstants,
    p: &Particle,
    convention: Convention,
) -> Result<f64> {
    let hbar_over_m = k.hbar / p.checked_mass()?;
    Ok(match convention {
        Convention::Compton => hbar_over_m,
        Convention::Nelson => 0.5 * hbar_over_m,
    })
}

/// RMS increment `sqrt(nu dt)` over one interval.
pub fn increment_scale(nu: f64, dt: f64) -> Result<f64> {
    positive("diffusion constant", nu)?;
    positive("time step", dt)?;
    Ok(sqrt(nu * dt))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ModelKind {
    /// Zero-momentum Gaussian centred at the origin; `sigma0` is the
    /// standard deviation of `|psi|^2` at `t = 0`.
    FreeGaussianPacket {
        sigma0: f64,
    },
    HarmonicGroundState {
        omega: f64,
    },
}

/// A wave function with closed-form density and drift.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantumModel {
    pub kind: ModelKind,
    /// hbar / m, cm^2/s.
    pub hbar_over_m: f64,
}

impl QuantumModel {
    pub fn free_packet(sigma0: f64, hbar_over_m: f64) -> Result<Self> {
        positive("sigma0", sigma0)?;
        positive("hbar/m", hbar_over_m)?;
        Ok(Self {
            kind: ModelKind::FreeGaussianPacket { sigma0 },
            hbar_over_m,
        })
    }

    pub fn harmonic(omega: f64, hbar_over_m: f64) -> Result<Self> {
        positive("omega", omega)?;
        positive("hbar/m", hbar_over_m)?;
        Ok(Self {
            kind: ModelKind::HarmonicGroundState { omega },
            hbar_over_m,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ModelKind::FreeGaussianPacket { sigma0 } => Self::free_packet(sigma0, self.hbar_over_m),
            ModelKind::HarmonicGroundState { omega } => Self::harmonic(omega, self.hbar_over_m),
        }
        .map(drop)
    }

    /// `hbar / 2m`.
    pub fn nelson_nu(&self) -> f64 {
        0.5 * self.hbar_over_m
    }

    /// The largest `|db/dx|`: `omega` for the oscillator, `hbar / (2 m sigma0^2)`
    /// for the packet (attained at `t = 0`).
    pub fn drift_rate(&self) -> f64 {
        match self.kind {
            ModelKind::FreeGaussianPacket { sigma0 } => self.nelson_nu() / (sigma0 * sigma0),
            ModelKind::HarmonicGroundState { omega } => omega,
        }
    }

    /// Standard deviation of `|psi(., t)|^2`.
    pub fn std_dev(&self, t: f64) -> f64 {
        match self.kind {
            ModelKind::FreeGaussianPacket { sigma0 } => {
                let at = self.drift_rate() * t;
                sigma0 * sqrt(1.0 + at * at)
            }
            ModelKind::HarmonicGroundState { omega } => sqrt(self.nelson_nu() / omega),
        }
    }

    pub fn density(&self, x: f64, t: f64) -> f64 {
        let s = self.std_dev(t);
        let z = x / s;
        exp(-0.5 * z * z) / (s * sqrt(core::f64::consts::TAU))
    }

    pub fn cdf(&self, x: f64, t: f64) -> f64 {
        normal_cdf(x / self.std_dev(t))
    }

    /// Forward drift `b(x, t)`, cm/s.
    pub fn drift(&self, x: f64, t: f64) -> Result<f64> {
        non_negative("time", t)?;
        Ok(self.drift_unchecked(x, t))
    }

    fn drift_unchecked(&self, x: f64, t: f64) -> f64 {
        match self.kind {
            // current velocity x a^2 t / (1 + a^2 t^2) plus osmotic -nu x / sigma(t)^2
            ModelKind::FreeGaussianPacket { .. } => {
                let a = self.drift_rate();
                let at = a * t;
                x * a * (at - 1.0) / (1.0 + at * at)
            }
            ModelKind::HarmonicGroundState { omega } => -omega * x,
        }
    }

    /// One draw from `|psi(., t)|^2`.
    pub fn sample<R: RngCore>(&self, t: f64, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        self.std_dev(t) * z
    }
}

/// Drift field of `model` at `(x, t)`.
pub fn drift_field(model: &QuantumModel, x: f64, t: f64) -> Result<f64> {
    model.drift(x, t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiffusionSpec {
    /// Diffusion constant quoted in `convention`, cm^2/s.
    pub nu: f64,
    pub convention: Convention,
    pub dt: f64,
    pub t_end: f64,
    pub walkers: u64,
    pub seed: u64,
}

impl DiffusionSpec {
    /// A spec whose diffusion constant matches `model`.
    pub fn for_model(
        model: &QuantumModel,
        convention: Convention,
        dt: f64,
        t_end: f64,
        walkers: u64,
        seed: u64,
    ) -> Self {
        Self {
            nu: model.nelson_nu() / convention.to_nelson(),
            convention,
            dt,
            t_end,
            walkers,
            seed,
        }
    }

    pub fn nelson_nu(&self) -> f64 {
        self.nu * self.convention.to_nelson()
    }

    pub fn validate(&self) -> Result<()> {
        positive("nu", self.nu)?;
        positive("dt", self.dt)?;
        non_negative("t_end", self.t_end)?;
        if self.walkers == 0 {
            return Err(Error::InvalidSpec("walkers must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of steps and their common length (at most `dt`, landing on `t_end`).
    pub fn schedule(&self) -> (u64, f64) {
        if self.t_end == 0.0 {
            return (0, self.dt);
        }
        let n = ceil(self.t_end / self.dt * (1.0 - 1e-12)).max(1.0) as u64;
        (n, self.t_end / n as f64)
    }

    /// Check the spec against a model: same diffusion constant and a
    /// stable step.
    pub fn check_against(&self, model: &QuantumModel) -> Result<()> {
        self.validate()?;
        model.validate()?;
        let want = model.nelson_nu();
        if abs(self.nelson_nu() - want) > 1e-12 * want {
            return Err(Error::InvalidSpec(format!(
                "diffusion constant {} ({:?} convention) does not match the model's hbar/2m = {}",
                self.nu, self.convention, want
            )));
        }
        let rate_dt = model.drift_rate() * self.dt;
        if rate_dt >= STABILITY_LIMIT {
            return Err(Error::UnstableStep {
                rate_dt,
                limit: STABILITY_LIMIT,
            });
        }
        Ok(())
    }
}

/// Advance one path by `steps` Euler-Maruyama steps of length `h` with
/// diffusion constant `nu` (so noise `sqrt(2 nu h)` per step).
pub fn euler_maruyama<R, F>(
    mut x: f64,
    t0: f64,
    h: f64,
    steps: u64,
    nu: f64,
    drift: F,
    rng: &mut R,
) -> f64
where
    R: RngCore,
    F: Fn(f64, f64) -> f64,
{
    let kick = sqrt(2.0 * nu * h);
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let xi: f64 = StandardNormal.sample(rng);
        x += drift(x, t) * h + kick * xi;
    }
    x
}

/// Walker positions at a common time.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WalkerEnsemble {
    pub positions: Vec<f64>,
    pub time: f64,
    pub seed: u64,
}

/// Final position of walker `index`: an exact draw from `|psi(., 0)|^2`
/// followed by Euler-Maruyama to `t_end`. Assumes `spec.check_against(model)`.
pub fn evolve_walker(model: &QuantumModel, spec: &DiffusionSpec, index: u64) -> f64 {
    let mut rng = substream(spec.seed, index);
    let x0 = model.sample(0.0, &mut rng);
    let (steps, h) = spec.schedule();
    euler_maruyama(
        x0,
        0.0,
        h,
        steps,
        spec.nelson_nu(),
        |x, t| model.drift_unchecked(x, t),
        &mut rng,
    )
}

pub fn evolve_ensemble(model: &QuantumModel, spec: &DiffusionSpec) -> Result<WalkerEnsemble> {
    spec.check_against(model)?;
    let positions = (0..spec.walkers)
        .map(|i| evolve_walker(model, spec, i))
        .collect();
    Ok(WalkerEnsemble {
        positions,
        time: spec.t_end,
        seed: spec.seed,
    })
}

/// Goodness of fit between an ensemble and `|psi(., t)|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityDistance {
    /// `integral |h - rho| dx` with the histogram `h` and `rho` compared bin
    /// by bin, plus the exact mass outside the sample range. In `[0, 2]`.
    pub l1: f64,
    /// Kolmogorov-Smirnov statistic against the exact CDF.
    pub ks: f64,
    pub bins: usize,
    pub bin_width: f64,
}

pub fn density_distance(
    ensemble: &WalkerEnsemble,
    model: &QuantumModel,
    binning: Binning,
) -> Result<DensityDistance> {
    let sorted = sorted_copy(&ensemble.positions)?;
    let hist = Histogram::from_sorted(&sorted, binning)?;
    let t = ensemble.time;
    let cdf = |x| model.cdf(x, t);
    let inside: f64 = (0..hist.counts.len())
        .map(|i| {
            let (a, b) = hist.edges(i);
            abs(hist.mass(i) - (cdf(b) - cdf(a)))
        })
        .sum();
    let outside = cdf(hist.lo) + (1.0 - cdf(hist.hi()));
    Ok(DensityDistance {
        l1: inside + outside,
        ks: ks_statistic(&sorted, cdf),
        bins: hist.counts.len(),
        bin_width: hist.width,
    })
}

/// L1 distance between two empirical densities on common bins laid out
/// from the pooled sample.
pub fn empirical_l1(a: &[f64], b: &[f64], binning: Binning) -> Result<f64> {
    let pooled = sorted_copy(&[a, b].concat())?;
    let ha = Histogram::from_sorted(&pooled, binning)?.with_layout_of(a);
    let hb = ha.with_layout_of(b);
    Ok((0..ha.counts.len())
        .map(|i| abs(ha.mass(i) - hb.mass(i)))
        .sum())
}

/// `n` independent draws from `|psi(., t)|^2`, walker `i` on substream `i`.
pub fn sample_density(model: &QuantumModel, t: f64, n: u64, seed: u64) -> Vec<f64> {
    (0..n)
        .map(|i| model.sample(t, &mut substream(seed, i)))
        .collect()
}
