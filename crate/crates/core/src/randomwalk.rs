//! Fixed-length isotropic random walks.
//!
//! An `N`-step walk with step length `l` has mean squared end-to-end
//! distance exactly `N l^2` in any dimension, so its RMS displacement is
//! `l sqrt(N)`. Read backwards, a system of size `R` crossed in `N` steps
//! has step `l = R / sqrt(N)`.
//!
//! Step directions:
//!
//! - 1D: `+l` or `-l` with equal probability, 64 steps per random word
//! - 2D: a point drawn uniformly in the unit disk by rejection, normalized
//! - 3D: Marsaglia's method (rejection in the unit disk, then
//!   `(2u sqrt(1-s), 2v sqrt(1-s), 1-2s)`), uniform on the sphere
//!
//! Both rejection loops take the two coordinates from one 64-bit draw
//! (32 bits each).

use alloc::format;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::constants::{Particle, PhysicalConstants};
use crate::error::{positive, Error, Result};
use crate::math::sqrt;
use crate::rng::{substream, uniform_symmetric_pair};
use crate::stats::Moments;

/// Spatial dimension of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "u8", try_from = "u8"))]
pub enum Dim {
    One,
    Two,
    Three,
}

impl Dim {
    pub fn get(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

impl TryFrom<u8> for Dim {
    type Error = Error;

    fn try_from(d: u8) -> Result<Self> {
        match d {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(Error::InvalidSpec(format!(
                "dim must be 1, 2 or 3, got {d}"
            ))),
        }
    }
}

impl From<Dim> for u8 {
    fn from(d: Dim) -> u8 {
        d.get() as u8
    }
}

/// End-to-end displacement; unused trailing axes are zero.
pub type Displacement = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WalkSpec {
    pub steps: u64,
    /// cm
    pub step_length: f64,
    pub dim: Dim,
    pub walkers: u64,
    pub seed: u64,
}

impl WalkSpec {
    pub fn validate(&self) -> Result<()> {
        positive("step length", self.step_length)?;
        if self.walkers == 0 {
            return Err(Error::InvalidSpec("walkers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Step length `R / sqrt(N)` of an `N`-step walk spanning `R`.
pub fn rms_stretch(radius: f64, count: f64) -> Result<f64> {
    positive("system size R", radius)?;
    if !count.is_finite() || count < 1.0 {
        return Err(Error::Domain {
            what: "step count N (must be >= 1)",
            value: count,
        });
    }
    Ok(radius / sqrt(count))
}

/// Ratio of the random-walk step for `(R, N)` to the particle's reduced
/// Compton wavelength. Values of order one are the large-number coincidence.
pub fn universe_consistency(
    constants: &PhysicalConstants,
    radius: f64,
    count: f64,
    particle: &Particle,
) -> Result<f64> {
    Ok(rms_stretch(radius, count)? / constants.reduced_compton_wavelength(particle)?)
}

/// Displacement of walker `walker_index`, drawn from its own substream.
pub fn simulate_walk(spec: &WalkSpec, walker_index: u64) -> Result<Displacement> {
    spec.validate()?;
    if walker_index >= spec.walkers {
        return Err(Error::InvalidSpec(format!(
            "walker index {walker_index} out of range for {} walkers",
            spec.walkers
        )));
    }
    let mut rng = substream(spec.seed, walker_index);
    let unit = match spec.dim {
        Dim::One => [walk_1d(&mut rng, spec.steps), 0.0, 0.0],
        Dim::Two => {
            let [x, y] = walk_2d(&mut rng, spec.steps);
            [x, y, 0.0]
        }
        Dim::Three => walk_3d(&mut rng, spec.steps),
    };
    Ok(unit.map(|u| u * spec.step_length))
}

fn walk_1d<R: RngCore>(rng: &mut R, steps: u64) -> f64 {
    // Each set bit is a +1 step, each clear bit a -1 step.
    let mut sum: i64 = 0;
    let mut left = steps;
    while left > 0 {
        let take = left.min(64);
        let word = if take == 64 {
            rng.next_u64()
        } else {
            rng.next_u64() & ((1u64 << take) - 1)
        };
        sum += 2 * i64::from(word.count_ones()) - take as i64;
        left -= take;
    }
    sum as f64
}

fn walk_2d<R: RngCore>(rng: &mut R, steps: u64) -> [f64; 2] {
    let (mut x, mut y) = (0.0, 0.0);
    for _ in 0..steps {
        loop {
            let (u, v) = uniform_symmetric_pair(rng);
            let s = u * u + v * v;
            if s < 1.0 && s > 1e-12 {
                let r = sqrt(s);
                x += u / r;
                y += v / r;
                break;
            }
        }
    }
    [x, y]
}

fn walk_3d<R: RngCore>(rng: &mut R, steps: u64) -> [f64; 3] {
    let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
    for _ in 0..steps {
        loop {
            let (u, v) = uniform_symmetric_pair(rng);
            let s = u * u + v * v;
            if s < 1.0 {
                let f = 2.0 * sqrt(1.0 - s);
                x += u * f;
                y += v * f;
                z += 1.0 - 2.0 * s;
                break;
            }
        }
    }
    [x, y, z]
}

/// Aggregate statistics of a walk ensemble.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WalkEnsembleResult {
    /// sqrt of the ensemble mean of `|r|^2`, cm.
    pub rms_displacement: f64,
    /// Standard error of `rms_displacement` by the delta method; `None`
    /// below two walkers.
    pub stderr_rms: Option<f64>,
    /// Ensemble mean of `|r|^2`, cm^2.
    pub mean_square: f64,
    pub stderr_mean_square: Option<f64>,
    /// One entry per axis, cm.
    pub mean_displacement_vector: Vec<f64>,
    pub stderr_mean_displacement: Option<Vec<f64>>,
    pub walkers: u64,
    pub seed: u64,
}

/// Order-dependent reduction of per-walker displacements.
///
/// Feeding the same displacements in the same order gives bit-identical
/// results no matter how they were computed.
#[derive(Debug, Clone)]
pub struct WalkAccumulator {
    dim: usize,
    r2: Moments,
    axes: [Moments; 3],
}

impl WalkAccumulator {
    pub fn new(dim: Dim) -> Self {
        Self {
            dim: dim.get(),
            r2: Moments::default(),
            axes: Default::default(),
        }
    }

    pub fn push(&mut self, d: &Displacement) {
        self.r2.push(squared_norm(d));
        for (m, &x) in self.axes.iter_mut().zip(d).take(self.dim) {
            m.push(x);
        }
    }

    pub fn finish(&self, seed: u64) -> WalkEnsembleResult {
        let mean_square = self.r2.mean();
        let rms = sqrt(mean_square);
        let stderr_ms = self.r2.stderr();
        let axes = &self.axes[..self.dim];
        WalkEnsembleResult {
            rms_displacement: rms,
            stderr_rms: stderr_ms.map(|se| if rms > 0.0 { se / (2.0 * rms) } else { 0.0 }),
            mean_square,
            stderr_mean_square: stderr_ms,
            mean_displacement_vector: axes.iter().map(Moments::mean).collect(),
            stderr_mean_displacement: axes.iter().map(Moments::stderr).collect(),
            walkers: self.r2.count(),
            seed,
        }
    }
}

pub fn squared_norm(d: &Displacement) -> f64 {
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// Monte-Carlo estimate of the RMS displacement, walkers in index order.
pub fn estimate_rms(spec: &WalkSpec) -> Result<WalkEnsembleResult> {
    spec.validate()?;
    let mut acc = WalkAccumulator::new(spec.dim);
    for i in 0..spec.walkers {
        acc.push(&simulate_walk(spec, i)?);
    }
    Ok(acc.finish(spec.seed))
}

/// Reduce displacements that were computed elsewhere (e.g. in parallel),
/// given in walker-index order.
pub fn summarize(spec: &WalkSpec, displacements: &[Displacement]) -> Result<WalkEnsembleResult> {
    if displacements.len() as u64 != spec.walkers {
        return Err(Error::InvalidSpec(format!(
            "expected {} displacements, got {}",
            spec.walkers,
            displacements.len()
        )));
    }
    let mut acc = WalkAccumulator::new(spec.dim);
    displacements.iter().for_each(|d| acc.push(d));
    Ok(acc.finish(spec.seed))
}

/// Exact `E|r|^2 = N l^2`.
pub fn expected_mean_square(spec: &WalkSpec) -> f64 {
    spec.steps as f64 * spec.step_length * spec.step_length
}
