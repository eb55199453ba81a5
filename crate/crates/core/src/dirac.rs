//! 1+1D Dirac evolution on a periodic grid.
//!
//! Representation: `alpha = sigma_z`, `beta = sigma_x`, so
//!
//! ```text
//! H = -i hbar c sigma_z d/dx + m c^2 sigma_x,     H(k) = hbar c k sigma_z + m c^2 sigma_x
//! ```
//!
//! Component 0 moves right at `+c`, component 1 left at `-c`, and the mass
//! term flips one into the other at rate `m c^2 / hbar`.
//!
//! Two propagators:
//!
//! - [`checkerboard_propagate`]: light-cone lattice `dx = c dt`; each step
//!   every amplitude hops one cell along its direction and picks up the
//!   reversal amplitude `-i dt m c^2 / hbar` when it changes direction.
//!   First order in `dx`; exact for `m = 0`.
//! - [`spectral_evolve`]: exact per-mode rotation `exp(-i H(k) t / hbar)`.
//!
//! A spinor proportional to `(1, 0)` at `k = 0` is an equal mix of the two
//! energy bands, which is what produces Zitterbewegung.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::constants::PhysicalConstants;
use crate::error::{non_negative, positive, Error, Result};
use crate::fft::{signed_index, Direction, Fft};
use crate::math::{abs, exp, round, sin_cos, sqrt};
use crate::stats::linear_fit;

pub type Spinor = [Complex64; 2];

/// Fraction of the norm allowed in the outer cells of the grid.
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Fraction of the norm allowed near the Nyquist wavenumber.
pub const ALIAS_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Uniform periodic grid `x_j = x0 + j dx`, `j < n`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid {
    /// Grid on `[-extent/2, extent/2)`; `extent / dx` must be an even integer.
    pub fn centered(extent: f64, dx: f64) -> Result<Self> {
        let n = cells(extent, dx)?;
        Ok(Self {
            x0: -0.5 * extent,
            dx,
            n,
        })
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn extent(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Wavenumber of FFT bin `j`, 1/cm.
    pub fn wavenumber(&self, j: usize) -> f64 {
        TAU * signed_index(j, self.n) as f64 / self.extent()
    }
}

fn cells(extent: f64, dx: f64) -> Result<usize> {
    positive("grid extent", extent)?;
    positive("dx", dx)?;
    let ratio = extent / dx;
    let n = round(ratio);
    if abs(ratio - n) > 1e-9 * ratio || n < 2.0 || !(n as u64).is_multiple_of(2) {
        return Err(Error::InvalidSpec(format!(
            "extent/dx = {ratio} must be an even integer"
        )));
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Representation {
    Position,
    /// Raw forward-FFT coefficients in FFT bin order.
    Momentum,
}

/// Two-component amplitudes on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub grid: Grid,
    pub amplitudes: Vec<Spinor>,
    /// s
    pub time: f64,
    pub representation: Representation,
}

impl SpinorField {
    /// Normalized Gaussian `spinor * exp(-x^2 / 4 sigma^2 + i k0 x)`
    /// centred at the origin; `sigma` is the standard deviation of `|psi|^2`.
    pub fn gaussian(grid: Grid, sigma: f64, k0: f64, spinor: Spinor) -> Result<Self> {
        positive("packet width sigma", sigma)?;
        let amplitudes = (0..grid.n)
            .map(|j| {
                let x = grid.x(j);
                let env = exp(-x * x / (4.0 * sigma * sigma));
                let (s, c) = sin_cos(k0 * x);
                let phase = Complex64::new(c, s) * env;
                [spinor[0] * phase, spinor[1] * phase]
            })
            .collect();
        let mut field = Self {
            grid,
            amplitudes,
            time: 0.0,
            representation: Representation::Position,
        };
        field.normalize()?;
        Ok(field)
    }

    /// Gaussian at rest entirely in the right-moving component: equal
    /// positive- and negative-energy weight at `k = 0`.
    pub fn rest_packet(grid: Grid, sigma: f64) -> Result<Self> {
        Self::gaussian(grid, sigma, 0.0, [Complex64::new(1.0, 0.0), ZERO])
    }

    fn sum_sq(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|s| s[0].norm_sqr() + s[1].norm_sqr())
            .sum()
    }

    /// `integral |psi|^2 dx`.
    pub fn norm(&self) -> f64 {
        let s = self.sum_sq() * self.grid.dx;
        match self.representation {
            Representation::Position => s,
            Representation::Momentum => s / self.grid.n as f64,
        }
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        positive("field norm", norm)?;
        let scale = 1.0 / sqrt(norm);
        self.amplitudes
            .iter_mut()
            .for_each(|s| s.iter_mut().for_each(|z| *z *= scale));
        Ok(())
    }

    fn transform(&mut self, fft: &Fft, dir: Direction) {
        let mut buf = vec![ZERO; self.grid.n];
        for c in 0..2 {
            buf.iter_mut()
                .zip(&self.amplitudes)
                .for_each(|(b, s)| *b = s[c]);
            fft.process(&mut buf, dir);
            self.amplitudes
                .iter_mut()
                .zip(&buf)
                .for_each(|(s, b)| s[c] = *b);
        }
    }

    pub fn to_momentum(&self) -> Result<Self> {
        let mut f = self.clone();
        if f.representation == Representation::Position {
            f.transform(&Fft::new(f.grid.n)?, Direction::Forward);
            f.representation = Representation::Momentum;
        }
        Ok(f)
    }

    pub fn to_position(&self) -> Result<Self> {
        let mut f = self.clone();
        if f.representation == Representation::Momentum {
            f.transform(&Fft::new(f.grid.n)?, Direction::Inverse);
            f.representation = Representation::Position;
        }
        Ok(f)
    }

    /// `<x> = integral x |psi|^2 dx / norm` in the position representation.
    pub fn mean_position(&self) -> Result<f64> {
        let f = self.to_position()?;
        Ok(f.mean_position_raw())
    }

    fn mean_position_raw(&self) -> f64 {
        let (num, den) =
            self.amplitudes
                .iter()
                .enumerate()
                .fold((0.0, 0.0), |(num, den), (j, s)| {
                    let w = s[0].norm_sqr() + s[1].norm_sqr();
                    (num + self.grid.x(j) * w, den + w)
                });
        num / den
    }

    /// Fraction of the norm in the outer sixteenth of the grid on each side.
    pub fn edge_weight(&self) -> Result<f64> {
        let f = self.to_position()?;
        let band = (f.grid.n / 16).max(1);
        let total = f.sum_sq();
        let edge: f64 = f.amplitudes[..band]
            .iter()
            .chain(&f.amplitudes[f.grid.n - band..])
            .map(|s| s[0].norm_sqr() + s[1].norm_sqr())
            .sum();
        Ok(edge / total)
    }

    /// Fraction of the norm with `|k|` above 90% of the Nyquist wavenumber.
    pub fn nyquist_weight(&self) -> Result<f64> {
        let f = self.to_momentum()?;
        let n = f.grid.n;
        let cut = (0.45 * n as f64) as i64;
        let total = f.sum_sq();
        let high: f64 = f
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(j, _)| signed_index(*j, n).abs() > cut)
            .map(|(_, s)| s[0].norm_sqr() + s[1].norm_sqr())
            .sum();
        Ok(high / total)
    }

    /// L2 distance `sqrt(integral |a - b|^2 dx)` between two fields on the
    /// same grid.
    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidSpec("fields live on different grids".into()));
        }
        let (a, b) = (self.to_position()?, other.to_position()?);
        let s: f64 = a
            .amplitudes
            .iter()
            .zip(&b.amplitudes)
            .map(|(p, q)| (p[0] - q[0]).norm_sqr() + (p[1] - q[1]).norm_sqr())
            .sum();
        Ok(sqrt(s * self.grid.dx))
    }
}

/// Light-cone lattice with `c dt = dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatticeSpec {
    /// cm
    pub dx: f64,
    /// s; always `dx / c`
    pub dt: f64,
    /// cm; an even multiple of `dx`
    pub extent: f64,
    pub steps: u64,
}

impl LatticeSpec {
    pub fn new(k: &PhysicalConstants, dx: f64, extent: f64, steps: u64) -> Result<Self> {
        cells(extent, dx)?;
        positive("c", k.c)?;
        Ok(Self {
            dx,
            dt: dx / k.c,
            extent,
            steps,
        })
    }

    /// Lattice reaching `t` in whole steps (`t` rounded to the nearest step).
    pub fn for_duration(k: &PhysicalConstants, dx: f64, extent: f64, t: f64) -> Result<Self> {
        non_negative("duration", t)?;
        let steps = round(t * k.c / dx) as u64;
        Self::new(k, dx, extent, steps)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::centered(self.extent, self.dx)
    }
}

fn check_edges(field: &SpinorField) -> Result<()> {
    let weight = field.edge_weight()?;
    if weight > BOUNDARY_TOL {
        return Err(Error::BoundaryContamination { weight });
    }
    Ok(())
}

/// One checkerboard step in place. `flip` is `dt m c^2 / hbar`.
fn checkerboard_step(cur: &[Spinor], next: &mut [Spinor], flip: f64) {
    let n = cur.len();
    let w = MINUS_I * flip;
    for j in 0..n {
        let from_left = &cur[(j + n - 1) % n];
        let from_right = &cur[(j + 1) % n];
        next[j] = [
            from_left[0] + w * from_left[1],
            from_right[1] + w * from_right[0],
        ];
    }
}

/// Sum over checkerboard paths for `lat.steps` steps.
pub fn checkerboard_propagate(
    k: &PhysicalConstants,
    psi0: &SpinorField,
    lat: &LatticeSpec,
    mass: f64,
) -> Result<SpinorField> {
    checkerboard_series(k, psi0, lat, mass, lat.steps.max(1), |_, _| {})
}

/// Checkerboard propagation that hands `(step, field)` to `observe` at step 0
/// and every `stride` steps, plus at the final step.
pub fn checkerboard_series<F: FnMut(u64, &SpinorField)>(
    k: &PhysicalConstants,
    psi0: &SpinorField,
    lat: &LatticeSpec,
    mass: f64,
    stride: u64,
    mut observe: F,
) -> Result<SpinorField> {
    non_negative("mass", mass)?;
    if stride == 0 {
        return Err(Error::InvalidSpec(
            "sampling stride must be positive".into(),
        ));
    }
    let grid = lat.grid()?;
    if psi0.representation != Representation::Position {
        return Err(Error::InvalidSpec(
            "checkerboard input must be in position representation".into(),
        ));
    }
    if psi0.grid.n != grid.n || abs(psi0.grid.dx - grid.dx) > 1e-12 * grid.dx {
        return Err(Error::InvalidSpec(format!(
            "field grid ({} cells of {}) does not match lattice ({} cells of {})",
            psi0.grid.n, psi0.grid.dx, grid.n, grid.dx
        )));
    }
    check_edges(psi0)?;
    let flip = lat.dt * mass * k.c * k.c / k.hbar;
    let mut field = psi0.clone();
    let mut scratch = field.amplitudes.clone();
    observe(0, &field);
    for step in 1..=lat.steps {
        checkerboard_step(&field.amplitudes, &mut scratch, flip);
        core::mem::swap(&mut field.amplitudes, &mut scratch);
        field.time = psi0.time + step as f64 * lat.dt;
        if step % stride == 0 || step == lat.steps {
            observe(step, &field);
        }
    }
    check_edges(&field)?;
    Ok(field)
}

/// Per-mode propagator `exp(-i H(k) t / hbar)` applied to momentum amplitudes.
fn rotate_modes(k: &PhysicalConstants, field: &mut SpinorField, mass: f64, t: f64) {
    let rest = mass * k.c * k.c;
    for (j, s) in field.amplitudes.iter_mut().enumerate() {
        let a = k.hbar * k.c * field.grid.wavenumber(j);
        let e = sqrt(a * a + rest * rest);
        if e == 0.0 {
            continue;
        }
        let (sn, cs) = sin_cos(e * t / k.hbar);
        // cos I - i sin H/E
        let (ha, hb) = (a / e, rest / e);
        let d0 = Complex64::new(cs, -sn * ha);
        let d1 = Complex64::new(cs, sn * ha);
        let off = Complex64::new(0.0, -sn * hb);
        let (u, v) = (s[0], s[1]);
        *s = [d0 * u + off * v, off * u + d1 * v];
    }
}

fn check_aliasing(momentum: &SpinorField) -> Result<()> {
    let weight = momentum.nyquist_weight()?;
    if weight > ALIAS_TOL {
        return Err(Error::Aliasing { weight });
    }
    Ok(())
}

/// Exact evolution by `t` (s). Output is in the position representation.
pub fn spectral_evolve(
    k: &PhysicalConstants,
    psi0: &SpinorField,
    mass: f64,
    t: f64,
) -> Result<SpinorField> {
    non_negative("mass", mass)?;
    let fft = Fft::new(psi0.grid.n)?;
    let mut f = psi0.to_momentum()?;
    check_aliasing(&f)?;
    rotate_modes(k, &mut f, mass, t);
    f.transform(&fft, Direction::Inverse);
    f.representation = Representation::Position;
    f.time = psi0.time + t;
    Ok(f)
}

/// `(<x>(t), norm(t))` at each time offset, by exact evolution.
pub fn spectral_series(
    k: &PhysicalConstants,
    psi0: &SpinorField,
    mass: f64,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    non_negative("mass", mass)?;
    let fft = Fft::new(psi0.grid.n)?;
    let start = psi0.to_momentum()?;
    check_aliasing(&start)?;
    times
        .iter()
        .map(|&t| {
            let mut f = start.clone();
            rotate_modes(k, &mut f, mass, t);
            f.transform(&fft, Direction::Inverse);
            f.representation = Representation::Position;
            Ok((f.mean_position_raw(), f.norm()))
        })
        .collect()
}

/// `<x>(t)` at each time offset, by exact evolution.
pub fn mean_position_series(
    k: &PhysicalConstants,
    psi0: &SpinorField,
    mass: f64,
    times: &[f64],
) -> Result<Vec<f64>> {
    Ok(spectral_series(k, psi0, mass, times)?
        .into_iter()
        .map(|(x, _)| x)
        .collect())
}

/// Keep only the positive-energy component of every mode.
pub fn project_positive_energy(
    k: &PhysicalConstants,
    psi: &SpinorField,
    mass: f64,
) -> Result<SpinorField> {
    non_negative("mass", mass)?;
    let mut f = psi.to_momentum()?;
    let rest = mass * k.c * k.c;
    for (j, s) in f.amplitudes.iter_mut().enumerate() {
        let a = k.hbar * k.c * f.grid.wavenumber(j);
        let e = sqrt(a * a + rest * rest);
        if e == 0.0 {
            continue;
        }
        // P+ = (1 + H/E) / 2
        let (ha, hb) = (a / e, rest / e);
        let (u, v) = (s[0], s[1]);
        *s = [
            (u * (1.0 + ha) + v * hb) * 0.5,
            (u * hb + v * (1.0 - ha)) * 0.5,
        ];
    }
    let mut out = f.to_position()?;
    out.normalize()?;
    Ok(out)
}

/// Zitterbewegung read off a `<x>(t)` series.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZitterReport {
    /// Angular frequency of the strongest DFT bin of the detrended series, rad/s.
    pub dominant_frequency: f64,
    /// Width of one DFT bin, rad/s.
    pub frequency_resolution: f64,
    /// Half peak-to-peak of the detrended series, cm.
    pub oscillation_amplitude: f64,
    /// Slope of the linear trend, cm/s.
    pub drift_velocity: f64,
}

/// Detrend, then locate the dominant frequency and the oscillation amplitude.
///
/// `expected_frequency` (rad/s) sets the resolution requirements: at least
/// ten periods and eight samples per period.
pub fn zitter_analyze(
    series: &[f64],
    times: &[f64],
    expected_frequency: f64,
) -> Result<ZitterReport> {
    positive("expected frequency", expected_frequency)?;
    let n = series.len();
    if n != times.len() {
        return Err(Error::InvalidSpec(
            "series and times differ in length".into(),
        ));
    }
    if n < 16 {
        return Err(Error::UnderResolved(format!("{n} samples")));
    }
    let step = times[1] - times[0];
    positive("sample spacing", step)?;
    if times
        .windows(2)
        .any(|w| abs(w[1] - w[0] - step) > 1e-6 * step)
    {
        return Err(Error::UnderResolved(
            "samples are not uniformly spaced".into(),
        ));
    }
    let span = n as f64 * step;
    let period = TAU / expected_frequency;
    if span < 10.0 * period {
        return Err(Error::UnderResolved(format!(
            "series covers {:.3} periods, need 10",
            span / period
        )));
    }
    if period / step < 8.0 {
        return Err(Error::UnderResolved(format!(
            "{:.3} samples per period, need 8",
            period / step
        )));
    }
    let (intercept, slope) = linear_fit(times, series);
    let resid: Vec<f64> = times
        .iter()
        .zip(series)
        .map(|(&t, &x)| x - intercept - slope * t)
        .collect();
    let (lo, hi) = resid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
            (lo.min(r), hi.max(r))
        });
    let best = (1..=n / 2)
        .map(|bin| (bin, dft_power(&resid, bin)))
        .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
        .0;
    let resolution = TAU / span;
    Ok(ZitterReport {
        dominant_frequency: best as f64 * resolution,
        frequency_resolution: resolution,
        oscillation_amplitude: 0.5 * (hi - lo),
        drift_velocity: slope,
    })
}

fn dft_power(x: &[f64], bin: usize) -> f64 {
    let n = x.len();
    let (re, im) = x.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, &v)| {
        let (s, c) = sin_cos(-TAU * ((j * bin) % n) as f64 / n as f64);
        (re + v * c, im + v * s)
    });
    re * re + im * im
}

/// Single-momentum evaluation of the Zitterbewegung position formula.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZitterPrediction {
    /// `c^2 p t / E`, cm.
    pub classical: f64,
    /// `(hbar c / 2) |alpha - c p / E| / E = hbar m c^3 / (2 E^2)`, cm.
    pub amplitude: f64,
    /// `2 E / hbar`, rad/s.
    pub frequency: f64,
}

/// Evaluate `<x>(t)`'s drift, oscillation amplitude and frequency for a
/// state of definite momentum `p` (g cm/s).
pub fn zitter_prediction(
    k: &PhysicalConstants,
    p: f64,
    mass: f64,
    t: f64,
) -> Result<ZitterPrediction> {
    positive("mass", mass)?;
    let rest = mass * k.c * k.c;
    let cp = k.c * p;
    let e = sqrt(cp * cp + rest * rest);
    Ok(ZitterPrediction {
        classical: k.c * cp * t / e,
        amplitude: k.hbar * k.c * rest / (2.0 * e * e),
        frequency: 2.0 * e / k.hbar,
    })
}
