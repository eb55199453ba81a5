//! Numerical core for the Compton-scale stochastic laboratory.
//!
//! Everything here is pure computation over `alloc`: no IO, no threads, no
//! global state. The `comptonlab` crate layers config files, parallel
//! ensembles and the command-line interface on top.
//!
//! Modules:
//!
//! - [`constants`]: CGS-Gaussian constants, particle table, Compton and thermal scales
//! - [`randomwalk`]: fixed-length isotropic random walks and the `l = R/sqrt(N)` relation
//! - [`nelson`]: Euler-Maruyama stochastic mechanics against exact Gaussian densities
//! - [`dirac`]: 1+1D Dirac evolution by checkerboard path sum and by exact spectral rotation
//! - [`kerr_newman`]: horizon discriminant and naked-singularity classification
//! - [`cosmology`]: `dN/dt = sqrt(N)/tau`, derived cosmic scales and the large-number audit
//!
//! Stochastic modules draw from [`rng::substream`], a counter-based ChaCha8
//! stream keyed by `(seed, walker index)`, so every walker is reproducible in
//! isolation and ensemble reductions are independent of scheduling.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constants;
pub mod cosmology;
pub mod dirac;
mod error;
pub mod fft;
pub mod kerr_newman;
mod math;
pub mod nelson;
pub mod randomwalk;
pub mod rng;
pub mod stats;

pub use constants::{ComptonForm, ConstantsTable, Particle, PhysicalConstants};
pub use error::{Error, Result};
