//! Physical constants (CGS-Gaussian), the particle table and the Compton,
//! chronon and thermal scales derived from them.
//!
//! Derived quantities are recomputed on every call, so overriding a constant
//! in a [`ConstantsTable`] moves every downstream number with it.
//!
//! Default values are 4-significant-figure CODATA 2018 constants and PDG 2022
//! masses; see the repository README for the table.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{positive, Error, Result};
use crate::math::sqrt;

/// Fundamental constants in CGS-Gaussian units.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalConstants {
    /// Reduced Planck constant, erg s.
    pub hbar: f64,
    /// Speed of light, cm/s.
    pub c: f64,
    /// Newton's constant, cm^3 g^-1 s^-2.
    pub g: f64,
    /// Boltzmann constant, erg/K.
    pub k_b: f64,
    /// Elementary charge, esu.
    pub e: f64,
}

/// Which Compton wavelength to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComptonForm {
    /// hbar / (m c)
    #[default]
    Reduced,
    /// h / (m c) = 2 pi hbar / (m c)
    Full,
}

impl PhysicalConstants {
    pub const CGS: Self = Self {
        hbar: 1.055e-27,
        c: 2.998e10,
        g: 6.674e-8,
        k_b: 1.381e-16,
        e: 4.803e-10,
    };

    /// hbar = c = k_B = G = e = 1. Combined with a unit-mass particle this is
    /// the natural-unit system used by the quantum modules.
    pub const NATURAL: Self = Self {
        hbar: 1.0,
        c: 1.0,
        g: 1.0,
        k_b: 1.0,
        e: 1.0,
    };

    pub fn validate(&self) -> Result<()> {
        positive("hbar", self.hbar)?;
        positive("c", self.c)?;
        positive("G", self.g)?;
        positive("k_B", self.k_b)?;
        positive("e", self.e)?;
        Ok(())
    }

    pub fn compton_wavelength(&self, p: &Particle, form: ComptonForm) -> Result<f64> {
        let reduced = self.hbar / (p.checked_mass()? * self.c);
        Ok(match form {
            ComptonForm::Reduced => reduced,
            ComptonForm::Full => TAU * reduced,
        })
    }

    /// Reduced Compton wavelength hbar/(m c), cm.
    pub fn reduced_compton_wavelength(&self, p: &Particle) -> Result<f64> {
        self.compton_wavelength(p, ComptonForm::Reduced)
    }

    /// Compton time (chronon) hbar/(m c^2), s.
    pub fn compton_time(&self, p: &Particle) -> Result<f64> {
        Ok(self.reduced_compton_wavelength(p)? / self.c)
    }

    /// Rest energy m c^2, erg.
    pub fn rest_energy(&self, p: &Particle) -> Result<f64> {
        Ok(p.checked_mass()? * self.c * self.c)
    }

    /// Temperature at which k_B T equals the rest energy.
    pub fn rest_temperature(&self, p: &Particle) -> Result<f64> {
        Ok(self.rest_energy(p)? / self.k_b)
    }

    /// Thermal wavelength sqrt(hbar^2 / (m k_B T)), cm.
    ///
    /// At `T = m c^2 / k_B` this is the reduced Compton wavelength. It is
    /// evaluated as `hbar / sqrt(m * k_B T)` so that substitution is exact up to
    /// a single rounding.
    pub fn thermal_wavelength(&self, p: &Particle, temperature: f64) -> Result<f64> {
        let mass = p.checked_mass()?;
        positive("temperature", temperature)?;
        Ok(self.hbar / sqrt(mass * self.k_b * temperature))
    }

    /// Spin angular momentum per unit mass and c, `a = s hbar / (M c)`, cm.
    pub fn spin_parameter(&self, p: &Particle) -> Result<f64> {
        Ok(p.spin * self.hbar / (p.checked_mass()? * self.c))
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CGS
    }
}

/// An elementary particle record.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Particle {
    pub name: String,
    /// g
    pub mass: f64,
    /// esu
    pub charge: f64,
    /// In units of hbar.
    pub spin: f64,
}

impl Particle {
    pub fn new(name: impl Into<String>, mass: f64, charge: f64, spin: f64) -> Self {
        Self {
            name: name.into(),
            mass,
            charge,
            spin,
        }
    }

    /// Charged pion, 139.57 MeV/c^2.
    pub fn pion() -> Self {
        Self::new("pion", 2.488e-25, PhysicalConstants::CGS.e, 0.0)
    }

    pub fn electron() -> Self {
        Self::new("electron", 9.109e-28, PhysicalConstants::CGS.e, 0.5)
    }

    pub fn muon() -> Self {
        Self::new("muon", 1.884e-25, PhysicalConstants::CGS.e, 0.5)
    }

    pub fn proton() -> Self {
        Self::new("proton", 1.673e-24, PhysicalConstants::CGS.e, 0.5)
    }

    /// Unit-mass, unit-charge spin-1/2 particle for natural units.
    pub fn unit() -> Self {
        Self::new("unit", 1.0, 1.0, 0.5)
    }

    pub fn checked_mass(&self) -> Result<f64> {
        positive("particle mass", self.mass)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.chars().any(|c| c.is_whitespace() || c == '.') {
            return Err(Error::InvalidSpec(alloc::format!(
                "particle name `{}` must be non-empty without whitespace or dots",
                self.name
            )));
        }
        self.checked_mass()?;
        if !self.charge.is_finite() || !self.spin.is_finite() || self.spin < 0.0 {
            return Err(Error::InvalidSpec(alloc::format!(
                "particle `{}` needs finite charge and non-negative spin",
                self.name
            )));
        }
        Ok(())
    }
}

/// The active constants plus particle table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstantsTable {
    pub version: String,
    pub physical: PhysicalConstants,
    pub particles: Vec<Particle>,
}

impl ConstantsTable {
    /// Identifier of the built-in value set.
    pub const BUILTIN_VERSION: &'static str = "codata2018-pdg2022-4sf";

    /// CGS constants with pion, electron, muon and proton.
    pub fn cgs() -> Self {
        Self {
            version: Self::BUILTIN_VERSION.to_string(),
            physical: PhysicalConstants::CGS,
            particles: vec![
                Particle::pion(),
                Particle::electron(),
                Particle::muon(),
                Particle::proton(),
            ],
        }
    }

    /// hbar = c = 1 with a single unit-mass particle named `unit`.
    pub fn natural() -> Self {
        Self {
            version: "natural".to_string(),
            physical: PhysicalConstants::NATURAL,
            particles: vec![Particle::unit()],
        }
    }

    pub fn particle(&self, name: &str) -> Result<&Particle> {
        self.particles
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownParticle(name.to_string()))
    }

    /// Insert or replace a particle by name.
    pub fn upsert(&mut self, particle: Particle) {
        match self.particles.iter_mut().find(|p| p.name == particle.name) {
            Some(slot) => *slot = particle,
            None => self.particles.push(particle),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.physical.validate()?;
        for (i, p) in self.particles.iter().enumerate() {
            p.validate()?;
            if self.particles[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::InvalidSpec(alloc::format!(
                    "duplicate particle `{}`",
                    p.name
                )));
            }
        }
        Ok(())
    }
}

impl Default for ConstantsTable {
    fn default() -> Self {
        Self::cgs()
    }
}
