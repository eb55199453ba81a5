//! Kerr-Newman horizon radii and the naked-singularity test.
//!
//! With `r_g = GM/c^2`, spin length `a` and charge length `r_q`, horizons sit
//! at `r = r_g +/- sqrt(D)` where
//!
//! ```text
//! D = r_g^2 - a^2 - r_q^2
//! ```
//!
//! For `D < 0` the radius is complex, `r_g + i b` with `b = sqrt(-D)`. The
//! standard charge length is `r_q = sqrt(G) Q / c^2`; [`ChargeTerm::Literal`]
//! instead uses `G Q / c^4`, which is not a length in Gaussian units and is
//! kept only for comparison.
//!
//! Lengths at particle scale span ~45 decades (r_g ~ 1e-55 cm against
//! a ~ 1e-11 cm), so all three are divided by the largest before squaring.

use crate::constants::{Particle, PhysicalConstants};
use crate::error::{non_negative, positive, Result};
use crate::math::{abs, sqrt};

/// Relative width of the extremal band, `|D| < EXTREMAL_TOL * max(r_g^2, a^2)`.
pub const EXTREMAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KNConfig {
    /// g
    pub mass: f64,
    /// esu
    pub charge: f64,
    /// Angular momentum per unit mass over c, cm.
    pub spin_param: f64,
}

impl KNConfig {
    /// Mass and charge of `p`, `a = s hbar / (M c)`.
    pub fn for_particle(constants: &PhysicalConstants, p: &Particle) -> Result<Self> {
        Ok(Self {
            mass: p.checked_mass()?,
            charge: p.charge,
            spin_param: constants.spin_parameter(p)?,
        })
    }

    fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        non_negative("|charge|", abs(self.charge))?;
        non_negative("|spin parameter|", abs(self.spin_param))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ChargeTerm {
    /// `G Q^2 / c^4`
    #[default]
    Standard,
    /// `G^2 Q^2 / c^8`
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum KNKind {
    BlackHole,
    Extremal,
    NakedSingularity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KNClassification {
    pub kind: KNKind,
    /// Outer horizon, or the real part `GM/c^2` of the complex radius, cm.
    pub r_plus: f64,
    /// Inner horizon, cm; absent for naked singularities.
    pub r_minus: Option<f64>,
    /// Imaginary part of the complex radius, cm; naked singularities only.
    pub b: Option<f64>,
}

/// The three lengths entering the discriminant, `(r_g, a, r_q)`.
fn lengths(k: &PhysicalConstants, cfg: &KNConfig, term: ChargeTerm) -> (f64, f64, f64) {
    let c2 = k.c * k.c;
    let rg = k.g * cfg.mass / c2;
    let rq = match term {
        ChargeTerm::Standard => sqrt(k.g) * abs(cfg.charge) / c2,
        ChargeTerm::Literal => k.g * abs(cfg.charge) / (c2 * c2),
    };
    (rg, abs(cfg.spin_param), rq)
}

/// Discriminant scaled by `s^2`: returns `(D / s^2, s)`.
fn scaled_discriminant(rg: f64, a: f64, rq: f64) -> (f64, f64) {
    let s = rg.max(a).max(rq);
    let (g, a, q) = (rg / s, a / s, rq / s);
    (g * g - a * a - q * q, s)
}

/// `D = (GM/c^2)^2 - a^2 - r_q^2`, cm^2. Positive means horizons exist.
pub fn kn_discriminant(k: &PhysicalConstants, cfg: &KNConfig, term: ChargeTerm) -> Result<f64> {
    cfg.validate()?;
    let (rg, a, rq) = lengths(k, cfg, term);
    let (d, s) = scaled_discriminant(rg, a, rq);
    Ok(d * s * s)
}

pub fn kn_classify(
    k: &PhysicalConstants,
    cfg: &KNConfig,
    term: ChargeTerm,
) -> Result<KNClassification> {
    cfg.validate()?;
    let (rg, a, rq) = lengths(k, cfg, term);
    let (d, s) = scaled_discriminant(rg, a, rq);
    let band = EXTREMAL_TOL * {
        let (g, a) = (rg / s, a / s);
        (g * g).max(a * a)
    };
    Ok(if abs(d) < band {
        KNClassification {
            kind: KNKind::Extremal,
            r_plus: rg,
            r_minus: Some(rg),
            b: None,
        }
    } else if d > 0.0 {
        let root = s * sqrt(d);
        KNClassification {
            kind: KNKind::BlackHole,
            r_plus: rg + root,
            r_minus: Some(rg - root),
            b: None,
        }
    } else {
        KNClassification {
            kind: KNKind::NakedSingularity,
            r_plus: rg,
            r_minus: None,
            b: Some(s * sqrt(-d)),
        }
    })
}

/// `b(electron) / (lambda_bar_e / 2)`: the naked-singularity imaginary
/// radius against the Zitterbewegung amplitude.
pub fn electron_kn_check(k: &PhysicalConstants) -> Result<f64> {
    particle_kn_ratio(k, &Particle::electron())
}

/// `b / (lambda_bar / 2)` for any particle; zero when horizons exist.
pub fn particle_kn_ratio(k: &PhysicalConstants, p: &Particle) -> Result<f64> {
    let cfg = KNConfig::for_particle(k, p)?;
    let class = kn_classify(k, &cfg, ChargeTerm::Standard)?;
    let half = 0.5 * k.reduced_compton_wavelength(p)?;
    Ok(class.b.unwrap_or(0.0) / half)
}
