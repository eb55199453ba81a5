//! Plain-text `key = value` constants file.
//!
//! ```text
//! # lines starting with '#' are comments
//! version = my-sensitivity-run
//! hbar = 1.055e-27
//! c = 2.998e10
//! G = 6.674e-8
//! k_B = 1.381e-16
//! e = 4.803e-10
//! particle.pion.mass = 2.488e-25
//! particle.pion.charge = 4.803e-10
//! particle.pion.spin = 0
//! ```
//!
//! Every key is optional and overrides the built-in CGS table. A particle
//! not in the table must at least give its mass; charge and spin default
//! to zero. Numbers are written in shortest round-trip form, so
//! [`write_table`] followed by [`parse_table`] reproduces every value bit
//! for bit.

use std::fmt::Write as _;
use std::path::Path;

use comptonlab_core::{ConstantsTable, Particle};

/// Environment variable naming a constants file to load.
pub const CONSTANTS_ENV: &str = "COMPTONLAB_CONSTANTS";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Invalid(#[from] comptonlab_core::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Syntax {
        line,
        msg: msg.into(),
    }
}

#[derive(Default)]
struct ParticleOverride {
    mass: Option<f64>,
    charge: Option<f64>,
    spin: Option<f64>,
    line: usize,
}

/// Apply the overrides in `text` on top of the built-in CGS table.
pub fn parse_table(text: &str) -> Result<ConstantsTable, ConfigError> {
    let mut table = ConstantsTable::cgs();
    let mut overrides: Vec<(String, ParticleOverride)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "version" {
            if value.is_empty() {
                return Err(syntax(line, "empty version"));
            }
            table.version = value.to_string();
            continue;
        }
        let number: f64 = value
            .parse()
            .map_err(|_| syntax(line, format!("`{value}` is not a number")))?;
        let phys = &mut table.physical;
        match key {
            "hbar" => phys.hbar = number,
            "c" => phys.c = number,
            "G" => phys.g = number,
            "k_B" => phys.k_b = number,
            "e" => phys.e = number,
            _ => {
                let rest = key
                    .strip_prefix("particle.")
                    .ok_or_else(|| syntax(line, format!("unknown key `{key}`")))?;
                let (name, field) = rest.rsplit_once('.').ok_or_else(|| {
                    syntax(
                        line,
                        format!("expected particle.<name>.<field>, got `{key}`"),
                    )
                })?;
                let slot = match overrides.iter_mut().position(|(n, _)| n == name) {
                    Some(i) => &mut overrides[i].1,
                    None => {
                        overrides.push((
                            name.to_string(),
                            ParticleOverride {
                                line,
                                ..Default::default()
                            },
                        ));
                        &mut overrides.last_mut().unwrap().1
                    }
                };
                match field {
                    "mass" => slot.mass = Some(number),
                    "charge" => slot.charge = Some(number),
                    "spin" => slot.spin = Some(number),
                    _ => return Err(syntax(line, format!("unknown particle field `{field}`"))),
                }
            }
        }
    }
    for (name, o) in overrides {
        let mut p = match table.particle(&name) {
            Ok(p) => p.clone(),
            Err(_) => Particle::new(
                name.clone(),
                o.mass
                    .ok_or_else(|| syntax(o.line, format!("new particle `{name}` needs a mass")))?,
                0.0,
                0.0,
            ),
        };
        p.mass = o.mass.unwrap_or(p.mass);
        p.charge = o.charge.unwrap_or(p.charge);
        p.spin = o.spin.unwrap_or(p.spin);
        table.upsert(p);
    }
    table.validate()?;
    Ok(table)
}

/// Shortest decimal that parses back to exactly `x`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_string()
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Serialize the complete table.
pub fn write_table(table: &ConstantsTable) -> String {
    let mut out = String::from("# comptonlab constants (CGS-Gaussian)\n");
    let k = &table.physical;
    let _ = writeln!(out, "version = {}", table.version);
    for (key, v) in [
        ("hbar", k.hbar),
        ("c", k.c),
        ("G", k.g),
        ("k_B", k.k_b),
        ("e", k.e),
    ] {
        let _ = writeln!(out, "{key} = {}", format_number(v));
    }
    for p in &table.particles {
        let _ = writeln!(out, "particle.{}.mass = {}", p.name, format_number(p.mass));
        let _ = writeln!(
            out,
            "particle.{}.charge = {}",
            p.name,
            format_number(p.charge)
        );
        let _ = writeln!(out, "particle.{}.spin = {}", p.name, format_number(p.spin));
    }
    out
}

pub fn load_table(path: &Path) -> Result<ConstantsTable, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_table(&text)
}

/// Table from an explicit path, else from `$COMPTONLAB_CONSTANTS`, else built-in.
pub fn resolve_table(path: Option<&Path>) -> Result<ConstantsTable, ConfigError> {
    match path {
        Some(p) => load_table(p),
        None => match std::env::var_os(CONSTANTS_ENV) {
            Some(p) if !p.is_empty() => load_table(Path::new(&p)),
            _ => Ok(ConstantsTable::cgs()),
        },
    }
}
