//! Configuration: JSON schemas for potentials and regions, file/flag merging
//! and the default precision.

use std::path::Path;

use landau_core::capacity::Region;
use landau_core::fock::{Grid2D, PotentialSpec, Profile, RadialStep, SmoothRadial, WProfile};
use landau_core::num::check_precision;
use landau_core::symbol::appendix_bump;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const PRECISION_ENV: &str = "LANDAU_PRECISION_BITS";
pub const DEFAULT_BITS: u32 = 128;

/// Precision from the flag, then the environment, then the default.
pub fn resolve_bits(flag: Option<u32>) -> Result<u32, CliError> {
    let bits = match flag {
        Some(b) => b,
        None => match std::env::var(PRECISION_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{PRECISION_ENV}={s} is not an integer")))?,
            Err(_) => DEFAULT_BITS,
        },
    };
    Ok(check_precision(bits)?)
}

/// Parses a JSON literal, or reads it from a file when prefixed with '@'.
pub fn parse_json(s: &str) -> Result<Value, String> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| format!("invalid JSON: {e}"))
}

pub fn read_config_file(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if !v.is_object() {
        return Err(CliError::Config("config file must hold a JSON object".into()));
    }
    Ok(v)
}

/// Overlays the flags that were given onto the file values.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, file: Option<&Value>) -> Result<T, CliError> {
    let mut base = file.cloned().unwrap_or_else(|| Value::Object(Default::default()));
    let over = serde_json::to_value(flags).map_err(|e| CliError::Config(e.to_string()))?;
    if let (Value::Object(b), Value::Object(o)) = (&mut base, over) {
        for (k, v) in o {
            if !v.is_null() {
                b.insert(k, v);
            }
        }
    }
    serde_json::from_value(base).map_err(|e| CliError::Config(format!("config: {e}")))
}

fn one() -> f64 {
    1.0
}

/// Scalar profile schema `{kind, ...}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    #[default]
    Zero,
    /// value·χ_{|x| ≤ r}.
    Disk {
        #[serde(alias = "r")]
        radius: f64,
        #[serde(default = "one")]
        value: f64,
    },
    /// Annuli [r_lo, r_hi) with constant values.
    Step { pieces: Vec<(f64, f64, f64)> },
    /// amplitude·(1 − (r/radius)²)^power on the disk.
    PolyBump { amplitude: f64, radius: f64, power: u32 },
    /// amplitude·g(δ r); δ defaults to the automatically certified scaling.
    AppendixBump {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        delta: Option<f64>,
    },
    Grid { x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize, values: Vec<f64> },
}

impl ProfileConfig {
    pub fn build(&self) -> Result<Profile, CliError> {
        Ok(match self {
            ProfileConfig::Zero => Profile::zero(),
            ProfileConfig::Disk { radius, value } => Profile::Step(RadialStep::disk(*radius, *value)?),
            ProfileConfig::Step { pieces } => Profile::Step(RadialStep::new(pieces.clone())?),
            ProfileConfig::PolyBump { amplitude, radius, power } => {
                Profile::Smooth(SmoothRadial::poly_bump(*amplitude, *radius, *power)?)
            }
            ProfileConfig::AppendixBump { amplitude, delta } => {
                let (g, _) = appendix_bump(*delta, 16)?;
                Profile::Smooth(g.scaled(*amplitude))
            }
            ProfileConfig::Grid { x0, y0, dx, dy, nx, ny, values } => {
                Profile::Grid(Grid2D::new(*x0, *y0, *dx, *dy, *nx, *ny, values.clone())?)
            }
        })
    }

    pub fn smooth(&self) -> Result<SmoothRadial, CliError> {
        match self.build()? {
            Profile::Smooth(s) => Ok(s),
            Profile::Step(s) => Ok(SmoothRadial::from_step(&s)),
            Profile::Grid(_) => Err(CliError::Config("a radial profile is required here".into())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WConfig {
    /// W = −i h(r) z.
    RadialGauge { h: ProfileConfig },
    Affine { c: [f64; 2], grad: [[f64; 2]; 2] },
}

/// Potential schema `{v1, v2, w}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    #[serde(default)]
    pub v1: ProfileConfig,
    #[serde(default)]
    pub v2: ProfileConfig,
    #[serde(default)]
    pub w: Option<WConfig>,
}

impl PotentialConfig {
    pub fn disk(r: f64) -> Self {
        PotentialConfig { v1: ProfileConfig::Disk { radius: r, value: 1.0 }, ..Default::default() }
    }

    pub fn from_value(v: &Value) -> Result<Self, CliError> {
        serde_json::from_value(v.clone()).map_err(|e| CliError::Config(format!("potential: {e}")))
    }

    pub fn build(&self) -> Result<PotentialSpec, CliError> {
        let w = match &self.w {
            None => None,
            Some(WConfig::RadialGauge { h }) => Some(WProfile::RadialGauge { h: h.smooth()? }),
            Some(WConfig::Affine { c, grad }) => Some(WProfile::Affine { c: *c, grad: *grad }),
        };
        Ok(PotentialSpec { v1: self.v1.build()?, v2: self.v2.build()?, w })
    }
}

pub fn region_from_value(v: &Value) -> Result<Region, CliError> {
    let r: Region = serde_json::from_value(v.clone()).map_err(|e| CliError::Config(format!("region: {e}")))?;
    r.validate()?;
    Ok(r)
}
