//! TOML run configuration.
//!
//! ```toml
//! sigma0 = 1.0
//! sigma1 = 1.0
//! x0 = 0.0
//!
//! [g]
//! kind = "stribeck"
//! Fc = 1.0
//! Fs = 2.0
//! vs = 1.0
//! beta = 1.0
//!
//! [input]
//! umin1 = 0.0
//! umin2 = 0.2
//! umax1 = 1.0
//! umax2 = 1.5
//!
//! [integrator]
//! rel_tol = 1e-8
//!
//! [run]
//! gamma = 100.0
//! periods = 5
//! ```
//!
//! A `[dahl]` table (`rho`, `Fc`, `w0`) replaces the LuGre keys, and
//! `[input] builtin = "triangle"` (or `sine`, `example3`, `example4`)
//! replaces the bimodal keys.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::model::{dahl_to_lugre, DahlParams, MacroDamping, ModelParams, VelocityMap};
use crate::signal::{build_bimodal, BimodalInputSpec, NormalizedInput, PeriodicSignal};

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    LuGre(ModelParams),
    Dahl(DahlParams),
}

impl Model {
    /// LuGre parameters; a Dahl model is mapped.
    pub fn lugre(&self) -> ModelParams {
        match self {
            Model::LuGre(p) => p.clone(),
            Model::Dahl(d) => dahl_to_lugre(d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// `u(t) = t` on `[0, 1]`, `2 - t` on `[1, 2]`.
    Triangle,
    /// `sin(2 pi t)`.
    Sine,
    /// Bimodal, extrema 0, 0.2, 1, 1.5.
    Example3,
    /// Bimodal, extrema 0, 0.5, 1, 1.5.
    Example4,
}

impl Builtin {
    const IDS: [(&'static str, Builtin); 4] = [
        ("triangle", Builtin::Triangle),
        ("sine", Builtin::Sine),
        ("example3", Builtin::Example3),
        ("example4", Builtin::Example4),
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Self::IDS.iter().find(|(id, _)| *id == s).map(|(_, b)| *b).ok_or_else(|| {
            let ids: Vec<&str> = Self::IDS.iter().map(|(id, _)| *id).collect();
            Error::Config(format!("[input] unknown builtin `{s}` (valid: {})", ids.join(", ")))
        })
    }

    fn bimodal(self) -> Option<BimodalInputSpec> {
        let umin2 = match self {
            Builtin::Example3 => 0.2,
            Builtin::Example4 => 0.5,
            _ => return None,
        };
        Some(BimodalInputSpec::linear(0.0, umin2, 1.0, 1.5).expect("valid"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Bimodal(BimodalInputSpec),
    Builtin(Builtin),
}

impl InputSource {
    pub fn signal(&self) -> Result<PeriodicSignal> {
        match self {
            InputSource::Bimodal(spec) => build_bimodal(spec),
            InputSource::Builtin(b) => match b.bimodal() {
                Some(spec) => build_bimodal(&spec),
                None if *b == Builtin::Triangle => {
                    PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])
                }
                None => PeriodicSignal::sine(1.0, 1.0),
            },
        }
    }

    /// Bimodal spec, if the input is one.
    pub fn bimodal(&self) -> Option<BimodalInputSpec> {
        match self {
            InputSource::Bimodal(spec) => Some(spec.clone()),
            InputSource::Builtin(b) => b.bimodal(),
        }
    }

    pub fn normalized(&self) -> Option<NormalizedInput> {
        self.bimodal().map(|s| NormalizedInput::from_spec(&s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub gamma: Option<f64>,
    pub periods: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub model: Model,
    pub input: InputSource,
    pub integrator: IntegratorConfig,
    pub run: RunSection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    sigma0: Option<f64>,
    sigma1: Option<f64>,
    x0: Option<f64>,
    g: Option<MacroDamping>,
    #[serde(default)]
    f: Option<VelocityMap>,
    dahl: Option<DahlParams>,
    input: Option<toml::Table>,
    #[serde(default)]
    integrator: IntegratorConfig,
    #[serde(default)]
    run: RunSection,
}

impl CliConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let lugre_keys = raw.sigma0.is_some() || raw.sigma1.is_some() || raw.x0.is_some() || raw.g.is_some() || raw.f.is_some();
        let model = match (raw.dahl, lugre_keys) {
            (Some(_), true) => {
                return Err(Error::Config(
                    "give either a [dahl] table or the LuGre keys (sigma0, g, ...), not both".into(),
                ))
            }
            (Some(d), false) => Model::Dahl(d),
            (None, _) => {
                let sigma0 = raw.sigma0.ok_or_else(|| Error::Config("missing key `sigma0` (or a [dahl] table)".into()))?;
                let g = raw.g.ok_or_else(|| Error::Config("missing table [g]".into()))?;
                Model::LuGre(ModelParams::new(
                    sigma0,
                    raw.sigma1.unwrap_or(0.0),
                    g,
                    raw.f.unwrap_or_default(),
                    raw.x0.unwrap_or(0.0),
                )?)
            }
        };
        let table = raw.input.ok_or_else(|| Error::Config("missing table [input]".into()))?;
        let input = match table.get("builtin") {
            Some(v) => {
                if table.len() > 1 {
                    return Err(Error::Config("[input] `builtin` cannot be combined with other keys".into()));
                }
                let id = v
                    .as_str()
                    .ok_or_else(|| Error::Config("[input] `builtin` must be a string".into()))?;
                InputSource::Builtin(Builtin::parse(id)?)
            }
            None => InputSource::Bimodal(
                BimodalInputSpec::deserialize(toml::Value::Table(table))
                    .map_err(|e| Error::Config(format!("[input] {}", e.message())))?,
            ),
        };
        raw.integrator.validate()?;
        Ok(Self {
            model,
            input,
            integrator: raw.integrator,
            run: raw.run,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}
