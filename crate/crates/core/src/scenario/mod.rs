//! Scenario files, bundled presets and the run pipeline that turns them into
//! CSV time series.

mod csv;
mod run;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::SqueezeParameter;
use crate::propagator::{MemoryScheme, ModelConfig};
use crate::spectral::SpectralDensity;

pub use run::{run_scenario, sweep, Artifacts, Diagnostics, RunRecord, FORMAT_VERSION};

/// Everything needed for one run, as a flat JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: f64,
    pub eta: f64,
    pub omega_c: f64,
    pub kappa: f64,
    pub r: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub memory: MemoryScheme,
}

fn default_t_max() -> f64 {
    50.0
}

fn default_dt() -> f64 {
    1e-3
}

fn default_out() -> PathBuf {
    PathBuf::from("output")
}

fn default_stride() -> usize {
    10
}

/// Field names accepted as sweep axes.
pub const SWEEP_AXES: [&str; 7] = ["n", "eta", "omega_c", "kappa", "r", "t_max", "dt"];

impl Scenario {
    /// Figure defaults: η = 0.005, ω_c = 30, κ = 0.5, r = 3, Ohmic bath.
    pub fn figure_defaults() -> Self {
        Self {
            n: 1.0,
            eta: 0.005,
            omega_c: 30.0,
            kappa: 0.5,
            r: 3.0,
            t_max: default_t_max(),
            dt: default_dt(),
            out: default_out(),
            stride: default_stride(),
            memory: MemoryScheme::Direct,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let sc: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    pub fn spectral_density(&self) -> Result<SpectralDensity> {
        SpectralDensity::new(self.n, self.eta, self.omega_c)
    }

    pub fn model_config(&self) -> Result<ModelConfig> {
        Ok(ModelConfig::new(self.kappa, self.t_max, self.dt)?.with_memory(self.memory))
    }

    pub fn squeezing(&self) -> Result<SqueezeParameter> {
        SqueezeParameter::new(self.r)
    }

    /// Check every field; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        self.spectral_density()?;
        self.model_config()?;
        self.squeezing()?;
        if self.stride == 0 {
            return Err(invalid("stride", "sample stride must be >= 1"));
        }
        Ok(())
    }

    /// Copy with one scalar field replaced.
    pub fn with_axis(&self, axis: &str, value: f64) -> Result<Self> {
        let mut sc = self.clone();
        match axis {
            "n" => sc.n = value,
            "eta" => sc.eta = value,
            "omega_c" => sc.omega_c = value,
            "kappa" => sc.kappa = value,
            "r" => sc.r = value,
            "t_max" => sc.t_max = value,
            "dt" => sc.dt = value,
            _ => return Err(Error::UnknownAxis(axis.to_string())),
        }
        Ok(sc)
    }
}

/// A named group of scenarios reproducing one figure's dataset.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// `(label, scenario)`; each label becomes a subdirectory.
    pub runs: Vec<(String, Scenario)>,
}

pub const PRESET_NAMES: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

/// Bundled presets. Figures three and four have no stated time range; both
/// use `t_max = 50`.
pub fn preset(name: &str, out: &Path) -> Result<Preset> {
    let baths = [("ohmic", 1.0), ("super_ohmic", 3.0), ("sub_ohmic", 0.5)];
    let (description, kappa, noiseless) = match name {
        "fig1" => ("frequency shift for the three baths, kappa = 0.5", 0.5, false),
        "fig2" => ("decay rate for the three baths, kappa = 0.5", 0.5, false),
        "fig3" => ("log-negativity, uncoupled fields (kappa = 0)", 0.0, true),
        "fig4" => ("log-negativity, coupled fields (kappa = 0.5)", 0.5, true),
        _ => {
            return Err(Error::Usage(format!(
                "unknown preset `{name}` (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    let base = Scenario {
        kappa,
        ..Scenario::figure_defaults()
    };
    let mut runs: Vec<(String, Scenario)> = baths
        .iter()
        .map(|&(label, n)| {
            (
                label.to_string(),
                Scenario {
                    n,
                    out: out.join(name).join(label),
                    ..base.clone()
                },
            )
        })
        .collect();
    if noiseless {
        runs.insert(
            0,
            (
                "noiseless".to_string(),
                Scenario {
                    eta: 0.0,
                    out: out.join(name).join("noiseless"),
                    ..base.clone()
                },
            ),
        );
    }
    let preset = Preset {
        name: PRESET_NAMES.iter().find(|p| **p == name).expect("matched above"),
        description,
        runs,
    };
    Ok(preset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let sc = Scenario::from_json_str(r#"{"n": 1, "eta": 0.005, "omega_c": 30, "kappa": 0.5, "r": 3}"#).unwrap();
        assert_eq!(sc.t_max, 50.0);
        assert_eq!(sc.dt, 1e-3);
        assert_eq!(sc.stride, 10);
        assert_eq!(sc.memory, MemoryScheme::Direct);
    }

    #[test]
    fn round_trips_through_json() {
        let sc = Scenario {
            memory: MemoryScheme::ExponentialSum,
            ..Scenario::figure_defaults()
        };
        assert_eq!(Scenario::from_json_str(&sc.to_json()).unwrap(), sc);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = r#"{"n": 1, "eta": -0.1, "omega_c": 30, "kappa": 0.5, "r": 3}"#;
        match Scenario::from_json_str(bad) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "eta"),
            other => panic!("{other:?}"),
        }
        let zero_stride = Scenario {
            stride: 0,
            ..Scenario::figure_defaults()
        };
        assert!(matches!(zero_stride.validate(), Err(Error::InvalidParameter { field, .. }) if field == "stride"));
        let unknown = r#"{"n": 1, "eta": 0.1, "omega_c": 30, "kappa": 0.5, "r": 3, "tmax": 5}"#;
        assert!(matches!(Scenario::from_json_str(unknown), Err(Error::Config(msg)) if msg.contains("tmax")));
    }

    #[test]
    fn axes() {
        let sc = Scenario::figure_defaults();
        assert_eq!(sc.with_axis("omega_c", 10.0).unwrap().omega_c, 10.0);
        assert!(matches!(sc.with_axis("gamma", 1.0), Err(Error::UnknownAxis(_))));
        for axis in SWEEP_AXES {
            assert!(sc.with_axis(axis, 0.25).is_ok());
        }
    }

    #[test]
    fn presets_match_figure_setups() {
        let out = Path::new("runs");
        for name in PRESET_NAMES {
            let p = preset(name, out).unwrap();
            for (_, sc) in &p.runs {
                assert_eq!(sc.r, 3.0);
                assert_eq!(sc.omega_c, 30.0);
                sc.validate().unwrap();
            }
        }
        let fig3 = preset("fig3", out).unwrap();
        assert_eq!(fig3.runs.len(), 4);
        assert_eq!(fig3.runs[0].1.eta, 0.0);
        assert!(fig3.runs.iter().all(|(_, s)| s.kappa == 0.0));
        assert_eq!(preset("fig1", out).unwrap().runs.len(), 3);
        assert!(preset("fig9", out).is_err());
    }
}
