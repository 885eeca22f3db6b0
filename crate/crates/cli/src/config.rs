use std::path::Path;

use ifsx_core::{AttractorOptions, MapSpec};
use serde::Deserialize;

use crate::Failure;

pub const DEFAULT_TARGET: f64 = 0.02;

/// Parameters read from `--config`; any field may also come from a flag, and
/// flags win.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub maps: Vec<MapSpec>,
    pub tol: Option<f64>,
    pub resolution: Option<f64>,
    pub max_iter: Option<usize>,
    pub k_schedule: Option<Vec<usize>>,
    /// Largest final study distance `approx` accepts.
    pub target: Option<f64>,
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub depth: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }

    pub fn attractor_options(&self) -> Result<AttractorOptions, Failure> {
        let d = AttractorOptions::default();
        AttractorOptions::new(
            self.tol.unwrap_or(d.tol),
            self.max_iter.unwrap_or(d.max_iter),
            self.resolution.unwrap_or(d.resolution),
        )
        .map_err(|e| Failure::input(e.to_string()))
    }
}

/// Flags shared by the commands; `None` leaves the config value alone.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonFlags {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    pub config: Option<std::path::PathBuf>,
    #[arg(long, value_name = "R")]
    pub tol: Option<f64>,
    #[arg(long, value_name = "R")]
    pub resolution: Option<f64>,
    #[arg(long, value_name = "N")]
    pub max_iter: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
}

impl CommonFlags {
    pub fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut cfg = RunConfig::load(self.config.as_deref())?;
        if self.tol.is_some() {
            cfg.tol = self.tol;
        }
        if self.resolution.is_some() {
            cfg.resolution = self.resolution;
        }
        if self.max_iter.is_some() {
            cfg.max_iter = self.max_iter;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"tol": 1e-6, "colour": 3}"#);
        assert!(err.is_err());
    }

    #[test]
    fn maps_parse() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"maps": [{"type": "affine", "a": 0.5, "b": 0}, {"type": "logistic"}], "seed": 4}"#,
        )
        .unwrap();
        assert_eq!(cfg.maps.len(), 2);
        assert_eq!(cfg.seed, Some(4));
    }
}
