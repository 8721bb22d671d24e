//! Run configuration: a TOML file overlaid by command-line flags.
//!
//! Every key is optional; commands fill in their own defaults and the fully
//! resolved configuration is echoed into the run manifest.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::io;
use crate::solver::SeedProfile;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub d: Option<usize>,
    pub p: Option<f64>,
    /// Velocity components, a single speed along the first axis, or the
    /// list of sweep speeds.
    pub v: Option<Vec<f64>>,
    pub n: Option<usize>,
    #[serde(rename = "L")]
    pub half_extent: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub dt: Option<f64>,
    #[serde(rename = "T")]
    pub final_time: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed_profile: Option<String>,
    /// Solve the energy-critical problem instead.
    pub critical: Option<bool>,
    /// Field file to start from (evolve) or to check.
    pub input: Option<PathBuf>,
    pub radii: Option<Vec<f64>>,
    pub record_every: Option<f64>,
    /// Residual gate for sweep rows.
    pub gate: Option<f64>,
    /// Sweep grid spacing as a multiple of `1 - |v|`.
    pub spacing: Option<f64>,
    pub max_n: Option<usize>,
    /// `false` runs the free (linear) evolution.
    pub nonlinear: Option<bool>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain data always serializes")
    }

    /// Keys set in `other` replace those in `self`.
    pub fn overlay(self, other: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: other.$f.or(self.$f)),* } };
        }
        pick!(
            d, p, v, n, half_extent, tol, max_iters, dt, final_time, out_dir, jobs, seed_profile, critical, input,
            radii, record_every, gate, spacing, max_n, nonlinear
        )
    }
}

/// Seed profile named on the command line or in a config file:
/// `gaussian`, `q0`, `random:<u64>` or `file:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSpec {
    Gaussian,
    ExplicitQ0,
    Random(u64),
    File(PathBuf),
}

impl FromStr for SeedSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "q0" | "explicit-q0" => Ok(Self::ExplicitQ0),
            _ => {
                if let Some(seed) = s.strip_prefix("random:") {
                    seed.parse().map(Self::Random).map_err(|_| Error::Config(format!("bad random seed in '{s}'")))
                } else if let Some(path) = s.strip_prefix("file:") {
                    Ok(Self::File(PathBuf::from(path)))
                } else {
                    Err(Error::Config(format!(
                        "unknown seed profile '{s}' (expected gaussian, q0, random:<n> or file:<path>)"
                    )))
                }
            }
        }
    }
}

impl SeedSpec {
    pub fn load(&self) -> Result<SeedProfile> {
        Ok(match self {
            Self::Gaussian => SeedProfile::Gaussian,
            Self::ExplicitQ0 => SeedProfile::ExplicitQ0,
            Self::Random(s) => SeedProfile::Random(*s),
            Self::File(path) => {
                let f: Field = io::read_field(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                SeedProfile::Provided(f)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overlays() {
        let file = RunConfig::from_toml("d = 1\np = 3.0\nv = [0.5]\nL = 50.0\nT = 5.0\n").unwrap();
        assert_eq!(file.half_extent, Some(50.0));
        assert_eq!(file.final_time, Some(5.0));
        let flags = RunConfig { p: Some(2.0), n: Some(1024), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!(merged.p, Some(2.0));
        assert_eq!(merged.n, Some(1024));
        assert_eq!(merged.v, Some(vec![0.5]));
        assert_eq!(RunConfig::from_toml(&merged.to_toml()).unwrap(), merged);
    }

    #[test]
    fn rejects_unknown_keys_and_types() {
        assert!(RunConfig::from_toml("speed = 0.5").is_err());
        assert!(RunConfig::from_toml("d = \"one\"").is_err());
        assert!(RunConfig::from_toml("d = 1\nd = 2").is_err());
    }

    #[test]
    fn seed_specs() {
        assert_eq!("gaussian".parse::<SeedSpec>().unwrap(), SeedSpec::Gaussian);
        assert_eq!("random:42".parse::<SeedSpec>().unwrap(), SeedSpec::Random(42));
        assert_eq!("file:a.hwf".parse::<SeedSpec>().unwrap(), SeedSpec::File("a.hwf".into()));
        assert!("random:x".parse::<SeedSpec>().is_err());
        assert!("sech".parse::<SeedSpec>().is_err());
    }
}
