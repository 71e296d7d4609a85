//! Case-study configurations: the seven built-in parameter sets and a TOML
//! loader for custom ones.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::degradation::GammaProcessParams;
use crate::env::{CostParams, MaintenanceEnv, RepairSpread};
use crate::error::{Error, Result};

pub const DEFAULT_CASE: u8 = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub id: String,
    pub label: String,
    pub beta: f64,
    pub c_p: f64,
    #[serde(default = "default_c_r")]
    pub c_r: f64,
    pub c_down: f64,
    pub failure_threshold: f64,
    pub delta_t: f64,
    #[serde(default = "default_v_coeff")]
    pub v_coeff: f64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub repair_spread: RepairSpread,
}

fn default_c_r() -> f64 {
    3500.0
}
fn default_v_coeff() -> f64 {
    0.0115
}
fn default_horizon() -> usize {
    1000
}
fn default_iterations() -> usize {
    200
}

impl CaseConfig {
    /// Built-in case `1..=7`; case 2 is the baseline.
    pub fn builtin(id: u8) -> Result<Self> {
        let (label, beta, c_p, c_down, l, dt) = match id {
            1 => ("Reduced repair costs", 4.63, 300.0, 2000.0, 8.0, 100.0),
            2 => ("Baseline", 4.63, 600.0, 2000.0, 8.0, 100.0),
            3 => ("Increased repair costs", 4.63, 1500.0, 2000.0, 8.0, 100.0),
            4 => ("Increased failure limit", 4.63, 600.0, 2000.0, 12.0, 100.0),
            5 => ("Reduced downtimes cost", 4.63, 600.0, 500.0, 8.0, 100.0),
            6 => ("Slower degradation", 6.5, 600.0, 2000.0, 8.0, 100.0),
            7 => ("Longer inspection period", 4.63, 600.0, 2000.0, 8.0, 150.0),
            _ => return Err(Error::Validation(format!("no built-in case {id}; expected 1..=7"))),
        };
        Ok(Self {
            id: id.to_string(),
            label: label.to_string(),
            beta,
            c_p,
            c_r: default_c_r(),
            c_down,
            failure_threshold: l,
            delta_t: dt,
            v_coeff: default_v_coeff(),
            horizon: default_horizon(),
            iterations: default_iterations(),
            seed: 0,
            repair_spread: RepairSpread::Sum,
        })
    }

    pub fn all_builtin() -> Vec<Self> {
        (1..=7).map(|i| Self::builtin(i).unwrap()).collect()
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let case: CaseConfig = toml::from_str(text)
            .map_err(|e| Error::Parse { path: origin.to_path_buf(), message: e.to_string() })?;
        case.validate()?;
        Ok(case)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("case serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("beta", self.beta),
            ("c_r", self.c_r),
            ("failure_threshold", self.failure_threshold),
            ("delta_t", self.delta_t),
            ("v_coeff", self.v_coeff),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Validation(format!("case {}: {name} must be positive, got {v}", self.id)));
            }
        }
        for (name, v) in [("c_p", self.c_p), ("c_down", self.c_down)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Validation(format!("case {}: {name} must be non-negative, got {v}", self.id)));
            }
        }
        if self.horizon == 0 {
            return Err(Error::Validation(format!("case {}: horizon must be positive", self.id)));
        }
        if self.iterations == 0 {
            return Err(Error::Validation(format!("case {}: iterations must be positive", self.id)));
        }
        Ok(())
    }

    pub fn process(&self) -> GammaProcessParams {
        GammaProcessParams { v_coeff: self.v_coeff, beta: self.beta, delta_t: self.delta_t }
    }

    pub fn costs(&self) -> CostParams {
        CostParams { c_p: self.c_p, c_r: self.c_r, c_down: self.c_down, failure_threshold: self.failure_threshold }
    }

    pub fn env(&self) -> Result<MaintenanceEnv> {
        self.validate()?;
        MaintenanceEnv::new(self.process(), self.costs(), self.repair_spread)
    }

    /// FNV-1a over the model-relevant fields, as 16 hex digits.
    pub fn config_hash(&self) -> String {
        let key = format!(
            "{}|{}|{}|{}|{}|{}|{}|{}|{:?}",
            self.beta,
            self.c_p,
            self.c_r,
            self.c_down,
            self.failure_threshold,
            self.delta_t,
            self.v_coeff,
            self.horizon,
            self.repair_spread
        );
        format!("{:016x}", fnv1a(key.as_bytes()))
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A built-in id (`1`–`7`, `2*` accepted) or a path to a TOML case file.
pub fn load_case(spec: &str) -> Result<CaseConfig> {
    let trimmed = spec.trim().trim_end_matches('*');
    if let Ok(id) = trimmed.parse::<u8>() {
        return CaseConfig::builtin(id);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingArtifact {
            path: path.to_path_buf(),
            hint: "expected a built-in case id 1-7 or an existing case file".into(),
        },
        _ => Error::io(path, e),
    })?;
    CaseConfig::from_toml_str(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_rows() {
        let c2 = CaseConfig::builtin(2).unwrap();
        assert_eq!((c2.beta, c2.c_p, c2.c_down, c2.failure_threshold, c2.delta_t, c2.c_r), (4.63, 600.0, 2000.0, 8.0, 100.0, 3500.0));
        assert_eq!(CaseConfig::builtin(6).unwrap().beta, 6.5);
        assert_eq!(CaseConfig::builtin(7).unwrap().delta_t, 150.0);
        assert!(CaseConfig::builtin(0).is_err());
        assert!(CaseConfig::builtin(8).is_err());
        assert_eq!(load_case("2*").unwrap(), c2);
    }

    #[test]
    fn toml_round_trip() {
        let c = CaseConfig::builtin(4).unwrap();
        let back = CaseConfig::from_toml_str(&c.to_toml_string(), Path::new("x.toml")).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn minimal_file_uses_defaults() {
        let text = "id = \"custom\"\nlabel = \"x\"\nbeta = 5.0\nc_p = 500\nc_down = 1000\nfailure_threshold = 10\ndelta_t = 100\n";
        let c = CaseConfig::from_toml_str(text, Path::new("c.toml")).unwrap();
        assert_eq!(c.c_r, 3500.0);
        assert_eq!(c.v_coeff, 0.0115);
        assert_eq!(c.horizon, 1000);
    }

    #[test]
    fn parse_errors_name_the_location() {
        let text = "id = \"c\"\nlabel = \"x\"\nbeta = \"fast\"\n";
        let err = CaseConfig::from_toml_str(text, Path::new("bad.toml")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.toml"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("beta"), "{msg}");
    }

    #[test]
    fn validation_errors() {
        let text = "id = \"c\"\nlabel = \"x\"\nbeta = -1.0\nc_p = 500\nc_down = 1000\nfailure_threshold = 10\ndelta_t = 100\n";
        let err = CaseConfig::from_toml_str(text, Path::new("c.toml")).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn hash_tracks_parameters() {
        let a = CaseConfig::builtin(2).unwrap();
        let mut b = a.clone();
        assert_eq!(a.config_hash(), b.config_hash());
        b.c_p = 601.0;
        assert_ne!(a.config_hash(), b.config_hash());
    }
}
