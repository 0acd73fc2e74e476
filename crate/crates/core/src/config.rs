//! Run-time limits, read from a TOML file.
//!
//! ```toml
//! precision_ceiling = 4096
//! factor_budget = 100000000
//! mr_rounds = 64
//! ```

use crate::algnum::DEFAULT_PRECISION_CEILING;
use crate::bounds::CertConfig;
use crate::error::{Error, Result};
use crate::sparts::GpfOptions;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Environment variable naming a config file.
pub const CONFIG_ENV: &str = "LRS_SPARTS_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Largest working precision in bits for root isolation and floors.
    pub precision_ceiling: u64,
    /// Pollard-rho iterations per factored number.
    pub factor_budget: u64,
    pub mr_rounds: u32,
}

impl Default for Config {
    fn default() -> Self {
        let g = GpfOptions::default();
        Config { precision_ceiling: DEFAULT_PRECISION_CEILING, factor_budget: g.budget, mr_rounds: g.mr_rounds }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let c = Self::parse_unchecked(text)?;
        c.validate()?;
        Ok(c)
    }

    /// Parses without range checks, for callers that override fields first.
    pub fn parse_unchecked(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn load_unchecked(path: &Path) -> Result<Self> {
        Self::parse_unchecked(&std::fs::read_to_string(path)?)
    }

    /// The file named by `LRS_SPARTS_CONFIG`, or the defaults when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_ceiling < 64 {
            return Err(Error::Domain("precision ceiling must be at least 64 bits".into()));
        }
        if self.mr_rounds == 0 {
            return Err(Error::Domain("at least one Miller-Rabin round is required".into()));
        }
        Ok(())
    }

    pub fn gpf(&self) -> GpfOptions {
        GpfOptions { budget: self.factor_budget, mr_rounds: self.mr_rounds }
    }

    pub fn cert(&self) -> CertConfig {
        CertConfig { precision_ceiling: self.precision_ceiling, gpf: self.gpf() }
    }
}
