//! Run-time settings shared by the command-line tools.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dirichlet::DEFAULT_DISC_BOUND;
use crate::error::{Error, Result};
use crate::height::TOLERANCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    #[default]
    Json,
    Table,
}

impl FromStr for Output {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Output::Json),
            "table" => Ok(Output::Table),
            _ => Err(Error::Parse(format!("output must be json or table, got {s:?}"))),
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Output::Json => "json",
            Output::Table => "table",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub disc_bound: i64,
    pub tolerance: f64,
    pub n_max: u64,
    pub output: Output,
}

impl Default for Config {
    fn default() -> Self {
        Config { disc_bound: DEFAULT_DISC_BOUND, tolerance: TOLERANCE, n_max: 1_000_000, output: Output::Json }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Parse(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.disc_bound <= 0 || self.n_max == 0 {
            return Err(Error::Parse("bounds must be positive".into()));
        }
        Ok(())
    }
}
