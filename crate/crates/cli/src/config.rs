use clap::ValueEnum;
use serde::Serialize;

use lame_core::belyi::EPS_BELYI;
use lame_core::sphere::{TAU_GEOM, TAU_GROUP};
use lame_core::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Text,
}

/// Settings shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub tol_geom: f64,
    pub tol_group: f64,
    pub eps_belyi: f64,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol_geom: TAU_GEOM,
            tol_group: TAU_GROUP,
            eps_belyi: EPS_BELYI,
            format: OutputFormat::Text,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in
            [("tol-geom", self.tol_geom), ("tol-group", self.tol_group), ("belyi tolerance", self.eps_belyi)]
        {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}
