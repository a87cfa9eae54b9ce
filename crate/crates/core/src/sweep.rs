//! Time sweeps over the closed-form pipeline.

use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cascade::{AtomSequence, ClosedForm};
use crate::density::{concurrence_closed, reduced_state, DensityError, TwoQubitDensity};
use crate::field::{FieldError, FieldSpec, Truncation, DEFAULT_TAIL_TOLERANCE};
use crate::params::{ModelParams, ParamError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid field: {0}")]
    Field(#[from] FieldError),
    #[error("invalid model parameters: {0}")]
    Params(#[from] ParamError),
    #[error("steps must be at least 2, got {0}")]
    Steps(usize),
    #[error("time range must satisfy 0 <= t_start < t_end (got t_start = {start}, t_end = {end})")]
    TimeRange { start: f64, end: f64 },
    #[error("stark must be 'on' or 'off', got '{0}'")]
    Stark(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stark {
    On,
    Off,
}

impl std::str::FromStr for Stark {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "on" => Ok(Stark::On),
            "off" => Ok(Stark::Off),
            other => Err(ConfigError::Stark(other.to_string())),
        }
    }
}

/// Everything needed to run and emit one sweep. Serializes to a flat JSON
/// object whose keys mirror the command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `fock:<m>` or `thermal:<nbar>`.
    pub field: String,
    pub atoms: AtomSequence,
    pub chi_over_kappa: f64,
    pub r: f64,
    pub stark: Stark,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub csv: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub dump_matrix: bool,
    pub tail_tolerance: f64,
    /// Free-form title used on plots.
    pub title: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            field: "fock:0".into(),
            atoms: AtomSequence::ExcitedGround,
            chi_over_kappa: 0.0,
            r: 0.0,
            stark: Stark::Off,
            t_start: 0.0,
            t_end: 10.0,
            steps: 1000,
            csv: None,
            plot: None,
            dump_matrix: false,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
            title: None,
        }
    }
}

impl RunConfig {
    pub fn field_spec(&self) -> Result<FieldSpec, ConfigError> {
        let field: FieldSpec = self.field.parse()?;
        let field = field.with_truncation(Truncation::TailMass(self.tail_tolerance));
        field.validate()?;
        Ok(field)
    }

    pub fn params(&self) -> Result<ModelParams, ConfigError> {
        Ok(ModelParams::new(
            self.chi_over_kappa,
            self.r,
            self.stark == Stark::On,
        )?)
    }

    pub fn validate(&self) -> Result<(FieldSpec, ModelParams), ConfigError> {
        let field = self.field_spec()?;
        let params = self.params()?;
        if self.steps < 2 {
            return Err(ConfigError::Steps(self.steps));
        }
        let ordered = self.t_start >= 0.0 && self.t_end > self.t_start;
        if !(ordered && self.t_end.is_finite()) {
            return Err(ConfigError::TimeRange {
                start: self.t_start,
                end: self.t_end,
            });
        }
        Ok((field, params))
    }

    /// Uniform grid from `t_start` to `t_end`, both included.
    pub fn times(&self) -> Vec<f64> {
        let span = self.t_end - self.t_start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.t_start + span * (i as f64 / last))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kappa_t: f64,
    pub concurrence: f64,
    pub pop_sum: f64,
    pub ent_formation: f64,
    /// Diagonal and anti-diagonal entries, see [`X_ENTRY_LABELS`].
    pub matrix: Option<[Complex64; 8]>,
}

/// Matrix positions dumped per row, 1-based as in `rho14`.
pub const X_ENTRY_LABELS: [(&str, usize, usize); 8] = [
    ("rho11", 0, 0),
    ("rho22", 1, 1),
    ("rho33", 2, 2),
    ("rho44", 3, 3),
    ("rho14", 0, 3),
    ("rho41", 3, 0),
    ("rho23", 1, 2),
    ("rho32", 2, 1),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub atoms: AtomSequence,
    pub rows: Vec<SweepRow>,
}

/// Reduced states on the configured time grid, in ascending time.
pub fn sweep_states(cfg: &RunConfig) -> Result<Vec<(f64, TwoQubitDensity)>, ConfigError> {
    let (field, params) = cfg.validate()?;
    let weights = field.weights()?;
    Ok(cfg
        .times()
        .into_par_iter()
        .map(|t| {
            (
                t,
                reduced_state(&ClosedForm, cfg.atoms, &weights, t, &params),
            )
        })
        .collect())
}

pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult, ConfigError> {
    let states = sweep_states(cfg)?;
    let rows = states
        .par_iter()
        .map(|(t, rho)| row_for(*t, rho, cfg.dump_matrix))
        .collect::<Result<Vec<_>, DensityError>>()
        .expect("closed-form states are X-shaped by construction");
    Ok(SweepResult {
        atoms: cfg.atoms,
        rows,
    })
}

fn row_for(t: f64, rho: &TwoQubitDensity, dump: bool) -> Result<SweepRow, DensityError> {
    let c = concurrence_closed(rho)?;
    let matrix = dump.then(|| X_ENTRY_LABELS.map(|(_, i, j)| rho.get(i, j)));
    Ok(SweepRow {
        kappa_t: t,
        concurrence: c.concurrence,
        pop_sum: c.population_sum,
        ent_formation: c.entanglement_of_formation,
        matrix,
    })
}

impl SweepResult {
    pub fn max_concurrence(&self) -> f64 {
        self.rows.iter().map(|r| r.concurrence).fold(0.0, f64::max)
    }

    pub fn max_pop_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.pop_sum).fold(0.0, f64::max)
    }
}
