//! Named parameter sets, one per figure panel.

use thiserror::Error;

use crate::cascade::AtomSequence;
use crate::sweep::{RunConfig, Stark};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown figure id '{0}'; run list-figures for the available ids")]
pub struct PresetError(pub String);

#[derive(Debug, Clone, Copy)]
struct Panel {
    id: &'static str,
    field: &'static str,
    atoms: AtomSequence,
    chi: f64,
    /// `None` drops the Stark terms.
    r: Option<f64>,
}

const fn panel(
    id: &'static str,
    field: &'static str,
    atoms: AtomSequence,
    chi: f64,
    r: Option<f64>,
) -> Panel {
    Panel {
        id,
        field,
        atoms,
        chi,
        r,
    }
}

use AtomSequence::{ExcitedExcited as EE, ExcitedGround as EG};

const F0: &str = "fock:0";
const F2: &str = "fock:2";
const T05: &str = "thermal:0.5";
const T2: &str = "thermal:2";

#[rustfmt::skip]
const PANELS: [Panel; 43] = [
    panel("1a", F0, EG, 0.0, None),
    panel("1b", F0, EG, 0.2, None),
    panel("1c", F0, EG, 1.0, None),
    panel("1d", F0, EG, 2.0, None),
    panel("2a", F0, EG, 0.0, Some(0.001)),
    panel("2b", F0, EG, 1.0, Some(0.001)),
    panel("3a", F2, EG, 0.0, None),
    panel("3b", F2, EG, 0.5, None),
    panel("4a", F2, EG, 0.0, Some(0.001)),
    panel("4b", F2, EG, 0.0, Some(0.5)),
    panel("4c", F2, EG, 2.0, Some(0.1)),
    panel("5a", F0, EE, 0.0, None),
    panel("5b", F0, EE, 1.0, None),
    panel("6a", F0, EE, 0.0, Some(0.001)),
    panel("6b", F0, EE, 0.0, Some(0.2)),
    panel("6c", F0, EE, 1.0, Some(0.001)),
    panel("7a", F2, EE, 0.0, None),
    panel("7b", F2, EE, 0.5, None),
    panel("8a", F2, EE, 0.0, Some(0.5)),
    panel("8b", F2, EE, 0.0, Some(2.0)),
    panel("8c", F2, EE, 0.1, Some(2.0)),
    panel("9a", T05, EG, 0.0, None),
    panel("9b", T05, EG, 0.5, None),
    panel("10a", T05, EG, 0.0, Some(0.01)),
    panel("10b", T05, EG, 0.0, Some(0.1)),
    panel("10c", T05, EG, 0.5, Some(0.3)),
    panel("11a", T2, EG, 0.0, None),
    panel("11b", T2, EG, 0.5, None),
    panel("12a", T2, EG, 0.0, Some(0.01)),
    panel("12b", T2, EG, 0.0, Some(0.1)),
    panel("12c", T2, EG, 0.5, Some(0.3)),
    panel("13a", T05, EE, 0.0, None),
    panel("13b", T05, EE, 0.5, None),
    panel("14a", T05, EE, 0.0, Some(0.01)),
    panel("14b", T05, EE, 0.0, Some(0.3)),
    panel("14c", T05, EE, 1.0, Some(0.01)),
    panel("14d", T05, EE, 0.5, Some(0.3)),
    panel("15a", T2, EE, 0.0, None),
    panel("15b", T2, EE, 0.5, None),
    panel("16a", T2, EE, 0.0, Some(0.01)),
    panel("16b", T2, EE, 0.0, Some(0.3)),
    panel("16c", T2, EE, 1.0, Some(0.01)),
    panel("16d", T2, EE, 0.5, Some(0.3)),
];

/// All preset ids in figure order.
pub fn figure_ids() -> impl Iterator<Item = &'static str> {
    PANELS.iter().map(|p| p.id)
}

/// Sweep configuration for one figure panel over the default time grid.
pub fn figure_preset(id: &str) -> Result<RunConfig, PresetError> {
    let key = id.trim().to_ascii_lowercase();
    let panel = PANELS
        .iter()
        .find(|p| p.id == key)
        .ok_or_else(|| PresetError(id.to_string()))?;
    let (r, stark) = match panel.r {
        Some(r) => (r, Stark::On),
        None => (0.0, Stark::Off),
    };
    let stark_label = match panel.r {
        Some(r) => format!("r={r}"),
        None => "no Stark shift".to_string(),
    };
    Ok(RunConfig {
        field: panel.field.to_string(),
        atoms: panel.atoms,
        chi_over_kappa: panel.chi,
        r,
        stark,
        title: Some(format!(
            "Figure {}: {}, {}, χ/κ={}, {}",
            panel.id,
            panel.field,
            panel.atoms.label(),
            panel.chi,
            stark_label
        )),
        ..RunConfig::default()
    })
}

/// One-line description per preset, for listings.
pub fn describe(id: &str) -> Result<String, PresetError> {
    let cfg = figure_preset(id)?;
    Ok(format!("{:<4} {}", id, cfg.title.unwrap_or_default()))
}
