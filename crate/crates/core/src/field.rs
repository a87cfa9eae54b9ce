//! Initial cavity field: photon-number distributions and their truncation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("thermal mean photon number must be finite and non-negative, got {0}")]
    ThermalMean(f64),
    #[error("tail tolerance must lie in (0, 1), got {0}")]
    TailTolerance(f64),
    #[error("cannot parse field '{0}': expected fock:<m> or thermal:<nbar>")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FieldKind {
    Fock(usize),
    Thermal(f64),
}

/// How infinite photon sums are cut off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    /// Keep the smallest prefix whose discarded tail mass is below the value.
    TailMass(f64),
    /// Keep photon numbers `0..=n_max` (Fock fields ignore this).
    Explicit(usize),
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::TailMass(DEFAULT_TAIL_TOLERANCE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub truncation: Truncation,
}

impl FieldSpec {
    pub fn fock(m: usize) -> Self {
        Self {
            kind: FieldKind::Fock(m),
            truncation: Truncation::default(),
        }
    }

    pub fn thermal(nbar: f64) -> Result<Self, FieldError> {
        let spec = Self {
            kind: FieldKind::Thermal(nbar),
            truncation: Truncation::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if let FieldKind::Thermal(nbar) = self.kind {
            if !nbar.is_finite() || nbar < 0.0 {
                return Err(FieldError::ThermalMean(nbar));
            }
        }
        if let Truncation::TailMass(eps) = self.truncation {
            check_tail(eps)?;
        }
        Ok(())
    }

    /// Highest photon number carried by [`FieldSpec::weights`].
    pub fn top_photon(&self) -> Result<usize, FieldError> {
        self.validate()?;
        Ok(match (self.kind, self.truncation) {
            (FieldKind::Fock(m), _) => m,
            (FieldKind::Thermal(_), Truncation::Explicit(n_max)) => n_max,
            (kind, Truncation::TailMass(eps)) => truncation_for(kind, eps)?,
        })
    }

    /// Photon-number distribution `(n, p(n))` after truncation, in ascending `n`.
    pub fn weights(&self) -> Result<Vec<(usize, f64)>, FieldError> {
        let top = self.top_photon()?;
        Ok(match self.kind {
            FieldKind::Fock(m) => vec![(m, 1.0)],
            FieldKind::Thermal(nbar) => (0..=top).map(|n| (n, thermal_weight(nbar, n))).collect(),
        })
    }

    pub fn label(&self) -> String {
        match self.kind {
            FieldKind::Fock(m) => format!("fock:{m}"),
            FieldKind::Thermal(nbar) => format!("thermal:{nbar}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Parse(s.to_string());
        let (kind, value) = s.trim().split_once(':').ok_or_else(bad)?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "fock" => value
                .trim()
                .parse::<usize>()
                .map(FieldSpec::fock)
                .map_err(|_| bad()),
            "thermal" => {
                let nbar = value.trim().parse::<f64>().map_err(|_| bad())?;
                FieldSpec::thermal(nbar)
            }
            _ => Err(bad()),
        }
    }
}

/// Bose-Einstein weight `n̄ⁿ / (1 + n̄)ⁿ⁺¹`.
pub fn thermal_weight(nbar: f64, n: usize) -> f64 {
    if nbar == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ratio = nbar / (1.0 + nbar);
    ratio.powi(n as i32) / (1.0 + nbar)
}

fn check_tail(eps: f64) -> Result<(), FieldError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(FieldError::TailTolerance(eps));
    }
    Ok(())
}

/// Smallest `N` such that the mass above `N` is below `eps`.
///
/// The thermal tail above `N` is `(n̄/(1+n̄))^{N+1}`, so `N` follows in closed
/// form; the result is nudged by one if rounding lands on the boundary.
pub fn truncation_for(kind: FieldKind, eps: f64) -> Result<usize, FieldError> {
    check_tail(eps)?;
    match kind {
        FieldKind::Fock(m) => Ok(m),
        FieldKind::Thermal(nbar) => {
            if !nbar.is_finite() || nbar < 0.0 {
                return Err(FieldError::ThermalMean(nbar));
            }
            if nbar == 0.0 {
                return Ok(0);
            }
            let ratio = nbar / (1.0 + nbar);
            let tail = |n: usize| ratio.powi(n as i32 + 1);
            let mut n = (eps.ln() / ratio.ln()).floor().max(0.0) as usize;
            while tail(n) >= eps {
                n += 1;
            }
            while n > 0 && tail(n - 1) < eps {
                n -= 1;
            }
            Ok(n)
        }
    }
}
