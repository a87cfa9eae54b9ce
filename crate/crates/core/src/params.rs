//! Physical parameters of the two-photon micromaser model.
//!
//! The coupling constant κ is the unit of frequency, so every time argument in
//! this crate is the scaled time κt and every rate is measured in units of κ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("Kerr ratio chi/kappa must be finite and non-negative, got {0}")]
    Kerr(f64),
    #[error("coupling ratio r must be finite and strictly positive when the Stark shift is enabled, got {0}")]
    StarkRatio(f64),
    #[error("coupling ratio r must be finite and non-negative, got {0}")]
    Ratio(f64),
}

/// Dimensionless model knobs.
///
/// `r = κ₁/κ₂` is the ratio of the two virtual-transition couplings. The Stark
/// shifts of the lower and upper level are `β₁ = κ r` and `β₂ = κ / r`. With
/// `stark_enabled == false` all Stark contributions are dropped, which is how
/// the "r = 0" curves are modelled (the shifts themselves diverge as r → 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    chi_over_kappa: f64,
    r: f64,
    stark_enabled: bool,
}

impl ModelParams {
    pub fn new(chi_over_kappa: f64, r: f64, stark_enabled: bool) -> Result<Self, ParamError> {
        if !chi_over_kappa.is_finite() || chi_over_kappa < 0.0 {
            return Err(ParamError::Kerr(chi_over_kappa));
        }
        if stark_enabled {
            if !r.is_finite() || r <= 0.0 {
                return Err(ParamError::StarkRatio(r));
            }
        } else if !r.is_finite() || r < 0.0 {
            return Err(ParamError::Ratio(r));
        }
        Ok(Self {
            chi_over_kappa,
            r,
            stark_enabled,
        })
    }

    /// Kerr medium only, no level shifts.
    pub fn kerr(chi_over_kappa: f64) -> Result<Self, ParamError> {
        Self::new(chi_over_kappa, 0.0, false)
    }

    /// Kerr medium plus dynamic Stark shift with coupling ratio `r`.
    pub fn with_stark(chi_over_kappa: f64, r: f64) -> Result<Self, ParamError> {
        Self::new(chi_over_kappa, r, true)
    }

    pub fn chi(&self) -> f64 {
        self.chi_over_kappa
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn stark_enabled(&self) -> bool {
        self.stark_enabled
    }

    /// Stark shift of the ground level, β₁ = κ r (zero when disabled).
    pub fn beta_ground(&self) -> f64 {
        if self.stark_enabled {
            self.r
        } else {
            0.0
        }
    }

    /// Stark shift of the excited level, β₂ = κ / r (zero when disabled).
    pub fn beta_excited(&self) -> f64 {
        if self.stark_enabled {
            1.0 / self.r
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        assert_eq!(ModelParams::kerr(-0.1), Err(ParamError::Kerr(-0.1)));
        assert!(ModelParams::kerr(f64::NAN).is_err());
        assert_eq!(
            ModelParams::with_stark(0.0, 0.0),
            Err(ParamError::StarkRatio(0.0))
        );
        assert!(ModelParams::with_stark(0.0, f64::INFINITY).is_err());
        assert!(ModelParams::new(0.0, -1.0, false).is_err());
    }

    #[test]
    fn stark_off_allows_zero_ratio() {
        let p = ModelParams::new(0.5, 0.0, false).unwrap();
        assert_eq!(p.beta_ground(), 0.0);
        assert_eq!(p.beta_excited(), 0.0);
    }

    #[test]
    fn betas_follow_ratio() {
        let p = ModelParams::with_stark(0.0, 0.5).unwrap();
        assert_eq!(p.beta_ground(), 0.5);
        assert_eq!(p.beta_excited(), 2.0);
    }
}
