//! Entanglement of two atoms that cross a Kerr-medium micromaser cavity one
//! after the other, interacting through a two-photon transition with dynamic
//! Stark shifts.
//!
//! The crate has two independent routes to the reduced atom-pair state:
//!
//! * [`density::rho_eg`] / [`density::rho_ee`] assemble it from closed-form
//!   amplitudes ([`single_pass`], [`cascade`]) summed over the photon
//!   distribution of the initial field ([`field`]);
//! * [`oracle::sequential_pass`] builds the interaction Hamiltonian on a
//!   truncated Fock space, propagates numerically and traces out the field.
//!
//! [`sweep`] drives time sweeps, [`presets`] holds the figure parameter sets,
//! [`report`] writes CSV and SVG output and [`verify`] compares the two routes.

pub mod cascade;
pub mod density;
pub mod field;
pub mod oracle;
pub mod params;
pub mod presets;
pub mod report;
pub mod single_pass;
pub mod sweep;
pub mod verify;

pub use cascade::{joint_amplitudes, AmplitudeModel, AtomSequence, ClosedForm, JointAmplitudes};
pub use density::{
    concurrence_closed, concurrence_general, population_sum, rho_ee, rho_eg, Basis,
    ConcurrenceResult, DensityError, TwoQubitDensity,
};
pub use field::{FieldError, FieldKind, FieldSpec, Truncation};
pub use params::{ModelParams, ParamError};
pub use presets::{figure_ids, figure_preset, PresetError};
pub use sweep::{run_sweep, ConfigError, RunConfig, Stark, SweepResult, SweepRow};
pub use verify::{verify, verify_with, CheckOutcome, Depth, VerifyReport};
