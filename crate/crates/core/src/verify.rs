//! Cross-checks of the closed-form pipeline against the numerical oracle.
//!
//! The grid covers both preparations, Fock and thermal fields, several Kerr
//! strengths and Stark settings. Each grid point is one (preparation, field,
//! parameters, time) tuple; oracles are built once per (field, parameters).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cascade::{AmplitudeModel, AtomSequence, ClosedForm};
use crate::density::{concurrence_closed, concurrence_general, reduced_state, TwoQubitDensity};
use crate::field::{FieldSpec, Truncation};
use crate::oracle::{Oracle, TruncatedHilbert};
use crate::params::ModelParams;

pub const RHO_TOL: f64 = 1e-8;
pub const CONCURRENCE_TOL: f64 = 1e-8;
pub const CLOSED_GENERAL_TOL: f64 = 1e-10;
pub const SANITY_TOL: f64 = 1e-10;
pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const CUTOFF_TOL: f64 = 1e-9;

/// Extra photon numbers added for the cutoff-robustness comparison.
pub const CUTOFF_STEP: usize = 4;

const QUICK_STRIDE: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Depth {
    Quick,
    Full,
}

impl std::str::FromStr for Depth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quick" => Ok(Depth::Quick),
            "full" => Ok(Depth::Full),
            other => Err(format!(
                "unknown depth '{other}', expected 'quick' or 'full'"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    /// Operation whose output the check measures.
    pub operation: String,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &str, operation: &str, worst: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            operation: operation.to_string(),
            worst,
            tolerance,
            // NaN must fail
            passed: worst <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub depth: Depth,
    pub points: usize,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// One set of model parameters on one field; both preparations are run on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCase {
    pub field: FieldSpec,
    pub params: ModelParams,
    pub times: [f64; 2],
}

pub const GRID_FOCK: [usize; 4] = [0, 1, 2, 5];
pub const GRID_THERMAL: [f64; 2] = [0.5, 2.0];
pub const GRID_CHI: [f64; 5] = [0.0, 0.2, 0.5, 1.0, 2.0];
/// `None` is the Stark-free model.
pub const GRID_STARK: [Option<f64>; 6] = [
    None,
    Some(0.001),
    Some(0.1),
    Some(0.5),
    Some(1.0),
    Some(2.0),
];

/// Parameter grid for the given depth. Each case contributes two grid points
/// (one per preparation); times are spread deterministically over `[0, 10]`.
pub fn grid(depth: Depth) -> Vec<GridCase> {
    let fields = GRID_FOCK.iter().map(|&m| FieldSpec::fock(m)).chain(
        GRID_THERMAL
            .iter()
            .map(|&nbar| FieldSpec::thermal(nbar).expect("valid mean")),
    );
    let mut cases = Vec::new();
    for field in fields {
        for &chi in &GRID_CHI {
            for &stark in &GRID_STARK {
                let params = match stark {
                    Some(r) => ModelParams::with_stark(chi, r),
                    None => ModelParams::kerr(chi),
                }
                .expect("grid parameters are valid");
                let k = cases.len() as f64;
                let times = [spread(2.0 * k), spread(2.0 * k + 1.0)];
                cases.push(GridCase {
                    field,
                    params,
                    times,
                });
            }
        }
    }
    match depth {
        Depth::Full => cases,
        Depth::Quick => cases.into_iter().step_by(QUICK_STRIDE).collect(),
    }
}

// Golden-ratio sequence folded into (0.25, 10).
fn spread(k: f64) -> f64 {
    let frac = (0.5 + k * 0.618_033_988_749_894_9).fract();
    0.25 + 9.75 * frac
}

#[derive(Debug, Default, Clone, Copy)]
struct Worst {
    rho_eg: f64,
    rho_ee: f64,
    concurrence: f64,
    closed_general: f64,
    sanity: f64,
    cutoff: f64,
}

impl Worst {
    fn merge(self, o: Worst) -> Worst {
        Worst {
            rho_eg: nan_max(self.rho_eg, o.rho_eg),
            rho_ee: nan_max(self.rho_ee, o.rho_ee),
            concurrence: nan_max(self.concurrence, o.concurrence),
            closed_general: nan_max(self.closed_general, o.closed_general),
            sanity: nan_max(self.sanity, o.sanity),
            cutoff: nan_max(self.cutoff, o.cutoff),
        }
    }
}

// Like f64::max but lets NaN win so a broken value cannot hide.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn entry_diff(a: &TwoQubitDensity, b: &TwoQubitDensity) -> f64 {
    (a.entries() - b.entries())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, nan_max)
}

fn sanity_deviation(rho: &TwoQubitDensity) -> f64 {
    let trace = (rho.trace() - 1.0).abs();
    let herm = rho.hermitian_deviation();
    let psd = (-rho.min_eigenvalue()).max(0.0);
    nan_max(nan_max(trace, herm), psd)
}

fn closed_concurrence(rho: &TwoQubitDensity) -> f64 {
    concurrence_closed(rho).map_or(f64::NAN, |c| c.concurrence)
}

fn general_concurrence(rho: &TwoQubitDensity) -> f64 {
    concurrence_general(rho).map_or(f64::NAN, |c| c.concurrence)
}

fn run_case(model: &dyn AmplitudeModel, case: &GridCase, depth: Depth) -> Worst {
    let mut worst = Worst::default();
    let fail = |w: &mut Worst| {
        w.rho_eg = f64::NAN;
        w.rho_ee = f64::NAN;
        w.concurrence = f64::NAN;
    };
    let (weights, space) = match (
        case.field.weights(),
        TruncatedHilbert::for_field(&case.field),
    ) {
        (Ok(w), Ok(s)) => (w, s),
        _ => {
            fail(&mut worst);
            return worst;
        }
    };
    let oracle = Oracle::new(space, &case.params);
    let wider = (depth == Depth::Full).then(|| {
        let top = weights.last().map_or(0, |&(n, _)| n);
        let field = case
            .field
            .with_truncation(Truncation::Explicit(top + CUTOFF_STEP));
        let space = TruncatedHilbert::new(space.n_max() + CUTOFF_STEP);
        (field.weights(), Oracle::new(space, &case.params))
    });

    for (seq, t) in [AtomSequence::ExcitedGround, AtomSequence::ExcitedExcited]
        .into_iter()
        .zip(case.times)
    {
        let analytic = reduced_state(model, seq, &weights, t, &case.params);
        let reference = match oracle.reduced_state(&weights, seq, t) {
            Ok(r) => r,
            Err(_) => {
                fail(&mut worst);
                continue;
            }
        };
        let diff = entry_diff(&analytic, &reference);
        match seq {
            AtomSequence::ExcitedGround => worst.rho_eg = nan_max(worst.rho_eg, diff),
            AtomSequence::ExcitedExcited => worst.rho_ee = nan_max(worst.rho_ee, diff),
        }
        let c_analytic = closed_concurrence(&analytic);
        let c_oracle = general_concurrence(&reference);
        worst.concurrence = nan_max(worst.concurrence, (c_analytic - c_oracle).abs());
        worst.closed_general = nan_max(
            worst.closed_general,
            (c_analytic - general_concurrence(&analytic)).abs(),
        );
        worst.sanity = nan_max(worst.sanity, sanity_deviation(&analytic));
        if !(0.0..=1.0).contains(&c_analytic) {
            worst.sanity = f64::NAN;
        }

        if let Some((wide_weights, wide_oracle)) = &wider {
            let delta = match wide_weights {
                Ok(ww) => {
                    let wide_analytic = reduced_state(model, seq, ww, t, &case.params);
                    let d_analytic = (closed_concurrence(&wide_analytic) - c_analytic).abs();
                    let d_oracle = wide_oracle
                        .reduced_state(&weights, seq, t)
                        .map_or(f64::NAN, |r| (general_concurrence(&r) - c_oracle).abs());
                    nan_max(d_analytic, d_oracle)
                }
                Err(_) => f64::NAN,
            };
            worst.cutoff = nan_max(worst.cutoff, delta);
        }
    }
    worst
}

/// Worst deviation of the branch norms from 1 for photon numbers up to 60.
fn normalization_worst(model: &dyn AmplitudeModel, depth: Depth) -> f64 {
    let times: Vec<f64> = match depth {
        Depth::Quick => (0..8).map(|k| spread(k as f64) * 2.0).collect(),
        Depth::Full => (0..64).map(|k| spread(k as f64) * 2.0).collect(),
    };
    grid(depth)
        .par_iter()
        .map(|case| {
            let mut worst = 0.0f64;
            for &t in &times {
                for n in 0..=60 {
                    let a = model.joint(n, t, &case.params);
                    worst = nan_max(worst, (a.excited.norm_sqr() - 1.0).abs());
                    worst = nan_max(worst, (a.ground.norm_sqr() - 1.0).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, nan_max)
}

/// Compare the closed-form model against the oracle on the default grid.
pub fn verify(depth: Depth) -> VerifyReport {
    verify_with(&ClosedForm, depth)
}

/// Same as [`verify`] for an arbitrary amplitude model.
pub fn verify_with(model: &dyn AmplitudeModel, depth: Depth) -> VerifyReport {
    let cases = grid(depth);
    let worst = cases
        .par_iter()
        .map(|case| run_case(model, case, depth))
        .reduce(Worst::default, Worst::merge);

    let mut checks = vec![
        CheckOutcome::new("rho_eg matches oracle", "rho_eg", worst.rho_eg, RHO_TOL),
        CheckOutcome::new("rho_ee matches oracle", "rho_ee", worst.rho_ee, RHO_TOL),
        CheckOutcome::new(
            "concurrence matches oracle",
            "concurrence_closed",
            worst.concurrence,
            CONCURRENCE_TOL,
        ),
        CheckOutcome::new(
            "closed-form concurrence matches general",
            "concurrence_general",
            worst.closed_general,
            CLOSED_GENERAL_TOL,
        ),
        CheckOutcome::new(
            "density matrices are physical",
            "reduced_state",
            worst.sanity,
            SANITY_TOL,
        ),
        CheckOutcome::new(
            "branch amplitudes are normalized",
            "joint_amplitudes",
            normalization_worst(model, depth),
            NORMALIZATION_TOL,
        ),
    ];
    if depth == Depth::Full {
        checks.push(CheckOutcome::new(
            "cutoff robustness",
            "sequential_pass",
            worst.cutoff,
            CUTOFF_TOL,
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport {
        depth,
        points: 2 * cases.len(),
        checks,
        passed,
    }
}
