use micromaser::cascade::phase_factor_eg;
use micromaser::{verify, verify_with, AmplitudeModel, Depth, JointAmplitudes, ModelParams};
use num_complex::Complex64;

/// Flips the sign of the doubly-emitted ground-branch amplitude.
struct FlippedZ;

impl AmplitudeModel for FlippedZ {
    fn joint(&self, n: usize, t: f64, p: &ModelParams) -> JointAmplitudes {
        let mut a = micromaser::joint_amplitudes(n, t, p);
        a.ground.z = -a.ground.z;
        a
    }
}

/// Coherence phase `exp(-i[2χ(2n-1) + (r²+1)/(2r)] t)` for every n.
struct NegatedHalfStarkPhase;

impl AmplitudeModel for NegatedHalfStarkPhase {
    fn coherence_phase_eg(&self, n: usize, t: f64, p: &ModelParams) -> Complex64 {
        let stark = if p.stark_enabled() {
            (p.r() * p.r() + 1.0) / (2.0 * p.r())
        } else {
            0.0
        };
        let rate = 2.0 * p.chi() * (2.0 * n as f64 - 1.0) + stark;
        Complex64::from_polar(1.0, -rate * t)
    }
}

/// Correct phase but only for n >= 2; the low sectors use the n >= 2 formula.
struct UniformPhase;

impl AmplitudeModel for UniformPhase {
    fn coherence_phase_eg(&self, n: usize, t: f64, p: &ModelParams) -> Complex64 {
        phase_factor_eg(n.max(2), t, p)
            * Complex64::from_polar(1.0, -4.0 * p.chi() * (n.max(2) - n) as f64 * t)
    }
}

#[test]
fn full_grid_agrees_with_oracle() {
    let report = verify(Depth::Full);
    assert!(report.points >= 200);
    for check in &report.checks {
        println!(
            "{} ({}): worst {:e} / {:e}",
            check.name, check.operation, check.worst, check.tolerance
        );
    }
    assert!(report.passed, "{report:#?}");
    assert!(report.check("cutoff robustness").is_some());
}

#[test]
fn corrupted_amplitude_is_reported() {
    let report = verify_with(&FlippedZ, Depth::Quick);
    assert!(!report.passed);
    let ops: Vec<_> = report.failures().map(|c| c.operation.as_str()).collect();
    assert!(ops.contains(&"rho_eg"), "{ops:?}");
    assert!(!ops.contains(&"rho_ee"), "{ops:?}");
}

#[test]
fn negated_half_stark_phase_is_rejected() {
    let report = verify_with(&NegatedHalfStarkPhase, Depth::Quick);
    assert!(!report.passed);
    assert!(report.failures().any(|c| c.operation == "rho_eg"));
}

#[test]
fn low_photon_phase_matters() {
    let report = verify_with(&UniformPhase, Depth::Full);
    assert!(report.failures().any(|c| c.operation == "rho_eg"));
}

#[test]
fn report_serializes() {
    let report = verify(Depth::Quick);
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["depth"], "quick");
    assert_eq!(json["passed"], true);
    assert!(json["checks"][0]["worst"].is_number());
}
