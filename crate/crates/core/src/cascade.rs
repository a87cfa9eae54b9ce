//! Two atoms crossing the cavity one after the other.
//!
//! The first atom always enters excited. The second enters either in the
//! ground state or excited. Both spend the same scaled time `t` in the cavity
//! and the field does not evolve between the two passes.
//!
//! For an initial Fock component `|n⟩` the tripartite state is a sum of four
//! product kets per branch. With the first atom's block phase factored out:
//!
//! ```text
//! second atom excited:
//!   e^{-iΛ_n t}     [ H_n     |n,   e, e⟩ + T_{n+2} |n+2, e, g⟩ ]
//!   e^{-iΛ_{n+2} t} [ J_{n+2} |n+2, g, e⟩ + V_{n+4} |n+4, g, g⟩ ]
//! second atom in the ground state:
//!   e^{-iΛ_{n-2} t} [ W_n     |n,   e, g⟩ + X_{n-2} |n-2, e, e⟩ ]
//!   e^{-iΛ_n t}     [ Y_{n+2} |n+2, g, g⟩ + Z_n     |n,   g, e⟩ ]
//! ```
//!
//! When `n < 2` the ground-branch pair `|n, e, g⟩` does not couple to
//! anything; its exact phase is folded into `W_n` and the corresponding
//! coherence phase is measured against the true block energy instead.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::Basis;
use crate::params::ModelParams;
use crate::single_pass::{amp_k, amp_r, block_energy, ground_survival_phase};

/// Preparation of the atom pair. The first atom is always excited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomSequence {
    /// Excited first atom followed by a ground-state atom.
    #[serde(rename = "eg")]
    ExcitedGround,
    /// Both atoms enter excited.
    #[serde(rename = "ee")]
    ExcitedExcited,
}

impl AtomSequence {
    pub fn basis(self) -> Basis {
        match self {
            AtomSequence::ExcitedGround => Basis::Eg,
            AtomSequence::ExcitedExcited => Basis::Ee,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AtomSequence::ExcitedGround => "eg",
            AtomSequence::ExcitedExcited => "ee",
        }
    }
}

impl std::str::FromStr for AtomSequence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eg" => Ok(AtomSequence::ExcitedGround),
            "ee" => Ok(AtomSequence::ExcitedExcited),
            other => Err(format!(
                "unknown atom sequence '{other}', expected 'eg' or 'ee'"
            )),
        }
    }
}

/// Amplitudes of the branch where the second atom enters excited.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitedBranch {
    /// H_n on `|n, e, e⟩`.
    pub h: Complex64,
    /// T_{n+2} on `|n+2, e, g⟩`.
    pub t: Complex64,
    /// J_{n+2} on `|n+2, g, e⟩`.
    pub j: Complex64,
    /// V_{n+4} on `|n+4, g, g⟩`.
    pub v: Complex64,
}

/// Amplitudes of the branch where the second atom enters in the ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundBranch {
    /// W_n on `|n, e, g⟩`.
    pub w: Complex64,
    /// X_{n-2} on `|n-2, e, e⟩`.
    pub x: Complex64,
    /// Y_{n+2} on `|n+2, g, g⟩`.
    pub y: Complex64,
    /// Z_n on `|n, g, e⟩`.
    pub z: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointAmplitudes {
    pub excited: ExcitedBranch,
    pub ground: GroundBranch,
}

impl ExcitedBranch {
    pub fn norm_sqr(&self) -> f64 {
        self.h.norm_sqr() + self.t.norm_sqr() + self.j.norm_sqr() + self.v.norm_sqr()
    }
}

impl GroundBranch {
    pub fn norm_sqr(&self) -> f64 {
        self.w.norm_sqr() + self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }
}

pub fn joint_amplitudes(n: usize, t: f64, p: &ModelParams) -> JointAmplitudes {
    let k_n = amp_k(n, t, p);
    let k_n2 = amp_k(n + 2, t, p);
    let r_n = amp_r(n, t, p);
    let r_n2 = amp_r(n + 2, t, p);
    let r_n4 = amp_r(n + 4, t, p);

    let excited = ExcitedBranch {
        h: k_n * k_n,
        t: k_n * r_n2,
        j: k_n2 * r_n2,
        v: r_n2 * r_n4,
    };

    let ground_survival = if n >= 2 {
        amp_k(n - 2, t, p).conj()
    } else {
        ground_survival_phase(n, t, p).expect("n < 2")
    };
    let ground = GroundBranch {
        w: k_n * ground_survival,
        x: k_n * r_n,
        y: k_n.conj() * r_n2,
        z: r_n2 * r_n2,
    };

    JointAmplitudes { excited, ground }
}

/// Relative phase multiplying `W_n Z_n*` in the `|e,g⟩⟨g,e|` coherence.
///
/// For `n ≥ 2` this is `exp(i[2χ(2n-1) + (r²+1)/r] t)`, the difference of the
/// two block phases. For `n < 2` the `|e,g⟩` side carries no block phase, so
/// only the energy of the block the first atom left behind remains.
pub fn phase_factor_eg(n: usize, t: f64, p: &ModelParams) -> Complex64 {
    let rate = if n >= 2 {
        let nf = n as f64;
        2.0 * p.chi() * (2.0 * nf - 1.0) + stark_pair_shift(p)
    } else {
        block_energy(n, p)
    };
    Complex64::from_polar(1.0, rate * t)
}

/// Relative phase multiplying `T_{n+2} J_{n+2}*` in the `|e,g⟩⟨g,e|`
/// coherence of the both-excited case: `exp(i[2χ(2n+3) + (r²+1)/r] t)`.
pub fn phase_factor_ee(n: usize, t: f64, p: &ModelParams) -> Complex64 {
    let nf = n as f64;
    let rate = 2.0 * p.chi() * (2.0 * nf + 3.0) + stark_pair_shift(p);
    Complex64::from_polar(1.0, rate * t)
}

// (r² + 1) / r = β₁ + β₂
fn stark_pair_shift(p: &ModelParams) -> f64 {
    p.beta_ground() + p.beta_excited()
}

/// Source of per-photon-number amplitudes and coherence phases used to
/// assemble reduced density matrices. [`ClosedForm`] is the real thing; other
/// implementations exist to exercise the verification machinery.
pub trait AmplitudeModel: Sync {
    fn joint(&self, n: usize, t: f64, p: &ModelParams) -> JointAmplitudes {
        joint_amplitudes(n, t, p)
    }

    fn coherence_phase_eg(&self, n: usize, t: f64, p: &ModelParams) -> Complex64 {
        phase_factor_eg(n, t, p)
    }

    fn coherence_phase_ee(&self, n: usize, t: f64, p: &ModelParams) -> Complex64 {
        phase_factor_ee(n, t, p)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl AmplitudeModel for ClosedForm {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn origin_leaves_atoms_untouched() {
        let p = ModelParams::with_stark(0.7, 0.4).unwrap();
        for n in 0..8 {
            let a = joint_amplitudes(n, 0.0, &p);
            assert_eq!(a.excited.h, c(1.0, 0.0));
            assert_eq!(a.excited.t + a.excited.j + a.excited.v, c(0.0, 0.0));
            assert_eq!(a.ground.w, c(1.0, 0.0));
            assert_eq!(a.ground.x + a.ground.y + a.ground.z, c(0.0, 0.0));
        }
    }

    #[test]
    fn vacuum_ground_branch_by_hand() {
        let p = ModelParams::kerr(0.0).unwrap();
        for &t in &[0.3, 1.0, 2.2, 7.5] {
            let a = joint_amplitudes(0, t, &p).ground;
            let s = (SQRT_2 * t).sin();
            assert!((a.w - c((SQRT_2 * t).cos(), 0.0)).norm() < 1e-15);
            assert!((a.z - c(-s * s, 0.0)).norm() < 1e-15);
            assert_eq!(a.x, c(0.0, 0.0));
        }
    }

    #[test]
    fn single_photon_ground_branch_uses_survival_phase() {
        let p = ModelParams::with_stark(0.3, 0.5).unwrap();
        let t = 1.7;
        let a = joint_amplitudes(1, t, &p).ground;
        assert_eq!(a.x, c(0.0, 0.0));
        let expected = amp_k(1, t, &p) * ground_survival_phase(1, t, &p).unwrap();
        assert!((a.w - expected).norm() < 1e-15);
    }

    #[test]
    fn single_pass_consistency() {
        let p = ModelParams::with_stark(0.2, 1.3).unwrap();
        for n in 0..10 {
            let a = joint_amplitudes(n, 2.4, &p).excited;
            let k = amp_k(n, 2.4, &p);
            assert!((a.h - k * k).norm() < 1e-15);
            assert!((a.v - amp_r(n + 2, 2.4, &p) * amp_r(n + 4, 2.4, &p)).norm() < 1e-15);
        }
    }

    #[test]
    fn phase_factor_examples() {
        let p = ModelParams::with_stark(0.4, 0.8).unwrap();
        for n in 0..5 {
            assert_eq!(phase_factor_eg(n, 0.0, &p), c(1.0, 0.0));
            assert_eq!(phase_factor_ee(n, 0.0, &p), c(1.0, 0.0));
        }
        let bare = ModelParams::kerr(0.0).unwrap();
        for n in 0..5 {
            assert_eq!(phase_factor_eg(n, 3.1, &bare), c(1.0, 0.0));
            assert_eq!(phase_factor_ee(n, 3.1, &bare), c(1.0, 0.0));
        }
        // exp(i * 2 * 0.5 * 3 * 1)
        let half = ModelParams::kerr(0.5).unwrap();
        assert!((phase_factor_ee(0, 1.0, &half) - Complex64::from_polar(1.0, 3.0)).norm() < 1e-15);
        // n = 2, chi = 1: exp(i * 2 * 3 * pi) = 1
        let one = ModelParams::kerr(1.0).unwrap();
        assert!((phase_factor_eg(2, PI, &one) - c(1.0, 0.0)).norm() < 1e-14);
        // n = 0 carries the vacuum block energy chi: exp(i * pi) = -1
        assert!((phase_factor_eg(0, PI, &one) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn parse_sequence() {
        assert_eq!(
            "eg".parse::<AtomSequence>().unwrap(),
            AtomSequence::ExcitedGround
        );
        assert_eq!(
            " EE ".parse::<AtomSequence>().unwrap(),
            AtomSequence::ExcitedExcited
        );
        assert!("ge".parse::<AtomSequence>().is_err());
    }

    proptest! {
        #[test]
        fn branches_are_normalized(
            n in 0usize..=60,
            chi in 0.0f64..3.0,
            r in 0.001f64..3.0,
            stark in any::<bool>(),
            t in 0.0f64..20.0,
        ) {
            let p = ModelParams::new(chi, r, stark).unwrap();
            let a = joint_amplitudes(n, t, &p);
            prop_assert!((a.excited.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((a.ground.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((phase_factor_eg(n, t, &p).norm() - 1.0).abs() < 1e-15);
            prop_assert!((phase_factor_ee(n, t, &p).norm() - 1.0).abs() < 1e-15);
        }
    }
}
