//! Reduced two-atom density matrices and their entanglement.
//!
//! Matrices are stored in one of two orderings, matching the two atom
//! preparations:
//!
//! | index | [`Basis::Eg`] | [`Basis::Ee`] |
//! |-------|---------------|---------------|
//! | 0     | `|e, g⟩`      | `|e, e⟩`      |
//! | 1     | `|e, e⟩`      | `|e, g⟩`      |
//! | 2     | `|g, g⟩`      | `|g, e⟩`      |
//! | 3     | `|g, e⟩`      | `|g, g⟩`      |
//!
//! In both orderings the anti-diagonal pairs (0,3) and (1,2) are the ones an
//! X-state may populate, and the population sum reported alongside the
//! concurrence is `ρ[1][1] + ρ[2][2]`.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cascade::{AmplitudeModel, AtomSequence, ClosedForm};
use crate::field::{FieldError, FieldSpec};
use crate::params::ModelParams;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const X_SHAPE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace deviates from 1 by {0:e}")]
    Trace(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("matrix is not X-shaped (largest forbidden entry {0:e}); use the general concurrence")]
    NotXShaped(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Eg,
    Ee,
}

impl Basis {
    /// Position of each stored basis vector in the product ordering
    /// `|e,e⟩, |e,g⟩, |g,e⟩, |g,g⟩`.
    pub fn product_index(self) -> [usize; 4] {
        match self {
            Basis::Eg => [1, 0, 3, 2],
            Basis::Ee => [0, 1, 2, 3],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    entries: Matrix4<Complex64>,
    basis: Basis,
}

impl TwoQubitDensity {
    /// Wraps a matrix after checking it is a physical state.
    pub fn new(entries: Matrix4<Complex64>, basis: Basis) -> Result<Self, DensityError> {
        let rho = Self { entries, basis };
        rho.check_physical()?;
        Ok(rho)
    }

    pub fn new_unchecked(entries: Matrix4<Complex64>, basis: Basis) -> Self {
        Self { entries, basis }
    }

    pub fn entries(&self) -> &Matrix4<Complex64> {
        &self.entries
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.entries[(i, i)].re).sum()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let sym = self.hermitian_part();
        SymmetricEigen::new(sym).eigenvalues.min()
    }

    /// Largest entry outside the diagonal and the two anti-diagonal pairs.
    pub fn x_shape_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    worst = worst.max(self.entries[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn check_physical(&self) -> Result<(), DensityError> {
        let herm = self.hermitian_deviation();
        if herm > HERMITIAN_TOL {
            return Err(DensityError::NotHermitian(herm));
        }
        let trace = (self.trace() - 1.0).abs();
        if trace > TRACE_TOL {
            return Err(DensityError::Trace(trace));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(DensityError::NotPositive(min));
        }
        Ok(())
    }

    /// The same state in the product ordering `|ee⟩, |eg⟩, |ge⟩, |gg⟩`.
    pub fn to_product_basis(&self) -> Matrix4<Complex64> {
        let idx = self.basis.product_index();
        let mut out = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out[(idx[i], idx[j])] = self.entries[(i, j)];
            }
        }
        out
    }

    fn hermitian_part(&self) -> Matrix4<Complex64> {
        (self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub concurrence: f64,
    /// Square roots of the eigenvalues of `ρ ρ̃`, descending.
    pub sqrt_eigenvalues: [f64; 4],
    pub entanglement_of_formation: f64,
    pub population_sum: f64,
}

impl ConcurrenceResult {
    fn from_sqrt_eigenvalues(mut s: [f64; 4], population_sum: f64) -> Self {
        s.sort_by(|a, b| b.total_cmp(a));
        let concurrence = (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0);
        Self {
            concurrence,
            sqrt_eigenvalues: s,
            entanglement_of_formation: entanglement_of_formation(concurrence),
            population_sum,
        }
    }
}

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(z: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(z) + term(1.0 - z)
}

pub fn entanglement_of_formation(concurrence: f64) -> f64 {
    let c = concurrence.clamp(0.0, 1.0);
    binary_entropy(0.5 + 0.5 * (1.0 - c * c).sqrt())
}

pub fn population_sum(rho: &TwoQubitDensity) -> f64 {
    rho.get(1, 1).re + rho.get(2, 2).re
}

/// Concurrence of an X-shaped state from its entries.
///
/// A coherence `c` between two basis states with populations `a` and `d`
/// contributes the eigenvalue pair `(√(ad) ± |c|)²` to `ρ ρ̃`; the other
/// anti-diagonal contributes the second pair. Hence `C = 2 max(0, |ρ₀₃| - √(ρ₁₁ρ₂₂), |ρ₁₂| - √(ρ₀₀ρ₃₃))`.
pub fn concurrence_closed(rho: &TwoQubitDensity) -> Result<ConcurrenceResult, DensityError> {
    let dev = rho.x_shape_deviation();
    if dev > X_SHAPE_TOL {
        return Err(DensityError::NotXShaped(dev));
    }
    let pop = |i: usize| rho.get(i, i).re.max(0.0);
    let outer_geo = (pop(0) * pop(3)).sqrt();
    let inner_geo = (pop(1) * pop(2)).sqrt();
    let outer_coh = 0.5 * (rho.get(0, 3).norm() + rho.get(3, 0).norm());
    let inner_coh = 0.5 * (rho.get(1, 2).norm() + rho.get(2, 1).norm());
    let s = [
        outer_geo + outer_coh,
        (outer_geo - outer_coh).abs(),
        inner_geo + inner_coh,
        (inner_geo - inner_coh).abs(),
    ];
    Ok(ConcurrenceResult::from_sqrt_eigenvalues(
        s,
        population_sum(rho),
    ))
}

/// Spin-flipped state `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`, in the product ordering.
pub fn spin_flip(product: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let flip = sigma_yy();
    flip * product.conjugate() * flip
}

fn sigma_yy() -> Matrix4<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(1.0, 0.0);
    let m = Complex64::new(-1.0, 0.0);
    Matrix4::new(
        z, z, z, m, //
        z, z, p, z, //
        z, p, z, z, //
        m, z, z, z,
    )
}

/// Concurrence of an arbitrary two-qubit state.
///
/// The square roots of the eigenvalues of `ρ ρ̃` are obtained as the singular
/// values of `τ = Aᵀ (σ_y ⊗ σ_y) A`, where `ρ = A A†` comes from the Hermitian
/// eigendecomposition. This avoids taking square roots of eigenvalues that
/// are zero up to rounding, which would otherwise cost half the digits.
pub fn concurrence_general(rho: &TwoQubitDensity) -> Result<ConcurrenceResult, DensityError> {
    let herm = rho.hermitian_deviation();
    if herm > HERMITIAN_TOL {
        return Err(DensityError::NotHermitian(herm));
    }
    let product = rho.to_product_basis();
    let sym = (product + product.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let min = eig.eigenvalues.min();
    if min < -PSD_TOL {
        return Err(DensityError::NotPositive(min));
    }
    let mut factor = eig.eigenvectors;
    for (k, &w) in eig.eigenvalues.iter().enumerate() {
        let scale = Complex64::new(w.max(0.0).sqrt(), 0.0);
        for v in factor.column_mut(k).iter_mut() {
            *v *= scale;
        }
    }
    let tau = factor.transpose() * sigma_yy() * factor;
    let sv = tau.singular_values();
    let s = [sv[0], sv[1], sv[2], sv[3]];
    Ok(ConcurrenceResult::from_sqrt_eigenvalues(
        s,
        population_sum(rho),
    ))
}

/// Reduced state of the atom pair after both passes.
pub fn reduced_state(
    model: &dyn AmplitudeModel,
    seq: AtomSequence,
    weights: &[(usize, f64)],
    t: f64,
    p: &ModelParams,
) -> TwoQubitDensity {
    let mut diag = [0.0f64; 4];
    let mut coherence = Complex64::new(0.0, 0.0);
    for &(n, w) in weights {
        let a = model.joint(n, t, p);
        match seq {
            AtomSequence::ExcitedGround => {
                let g = a.ground;
                diag[0] += w * g.w.norm_sqr();
                diag[1] += w * g.x.norm_sqr();
                diag[2] += w * g.y.norm_sqr();
                diag[3] += w * g.z.norm_sqr();
                coherence += model.coherence_phase_eg(n, t, p) * g.w * g.z.conj() * w;
            }
            AtomSequence::ExcitedExcited => {
                let e = a.excited;
                diag[0] += w * e.h.norm_sqr();
                diag[1] += w * e.t.norm_sqr();
                diag[2] += w * e.j.norm_sqr();
                diag[3] += w * e.v.norm_sqr();
                coherence += model.coherence_phase_ee(n, t, p) * e.t * e.j.conj() * w;
            }
        }
    }
    let mut m = Matrix4::zeros();
    for (i, &d) in diag.iter().enumerate() {
        m[(i, i)] = Complex64::new(d, 0.0);
    }
    let (i, j) = match seq {
        AtomSequence::ExcitedGround => (0, 3),
        AtomSequence::ExcitedExcited => (1, 2),
    };
    m[(i, j)] = coherence;
    m[(j, i)] = coherence.conj();
    TwoQubitDensity::new_unchecked(m, seq.basis())
}

/// Atom pair state when the second atom enters in the ground state.
pub fn rho_eg(field: &FieldSpec, t: f64, p: &ModelParams) -> Result<TwoQubitDensity, FieldError> {
    Ok(reduced_state(
        &ClosedForm,
        AtomSequence::ExcitedGround,
        &field.weights()?,
        t,
        p,
    ))
}

/// Atom pair state when both atoms enter excited.
pub fn rho_ee(field: &FieldSpec, t: f64, p: &ModelParams) -> Result<TwoQubitDensity, FieldError> {
    Ok(reduced_state(
        &ClosedForm,
        AtomSequence::ExcitedExcited,
        &field.weights()?,
        t,
        p,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(values: [f64; 4], basis: Basis) -> TwoQubitDensity {
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            m[(i, i)] = c(values[i], 0.0);
        }
        TwoQubitDensity::new(m, basis).unwrap()
    }

    fn werner(p: f64) -> TwoQubitDensity {
        // Φ+ = (|ee⟩ + |gg⟩)/√2 in the product ordering.
        let mut m = Matrix4::identity() * c((1.0 - p) / 4.0, 0.0);
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] += c(p / 2.0, 0.0);
        }
        TwoQubitDensity::new(m, Basis::Ee).unwrap()
    }

    // Independent route: eigenvalues of the non-Hermitian ρ ρ̃ from a Schur
    // decomposition. Loses digits near zero, so only used at a loose tolerance.
    fn concurrence_via_schur(rho: &TwoQubitDensity) -> f64 {
        let prod = rho.to_product_basis();
        let r = prod * spin_flip(&prod);
        let (_, t) = r.schur().unpack();
        let mut s: Vec<f64> = (0..4).map(|i| t[(i, i)].re.max(0.0).sqrt()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        (s[0] - s[1] - s[2] - s[3]).max(0.0)
    }

    #[test]
    fn product_state_is_unentangled() {
        let rho = diag([1.0, 0.0, 0.0, 0.0], Basis::Eg);
        assert_eq!(concurrence_closed(&rho).unwrap().concurrence, 0.0);
        assert!(concurrence_general(&rho).unwrap().concurrence < 1e-15);
        assert_eq!(population_sum(&rho), 0.0);
    }

    #[test]
    fn bell_state_in_eg_ordering() {
        let mut m = Matrix4::zeros();
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = c(0.5, 0.0);
        }
        let rho = TwoQubitDensity::new(m, Basis::Eg).unwrap();
        assert!((concurrence_closed(&rho).unwrap().concurrence - 1.0).abs() < 1e-15);
        assert!((concurrence_general(&rho).unwrap().concurrence - 1.0).abs() < 1e-14);
        assert!((concurrence_closed(&rho).unwrap().entanglement_of_formation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed() {
        let rho = diag([0.25; 4], Basis::Ee);
        assert!(concurrence_general(&rho).unwrap().concurrence < 1e-15);
        assert_eq!(population_sum(&rho), 0.5);
    }

    #[test]
    fn werner_states() {
        assert!((concurrence_general(&werner(1.0)).unwrap().concurrence - 1.0).abs() < 1e-14);
        // (3p - 1) / 2 at p = 0.5
        let half = concurrence_general(&werner(0.5)).unwrap().concurrence;
        assert!((half - 0.25).abs() < 1e-14, "{half}");
        assert!((concurrence_closed(&werner(0.5)).unwrap().concurrence - 0.25).abs() < 1e-15);
        assert!((concurrence_via_schur(&werner(0.5)) - 0.25).abs() < 1e-7);
        assert_eq!(concurrence_general(&werner(0.2)).unwrap().concurrence, 0.0);
    }

    #[test]
    fn rejects_non_x_state_in_closed_form() {
        let mut m = Matrix4::identity() * c(0.25, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        m[(1, 0)] = c(0.1, 0.0);
        let rho = TwoQubitDensity::new(m, Basis::Eg).unwrap();
        assert!(matches!(
            concurrence_closed(&rho),
            Err(DensityError::NotXShaped(_))
        ));
        assert!(concurrence_general(&rho).is_ok());
    }

    #[test]
    fn rejects_unphysical_matrices() {
        let mut m = Matrix4::identity() * c(0.25, 0.0);
        m[(0, 3)] = c(0.5, 0.0);
        m[(3, 0)] = c(0.5, 0.0);
        assert!(matches!(
            TwoQubitDensity::new(m, Basis::Eg),
            Err(DensityError::NotPositive(_))
        ));
        assert!(matches!(
            concurrence_general(&TwoQubitDensity::new_unchecked(m, Basis::Eg)),
            Err(DensityError::NotPositive(_))
        ));
        let mut skew = Matrix4::identity() * c(0.25, 0.0);
        skew[(0, 3)] = c(0.0, 0.1);
        assert!(matches!(
            TwoQubitDensity::new(skew, Basis::Ee),
            Err(DensityError::NotHermitian(_))
        ));
        let heavy = Matrix4::identity() * c(0.3, 0.0);
        assert!(matches!(
            TwoQubitDensity::new(heavy, Basis::Ee),
            Err(DensityError::Trace(_))
        ));
    }

    #[test]
    fn entanglement_of_formation_endpoints_and_monotonicity() {
        assert_eq!(entanglement_of_formation(0.0), 0.0);
        assert!((entanglement_of_formation(1.0) - 1.0).abs() < 1e-15);
        let mut last = 0.0;
        for i in 1..=1000 {
            let e = entanglement_of_formation(i as f64 / 1000.0);
            assert!(e > last);
            last = e;
        }
    }

    #[test]
    fn vacuum_eg_state_has_real_coherence_and_empty_ee() {
        let p = ModelParams::kerr(0.0).unwrap();
        for i in 0..200 {
            let t = i as f64 * 0.05;
            let rho = rho_eg(&FieldSpec::fock(0), t, &p).unwrap();
            assert_eq!(rho.get(1, 1).re, 0.0);
            assert!(rho.get(0, 3).im.abs() < 1e-12);
            let closed = concurrence_closed(&rho).unwrap().concurrence;
            let reduced = 2.0 * (rho.get(0, 0).re * rho.get(3, 3).re).sqrt();
            assert!((closed - reduced).abs() < 1e-12);
        }
    }

    #[test]
    fn origin_states() {
        let p = ModelParams::with_stark(0.5, 0.3).unwrap();
        for field in [FieldSpec::fock(3), FieldSpec::thermal(1.0).unwrap()] {
            for rho in [
                rho_eg(&field, 0.0, &p).unwrap(),
                rho_ee(&field, 0.0, &p).unwrap(),
            ] {
                assert!((rho.get(0, 0).re - 1.0).abs() < 1e-9);
                assert_eq!(concurrence_closed(&rho).unwrap().concurrence, 0.0);
                assert_eq!(population_sum(&rho), 0.0);
            }
        }
    }

    #[test]
    fn frozen_excited_atoms_stay_excited() {
        let p = ModelParams::with_stark(0.0, 0.001).unwrap();
        for i in 0..500 {
            let t = i as f64 * 0.02;
            let ee = rho_ee(&FieldSpec::fock(2), t, &p).unwrap();
            assert!(ee.get(0, 0).re > 0.995);
            assert!(concurrence_closed(&ee).unwrap().concurrence < 1e-3);
            let eg = rho_eg(&FieldSpec::fock(2), t, &p).unwrap();
            assert!(eg.get(2, 2).re < 1e-4 && eg.get(3, 3).re < 1e-4);
            assert!(concurrence_closed(&eg).unwrap().concurrence < 1e-3);
        }
    }

    fn random_x_state(
        pops: [f64; 4],
        outer: (f64, f64),
        inner: (f64, f64),
        basis: Basis,
    ) -> TwoQubitDensity {
        let total: f64 = pops.iter().sum();
        let d: Vec<f64> = pops.iter().map(|x| x / total).collect();
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            m[(i, i)] = c(d[i], 0.0);
        }
        let outer_c = Complex64::from_polar(outer.0 * (d[0] * d[3]).sqrt(), outer.1);
        let inner_c = Complex64::from_polar(inner.0 * (d[1] * d[2]).sqrt(), inner.1);
        m[(0, 3)] = outer_c;
        m[(3, 0)] = outer_c.conj();
        m[(1, 2)] = inner_c;
        m[(2, 1)] = inner_c.conj();
        TwoQubitDensity::new_unchecked(m, basis)
    }

    proptest! {
        #[test]
        fn closed_and_general_agree_on_x_states(
            pops in prop::array::uniform4(0.0f64..1.0),
            outer in (0.0f64..=1.0, -3.2f64..3.2),
            inner in (0.0f64..=1.0, -3.2f64..3.2),
            ee in any::<bool>(),
        ) {
            prop_assume!(pops.iter().sum::<f64>() > 1e-3);
            let basis = if ee { Basis::Ee } else { Basis::Eg };
            let rho = random_x_state(pops, outer, inner, basis);
            let closed = concurrence_closed(&rho).unwrap();
            let general = concurrence_general(&rho).unwrap();
            prop_assert!((closed.concurrence - general.concurrence).abs() <= 1e-10);
            prop_assert!((0.0..=1.0).contains(&closed.concurrence));
            for k in 0..4 {
                prop_assert!((closed.sqrt_eigenvalues[k] - general.sqrt_eigenvalues[k]).abs() < 1e-10);
            }
            prop_assert!((concurrence_via_schur(&rho) - general.concurrence).abs() < 1e-6);
        }
    }
}
