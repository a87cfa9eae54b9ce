//! Brute-force reference: the interaction Hamiltonian on a truncated Fock
//! space, exact propagation by eigendecomposition, and an explicit partial
//! trace over the field.
//!
//! Nothing here uses the closed-form amplitudes, so agreement between the two
//! pipelines is a genuine check of both.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

use crate::cascade::AtomSequence;
use crate::density::TwoQubitDensity;
use crate::field::{FieldError, FieldSpec};
use crate::params::ModelParams;

/// Photons added above the highest initial photon number. Two passes can
/// deposit at most four photons; the rest is headroom for the boundary check.
pub const DEFAULT_MARGIN: usize = 6;
pub const NORM_TOL: f64 = 1e-10;
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("state norm drifted by {0:e} during evolution")]
    NormDrift(f64),
    #[error("population {population:e} reached the photon cutoff {n_max}; raise the cutoff")]
    InsufficientCutoff { n_max: usize, population: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    First,
    Second,
}

/// Atomic level of one atom. Index 0 is excited, 1 is ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Excited = 0,
    Ground = 1,
}

impl Level {
    fn from_bit(bit: usize) -> Self {
        if bit == 0 {
            Level::Excited
        } else {
            Level::Ground
        }
    }

    /// Eigenvalue of the inversion operator.
    pub fn inversion(self) -> i64 {
        match self {
            Level::Excited => 1,
            Level::Ground => -1,
        }
    }
}

/// Field ⊗ atom ⊗ atom with photon numbers `0..=n_max`. Ordering is
/// photon-major, then the first atom, then the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedHilbert {
    n_max: usize,
}

impl TruncatedHilbert {
    pub fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    /// Cutoff large enough for every component of `field`.
    pub fn for_field(field: &FieldSpec) -> Result<Self, FieldError> {
        Ok(Self::new(field.top_photon()? + DEFAULT_MARGIN))
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        4 * (self.n_max + 1)
    }

    pub fn index(&self, n: usize, first: Level, second: Level) -> usize {
        debug_assert!(n <= self.n_max);
        (n * 2 + first as usize) * 2 + second as usize
    }

    pub fn decompose(&self, index: usize) -> (usize, Level, Level) {
        (
            index / 4,
            Level::from_bit((index / 2) % 2),
            Level::from_bit(index % 2),
        )
    }

    pub fn basis_state(&self, n: usize, first: Level, second: Level) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[self.index(n, first, second)] = Complex64::new(1.0, 0.0);
        v
    }

    /// Conserved excitation number `n + S₃⁽¹⁾ + S₃⁽²⁾` of a basis index.
    pub fn excitation(&self, index: usize) -> i64 {
        let (n, a, b) = self.decompose(index);
        n as i64 + a.inversion() + b.inversion()
    }
}

/// Interaction Hamiltonian for one atom in the cavity, the other atom idle.
/// Real symmetric in the Fock/level basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    pub matrix: DMatrix<f64>,
}

pub fn build_h_int(space: &TruncatedHilbert, p: &ModelParams, which: Atom) -> HamiltonianMatrix {
    let dim = space.dim();
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let (n, first, second) = space.decompose(i);
        let active = match which {
            Atom::First => first,
            Atom::Second => second,
        };
        let nf = n as f64;
        let stark = match active {
            Level::Excited => nf * p.beta_excited(),
            Level::Ground => nf * p.beta_ground(),
        };
        h[(i, i)] = p.chi() * nf * (nf - 1.0) + stark;

        // a†² S₋ takes |n, e⟩ to |n+2, g⟩; nothing above the cutoff.
        if active == Level::Excited && n + 2 <= space.n_max() {
            let j = match which {
                Atom::First => space.index(n + 2, Level::Ground, second),
                Atom::Second => space.index(n + 2, first, Level::Ground),
            };
            let g = ((nf + 1.0) * (nf + 2.0)).sqrt();
            h[(i, j)] = g;
            h[(j, i)] = g;
        }
    }
    HamiltonianMatrix { matrix: h }
}

/// Eigendecomposition of a Hamiltonian, reusable for any evolution time.
///
/// The matrix is split into its connected components (states linked by
/// nonzero entries) and each one is diagonalized on its own. A single dense
/// solve over the whole space mixes the many exactly degenerate levels and
/// loses accuracy well above the tolerances the comparisons need.
#[derive(Debug, Clone)]
pub struct Propagator {
    dim: usize,
    blocks: Vec<EigenBlock>,
}

#[derive(Debug, Clone)]
struct EigenBlock {
    indices: Vec<usize>,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl Propagator {
    pub fn new(h: &HamiltonianMatrix) -> Self {
        let m = &h.matrix;
        let dim = m.nrows();
        let mut component = vec![usize::MAX; dim];
        let mut blocks = Vec::new();
        for start in 0..dim {
            if component[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut indices = vec![start];
            component[start] = id;
            let mut cursor = 0;
            while cursor < indices.len() {
                let i = indices[cursor];
                cursor += 1;
                for j in 0..dim {
                    if component[j] == usize::MAX && m[(i, j)] != 0.0 {
                        component[j] = id;
                        indices.push(j);
                    }
                }
            }
            indices.sort_unstable();
            let sub = DMatrix::from_fn(indices.len(), indices.len(), |a, b| {
                m[(indices[a], indices[b])]
            });
            let eig = SymmetricEigen::new(sub);
            blocks.push(EigenBlock {
                indices,
                energies: eig.eigenvalues,
                vectors: eig.eigenvectors,
            });
        }
        Self { dim, blocks }
    }

    /// `exp(-iHt) ψ`.
    pub fn evolve(
        &self,
        state: &DVector<Complex64>,
        t: f64,
    ) -> Result<DVector<Complex64>, OracleError> {
        assert_eq!(
            state.len(),
            self.dim,
            "state dimension does not match the Hamiltonian"
        );
        let before = state.norm();
        let mut out = DVector::<Complex64>::zeros(self.dim);
        for block in &self.blocks {
            let k = block.indices.len();
            let local = DVector::from_fn(k, |a, _| state[block.indices[a]]);
            let mut coeffs = DVector::<Complex64>::zeros(k);
            for col in 0..k {
                let mut c = Complex64::new(0.0, 0.0);
                for a in 0..k {
                    c += local[a] * block.vectors[(a, col)];
                }
                coeffs[col] = c * Complex64::from_polar(1.0, -block.energies[col] * t);
            }
            for a in 0..k {
                let mut v = Complex64::new(0.0, 0.0);
                for col in 0..k {
                    v += coeffs[col] * block.vectors[(a, col)];
                }
                out[block.indices[a]] = v;
            }
        }
        let drift = (out.norm() - before).abs().max((before - 1.0).abs());
        if drift > NORM_TOL {
            return Err(OracleError::NormDrift(drift));
        }
        Ok(out)
    }
}

pub fn evolve(
    state: &DVector<Complex64>,
    h: &HamiltonianMatrix,
    t: f64,
) -> Result<DVector<Complex64>, OracleError> {
    Propagator::new(h).evolve(state, t)
}

/// Both single-atom propagators for one parameter set and cutoff.
#[derive(Debug, Clone)]
pub struct Oracle {
    space: TruncatedHilbert,
    first: Propagator,
    second: Propagator,
}

impl Oracle {
    pub fn new(space: TruncatedHilbert, p: &ModelParams) -> Self {
        Self {
            space,
            first: Propagator::new(&build_h_int(&space, p, Atom::First)),
            second: Propagator::new(&build_h_int(&space, p, Atom::Second)),
        }
    }

    pub fn space(&self) -> &TruncatedHilbert {
        &self.space
    }

    /// Full tripartite state after both passes, starting from `|n⟩`.
    pub fn joint_state(
        &self,
        n: usize,
        seq: AtomSequence,
        t: f64,
    ) -> Result<DVector<Complex64>, OracleError> {
        let second = match seq {
            AtomSequence::ExcitedGround => Level::Ground,
            AtomSequence::ExcitedExcited => Level::Excited,
        };
        // The idle second atom does not act during the first pass, so it can
        // be adjoined up front.
        let psi = self.space.basis_state(n, Level::Excited, second);
        let psi = self.first.evolve(&psi, t)?;
        self.check_boundary(&psi)?;
        let psi = self.second.evolve(&psi, t)?;
        self.check_boundary(&psi)?;
        Ok(psi)
    }

    /// Field-traced atom-pair state, mixed incoherently over `weights`.
    pub fn reduced_state(
        &self,
        weights: &[(usize, f64)],
        seq: AtomSequence,
        t: f64,
    ) -> Result<TwoQubitDensity, OracleError> {
        let mut product = nalgebra::Matrix4::<Complex64>::zeros();
        for &(n, w) in weights {
            let psi = self.joint_state(n, seq, t)?;
            for photons in 0..=self.space.n_max() {
                let block = psi.rows(4 * photons, 4);
                for k in 0..4 {
                    for l in 0..4 {
                        product[(k, l)] += block[k] * block[l].conj() * w;
                    }
                }
            }
        }
        let idx = seq.basis().product_index();
        let mut m = nalgebra::Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = product[(idx[i], idx[j])];
            }
        }
        Ok(TwoQubitDensity::new_unchecked(m, seq.basis()))
    }

    fn check_boundary(&self, psi: &DVector<Complex64>) -> Result<(), OracleError> {
        let n_max = self.space.n_max();
        let lowest = n_max.saturating_sub(1);
        let population: f64 = (4 * lowest..self.space.dim())
            .map(|i| psi[i].norm_sqr())
            .sum();
        if population > BOUNDARY_TOL {
            return Err(OracleError::InsufficientCutoff { n_max, population });
        }
        Ok(())
    }
}

/// Reference atom-pair state for the given field and preparation.
pub fn sequential_pass(
    field: &FieldSpec,
    seq: AtomSequence,
    t: f64,
    p: &ModelParams,
) -> Result<TwoQubitDensity, OracleError> {
    let space = TruncatedHilbert::for_field(field)?;
    Oracle::new(space, p).reduced_state(&field.weights()?, seq, t)
}
